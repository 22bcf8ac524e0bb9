//! Shipped online algorithms.
//!
//! - `offline-oracle`: solves the visible component with the forest DP,
//!   respecting earlier outputs. With locality n it sees the whole
//!   component on the first reveal and never fails on solvable instances.
//! - `uniform-random`: independent uniform labels.
//! - `parity-victim`: commits to a fixed output whenever its component of
//!   the view holds no output yet, otherwise extends the fixed outputs with
//!   the DP. On the rooted lower-bound tree with 2-coloring the u-nodes all
//!   get the same label while their depths have independent random parity,
//!   so the final labeling fails unless all sampled distances agree.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::run::{OnlineAlgorithm, Output, View};
use super::solve::{solve_fragment, Fragment, FreeSets};
use crate::problem::{LabelId, Problem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgorithmKind {
    OfflineOracle,
    UniformRandom,
    ParityVictim,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 3] = [
        AlgorithmKind::OfflineOracle,
        AlgorithmKind::UniformRandom,
        AlgorithmKind::ParityVictim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::OfflineOracle => "offline-oracle",
            AlgorithmKind::UniformRandom => "uniform-random",
            AlgorithmKind::ParityVictim => "parity-victim",
        }
    }

    pub fn from_name(name: &str) -> Option<AlgorithmKind> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// A fresh instance with empty memory.
    pub fn build(self, p: Arc<Problem>, free: FreeSets) -> Box<dyn OnlineAlgorithm> {
        match self {
            AlgorithmKind::OfflineOracle => Box::new(DpSolver {
                p,
                free,
                commit_when_alone: false,
                cache: HashMap::new(),
            }),
            AlgorithmKind::ParityVictim => Box::new(DpSolver {
                p,
                free,
                commit_when_alone: true,
                cache: HashMap::new(),
            }),
            AlgorithmKind::UniformRandom => Box::new(UniformRandom { p }),
        }
    }
}

struct DpSolver {
    p: Arc<Problem>,
    free: FreeSets,
    commit_when_alone: bool,
    /// Planned outputs by local id, from the latest solves.
    cache: HashMap<usize, Vec<LabelId>>,
}

impl DpSolver {
    fn commitment(&self, view: &View<'_>) -> Output {
        let a = view.current();
        match &*self.p {
            Problem::Rooted(_) => Output::Node(0),
            Problem::Unrooted(up) => {
                let deg = view.degree(a);
                match up.node_configs().first() {
                    Some(c) if deg == up.delta() => Output::HalfEdges(c.labels().to_vec()),
                    _ => Output::HalfEdges(vec![0; deg]),
                }
            }
        }
    }

    fn wrap(&self, labels: Vec<LabelId>) -> Output {
        match &*self.p {
            Problem::Rooted(_) => Output::Node(labels[0]),
            Problem::Unrooted(_) => Output::HalfEdges(labels),
        }
    }
}

/// The component of the current node inside the view, as a fragment.
fn component(view: &View<'_>) -> (Vec<usize>, Fragment) {
    let start = view.current();
    let mut index = HashMap::from([(start, 0usize)]);
    let mut nodes = vec![start];
    let mut i = 0;
    while i < nodes.len() {
        for w in view.neighbors(nodes[i]) {
            if let Entry::Vacant(e) = index.entry(w) {
                e.insert(nodes.len());
                nodes.push(w);
            }
        }
        i += 1;
    }
    let f = Fragment {
        ports: nodes
            .iter()
            .map(|&a| view.ports(a).into_iter().map(|w| w.map(|w| index[&w])).collect())
            .collect(),
        parent_port: nodes.iter().map(|&a| view.parent_port(a)).collect(),
        fixed: nodes
            .iter()
            .map(|&a| view.output(a).map(Output::labels))
            .collect(),
    };
    (nodes, f)
}

impl OnlineAlgorithm for DpSolver {
    fn name(&self) -> &str {
        if self.commit_when_alone {
            AlgorithmKind::ParityVictim.name()
        } else {
            AlgorithmKind::OfflineOracle.name()
        }
    }

    fn on_reveal(&mut self, view: &View<'_>, _rng: &mut ChaCha8Rng) -> Output {
        let a = view.current();
        // a plan made under full visibility stays valid
        if !self.commit_when_alone && view.locality() >= view.n() {
            if let Some(l) = self.cache.get(&a) {
                return self.wrap(l.clone());
            }
        }
        let (nodes, f) = component(view);
        if self.commit_when_alone && f.fixed.iter().all(Option::is_none) {
            return self.commitment(view);
        }
        match solve_fragment(&f, &self.p, self.free) {
            Some(out) => {
                for (&node, labels) in nodes.iter().zip(out) {
                    self.cache.insert(node, labels);
                }
                self.wrap(self.cache[&a].clone())
            }
            // no consistent extension: any output will do
            None => self.commitment(view),
        }
    }
}

struct UniformRandom {
    p: Arc<Problem>,
}

impl OnlineAlgorithm for UniformRandom {
    fn name(&self) -> &str {
        AlgorithmKind::UniformRandom.name()
    }

    fn on_reveal(&mut self, view: &View<'_>, rng: &mut ChaCha8Rng) -> Output {
        let k = self.p.labels().len();
        match &*self.p {
            Problem::Rooted(_) => Output::Node(rng.random_range(0..k)),
            Problem::Unrooted(_) => {
                let deg = view.degree(view.current());
                Output::HalfEdges((0..deg).map(|_| rng.random_range(0..k)).collect())
            }
        }
    }
}
