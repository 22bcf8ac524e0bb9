//! Sequential online-LOCAL runs: nodes are revealed in schedule order and
//! the algorithm sees the union of radius-T balls around revealed nodes.

use std::collections::hash_map::DefaultHasher;
use std::collections::VecDeque;
use std::fmt;
use std::hash::{Hash, Hasher};

use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use super::check::{check, Labeling, Verdict};
use super::solve::outputs_to_labeling;
use crate::instances::{Schedule, Tree};
use crate::problem::{LabelId, Problem};

/// Locality T: a fixed radius or full visibility (T = n).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Locality {
    Radius(usize),
    Full,
}

impl Locality {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            Locality::Radius(r) => r,
            Locality::Full => n,
        }
    }
}

impl std::str::FromStr for Locality {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "n" {
            return Ok(Locality::Full);
        }
        s.parse()
            .map(Locality::Radius)
            .map_err(|_| format!("locality must be an integer or `n`, got `{s}`"))
    }
}

impl fmt::Display for Locality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locality::Radius(r) => write!(f, "{r}"),
            Locality::Full => write!(f, "n"),
        }
    }
}

/// What the algorithm emits for the revealed node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Output {
    Node(LabelId),
    /// One label per port, in port order.
    HalfEdges(Vec<LabelId>),
}

impl Output {
    pub fn labels(&self) -> Vec<LabelId> {
        match self {
            Output::Node(l) => vec![*l],
            Output::HalfEdges(l) => l.clone(),
        }
    }
}

pub trait OnlineAlgorithm: Send {
    fn name(&self) -> &str;

    /// Called once per revealed node; the returned output is final.
    fn on_reveal(&mut self, view: &View<'_>, rng: &mut ChaCha8Rng) -> Output;
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RunError {
    #[error("schedule is not a permutation of the {0} nodes")]
    NotPermutation(usize),
    #[error("tree and problem disagree: {0}")]
    Mismatch(String),
    #[error("step {step}: invalid output for node {node}: {reason}")]
    InvalidOutput {
        step: usize,
        node: usize,
        reason: String,
    },
}

struct RunState<'g> {
    g: &'g Tree,
    radius: usize,
    /// global → local id
    local: Vec<usize>,
    global: Vec<usize>,
    revealed_at: Vec<Option<usize>>,
    outputs: Vec<Option<Output>>,
    /// Largest radius a node has been expanded with.
    expanded: Vec<Option<usize>>,
    current: usize,
    step: usize,
}

impl RunState<'_> {
    /// Adds B(v, radius) to the view; new nodes get the next local ids.
    fn reveal(&mut self, v: usize) -> Vec<usize> {
        let mut added = Vec::new();
        // with full visibility a node in view means its component is too
        if self.radius >= self.g.len() && self.local[v] != usize::MAX {
            return added;
        }
        let mut queue = VecDeque::from([(v, self.radius)]);
        while let Some((x, r)) = queue.pop_front() {
            if self.expanded[x].is_some_and(|b| b >= r) {
                continue;
            }
            self.expanded[x] = Some(r);
            if self.local[x] == usize::MAX {
                self.local[x] = self.global.len();
                self.global.push(x);
                self.revealed_at.push(None);
                self.outputs.push(None);
                added.push(self.local[x]);
            }
            if r > 0 {
                for w in self.g.neighbors(x) {
                    if !self.expanded[w].is_some_and(|b| b >= r - 1) {
                        queue.push_back((w, r - 1));
                    }
                }
            }
        }
        added
    }
}

/// The algorithm's window on the instance. Nodes are named by local ids in
/// discovery order; nothing outside the union of balls is reachable.
pub struct View<'a> {
    state: &'a RunState<'a>,
    rooted: bool,
}

impl View<'_> {
    pub fn n(&self) -> usize {
        self.state.g.len()
    }

    pub fn locality(&self) -> usize {
        self.state.radius
    }

    pub fn is_rooted(&self) -> bool {
        self.rooted
    }

    pub fn current(&self) -> usize {
        self.state.local[self.state.current]
    }

    /// Number of nodes in the view.
    pub fn len(&self) -> usize {
        self.state.global.len()
    }

    pub fn is_empty(&self) -> bool {
        self.state.global.is_empty()
    }

    /// Step index (0-based) of the current reveal.
    pub fn step(&self) -> usize {
        self.state.step
    }

    pub fn degree(&self, a: usize) -> usize {
        self.state.g.degree(self.state.global[a])
    }

    /// Neighbor in the view behind each port, over the true degree.
    pub fn ports(&self, a: usize) -> Vec<Option<usize>> {
        let s = self.state;
        s.g.neighbors(s.global[a])
            .map(|w| (s.local[w] != usize::MAX).then(|| s.local[w]))
            .collect()
    }

    pub fn neighbors(&self, a: usize) -> Vec<usize> {
        self.ports(a).into_iter().flatten().collect()
    }

    pub fn port_to(&self, a: usize, b: usize) -> Option<usize> {
        self.ports(a).iter().position(|&w| w == Some(b))
    }

    /// Rooted: port of the real parent, if there is one.
    pub fn parent_port(&self, a: usize) -> Option<usize> {
        let s = self.state;
        let v = s.global[a];
        if !self.rooted {
            return None;
        }
        s.g.parent(v).and_then(|p| s.g.port(v, p))
    }

    pub fn parent(&self, a: usize) -> Option<usize> {
        self.parent_port(a).and_then(|p| self.ports(a)[p])
    }

    /// Rooted: true number of children.
    pub fn child_count(&self, a: usize) -> usize {
        self.degree(a) - self.parent_port(a).map_or(0, |_| 1)
    }

    pub fn reveal_index(&self, a: usize) -> Option<usize> {
        self.state.revealed_at[a]
    }

    pub fn output(&self, a: usize) -> Option<&Output> {
        self.state.outputs[a].as_ref()
    }

    pub fn any_output(&self) -> bool {
        self.state.outputs.iter().any(Option::is_some)
    }
}

/// One finished run.
#[derive(Clone, Debug)]
pub struct RunTrace {
    pub schedule: Schedule,
    /// Hash of the view after each step, covering structure and outputs.
    pub fingerprints: Vec<u64>,
    /// View size after each step.
    pub view_sizes: Vec<usize>,
    pub labeling: Labeling,
    pub verdict: Verdict,
}

impl RunTrace {
    pub fn to_json(&self, names: &[String], max_nodes: usize) -> Value {
        let big = self.schedule.order.len() > max_nodes;
        json!({
            "n": self.schedule.order.len(),
            "truncated": big,
            "order": if big { Value::Null } else { json!(self.schedule.order) },
            "fingerprints": if big { Value::Null } else { json!(self.fingerprints.iter().map(|f| format!("{f:016x}")).collect::<Vec<_>>()) },
            "labeling": if big { Value::Null } else { self.labeling.to_json(names) },
            "verdict": self.verdict.to_json(),
        })
    }
}

fn validate(o: &Output, g: &Tree, v: usize, p: &Problem, step: usize) -> Result<(), RunError> {
    let err = |reason: String| RunError::InvalidOutput { step, node: v, reason };
    let k = p.labels().len();
    match (o, p) {
        (Output::Node(l), Problem::Rooted(_)) => {
            if *l >= k {
                return Err(err(format!("label id {l} out of range")));
            }
        }
        (Output::HalfEdges(ls), Problem::Unrooted(_)) => {
            if ls.len() != g.degree(v) {
                return Err(err(format!("{} half-edge labels for degree {}", ls.len(), g.degree(v))));
            }
            if let Some(l) = ls.iter().find(|&&l| l >= k) {
                return Err(err(format!("label id {l} out of range")));
            }
        }
        _ => return Err(err("output kind does not match the problem".into())),
    }
    Ok(())
}

/// Runs `alg` on `g` in the order of `sched` with locality `locality`.
pub fn reveal_run(
    g: &Tree,
    p: &Problem,
    sched: &Schedule,
    alg: &mut dyn OnlineAlgorithm,
    locality: Locality,
    rng: &mut ChaCha8Rng,
) -> Result<RunTrace, RunError> {
    let n = g.len();
    if !sched.is_permutation(n) {
        return Err(RunError::NotPermutation(n));
    }
    if g.is_rooted() != p.is_rooted() {
        return Err(RunError::Mismatch("rooted problem needs a rooted tree and vice versa".into()));
    }
    let mut state = RunState {
        g,
        radius: locality.resolve(n),
        local: vec![usize::MAX; n],
        global: Vec::new(),
        revealed_at: Vec::new(),
        outputs: Vec::new(),
        expanded: vec![None; n],
        current: 0,
        step: 0,
    };
    let mut hasher = DefaultHasher::new();
    let mut fingerprints = Vec::with_capacity(n);
    let mut view_sizes = Vec::with_capacity(n);
    let mut out: Vec<Vec<LabelId>> = vec![Vec::new(); n];
    for (step, &v) in sched.order.iter().enumerate() {
        let added = state.reveal(v);
        state.current = v;
        state.step = step;
        let a = state.local[v];
        state.revealed_at[a] = Some(step);
        for &x in &added {
            let gx = state.global[x];
            x.hash(&mut hasher);
            g.degree(gx).hash(&mut hasher);
            for w in g.neighbors(gx) {
                state.local[w].hash(&mut hasher);
            }
        }
        let view = View {
            state: &state,
            rooted: g.is_rooted(),
        };
        let o = alg.on_reveal(&view, rng);
        validate(&o, g, v, p, step)?;
        a.hash(&mut hasher);
        o.hash(&mut hasher);
        out[v] = o.labels();
        state.outputs[a] = Some(o);
        fingerprints.push(hasher.finish());
        view_sizes.push(state.global.len());
    }
    let labeling = outputs_to_labeling(g, p, &out);
    let verdict = check(g, &labeling, p);
    Ok(RunTrace {
        schedule: sched.clone(),
        fingerprints,
        view_sizes,
        labeling,
        verdict,
    })
}
