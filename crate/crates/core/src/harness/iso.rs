//! Checks that the radius-t views of the special nodes of each layer are
//! isomorphic, pairwise disjoint and unlabeled when they are revealed.

use std::collections::HashMap;

use super::run::RunTrace;
use crate::instances::Tree;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IsoReport {
    pub problems: Vec<String>,
}

impl IsoReport {
    pub fn pass(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Canonical string of the ball of radius `radius` around `u`, rooted at
/// `u`. Each node records its true degree and, on rooted trees, whether it
/// hangs below or above its neighbor toward `u`.
pub fn canonical_ball(g: &Tree, u: usize, radius: usize) -> String {
    fn go(g: &Tree, x: usize, from: Option<usize>, left: usize) -> String {
        let dir = match from {
            None => 'r',
            Some(_) if !g.is_rooted() => 'u',
            Some(y) if g.parent(x) == Some(y) => 'd',
            Some(_) => 'a',
        };
        let mut kids: Vec<String> = if left == 0 {
            Vec::new()
        } else {
            g.neighbors(x)
                .filter(|&w| Some(w) != from)
                .map(|w| go(g, w, Some(x), left - 1))
                .collect()
        };
        kids.sort_unstable();
        format!("({dir}{}{})", g.degree(x), kids.concat())
    }
    go(g, u, None, radius)
}

/// `u_nodes[i]` lists the special nodes of layer i.
pub fn assert_view_isomorphism(g: &Tree, trace: &RunTrace, u_nodes: &[Vec<usize>], radius: usize) -> IsoReport {
    let mut report = IsoReport::default();
    let pos = trace.schedule.positions();
    let mut owner: HashMap<usize, usize> = HashMap::new();
    for layer in u_nodes {
        let mut forms = layer.iter().map(|&u| (u, canonical_ball(g, u, radius)));
        if let Some((first, form)) = forms.next() {
            for (u, other) in forms {
                if other != form {
                    report
                        .problems
                        .push(format!("views of {first} and {u} are not isomorphic"));
                }
            }
        }
        for &u in layer {
            for x in g.ball(u, radius) {
                if pos[x] < pos[u] {
                    report
                        .problems
                        .push(format!("node {x} near {u} was revealed before it"));
                }
                if let Some(prev) = owner.insert(x, u) {
                    if prev != u {
                        report
                            .problems
                            .push(format!("views of {prev} and {u} share node {x}"));
                    }
                }
            }
        }
    }
    report
}
