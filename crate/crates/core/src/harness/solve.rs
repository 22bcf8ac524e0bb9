//! Forest DP used by the offline oracle and the committing algorithms:
//! bottom-up feasible sets, then a top-down choice. Nodes may carry fixed
//! outputs and ports that lead outside the known part of the tree.

use crate::depth::{extendible_trace, trim_rooted};
use crate::instances::Tree;
use crate::problem::{Configuration, LabelId, LabelSet, Problem, RootedProblem, UnrootedProblem};

use super::check::Labeling;

/// A known fragment of a tree. `ports[v]` lists the neighbors of v in port
/// order over its true degree; `None` marks a neighbor outside the fragment.
/// Rooted fragments also name the parent port.
#[derive(Clone, Debug, Default)]
pub struct Fragment {
    pub ports: Vec<Vec<Option<usize>>>,
    /// Rooted only: port of the real parent, if the node has one.
    pub parent_port: Vec<Option<usize>>,
    pub fixed: Vec<Option<Vec<LabelId>>>,
}

impl Fragment {
    pub fn from_tree(g: &Tree) -> Fragment {
        let n = g.len();
        let ports = (0..n).map(|v| g.neighbors(v).map(Some).collect()).collect();
        let parent_port = (0..n)
            .map(|v| if g.is_rooted() { g.parent(v).and_then(|p| g.port(v, p)) } else { None })
            .collect();
        Fragment {
            ports,
            parent_port,
            fixed: vec![None; n],
        }
    }

    pub fn len(&self) -> usize {
        self.ports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ports.is_empty()
    }
}

/// Labels safe to assume on a port leading outside the fragment.
#[derive(Clone, Copy, Debug)]
pub struct FreeSets {
    pub rooted: LabelSet,
    pub half_edge: LabelSet,
}

impl FreeSets {
    pub fn of(p: &Problem) -> FreeSets {
        match p {
            Problem::Rooted(rp) => FreeSets {
                rooted: trim_rooted(rp, rp.all_labels()),
                half_edge: LabelSet::EMPTY,
            },
            Problem::Unrooted(up) => FreeSets {
                rooted: LabelSet::EMPTY,
                half_edge: *extendible_trace(up, &up.all_configs()).last().unwrap(),
            },
        }
    }
}

/// Per node outputs: one label (rooted) or one label per port (unrooted).
pub type Outputs = Vec<Vec<LabelId>>;

/// Solves the fragment; `None` when some component has no solution.
pub fn solve_fragment(f: &Fragment, p: &Problem, free: FreeSets) -> Option<Outputs> {
    match p {
        Problem::Rooted(rp) => solve_rooted(f, rp, free.rooted),
        Problem::Unrooted(up) => solve_unrooted(f, up, free.half_edge),
    }
}

/// Post-order of each component, roots chosen as the smallest id (or the
/// topmost node for rooted fragments). Returns (order, tree parent).
fn orient(f: &Fragment, rooted: bool) -> (Vec<usize>, Vec<Option<usize>>) {
    let n = f.len();
    let mut up = vec![None; n];
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let starts: Vec<usize> = if rooted {
        (0..n)
            .filter(|&v| f.parent_port[v].and_then(|pp| f.ports[v][pp]).is_none())
            .collect()
    } else {
        (0..n).collect()
    };
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for w in f.ports[v].iter().flatten() {
                if !seen[*w] {
                    seen[*w] = true;
                    up[*w] = Some(v);
                    stack.push(*w);
                }
            }
        }
        order.extend(comp.into_iter().rev());
    }
    (order, up)
}

fn solve_rooted(f: &Fragment, p: &RootedProblem, free: LabelSet) -> Option<Outputs> {
    let n = f.len();
    let (order, up) = orient(f, true);
    let delta = p.delta();
    let children = |v: usize| -> Vec<Option<usize>> {
        f.ports[v]
            .iter()
            .enumerate()
            .filter(|&(i, _)| Some(i) != f.parent_port[v])
            .map(|(_, w)| *w)
            .collect()
    };
    let slots = |v: usize, feas: &[LabelSet]| -> Vec<LabelSet> {
        children(v)
            .iter()
            .map(|c| c.map_or(free, |c| feas[c]))
            .collect()
    };
    let mut feas = vec![LabelSet::EMPTY; n];
    for &v in &order {
        let ch = children(v);
        let mut allowed = match &f.fixed[v] {
            Some(l) => LabelSet::singleton(l[0]),
            None => p.all_labels(),
        };
        if ch.len() == delta {
            let s = slots(v, &feas);
            allowed = allowed
                .iter()
                .filter(|&x| {
                    p.configurations_of(x)
                        .any(|c| crate::problem::match_multiset(c.labels(), &s).is_some())
                })
                .collect();
        } else if ch.iter().flatten().any(|&c| feas[c].is_empty()) {
            allowed = LabelSet::EMPTY;
        }
        if allowed.is_empty() {
            return None;
        }
        feas[v] = allowed;
    }
    let mut label = vec![usize::MAX; n];
    for &v in order.iter().rev() {
        if up[v].is_none() {
            label[v] = feas[v].iter().next().unwrap();
        }
        let ch = children(v);
        if ch.len() == delta {
            let s = slots(v, &feas);
            let pick = p
                .configurations_of(label[v])
                .find_map(|c| crate::problem::match_multiset(c.labels(), &s))
                .expect("feasible label has a matching configuration");
            for (c, l) in ch.iter().zip(pick) {
                if let Some(c) = c {
                    label[*c] = l;
                }
            }
        } else {
            for c in ch.iter().flatten() {
                label[*c] = feas[*c].iter().next().unwrap();
            }
        }
    }
    Some(label.into_iter().map(|l| vec![l]).collect())
}

fn solve_unrooted(f: &Fragment, p: &UnrootedProblem, free: LabelSet) -> Option<Outputs> {
    let n = f.len();
    let k = p.label_count();
    let all = LabelSet::full(k);
    let (order, up) = orient(f, false);
    let parent_port = |v: usize| up[v].and_then(|u| f.ports[v].iter().position(|&w| w == Some(u)));
    // labels a neighbor may put opposite a half-edge set
    let partners = |s: LabelSet| -> LabelSet {
        (0..k).filter(|&z| s.iter().any(|w| p.allows_edge(z, w))).collect()
    };
    // feas[v]: labels v can put on its half-edge toward its tree parent
    let mut feas = vec![LabelSet::EMPTY; n];
    let mut slot_sets: Vec<Vec<LabelSet>> = vec![Vec::new(); n];
    for &v in &order {
        let pp = parent_port(v);
        let slots: Vec<LabelSet> = f.ports[v]
            .iter()
            .enumerate()
            .map(|(i, w)| match w {
                _ if Some(i) == pp => all,
                Some(c) => partners(feas[*c]),
                None => free,
            })
            .collect();
        let constrained = f.ports[v].len() == p.delta();
        let ok = |labels: &[LabelId]| -> bool {
            labels.iter().zip(&slots).enumerate().all(|(i, (l, s))| Some(i) == pp || s.contains(*l))
                && (!constrained || p.allows_node(&Configuration::new(labels.to_vec())))
        };
        let set: LabelSet = match &f.fixed[v] {
            Some(labels) => {
                if ok(labels) {
                    match pp {
                        Some(pp) => LabelSet::singleton(labels[pp]),
                        None => all,
                    }
                } else {
                    LabelSet::EMPTY
                }
            }
            None if constrained => match pp {
                Some(pp) => (0..k)
                    .filter(|&x| {
                        let mut s = slots.clone();
                        s[pp] = LabelSet::singleton(x);
                        p.node_configs()
                            .iter()
                            .any(|c| crate::problem::match_multiset(c.labels(), &s).is_some())
                    })
                    .collect(),
                None => {
                    if p.node_configs()
                        .iter()
                        .any(|c| crate::problem::match_multiset(c.labels(), &slots).is_some())
                    {
                        all
                    } else {
                        LabelSet::EMPTY
                    }
                }
            },
            None => {
                if slots.iter().all(|s| !s.is_empty()) {
                    all
                } else {
                    LabelSet::EMPTY
                }
            }
        };
        if set.is_empty() {
            return None;
        }
        feas[v] = set;
        slot_sets[v] = slots;
    }
    let mut out: Outputs = vec![Vec::new(); n];
    // chosen label on each node's half-edge toward its tree parent
    let mut toward = vec![usize::MAX; n];
    for &v in order.iter().rev() {
        let pp = parent_port(v);
        let mut slots = slot_sets[v].clone();
        if let Some(pp) = pp {
            slots[pp] = LabelSet::singleton(toward[v]);
        }
        let labels = match &f.fixed[v] {
            Some(l) => l.clone(),
            None if f.ports[v].len() == p.delta() => p
                .node_configs()
                .iter()
                .find_map(|c| crate::problem::match_multiset(c.labels(), &slots))
                .expect("feasible node has a matching configuration"),
            None => slots.iter().map(|s| s.iter().next().unwrap()).collect(),
        };
        for (i, w) in f.ports[v].iter().enumerate() {
            if let Some(c) = *w {
                if Some(i) != pp {
                    toward[c] = feas[c]
                        .iter()
                        .find(|&x| p.allows_edge(labels[i], x))
                        .expect("partner label exists");
                }
            }
        }
        out[v] = labels;
    }
    Some(out)
}

/// Full labeling of `g`, or `None` when Π has no solution on it.
pub fn solve_offline(g: &Tree, p: &Problem) -> Option<Labeling> {
    let f = Fragment::from_tree(g);
    let out = solve_fragment(&f, p, FreeSets::of(p))?;
    Some(outputs_to_labeling(g, p, &out))
}

pub(crate) fn outputs_to_labeling(g: &Tree, p: &Problem, out: &[Vec<LabelId>]) -> Labeling {
    match p {
        Problem::Rooted(_) => Labeling::Nodes(out.iter().map(|l| l.first().copied()).collect()),
        Problem::Unrooted(_) => {
            let mut half = vec![[None, None]; g.edges().len()];
            for v in 0..g.len() {
                for (port, &e) in g.incident(v).iter().enumerate() {
                    half[e][g.side(e, v)] = out[v].get(port).copied();
                }
            }
            Labeling::HalfEdges(half)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::check::check;
    use crate::instances::{build_lb_rooted, build_lb_unrooted, complete_tree, CompleteKind};
    use crate::problem::parse_problem;

    #[test]
    fn solves_and_refuses() {
        let three = parse_problem(
            r#"{"kind":"rooted","delta":2,"labels":["a","b","c"],"configurations":[
            {"parent":"a","children":["b","b"]},{"parent":"a","children":["c","c"]},{"parent":"a","children":["b","c"]},
            {"parent":"b","children":["a","a"]},{"parent":"b","children":["c","c"]},{"parent":"b","children":["a","c"]},
            {"parent":"c","children":["a","a"]},{"parent":"c","children":["b","b"]},{"parent":"c","children":["a","b"]}]}"#,
        )
        .unwrap();
        let g = build_lb_rooted(2, 1, 1, 1).unwrap();
        let l = solve_offline(&g, &three).unwrap();
        assert!(check(&g, &l, &three).pass());

        let empty = parse_problem(r#"{"kind":"rooted","delta":2,"labels":["a"],"configurations":[]}"#).unwrap();
        assert!(solve_offline(&g, &empty).is_none());
        let leaf = complete_tree(2, 0, CompleteKind::DeltaAry).unwrap();
        assert!(solve_offline(&leaf, &empty).is_some());
    }

    #[test]
    fn sinkless_orientation_on_lb_tree() {
        let p = parse_problem(
            r#"{"kind":"unrooted","delta":3,"labels":["I","O"],
            "node_configs":[["O","I","I"],["O","O","I"],["O","O","O"]],
            "edge_configs":[["I","O"]]}"#,
        )
        .unwrap();
        let g = build_lb_unrooted(3, 1, 1, 1).unwrap();
        let l = solve_offline(&g, &p).unwrap();
        assert!(check(&g, &l, &p).pass());
    }
}
