//! The label automaton of an LCL and its path-flexible components.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_integer::Integer;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::problem::{
    restrict_rooted, ConfigSet, EdgeConfig, LabelId, LabelSet, PairSet,
    RootedProblem, UnrootedProblem,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum State {
    Label(LabelId),
    /// Ordered half-edge pair (x, y): x is the label on the side toward the
    /// parent, y the label on the side toward the child.
    Pair(LabelId, LabelId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    states: Vec<State>,
    adj: Vec<Vec<usize>>,
}

impl Automaton {
    fn from_states(states: Vec<State>, mut edge: impl FnMut(State, State) -> bool) -> Self {
        let adj = states
            .iter()
            .map(|&a| {
                (0..states.len())
                    .filter(|&j| edge(a, states[j]))
                    .collect::<Vec<_>>()
            })
            .collect();
        Automaton { states, adj }
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Successors of state `i`, ascending.
    pub fn successors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.adj[from].binary_search(&to).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn index_of(&self, state: State) -> Option<usize> {
        self.states.binary_search(&state).ok()
    }

    /// DOT text; `names` maps label ids to symbols.
    pub fn to_dot(&self, names: &[String]) -> String {
        let name = |s: State| match s {
            State::Label(l) => format!("L:{}", names[l]),
            State::Pair(x, y) => format!("P:{}|{}", names[x], names[y]),
        };
        let mut out = String::from("digraph automaton {\n");
        for &s in &self.states {
            let _ = writeln!(out, "  \"{}\";", name(s));
        }
        for (i, succ) in self.adj.iter().enumerate() {
            for &j in succ {
                let _ = writeln!(
                    out,
                    "  \"{}\" -> \"{}\";",
                    name(self.states[i]),
                    name(self.states[j])
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

/// States are the labels of `allowed`; σ → σ' iff some (σ, S) of the
/// restriction to `allowed` has σ' ∈ S.
pub fn build_automaton_rooted(p: &RootedProblem, allowed: LabelSet) -> Automaton {
    let r = restrict_rooted(p, allowed);
    let mut succ: BTreeMap<LabelId, LabelSet> = BTreeMap::new();
    for (parent, config) in r.constraints() {
        let e = succ.entry(*parent).or_default();
        *e = e.union(config.label_set());
    }
    let states = allowed.iter().map(State::Label).collect();
    Automaton::from_states(states, |a, b| match (a, b) {
        (State::Label(a), State::Label(b)) => succ.get(&a).is_some_and(|s| s.contains(b)),
        _ => false,
    })
}

/// States are ordered pairs (x, y) with {x, y} inside an allowed
/// configuration; (x1, x2) → (y1, y2) iff {x2, y1} ∈ ℰ.
pub fn build_automaton_unrooted(p: &UnrootedProblem, allowed: &ConfigSet) -> Automaton {
    let mut pairs = BTreeSet::new();
    for &i in allowed {
        for e in p.node_configs()[i].pairs() {
            let [x, y] = e.labels();
            pairs.insert(State::Pair(x, y));
            pairs.insert(State::Pair(y, x));
        }
    }
    Automaton::from_states(pairs.into_iter().collect(), |a, b| match (a, b) {
        (State::Pair(_, x2), State::Pair(y1, _)) => p.allows_edge(x2, y1),
        _ => false,
    })
}

/// Maximal strongly connected components, each sorted, listed by smallest
/// member.
pub fn strongly_connected_components(a: &Automaton) -> Vec<Vec<usize>> {
    let mut g = DiGraph::<(), ()>::with_capacity(a.len(), a.edge_count());
    let nodes: Vec<_> = (0..a.len()).map(|_| g.add_node(())).collect();
    for (i, succ) in a.adj.iter().enumerate() {
        for &j in succ {
            g.add_edge(nodes[i], nodes[j], ());
        }
    }
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            c.sort_unstable();
            c
        })
        .collect();
    comps.sort_unstable_by_key(|c| c[0]);
    comps
}

/// gcd of closed-walk lengths inside `comp`, or `None` without an internal
/// edge. Uses BFS levels: the period is the gcd of level(u) + 1 − level(v)
/// over internal edges (u, v).
pub fn component_period(a: &Automaton, comp: &[usize]) -> Option<usize> {
    let inside: BTreeSet<usize> = comp.iter().copied().collect();
    let start = *comp.first()?;
    let mut level: BTreeMap<usize, i64> = BTreeMap::new();
    level.insert(start, 0);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let lu = level[&u];
        for &v in &a.adj[u] {
            if inside.contains(&v) && !level.contains_key(&v) {
                level.insert(v, lu + 1);
                queue.push_back(v);
            }
        }
    }
    let mut g: Option<i64> = None;
    for &u in comp {
        for &v in &a.adj[u] {
            if !inside.contains(&v) {
                continue;
            }
            let (Some(lu), Some(lv)) = (level.get(&u), level.get(&v)) else {
                continue;
            };
            let diff = (lu + 1 - lv).abs();
            g = Some(g.map_or(diff, |x| x.gcd(&diff)));
        }
    }
    g.map(|x| x as usize).filter(|&x| x > 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlexComponent {
    /// State indices in the automaton the component was computed on.
    pub states: Vec<usize>,
    pub period: Option<usize>,
}

impl FlexComponent {
    pub fn flexible(&self) -> bool {
        self.period == Some(1)
    }
}

/// Every SCC with its period.
pub fn components_with_periods(a: &Automaton) -> Vec<FlexComponent> {
    strongly_connected_components(a)
        .into_iter()
        .map(|states| {
            let period = component_period(a, &states);
            FlexComponent { states, period }
        })
        .collect()
}

/// Label sets of the aperiodic SCCs of the automaton of the restriction to
/// `sigma_sub`, sorted.
pub fn flex_scc_rooted(p: &RootedProblem, sigma_sub: LabelSet) -> Vec<LabelSet> {
    let a = build_automaton_rooted(p, sigma_sub);
    let mut out: Vec<LabelSet> = components_with_periods(&a)
        .into_iter()
        .filter(FlexComponent::flexible)
        .map(|c| {
            c.states
                .iter()
                .map(|&i| match a.states[i] {
                    State::Label(l) => l,
                    State::Pair(..) => unreachable!(),
                })
                .collect()
        })
        .collect();
    out.sort_unstable_by_key(|s: &LabelSet| s.iter().collect::<Vec<_>>());
    out
}

/// Pair sets 𝒟 of the aperiodic SCCs of the automaton of `v_sub`, kept only
/// when the states lifted back from 𝒟 are exactly the component.
pub fn flex_scc_unrooted(p: &UnrootedProblem, v_sub: &ConfigSet) -> Vec<PairSet> {
    let a = build_automaton_unrooted(p, v_sub);
    let mut out = Vec::new();
    for c in components_with_periods(&a) {
        if !c.flexible() {
            continue;
        }
        let d: PairSet = c
            .states
            .iter()
            .map(|&i| match a.states[i] {
                State::Pair(x, y) => EdgeConfig::new(x, y),
                State::Label(_) => unreachable!(),
            })
            .collect();
        let lifted: Vec<usize> = (0..a.len())
            .filter(|&i| match a.states[i] {
                State::Pair(x, y) => d.contains(&EdgeConfig::new(x, y)),
                State::Label(_) => false,
            })
            .collect();
        if lifted == c.states {
            out.push(d);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Configuration;

    fn names(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    fn path_coloring(k: usize) -> RootedProblem {
        let labels = (0..k).map(|i| i.to_string()).collect();
        let mut cons = Vec::new();
        for a in 0..k {
            for b in 0..k {
                if a != b {
                    cons.push((a, Configuration::new(vec![b])));
                }
            }
        }
        RootedProblem::new(1, labels, cons).unwrap()
    }

    fn sinkless() -> UnrootedProblem {
        UnrootedProblem::new(
            3,
            names(&["I", "O"]),
            [
                Configuration::new(vec![0, 0, 1]),
                Configuration::new(vec![0, 1, 1]),
                Configuration::new(vec![1, 1, 1]),
            ],
            [EdgeConfig::new(0, 1)],
        )
        .unwrap()
    }

    #[test]
    fn rooted_automata() {
        let two = path_coloring(2);
        let a = build_automaton_rooted(&two, two.all_labels());
        assert_eq!(a.len(), 2);
        assert!(a.has_edge(0, 1) && a.has_edge(1, 0));
        assert!(!a.has_edge(0, 0));
        assert_eq!(component_period(&a, &[0, 1]), Some(2));
        assert!(flex_scc_rooted(&two, two.all_labels()).is_empty());

        let three = path_coloring(3);
        let a = build_automaton_rooted(&three, three.all_labels());
        assert_eq!(a.edge_count(), 6);
        assert_eq!(strongly_connected_components(&a), vec![vec![0, 1, 2]]);
        assert_eq!(component_period(&a, &[0, 1, 2]), Some(1));
        assert_eq!(
            flex_scc_rooted(&three, three.all_labels()),
            vec![three.all_labels()]
        );
    }

    #[test]
    fn single_label_self_loop() {
        let p = RootedProblem::new(2, names(&["a"]), [(0, Configuration::new(vec![0, 0]))])
            .unwrap();
        let a = build_automaton_rooted(&p, p.all_labels());
        assert!(a.has_edge(0, 0));
        assert_eq!(component_period(&a, &[0]), Some(1));
        assert_eq!(flex_scc_rooted(&p, p.all_labels()), vec![p.all_labels()]);
    }

    #[test]
    fn edgeless_singletons() {
        let p = RootedProblem::new(1, names(&["a", "b"]), []).unwrap();
        let a = build_automaton_rooted(&p, p.all_labels());
        assert_eq!(strongly_connected_components(&a), vec![vec![0], vec![1]]);
        assert_eq!(component_period(&a, &[0]), None);
    }

    #[test]
    fn sinkless_automaton() {
        let p = sinkless();
        let a = build_automaton_unrooted(&p, &p.all_configs());
        assert_eq!(a.len(), 4);
        // (x1,x2) -> (y1,y2) iff {x2,y1} = {I,O}
        for (i, &s) in a.states().iter().enumerate() {
            for (j, &t) in a.states().iter().enumerate() {
                let (State::Pair(_, x2), State::Pair(y1, _)) = (s, t) else {
                    unreachable!()
                };
                assert_eq!(a.has_edge(i, j), x2 != y1);
            }
        }
        let flex = flex_scc_unrooted(&p, &p.all_configs());
        assert_eq!(flex.len(), 1);
        assert_eq!(flex[0].len(), 3);
    }

    #[test]
    fn empty_unrooted_inputs() {
        let p = sinkless();
        assert!(build_automaton_unrooted(&p, &ConfigSet::new()).is_empty());
        assert!(flex_scc_unrooted(&p, &ConfigSet::new()).is_empty());
        let no_edges = UnrootedProblem::new(
            3,
            names(&["I", "O"]),
            p.node_configs().to_vec(),
            [],
        )
        .unwrap();
        let a = build_automaton_unrooted(&no_edges, &no_edges.all_configs());
        assert_eq!(a.len(), 4);
        assert_eq!(a.edge_count(), 0);
        assert!(flex_scc_unrooted(&no_edges, &no_edges.all_configs()).is_empty());
    }

    #[test]
    fn dot_names() {
        let p = sinkless();
        let dot = build_automaton_unrooted(&p, &p.all_configs()).to_dot(p.labels());
        assert!(dot.contains("\"P:I|O\" -> \"P:I|O\""));
        let two = path_coloring(2);
        let dot = build_automaton_rooted(&two, two.all_labels()).to_dot(two.labels());
        assert!(dot.contains("\"L:0\" -> \"L:1\""));
    }
}
