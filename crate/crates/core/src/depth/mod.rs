//! trim, the pruning constants β/γ, good sequences and the depth d_Π.

mod classify;

pub use classify::{classify, ClassReport, ClassifyError};

use crate::automaton::{flex_scc_rooted, flex_scc_unrooted};
use crate::problem::{
    all_edge_configs, restricted_configs, ConfigSet, LabelSet, PairSet, Problem, RootedProblem,
    UnrootedProblem,
};

/// Subset enumeration limit for [`pruning_constant`].
pub const DEFAULT_SUBSET_CAP: u64 = 1 << 16;

/// The chain R_0 = S ⊇ R_1 ⊇ … of labels that root a correctly labeled
/// complete Δ-ary tree of depth j with every label in S. The last entry is
/// the fixed point; the trace stops at the first repetition.
pub fn trim_trace_rooted(p: &RootedProblem, sigma_sub: LabelSet) -> Vec<LabelSet> {
    let mut trace = vec![sigma_sub];
    loop {
        let cur = *trace.last().unwrap();
        let next: LabelSet = p
            .constraints()
            .iter()
            .filter(|(parent, c)| cur.contains(*parent) && c.is_over(cur))
            .map(|(parent, _)| *parent)
            .collect();
        // labels outside sigma_sub never enter since cur ⊆ sigma_sub
        if next == cur {
            return trace;
        }
        trace.push(next);
    }
}

pub fn trim_rooted(p: &RootedProblem, sigma_sub: LabelSet) -> LabelSet {
    *trim_trace_rooted(p, sigma_sub).last().unwrap()
}

/// The chain E_0 ⊇ E_1 ⊇ … where E_h holds the labels x that can sit on a
/// half-edge toward a child whose subtree below has height h, with every
/// non-leaf node using a configuration of `d_sub`.
pub fn extendible_trace(p: &UnrootedProblem, d_sub: &ConfigSet) -> Vec<LabelSet> {
    let n = p.label_count();
    let e0: LabelSet = (0..n)
        .filter(|&x| (0..n).any(|y| p.allows_edge(x, y)))
        .collect();
    let mut trace = vec![e0];
    loop {
        let cur = *trace.last().unwrap();
        let mut next = LabelSet::EMPTY;
        for &i in d_sub {
            let c = &p.node_configs()[i];
            for y in c.distinct() {
                let rest = c.without(y).unwrap();
                if rest.is_over(cur) {
                    for x in 0..n {
                        if p.allows_edge(x, y) {
                            next.insert(x);
                        }
                    }
                }
            }
        }
        let next = next.intersection(cur);
        if next == cur {
            return trace;
        }
        trace.push(next);
    }
}

/// Configurations of `d_sub` that root T_i* for every i with all non-leaf
/// nodes using configurations of `d_sub`.
pub fn trim_unrooted(p: &UnrootedProblem, d_sub: &ConfigSet) -> ConfigSet {
    let ext = *extendible_trace(p, d_sub).last().unwrap();
    d_sub
        .iter()
        .copied()
        .filter(|&i| p.node_configs()[i].is_over(ext))
        .collect()
}

/// β for a rooted problem, γ for an unrooted one. Subsets are enumerated
/// exactly up to `subset_cap`; beyond it a safe upper bound is returned.
pub fn pruning_constant(p: &Problem) -> usize {
    pruning_constant_with_cap(p, DEFAULT_SUBSET_CAP)
}

pub fn pruning_constant_with_cap(p: &Problem, subset_cap: u64) -> usize {
    match p {
        Problem::Rooted(p) => beta(p, subset_cap),
        Problem::Unrooted(p) => gamma(p, subset_cap),
    }
}

fn subset_count(n: usize) -> Option<u64> {
    (n < 64).then(|| 1u64 << n)
}

fn beta(p: &RootedProblem, cap: u64) -> usize {
    let n = p.label_count();
    if subset_count(n).is_none_or(|c| c > cap) {
        return n.max(1);
    }
    p.all_labels()
        .subsets()
        .map(|s| trim_trace_rooted(p, s).len() - 1)
        .max()
        .unwrap_or(0)
        .max(1)
}

fn gamma(p: &UnrootedProblem, cap: u64) -> usize {
    let m = p.node_configs().len();
    let fallback = m.max(p.label_count() + 1);
    if subset_count(m).is_none_or(|c| c > cap) {
        return fallback;
    }
    let mut best = 1;
    for mask in 0..(1u64 << m) {
        let d: ConfigSet = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
        let trace = extendible_trace(p, &d);
        for &i in &d {
            let c = &p.node_configs()[i];
            // first h with C not over E_h means T*_{h+1} has no labeling
            if let Some(h) = trace.iter().position(|&e| !c.is_over(e)) {
                best = best.max(h + 1);
            }
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DepthValue {
    Zero,
    Finite(usize),
    Infinite,
}

impl DepthValue {
    pub fn as_text(self) -> String {
        match self {
            DepthValue::Zero => "0".into(),
            DepthValue::Finite(k) => k.to_string(),
            DepthValue::Infinite => "inf".into(),
        }
    }
}

/// Alternating trimmed sets and flexible components. A finite sequence of
/// length k has k trimmed sets and k−1 components; a sequence proving
/// d_Π = ∞ ends with a component equal to the one before it (or to the
/// starting set when there is only one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GoodSequence {
    Rooted {
        trimmed: Vec<LabelSet>,
        components: Vec<LabelSet>,
    },
    Unrooted {
        trimmed: Vec<ConfigSet>,
        components: Vec<PairSet>,
    },
}

impl GoodSequence {
    pub fn len(&self) -> usize {
        match self {
            GoodSequence::Rooted { trimmed, .. } => trimmed.len(),
            GoodSequence::Unrooted { trimmed, .. } => trimmed.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthResult {
    pub value: DepthValue,
    pub witness: GoodSequence,
}

pub fn depth(p: &Problem) -> DepthResult {
    match p {
        Problem::Rooted(p) => depth_rooted(p),
        Problem::Unrooted(p) => depth_unrooted(p),
    }
}

enum Search<T, C> {
    Infinite(Vec<T>, Vec<C>),
    Finite(Vec<T>, Vec<C>),
}

pub fn depth_rooted(p: &RootedProblem) -> DepthResult {
    fn go(
        p: &RootedProblem,
        prev: LabelSet,
        trimmed: &mut Vec<LabelSet>,
        comps: &mut Vec<LabelSet>,
    ) -> Search<LabelSet, LabelSet> {
        let r = trim_rooted(p, prev);
        if r.is_empty() {
            return Search::Finite(trimmed.clone(), comps.clone());
        }
        trimmed.push(r);
        let mut best = Search::Finite(trimmed.clone(), comps.clone());
        for c in flex_scc_rooted(p, r) {
            comps.push(c);
            let sub = if c == prev {
                Search::Infinite(trimmed.clone(), comps.clone())
            } else {
                debug_assert!(c.is_subset(prev) && c != prev);
                go(p, c, trimmed, comps)
            };
            comps.pop();
            match sub {
                Search::Infinite(..) => {
                    trimmed.pop();
                    return sub;
                }
                Search::Finite(ref t, _) => {
                    if let Search::Finite(ref bt, _) = best {
                        if t.len() > bt.len() {
                            best = sub;
                        }
                    }
                }
            }
        }
        trimmed.pop();
        best
    }
    let result = go(p, p.all_labels(), &mut Vec::new(), &mut Vec::new());
    let (value, trimmed, components) = match result {
        Search::Infinite(t, c) => (DepthValue::Infinite, t, c),
        Search::Finite(t, c) if t.is_empty() => (DepthValue::Zero, t, c),
        Search::Finite(t, c) => (DepthValue::Finite(t.len()), t, c),
    };
    DepthResult {
        value,
        witness: GoodSequence::Rooted {
            trimmed,
            components,
        },
    }
}

pub fn depth_unrooted(p: &UnrootedProblem) -> DepthResult {
    fn go(
        p: &UnrootedProblem,
        prev_v: &ConfigSet,
        prev_d: &PairSet,
        trimmed: &mut Vec<ConfigSet>,
        comps: &mut Vec<PairSet>,
    ) -> Search<ConfigSet, PairSet> {
        let v = trim_unrooted(p, &restricted_configs(p, prev_v, prev_d));
        if v.is_empty() {
            return Search::Finite(trimmed.clone(), comps.clone());
        }
        trimmed.push(v.clone());
        let mut best = Search::Finite(trimmed.clone(), comps.clone());
        for d in flex_scc_unrooted(p, &v) {
            comps.push(d.clone());
            let sub = if &d == prev_d {
                Search::Infinite(trimmed.clone(), comps.clone())
            } else {
                debug_assert!(d.is_subset(prev_d));
                go(p, &v, &d, trimmed, comps)
            };
            comps.pop();
            match sub {
                Search::Infinite(..) => {
                    trimmed.pop();
                    return sub;
                }
                Search::Finite(ref t, _) => {
                    if let Search::Finite(ref bt, _) = best {
                        if t.len() > bt.len() {
                            best = sub;
                        }
                    }
                }
            }
        }
        trimmed.pop();
        best
    }
    let all_pairs = all_edge_configs(p.label_count());
    let result = go(
        p,
        &p.all_configs(),
        &all_pairs,
        &mut Vec::new(),
        &mut Vec::new(),
    );
    let (value, trimmed, components) = match result {
        Search::Infinite(t, c) => (DepthValue::Infinite, t, c),
        Search::Finite(t, c) if t.is_empty() => (DepthValue::Zero, t, c),
        Search::Finite(t, c) => (DepthValue::Finite(t.len()), t, c),
    };
    DepthResult {
        value,
        witness: GoodSequence::Unrooted {
            trimmed,
            components,
        },
    }
}
