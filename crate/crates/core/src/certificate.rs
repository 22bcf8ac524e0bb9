//! Coprime certificates for O(log* n) solvability of rooted problems.
//!
//! The search is an exact dynamic program over leaf labelings: for a fixed
//! leaf labeling L of the complete Δ-ary tree of depth h, let F(L) be the set
//! of root labels admitting a correct labeling. The sets reachable as F(L)
//! with leaves drawn from Σ_T are built level by level, keeping one witness
//! per set, and a certificate exists at depth d exactly when some reachable
//! set contains all of Σ_T.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use serde_json::{json, Value};

use crate::problem::{match_multiset, Configuration, LabelId, LabelSet, RootedProblem};

/// A labeled rooted tree; leaves have no children.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledTree {
    pub label: LabelId,
    pub children: Vec<LabeledTree>,
}

impl LabeledTree {
    pub fn leaf(label: LabelId) -> Self {
        LabeledTree {
            label,
            children: Vec::new(),
        }
    }

    /// Leaf labels in depth-first order, children in index order.
    pub fn leaf_labels(&self) -> Vec<LabelId> {
        let mut out = Vec::new();
        fn walk(t: &LabeledTree, out: &mut Vec<LabelId>) {
            if t.children.is_empty() {
                out.push(t.label);
            }
            for c in &t.children {
                walk(c, out);
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn to_json(&self, names: &[String]) -> Value {
        let mut arr = vec![Value::String(names[self.label].clone())];
        arr.extend(self.children.iter().map(|c| c.to_json(names)));
        Value::Array(arr)
    }

    pub fn from_json(v: &Value, p: &RootedProblem) -> Result<Self, String> {
        let arr = v.as_array().ok_or("tree node must be an array")?;
        let name = arr
            .first()
            .and_then(Value::as_str)
            .ok_or("tree node must start with a label")?;
        let label = p
            .label_id(name)
            .ok_or_else(|| format!("unknown label `{name}`"))?;
        let children = arr[1..]
            .iter()
            .map(|c| LabeledTree::from_json(c, p))
            .collect::<Result<_, _>>()?;
        Ok(LabeledTree { label, children })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub sigma_t: Vec<LabelId>,
    pub d1: usize,
    pub d2: usize,
    pub trees1: Vec<LabeledTree>,
    pub trees2: Vec<LabeledTree>,
}

impl Certificate {
    pub fn leaf_pattern1(&self) -> Option<Vec<LabelId>> {
        self.trees1.first().map(LabeledTree::leaf_labels)
    }

    pub fn leaf_pattern2(&self) -> Option<Vec<LabelId>> {
        self.trees2.first().map(LabeledTree::leaf_labels)
    }

    pub fn to_json(&self, p: &RootedProblem) -> Value {
        let names = p.labels();
        json!({
            "sigma_t": self.sigma_t.iter().map(|&l| names[l].clone()).collect::<Vec<_>>(),
            "d1": self.d1,
            "d2": self.d2,
            "trees1": self.trees1.iter().map(|t| t.to_json(names)).collect::<Vec<_>>(),
            "trees2": self.trees2.iter().map(|t| t.to_json(names)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, p: &RootedProblem) -> Result<Self, String> {
        let field = |k: &str| v.get(k).ok_or_else(|| format!("missing field `{k}`"));
        let sigma_t = field("sigma_t")?
            .as_array()
            .ok_or("sigma_t must be an array")?
            .iter()
            .map(|s| {
                let name = s.as_str().ok_or("labels must be strings")?;
                p.label_id(name)
                    .ok_or_else(|| format!("unknown label `{name}`"))
            })
            .collect::<Result<_, String>>()?;
        let depth = |k: &str| {
            field(k)?
                .as_u64()
                .map(|d| d as usize)
                .ok_or_else(|| format!("{k} must be a non-negative integer"))
        };
        let trees = |k: &str| -> Result<Vec<LabeledTree>, String> {
            field(k)?
                .as_array()
                .ok_or_else(|| format!("{k} must be an array"))?
                .iter()
                .map(|t| LabeledTree::from_json(t, p))
                .collect()
        };
        Ok(Certificate {
            sigma_t,
            d1: depth("d1")?,
            d2: depth("d2")?,
            trees1: trees("trees1")?,
            trees2: trees("trees2")?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Condition 1.
    NotCoprime { d1: usize, d2: usize },
    /// Condition 2: wrong arity or depth, or depth below one.
    Structure { sequence: usize, tree: usize, detail: String },
    /// Condition 3.
    Constraint { sequence: usize, tree: usize, path: Vec<usize> },
    /// Condition 4: leaf pattern differs from the first tree of the sequence.
    LeafMismatch { sequence: usize, tree: usize },
    /// Condition 4: leaf label outside Σ_T.
    LeafOutsideSigmaT { sequence: usize, tree: usize, leaf: usize },
    /// Condition 5, or a tree count different from |Σ_T|.
    Root { sequence: usize, tree: usize, detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotCoprime { d1, d2 } => write!(f, "depths {d1} and {d2} are not coprime"),
            Violation::Structure { sequence, tree, detail } => {
                write!(f, "sequence {sequence} tree {tree}: {detail}")
            }
            Violation::Constraint { sequence, tree, path } => write!(
                f,
                "sequence {sequence} tree {tree}: node at child path {path:?} violates the constraints"
            ),
            Violation::LeafMismatch { sequence, tree } => {
                write!(f, "sequence {sequence} tree {tree}: leaf labels differ from tree 0")
            }
            Violation::LeafOutsideSigmaT { sequence, tree, leaf } => write!(
                f,
                "sequence {sequence} tree {tree}: leaf {leaf} has a label outside sigma_t"
            ),
            Violation::Root { sequence, tree, detail } => {
                write!(f, "sequence {sequence} tree {tree}: {detail}")
            }
        }
    }
}

/// Checks the five conditions; an empty list means the certificate is valid.
pub fn verify_certificate(p: &RootedProblem, c: &Certificate) -> Vec<Violation> {
    let mut out = Vec::new();
    if c.d1 == 0 || c.d2 == 0 || c.d1.gcd(&c.d2) != 1 {
        out.push(Violation::NotCoprime { d1: c.d1, d2: c.d2 });
    }
    let sigma_t: LabelSet = c.sigma_t.iter().copied().collect();
    for (s, (trees, d)) in [(&c.trees1, c.d1), (&c.trees2, c.d2)].into_iter().enumerate() {
        let sequence = s + 1;
        if trees.len() != c.sigma_t.len() {
            out.push(Violation::Root {
                sequence,
                tree: trees.len(),
                detail: format!(
                    "expected {} trees, found {}",
                    c.sigma_t.len(),
                    trees.len()
                ),
            });
        }
        let mut first_leaves: Option<Vec<LabelId>> = None;
        for (i, t) in trees.iter().enumerate() {
            if d == 0 {
                out.push(Violation::Structure {
                    sequence,
                    tree: i,
                    detail: "depth must be at least 1".into(),
                });
            }
            if let Some(detail) = structure_error(t, p.delta(), d) {
                out.push(Violation::Structure {
                    sequence,
                    tree: i,
                    detail,
                });
                continue;
            }
            let mut path = Vec::new();
            if let Some(bad) = first_constraint_violation(p, t, &mut path) {
                out.push(Violation::Constraint {
                    sequence,
                    tree: i,
                    path: bad,
                });
            }
            let leaves = t.leaf_labels();
            for (j, &l) in leaves.iter().enumerate() {
                if !sigma_t.contains(l) {
                    out.push(Violation::LeafOutsideSigmaT {
                        sequence,
                        tree: i,
                        leaf: j,
                    });
                    break;
                }
            }
            match &first_leaves {
                None => first_leaves = Some(leaves),
                Some(f) if *f != leaves => out.push(Violation::LeafMismatch { sequence, tree: i }),
                Some(_) => {}
            }
            if let Some(&want) = c.sigma_t.get(i) {
                if t.label != want {
                    out.push(Violation::Root {
                        sequence,
                        tree: i,
                        detail: format!("root label {} but sigma_{} is {}", t.label, i + 1, want),
                    });
                }
            }
        }
    }
    out
}

fn structure_error(t: &LabeledTree, delta: usize, depth: usize) -> Option<String> {
    if depth == 0 {
        return (!t.children.is_empty()).then(|| "node below the required depth".to_string());
    }
    if t.children.len() != delta {
        return Some(format!(
            "internal node has {} children, expected {delta}",
            t.children.len()
        ));
    }
    t.children
        .iter()
        .find_map(|c| structure_error(c, delta, depth - 1))
}

fn first_constraint_violation(
    p: &RootedProblem,
    t: &LabeledTree,
    path: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if t.children.is_empty() {
        return None;
    }
    let config = Configuration::new(t.children.iter().map(|c| c.label).collect());
    if !p.allows(t.label, &config) {
        return Some(path.clone());
    }
    for (i, c) in t.children.iter().enumerate() {
        path.push(i);
        let r = first_constraint_violation(p, c, path);
        path.pop();
        if r.is_some() {
            return r;
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_depth: usize,
    /// Largest |Σ_T| tried; `None` means |Σ|.
    pub max_sigma: Option<usize>,
    /// Budget on set-combination steps.
    pub expansion_cap: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_depth: 6,
            max_sigma: None,
            expansion_cap: 10_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Certificate),
    NotFound { max_depth: usize, max_sigma: usize },
    BudgetExceeded { expansions: u64 },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            _ => None,
        }
    }
}

/// Reachable feasible-root sets at one depth, each with the indices of its
/// children's sets one level below (empty at depth 0).
struct Level {
    sets: Vec<LabelSet>,
    witness: Vec<Vec<usize>>,
}

struct Budget {
    used: u64,
    cap: u64,
}

impl Budget {
    fn spend(&mut self) -> bool {
        self.used += 1;
        self.used <= self.cap
    }
}

/// Root labels available above children with feasible sets `children`.
fn combine(p: &RootedProblem, children: &[LabelSet]) -> LabelSet {
    let mut out = LabelSet::EMPTY;
    for (parent, config) in p.constraints() {
        if !out.contains(*parent) && matchable(config.labels(), children) {
            out.insert(*parent);
        }
    }
    out
}

fn matchable(config: &[LabelId], children: &[LabelSet]) -> bool {
    match_multiset(config, children).is_some()
}

fn next_level(p: &RootedProblem, prev: &Level, budget: &mut Budget) -> Option<Level> {
    let delta = p.delta();
    let mut index: HashMap<LabelSet, usize> = HashMap::new();
    let mut level = Level {
        sets: Vec::new(),
        witness: Vec::new(),
    };
    // non-decreasing index tuples: children order does not affect the set
    let m = prev.sets.len();
    if m == 0 {
        return Some(level);
    }
    let mut idx = vec![0usize; delta];
    loop {
        if !budget.spend() {
            return None;
        }
        let children: Vec<LabelSet> = idx.iter().map(|&i| prev.sets[i]).collect();
        let f = combine(p, &children);
        if !f.is_empty() && !index.contains_key(&f) {
            index.insert(f, level.sets.len());
            level.sets.push(f);
            level.witness.push(idx.clone());
        }
        // advance to the next non-decreasing tuple
        let mut pos = delta;
        while pos > 0 && idx[pos - 1] == m - 1 {
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
        let v = idx[pos - 1] + 1;
        for x in &mut idx[pos - 1..] {
            *x = v;
        }
    }
    Some(level)
}

fn build_tree(p: &RootedProblem, levels: &[Level], depth: usize, set: usize, root: LabelId) -> LabeledTree {
    if depth == 0 {
        return LabeledTree::leaf(root);
    }
    let lvl = &levels[depth];
    let child_ids = &lvl.witness[set];
    let child_sets: Vec<LabelSet> = child_ids
        .iter()
        .map(|&i| levels[depth - 1].sets[i])
        .collect();
    let labels = p
        .configurations_of(root)
        .find_map(|c| match_multiset(c.labels(), &child_sets))
        .expect("witness set admits its root labels");
    LabeledTree {
        label: root,
        children: child_ids
            .iter()
            .zip(labels)
            .map(|(&i, l)| build_tree(p, levels, depth - 1, i, l))
            .collect(),
    }
}

/// Label subsets of `all` of size `k`, in lexicographic order of sorted ids.
fn subsets_of_size(all: usize, k: usize) -> Vec<Vec<LabelId>> {
    fn go(start: usize, all: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..all {
            cur.push(i);
            go(i + 1, all, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, all, k, &mut Vec::new(), &mut out);
    out
}

/// Looks for a certificate with |Σ_T| ascending, then d2 ascending, then d1
/// ascending with 2 ≤ d1 < d2 ≤ max_depth. Sound and deterministic; complete
/// only within the bounds.
pub fn search_certificate(p: &RootedProblem, bounds: SearchBounds) -> SearchOutcome {
    let max_sigma = bounds.max_sigma.unwrap_or(p.label_count()).min(p.label_count());
    let not_found = SearchOutcome::NotFound {
        max_depth: bounds.max_depth,
        max_sigma,
    };
    if p.constraints().is_empty() || bounds.max_depth < 3 {
        return not_found;
    }
    let mut budget = Budget {
        used: 0,
        cap: bounds.expansion_cap,
    };
    for size in 1..=max_sigma {
        for sigma_t in subsets_of_size(p.label_count(), size) {
            let target: LabelSet = sigma_t.iter().copied().collect();
            let mut levels = vec![Level {
                sets: sigma_t.iter().map(|&l| LabelSet::singleton(l)).collect(),
                witness: vec![Vec::new(); sigma_t.len()],
            }];
            // first reachable set covering Σ_T at each depth
            let mut cover: Vec<Option<usize>> = vec![None];
            for _ in 1..=bounds.max_depth {
                let Some(next) = next_level(p, levels.last().unwrap(), &mut budget) else {
                    return SearchOutcome::BudgetExceeded {
                        expansions: budget.used,
                    };
                };
                cover.push(next.sets.iter().position(|s| target.is_subset(*s)));
                let empty = next.sets.is_empty();
                levels.push(next);
                if empty {
                    break;
                }
            }
            for d2 in 3..levels.len() {
                let Some(s2) = cover[d2] else { continue };
                for d1 in 2..d2 {
                    if d1.gcd(&d2) != 1 {
                        continue;
                    }
                    let Some(s1) = cover[d1] else { continue };
                    let trees = |d: usize, s: usize| -> Vec<LabeledTree> {
                        sigma_t
                            .iter()
                            .map(|&root| build_tree(p, &levels, d, s, root))
                            .collect()
                    };
                    let cert = Certificate {
                        sigma_t: sigma_t.clone(),
                        d1,
                        d2,
                        trees1: trees(d1, s1),
                        trees2: trees(d2, s2),
                    };
                    debug_assert!(verify_certificate(p, &cert).is_empty());
                    return SearchOutcome::Found(cert);
                }
            }
        }
    }
    not_found
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn single() -> RootedProblem {
        RootedProblem::new(2, vec!["a".into()], [(0, Configuration::new(vec![0, 0]))]).unwrap()
    }

    fn all_a(depth: usize) -> LabeledTree {
        if depth == 0 {
            LabeledTree::leaf(0)
        } else {
            LabeledTree {
                label: 0,
                children: vec![all_a(depth - 1), all_a(depth - 1)],
            }
        }
    }

    #[test]
    fn single_label_certificate() {
        let p = single();
        let c = Certificate {
            sigma_t: vec![0],
            d1: 2,
            d2: 3,
            trees1: vec![all_a(2)],
            trees2: vec![all_a(3)],
        };
        assert!(verify_certificate(&p, &c).is_empty());
        let bad = Certificate {
            d2: 4,
            trees2: vec![all_a(4)],
            ..c.clone()
        };
        assert_eq!(
            verify_certificate(&p, &bad),
            vec![Violation::NotCoprime { d1: 2, d2: 4 }]
        );
        let found = search_certificate(&p, SearchBounds::default());
        assert_eq!(found, SearchOutcome::Found(c));
    }

    #[test]
    fn malformed_trees_are_violations() {
        let p = single();
        let mut t = all_a(2);
        t.children.pop();
        let c = Certificate {
            sigma_t: vec![0],
            d1: 2,
            d2: 3,
            trees1: vec![t],
            trees2: vec![all_a(2)],
        };
        let v = verify_certificate(&p, &c);
        assert_eq!(v.len(), 2);
        assert!(v.iter().all(|x| matches!(x, Violation::Structure { .. })));
    }

    #[test]
    fn three_coloring_found_at_two_three() {
        let p = path_coloring(3);
        let SearchOutcome::Found(c) = search_certificate(&p, SearchBounds::default()) else {
            panic!("expected a certificate")
        };
        assert_eq!((c.d1, c.d2), (2, 3));
        assert!(verify_certificate(&p, &c).is_empty());
    }

    #[test]
    fn two_coloring_not_found() {
        let p = path_coloring(2);
        for max_depth in 2..=6 {
            let out = search_certificate(
                &p,
                SearchBounds {
                    max_depth,
                    ..SearchBounds::default()
                },
            );
            assert!(matches!(out, SearchOutcome::NotFound { .. }), "{out:?}");
        }
    }

    #[test]
    fn empty_constraints_not_found() {
        let p = RootedProblem::new(2, vec!["a".into()], []).unwrap();
        assert!(matches!(
            search_certificate(&p, SearchBounds::default()),
            SearchOutcome::NotFound { .. }
        ));
    }

    #[test]
    fn budget_is_reported() {
        let p = path_coloring(3);
        let out = search_certificate(
            &p,
            SearchBounds {
                expansion_cap: 2,
                ..SearchBounds::default()
            },
        );
        assert!(matches!(out, SearchOutcome::BudgetExceeded { .. }));
    }

    #[test]
    fn json_round_trip() {
        let p = path_coloring(3);
        let c = search_certificate(&p, SearchBounds::default())
            .certificate()
            .cloned()
            .unwrap();
        let v = c.to_json(&p);
        assert_eq!(Certificate::from_json(&v, &p).unwrap(), c);
    }

    #[test]
    fn matching_respects_multiplicity() {
        let a = LabelSet::singleton(0);
        let b = LabelSet::singleton(1);
        assert!(matchable(&[0, 1], &[b, a]));
        assert!(!matchable(&[0, 0], &[a, b]));
        assert_eq!(match_multiset(&[0, 1], &[b, a.union(b)]), Some(vec![1, 0]));
    }
}
