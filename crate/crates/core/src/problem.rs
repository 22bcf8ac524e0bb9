//! LCL problem descriptions for regular rooted and unrooted trees.
//!
//! Labels are interned to dense ids in declaration order. Every multiset of
//! labels is stored sorted so equal configurations compare and hash equal.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Upper bound on |Σ|; label subsets are represented as 64-bit masks.
pub const MAX_LABELS: usize = 64;

pub type LabelId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProblemError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("configuration {found:?} has {} labels, expected {expected}", found.len())]
    Arity { expected: usize, found: Vec<String> },
    #[error("delta must be at least {min}, got {got}")]
    Delta { min: i64, got: i64 },
    #[error("label set is empty")]
    EmptyAlphabet,
    #[error("label name must be non-empty")]
    EmptyLabelName,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("too many labels: {0} (at most {MAX_LABELS} supported)")]
    TooManyLabels(usize),
    #[error("duplicate entry: {0}")]
    DuplicateEntry(String),
    #[error("label id {0} out of range")]
    LabelOutOfRange(LabelId),
}

/// A subset of Σ as a bit mask over label ids.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelSet(u64);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    pub fn full(size: usize) -> Self {
        debug_assert!(size <= MAX_LABELS);
        if size == MAX_LABELS {
            LabelSet(u64::MAX)
        } else {
            LabelSet((1u64 << size) - 1)
        }
    }

    pub fn from_bits(bits: u64) -> Self {
        LabelSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(id: LabelId) -> Self {
        LabelSet(1u64 << id)
    }

    pub fn contains(self, id: LabelId) -> bool {
        id < MAX_LABELS && self.0 >> id & 1 == 1
    }

    pub fn insert(&mut self, id: LabelId) {
        self.0 |= 1u64 << id;
    }

    pub fn remove(&mut self, id: LabelId) {
        self.0 &= !(1u64 << id);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: LabelSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: LabelSet) -> Self {
        LabelSet(self.0 | other.0)
    }

    pub fn intersection(self, other: LabelSet) -> Self {
        LabelSet(self.0 & other.0)
    }

    /// Member ids in ascending order.
    pub fn iter(self) -> impl Iterator<Item = LabelId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let id = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(id)
            }
        })
    }

    /// Every subset of `self`, in increasing order of the mask value.
    pub fn subsets(self) -> impl Iterator<Item = LabelSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(LabelSet(cur))
        })
    }
}

impl FromIterator<LabelId> for LabelSet {
    fn from_iter<I: IntoIterator<Item = LabelId>>(iter: I) -> Self {
        let mut set = LabelSet::EMPTY;
        for id in iter {
            set.insert(id);
        }
        set
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A multiset of labels, kept sorted by id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Configuration(Vec<LabelId>);

impl Configuration {
    pub fn new(mut labels: Vec<LabelId>) -> Self {
        labels.sort_unstable();
        Configuration(labels)
    }

    pub fn labels(&self) -> &[LabelId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn label_set(&self) -> LabelSet {
        self.0.iter().copied().collect()
    }

    /// True if every element of the multiset lies in `allowed`.
    pub fn is_over(&self, allowed: LabelSet) -> bool {
        self.0.iter().all(|&l| allowed.contains(l))
    }

    /// Distinct size-2 sub-multisets.
    pub fn pairs(&self) -> BTreeSet<EdgeConfig> {
        let mut out = BTreeSet::new();
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                out.insert(EdgeConfig::new(self.0[i], self.0[j]));
            }
        }
        out
    }

    /// Whether `{x, y}` is a sub-multiset.
    pub fn contains_pair(&self, x: LabelId, y: LabelId) -> bool {
        if x == y {
            self.0.iter().filter(|&&l| l == x).count() >= 2
        } else {
            self.0.contains(&x) && self.0.contains(&y)
        }
    }

    /// Removes one occurrence of `label`, if present.
    pub fn without(&self, label: LabelId) -> Option<Configuration> {
        let pos = self.0.iter().position(|&l| l == label)?;
        let mut rest = self.0.clone();
        rest.remove(pos);
        Some(Configuration(rest))
    }

    pub fn distinct(&self) -> impl Iterator<Item = LabelId> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(i, l)| *i == 0 || self.0[i - 1] != **l)
            .map(|(_, l)| *l)
    }
}

/// A multiset of exactly two labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeConfig([LabelId; 2]);

impl EdgeConfig {
    pub fn new(a: LabelId, b: LabelId) -> Self {
        if a <= b {
            EdgeConfig([a, b])
        } else {
            EdgeConfig([b, a])
        }
    }

    pub fn labels(self) -> [LabelId; 2] {
        self.0
    }

    pub fn contains(self, label: LabelId) -> bool {
        self.0[0] == label || self.0[1] == label
    }
}

/// Every size-2 multiset over `size` labels.
pub fn all_edge_configs(size: usize) -> BTreeSet<EdgeConfig> {
    let mut out = BTreeSet::new();
    for a in 0..size {
        for b in a..size {
            out.insert(EdgeConfig::new(a, b));
        }
    }
    out
}

fn check_labels(labels: &[String]) -> Result<(), ProblemError> {
    if labels.is_empty() {
        return Err(ProblemError::EmptyAlphabet);
    }
    if labels.len() > MAX_LABELS {
        return Err(ProblemError::TooManyLabels(labels.len()));
    }
    let mut seen = BTreeSet::new();
    for name in labels {
        if name.is_empty() {
            return Err(ProblemError::EmptyLabelName);
        }
        if !seen.insert(name.as_str()) {
            return Err(ProblemError::DuplicateLabel(name.clone()));
        }
    }
    Ok(())
}

/// Π = (Δ, Σ, 𝒱): node constraints pair a parent label with the multiset of
/// its Δ children. Leaves are unconstrained.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootedProblem {
    delta: usize,
    labels: Vec<String>,
    constraints: Vec<(LabelId, Configuration)>,
}

impl RootedProblem {
    /// Builds a problem in canonical form: constraints sorted by parent id,
    /// then configuration, with duplicates removed.
    pub fn new(
        delta: usize,
        labels: Vec<String>,
        constraints: impl IntoIterator<Item = (LabelId, Configuration)>,
    ) -> Result<Self, ProblemError> {
        if delta < 1 {
            return Err(ProblemError::Delta {
                min: 1,
                got: delta as i64,
            });
        }
        check_labels(&labels)?;
        let mut set = BTreeSet::new();
        for (parent, config) in constraints {
            if parent >= labels.len() {
                return Err(ProblemError::LabelOutOfRange(parent));
            }
            if let Some(&bad) = config.labels().iter().find(|&&l| l >= labels.len()) {
                return Err(ProblemError::LabelOutOfRange(bad));
            }
            if config.len() != delta {
                return Err(ProblemError::Arity {
                    expected: delta,
                    found: config.labels().iter().map(|l| l.to_string()).collect(),
                });
            }
            set.insert((parent, config));
        }
        Ok(RootedProblem {
            delta,
            labels,
            constraints: set.into_iter().collect(),
        })
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label_name(&self, id: LabelId) -> &str {
        &self.labels[id]
    }

    pub fn label_id(&self, name: &str) -> Option<LabelId> {
        self.labels.iter().position(|l| l == name)
    }

    pub fn all_labels(&self) -> LabelSet {
        LabelSet::full(self.labels.len())
    }

    pub fn constraints(&self) -> &[(LabelId, Configuration)] {
        &self.constraints
    }

    /// Configurations available below a node labeled `parent`.
    pub fn configurations_of(
        &self,
        parent: LabelId,
    ) -> impl Iterator<Item = &Configuration> + '_ {
        let start = self.constraints.partition_point(|(p, _)| *p < parent);
        self.constraints[start..]
            .iter()
            .take_while(move |(p, _)| *p == parent)
            .map(|(_, c)| c)
    }

    pub fn allows(&self, parent: LabelId, children: &Configuration) -> bool {
        self.constraints
            .binary_search_by(|(p, c)| (p, c).cmp(&(&parent, children)))
            .is_ok()
    }
}

/// Π = (Δ, Σ, 𝒱, ℰ) on half-edge labelings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnrootedProblem {
    delta: usize,
    labels: Vec<String>,
    node_configs: Vec<Configuration>,
    edge_configs: Vec<EdgeConfig>,
}

impl UnrootedProblem {
    pub fn new(
        delta: usize,
        labels: Vec<String>,
        node_configs: impl IntoIterator<Item = Configuration>,
        edge_configs: impl IntoIterator<Item = EdgeConfig>,
    ) -> Result<Self, ProblemError> {
        if delta < 2 {
            return Err(ProblemError::Delta {
                min: 2,
                got: delta as i64,
            });
        }
        check_labels(&labels)?;
        let n = labels.len();
        let mut nodes = BTreeSet::new();
        for config in node_configs {
            if let Some(&bad) = config.labels().iter().find(|&&l| l >= n) {
                return Err(ProblemError::LabelOutOfRange(bad));
            }
            if config.len() != delta {
                return Err(ProblemError::Arity {
                    expected: delta,
                    found: config.labels().iter().map(|l| l.to_string()).collect(),
                });
            }
            nodes.insert(config);
        }
        let mut edges = BTreeSet::new();
        for e in edge_configs {
            if let Some(&bad) = e.labels().iter().find(|&&l| l >= n) {
                return Err(ProblemError::LabelOutOfRange(bad));
            }
            edges.insert(e);
        }
        Ok(UnrootedProblem {
            delta,
            labels,
            node_configs: nodes.into_iter().collect(),
            edge_configs: edges.into_iter().collect(),
        })
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label_name(&self, id: LabelId) -> &str {
        &self.labels[id]
    }

    pub fn label_id(&self, name: &str) -> Option<LabelId> {
        self.labels.iter().position(|l| l == name)
    }

    pub fn node_configs(&self) -> &[Configuration] {
        &self.node_configs
    }

    pub fn edge_configs(&self) -> &[EdgeConfig] {
        &self.edge_configs
    }

    pub fn config_index(&self, config: &Configuration) -> Option<usize> {
        self.node_configs.binary_search(config).ok()
    }

    pub fn allows_node(&self, config: &Configuration) -> bool {
        self.node_configs.binary_search(config).is_ok()
    }

    pub fn allows_edge(&self, a: LabelId, b: LabelId) -> bool {
        self.edge_configs.binary_search(&EdgeConfig::new(a, b)).is_ok()
    }

    /// Every configuration index; the starting point of restriction chains.
    pub fn all_configs(&self) -> ConfigSet {
        (0..self.node_configs.len()).collect()
    }
}

/// A subset of an unrooted problem's node configurations, by index into
/// [`UnrootedProblem::node_configs`]. Indices stay valid across restrictions.
pub type ConfigSet = BTreeSet<usize>;

/// A set of size-2 label multisets (a restriction target 𝒟).
pub type PairSet = BTreeSet<EdgeConfig>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Problem {
    Rooted(RootedProblem),
    Unrooted(UnrootedProblem),
}

impl Problem {
    pub fn delta(&self) -> usize {
        match self {
            Problem::Rooted(p) => p.delta(),
            Problem::Unrooted(p) => p.delta(),
        }
    }

    pub fn labels(&self) -> &[String] {
        match self {
            Problem::Rooted(p) => p.labels(),
            Problem::Unrooted(p) => p.labels(),
        }
    }

    pub fn is_rooted(&self) -> bool {
        matches!(self, Problem::Rooted(_))
    }
}

/// Restriction to a label subset: keeps (σ, S) with σ and all of S inside
/// `allowed`. The label universe is left untouched.
pub fn restrict_rooted(p: &RootedProblem, allowed: LabelSet) -> RootedProblem {
    RootedProblem {
        delta: p.delta,
        labels: p.labels.clone(),
        constraints: p
            .constraints
            .iter()
            .filter(|(parent, c)| allowed.contains(*parent) && c.is_over(allowed))
            .cloned()
            .collect(),
    }
}

/// Indices of configurations in `within` whose every size-2 sub-multiset
/// lies in `pairs`.
pub fn restricted_configs(p: &UnrootedProblem, within: &ConfigSet, pairs: &PairSet) -> ConfigSet {
    within
        .iter()
        .copied()
        .filter(|&i| p.node_configs[i].pairs().iter().all(|e| pairs.contains(e)))
        .collect()
}

/// Restriction to a set of permitted pairs: the maximal subset of 𝒱 whose
/// configurations use only permitted pairs. Edge constraints are unchanged.
pub fn restrict_unrooted(p: &UnrootedProblem, pairs: &PairSet) -> UnrootedProblem {
    let keep = restricted_configs(p, &p.all_configs(), pairs);
    UnrootedProblem {
        delta: p.delta,
        labels: p.labels.clone(),
        node_configs: keep.into_iter().map(|i| p.node_configs[i].clone()).collect(),
        edge_configs: p.edge_configs.clone(),
    }
}

/// The same problem with node constraints limited to `configs`.
pub fn with_configs(p: &UnrootedProblem, configs: &ConfigSet) -> UnrootedProblem {
    UnrootedProblem {
        delta: p.delta,
        labels: p.labels.clone(),
        node_configs: configs.iter().map(|&i| p.node_configs[i].clone()).collect(),
        edge_configs: p.edge_configs.clone(),
    }
}

/// Assigns the elements of the multiset `config` bijectively to `slots`,
/// each element inside its slot's set. Returns the label per slot.
pub fn match_multiset(config: &[LabelId], slots: &[LabelSet]) -> Option<Vec<LabelId>> {
    fn go(config: &[LabelId], slots: &[LabelSet], used: &mut [bool], out: &mut Vec<LabelId>) -> bool {
        let j = out.len();
        if j == slots.len() {
            return true;
        }
        for k in 0..config.len() {
            if used[k] || !slots[j].contains(config[k]) {
                continue;
            }
            // equal labels are interchangeable
            if k > 0 && config[k - 1] == config[k] && !used[k - 1] {
                continue;
            }
            used[k] = true;
            out.push(config[k]);
            if go(config, slots, used, out) {
                return true;
            }
            out.pop();
            used[k] = false;
        }
        false
    }
    if config.len() != slots.len() {
        return None;
    }
    let mut used = vec![false; config.len()];
    let mut out = Vec::with_capacity(slots.len());
    go(config, slots, &mut used, &mut out).then_some(out)
}

// --- problem files ---------------------------------------------------------

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Drop duplicate configurations with a warning instead of rejecting.
    pub normalize_duplicates: bool,
}

#[derive(Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ProblemFile {
    Rooted {
        delta: i64,
        labels: Vec<String>,
        configurations: Vec<RootedEntry>,
    },
    Unrooted {
        delta: i64,
        labels: Vec<String>,
        node_configs: Vec<Vec<String>>,
        edge_configs: Vec<Vec<String>>,
    },
}

#[derive(Deserialize, Serialize)]
struct RootedEntry {
    parent: String,
    children: Vec<String>,
}

pub fn parse_problem(text: &str) -> Result<Problem, ProblemError> {
    parse_problem_with(text, ParseOptions::default())
}

pub fn parse_problem_with(text: &str, options: ParseOptions) -> Result<Problem, ProblemError> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| ProblemError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    match file {
        ProblemFile::Rooted {
            delta,
            labels,
            configurations,
        } => {
            if delta < 1 {
                return Err(ProblemError::Delta { min: 1, got: delta });
            }
            check_labels(&labels)?;
            let delta = delta as usize;
            let resolve = |name: &str| {
                labels
                    .iter()
                    .position(|l| l == name)
                    .ok_or_else(|| ProblemError::UnknownLabel(name.to_string()))
            };
            let mut seen = BTreeSet::new();
            for entry in &configurations {
                let parent = resolve(&entry.parent)?;
                if entry.children.len() != delta {
                    return Err(ProblemError::Arity {
                        expected: delta,
                        found: entry.children.clone(),
                    });
                }
                let children = entry
                    .children
                    .iter()
                    .map(|c| resolve(c))
                    .collect::<Result<Vec<_>, _>>()?;
                let key = (parent, Configuration::new(children));
                if !seen.insert(key) {
                    let msg = format!("{} -> {:?}", entry.parent, entry.children);
                    if options.normalize_duplicates {
                        log::warn!("dropping duplicate configuration {msg}");
                    } else {
                        return Err(ProblemError::DuplicateEntry(msg));
                    }
                }
            }
            Ok(Problem::Rooted(RootedProblem::new(delta, labels, seen)?))
        }
        ProblemFile::Unrooted {
            delta,
            labels,
            node_configs,
            edge_configs,
        } => {
            if delta < 2 {
                return Err(ProblemError::Delta { min: 2, got: delta });
            }
            check_labels(&labels)?;
            let delta = delta as usize;
            let resolve = |name: &str| {
                labels
                    .iter()
                    .position(|l| l == name)
                    .ok_or_else(|| ProblemError::UnknownLabel(name.to_string()))
            };
            let mut nodes = BTreeSet::new();
            for config in &node_configs {
                if config.len() != delta {
                    return Err(ProblemError::Arity {
                        expected: delta,
                        found: config.clone(),
                    });
                }
                let ids = config.iter().map(|c| resolve(c)).collect::<Result<Vec<_>, _>>()?;
                if !nodes.insert(Configuration::new(ids)) {
                    let msg = format!("node configuration {config:?}");
                    if options.normalize_duplicates {
                        log::warn!("dropping duplicate {msg}");
                    } else {
                        return Err(ProblemError::DuplicateEntry(msg));
                    }
                }
            }
            let mut edges = BTreeSet::new();
            for pair in &edge_configs {
                if pair.len() != 2 {
                    return Err(ProblemError::Arity {
                        expected: 2,
                        found: pair.clone(),
                    });
                }
                let e = EdgeConfig::new(resolve(&pair[0])?, resolve(&pair[1])?);
                if !edges.insert(e) {
                    let msg = format!("edge configuration {pair:?}");
                    if options.normalize_duplicates {
                        log::warn!("dropping duplicate {msg}");
                    } else {
                        return Err(ProblemError::DuplicateEntry(msg));
                    }
                }
            }
            Ok(Problem::Unrooted(UnrootedProblem::new(
                delta, labels, nodes, edges,
            )?))
        }
    }
}

/// Canonical JSON text: configurations sorted by label id, one key order.
pub fn serialize_problem(p: &Problem) -> String {
    let names = |ids: &[LabelId], labels: &[String]| -> Vec<String> {
        ids.iter().map(|&i| labels[i].clone()).collect()
    };
    let file = match p {
        Problem::Rooted(p) => ProblemFile::Rooted {
            delta: p.delta as i64,
            labels: p.labels.clone(),
            configurations: p
                .constraints
                .iter()
                .map(|(parent, c)| RootedEntry {
                    parent: p.labels[*parent].clone(),
                    children: names(c.labels(), &p.labels),
                })
                .collect(),
        },
        Problem::Unrooted(p) => ProblemFile::Unrooted {
            delta: p.delta as i64,
            labels: p.labels.clone(),
            node_configs: p
                .node_configs
                .iter()
                .map(|c| names(c.labels(), &p.labels))
                .collect(),
            edge_configs: p
                .edge_configs
                .iter()
                .map(|e| names(&e.labels(), &p.labels))
                .collect(),
        },
    };
    let mut out = serde_json::to_string_pretty(&file).expect("problem serializes");
    out.push('\n');
    out
}
