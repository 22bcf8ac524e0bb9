//! Verifiers for node labelings (rooted) and half-edge labelings (unrooted).

use std::fmt;

use serde_json::{json, Value};

use crate::instances::Tree;
use crate::problem::{Configuration, LabelId, Problem, RootedProblem, UnrootedProblem};

/// A complete or partial solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Labeling {
    Nodes(Vec<Option<LabelId>>),
    /// Per edge, the labels of its two half-edges in endpoint order.
    HalfEdges(Vec<[Option<LabelId>; 2]>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Structure(String),
    MissingLabel { node: usize },
    MissingHalfEdge { edge: usize, side: usize },
    LabelOutOfRange { label: LabelId },
    Node { node: usize },
    Edge { edge: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Structure(m) => write!(f, "structure: {m}"),
            Violation::MissingLabel { node } => write!(f, "node {node} has no label"),
            Violation::MissingHalfEdge { edge, side } => {
                write!(f, "half-edge {side} of edge {edge} has no label")
            }
            Violation::LabelOutOfRange { label } => write!(f, "label id {label} out of range"),
            Violation::Node { node } => write!(f, "node {node} violates the node constraints"),
            Violation::Edge { edge } => write!(f, "edge {edge} violates the edge constraints"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let list: Vec<Value> = self
            .violations
            .iter()
            .map(|v| {
                let (kind, id) = match v {
                    Violation::Structure(_) => ("structure", None),
                    Violation::MissingLabel { node } => ("missing_label", Some(*node)),
                    Violation::MissingHalfEdge { edge, .. } => ("missing_half_edge", Some(*edge)),
                    Violation::LabelOutOfRange { .. } => ("label_out_of_range", None),
                    Violation::Node { node } => ("node", Some(*node)),
                    Violation::Edge { edge } => ("edge", Some(*edge)),
                };
                json!({"kind": kind, "id": id, "message": v.to_string()})
            })
            .collect();
        json!({"verdict": if self.pass() { "PASS" } else { "FAIL" }, "violations": list})
    }
}

/// Checks a node labeling: every node with exactly Δ children must use an
/// allowed (label, children multiset) pair.
pub fn check_rooted(g: &Tree, labels: &[Option<LabelId>], p: &RootedProblem) -> Verdict {
    let mut out = Verdict::default();
    if !g.is_rooted() {
        out.violations.push(Violation::Structure("tree is not rooted".into()));
        return out;
    }
    if labels.len() != g.len() {
        out.violations.push(Violation::Structure(format!(
            "labeling has {} entries for {} nodes",
            labels.len(),
            g.len()
        )));
        return out;
    }
    let k = p.label_count();
    for (v, l) in labels.iter().enumerate() {
        match l {
            None => out.violations.push(Violation::MissingLabel { node: v }),
            Some(l) if *l >= k => out.violations.push(Violation::LabelOutOfRange { label: *l }),
            _ => {}
        }
    }
    if !out.pass() {
        return out;
    }
    for v in 0..g.len() {
        let ch = g.children(v);
        if ch.len() != p.delta() {
            continue;
        }
        let config = Configuration::new(ch.iter().map(|&c| labels[c].unwrap()).collect());
        if !p.allows(labels[v].unwrap(), &config) {
            out.violations.push(Violation::Node { node: v });
        }
    }
    out
}

/// Checks a half-edge labeling: degree-Δ nodes need an allowed multiset,
/// every edge an allowed pair.
pub fn check_unrooted(g: &Tree, half: &[[Option<LabelId>; 2]], p: &UnrootedProblem) -> Verdict {
    let mut out = Verdict::default();
    if half.len() != g.edges().len() {
        out.violations.push(Violation::Structure(format!(
            "labeling has {} edges, tree has {}",
            half.len(),
            g.edges().len()
        )));
        return out;
    }
    let k = p.label_count();
    for (e, pair) in half.iter().enumerate() {
        for (side, l) in pair.iter().enumerate() {
            match l {
                None => out.violations.push(Violation::MissingHalfEdge { edge: e, side }),
                Some(l) if *l >= k => out.violations.push(Violation::LabelOutOfRange { label: *l }),
                _ => {}
            }
        }
    }
    if !out.pass() {
        return out;
    }
    for v in 0..g.len() {
        if g.degree(v) != p.delta() {
            continue;
        }
        let config = Configuration::new(
            g.incident(v)
                .iter()
                .map(|&e| half[e][g.side(e, v)].unwrap())
                .collect(),
        );
        if !p.allows_node(&config) {
            out.violations.push(Violation::Node { node: v });
        }
    }
    for (e, pair) in half.iter().enumerate() {
        if !p.allows_edge(pair[0].unwrap(), pair[1].unwrap()) {
            out.violations.push(Violation::Edge { edge: e });
        }
    }
    out
}

pub fn check(g: &Tree, labeling: &Labeling, p: &Problem) -> Verdict {
    match (p, labeling) {
        (Problem::Rooted(rp), Labeling::Nodes(l)) => check_rooted(g, l, rp),
        (Problem::Unrooted(up), Labeling::HalfEdges(h)) => check_unrooted(g, h, up),
        _ => Verdict {
            violations: vec![Violation::Structure(
                "labeling kind does not match the problem".into(),
            )],
        },
    }
}

impl Labeling {
    pub fn to_json(&self, names: &[String]) -> Value {
        let name = |l: &Option<LabelId>| l.map_or(Value::Null, |l| json!(names[l]));
        match self {
            Labeling::Nodes(l) => json!({"labels": l.iter().map(name).collect::<Vec<_>>()}),
            Labeling::HalfEdges(h) => json!({
                "half_edges": h.iter().map(|[a, b]| json!([name(a), name(b)])).collect::<Vec<_>>()
            }),
        }
    }

    /// Reads label names; unknown names and nulls become missing labels so
    /// the checker reports them.
    pub fn from_json(v: &Value, p: &Problem) -> Result<Labeling, String> {
        let lookup = |x: &Value| -> Result<Option<LabelId>, String> {
            match x {
                Value::Null => Ok(None),
                Value::String(s) => p
                    .labels()
                    .iter()
                    .position(|n| n == s)
                    .map(Some)
                    .ok_or(format!("unknown label `{s}`")),
                _ => Err("labels must be strings or null".into()),
            }
        };
        if let Some(arr) = v.get("labels").and_then(Value::as_array) {
            return Ok(Labeling::Nodes(arr.iter().map(lookup).collect::<Result<_, _>>()?));
        }
        if let Some(arr) = v.get("half_edges").and_then(Value::as_array) {
            let pairs = arr
                .iter()
                .map(|e| {
                    let pair = e.as_array().filter(|p| p.len() == 2).ok_or("half-edge entries must be pairs")?;
                    Ok([lookup(&pair[0])?, lookup(&pair[1])?])
                })
                .collect::<Result<_, String>>()?;
            return Ok(Labeling::HalfEdges(pairs));
        }
        Err("labeling needs a `labels` or `half_edges` array".into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{complete_tree, CompleteKind};
    use crate::problem::parse_problem;

    fn two_coloring() -> RootedProblem {
        match parse_problem(
            r#"{"kind":"rooted","delta":1,"labels":["W","B"],
            "configurations":[{"parent":"W","children":["B"]},{"parent":"B","children":["W"]}]}"#,
        )
        .unwrap()
        {
            Problem::Rooted(p) => p,
            _ => unreachable!(),
        }
    }

    #[test]
    fn rooted_path() {
        let p = two_coloring();
        let g = complete_tree(1, 3, CompleteKind::DeltaAry).unwrap();
        assert!(check_rooted(&g, &[Some(0), Some(1), Some(0), Some(1)], &p).pass());
        let v = check_rooted(&g, &[Some(0), Some(0), Some(0), Some(1)], &p);
        assert_eq!(v.violations, vec![Violation::Node { node: 0 }, Violation::Node { node: 1 }]);
        let v = check_rooted(&g, &[Some(0), None, Some(0), Some(1)], &p);
        assert_eq!(v.violations, vec![Violation::MissingLabel { node: 1 }]);
    }

    #[test]
    fn sinkless_orientation() {
        let p = match parse_problem(
            r#"{"kind":"unrooted","delta":3,"labels":["I","O"],
            "node_configs":[["O","I","I"],["O","O","I"],["O","O","O"]],
            "edge_configs":[["I","O"]]}"#,
        )
        .unwrap()
        {
            Problem::Unrooted(p) => p,
            _ => unreachable!(),
        };
        let g = complete_tree(3, 2, CompleteKind::TStar).unwrap();
        // everything points at the root: the root is a sink
        let toward_root: Vec<[Option<usize>; 2]> = g.edges().iter().map(|_| [Some(0), Some(1)]).collect();
        let v = check_unrooted(&g, &toward_root, &p);
        assert_eq!(v.violations, vec![Violation::Node { node: 0 }]);
        let mut bad = toward_root.clone();
        bad[0] = [Some(1), Some(1)];
        assert!(check_unrooted(&g, &bad, &p).violations.contains(&Violation::Edge { edge: 0 }));
    }
}
