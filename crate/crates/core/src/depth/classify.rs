use serde_json::{json, Value};
use thiserror::Error;

use super::{depth, DepthResult, DepthValue, GoodSequence};
use crate::certificate::{search_certificate, verify_certificate, SearchBounds, SearchOutcome};
use crate::problem::{LabelSet, PairSet, Problem, UnrootedProblem};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("inconsistent result: depth {0} is finite but a valid certificate was found")]
    FiniteWithCertificate(usize),
}

#[derive(Clone, Debug)]
pub struct ClassReport {
    pub depth: DepthResult,
    pub class: String,
    pub certificate: Option<SearchOutcome>,
    pub caveats: Vec<String>,
}

impl ClassReport {
    pub fn unsolvable(&self) -> bool {
        self.depth.value == DepthValue::Zero
    }

    pub fn to_json(&self, p: &Problem) -> Value {
        let certificate = match (&self.certificate, p) {
            (Some(SearchOutcome::Found(c)), Problem::Rooted(rp)) => c.to_json(rp),
            _ => Value::Null,
        };
        json!({
            "depth": self.depth.value.as_text(),
            "class": self.class,
            "witness_good_sequence": witness_json(&self.depth.witness, p),
            "certificate": certificate,
            "caveats": self.caveats,
        })
    }
}

fn label_names(s: LabelSet, names: &[String]) -> Value {
    s.iter().map(|l| names[l].clone()).collect()
}

fn pair_names(d: &PairSet, names: &[String]) -> Value {
    d.iter()
        .map(|e| {
            let [a, b] = e.labels();
            json!([names[a], names[b]])
        })
        .collect()
}

fn config_names(v: &std::collections::BTreeSet<usize>, p: &UnrootedProblem) -> Value {
    v.iter()
        .map(|&i| {
            p.node_configs()[i]
                .labels()
                .iter()
                .map(|&l| p.labels()[l].clone())
                .collect::<Value>()
        })
        .collect()
}

/// Alternating list: trimmed set, component, trimmed set, …
fn witness_json(w: &GoodSequence, p: &Problem) -> Value {
    let mut out = Vec::new();
    match (w, p) {
        (GoodSequence::Rooted { trimmed, components }, Problem::Rooted(rp)) => {
            for (i, t) in trimmed.iter().enumerate() {
                out.push(label_names(*t, rp.labels()));
                if let Some(c) = components.get(i) {
                    out.push(label_names(*c, rp.labels()));
                }
            }
        }
        (GoodSequence::Unrooted { trimmed, components }, Problem::Unrooted(up)) => {
            for (i, t) in trimmed.iter().enumerate() {
                out.push(config_names(t, up));
                if let Some(c) = components.get(i) {
                    out.push(pair_names(c, up.labels()));
                }
            }
        }
        _ => {}
    }
    Value::Array(out)
}

/// Depth plus, for rooted problems, a bounded certificate search.
pub fn classify(p: &Problem, bounds: SearchBounds) -> Result<ClassReport, ClassifyError> {
    let d = depth(p);
    let mut caveats = Vec::new();
    let (class, certificate) = match (p, d.value) {
        (_, DepthValue::Zero) => ("unsolvable".to_string(), None),
        (Problem::Unrooted(_), DepthValue::Finite(k)) => (format!("Theta(n^{{1/{k}}})"), None),
        (Problem::Unrooted(_), DepthValue::Infinite) => ("O(log n)".to_string(), None),
        (Problem::Rooted(rp), value) => {
            let outcome = search_certificate(rp, bounds);
            if let SearchOutcome::Found(c) = &outcome {
                debug_assert!(verify_certificate(rp, c).is_empty());
                if let DepthValue::Finite(k) = value {
                    return Err(ClassifyError::FiniteWithCertificate(k));
                }
            }
            let class = match (value, &outcome) {
                (DepthValue::Finite(k), _) => format!("Theta(n^{{1/{k}}})"),
                (_, SearchOutcome::Found(_)) => {
                    caveats.push(
                        "O(1) and Theta(log* n) in deterministic LOCAL are not distinguished"
                            .to_string(),
                    );
                    "O(log* n) LOCAL / O(1) online-LOCAL".to_string()
                }
                (_, SearchOutcome::NotFound { max_depth, max_sigma }) => {
                    caveats.push(format!(
                        "conditional: no certificate with depths <= {max_depth} and |sigma_t| <= {max_sigma}"
                    ));
                    "Theta(log n)".to_string()
                }
                (_, SearchOutcome::BudgetExceeded { expansions }) => {
                    caveats.push(format!(
                        "conditional: certificate search budget exhausted after {expansions} expansions"
                    ));
                    "Theta(log n)".to_string()
                }
            };
            (class, Some(outcome))
        }
    };
    Ok(ClassReport {
        depth: d,
        class,
        certificate,
        caveats,
    })
}
