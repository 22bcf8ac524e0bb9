use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use lcl_core::automaton::{build_automaton_rooted, build_automaton_unrooted};
use lcl_core::certificate::SearchOutcome;
use lcl_core::harness::{
    check, estimate_failure, trace_trial, trial_seed, AlgorithmKind, FreeSets, Labeling,
    ScheduleSource, Setup,
};
use lcl_core::instances::{
    build_chunk_instance, build_chunk_instance_unchecked, build_lb_rooted, build_lb_unrooted,
    chunk_node_count, complete_tree, lb_rooted_count, lb_unrooted_count, sample_schedule,
    ChunkChoice, CompleteKind, Schedule, Tree,
};
use lcl_core::problem::{parse_problem_with, ParseOptions};
use lcl_core::{classify, search_certificate, verify_certificate, Certificate, Problem, SearchBounds};
use serde_json::{json, Map, Value};

use crate::{BoundsArgs, Cli, Command, GenCommand, ParseArgs, TreeShape};

const EXIT_UNSOLVABLE: u8 = 2;
const EXIT_CHECK_FAIL: u8 = 3;

pub fn run(cli: Cli) -> Result<u8> {
    let seed = cli.seed;
    let (command, params, result, code) = match cli.command {
        Command::Classify { problem, bounds, parse } => {
            let p = read_problem(&problem, parse)?;
            let b = search_bounds(bounds);
            let report = classify(&p, b)?;
            let code = if report.unsolvable() { EXIT_UNSOLVABLE } else { 0 };
            let params = json!({ "problem": problem, "bounds": bounds_json(b) });
            ("classify", params, report.to_json(&p), code)
        }
        Command::Certificate { problem, bounds, verify, parse } => {
            let Problem::Rooted(p) = read_problem(&problem, parse)? else {
                bail!("certificates are defined for rooted problems only");
            };
            match verify {
                Some(path) => {
                    let c = Certificate::from_json(&read_json(&path)?, &p).map_err(|e| anyhow!(e))?;
                    let violations: Vec<String> = verify_certificate(&p, &c).iter().map(|v| v.to_string()).collect();
                    let params = json!({ "problem": problem, "verify": path });
                    let result = json!({ "valid": violations.is_empty(), "violations": violations });
                    ("certificate", params, result, 0)
                }
                None => {
                    let b = search_bounds(bounds);
                    let result = match search_certificate(&p, b) {
                        SearchOutcome::Found(c) => json!({ "status": "FOUND", "certificate": c.to_json(&p) }),
                        SearchOutcome::NotFound { max_depth, max_sigma } => json!({
                            "status": "NOT_FOUND", "max_depth": max_depth, "max_sigma": max_sigma,
                        }),
                        SearchOutcome::BudgetExceeded { expansions } => json!({
                            "status": "BUDGET_EXCEEDED", "expansions": expansions,
                        }),
                    };
                    let params = json!({ "problem": problem, "bounds": bounds_json(b) });
                    ("certificate", params, result, 0)
                }
            }
        }
        Command::Gen(g) => {
            let (params, result) = gen(g, seed)?;
            ("gen", params, result, 0)
        }
        Command::Simulate {
            problem,
            tree,
            schedule,
            sample,
            algorithm,
            locality,
            trials,
            trace_out,
            trace_max_nodes,
        } => {
            let p = read_problem(&problem, ParseArgs { normalize_duplicates: false })?;
            let g = read_tree(&tree)?;
            consistent(&p, &g)?;
            let alg = AlgorithmKind::from_name(&algorithm).ok_or_else(|| {
                let known: Vec<_> = AlgorithmKind::ALL.iter().map(|a| a.name()).collect();
                anyhow!("unknown algorithm `{algorithm}` (known: {})", known.join(", "))
            })?;
            let source = match (&schedule, sample) {
                (Some(path), _) => {
                    let s = Schedule::from_json(&read_json(path)?)?;
                    if !s.is_permutation(g.len()) {
                        bail!("schedule is not a permutation of the {} tree nodes", g.len());
                    }
                    ScheduleSource::Fixed(s)
                }
                (None, Some(t)) => ScheduleSource::Adversarial { t },
                (None, None) => match g.ann.lower_bound {
                    Some(meta) => ScheduleSource::Adversarial { t: meta.t },
                    None => bail!("tree is not a lower-bound instance; pass --schedule or --sample"),
                },
            };
            let names = p.labels().to_vec();
            let setup = Setup {
                problem: Arc::new(p),
                tree: Arc::new(g),
                schedule: source,
                algorithm: alg,
                locality,
            };
            let estimate = estimate_failure(&setup, trials as usize, seed)?;
            if let Some(path) = &trace_out {
                let free = FreeSets::of(&setup.problem);
                let trace = trace_trial(&setup, free, trial_seed(seed, 0))?;
                write_json(path, &trace.to_json(&names, trace_max_nodes))?;
            }
            let params = json!({
                "problem": problem,
                "tree": tree,
                "schedule": schedule,
                "sample": sample,
                "algorithm": alg.name(),
                "locality": locality.to_string(),
                "trials": trials,
            });
            ("simulate", params, estimate.to_json(), 0)
        }
        Command::Check { problem, tree, labeling } => {
            let p = read_problem(&problem, ParseArgs { normalize_duplicates: false })?;
            let g = read_tree(&tree)?;
            let l = Labeling::from_json(&read_json(&labeling)?, &p).map_err(|e| anyhow!(e))?;
            let verdict = check(&g, &l, &p);
            let code = if verdict.pass() { 0 } else { EXIT_CHECK_FAIL };
            let params = json!({ "problem": problem, "tree": tree, "labeling": labeling });
            ("check", params, verdict.to_json(), code)
        }
        Command::ExportAutomaton { problem, out } => {
            let p = read_problem(&problem, ParseArgs { normalize_duplicates: false })?;
            let (a, names) = match &p {
                Problem::Rooted(rp) => (build_automaton_rooted(rp, rp.all_labels()), rp.labels()),
                Problem::Unrooted(up) => (build_automaton_unrooted(up, &up.all_configs()), up.labels()),
            };
            let dot = a.to_dot(names);
            match &out {
                Some(path) => fs::write(path, &dot).with_context(|| format!("writing {}", path.display()))?,
                None => {
                    // the DOT text is the output; no JSON report
                    print!("{dot}");
                    return Ok(0);
                }
            }
            let params = json!({ "problem": problem, "out": out });
            let result = json!({ "states": a.len(), "edges": a.edge_count() });
            ("export-automaton", params, result, 0)
        }
    };
    let report = envelope(command, params, seed, result);
    let text = serde_json::to_string_pretty(&report)? + "\n";
    if let Some(path) = &cli.report {
        fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    print!("{text}");
    Ok(code)
}

/// Result fields at the top level, plus tool version, parameters and seed.
fn envelope(command: &str, params: Value, seed: u64, result: Value) -> Value {
    let mut map = match result {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    map.insert("tool".into(), json!({ "name": "lcl", "version": env!("CARGO_PKG_VERSION") }));
    map.insert("command".into(), json!(command));
    map.insert("params".into(), params);
    // u64 seeds do not survive a round trip through f64 JSON readers
    map.insert("seed".into(), json!(seed.to_string()));
    Value::Object(map)
}

fn gen(g: GenCommand, seed: u64) -> Result<(Value, Value)> {
    Ok(match g {
        GenCommand::RootedLb { delta, beta, k, t, out, schedule_out } => {
            let tree = build_lb_rooted(delta, beta, k, t)?;
            let formula = lb_rooted_count(delta, beta, k, t);
            let result = write_lb(&tree, formula, t, &out, schedule_out.as_deref(), seed)?;
            let params = json!({
                "kind": "rooted-lb", "delta": delta, "beta": beta, "k": k, "t": t,
                "out": out, "schedule_out": schedule_out,
            });
            (params, result)
        }
        GenCommand::UnrootedLb { delta, gamma, k, t, out, schedule_out } => {
            let tree = build_lb_unrooted(delta, gamma, k, t)?;
            let formula = lb_unrooted_count(delta, gamma, k, t);
            let result = write_lb(&tree, formula, t, &out, schedule_out.as_deref(), seed)?;
            let params = json!({
                "kind": "unrooted-lb", "delta": delta, "gamma": gamma, "k": k, "t": t,
                "out": out, "schedule_out": schedule_out,
            });
            (params, result)
        }
        GenCommand::Chunks { sigma, delta, d, b, u, chunk, unchecked, out } => {
            let choice = ChunkChoice { b, u, chunk };
            let inst = if unchecked {
                build_chunk_instance_unchecked(sigma, delta, d, choice)?
            } else {
                build_chunk_instance(sigma, delta, d, choice)?
            };
            let formula = chunk_node_count(sigma, delta, d);
            write_json(&out, &inst.tree().to_json())?;
            let params = json!({
                "kind": "chunks", "sigma": sigma, "delta": delta, "d": d, "b": b, "u": u,
                "chunk": chunk, "unchecked": unchecked, "out": out,
            });
            let result = json!({
                "nodes": inst.len(),
                "before_identification": inst.raw_count,
                "formula": formula.to_string(),
                "identified": inst.merged.len(),
                "formula_match": inst.raw_count as u128 == formula,
            });
            (params, result)
        }
        GenCommand::CompleteTree { delta, depth, kind, out } => {
            let ck = match kind {
                TreeShape::DeltaAry => CompleteKind::DeltaAry,
                TreeShape::T => CompleteKind::T,
                TreeShape::TStar => CompleteKind::TStar,
            };
            let tree = complete_tree(delta, depth, ck)?;
            write_json(&out, &tree.to_json())?;
            let name = match kind {
                TreeShape::DeltaAry => "delta-ary",
                TreeShape::T => "t",
                TreeShape::TStar => "t-star",
            };
            let params = json!({
                "kind": "complete-tree", "shape": name, "delta": delta, "depth": depth, "out": out,
            });
            (params, json!({ "nodes": tree.len() }))
        }
    })
}

fn write_lb(tree: &Tree, formula: u128, t: usize, out: &Path, schedule_out: Option<&Path>, seed: u64) -> Result<Value> {
    write_json(out, &tree.to_json())?;
    if let Some(path) = schedule_out {
        write_json(path, &sample_schedule(tree, t, seed)?.to_json())?;
    }
    Ok(json!({
        "nodes": tree.len(),
        "formula": formula.to_string(),
        "formula_match": tree.len() as u128 == formula,
        "core_paths": tree.ann.paths.len(),
    }))
}

fn search_bounds(b: BoundsArgs) -> SearchBounds {
    let d = SearchBounds::default();
    SearchBounds {
        max_depth: b.max_depth.unwrap_or(d.max_depth),
        max_sigma: b.max_sigma.or(d.max_sigma),
        expansion_cap: b.expansion_cap.unwrap_or(d.expansion_cap),
    }
}

fn bounds_json(b: SearchBounds) -> Value {
    json!({ "max_depth": b.max_depth, "max_sigma": b.max_sigma, "expansion_cap": b.expansion_cap })
}

fn consistent(p: &Problem, g: &Tree) -> Result<()> {
    if p.is_rooted() != g.is_rooted() {
        bail!(
            "problem is {} but the tree is {}",
            if p.is_rooted() { "rooted" } else { "unrooted" },
            g.kind().as_str()
        );
    }
    let bad = g.degree_violations(p.delta());
    if let Some(v) = bad.first() {
        bail!("tree is not {}-regular: node {v} and {} more", p.delta(), bad.len() - 1);
    }
    Ok(())
}

fn read_problem(path: &Path, parse: ParseArgs) -> Result<Problem> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let options = ParseOptions {
        normalize_duplicates: parse.normalize_duplicates,
    };
    parse_problem_with(&text, options).with_context(|| format!("parsing {}", path.display()))
}

fn read_tree(path: &Path) -> Result<Tree> {
    Tree::from_json(&read_json(path)?).with_context(|| format!("loading tree {}", path.display()))
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    let text = serde_json::to_string(v)? + "\n";
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
