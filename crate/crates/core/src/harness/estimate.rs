//! Monte-Carlo failure estimation over independent (schedule, algorithm
//! randomness) trials.

use std::sync::Arc;

use rand::RngCore;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::algorithms::AlgorithmKind;
use super::run::{reveal_run, Locality, RunError, RunTrace};
use super::solve::FreeSets;
use crate::instances::{sample_with, Schedule, Tree};
use crate::problem::Problem;
use crate::rng::{derive, Purpose};

/// How each trial orders the nodes.
#[derive(Clone, Debug)]
pub enum ScheduleSource {
    /// A fresh randomized adversarial schedule per trial for parameter t.
    Adversarial { t: usize },
    /// The same order in every trial.
    Fixed(Schedule),
}

#[derive(Clone, Debug)]
pub struct Setup {
    pub problem: Arc<Problem>,
    pub tree: Arc<Tree>,
    pub schedule: ScheduleSource,
    pub algorithm: AlgorithmKind,
    pub locality: Locality,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FailureEstimate {
    pub trials: usize,
    pub failures: usize,
    pub p_hat: f64,
    pub ci95: (f64, f64),
}

impl FailureEstimate {
    pub fn new(trials: usize, failures: usize) -> Self {
        let (lo, hi) = wilson(trials, failures);
        FailureEstimate {
            trials,
            failures,
            p_hat: failures as f64 / trials as f64,
            ci95: (lo, hi),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "trials": self.trials,
            "failures": self.failures,
            "p_hat": self.p_hat,
            "ci95": [self.ci95.0, self.ci95.1],
        })
    }
}

/// Wilson score interval at 95%.
fn wilson(trials: usize, failures: usize) -> (f64, f64) {
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = Z * Z;
    let center = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    // rounding can leave p just outside at p = 0 or 1
    ((center - half).clamp(0.0, p), (center + half).clamp(p, 1.0))
}

/// Seed of trial `i`; rerunning a single trial with it reproduces it.
pub fn trial_seed(master: u64, i: usize) -> u64 {
    derive(master, Purpose::Trial, i as u64).next_u64()
}

/// Runs one trial; true when the final labeling fails the verifier.
pub fn run_trial(setup: &Setup, free: FreeSets, seed: u64) -> Result<bool, RunError> {
    Ok(!trace_trial(setup, free, seed)?.verdict.pass())
}

/// One trial with its full trace.
pub fn trace_trial(setup: &Setup, free: FreeSets, seed: u64) -> Result<RunTrace, RunError> {
    let sched = match &setup.schedule {
        ScheduleSource::Adversarial { t } => {
            sample_with(&setup.tree, *t, &mut derive(seed, Purpose::Schedule, 0), seed)
                .map_err(|e| RunError::Mismatch(e.to_string()))?
        }
        ScheduleSource::Fixed(s) => s.clone(),
    };
    let mut alg = setup.algorithm.build(setup.problem.clone(), free);
    let mut rng = derive(seed, Purpose::Algorithm, 0);
    reveal_run(&setup.tree, &setup.problem, &sched, alg.as_mut(), setup.locality, &mut rng)
}

/// Runs `trials` independent trials in parallel. Results depend only on
/// (setup, trials, master_seed).
pub fn estimate_failure(setup: &Setup, trials: usize, master_seed: u64) -> Result<FailureEstimate, RunError> {
    assert!(trials >= 1, "need at least one trial");
    let free = FreeSets::of(&setup.problem);
    let outcomes: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(setup, free, trial_seed(master_seed, i)))
        .collect::<Result<_, _>>()?;
    let failures = outcomes.iter().filter(|&&f| f).count();
    Ok(FailureEstimate::new(trials, failures))
}
