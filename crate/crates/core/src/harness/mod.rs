//! Online-LOCAL simulation: verifiers, the offline DP oracle, reveal runs,
//! shipped algorithms and failure estimation.

mod algorithms;
mod check;
mod estimate;
mod iso;
mod run;
mod solve;

pub use algorithms::AlgorithmKind;
pub use check::{check, check_rooted, check_unrooted, Labeling, Verdict, Violation};
pub use estimate::{estimate_failure, run_trial, trace_trial, trial_seed, FailureEstimate, ScheduleSource, Setup};
pub use iso::{assert_view_isomorphism, canonical_ball, IsoReport};
pub use run::{reveal_run, Locality, OnlineAlgorithm, Output, RunError, RunTrace, View};
pub use solve::{solve_fragment, solve_offline, Fragment, FreeSets, Outputs};
