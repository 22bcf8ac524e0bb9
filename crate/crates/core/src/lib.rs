//! Locality classification of LCL problems on regular trees, lower-bound
//! instance generation, and an online-LOCAL simulation harness.

pub mod automaton;
pub mod certificate;
pub mod depth;
pub mod harness;
pub mod instances;
pub mod problem;
pub mod rng;

pub use automaton::{Automaton, State};
pub use certificate::{search_certificate, verify_certificate, Certificate, SearchBounds};
pub use depth::{classify, depth, ClassReport, DepthResult, DepthValue};
pub use problem::{parse_problem, LabelSet, Problem, RootedProblem, UnrootedProblem};
