//! `lcl`: classify LCL problems, generate instances, run simulations.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lcl_core::harness::Locality;

#[derive(Parser, Debug)]
#[command(name = "lcl", version, about = "Locality classification of LCL problems on regular trees")]
struct Cli {
    /// Master seed, echoed in every report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Depth, complexity class and witnesses of a problem.
    Classify {
        problem: PathBuf,
        #[command(flatten)]
        bounds: BoundsArgs,
        #[command(flatten)]
        parse: ParseArgs,
    },
    /// Search for (or verify) a certificate of O(log* n) solvability.
    Certificate {
        problem: PathBuf,
        #[command(flatten)]
        bounds: BoundsArgs,
        /// Verify this certificate file instead of searching.
        #[arg(long, conflicts_with_all = ["max_depth", "max_sigma", "expansion_cap"])]
        verify: Option<PathBuf>,
        #[command(flatten)]
        parse: ParseArgs,
    },
    /// Generate an instance.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Monte-Carlo failure estimate of an online algorithm.
    Simulate {
        problem: PathBuf,
        tree: PathBuf,
        /// Fixed reveal order used in every trial.
        #[arg(long, conflicts_with = "sample")]
        schedule: Option<PathBuf>,
        /// Sample a fresh adversarial schedule with this t in every trial
        /// (default: the t the instance was built for).
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long)]
        algorithm: String,
        /// Integer radius, or `n` for full visibility.
        #[arg(long, default_value = "1")]
        locality: Locality,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Write the trace of trial 0 here.
        #[arg(long)]
        trace_out: Option<PathBuf>,
        /// Traces of larger trees keep only the verdict.
        #[arg(long, default_value_t = 10_000)]
        trace_max_nodes: usize,
    },
    /// Verify a labeling; exit code 3 on FAIL.
    Check {
        problem: PathBuf,
        tree: PathBuf,
        labeling: PathBuf,
    },
    /// Write the automaton of the problem in DOT format.
    ExportAutomaton {
        problem: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct BoundsArgs {
    #[arg(long)]
    max_depth: Option<usize>,
    #[arg(long)]
    max_sigma: Option<usize>,
    #[arg(long)]
    expansion_cap: Option<u64>,
}

#[derive(Args, Debug, Clone, Copy)]
struct ParseArgs {
    /// Drop duplicate configurations with a warning instead of failing.
    #[arg(long)]
    normalize_duplicates: bool,
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Lower-bound graph for rooted problems.
    RootedLb {
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        beta: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also sample an adversarial schedule.
        #[arg(long)]
        schedule_out: Option<PathBuf>,
    },
    /// Lower-bound graph for unrooted problems.
    UnrootedLb {
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        gamma: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        schedule_out: Option<PathBuf>,
    },
    /// One member of the chunk-instance family.
    Chunks {
        #[arg(long)]
        sigma: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        b: u8,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        chunk: usize,
        /// Skip the delta^d > 2 sigma requirement.
        #[arg(long)]
        unchecked: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Complete tree.
    CompleteTree {
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = TreeShape::DeltaAry)]
        kind: TreeShape,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum TreeShape {
    /// Rooted, every internal node has delta children.
    DeltaAry,
    /// Unrooted, root degree delta - 1.
    T,
    /// Unrooted, root degree delta.
    TStar,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
