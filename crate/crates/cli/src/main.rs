//! `gdet`: evaluate, classify and witness group determinants of C2^n, run
//! the lemma verifiers and exhaustive sweeps.
//!
//! Exit codes: 0 for success (member, verified, no violations), 1 for a
//! definite negative answer, 2 for usage errors and anything the tool could
//! not decide.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gdet_core::assignment::DEFAULT_MAX_RANK;
use gdet_core::verify::DEFAULT_WINDOW;
use gdet_core::{
    a_set_oracle, classify, coverage_check, det_group, sweep, verify_all, verify_lemma,
    witness_for, Assignment, FactorPolicy, FactorTree, Group, SweepConfig,
};
use num_bigint::BigInt;

#[derive(Parser)]
#[command(name = "gdet", version, about = "Integer group determinants of C2^n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    #[value(name = "c2_2")]
    C22,
    #[value(name = "c2_3")]
    C23,
    #[value(name = "c2_4")]
    C24,
}

impl From<GroupArg> for Group {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::C22 => Group::C2x2,
            GroupArg::C23 => Group::C2x3,
            GroupArg::C24 => Group::C2x4,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the determinant of a C2^n assignment.
    Eval {
        #[arg(long)]
        n: u32,
        /// 2^n comma-separated integers.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        values: Vec<BigInt>,
        /// Print the factorization tree down to rank-1 leaves.
        #[arg(long)]
        tree: bool,
    },
    /// Decide membership in the value set of C2^2, C2^3 or C2^4.
    Classify {
        #[arg(allow_hyphen_values = true)]
        value: BigInt,
        #[arg(long, value_enum, default_value = "c2_4")]
        group: GroupArg,
        /// Seed for the factorization's random starting points.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print an explicit rank-4 assignment with the given determinant.
    Witness {
        #[arg(allow_hyphen_values = true)]
        value: BigInt,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Re-check a registered lemma (or `all`) by finite enumeration.
    Verify {
        #[arg(long)]
        lemma: String,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: u64,
        /// Print key=value records instead of summary lines.
        #[arg(long)]
        records: bool,
    },
    /// Enumerate alphabet^(2^n) and check every determinant.
    Sweep {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        alphabet: Vec<i64>,
        #[arg(long, default_value_t = std::thread::available_parallelism().map_or(1, |n| n.get()))]
        jobs: usize,
        #[arg(long, default_value_t = 1 << 16)]
        chunk_size: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Continue from `<out>.ckpt` if it exists.
        #[arg(long)]
        resume: bool,
        #[arg(long, hide = true)]
        stop_after_chunks: Option<u64>,
    },
    /// Build and evaluate witnesses for all class parameters up to a bound.
    Coverage {
        #[arg(long, default_value_t = 1)]
        bound: u64,
    },
    /// List the elements of A = {(8k-3)(8l+3)} up to a bound.
    ASet {
        #[arg(long)]
        bound: u64,
    },
}

/// A failure that maps to exit code 2.
struct Undecided(String);

impl<E: std::fmt::Display> From<E> for Undecided {
    fn from(e: E) -> Self {
        Self(e.to_string())
    }
}

type Outcome = Result<bool, Undecided>;

fn policy(seed: Option<u64>) -> FactorPolicy {
    seed.map_or_else(FactorPolicy::default, FactorPolicy::with_seed)
}

fn max_rank() -> Result<u32, Undecided> {
    match std::env::var("GDET_MAX_RANK") {
        Ok(s) => s
            .parse()
            .map_err(|_| Undecided(format!("GDET_MAX_RANK={s:?} is not a rank"))),
        Err(_) => Ok(DEFAULT_MAX_RANK),
    }
}

fn eval(n: u32, values: Vec<BigInt>, tree: bool) -> Outcome {
    let a = Assignment::with_max_rank(n, values, max_rank()?)?;
    if tree {
        print!("{}", FactorTree::build(&a));
    } else {
        println!("{}", det_group(&a));
    }
    Ok(true)
}

fn run_classify(value: &BigInt, group: GroupArg, seed: Option<u64>) -> Outcome {
    let verdict = classify(group.into(), value, &policy(seed))?;
    println!("{verdict}");
    Ok(verdict.is_member())
}

fn run_witness(value: &BigInt, seed: Option<u64>) -> Outcome {
    let policy = policy(seed);
    match witness_for(value, &policy)? {
        Some(w) => {
            println!("{}", w.family);
            println!("{}", w.assignment);
            Ok(true)
        }
        None => {
            // the classifier has the reason
            println!("{}", gdet_core::classify_c24(value, &policy)?);
            Ok(false)
        }
    }
}

fn run_verify(lemma: &str, window: u64, records: bool) -> Outcome {
    let reports = if lemma == "all" {
        verify_all(window)?
    } else {
        vec![verify_lemma(lemma, window)?]
    };
    for r in &reports {
        if records {
            println!("{}", r.record());
        } else {
            println!("{}", r.summary_line());
        }
    }
    Ok(reports.iter().all(|r| r.passed()))
}

#[allow(clippy::too_many_arguments)]
fn run_sweep(
    n: u32,
    alphabet: Vec<i64>,
    jobs: usize,
    chunk_size: u64,
    out: Option<PathBuf>,
    resume: bool,
    stop_after_chunks: Option<u64>,
) -> Outcome {
    let mut config = SweepConfig::new(n, alphabet);
    config.workers = jobs;
    config.chunk_size = chunk_size;
    config.output = out;
    config.resume = resume;
    config.chunk_limit = stop_after_chunks;
    let r = sweep(&config)?;
    println!(
        "tuples={} distinct={} violations={} flagged={} chunks={}/{}{}",
        r.total_enumerated,
        r.distinct_values.len(),
        r.violations.len(),
        r.flagged.len(),
        r.chunks_completed,
        r.chunks_total,
        if r.complete() { "" } else { " incomplete" }
    );
    for v in &r.violations {
        println!(
            "violation {} value={} tuple={}",
            v.assertion,
            v.value,
            v.tuple
                .iter()
                .map(i64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        );
    }
    for (v, reason) in &r.flagged {
        println!("flagged value={v} reason={reason}");
    }
    Ok(r.violations.is_empty())
}

fn run_coverage(bound: u64) -> Outcome {
    let report = coverage_check(bound, &FactorPolicy::default());
    for (family, count) in &report.per_family {
        println!("{family} {count}");
    }
    for failure in &report.failures {
        println!("failure {failure}");
    }
    println!(
        "checked={} failures={}",
        report.checked,
        report.failures.len()
    );
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval { n, values, tree } => eval(n, values, tree),
        Command::Classify { value, group, seed } => run_classify(&value, group, seed),
        Command::Witness { value, seed } => run_witness(&value, seed),
        Command::Verify {
            lemma,
            window,
            records,
        } => run_verify(&lemma, window, records),
        Command::Sweep {
            n,
            alphabet,
            jobs,
            chunk_size,
            out,
            resume,
            stop_after_chunks,
        } => run_sweep(
            n,
            alphabet,
            jobs,
            chunk_size,
            out,
            resume,
            stop_after_chunks,
        ),
        Command::Coverage { bound } => run_coverage(bound),
        Command::ASet { bound } => {
            let set = a_set_oracle(bound);
            println!(
                "{}",
                set.iter()
                    .map(i128::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            );
            Ok(true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Undecided(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
