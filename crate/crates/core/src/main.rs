use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dyncolor::harness::{self, Family, GeneratorKind, RunConfig, Workload};
use dyncolor::{ColorParams, PolicyKind, StrategyKind};

#[derive(Parser)]
#[command(
    name = "dyncolor",
    version,
    about = "Implicit coloring of dynamic graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Det,
    Rand,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    Static,
    Amortized,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a workload file and emit a JSONL report.
    Run {
        workload: PathBuf,
        #[arg(long, value_enum, default_value = "det")]
        policy: PolicyArg,
        #[arg(long, value_enum, default_value = "amortized")]
        orientation: OrientationArg,
        /// Number of vertex parts, each with its own palette range.
        #[arg(long, default_value_t = 1)]
        partition: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6.0)]
        threshold_mult: f64,
        #[arg(long, default_value_t = 9.0)]
        palette_mult: f64,
        #[arg(long, default_value_t = 4.0)]
        cap_multiplier: f64,
        #[arg(long, default_value_t = 1)]
        rebuild_interval: usize,
        /// Full invariant checks after every event; the first failure aborts.
        #[arg(long)]
        strict: bool,
        /// Add wall-clock timings to the summary line.
        #[arg(long)]
        timings: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a synthetic workload.
    Generate {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, global = true, default_value_t = 0)]
        seed: u64,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Empirical distribution of the first randomized recursion on one node.
    CoinExperiment {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Suggested part count for an arboricity estimate.
    ChooseK {
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Random insertions up to m edges with queries and periodic sweeps.
    Gnm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Mixed inserts and deletes hovering around a target edge count.
    Churn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ops: usize,
        #[arg(long)]
        target_m: usize,
    },
    /// One graph family built up, then queried node by node.
    Stress {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        family: Family,
    },
    /// Funnel blocks that push many processed in-arcs onto single nodes.
    Vstar {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 11)]
        fan_in: usize,
    },
}

fn output(path: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            workload,
            policy,
            orientation,
            partition,
            seed,
            threshold_mult,
            palette_mult,
            cap_multiplier,
            rebuild_interval,
            strict,
            timings,
            out,
        } => {
            let w = match Workload::read(&workload) {
                Ok(w) => w,
                Err(e) => return fail(2, format!("{}: {e}", workload.display())),
            };
            let config = RunConfig {
                policy: match policy {
                    PolicyArg::Det => PolicyKind::Deterministic,
                    PolicyArg::Rand => PolicyKind::Randomized,
                },
                orientation: match orientation {
                    OrientationArg::Static => StrategyKind::StaticRecompute,
                    OrientationArg::Amortized => StrategyKind::AmortizedFlip,
                },
                partition_k: partition,
                seed,
                params: ColorParams {
                    threshold_mult,
                    palette_mult,
                },
                cap_multiplier,
                rebuild_interval,
                strict,
                timings,
            };
            let report = match harness::run(&w, &config) {
                Ok(r) => r,
                Err(e) => return fail(e.exit_code() as u8, e),
            };
            let written = output(out.as_ref()).and_then(|mut o| {
                report.write_jsonl(&mut o)?;
                o.flush()
            });
            if let Err(e) = written {
                return fail(2, e);
            }
            for v in &report.violations {
                eprintln!("violation: {v}");
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Generate { kind, seed, out } => {
            let kind = match kind {
                GenKind::Gnm { n, m } => GeneratorKind::GnmSweep { n, m },
                GenKind::Churn { n, ops, target_m } => GeneratorKind::Churn { n, ops, target_m },
                GenKind::Stress { n, family } => GeneratorKind::AmortizedStress { n, family },
                GenKind::Vstar { n, d, fan_in } => GeneratorKind::VstarStress { n, d, fan_in },
            };
            let w = match harness::generate(kind, seed) {
                Ok(w) => w,
                Err(e) => return fail(2, e),
            };
            match output(out.as_ref()).and_then(|mut o| {
                o.write_all(w.to_text().as_bytes())?;
                o.flush()
            }) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(2, e),
            }
        }
        Command::CoinExperiment { d, trials, seed } => {
            match harness::coin_experiment(d, trials, seed) {
                Ok(exp) => {
                    println!(
                        "{}",
                        serde_json::to_string(&exp).expect("plain data serializes")
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => fail(2, e),
            }
        }
        Command::ChooseK { alpha, n } => match dyncolor::partition::choose_k(alpha, n) {
            Ok(k) => {
                println!("{k}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(2, e),
        },
    }
}
