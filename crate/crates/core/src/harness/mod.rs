//! Workload replay, generation and the coin experiment.

mod coin;
mod generate;
mod run;
mod workload;

pub use coin::{coin_experiment, CoinError, CoinExperiment, MIN_TRIALS};
pub use generate::{generate, Family, GenerateError, GeneratorKind};
pub use run::{
    run, EpochStat, QueryRecord, RunConfig, RunError, RunReport, RunSummary, Timings,
    AP_CHECK_LIMIT,
};
pub use workload::{ParseError, Workload, WorkloadEvent, WorkloadReadError};
