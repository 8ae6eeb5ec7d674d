//! Error type shared by all modules of the crate.

use crate::pipesim::SimRun;

/// Errors raised by model constructors, depth optimizers and simulators.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("pipeline depth must be at least 1")]
    InvalidDepth,
    #[error("device count must be at least 1")]
    InvalidDeviceCount,
    #[error("workload must contain at least one element")]
    EmptyWorkload,
    #[error("{name} must be finite and non-negative, got {value}")]
    NegativeTiming { name: &'static str, value: f64 },
    #[error("logical delay and latch overhead cannot both be zero")]
    ZeroTimings,
    #[error("probability must lie in [0, 1], got {0}")]
    ProbabilityRange(f64),
    #[error("the optimal-depth formula requires a positive latch overhead (the time function has no finite minimum otherwise)")]
    RequiresPositiveLatchOverhead,
    #[error("the exact optimal-depth formula requires a positive logical delay")]
    RequiresPositiveLogicalDelay,
    #[error("workload of {got} element(s) is too small, need at least {min}")]
    WorkloadTooSmall { got: usize, min: usize },
    #[error("fraction {index} is invalid: {value}")]
    InvalidFraction { index: usize, value: f64 },
    #[error("fractions must sum to 1, got {0}")]
    FractionSum(f64),
    #[error("hazard distribution must have at least one type")]
    EmptyDistribution,
    #[error("hazard probabilities must sum to 1, got {0}")]
    DistributionSum(f64),
    #[error("Monte Carlo estimation needs at least 2 trials, got {0}")]
    TooFewTrials(usize),
    #[error("channel capacity must be at least 1")]
    InvalidChannelCapacity,
    #[error("depth range is empty")]
    EmptyRange,
    #[error("scale must be finite and positive, got {0}")]
    InvalidScale(f64),
    #[error("trace is malformed: {0}")]
    MalformedTrace(String),
    #[error("foata cap must be at least 1")]
    InvalidCap,
    #[error("sweep rows must have strictly increasing depths and non-negative times")]
    InvalidSweepRows,
    #[error("malformed reservation-table csv: {0}")]
    MalformedTableCsv(String),
    #[error("simulation worker failed: {0}")]
    WorkerFailure(String),
    #[error("simulation timed out after {waited_ms} ms; partial timeline attached")]
    SimulationTimeout {
        waited_ms: u64,
        partial: Box<SimRun>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
