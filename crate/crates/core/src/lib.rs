//! Modeling and simulation toolkit for bounded computational pipelines.
//!
//! A pipeline of `p` uniform stages served by only `q <= p` functional
//! devices stalls whenever more than `q` stages could run at once. This
//! crate provides, for that setting:
//!
//! - [`model`]: exact processing-time formulas, the hyperbola decomposition
//!   of the time-vs-depth curve, optimal-depth calculators (exact,
//!   single-hazard, restart) and the concurrency-weighted speedup identity;
//! - [`schedule`]: a cycle-accurate reservation-table scheduler, the
//!   brute-force oracle behind the formulas;
//! - [`foata`]: a trace-monoid simulator whose capped normal-form height
//!   counts cycles independently of the scheduler;
//! - [`hazardsim`]: seeded Monte Carlo sampling of pipelines with random
//!   hazards, validating the expectation models;
//! - [`pipesim`]: an executable pipeline with per-stage workers, single-slot
//!   latch channels and a device permit pool, in deterministic virtual time
//!   or measured wall-clock time;
//! - [`sweep`]: depth-sweep series with CSV / SVG renderings.
//!
//! The three simulators and the closed-form model cross-check each other:
//! on any configuration the reservation-table completion, the normal-form
//! height and the virtual run duration must all equal the analytic cycle
//! count.

pub mod error;
pub mod foata;
pub mod hazardsim;
pub mod model;
pub mod pipesim;
pub mod schedule;
pub mod sweep;

pub use error::{Error, Result};
pub use foata::{foata_normal_form, independent, pipeline_trace, FoataForm, Op, Trace};
pub use hazardsim::{
    monte_carlo_mean, restart_distribution, sample_cycles, simplified_distribution,
    HazardDistribution, SampleStats,
};
pub use model::{
    bounded_cycles, bounded_time, generalized_amdahl, hyperbola_coeffs, optimal_depth_exact,
    optimal_depth_restart, optimal_depth_simplified, restart_time, simplified_error_bound,
    simplified_time, DepthRecommendation, HyperbolaCoeffs, PipelineConfig, RestartModel, Workload,
};
pub use pipesim::{
    empirical_depth_sweep, run_virtual, run_wallclock, ChannelSpec, SimMode, SimRun, StageInterval,
};
pub use schedule::{build_table, ActivityProfile, ReservationTable, TableFormat};
pub use sweep::{unit_label, SweepMeta, SweepResult, SweepRow};
