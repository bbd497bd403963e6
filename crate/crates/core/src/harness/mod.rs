//! Seeded missions, Monte-Carlo batches and the metrics reported on them.

mod artifacts;
mod metrics;
mod mission;
mod scenario;
mod sweep;

pub use artifacts::{
    binned_csv, cdf_csv, report_json, summary_csv, trace_csv, write_atomic, write_run_artifacts,
    RUN_ARTIFACTS,
};
pub use metrics::{
    aggregate_rmse, binned_rmse, binned_rmse_samples, empirical_cdf, long_term_error,
    long_term_stats, time_to_threshold, trace_series, Bin, BinKey, BinValue, Crossing,
    LongTermStats, RmsePoint,
};
pub use mission::{
    monte_carlo, run_mission, MetricsReport, MissionTrace, MonteCarloResult, TraceEntry,
};
pub use scenario::{
    InversionSettings, MetricsSettings, Placement, PreparedScenario, Scenario, SeedSpec, TargetSpec,
};
pub use sweep::{
    antenna_label, set_antenna, summary_row, summary_table, sweep, Axis, SummaryRow, SweepPoint,
    SWEEP_ALTITUDES, SWEEP_PLACEMENTS,
};

use thiserror::Error;

use crate::channel::ChannelError;
use crate::localization::LocalizationError;
use crate::trajectory::TrajectoryError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
    #[error(transparent)]
    Localization(#[from] LocalizationError),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("{0} needs at least one value")]
    EmptyInput(&'static str),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}
