use rayon::prelude::*;
use serde::Serialize;

use super::metrics::{
    aggregate_rmse, binned_rmse, empirical_cdf, long_term_stats, time_to_threshold, trace_series,
    Bin, BinKey, BinValue, RmsePoint,
};
use super::{HarnessError, PreparedScenario};
use crate::channel::{link_geometry, measured_path_loss, ShadowingSource};
use crate::localization::{estimate_target, LocalizationEstimate, MeasurementRecord};
use crate::trajectory::flight_time;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    pub index: usize,
    pub flown_distance_m: f64,
    pub flight_time_s: f64,
    /// Absent while the strategy cannot yet form a system, or when the
    /// anchor geometry is rank deficient.
    pub estimate: Option<LocalizationEstimate>,
    pub position_error_m: Option<f64>,
    pub measurement: MeasurementRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MissionTrace {
    pub seed: u64,
    pub entries: Vec<TraceEntry>,
}

/// Flies the trajectory once. Each index takes one shadowed measurement,
/// inverts it to a range, and attempts a position estimate from everything
/// measured so far.
pub fn run_mission(prepared: &PreparedScenario, seed: u64) -> Result<MissionTrace, HarnessError> {
    let scenario = &prepared.scenario;
    let target = prepared.target;
    let mut noise = ShadowingSource::new(seed);
    let samples = prepared.plan.samples();
    let mut records: Vec<MeasurementRecord> = Vec::with_capacity(samples.len());
    let mut passed_waypoints = Vec::new();
    let mut entries = Vec::with_capacity(samples.len());

    for sample in samples {
        let geom = link_geometry(&target, &sample.position)?;
        let measured =
            measured_path_loss(&scenario.channel, &target, &sample.position, &mut noise)?;
        let inversion = prepared.inverter.invert(measured);
        records.push(MeasurementRecord {
            index: sample.index,
            uav_position: sample.position,
            measured_pl_db: measured,
            estimated_d2d: inversion.distance,
            inversion_clamped: inversion.clamped,
            true_d2d: geom.d_2d,
            true_d3d: geom.d_los,
            true_elevation: geom.theta_l,
        });
        // The start point is not "passed"; later waypoints are.
        if sample.waypoint_ordinal.is_some_and(|j| j >= 2) {
            passed_waypoints.push(sample.index);
        }

        let estimate = if records.len() >= scenario.strategy.min_indices() {
            estimate_target(
                &records,
                scenario.strategy,
                scenario.reference_policy,
                &passed_waypoints,
            )
            .ok()
            .map(|(est, _)| est)
        } else {
            None
        };
        entries.push(TraceEntry {
            index: sample.index,
            flown_distance_m: sample.arc_length,
            flight_time_s: flight_time(sample.arc_length, &scenario.kinematics),
            position_error_m: estimate.map(|e| e.error_to(&target)),
            estimate,
            measurement: records.last().expect("just pushed").clone(),
        });
    }
    Ok(MissionTrace { seed, entries })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub strategy: String,
    pub placement: String,
    pub altitude_m: f64,
    pub seeds: usize,
    pub drod: Vec<Bin>,
    pub droa: Vec<Bin>,
    pub lrod: Vec<Bin>,
    pub lroa: Vec<Bin>,
    pub rmse_vs_flown: Vec<RmsePoint>,
    pub long_term_rmse_m: Option<f64>,
    pub long_term_var_m2: Option<f64>,
    /// Crossing of the seed-aggregated RMSE curve.
    pub time_to_threshold_s: Option<f64>,
    pub distance_to_threshold_m: Option<f64>,
    /// Per-mission long-term errors, as a CDF.
    pub long_term_cdf: Vec<(f64, f64)>,
    /// Per-mission sustained crossing times, as a CDF over the missions
    /// that cross.
    pub flight_time_cdf: Vec<(f64, f64)>,
    pub missions_reaching_threshold: usize,
}

impl MetricsReport {
    pub fn from_traces(
        prepared: &PreparedScenario,
        traces: &[MissionTrace],
    ) -> Result<Self, HarnessError> {
        if traces.is_empty() {
            return Err(HarnessError::EmptyInput("metrics report"));
        }
        let s = &prepared.scenario;
        let m = &s.metrics;
        let rmse_vs_flown = aggregate_rmse(traces);
        let crossing = time_to_threshold(&rmse_vs_flown, m.rmse_threshold_m);
        let long_term = long_term_stats(traces, m.long_term_fraction);
        let crossing_times: Vec<f64> = traces
            .iter()
            .filter_map(|t| time_to_threshold(&trace_series(t), m.rmse_threshold_m))
            .map(|c| c.flight_time_s)
            .collect();
        // Localization bins are empty when no mission ever produced an estimate.
        let or_empty = |r: Result<Vec<Bin>, HarnessError>| match r {
            Err(HarnessError::EmptyInput(_)) => Ok(Vec::new()),
            other => other,
        };
        Ok(Self {
            strategy: s.strategy.label().to_string(),
            placement: s.target.placement.label().to_string(),
            altitude_m: prepared.plan.altitude(),
            seeds: traces.len(),
            drod: binned_rmse(
                traces,
                BinKey::TrueDistance,
                BinValue::DistanceError,
                m.distance_bin_m,
            )?,
            droa: binned_rmse(
                traces,
                BinKey::TrueElevationAngle,
                BinValue::DistanceError,
                m.angle_bin_deg,
            )?,
            lrod: or_empty(binned_rmse(
                traces,
                BinKey::TrueDistance,
                BinValue::LocalizationError,
                m.distance_bin_m,
            ))?,
            lroa: or_empty(binned_rmse(
                traces,
                BinKey::TrueElevationAngle,
                BinValue::LocalizationError,
                m.angle_bin_deg,
            ))?,
            rmse_vs_flown,
            long_term_rmse_m: long_term.as_ref().map(|l| l.mean_m),
            long_term_var_m2: long_term.as_ref().map(|l| l.variance_m2),
            time_to_threshold_s: crossing.map(|c| c.flight_time_s),
            distance_to_threshold_m: crossing.map(|c| c.flown_distance_m),
            long_term_cdf: match &long_term {
                Some(l) => empirical_cdf(&l.per_mission)?,
                None => Vec::new(),
            },
            missions_reaching_threshold: crossing_times.len(),
            flight_time_cdf: if crossing_times.is_empty() {
                Vec::new()
            } else {
                empirical_cdf(&crossing_times)?
            },
        })
    }
}

#[derive(Debug, Clone)]
pub struct MonteCarloResult {
    pub traces: Vec<MissionTrace>,
    pub report: MetricsReport,
}

/// Runs one mission per seed on up to `threads` workers (0 = all cores).
/// Traces come back in seed-list order regardless of scheduling.
pub fn monte_carlo(
    prepared: &PreparedScenario,
    seeds: &[u64],
    threads: usize,
) -> Result<MonteCarloResult, HarnessError> {
    if seeds.is_empty() {
        return Err(HarnessError::EmptyInput("monte_carlo seeds"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::ThreadPool(e.to_string()))?;
    let traces = pool.install(|| {
        seeds
            .par_iter()
            .map(|&seed| run_mission(prepared, seed))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let report = MetricsReport::from_traces(prepared, &traces)?;
    Ok(MonteCarloResult { traces, report })
}
