//! Cartesian parameter sweeps and the strategy × placement summary table.

use serde::Serialize;

use super::{monte_carlo, HarnessError, MetricsReport, Placement, Scenario};
use crate::channel::{AntennaPattern, ChannelConfig};
use crate::localization::Strategy;

/// A sweep dimension. Each axis runs over a fixed value set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// CUM, CHLM, CLS.
    Strategy,
    /// On, Mid, Far.
    Placement,
    /// 30, 50, 70 m.
    Altitude,
    /// Omni (2 dBi), half-wave dipole.
    Antenna,
}

impl std::str::FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strategy" => Ok(Axis::Strategy),
            "placement" => Ok(Axis::Placement),
            "altitude" => Ok(Axis::Altitude),
            "antenna" => Ok(Axis::Antenna),
            other => Err(format!(
                "unknown sweep axis `{other}` (expected strategy, placement, altitude or antenna)"
            )),
        }
    }
}

pub const SWEEP_ALTITUDES: [f64; 3] = [30.0, 50.0, 70.0];
pub const SWEEP_PLACEMENTS: [Placement; 3] = [Placement::On, Placement::Mid, Placement::Far];

/// Applies an antenna choice to both ends of the link.
pub fn set_antenna(channel: &mut ChannelConfig, dipole: bool) {
    let pattern = if dipole {
        AntennaPattern::HalfWaveDipole
    } else {
        AntennaPattern::Omni { gain_dbi: 2.0 }
    };
    channel.tx_pattern = pattern;
    channel.rx_pattern = pattern;
}

pub fn antenna_label(channel: &ChannelConfig) -> &'static str {
    match (
        channel.tx_pattern.is_dipole(),
        channel.rx_pattern.is_dipole(),
    ) {
        (true, true) => "dipole",
        (false, false) => "omni",
        _ => "mixed",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub scenario: Scenario,
    pub report: MetricsReport,
}

/// One Monte-Carlo batch per point of the Cartesian product of `axes`,
/// ordered antenna → altitude → placement → strategy (outermost first).
/// Axes not listed keep the base scenario's value; no axes means one run.
pub fn sweep(
    base: &Scenario,
    axes: &[Axis],
    threads: usize,
) -> Result<Vec<SweepPoint>, HarnessError> {
    let has = |a: Axis| axes.contains(&a);
    let antennas: Vec<Option<bool>> = if has(Axis::Antenna) {
        vec![Some(false), Some(true)]
    } else {
        vec![None]
    };
    let altitudes: Vec<Option<f64>> = if has(Axis::Altitude) {
        SWEEP_ALTITUDES.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };
    let placements: Vec<Option<Placement>> = if has(Axis::Placement) {
        SWEEP_PLACEMENTS.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };
    let strategies: Vec<Option<Strategy>> = if has(Axis::Strategy) {
        Strategy::ALL.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };

    let seeds = base.seeds.seeds();
    let mut out = Vec::new();
    for &antenna in &antennas {
        for &altitude in &altitudes {
            for &placement in &placements {
                for &strategy in &strategies {
                    let mut scenario = base.clone();
                    if let Some(dipole) = antenna {
                        set_antenna(&mut scenario.channel, dipole);
                    }
                    if let Some(h) = altitude {
                        scenario.trajectory.altitude_m = h;
                    }
                    if let Some(p) = placement {
                        scenario.target.placement = p;
                    }
                    if let Some(s) = strategy {
                        scenario.strategy = s;
                    }
                    let prepared = scenario.prepare()?;
                    let report = monte_carlo(&prepared, &seeds, threads)?.report;
                    out.push(SweepPoint { scenario, report });
                }
            }
        }
    }
    Ok(out)
}

/// One row of the performance summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    /// `<STRATEGY>-<Placement>`, e.g. `CUM-On`.
    pub algorithm: String,
    pub antenna: String,
    pub altitude_m: f64,
    pub flight_time_s: Option<f64>,
    pub flight_distance_m: Option<f64>,
    pub long_term_mean_m: Option<f64>,
    pub long_term_var_m2: Option<f64>,
}

pub fn summary_row(scenario: &Scenario, report: &MetricsReport) -> SummaryRow {
    SummaryRow {
        algorithm: format!("{}-{}", report.strategy, report.placement),
        antenna: antenna_label(&scenario.channel).to_string(),
        altitude_m: scenario.trajectory.altitude_m,
        flight_time_s: report.time_to_threshold_s,
        flight_distance_m: report.distance_to_threshold_m,
        long_term_mean_m: report.long_term_rmse_m,
        long_term_var_m2: report.long_term_var_m2,
    }
}

pub fn summary_table(points: &[SweepPoint]) -> Vec<SummaryRow> {
    points
        .iter()
        .map(|p| summary_row(&p.scenario, &p.report))
        .collect()
}
