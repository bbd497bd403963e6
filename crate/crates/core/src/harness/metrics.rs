//! Error aggregation: RMSE series, binned RMSE, threshold crossings, CDFs.

use serde::Serialize;

use super::{HarnessError, MissionTrace};

/// Aggregated localization RMSE at one trajectory index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RmsePoint {
    pub index: usize,
    pub flown_distance_m: f64,
    pub flight_time_s: f64,
    /// Absent unless every mission produced an estimate at this index.
    pub rmse_m: Option<f64>,
    pub count: usize,
}

/// Per-index RMSE across missions, `√(mean of squared errors)`. All traces
/// must walk the same trajectory.
pub fn aggregate_rmse(traces: &[MissionTrace]) -> Vec<RmsePoint> {
    let Some(first) = traces.first() else {
        return Vec::new();
    };
    first
        .entries
        .iter()
        .enumerate()
        .map(|(k, entry)| {
            let mut sum = 0.0;
            let mut count = 0;
            for trace in traces {
                if let Some(e) = trace.entries[k].position_error_m {
                    sum += e * e;
                    count += 1;
                }
            }
            RmsePoint {
                index: entry.index,
                flown_distance_m: entry.flown_distance_m,
                flight_time_s: entry.flight_time_s,
                rmse_m: (count == traces.len()).then(|| (sum / count as f64).sqrt()),
                count,
            }
        })
        .collect()
}

/// The single-mission error series in [`RmsePoint`] form.
pub fn trace_series(trace: &MissionTrace) -> Vec<RmsePoint> {
    aggregate_rmse(std::slice::from_ref(trace))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub index: usize,
    pub flight_time_s: f64,
    pub flown_distance_m: f64,
}

/// First index from which the RMSE stays at or below `threshold_m` through
/// the end of the series. A missing RMSE counts as above threshold.
pub fn time_to_threshold(series: &[RmsePoint], threshold_m: f64) -> Option<Crossing> {
    let mut crossing = None;
    for point in series.iter().rev() {
        match point.rmse_m {
            Some(r) if r <= threshold_m => crossing = Some(point),
            _ => break,
        }
    }
    crossing.map(|p| Crossing {
        index: p.index,
        flight_time_s: p.flight_time_s,
        flown_distance_m: p.flown_distance_m,
    })
}

/// Mean position error over the trailing `fraction` of a mission's indices,
/// skipping indices without an estimate. `None` when none have one.
pub fn long_term_error(trace: &MissionTrace, fraction: f64) -> Option<f64> {
    let n = trace.entries.len();
    let window = ((n as f64 * fraction).ceil() as usize).clamp(1, n.max(1));
    let errors: Vec<f64> = trace.entries[n.saturating_sub(window)..]
        .iter()
        .filter_map(|e| e.position_error_m)
        .collect();
    (!errors.is_empty()).then(|| errors.iter().sum::<f64>() / errors.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LongTermStats {
    pub mean_m: f64,
    /// Population variance across missions.
    pub variance_m2: f64,
    /// Per-mission long-term errors, in trace order; missions without any
    /// trailing estimate are left out.
    pub per_mission: Vec<f64>,
}

pub fn long_term_stats(traces: &[MissionTrace], fraction: f64) -> Option<LongTermStats> {
    let per_mission: Vec<f64> = traces
        .iter()
        .filter_map(|t| long_term_error(t, fraction))
        .collect();
    if per_mission.is_empty() {
        return None;
    }
    let n = per_mission.len() as f64;
    let mean = per_mission.iter().sum::<f64>() / n;
    let variance = per_mission.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Some(LongTermStats {
        mean_m: mean,
        variance_m2: variance,
        per_mission,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bin {
    pub center: f64,
    pub rmse: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinKey {
    /// True horizontal UAV–target distance, m.
    TrueDistance,
    /// True elevation of the direct ray, degrees.
    TrueElevationAngle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinValue {
    /// Range estimate minus true horizontal distance.
    DistanceError,
    /// Position error of the estimate at that index.
    LocalizationError,
}

/// RMSE of `value` over uniform bins of `key` (bin `k` covers
/// `[k·w, (k+1)·w)`). Empty bins are omitted; output is ordered by center.
pub fn binned_rmse_samples(
    samples: &[(f64, f64)],
    bin_width: f64,
) -> Result<Vec<Bin>, HarnessError> {
    if samples.is_empty() {
        return Err(HarnessError::EmptyInput("binned_rmse"));
    }
    if !(bin_width > 0.0) {
        return Err(HarnessError::InvalidScenario(
            "bin width must be positive".into(),
        ));
    }
    let mut bins: std::collections::BTreeMap<i64, (f64, usize)> = Default::default();
    for &(key, value) in samples {
        let slot = bins.entry((key / bin_width).floor() as i64).or_default();
        slot.0 += value * value;
        slot.1 += 1;
    }
    Ok(bins
        .into_iter()
        .map(|(k, (sum, count))| Bin {
            center: (k as f64 + 0.5) * bin_width,
            rmse: (sum / count as f64).sqrt(),
            count,
        })
        .collect())
}

/// Binned RMSE over every index of every mission.
pub fn binned_rmse(
    traces: &[MissionTrace],
    key: BinKey,
    value: BinValue,
    bin_width: f64,
) -> Result<Vec<Bin>, HarnessError> {
    let samples: Vec<(f64, f64)> = traces
        .iter()
        .flat_map(|t| t.entries.iter())
        .filter_map(|e| {
            let m = &e.measurement;
            let k = match key {
                BinKey::TrueDistance => m.true_d2d,
                BinKey::TrueElevationAngle => m.true_elevation.to_degrees(),
            };
            let v = match value {
                BinValue::DistanceError => Some(m.estimated_d2d - m.true_d2d),
                BinValue::LocalizationError => e.position_error_m,
            }?;
            Some((k, v))
        })
        .collect();
    binned_rmse_samples(&samples, bin_width)
}

/// Right-continuous empirical CDF: one `(value, k/n)` pair per distinct
/// value, `k` counting samples ≤ value.
pub fn empirical_cdf(values: &[f64]) -> Result<Vec<(f64, f64)>, HarnessError> {
    if values.is_empty() {
        return Err(HarnessError::EmptyInput("empirical_cdf"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (k, v) in sorted.iter().enumerate() {
        let p = (k + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == *v => last.1 = p,
            _ => out.push((*v, p)),
        }
    }
    Ok(out)
}
