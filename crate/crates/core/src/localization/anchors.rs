use std::collections::BTreeSet;

use super::{record, LocalizationError, MeasurementRecord, ReferencePolicy, Strategy};

/// Window size of the waypoint-anchored strategy.
pub const CHLM_WINDOW: usize = 13;
/// Number of closest-range anchors used by the CLS strategy.
pub const CLS_COUNT: usize = 5;

fn too_few(strategy: Strategy, have: usize) -> LocalizationError {
    LocalizationError::TooFewIndices {
        strategy,
        need: strategy.min_indices(),
        have,
    }
}

/// Reference anchor: smallest range under `policy`, ties to the smaller index.
pub fn select_reference(
    candidates: &[usize],
    records: &[MeasurementRecord],
    policy: ReferencePolicy,
) -> Result<usize, LocalizationError> {
    let mut best: Option<(f64, usize)> = None;
    for &index in candidates {
        let rec = record(records, index)?;
        let d = match policy {
            ReferencePolicy::MinEstimatedDistance => rec.estimated_d2d,
            ReferencePolicy::OracleTrueClosest => rec.true_d2d,
        };
        let better = match best {
            None => true,
            Some((bd, bi)) => d < bd || (d == bd && index < bi),
        };
        if better {
            best = Some((d, index));
        }
    }
    best.map(|(_, i)| i)
        .ok_or(LocalizationError::EmptyCandidates)
}

/// `{1, …, current}`.
pub fn select_anchors_cum(current: usize) -> Result<Vec<usize>, LocalizationError> {
    if current < Strategy::Cum.min_indices() {
        return Err(too_few(Strategy::Cum, current));
    }
    Ok((1..=current).collect())
}

/// Thirteen unique indices: every passed waypoint index (the most recent 13
/// when more have been passed) topped up with the latest consecutive indices
/// ending at `current`. A recent index that is already a waypoint index is
/// skipped and the window extends one further back. Returned ascending.
pub fn select_anchors_chlm(
    current: usize,
    passed_waypoints: &[usize],
) -> Result<Vec<usize>, LocalizationError> {
    if current < CHLM_WINDOW {
        return Err(too_few(Strategy::Chlm, current));
    }
    let passed: Vec<usize> = passed_waypoints
        .iter()
        .copied()
        .filter(|&w| w >= 1 && w <= current)
        .collect();
    let mut chosen: BTreeSet<usize> = passed.iter().rev().take(CHLM_WINDOW).copied().collect();
    let mut next = current;
    while chosen.len() < CHLM_WINDOW && next >= 1 {
        chosen.insert(next);
        next -= 1;
    }
    Ok(chosen.into_iter().collect())
}

/// The five indices with the smallest estimated range, ordered by
/// (range, index) ascending.
pub fn select_anchors_cls(records: &[MeasurementRecord]) -> Result<Vec<usize>, LocalizationError> {
    if records.len() < CLS_COUNT {
        return Err(too_few(Strategy::Cls, records.len()));
    }
    let mut order: Vec<&MeasurementRecord> = records.iter().collect();
    order.sort_by(|a, b| {
        a.estimated_d2d
            .total_cmp(&b.estimated_d2d)
            .then(a.index.cmp(&b.index))
    });
    Ok(order.iter().take(CLS_COUNT).map(|r| r.index).collect())
}

/// Dispatches on `strategy` for the current index `records.len()`.
pub fn select_anchors(
    strategy: Strategy,
    records: &[MeasurementRecord],
    passed_waypoints: &[usize],
) -> Result<Vec<usize>, LocalizationError> {
    let current = records.len();
    match strategy {
        Strategy::Cum => select_anchors_cum(current),
        Strategy::Chlm => select_anchors_chlm(current, passed_waypoints),
        Strategy::Cls => select_anchors_cls(records),
    }
}
