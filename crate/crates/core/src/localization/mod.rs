//! Range inversion, anchor selection and linear least-squares positioning.

mod anchors;
mod inversion;
mod lls;

pub use anchors::{
    select_anchors, select_anchors_chlm, select_anchors_cls, select_anchors_cum, select_reference,
    CHLM_WINDOW, CLS_COUNT,
};
pub use inversion::{invert_distance, DistanceInverter, Inversion, InversionConfig};
pub use lls::{build_lls_system, solve_lls, LlsSystem, RANK_THRESHOLD};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::Position3D;

#[derive(Debug, Error, PartialEq)]
pub enum LocalizationError {
    #[error("{strategy:?} needs at least {need} indices, have {have}")]
    TooFewIndices {
        strategy: Strategy,
        need: usize,
        have: usize,
    },
    #[error("reference selection needs at least one candidate")]
    EmptyCandidates,
    #[error("index {0} has no measurement record")]
    UnknownIndex(usize),
    #[error("anchor geometry is rank deficient (singular value ratio {indicator:e})")]
    RankDeficient { indicator: f64 },
    #[error("invalid inversion configuration: {0}")]
    InvalidInversion(String),
}

/// Anchor-selection strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Every index flown so far.
    Cum,
    /// Thirteen-index window that keeps every passed waypoint.
    Chlm,
    /// The five indices with the smallest estimated range.
    Cls,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Cum, Strategy::Chlm, Strategy::Cls];

    /// Smallest current index at which the strategy can form a system.
    pub fn min_indices(self) -> usize {
        match self {
            Strategy::Cum => 3,
            Strategy::Chlm => CHLM_WINDOW,
            Strategy::Cls => CLS_COUNT,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Strategy::Cum => "CUM",
            Strategy::Chlm => "CHLM",
            Strategy::Cls => "CLS",
        }
    }
}

/// How the reference anchor `r` is picked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferencePolicy {
    /// Candidate with the smallest estimated range.
    #[default]
    MinEstimatedDistance,
    /// Candidate truly closest to the target. Uses ground truth.
    OracleTrueClosest,
}

/// One measurement along the trajectory. The `true_*` fields are ground
/// truth for metrics; only [`ReferencePolicy::OracleTrueClosest`] reads them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementRecord {
    pub index: usize,
    pub uav_position: Position3D,
    pub measured_pl_db: f64,
    pub estimated_d2d: f64,
    /// The inversion minimum sat on the edge of its search range.
    pub inversion_clamped: bool,
    pub true_d2d: f64,
    pub true_d3d: f64,
    /// Elevation of the direct ray, radians.
    pub true_elevation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnchorSelection {
    pub strategy: Strategy,
    pub indices: Vec<usize>,
    pub reference_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalizationEstimate {
    pub x_hat: f64,
    pub y_hat: f64,
    pub anchor_count: usize,
    /// Smallest over largest singular value of the system matrix.
    pub condition_indicator: f64,
}

impl LocalizationEstimate {
    pub fn error_to(&self, target: &Position3D) -> f64 {
        (self.x_hat - target.x).hypot(self.y_hat - target.y)
    }
}

fn record(
    records: &[MeasurementRecord],
    index: usize,
) -> Result<&MeasurementRecord, LocalizationError> {
    index
        .checked_sub(1)
        .and_then(|k| records.get(k))
        .filter(|r| r.index == index)
        .ok_or(LocalizationError::UnknownIndex(index))
}

/// Anchor selection, reference selection, system construction and solve for
/// the current index `records.len()`. `records[k]` must hold index `k + 1`.
pub fn estimate_target(
    records: &[MeasurementRecord],
    strategy: Strategy,
    policy: ReferencePolicy,
    passed_waypoints: &[usize],
) -> Result<(LocalizationEstimate, AnchorSelection), LocalizationError> {
    let indices = select_anchors(strategy, records, passed_waypoints)?;
    let reference_index = select_reference(&indices, records, policy)?;
    let selection = AnchorSelection {
        strategy,
        indices,
        reference_index,
    };
    let system = build_lls_system(&selection, records)?;
    let estimate = solve_lls(&system)?;
    Ok((estimate, selection))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(positions: &[(f64, f64)], d_hat: &[f64]) -> Vec<MeasurementRecord> {
        positions
            .iter()
            .zip(d_hat)
            .enumerate()
            .map(|(k, (&(x, y), &d))| MeasurementRecord {
                index: k + 1,
                uav_position: Position3D::new(x, y, 30.0),
                measured_pl_db: 0.0,
                estimated_d2d: d,
                inversion_clamped: false,
                true_d2d: d,
                true_d3d: d,
                true_elevation: 0.0,
            })
            .collect()
    }

    #[test]
    fn chlm_needs_thirteen() {
        let pos: Vec<(f64, f64)> = (0..12).map(|k| (k as f64, (k * k) as f64)).collect();
        let recs = synthetic(&pos, &[10.0; 12]);
        assert_eq!(
            estimate_target(&recs, Strategy::Chlm, ReferencePolicy::default(), &[]),
            Err(LocalizationError::TooFewIndices {
                strategy: Strategy::Chlm,
                need: 13,
                have: 12
            })
        );
    }

    #[test]
    fn cls_with_equal_ranges_uses_first_five() {
        let pos = [
            (0.0, 0.0),
            (10.0, 0.0),
            (10.0, 10.0),
            (0.0, 10.0),
            (5.0, 20.0),
            (7.0, 3.0),
        ];
        let recs = synthetic(&pos, &[50.0; 6]);
        let (est, sel) =
            estimate_target(&recs, Strategy::Cls, ReferencePolicy::default(), &[]).unwrap();
        assert_eq!(sel.indices, vec![1, 2, 3, 4, 5]);
        assert_eq!(sel.reference_index, 1);
        assert!(est.x_hat.is_finite() && est.y_hat.is_finite());
    }

    #[test]
    fn cls_on_a_line_is_rank_deficient() {
        let pos: Vec<(f64, f64)> = (0..6).map(|k| (k as f64 * 10.0, 0.0)).collect();
        let recs = synthetic(&pos, &[5.0, 4.0, 3.0, 2.0, 1.0, 9.0]);
        assert!(matches!(
            estimate_target(&recs, Strategy::Cls, ReferencePolicy::default(), &[]),
            Err(LocalizationError::RankDeficient { .. })
        ));
    }

    #[test]
    fn unknown_index_is_reported() {
        let recs = synthetic(&[(0.0, 0.0)], &[1.0]);
        assert_eq!(record(&recs, 2), Err(LocalizationError::UnknownIndex(2)));
        assert_eq!(record(&recs, 0), Err(LocalizationError::UnknownIndex(0)));
        assert!(record(&recs, 1).is_ok());
    }
}
