//! Linearized range equations and their least-squares solution.
//!
//! Subtracting the reference anchor's range equation from every other one
//! removes the quadratic terms in the unknown position, leaving an
//! overdetermined `(S−1) × 2` linear system. It is solved with a Givens QR
//! factorization accumulated row by row.

use super::{record, AnchorSelection, LocalizationError, LocalizationEstimate, MeasurementRecord};

/// Singular-value ratio below which the anchor geometry is rejected.
pub const RANK_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LlsSystem {
    pub a: Vec<[f64; 2]>,
    pub b: Vec<f64>,
}

pub fn build_lls_system(
    anchors: &AnchorSelection,
    records: &[MeasurementRecord],
) -> Result<LlsSystem, LocalizationError> {
    if anchors.indices.len() < 3 {
        return Err(LocalizationError::TooFewIndices {
            strategy: anchors.strategy,
            need: 3,
            have: anchors.indices.len(),
        });
    }
    let reference = record(records, anchors.reference_index)?;
    let (xr, yr) = (reference.uav_position.x, reference.uav_position.y);
    let dr = reference.estimated_d2d;

    let rows = anchors.indices.len() - 1;
    let mut a = Vec::with_capacity(rows);
    let mut b = Vec::with_capacity(rows);
    for &k in anchors
        .indices
        .iter()
        .filter(|&&k| k != anchors.reference_index)
    {
        let rec = record(records, k)?;
        let (xk, yk) = (rec.uav_position.x, rec.uav_position.y);
        let dk = rec.estimated_d2d;
        a.push([2.0 * (xk - xr), 2.0 * (yk - yr)]);
        // d_r² − d_k² + x_k² + y_k² − (x_r² + y_r²), differences factored
        b.push((dr - dk) * (dr + dk) + (xk - xr) * (xk + xr) + (yk - yr) * (yk + yr));
    }
    Ok(LlsSystem { a, b })
}

/// Singular values `(σ_max, σ_min)` of the upper-triangular `[[p, q], [0, r]]`.
fn triangular_singular_values(p: f64, q: f64, r: f64) -> (f64, f64) {
    let s = p * p + q * q + r * r;
    let d = (p * r).abs();
    let disc = ((s - 2.0 * d).max(0.0) * (s + 2.0 * d)).sqrt();
    let smax = ((s + disc) / 2.0).sqrt();
    let smin = if smax > 0.0 { d / smax } else { 0.0 };
    (smax, smin)
}

/// Minimizes `‖A·l − b‖₂` for two unknowns.
pub fn solve_lls(system: &LlsSystem) -> Result<LocalizationEstimate, LocalizationError> {
    // R = [[r00, r01], [0, r11]], qtb = Qᵀb restricted to the first two rows.
    let (mut r00, mut r01, mut r11) = (0.0f64, 0.0f64, 0.0f64);
    let mut qtb = [0.0f64; 2];
    for (row, &beta) in system.a.iter().zip(&system.b) {
        let (u0, mut u1, mut beta) = (row[0], row[1], beta);
        let rho = r00.hypot(u0);
        if rho > 0.0 {
            let (c, s) = (r00 / rho, u0 / rho);
            r00 = rho;
            let t = c * r01 + s * u1;
            u1 = -s * r01 + c * u1;
            r01 = t;
            let t = c * qtb[0] + s * beta;
            beta = -s * qtb[0] + c * beta;
            qtb[0] = t;
        }
        let rho = r11.hypot(u1);
        if rho > 0.0 {
            let (c, s) = (r11 / rho, u1 / rho);
            r11 = rho;
            qtb[1] = c * qtb[1] + s * beta;
        }
    }

    let (smax, smin) = triangular_singular_values(r00, r01, r11);
    let indicator = if smax > 0.0 { smin / smax } else { 0.0 };
    if !(indicator >= RANK_THRESHOLD) {
        return Err(LocalizationError::RankDeficient { indicator });
    }
    let y_hat = qtb[1] / r11;
    let x_hat = (qtb[0] - r01 * y_hat) / r00;
    Ok(LocalizationEstimate {
        x_hat,
        y_hat,
        anchor_count: system.a.len() + 1,
        condition_indicator: indicator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Position3D;
    use crate::localization::Strategy;

    fn anchors_for(positions: &[(f64, f64)], target: (f64, f64)) -> Vec<MeasurementRecord> {
        positions
            .iter()
            .enumerate()
            .map(|(k, &(x, y))| {
                let d = (x - target.0).hypot(y - target.1);
                MeasurementRecord {
                    index: k + 1,
                    uav_position: Position3D::new(x, y, 30.0),
                    measured_pl_db: 0.0,
                    estimated_d2d: d,
                    inversion_clamped: false,
                    true_d2d: d,
                    true_d3d: d,
                    true_elevation: 0.0,
                }
            })
            .collect()
    }

    fn selection(n: usize, reference: usize) -> AnchorSelection {
        AnchorSelection {
            strategy: Strategy::Cum,
            indices: (1..=n).collect(),
            reference_index: reference,
        }
    }

    #[test]
    fn hand_expanded_system() {
        let recs = anchors_for(&[(0.0, 0.0), (100.0, 0.0), (0.0, 100.0)], (30.0, 40.0));
        let sys = build_lls_system(&selection(3, 1), &recs).unwrap();
        assert_eq!(sys.a, vec![[200.0, 0.0], [0.0, 200.0]]);
        assert_eq!(sys.b.len(), 2);
        assert!((sys.b[0] - 6000.0).abs() < 1e-9);
        assert!((sys.b[1] - 8000.0).abs() < 1e-9);

        let est = solve_lls(&sys).unwrap();
        assert!((est.x_hat - 30.0).abs() < 1e-12);
        assert!((est.y_hat - 40.0).abs() < 1e-12);
        assert_eq!(est.anchor_count, 3);
        assert_eq!(est.condition_indicator, 1.0);
    }

    #[test]
    fn zero_rhs_gives_origin() {
        let sys = LlsSystem {
            a: vec![[200.0, 0.0], [0.0, 200.0]],
            b: vec![0.0, 0.0],
        };
        let est = solve_lls(&sys).unwrap();
        assert_eq!((est.x_hat, est.y_hat), (0.0, 0.0));
    }

    #[test]
    fn coincident_anchors_are_rank_deficient() {
        let recs = anchors_for(&[(5.0, 5.0); 4], (30.0, 40.0));
        let sys = build_lls_system(&selection(4, 1), &recs).unwrap();
        assert!(sys.a.iter().all(|r| *r == [0.0, 0.0]));
        assert_eq!(
            solve_lls(&sys),
            Err(LocalizationError::RankDeficient { indicator: 0.0 })
        );
    }

    #[test]
    fn collinear_anchors_are_rank_deficient() {
        let recs = anchors_for(&[(0.0, 0.0), (10.0, 10.0), (25.0, 25.0)], (30.0, 40.0));
        let sys = build_lls_system(&selection(3, 2), &recs).unwrap();
        assert!(matches!(
            solve_lls(&sys),
            Err(LocalizationError::RankDeficient { .. })
        ));
    }

    #[test]
    fn singular_values_of_diagonal() {
        let (smax, smin) = triangular_singular_values(3.0, 0.0, -4.0);
        assert!((smax - 4.0).abs() < 1e-15);
        assert!((smin - 3.0).abs() < 1e-15);
    }

    #[test]
    fn reference_outside_records_is_an_error() {
        let recs = anchors_for(&[(0.0, 0.0), (100.0, 0.0), (0.0, 100.0)], (30.0, 40.0));
        assert_eq!(
            build_lls_system(&selection(3, 7), &recs),
            Err(LocalizationError::UnknownIndex(7))
        );
    }
}
