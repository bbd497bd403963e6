use proptest::prelude::*;
use sssl_core::localization::{
    build_lls_system, select_anchors, select_reference, solve_lls, AnchorSelection,
    MeasurementRecord,
};
use sssl_core::{Position3D, ReferencePolicy, Strategy as Algo};

fn exact_records(anchors: &[(f64, f64)], target: (f64, f64)) -> Vec<MeasurementRecord> {
    anchors
        .iter()
        .enumerate()
        .map(|(k, &(x, y))| {
            let d = (x - target.0).hypot(y - target.1);
            MeasurementRecord {
                index: k + 1,
                uav_position: Position3D::new(x, y, 50.0),
                measured_pl_db: 0.0,
                estimated_d2d: d,
                inversion_clamped: false,
                true_d2d: d,
                true_d3d: d.hypot(49.0),
                true_elevation: 49f64.atan2(d),
            }
        })
        .collect()
}

fn solve_all(records: &[MeasurementRecord]) -> (f64, f64) {
    let indices: Vec<usize> = (1..=records.len()).collect();
    let reference_index =
        select_reference(&indices, records, ReferencePolicy::MinEstimatedDistance).unwrap();
    let selection = AnchorSelection {
        strategy: Algo::Cum,
        indices,
        reference_index,
    };
    let est = solve_lls(&build_lls_system(&selection, records).unwrap()).unwrap();
    (est.x_hat, est.y_hat)
}

fn anchor_sets() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1000.0f64..1000.0, -1000.0f64..1000.0), 4..30).prop_filter(
        "well spread",
        |pts| {
            let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
            let n = pts.len() as f64;
            let (mx, my) = (mx / n, my / n);
            let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
            for p in pts {
                sxx += (p.0 - mx) * (p.0 - mx);
                syy += (p.1 - my) * (p.1 - my);
                sxy += (p.0 - mx) * (p.1 - my);
            }
            let det = sxx * syy - sxy * sxy;
            det / (n * n) > 1e8
        },
    )
}

#[test]
fn fifty_random_targets_recovered() {
    let anchors = [
        (0.0, 0.0),
        (1000.0, 0.0),
        (1000.0, 900.0),
        (0.0, 900.0),
        (500.0, 450.0),
        (250.0, 700.0),
    ];
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut uniform = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..50 {
        let target = (-200.0 + 1400.0 * uniform(), -200.0 + 1300.0 * uniform());
        let (x, y) = solve_all(&exact_records(&anchors, target));
        assert!(
            (x - target.0).hypot(y - target.1) < 1e-8,
            "{target:?} -> ({x}, {y})"
        );
    }
}

proptest! {
    #[test]
    fn exact_ranges_recover_target(
        anchors in anchor_sets(),
        tx in -1500.0f64..1500.0,
        ty in -1500.0f64..1500.0,
    ) {
        let (x, y) = solve_all(&exact_records(&anchors, (tx, ty)));
        prop_assert!((x - tx).hypot(y - ty) < 1e-6, "({x}, {y}) vs ({tx}, {ty})");
    }

    #[test]
    fn estimate_translates_with_scene(
        anchors in anchor_sets(),
        tx in -800.0f64..800.0,
        ty in -800.0f64..800.0,
        dx in -1000.0f64..1000.0,
        dy in -1000.0f64..1000.0,
    ) {
        let (x0, y0) = solve_all(&exact_records(&anchors, (tx, ty)));
        let moved: Vec<(f64, f64)> = anchors.iter().map(|&(x, y)| (x + dx, y + dy)).collect();
        let (x1, y1) = solve_all(&exact_records(&moved, (tx + dx, ty + dy)));
        prop_assert!((x1 - x0 - dx).abs() < 1e-6 && (y1 - y0 - dy).abs() < 1e-6);
    }

    #[test]
    fn selections_are_well_formed(
        n in 1usize..120,
        ranges in prop::collection::vec(0.0f64..2000.0, 120),
        waypoint_gap in 5usize..40,
        algo in prop::sample::select(Algo::ALL.to_vec()),
    ) {
        let records: Vec<MeasurementRecord> = (0..n)
            .map(|k| MeasurementRecord {
                index: k + 1,
                uav_position: Position3D::new(k as f64 * 10.0, (k % 7) as f64, 50.0),
                measured_pl_db: 0.0,
                estimated_d2d: ranges[k],
                inversion_clamped: false,
                true_d2d: ranges[(k + 1) % 120],
                true_d3d: 0.0,
                true_elevation: 0.0,
            })
            .collect();
        let passed: Vec<usize> = (1..=n).filter(|i| i % waypoint_gap == 1 && *i > 1).collect();
        match select_anchors(algo, &records, &passed) {
            Ok(indices) => {
                prop_assert!(indices.len() >= 3 && indices.len() <= n);
                let mut sorted = indices.clone();
                sorted.sort_unstable();
                sorted.dedup();
                prop_assert_eq!(sorted.len(), indices.len());
                prop_assert!(indices.iter().all(|&i| (1..=n).contains(&i)));
                if algo == Algo::Chlm {
                    prop_assert_eq!(indices.len(), 13);
                }
                for policy in [ReferencePolicy::MinEstimatedDistance, ReferencePolicy::OracleTrueClosest] {
                    let r = select_reference(&indices, &records, policy).unwrap();
                    prop_assert!(indices.contains(&r));
                }
            }
            Err(_) => prop_assert!(n < algo.min_indices()),
        }
    }
}

#[test]
fn chlm_keeps_latest_thirteen_waypoints() {
    let passed: Vec<usize> = (1..=14).map(|k| k * 50).collect();
    let indices = sssl_core::localization::select_anchors_chlm(720, &passed).unwrap();
    assert_eq!(indices, passed[1..].to_vec());
}
