//! Planar convex hull (Andrew's monotone chain).

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum HullError {
    #[error("convex hull needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("all points are collinear")]
    Degenerate,
}

/// Twice the signed area of triangle (o, a, b), evaluated relative to `o`.
/// Positive when `b` lies to the left of the directed line o→a.
pub fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Indices of the hull vertices in counter-clockwise order, starting from the
/// lowest-x (then lowest-y) point. Points lying on a hull edge are excluded,
/// as are duplicates.
pub fn convex_hull(points: &[[f64; 2]]) -> Result<Vec<usize>, HullError> {
    if points.len() < 3 {
        return Err(HullError::TooFewPoints(points.len()));
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        points[i][0]
            .total_cmp(&points[j][0])
            .then(points[i][1].total_cmp(&points[j][1]))
            .then(i.cmp(&j))
    });

    let mut hull: Vec<usize> = Vec::with_capacity(2 * points.len());
    // lower chain
    for &i in &order {
        while hull.len() >= 2
            && cross(
                points[hull[hull.len() - 2]],
                points[hull[hull.len() - 1]],
                points[i],
            ) <= 0.0
        {
            hull.pop();
        }
        hull.push(i);
    }
    // upper chain
    let lower_len = hull.len() + 1;
    for &i in order.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && cross(
                points[hull[hull.len() - 2]],
                points[hull[hull.len() - 1]],
                points[i],
            ) <= 0.0
        {
            hull.pop();
        }
        hull.push(i);
    }
    hull.pop();

    if hull.len() < 3 {
        return Err(HullError::Degenerate);
    }
    Ok(hull)
}
