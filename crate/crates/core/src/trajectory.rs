//! Zig-zag survey trajectory, measurement sampling, and flight-time model.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::Position3D;

#[derive(Debug, Error, PartialEq)]
pub enum TrajectoryError {
    #[error("invalid trajectory dimension: {0}")]
    InvalidDimension(String),
    #[error("sample spacing {spacing} m exceeds the shortest leg ({shortest_leg} m)")]
    SpacingTooLarge { spacing: f64, shortest_leg: f64 },
    #[error("waypoints {0} and {1} coincide")]
    DuplicateWaypoint(usize, usize),
    #[error("waypoint {0} is not at the mission altitude")]
    AltitudeMismatch(usize),
}

/// Boustrophedon waypoints: lanes run along +x / −x alternately and are
/// stacked along +y, `lane_spacing` apart. Returns `2 · lane_count` points.
pub fn generate_zigzag(
    origin: Position3D,
    lane_length: f64,
    lane_spacing: f64,
    lane_count: usize,
    altitude: f64,
) -> Result<Vec<Position3D>, TrajectoryError> {
    if lane_count < 2 {
        return Err(TrajectoryError::InvalidDimension(format!(
            "lane_count must be >= 2, got {lane_count}"
        )));
    }
    for (name, v) in [("lane_length", lane_length), ("lane_spacing", lane_spacing)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(TrajectoryError::InvalidDimension(format!(
                "{name} must be positive, got {v}"
            )));
        }
    }
    if !(altitude.is_finite() && altitude >= 0.0) {
        return Err(TrajectoryError::InvalidDimension(format!(
            "altitude must be non-negative, got {altitude}"
        )));
    }

    let mut waypoints = Vec::with_capacity(2 * lane_count);
    for lane in 0..lane_count {
        let y = origin.y + lane as f64 * lane_spacing;
        let (start, end) = if lane % 2 == 0 {
            (origin.x, origin.x + lane_length)
        } else {
            (origin.x + lane_length, origin.x)
        };
        waypoints.push(Position3D::new(start, y, altitude));
        waypoints.push(Position3D::new(end, y, altitude));
    }
    Ok(waypoints)
}

/// Total length of a polyline.
pub fn polyline_length(points: &[Position3D]) -> f64 {
    points.windows(2).map(|w| w[0].distance_3d(&w[1])).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplePoint {
    /// 1-based measurement index.
    pub index: usize,
    pub position: Position3D,
    pub arc_length: f64,
    pub is_waypoint_passing: bool,
    /// 1-based waypoint ordinal when `is_waypoint_passing`.
    pub waypoint_ordinal: Option<usize>,
}

/// A discretized waypoint path at constant altitude. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPlan {
    waypoints: Vec<Position3D>,
    sample_spacing: f64,
    samples: Vec<SamplePoint>,
}

impl TrajectoryPlan {
    pub fn waypoints(&self) -> &[Position3D] {
        &self.waypoints
    }

    pub fn sample_spacing(&self) -> f64 {
        self.sample_spacing
    }

    pub fn samples(&self) -> &[SamplePoint] {
        &self.samples
    }

    pub fn altitude(&self) -> f64 {
        self.waypoints[0].z
    }

    pub fn total_length(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.arc_length)
    }

    /// `(min_x, min_y, max_x, max_y)` of the waypoints.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        self.waypoints.iter().fold(
            (
                f64::INFINITY,
                f64::INFINITY,
                f64::NEG_INFINITY,
                f64::NEG_INFINITY,
            ),
            |(x0, y0, x1, y1), p| (x0.min(p.x), y0.min(p.y), x1.max(p.x), y1.max(p.y)),
        )
    }

    /// Sample indices at which each waypoint is passed, in waypoint order.
    pub fn waypoint_indices(&self) -> Vec<usize> {
        self.samples
            .iter()
            .filter(|s| s.is_waypoint_passing)
            .map(|s| s.index)
            .collect()
    }

    /// CSV with header `index,x,y,z,arc_length,is_waypoint_passing`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,x,y,z,arc_length,is_waypoint_passing\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                s.index,
                crate::format::sig6(s.position.x),
                crate::format::sig6(s.position.y),
                crate::format::sig6(s.position.z),
                crate::format::sig6(s.arc_length),
                s.is_waypoint_passing as u8
            ));
        }
        out
    }
}

/// Places a sample every `sample_spacing` meters along each leg (restarting
/// at every waypoint) plus one sample exactly on every waypoint.
pub fn discretize(
    waypoints: &[Position3D],
    sample_spacing: f64,
) -> Result<TrajectoryPlan, TrajectoryError> {
    if waypoints.len() < 2 {
        return Err(TrajectoryError::InvalidDimension(
            "at least two waypoints are required".into(),
        ));
    }
    if !(sample_spacing.is_finite() && sample_spacing > 0.0) {
        return Err(TrajectoryError::InvalidDimension(format!(
            "sample_spacing must be positive, got {sample_spacing}"
        )));
    }
    let altitude = waypoints[0].z;
    for (i, w) in waypoints.iter().enumerate() {
        if w.z != altitude {
            return Err(TrajectoryError::AltitudeMismatch(i + 1));
        }
    }
    let mut shortest = f64::INFINITY;
    for (i, w) in waypoints.windows(2).enumerate() {
        let len = w[0].distance_3d(&w[1]);
        if len == 0.0 {
            return Err(TrajectoryError::DuplicateWaypoint(i + 1, i + 2));
        }
        shortest = shortest.min(len);
    }
    if sample_spacing > shortest {
        return Err(TrajectoryError::SpacingTooLarge {
            spacing: sample_spacing,
            shortest_leg: shortest,
        });
    }

    let mut samples = vec![SamplePoint {
        index: 1,
        position: waypoints[0],
        arc_length: 0.0,
        is_waypoint_passing: true,
        waypoint_ordinal: Some(1),
    }];
    let mut leg_start_arc = 0.0;
    for (leg, w) in waypoints.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let len = a.distance_3d(&b);
        let (ux, uy) = ((b.x - a.x) / len, (b.y - a.y) / len);
        let tol = 1e-9 * len.max(1.0);
        let mut k = 1usize;
        loop {
            let along = k as f64 * sample_spacing;
            if along >= len - tol {
                break;
            }
            samples.push(SamplePoint {
                index: samples.len() + 1,
                position: Position3D::new(a.x + ux * along, a.y + uy * along, altitude),
                arc_length: leg_start_arc + along,
                is_waypoint_passing: false,
                waypoint_ordinal: None,
            });
            k += 1;
        }
        leg_start_arc += len;
        samples.push(SamplePoint {
            index: samples.len() + 1,
            position: b,
            arc_length: leg_start_arc,
            is_waypoint_passing: true,
            waypoint_ordinal: Some(leg + 2),
        });
    }

    Ok(TrajectoryPlan {
        waypoints: waypoints.to_vec(),
        sample_spacing,
        samples,
    })
}

/// Trajectory layout as read from a scenario file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryParams {
    pub origin_x_m: f64,
    pub origin_y_m: f64,
    pub lane_length_m: f64,
    pub lane_spacing_m: f64,
    pub lane_count: usize,
    pub altitude_m: f64,
    pub sample_spacing_m: f64,
}

impl Default for TrajectoryParams {
    fn default() -> Self {
        Self {
            origin_x_m: 0.0,
            origin_y_m: 0.0,
            lane_length_m: 1000.0,
            lane_spacing_m: 150.0,
            lane_count: 7,
            altitude_m: 50.0,
            sample_spacing_m: 10.0,
        }
    }
}

impl TrajectoryParams {
    pub fn build(&self) -> Result<TrajectoryPlan, TrajectoryError> {
        let waypoints = generate_zigzag(
            Position3D::new(self.origin_x_m, self.origin_y_m, self.altitude_m),
            self.lane_length_m,
            self.lane_spacing_m,
            self.lane_count,
            self.altitude_m,
        )?;
        discretize(&waypoints, self.sample_spacing_m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KinematicProfile {
    pub v_max_mps: f64,
    pub accel_mps2: f64,
}

impl Default for KinematicProfile {
    fn default() -> Self {
        Self {
            v_max_mps: 20.0,
            accel_mps2: 5.0,
        }
    }
}

impl KinematicProfile {
    pub fn validate(&self) -> Result<(), TrajectoryError> {
        if !(self.v_max_mps > 0.0 && self.accel_mps2 > 0.0) {
            return Err(TrajectoryError::InvalidDimension(
                "v_max_mps and accel_mps2 must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Distance covered while accelerating from rest to `v_max`.
    pub fn ramp_distance(&self) -> f64 {
        self.v_max_mps * self.v_max_mps / (2.0 * self.accel_mps2)
    }
}

/// Time to fly `distance` from rest: one acceleration ramp, then cruise at
/// `v_max`. Turns do not slow the vehicle down.
pub fn flight_time(distance: f64, profile: &KinematicProfile) -> f64 {
    let ramp = profile.ramp_distance();
    if distance >= ramp {
        profile.v_max_mps / profile.accel_mps2 + (distance - ramp) / profile.v_max_mps
    } else {
        (2.0 * distance.max(0.0) / profile.accel_mps2).sqrt()
    }
}
