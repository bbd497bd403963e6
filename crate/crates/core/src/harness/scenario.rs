use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::channel::{ChannelConfig, Position3D};
use crate::localization::{DistanceInverter, InversionConfig, ReferencePolicy, Strategy};
use crate::trajectory::{KinematicProfile, TrajectoryParams, TrajectoryPlan};

/// Where the transmitter sits relative to the zig-zag survey area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Placement {
    /// Midpoint of the middle lane.
    On,
    /// On the bounding-box edge, halfway between the two middle lanes, on the
    /// side where they are not joined by a connector.
    Mid,
    /// `Mid` pushed outward by 1.5 lane spacings.
    Far,
    /// Center of the bounding box.
    Center,
    Explicit {
        x: f64,
        y: f64,
    },
}

impl Placement {
    pub fn label(&self) -> &'static str {
        match self {
            Placement::On => "On",
            Placement::Mid => "Mid",
            Placement::Far => "Far",
            Placement::Center => "Center",
            Placement::Explicit { .. } => "Explicit",
        }
    }

    /// Ground-plane position for the given trajectory layout.
    pub fn resolve(&self, params: &TrajectoryParams) -> (f64, f64) {
        let x0 = params.origin_x_m;
        let x1 = x0 + params.lane_length_m;
        let y0 = params.origin_y_m;
        let spacing = params.lane_spacing_m;
        let middle = (params.lane_count - 1) / 2;
        // Lanes with even ordinal run toward x1, so the connector after lane
        // `middle` is at x1 when `middle` is even.
        let (open_edge, outward) = if middle.is_multiple_of(2) {
            (x0, -1.0)
        } else {
            (x1, 1.0)
        };
        let between = y0 + (middle as f64 + 0.5) * spacing;
        match *self {
            Placement::On => ((x0 + x1) / 2.0, y0 + middle as f64 * spacing),
            Placement::Mid => (open_edge, between),
            Placement::Far => (open_edge + outward * 1.5 * spacing, between),
            Placement::Center => (
                (x0 + x1) / 2.0,
                y0 + (params.lane_count - 1) as f64 * spacing / 2.0,
            ),
            Placement::Explicit { x, y } => (x, y),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub placement: Placement,
    pub height_m: f64,
}

impl Default for TargetSpec {
    fn default() -> Self {
        Self {
            placement: Placement::On,
            height_m: 1.0,
        }
    }
}

/// Inversion settings as written in a scenario; a missing `d_max_m` means
/// 1.5 × the survey-area diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InversionSettings {
    pub d_min_m: f64,
    pub d_max_m: Option<f64>,
    pub grid_step_m: f64,
    pub refine_iterations: usize,
}

impl Default for InversionSettings {
    fn default() -> Self {
        Self {
            d_min_m: 1.0,
            d_max_m: None,
            grid_step_m: 1.0,
            refine_iterations: 40,
        }
    }
}

impl InversionSettings {
    pub fn resolve(&self, diagonal_m: f64) -> InversionConfig {
        InversionConfig {
            d_min_m: self.d_min_m,
            d_max_m: self.d_max_m.unwrap_or(1.5 * diagonal_m),
            grid_step_m: self.grid_step_m,
            refine_iterations: self.refine_iterations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsSettings {
    pub rmse_threshold_m: f64,
    /// Trailing fraction of indices averaged for the long-term error.
    pub long_term_fraction: f64,
    pub distance_bin_m: f64,
    pub angle_bin_deg: f64,
}

impl Default for MetricsSettings {
    fn default() -> Self {
        Self {
            rmse_threshold_m: 20.0,
            long_term_fraction: 0.1,
            distance_bin_m: 50.0,
            angle_bin_deg: 5.0,
        }
    }
}

/// Either an explicit seed list or `count` consecutive seeds from `start`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedSpec {
    List(Vec<u64>),
    Range { start: u64, count: u64 },
}

impl Default for SeedSpec {
    fn default() -> Self {
        SeedSpec::Range {
            start: 0,
            count: 200,
        }
    }
}

impl SeedSpec {
    pub fn seeds(&self) -> Vec<u64> {
        match self {
            SeedSpec::List(v) => v.clone(),
            SeedSpec::Range { start, count } => (*start..start + count).collect(),
        }
    }
}

/// Everything needed to run a batch of missions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub channel: ChannelConfig,
    pub trajectory: TrajectoryParams,
    pub target: TargetSpec,
    pub strategy: Strategy,
    #[serde(default)]
    pub reference_policy: ReferencePolicy,
    pub inversion: InversionSettings,
    pub kinematics: KinematicProfile,
    pub metrics: MetricsSettings,
    pub seeds: SeedSpec,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            channel: ChannelConfig::default(),
            trajectory: TrajectoryParams::default(),
            target: TargetSpec::default(),
            strategy: Strategy::Chlm,
            reference_policy: ReferencePolicy::default(),
            inversion: InversionSettings::default(),
            kinematics: KinematicProfile::default(),
            metrics: MetricsSettings::default(),
            seeds: SeedSpec::default(),
        }
    }
}

impl Scenario {
    pub fn target_position(&self) -> Position3D {
        let (x, y) = self.target.placement.resolve(&self.trajectory);
        Position3D::new(x, y, self.target.height_m)
    }

    /// Validates the scenario and builds the trajectory and range inverter.
    pub fn prepare(&self) -> Result<PreparedScenario, HarnessError> {
        self.channel.validate()?;
        self.kinematics.validate()?;
        let m = &self.metrics;
        if !(m.rmse_threshold_m > 0.0) {
            return Err(HarnessError::InvalidScenario(
                "metrics.rmse_threshold_m must be positive".into(),
            ));
        }
        if !(m.long_term_fraction > 0.0 && m.long_term_fraction <= 1.0) {
            return Err(HarnessError::InvalidScenario(
                "metrics.long_term_fraction must be in (0, 1]".into(),
            ));
        }
        if !(m.distance_bin_m > 0.0 && m.angle_bin_deg > 0.0) {
            return Err(HarnessError::InvalidScenario(
                "metrics bin widths must be positive".into(),
            ));
        }
        if !(self.target.height_m >= 0.0) {
            return Err(HarnessError::InvalidScenario(
                "target.height_m must be non-negative".into(),
            ));
        }
        let plan = self.trajectory.build()?;
        if plan.altitude() == self.target.height_m {
            return Err(HarnessError::InvalidScenario(
                "trajectory altitude must differ from the target height".into(),
            ));
        }
        let (x0, y0, x1, y1) = plan.bounding_box();
        let inversion = self.inversion.resolve((x1 - x0).hypot(y1 - y0));
        let inverter = DistanceInverter::new(
            &self.channel,
            plan.altitude(),
            self.target.height_m,
            inversion,
        )?;
        Ok(PreparedScenario {
            scenario: self.clone(),
            target: self.target_position(),
            plan,
            inverter,
        })
    }
}

/// A validated scenario with its trajectory and range inverter built.
/// Immutable; shared across mission workers.
#[derive(Debug, Clone)]
pub struct PreparedScenario {
    pub scenario: Scenario,
    pub target: Position3D,
    pub plan: TrajectoryPlan,
    pub inverter: DistanceInverter,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_placements() {
        let p = TrajectoryParams::default();
        assert_eq!(Placement::On.resolve(&p), (500.0, 450.0));
        assert_eq!(Placement::Mid.resolve(&p), (1000.0, 525.0));
        assert_eq!(Placement::Far.resolve(&p), (1225.0, 525.0));
        assert_eq!(Placement::Center.resolve(&p), (500.0, 450.0));
    }

    #[test]
    fn mid_placement_avoids_connectors() {
        // Five lanes: middle lane 2 runs toward x1, its connector sits at x1.
        let p = TrajectoryParams {
            lane_count: 5,
            ..TrajectoryParams::default()
        };
        assert_eq!(Placement::Mid.resolve(&p), (0.0, 375.0));
        assert_eq!(Placement::Far.resolve(&p), (-225.0, 375.0));
    }

    #[test]
    fn seed_specs() {
        assert_eq!(
            SeedSpec::Range { start: 5, count: 3 }.seeds(),
            vec![5, 6, 7]
        );
        assert_eq!(SeedSpec::List(vec![9, 1]).seeds(), vec![9, 1]);
        let parsed: SeedSpec = serde_json::from_str("[1,2]").unwrap();
        assert_eq!(parsed, SeedSpec::List(vec![1, 2]));
        let parsed: SeedSpec = serde_json::from_str(r#"{"start":0,"count":4}"#).unwrap();
        assert_eq!(parsed.seeds().len(), 4);
    }

    #[test]
    fn scenario_json_round_trip() {
        let s = Scenario::default();
        let text = serde_json::to_string_pretty(&s).unwrap();
        let back: Scenario = serde_json::from_str(&text).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn prepare_rejects_bad_metrics() {
        let mut s = Scenario::default();
        s.metrics.rmse_threshold_m = 0.0;
        assert!(s.prepare().is_err());
        let mut s = Scenario::default();
        s.trajectory.altitude_m = 1.0;
        assert!(s.prepare().is_err());
    }

    #[test]
    fn default_inversion_range() {
        let prepared = Scenario::default().prepare().unwrap();
        let c = prepared.inverter.config();
        assert_eq!(c.d_min_m, 1.0);
        assert!((c.d_max_m - 1.5 * 1000f64.hypot(900.0)).abs() < 1e-9);
    }
}
