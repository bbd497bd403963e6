//! Scenario files and command-line overrides.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use sssl_core::harness::{
    set_antenna, InversionSettings, MetricsSettings, Placement, Scenario, SeedSpec, TargetSpec,
};
use sssl_core::{ChannelConfig, KinematicProfile, ReferencePolicy, Strategy, TrajectoryParams};

use crate::CliError;

/// On-disk scenario. Omitted sections take their defaults; within a section
/// every field is required.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioFile {
    pub channel: ChannelConfig,
    pub trajectory: TrajectoryParams,
    pub target: TargetSpec,
    pub strategy: Strategy,
    pub reference_policy: ReferencePolicy,
    pub inversion: InversionSettings,
    pub kinematics: KinematicProfile,
    pub metrics: MetricsSettings,
    pub seeds: SeedSpec,
    pub output_dir: PathBuf,
}

impl Default for ScenarioFile {
    fn default() -> Self {
        Self::from_scenario(Scenario::default(), PathBuf::from("out"))
    }
}

impl ScenarioFile {
    pub fn from_scenario(s: Scenario, output_dir: PathBuf) -> Self {
        Self {
            channel: s.channel,
            trajectory: s.trajectory,
            target: s.target,
            strategy: s.strategy,
            reference_policy: s.reference_policy,
            inversion: s.inversion,
            kinematics: s.kinematics,
            metrics: s.metrics,
            seeds: s.seeds,
            output_dir,
        }
    }

    pub fn scenario(&self) -> Scenario {
        Scenario {
            channel: self.channel.clone(),
            trajectory: self.trajectory.clone(),
            target: self.target.clone(),
            strategy: self.strategy,
            reference_policy: self.reference_policy,
            inversion: self.inversion,
            kinematics: self.kinematics,
            metrics: self.metrics,
            seeds: self.seeds.clone(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Config(format!("at `{path}`: {}", e.inner()))
        })
    }

    /// Reads `path`, or the built-in defaults when no path is given.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Io(format!("reading {}: {e}", p.display())))?;
                Self::parse(&text)
            }
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("scenario serializes");
        text.push('\n');
        text
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Cum,
    Chlm,
    Cls,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlacementArg {
    On,
    Mid,
    Far,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AntennaArg {
    Omni,
    Dipole,
}

/// Flags that override scenario-file values.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// Output directory for artifacts.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Number of seeds, 0..N.
    #[arg(long, value_name = "N")]
    pub seeds: Option<u64>,
    /// UAV altitude in meters.
    #[arg(long, value_name = "M")]
    pub altitude: Option<f64>,
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
    #[arg(long, value_enum)]
    pub placement: Option<PlacementArg>,
    #[arg(long, value_enum)]
    pub antenna: Option<AntennaArg>,
    /// Shadowing standard deviation in dB.
    #[arg(long, value_name = "DB")]
    pub sigma: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, file: &mut ScenarioFile) {
        if let Some(out) = &self.out {
            file.output_dir = out.clone();
        }
        if let Some(n) = self.seeds {
            file.seeds = SeedSpec::Range { start: 0, count: n };
        }
        if let Some(h) = self.altitude {
            file.trajectory.altitude_m = h;
        }
        if let Some(s) = self.strategy {
            file.strategy = match s {
                StrategyArg::Cum => Strategy::Cum,
                StrategyArg::Chlm => Strategy::Chlm,
                StrategyArg::Cls => Strategy::Cls,
            };
        }
        if let Some(p) = self.placement {
            file.target.placement = match p {
                PlacementArg::On => Placement::On,
                PlacementArg::Mid => Placement::Mid,
                PlacementArg::Far => Placement::Far,
            };
        }
        if let Some(a) = self.antenna {
            set_antenna(&mut file.channel, a == AntennaArg::Dipole);
        }
        if let Some(sigma) = self.sigma {
            file.channel.shadowing_std_db = sigma;
        }
    }
}
