//! Simulation and localization library for UAV-based RF signal source search.
//!
//! The crate is layered bottom-up:
//!
//! - [`channel`]: two-ray ground-reflection propagation with omni or dipole
//!   antenna patterns and seeded log-normal shadowing.
//! - [`trajectory`] and [`hull`]: zig-zag survey path, measurement sampling,
//!   the flight-time model and a planar convex hull.
//! - [`localization`]: path loss to range inversion, the CUM / CHLM / CLS
//!   anchor strategies and the linear least-squares position solve.
//! - [`harness`]: seeded missions, Monte-Carlo batches, metrics and CSV/JSON
//!   artifacts.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod format;
pub mod harness;
pub mod hull;
pub mod localization;
pub mod trajectory;

pub use channel::{AntennaPattern, ChannelConfig, GroundConstants, Position3D};
pub use localization::{ReferencePolicy, Strategy};
pub use trajectory::{KinematicProfile, TrajectoryParams, TrajectoryPlan};
