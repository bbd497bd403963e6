//! Two-ray ground-reflection channel.
//!
//! A line-of-sight ray and a single ground-reflected ray are summed as complex
//! amplitudes, each weighted by the antenna pattern gain at its elevation
//! angle. The reflected ray additionally carries the ground reflection
//! coefficient for a vertically polarized wave and the phase lag of the
//! longer path. Everything here is a pure function of its inputs except
//! [`measured_path_loss`], which draws from an explicit [`ShadowingSource`].

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Peak directivity of a half-wave dipole relative to isotropic (≈ 2.15 dBi).
pub const HALF_WAVE_DIRECTIVITY: f64 = 1.64;

/// Smallest linear path gain reported. A perfect null (e.g. a dipole looking
/// straight down its axis) maps to a finite, very negative dBm value.
const MIN_PATH_GAIN: f64 = f64::MIN_POSITIVE;

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("transmitter and receiver coincide; link distance is zero")]
    CoincidentPoints,
    #[error("invalid channel configuration: {0}")]
    InvalidConfig(String),
}

/// A point in meters. `z` is height above the (flat) ground.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Position3D {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3D {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Horizontal (ground-plane) distance.
    pub fn distance_2d(&self, other: &Position3D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn distance_3d(&self, other: &Position3D) -> f64 {
        let dz = self.z - other.z;
        (self.distance_2d(other).powi(2) + dz * dz).sqrt()
    }
}

/// Electrical constants of the reflecting ground.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundConstants {
    /// Relative dielectric constant ε (dimensionless).
    pub dielectric_constant: f64,
    /// Conductivity Ψ in S/m.
    pub conductivity_s_per_m: f64,
}

impl Default for GroundConstants {
    /// "Average ground".
    fn default() -> Self {
        Self {
            dielectric_constant: 15.0,
            conductivity_s_per_m: 0.005,
        }
    }
}

impl GroundConstants {
    /// Complex relative permittivity ε₀ = ε − j·60·Ψ·λ.
    pub fn complex_permittivity(&self, wavelength: f64) -> Complex64 {
        Complex64::new(
            self.dielectric_constant,
            -60.0 * self.conductivity_s_per_m * wavelength,
        )
    }
}

/// Elevation-dependent antenna power gain. Both ends are assumed vertically
/// oriented, so the pattern only depends on the elevation angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AntennaPattern {
    Omni { gain_dbi: f64 },
    HalfWaveDipole,
}

impl AntennaPattern {
    pub fn is_dipole(&self) -> bool {
        matches!(self, AntennaPattern::HalfWaveDipole)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub frequency_hz: f64,
    /// Carried for completeness; no channel quantity depends on it.
    pub bandwidth_hz: f64,
    /// Carried for completeness; the two-ray model fixes its own decay.
    pub path_loss_exponent: f64,
    pub tx_power_dbm: f64,
    pub tx_pattern: AntennaPattern,
    pub rx_pattern: AntennaPattern,
    pub ground: GroundConstants,
    /// When false the reflected ray is dropped (Γ ≡ 0), leaving free space.
    pub ground_reflection: bool,
    /// Scale each dipole pattern by its 1.64 peak directivity.
    pub dipole_directivity: bool,
    pub shadowing_std_db: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self {
            frequency_hz: 2.4e9,
            bandwidth_hz: 20e6,
            path_loss_exponent: 2.0,
            tx_power_dbm: 76.0,
            tx_pattern: AntennaPattern::Omni { gain_dbi: 2.0 },
            rx_pattern: AntennaPattern::Omni { gain_dbi: 2.0 },
            ground: GroundConstants::default(),
            ground_reflection: true,
            dipole_directivity: false,
            shadowing_std_db: 3.0,
        }
    }
}

impl ChannelConfig {
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.frequency_hz
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        let bad = |msg: &str| Err(ChannelError::InvalidConfig(msg.to_string()));
        if !(self.frequency_hz.is_finite() && self.frequency_hz > 0.0) {
            return bad("frequency_hz must be positive");
        }
        if !self.tx_power_dbm.is_finite() {
            return bad("tx_power_dbm must be finite");
        }
        if !(self.shadowing_std_db.is_finite() && self.shadowing_std_db >= 0.0) {
            return bad("shadowing_std_db must be non-negative");
        }
        if !(self.ground.dielectric_constant >= 1.0) {
            return bad("ground.dielectric_constant must be >= 1");
        }
        if !(self.ground.conductivity_s_per_m >= 0.0) {
            return bad("ground.conductivity_s_per_m must be >= 0");
        }
        for pattern in [&self.tx_pattern, &self.rx_pattern] {
            if let AntennaPattern::Omni { gain_dbi } = pattern {
                if !gain_dbi.is_finite() {
                    return bad("omni gain_dbi must be finite");
                }
            }
        }
        Ok(())
    }

    /// Gain applied to a ray leaving/arriving at elevation `theta`: the
    /// product of the transmit and receive patterns.
    pub fn ray_gain(&self, theta: f64) -> f64 {
        let one = |pattern: &AntennaPattern| {
            let g = antenna_gain(pattern, theta);
            if self.dipole_directivity && pattern.is_dipole() {
                g * HALF_WAVE_DIRECTIVITY
            } else {
                g
            }
        };
        one(&self.tx_pattern) * one(&self.rx_pattern)
    }
}

/// Direct and reflected path geometry between two points above flat ground.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    pub d_2d: f64,
    pub d_los: f64,
    pub d_ref: f64,
    /// Elevation of the direct ray, as a magnitude in [0, π/2].
    pub theta_l: f64,
    /// Grazing angle of the reflected ray, in [0, π/2].
    pub theta_r: f64,
    /// `d_ref − d_los`, evaluated without cancellation.
    pub path_difference: f64,
}

pub fn link_geometry(tx: &Position3D, rx: &Position3D) -> Result<LinkGeometry, ChannelError> {
    let d_2d = tx.distance_2d(rx);
    let dz_los = (tx.z - rx.z).abs();
    let dz_ref = tx.z + rx.z;
    let d_los = d_2d.hypot(dz_los);
    if d_los == 0.0 {
        return Err(ChannelError::CoincidentPoints);
    }
    let d_ref = d_2d.hypot(dz_ref);
    Ok(LinkGeometry {
        d_2d,
        d_los,
        d_ref,
        theta_l: dz_los.atan2(d_2d),
        theta_r: dz_ref.atan2(d_2d),
        // (dz_ref² − dz_los²) / (d_ref + d_los) = 4·z_tx·z_rx / (d_ref + d_los)
        path_difference: 4.0 * tx.z * rx.z / (d_ref + d_los),
    })
}

/// Power gain of a vertical half-wave dipole at elevation `theta`.
///
/// With the dipole length at half a wavelength the electrical argument is π/2
/// at every frequency, so the pattern reduces to
/// `(cos(π/2 · sin θ) − cos(π/2)) / cos θ`. The numerator is rewritten as
/// `sin(π/2 · (1 − sin θ))` with `1 − sin θ = cos²θ / (1 + sin θ)`, which
/// stays accurate near the axial null and takes the analytic limit 0 there.
pub fn dipole_gain(theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let c = c.abs();
    if c == 0.0 {
        return 0.0;
    }
    (FRAC_PI_2 * c * c / (1.0 + s.abs())).sin() / c
}

/// Linear power gain of `pattern` at elevation `theta`.
pub fn antenna_gain(pattern: &AntennaPattern, theta: f64) -> f64 {
    match pattern {
        AntennaPattern::Omni { gain_dbi } => 10f64.powf(gain_dbi / 10.0),
        AntennaPattern::HalfWaveDipole => dipole_gain(theta),
    }
}

/// Reflection coefficient of the ground for grazing angle `theta_r`.
pub fn reflection_coefficient(
    theta_r: f64,
    ground: &GroundConstants,
    wavelength: f64,
) -> Complex64 {
    let eps0 = ground.complex_permittivity(wavelength);
    let (s, c) = theta_r.sin_cos();
    let root = (eps0 - c * c).sqrt();
    (s - root) / (s + root)
}

/// Phase lag of the reflected ray relative to the direct ray, in radians.
/// Not wrapped.
pub fn phase_difference(geom: &LinkGeometry, wavelength: f64) -> f64 {
    2.0 * PI * geom.path_difference / wavelength
}

/// Linear path gain P_r / P_t of the two-ray link.
fn path_gain_linear(geom: &LinkGeometry, cfg: &ChannelConfig) -> f64 {
    let wavelength = cfg.wavelength();
    let direct = Complex64::from(cfg.ray_gain(geom.theta_l).sqrt() / geom.d_los);
    let reflected = if cfg.ground_reflection {
        let gamma = reflection_coefficient(geom.theta_r, &cfg.ground, wavelength);
        let lag = Complex64::from_polar(1.0, -phase_difference(geom, wavelength));
        gamma * cfg.ray_gain(geom.theta_r).sqrt() * lag / geom.d_ref
    } else {
        Complex64::new(0.0, 0.0)
    };
    let scale = wavelength / (4.0 * PI);
    (scale * scale * (direct + reflected).norm_sqr()).max(MIN_PATH_GAIN)
}

/// Path gain in dB for a precomputed geometry.
pub fn path_gain_db(geom: &LinkGeometry, cfg: &ChannelConfig) -> f64 {
    10.0 * path_gain_linear(geom, cfg).log10()
}

/// Received power in dBm under the two-ray model.
pub fn received_power_dbm(
    tx: &Position3D,
    rx: &Position3D,
    cfg: &ChannelConfig,
) -> Result<f64, ChannelError> {
    let geom = link_geometry(tx, rx)?;
    Ok(cfg.tx_power_dbm + path_gain_db(&geom, cfg))
}

/// Noiseless path loss `P_t − P_r` in dB.
pub fn true_path_loss(
    cfg: &ChannelConfig,
    tx: &Position3D,
    rx: &Position3D,
) -> Result<f64, ChannelError> {
    let geom = link_geometry(tx, rx)?;
    Ok(-path_gain_db(&geom, cfg))
}

/// Seeded source of zero-mean Gaussian shadowing draws.
#[derive(Debug, Clone)]
pub struct ShadowingSource {
    rng: ChaCha8Rng,
}

impl ShadowingSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// One draw from N(0, σ²), in dB.
    pub fn sample_db(&mut self, std_db: f64) -> f64 {
        let z: f64 = StandardNormal.sample(&mut self.rng);
        std_db * z
    }
}

/// Path loss with one shadowing draw added.
pub fn measured_path_loss(
    cfg: &ChannelConfig,
    tx: &Position3D,
    rx: &Position3D,
    noise: &mut ShadowingSource,
) -> Result<f64, ChannelError> {
    let truth = true_path_loss(cfg, tx, rx)?;
    Ok(truth + noise.sample_db(cfg.shadowing_std_db))
}
