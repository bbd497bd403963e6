//! Path loss → horizontal range inversion.
//!
//! For a fixed pair of heights the noiseless two-ray path loss is a function
//! of the horizontal separation alone, but it is not monotone: below the
//! critical distance the interference pattern produces many local extrema.
//! The inversion therefore scans a uniform grid for the global minimum of the
//! squared residual and only then refines locally with golden-section search.

use serde::{Deserialize, Serialize};

use super::LocalizationError;
use crate::channel::{link_geometry, path_gain_db, ChannelConfig, Position3D};

/// Grid-local minima refined per inversion.
const REFINED_CANDIDATES: usize = 4;

/// Search range and resolution for the range inversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InversionConfig {
    pub d_min_m: f64,
    pub d_max_m: f64,
    pub grid_step_m: f64,
    pub refine_iterations: usize,
}

impl InversionConfig {
    /// Default settings for a survey area with the given diagonal.
    pub fn for_diagonal(diagonal_m: f64) -> Self {
        Self {
            d_min_m: 1.0,
            d_max_m: 1.5 * diagonal_m,
            grid_step_m: 1.0,
            refine_iterations: 40,
        }
    }

    pub fn validate(&self) -> Result<(), LocalizationError> {
        let ok = self.d_min_m > 0.0
            && self.d_max_m > self.d_min_m
            && self.d_max_m.is_finite()
            && self.grid_step_m > 0.0
            && self.grid_step_m.is_finite();
        if ok {
            Ok(())
        } else {
            Err(LocalizationError::InvalidInversion(format!(
                "need 0 < d_min < d_max and grid_step > 0, got {self:?}"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion {
    pub distance: f64,
    /// Squared residual at `distance`, dB².
    pub residual: f64,
    /// `distance` sits on `d_min` or `d_max`.
    pub clamped: bool,
}

/// Range inverter for one mission: heights, channel and search range fixed.
/// The model path loss on the search grid is evaluated once up front.
#[derive(Debug, Clone)]
pub struct DistanceInverter {
    channel: ChannelConfig,
    altitude: f64,
    tx_height: f64,
    config: InversionConfig,
    grid: Vec<f64>,
    grid_loss: Vec<f64>,
}

impl DistanceInverter {
    pub fn new(
        channel: &ChannelConfig,
        altitude: f64,
        tx_height: f64,
        config: InversionConfig,
    ) -> Result<Self, LocalizationError> {
        config.validate()?;
        let steps = ((config.d_max_m - config.d_min_m) / config.grid_step_m).ceil() as usize;
        let mut grid: Vec<f64> = (0..steps)
            .map(|k| config.d_min_m + k as f64 * config.grid_step_m)
            .filter(|&d| d < config.d_max_m)
            .collect();
        grid.push(config.d_max_m);
        let mut inverter = Self {
            channel: channel.clone(),
            altitude,
            tx_height,
            config,
            grid,
            grid_loss: Vec::new(),
        };
        inverter.grid_loss = inverter
            .grid
            .iter()
            .map(|&d| inverter.model_path_loss(d))
            .collect();
        Ok(inverter)
    }

    pub fn config(&self) -> &InversionConfig {
        &self.config
    }

    /// Noiseless model path loss at horizontal separation `d_2d`.
    pub fn model_path_loss(&self, d_2d: f64) -> f64 {
        let tx = Position3D::new(0.0, 0.0, self.tx_height);
        let rx = Position3D::new(d_2d, 0.0, self.altitude);
        match link_geometry(&tx, &rx) {
            Ok(geom) => -path_gain_db(&geom, &self.channel),
            Err(_) => f64::INFINITY,
        }
    }

    fn residual(&self, d: f64, measured: f64) -> f64 {
        let r = self.model_path_loss(d) - measured;
        r * r
    }

    pub fn invert(&self, measured_pl_db: f64) -> Inversion {
        let n = self.grid.len();
        let res: Vec<f64> = self
            .grid_loss
            .iter()
            .map(|pl| (pl - measured_pl_db).powi(2))
            .collect();

        // Local minima of the grid residual; strict on the left so a plateau
        // contributes its first point.
        let mut minima: Vec<usize> = (0..n)
            .filter(|&k| (k == 0 || res[k] < res[k - 1]) && (k + 1 == n || res[k] <= res[k + 1]))
            .collect();
        if minima.is_empty() {
            minima.push(0);
        }
        minima.sort_by(|&a, &b| res[a].total_cmp(&res[b]).then(a.cmp(&b)));
        minima.truncate(REFINED_CANDIDATES);
        minima.sort_unstable();

        let mut best = (self.grid[minima[0]], f64::INFINITY);
        for &k in &minima {
            let lo = self.grid[k.saturating_sub(1)];
            let hi = self.grid[(k + 1).min(n - 1)];
            for (d, r) in [(self.grid[k], res[k]), self.golden(lo, hi, measured_pl_db)] {
                if r < best.1 || (r == best.1 && d < best.0) {
                    best = (d, r);
                }
            }
        }

        let tol = 1e-6 * self.config.grid_step_m.max(1.0);
        Inversion {
            distance: best.0,
            residual: best.1,
            clamped: best.0 - self.config.d_min_m <= tol || self.config.d_max_m - best.0 <= tol,
        }
    }

    /// Golden-section search for the residual minimum on `[lo, hi]`. Returns
    /// the best point evaluated, endpoints included.
    fn golden(&self, mut lo: f64, mut hi: f64, measured: f64) -> (f64, f64) {
        const INV_PHI: f64 = 0.618_033_988_749_894_8;
        let mut best = {
            let (rl, rh) = (self.residual(lo, measured), self.residual(hi, measured));
            if rh < rl {
                (hi, rh)
            } else {
                (lo, rl)
            }
        };
        let mut x1 = hi - INV_PHI * (hi - lo);
        let mut x2 = lo + INV_PHI * (hi - lo);
        let mut f1 = self.residual(x1, measured);
        let mut f2 = self.residual(x2, measured);
        for _ in 0..self.config.refine_iterations {
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - INV_PHI * (hi - lo);
                f1 = self.residual(x1, measured);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + INV_PHI * (hi - lo);
                f2 = self.residual(x2, measured);
            }
            for (x, f) in [(x1, f1), (x2, f2)] {
                if f < best.1 || (f == best.1 && x < best.0) {
                    best = (x, f);
                }
            }
        }
        best
    }
}

/// One-shot inversion; builds a [`DistanceInverter`] internally. Prefer the
/// inverter when inverting many measurements with the same setup.
pub fn invert_distance(
    measured_pl_db: f64,
    altitude: f64,
    tx_height: f64,
    channel: &ChannelConfig,
    config: InversionConfig,
) -> Result<Inversion, LocalizationError> {
    Ok(DistanceInverter::new(channel, altitude, tx_height, config)?.invert(measured_pl_db))
}
