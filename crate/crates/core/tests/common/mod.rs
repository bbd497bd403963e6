#![allow(dead_code)]

use astro_float::{BigFloat, Consts, RoundingMode};
use sssl_core::{AntennaPattern, ChannelConfig};

const P: usize = 192;
const RM: RoundingMode = RoundingMode::ToEven;

fn big(x: f64) -> BigFloat {
    BigFloat::from_f64(x, P)
}

#[derive(Clone)]
struct Cx {
    re: BigFloat,
    im: BigFloat,
}

impl Cx {
    fn real(re: BigFloat) -> Self {
        Cx { re, im: big(0.0) }
    }
    fn add(&self, o: &Cx) -> Cx {
        Cx {
            re: self.re.add(&o.re, P, RM),
            im: self.im.add(&o.im, P, RM),
        }
    }
    fn sub(&self, o: &Cx) -> Cx {
        Cx {
            re: self.re.sub(&o.re, P, RM),
            im: self.im.sub(&o.im, P, RM),
        }
    }
    fn mul(&self, o: &Cx) -> Cx {
        Cx {
            re: self
                .re
                .mul(&o.re, P, RM)
                .sub(&self.im.mul(&o.im, P, RM), P, RM),
            im: self
                .re
                .mul(&o.im, P, RM)
                .add(&self.im.mul(&o.re, P, RM), P, RM),
        }
    }
    fn norm_sqr(&self) -> BigFloat {
        self.re
            .mul(&self.re, P, RM)
            .add(&self.im.mul(&self.im, P, RM), P, RM)
    }
    fn div(&self, o: &Cx) -> Cx {
        let n = o.norm_sqr();
        let conj = Cx {
            re: o.re.clone(),
            im: o.im.neg(),
        };
        let t = self.mul(&conj);
        Cx {
            re: t.re.div(&n, P, RM),
            im: t.im.div(&n, P, RM),
        }
    }
    fn scale(&self, k: &BigFloat) -> Cx {
        Cx {
            re: self.re.mul(k, P, RM),
            im: self.im.mul(k, P, RM),
        }
    }
    // principal branch
    fn sqrt(&self) -> Cx {
        let modulus = self.norm_sqr().sqrt(P, RM);
        let two = big(2.0);
        let re = modulus.add(&self.re, P, RM).div(&two, P, RM).sqrt(P, RM);
        let mut im = modulus.sub(&self.re, P, RM).div(&two, P, RM).sqrt(P, RM);
        if self.im.is_negative() {
            im = im.neg();
        }
        Cx { re, im }
    }
}

/// Two-ray received power evaluated at 192-bit precision directly from the
/// closed form. Constants are computed once per instance.
pub struct Oracle {
    cfg: ChannelConfig,
    cc: Consts,
    pi: BigFloat,
    lambda: BigFloat,
    eps: Cx,
    tx_omni: Option<BigFloat>,
    rx_omni: Option<BigFloat>,
}

impl Oracle {
    pub fn new(cfg: &ChannelConfig) -> Self {
        let mut cc = Consts::new().unwrap();
        let pi = cc.pi(P, RM);
        let lambda = big(sssl_core::channel::SPEED_OF_LIGHT).div(&big(cfg.frequency_hz), P, RM);
        let eps = Cx {
            re: big(cfg.ground.dielectric_constant),
            im: big(-60.0)
                .mul(&big(cfg.ground.conductivity_s_per_m), P, RM)
                .mul(&lambda, P, RM),
        };
        let mut omni = |pattern: &AntennaPattern| match pattern {
            AntennaPattern::Omni { gain_dbi } => {
                let ten = big(10.0);
                Some(ten.pow(&big(*gain_dbi).div(&ten, P, RM), P, RM, &mut cc))
            }
            AntennaPattern::HalfWaveDipole => None,
        };
        let tx_omni = omni(&cfg.tx_pattern);
        let rx_omni = omni(&cfg.rx_pattern);
        Oracle {
            cfg: cfg.clone(),
            cc,
            pi,
            lambda,
            eps,
            tx_omni,
            rx_omni,
        }
    }

    fn pattern_gain(
        &mut self,
        omni: Option<&BigFloat>,
        sin_t: &BigFloat,
        cos_t: &BigFloat,
    ) -> BigFloat {
        match omni {
            Some(g) => g.clone(),
            None => {
                let half_pi = self.pi.div(&big(2.0), P, RM);
                let g = half_pi
                    .mul(sin_t, P, RM)
                    .cos(P, RM, &mut self.cc)
                    .div(cos_t, P, RM);
                if self.cfg.dipole_directivity {
                    g.mul(&big(sssl_core::channel::HALF_WAVE_DIRECTIVITY), P, RM)
                } else {
                    g
                }
            }
        }
    }

    fn gain(&mut self, sin_t: &BigFloat, cos_t: &BigFloat) -> BigFloat {
        let (tx, rx) = (self.tx_omni.clone(), self.rx_omni.clone());
        let a = self.pattern_gain(tx.as_ref(), sin_t, cos_t);
        let b = self.pattern_gain(rx.as_ref(), sin_t, cos_t);
        a.mul(&b, P, RM)
    }

    /// Received power (dBm) for tx at (0,0,tx_z) and rx at (d,0,rx_z).
    pub fn received_power_dbm(&mut self, tx_z: f64, rx_z: f64, d: f64) -> BigFloat {
        let d = big(d);
        let d_sq = d.mul(&d, P, RM);
        let dz_l = big(rx_z).sub(&big(tx_z), P, RM).abs();
        let dz_r = big(rx_z).add(&big(tx_z), P, RM);
        let d_los = d_sq.add(&dz_l.mul(&dz_l, P, RM), P, RM).sqrt(P, RM);
        let d_ref = d_sq.add(&dz_r.mul(&dz_r, P, RM), P, RM).sqrt(P, RM);

        let (sin_l, cos_l) = (dz_l.div(&d_los, P, RM), d.div(&d_los, P, RM));
        let (sin_r, cos_r) = (dz_r.div(&d_ref, P, RM), d.div(&d_ref, P, RM));
        let g_l = self.gain(&sin_l, &cos_l);

        let mut total = Cx::real(g_l.sqrt(P, RM).div(&d_los, P, RM));
        if self.cfg.ground_reflection {
            let g_r = self.gain(&sin_r, &cos_r);
            let root = self.eps.sub(&Cx::real(cos_r.mul(&cos_r, P, RM))).sqrt();
            let s = Cx::real(sin_r.clone());
            let gamma = s.sub(&root).div(&s.add(&root));
            let phase = big(2.0)
                .mul(&self.pi, P, RM)
                .mul(&d_ref.sub(&d_los, P, RM), P, RM)
                .div(&self.lambda, P, RM);
            let lag = Cx {
                re: phase.cos(P, RM, &mut self.cc),
                im: phase.sin(P, RM, &mut self.cc).neg(),
            };
            let k = g_r.sqrt(P, RM).div(&d_ref, P, RM);
            total = total.add(&gamma.mul(&lag).scale(&k));
        }
        let scale = self.lambda.div(&big(4.0).mul(&self.pi, P, RM), P, RM);
        let gain = scale.mul(&scale, P, RM).mul(&total.norm_sqr(), P, RM);
        let db = big(10.0).mul(&gain.log10(P, RM, &mut self.cc), P, RM);
        big(self.cfg.tx_power_dbm).add(&db, P, RM)
    }
}

/// |oracle − value| as f64.
pub fn oracle_gap(oracle: &BigFloat, value: f64) -> f64 {
    let diff = oracle.sub(&big(value), P, RM).abs();
    format!("{diff}").parse::<f64>().unwrap()
}

/// The four RSS panels: (label, config, altitude).
pub fn rss_panels() -> Vec<(&'static str, ChannelConfig, f64)> {
    let omni = ChannelConfig::default();
    let dipole = ChannelConfig {
        tx_pattern: AntennaPattern::HalfWaveDipole,
        rx_pattern: AntennaPattern::HalfWaveDipole,
        ..ChannelConfig::default()
    };
    vec![
        ("omni h=30", omni, 30.0),
        ("dipole h=30", dipole.clone(), 30.0),
        ("dipole h=50", dipole.clone(), 50.0),
        ("dipole h=70", dipole, 70.0),
    ]
}

/// 1000 evenly spaced horizontal distances over [5, 2000] m.
pub fn oracle_grid() -> Vec<f64> {
    (0..1000).map(|i| 5.0 + 1995.0 * i as f64 / 999.0).collect()
}
