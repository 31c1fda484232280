//! Closed-form partial-wave solution for the transverse constant mode.
//!
//! Inside the mode (`r < R`) the dressed channels see a flat potential, so
//! the radial function is `J_m(q r)` with `q^2 = k^2 -/+ 1`, or `I_m(q r)`
//! when the plus channel is closed (`k < kappa_n`). Outside it is
//! `i^m J_m(k r) + B_m H1_m(k r)`. Matching value and slope at `r = R` gives
//!
//! ```text
//! tan(delta) = N / M,   N = k J'(kR) Z - q Z' J(kR),   M = k Y'(kR) Z - q Z' Y(kR)
//! B = i^m i e^{i delta} sin(delta),   A = (2/pi) i^{m+1} / (R (k Z H' - q Z' H))
//! ```
//!
//! with `Z = J_m(qR)` or `I_m(qR)` and `Z'` its derivative with respect to
//! the argument. Only the ratio `Z' / Z` matters for `delta`, so the
//! exponentially scaled `I_m` is used throughout.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::model::{ChannelSign, ModeShape, ScatterConfig};
use crate::special::{bessel_i_scaled_seq, bessel_j_seq, bessel_jy_seq_partial, cylinder_derivative_real, modified_derivative};
use crate::{Error, Result};

/// Whether the interior plus-channel wave propagates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InteriorRegime {
    /// `k >= kappa_n`: interior solution `J_m`.
    Propagating,
    /// `k < kappa_n`: interior solution `I_m`.
    Evanescent,
}

/// Exterior and interior wavenumbers in units of `kappa_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelWavenumbers {
    pub k: f64,
    /// `sqrt(|k^2 - 1|)`.
    pub k_plus: f64,
    /// `sqrt(k^2 + 1)`.
    pub k_minus: f64,
    pub regime: InteriorRegime,
}

pub fn wavenumbers(k: f64) -> ChannelWavenumbers {
    ChannelWavenumbers {
        k,
        k_plus: (k * k - 1.0).abs().sqrt(),
        k_minus: (k * k + 1.0).sqrt(),
        regime: if k >= 1.0 {
            InteriorRegime::Propagating
        } else {
            InteriorRegime::Evanescent
        },
    }
}

/// `i^m`.
pub(crate) fn i_pow(m: usize) -> Complex64 {
    match m % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `B = (i^m / 2)(e^{2 i delta} - 1) = i^m i e^{i delta} sin(delta)`.
pub fn b_from_phase(m: usize, delta: f64) -> Complex64 {
    i_pow(m) * Complex64::i() * Complex64::from_polar(delta.sin(), delta)
}

/// Interior pair `(Z_m, q Z'_m)` at `r = R` for `m = 0..=m_max`, up to a
/// common positive factor per `m` (the scaled `I` carries `e^{-qR}`).
/// The third value is `ln` of that factor.
struct Interior {
    value: Vec<f64>,
    slope: Vec<f64>,
    log_scale: f64,
}

fn interior(ch: ChannelSign, k: f64, radius: f64, m_max: usize) -> Interior {
    let w = wavenumbers(k);
    let top = m_max.max(1);
    match ch {
        ChannelSign::Minus => j_interior(w.k_minus, radius, top),
        ChannelSign::Plus if w.k_plus == 0.0 => {
            // q = 0: the regular solution is r^m; normalize by R^m.
            let value = vec![1.0; top + 1];
            let slope = (0..=top).map(|m| m as f64 / radius).collect();
            Interior {
                value,
                slope,
                log_scale: 0.0,
            }
        }
        ChannelSign::Plus => match w.regime {
            InteriorRegime::Propagating => j_interior(w.k_plus, radius, top),
            InteriorRegime::Evanescent => {
                let q = w.k_plus;
                let x = q * radius;
                let seq = bessel_i_scaled_seq(x, top + 1);
                let slope = (0..=top).map(|m| q * modified_derivative(&seq, x, m)).collect();
                Interior {
                    value: seq[..=top].to_vec(),
                    slope,
                    log_scale: -x,
                }
            }
        },
    }
}

fn j_interior(q: f64, radius: f64, top: usize) -> Interior {
    let x = q * radius;
    let seq = bessel_j_seq(x, top + 1);
    let slope = (0..=top).map(|m| q * cylinder_derivative_real(&seq, x, m)).collect();
    Interior {
        value: seq[..=top].to_vec(),
        slope,
        log_scale: 0.0,
    }
}

/// Exterior `J_m(kR)`, `Y_m(kR)` and their derivatives. `Y` may stop short
/// of `m_max` where it overflows; those waves do not scatter at all.
struct Exterior {
    j: Vec<f64>,
    y: Vec<f64>,
    x: f64,
}

impl Exterior {
    fn new(k: f64, radius: f64, m_max: usize) -> Result<Self> {
        let x = k * radius;
        let (j, y) = bessel_jy_seq_partial(x, m_max + 1)?;
        Ok(Exterior { j, y, x })
    }

    fn jp(&self, m: usize) -> f64 {
        cylinder_derivative_real(&self.j, self.x, m)
    }

    /// `(Y_m, Y'_m)` when both are representable.
    fn y_pair(&self, m: usize) -> Option<(f64, f64)> {
        let need = m.max(1);
        if need >= self.y.len() || m >= self.y.len() {
            return None;
        }
        let yp = cylinder_derivative_real(&self.y, self.x, m);
        if yp.is_finite() {
            Some((self.y[m], yp))
        } else {
            None
        }
    }
}

fn delta_from(ext: &Exterior, int: &Interior, k: f64, m: usize) -> f64 {
    let z = int.value[m];
    let zp = int.slope[m];
    if z == 0.0 && zp == 0.0 {
        return 0.0;
    }
    let Some((y, yp)) = ext.y_pair(m) else {
        return 0.0;
    };
    let n = k * ext.jp(m) * z - zp * ext.j[m];
    let d = k * yp * z - zp * y;
    if d == 0.0 {
        if n == 0.0 {
            0.0
        } else {
            FRAC_PI_2
        }
    } else {
        (n / d).atan()
    }
}

fn check_mode(cfg: &ScatterConfig) -> Result<()> {
    cfg.validate()?;
    if cfg.mode.shape != ModeShape::Constant {
        return Err(Error::Config("closed-form solution requires the constant mode".into()));
    }
    Ok(())
}

/// Phase shifts `delta_m` for `m = 0..=m_max` in one channel, each in
/// `(-pi/2, pi/2]`.
pub fn phase_shifts(ch: ChannelSign, cfg: &ScatterConfig, m_max: usize) -> Result<Vec<f64>> {
    check_mode(cfg)?;
    if cfg.is_free() {
        return Ok(vec![0.0; m_max + 1]);
    }
    let k = cfg.k();
    let radius = cfg.profile().size;
    let ext = Exterior::new(k, radius, m_max)?;
    let int = interior(ch, k, radius, m_max);
    Ok((0..=m_max).map(|m| delta_from(&ext, &int, k, m)).collect())
}

/// Phase shift `delta_m` of one channel, in `(-pi/2, pi/2]`.
pub fn phase_shift(m: usize, ch: ChannelSign, cfg: &ScatterConfig) -> Result<f64> {
    Ok(phase_shifts(ch, cfg, m)?[m])
}

/// Interior amplitude `A_m` and exterior coefficient `B_m` of one channel.
///
/// `A_m` multiplies `J_m(q r)` (or the unscaled `I_m(q r)`; `R^{-m} r^m` at
/// `k = kappa_n`) inside the mode.
pub fn matching_coefficients(m: usize, ch: ChannelSign, cfg: &ScatterConfig) -> Result<(Complex64, Complex64)> {
    check_mode(cfg)?;
    if cfg.is_free() {
        return Ok((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
    }
    let k = cfg.k();
    let radius = cfg.profile().size;
    let ext = Exterior::new(k, radius, m)?;
    let int = interior(ch, k, radius, m);
    let delta = delta_from(&ext, &int, k, m);
    let b = b_from_phase(m, delta);

    let (z, zp) = (int.value[m], int.slope[m]);
    let (y, yp) = ext
        .y_pair(m)
        .ok_or_else(|| Error::overflow(format!("Y_{m}({}) is not representable", ext.x)))?;
    let h = Complex64::new(ext.j[m], y);
    let hp = Complex64::new(ext.jp(m), yp);
    let den = h * (-zp) + hp * (k * z);
    if den.norm() == 0.0 || !den.norm().is_finite() {
        return Err(Error::overflow(format!("matching denominator degenerate for m = {m}")));
    }
    let a = i_pow(m + 1) * (2.0 / (PI * radius)) / den * int.log_scale.exp();
    Ok((a, b))
}

/// Phase shifts of partial wave `m` along a scan of interaction lengths,
/// made continuous by adding multiples of `pi` between neighbours.
pub fn unrolled_phase_shifts(m: usize, ch: ChannelSign, cfg: &ScatterConfig, sizes: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(sizes.len());
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for &s in sizes {
        let d = phase_shift(m, ch, &cfg.with_size(s))?;
        if let Some(p) = prev {
            let jump = d + offset - p;
            offset -= (jump / PI).round() * PI;
        }
        let v = d + offset;
        out.push(v);
        prev = Some(v);
    }
    Ok(out)
}
