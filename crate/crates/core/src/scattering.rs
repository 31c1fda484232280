//! Bare-basis amplitudes and scattering lengths.
//!
//! Dressed-channel coefficients `B^{+-}_m = (i^m/2)(e^{2i delta^{+-}_m} - 1)`
//! combine into the exit channels
//! `B^a = (B^+ + B^-)/2` (no de-excitation) and `B^b = (B^+ - B^-)/2`
//! (photon emission). The amplitude of exit channel `g` is
//!
//! ```text
//! f(theta) = sqrt(2 / (pi k)) sum_m eps_m cos(m theta) e^{-i(m pi/2 + pi/4)} B_m
//! ```
//!
//! and the scattering lengths are `lambda(theta) = |f|^2`,
//! `lambda = (4/k) sum eps_m |B_m|^2`, both reported divided by `2R`
//! (`2 sigma` for the Gaussian mode).

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::constant_mode::{self, b_from_phase};
use crate::model::{ChannelSign, ExitChannel, MMax, ModeShape, ScatterConfig};
use crate::radial;
use crate::Result;

/// All coefficients of one partial wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialWave {
    pub m: usize,
    pub delta_plus: f64,
    pub delta_minus: f64,
    pub b_plus: Complex64,
    pub b_minus: Complex64,
    pub b_a: Complex64,
    pub b_b: Complex64,
}

impl PartialWave {
    pub fn from_phases(m: usize, delta_plus: f64, delta_minus: f64) -> Self {
        let b_plus = b_from_phase(m, delta_plus);
        let b_minus = b_from_phase(m, delta_minus);
        PartialWave {
            m,
            delta_plus,
            delta_minus,
            b_plus,
            b_minus,
            b_a: (b_plus + b_minus) * 0.5,
            b_b: (b_plus - b_minus) * 0.5,
        }
    }

    pub fn b(&self, exit: ExitChannel) -> Complex64 {
        match exit {
            ExitChannel::NoDeexcitation => self.b_a,
            ExitChannel::PhotonEmission => self.b_b,
        }
    }
}

/// `(|B^a|^2, |B^b|^2)` from the phase shifts alone:
/// `|B^b|^2 = sin^2(d+ - d-)/4`, `|B^a|^2 = (1 + cos^2(d+ - d-) - 2 cos(d+ - d-) cos(d+ + d-))/4`.
pub fn trig_abs2(delta_plus: f64, delta_minus: f64) -> (f64, f64) {
    let diff = delta_plus - delta_minus;
    let sum = delta_plus + delta_minus;
    let c = diff.cos();
    ((1.0 + c * c - 2.0 * c * sum.cos()) / 4.0, diff.sin().powi(2) / 4.0)
}

/// Partial-wave coefficients for `m = 0..=m_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialWaveTable {
    /// Wavenumber in units of `kappa_n`.
    pub k: f64,
    /// `2R` or `2 sigma` in units of `1/kappa_n`; zero in free space.
    pub divisor: f64,
    pub waves: Vec<PartialWave>,
}

fn eps(m: usize) -> f64 {
    if m == 0 {
        1.0
    } else {
        2.0
    }
}

impl PartialWaveTable {
    pub fn from_phases(k: f64, divisor: f64, delta_plus: &[f64], delta_minus: &[f64]) -> Self {
        let waves = delta_plus
            .iter()
            .zip(delta_minus)
            .enumerate()
            .map(|(m, (&p, &q))| PartialWave::from_phases(m, p, q))
            .collect();
        PartialWaveTable { k, divisor, waves }
    }

    pub fn m_max(&self) -> usize {
        self.waves.len().saturating_sub(1)
    }

    fn dimensionless(&self, length: f64) -> f64 {
        if self.divisor > 0.0 {
            length / self.divisor
        } else {
            0.0
        }
    }
}

fn tail_is_small(dp: &[f64], dm: &[f64], tail: f64) -> bool {
    const RUN: usize = 3;
    if dp.len() < RUN {
        return false;
    }
    dp[dp.len() - RUN..]
        .iter()
        .chain(&dm[dm.len() - RUN..])
        .all(|d| d.sin().powi(2) < tail)
}

fn channel_phases(cfg: &ScatterConfig, ch: ChannelSign, lo: usize, hi: usize) -> Result<Vec<f64>> {
    match cfg.mode.shape {
        ModeShape::Constant => Ok(constant_mode::phase_shifts(ch, cfg, hi)?[lo..].to_vec()),
        ModeShape::Gaussian => radial::radial_phase_shifts(ch, cfg, lo, hi),
    }
}

/// Phase shifts of both channels, computed by the closed form for the
/// constant mode and by Numerov integration otherwise. With automatic
/// truncation the table grows until three consecutive waves have
/// `sin^2 delta < series_tail` in both channels.
pub fn build_table(cfg: &ScatterConfig) -> Result<PartialWaveTable> {
    cfg.validate()?;
    let k = cfg.k();
    let divisor = if cfg.is_free() { 0.0 } else { cfg.profile().divisor() };
    let mut hi = cfg.initial_m_max();
    let (mut dp, mut dm) = (Vec::new(), Vec::new());
    let mut lo = 0;
    loop {
        let (p, q) = rayon::join(
            || channel_phases(cfg, ChannelSign::Plus, lo, hi),
            || channel_phases(cfg, ChannelSign::Minus, lo, hi),
        );
        dp.extend(p?);
        dm.extend(q?);
        if cfg.m_max != MMax::Auto || cfg.is_free() || tail_is_small(&dp, &dm, cfg.tolerances.series_tail) {
            break;
        }
        lo = hi + 1;
        hi += 16.max(hi / 8);
    }
    Ok(PartialWaveTable::from_phases(k, divisor, &dp, &dm))
}

/// Amplitude `f(theta)` of one exit channel, in units of `kappa_n^{-1/2}`.
pub fn amplitude(table: &PartialWaveTable, exit: ExitChannel, theta: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for w in &table.waves {
        let m = w.m as f64;
        let phase = Complex64::from_polar(1.0, -(m * FRAC_PI_2 + FRAC_PI_4));
        acc += phase * w.b(exit) * (eps(w.m) * (m * theta).cos());
    }
    acc * (2.0 / (PI * table.k)).sqrt()
}

/// Uniform grid of `n` angles on `(-pi, pi]`, closed at `pi`.
pub fn theta_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| -PI + 2.0 * PI * (j + 1) as f64 / n as f64).collect()
}

/// Dimensionless differential scattering lengths on an angular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularDistribution {
    pub thetas: Vec<f64>,
    pub lambda_a: Vec<f64>,
    pub lambda_b: Vec<f64>,
}

impl AngularDistribution {
    /// Periodic trapezoid integrals `(int lambda_a, int lambda_b)`; exact
    /// for the uniform grid of [`theta_grid`].
    pub fn integrals(&self) -> (f64, f64) {
        let w = 2.0 * PI / self.thetas.len() as f64;
        (self.lambda_a.iter().sum::<f64>() * w, self.lambda_b.iter().sum::<f64>() * w)
    }
}

/// `|f(theta)|^2 / divisor` of one exit channel at each angle.
pub fn differential(table: &PartialWaveTable, exit: ExitChannel, thetas: &[f64]) -> Vec<f64> {
    thetas
        .par_iter()
        .map(|&t| table.dimensionless(amplitude(table, exit, t).norm_sqr()))
        .collect()
}

/// Both exit channels on the given grid.
pub fn angular_distribution(table: &PartialWaveTable, thetas: &[f64]) -> AngularDistribution {
    AngularDistribution {
        thetas: thetas.to_vec(),
        lambda_a: differential(table, ExitChannel::NoDeexcitation, thetas),
        lambda_b: differential(table, ExitChannel::PhotonEmission, thetas),
    }
}

/// Dimensionless total scattering lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterSummary {
    pub lambda_a_total: f64,
    pub lambda_b_total: f64,
    pub lambda_plus_total: f64,
    pub lambda_minus_total: f64,
}

impl ScatterSummary {
    pub fn exit(&self, exit: ExitChannel) -> f64 {
        match exit {
            ExitChannel::NoDeexcitation => self.lambda_a_total,
            ExitChannel::PhotonEmission => self.lambda_b_total,
        }
    }
}

/// `lambda = (4/k) sum eps_m |B_m|^2` per exit channel and
/// `(4/k) sum eps_m sin^2 delta_m` per dressed channel, divided by the
/// mode length.
pub fn totals(table: &PartialWaveTable) -> ScatterSummary {
    let (mut a, mut b, mut p, mut q) = (0.0, 0.0, 0.0, 0.0);
    for w in &table.waves {
        let e = eps(w.m);
        a += e * w.b_a.norm_sqr();
        b += e * w.b_b.norm_sqr();
        p += e * w.delta_plus.sin().powi(2);
        q += e * w.delta_minus.sin().powi(2);
    }
    let s = 4.0 / table.k;
    ScatterSummary {
        lambda_a_total: table.dimensionless(s * a),
        lambda_b_total: table.dimensionless(s * b),
        lambda_plus_total: table.dimensionless(s * p),
        lambda_minus_total: table.dimensionless(s * q),
    }
}
