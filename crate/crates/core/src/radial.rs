//! Numerov integration of the channel radial equation
//! `u'' + Q(r) u = 0`, `Q = k^2 -/+ v(r) - (m^2 - 1/4) / r^2`.
//!
//! Works for any cylindrical profile. For the constant mode a grid node is
//! placed exactly on the edge `r = R`; the interior solution is carried one
//! step past the edge with the smooth interior `Q`, its slope at `R` is
//! taken from a fourth-order Numerov-consistent difference, and the exterior
//! solution is restarted from `(u, u')` by a sixth-order Taylor step. The
//! jump in `Q` therefore never enters a Numerov stencil.
//!
//! The phase shift comes from matching `u` at two exterior nodes to
//! `alpha sqrt(r) J_m(kr) + beta sqrt(r) Y_m(kr)`, with `tan(delta) = -beta / alpha`.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use rayon::prelude::*;

use crate::model::{ChannelSign, ModeFunction, ModeShape, ScatterConfig};
use crate::special::bessel_jy_seq_partial;
use crate::{Error, Result};

/// Growth threshold at which the running solution is rescaled.
const RENORM: f64 = 1e100;
/// Hard cap on the number of grid nodes per solve.
pub const MAX_NODES: usize = 20_000_000;

/// Knobs that tests use to probe convergence; production code uses the
/// defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialOptions {
    /// Multiplies the default step.
    pub step_scale: f64,
    /// Inner matching node sits at `match_factor * r_cut`.
    pub match_factor: f64,
    /// Number of steps from the origin to the first node (before the
    /// large-`m` shift described in [`start_node`]).
    pub start_steps: usize,
    /// Keep the whole wavefunction rather than only what matching needs.
    pub record: bool,
}

impl Default for RadialOptions {
    fn default() -> Self {
        RadialOptions {
            step_scale: 1.0,
            match_factor: 1.0,
            start_steps: 50,
            record: true,
        }
    }
}

/// Numerical channel wavefunction `u_m(r) = sqrt(r) R_m(r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    /// Radial nodes in units of `1/kappa_n`.
    pub grid: Vec<f64>,
    /// `u` on the grid, scaled so that the regular solution is
    /// `u * exp(log_norm)` with `u ~ r^{m+1/2}` at the origin.
    pub u: Vec<f64>,
    pub log_norm: f64,
    pub m: usize,
    pub channel: ChannelSign,
    pub delta: f64,
    /// Radius beyond which the profile is treated as zero.
    pub r_cut: f64,
}

impl RadialSolution {
    /// Number of sign changes of `u` on `(0, r_max]`.
    pub fn nodes_within(&self, r_max: f64) -> usize {
        let mut count = 0;
        let mut last = 0.0f64;
        for (&r, &u) in self.grid.iter().zip(&self.u) {
            if r > r_max {
                break;
            }
            if u != 0.0 {
                if last != 0.0 && (u > 0.0) != (last > 0.0) {
                    count += 1;
                }
                last = u;
            }
        }
        count
    }

    /// Trapezoidal `int u^2 dr` over `[a, b]` (restricted to the grid).
    pub fn weight_between(&self, a: f64, b: f64) -> f64 {
        let mut acc = 0.0;
        for i in 1..self.grid.len() {
            let (r0, r1) = (self.grid[i - 1], self.grid[i]);
            if r0 >= a && r1 <= b {
                acc += 0.5 * (r1 - r0) * (self.u[i - 1].powi(2) + self.u[i].powi(2));
            }
        }
        acc
    }

    /// Writes `r,u` rows with `u` scaled to unit maximum modulus.
    pub fn write_table<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let peak = self.u.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        let scale = if peak > 0.0 { 1.0 / peak } else { 1.0 };
        writeln!(w, "r,u")?;
        for (&r, &u) in self.grid.iter().zip(&self.u) {
            writeln!(w, "{},{}", crate::format::sci(r), crate::format::sci(u * scale))?;
        }
        Ok(())
    }
}

/// Default Numerov step `ode_step * min(1/k, 1, size/5)` in `1/kappa_n`
/// units, i.e. `min(1/40k, 1/40, size/200)` at the default tolerance.
pub fn default_step(cfg: &ScatterConfig) -> f64 {
    let size = cfg.profile().size;
    let mut scale = (1.0 / cfg.k()).min(1.0);
    if size > 0.0 {
        scale = scale.min(size / 5.0);
    }
    cfg.tolerances.ode_step * scale
}

struct Setup {
    k: f64,
    sign: f64,
    l: f64,
    profile: ModeFunction,
    r_cut: f64,
    h: f64,
    /// Grid index of the constant-mode edge, if any.
    edge: Option<usize>,
    n0: usize,
    n_a: usize,
    n_b: usize,
}

impl Setup {
    fn new(m: usize, ch: ChannelSign, cfg: &ScatterConfig, opts: &RadialOptions) -> Result<Self> {
        cfg.validate()?;
        if !(opts.step_scale > 0.0 && opts.match_factor >= 1.0) {
            return Err(Error::Config("step_scale must be positive and match_factor >= 1".into()));
        }
        let profile = cfg.profile();
        let k = cfg.k();
        let free = cfg.is_free();
        let r_cut = if free { 0.0 } else { profile.cutoff_radius(cfg.tolerances.series_tail) };
        let mut h = default_step(cfg) * opts.step_scale;
        let mut edge = None;
        if !free && profile.shape == ModeShape::Constant {
            let n = (profile.size / h).ceil().max(1.0) as usize;
            h = profile.size / n as f64;
            edge = Some(n);
        }
        let l = (m * m) as f64 - 0.25;
        let n0 = start_node(m, k, h, opts.start_steps, edge, r_cut);
        // Matching nodes: beyond the cut-off and clear of the start, a
        // quarter wavelength apart.
        let r_match = (opts.match_factor * r_cut).max((n0 + 2) as f64 * h);
        let n_a = (r_match / h).ceil() as usize;
        let gap = ((FRAC_PI_2 / k) / h).round().max(2.0) as usize;
        let n_b = n_a + gap;
        if n_b > MAX_NODES {
            // Local error proxy of the coarsest admissible grid.
            let q = (k * k + 1.0).sqrt();
            let coarse = n_b as f64 * h / MAX_NODES as f64;
            let achieved = (q * coarse).powi(6) / 240.0 * MAX_NODES as f64;
            return Err(Error::convergence("Numerov grid within node budget", achieved));
        }
        Ok(Setup {
            k,
            sign: ch.potential_sign(),
            l,
            profile,
            r_cut,
            h,
            edge,
            n0,
            n_a,
            n_b,
        })
    }

    fn v(&self, r: f64) -> f64 {
        if r > self.r_cut {
            0.0
        } else {
            self.profile.value(r)
        }
    }

    /// `Q(r)`. With a constant-mode edge, `inside` selects the interior or
    /// exterior branch regardless of `r`, so each side is smooth.
    fn q(&self, r: f64, inside: bool) -> f64 {
        let v = match (self.edge, inside) {
            (Some(_), true) => 1.0,
            (Some(_), false) => 0.0,
            (None, _) => self.v(r),
        };
        self.k * self.k - self.sign * v - self.l / (r * r)
    }

    /// Power-series coefficients of `v` in `r^2`, each multiplied by
    /// `x^l`, valid near the origin.
    fn v_series(&self, terms: usize, x: f64) -> Vec<f64> {
        let mut c = vec![0.0; terms];
        if self.r_cut == 0.0 {
            return c;
        }
        c[0] = 1.0;
        if self.profile.shape == ModeShape::Gaussian {
            let a = -x / (2.0 * self.profile.size * self.profile.size);
            for l in 1..terms {
                c[l] = c[l - 1] * a / l as f64;
            }
        }
        c
    }

    /// Regular solution `sum a_j r^{2j}` (the `r^{m+1/2}` factor omitted)
    /// from the Frobenius recursion `4j(m+j) a_j = -k^2 a_{j-1} + s sum v_l a_{j-1-l}`.
    fn frobenius(&self, m: usize, r: f64) -> f64 {
        const TERMS: usize = 400;
        let r2 = r * r;
        // Work with b_j = a_j r^{2j} and w_l = v_l r^{2l} so nothing overflows.
        let ws = self.v_series(TERMS, r2);
        let mut b = vec![1.0];
        let mut sum = 1.0;
        let mut small = 0;
        for j in 1..TERMS {
            let mut acc = -self.k * self.k * b[j - 1];
            for l in 0..j {
                acc += self.sign * ws[l] * b[j - 1 - l];
            }
            let bj = acc * r2 / (4.0 * j as f64 * (m + j) as f64);
            b.push(bj);
            sum += bj;
            if bj.abs() <= 1e-18 * sum.abs() {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        sum
    }
}

/// First grid node. For large `m` the regular solution is pure power law
/// well beyond the first few steps; starting where `(q r)^2 ~ m` keeps the
/// Frobenius sum free of cancellation and saves steps. The start never
/// passes half the mode edge / cut-off.
fn start_node(m: usize, k: f64, h: f64, steps: usize, edge: Option<usize>, r_cut: f64) -> usize {
    let q = (k * k + 1.0).sqrt();
    let shift = ((m as f64 + 1.0).sqrt() / q / h).floor() as usize;
    let mut n0 = steps.max(1).max(shift.min(steps.max(1) * 1000));
    let cap = match edge {
        Some(n) => n / 2,
        None if r_cut > 0.0 => ((0.5 * r_cut) / h) as usize,
        None => usize::MAX,
    };
    if n0 > cap {
        n0 = cap.max(1).min(n0);
    }
    n0
}

struct Trace {
    grid: Vec<f64>,
    u: Vec<f64>,
    log_norm: f64,
    ua: f64,
    ub: f64,
}

fn integrate(m: usize, s: &Setup, record: bool) -> Trace {
    let h = s.h;
    let h2 = h * h / 12.0;
    let r_at = |i: usize| i as f64 * h;
    let mut grid = Vec::new();
    let mut us = Vec::new();
    let mut log_norm = 0.0f64;

    // Start pair from the Frobenius series, normalised to the first node.
    let (r0, r1) = (r_at(s.n0), r_at(s.n0 + 1));
    let p = m as f64 + 0.5;
    log_norm += p * r0.ln();
    let mut u_prev = s.frobenius(m, r0);
    let mut u_cur = (r1 / r0).powf(p) * s.frobenius(m, r1);
    if record {
        grid.extend([r0, r1]);
        us.extend([u_prev, u_cur]);
    }
    let mut ua = 0.0;
    let mut ub = 0.0;
    for (idx, u) in [(s.n0, u_prev), (s.n0 + 1, u_cur)] {
        if idx == s.n_a {
            ua = u;
        }
    }

    let inside_until = s.edge.unwrap_or(0);
    let mut i = s.n0 + 1;
    while i < s.n_b {
        let inside = s.edge.is_some() && i <= inside_until;
        let qm = s.q(r_at(i - 1), inside);
        let q0 = s.q(r_at(i), inside);
        let qp = s.q(r_at(i + 1), inside);
        let mut next = (2.0 * u_cur * (1.0 - 5.0 * h2 * q0) - u_prev * (1.0 + h2 * qm)) / (1.0 + h2 * qp);
        if s.edge == Some(i) {
            // Slope at the edge from the smooth interior continuation, then
            // restart the exterior solution by a Taylor step.
            let slope = (next * (1.0 + 2.0 * h2 * qp) - u_prev * (1.0 + 2.0 * h2 * qm)) / (2.0 * h);
            next = taylor_step(u_cur, slope, r_at(i), h, s.k * s.k, s.l);
        }
        u_prev = u_cur;
        u_cur = next;
        i += 1;
        if i == s.n_a {
            ua = u_cur;
        }
        if i == s.n_b {
            ub = u_cur;
        }
        if record {
            grid.push(r_at(i));
            us.push(u_cur);
        }
        if u_cur.abs() > RENORM {
            u_prev /= RENORM;
            u_cur /= RENORM;
            ua /= RENORM;
            ub /= RENORM;
            log_norm += RENORM.ln();
            for v in us.iter_mut() {
                *v /= RENORM;
            }
        }
    }
    Trace {
        grid,
        u: us,
        log_norm,
        ua,
        ub,
    }
}

/// `u(r + h)` for `u'' = -(c - l/r^2) u` from `u(r)`, `u'(r)`, through sixth order.
fn taylor_step(u: f64, du: f64, r: f64, h: f64, c: f64, l: f64) -> f64 {
    let q0 = c - l / (r * r);
    let q1 = 2.0 * l / r.powi(3);
    let q2 = -6.0 * l / r.powi(4);
    let q3 = 24.0 * l / r.powi(5);
    let q4 = -120.0 * l / r.powi(6);
    let d2 = -q0 * u;
    let d3 = -(q1 * u + q0 * du);
    let d4 = -(q2 * u + 2.0 * q1 * du + q0 * d2);
    let d5 = -(q3 * u + 3.0 * q2 * du + 3.0 * q1 * d2 + q0 * d3);
    let d6 = -(q4 * u + 4.0 * q3 * du + 6.0 * q2 * d2 + 4.0 * q1 * d3 + q0 * d4);
    u + h * (du + h / 2.0 * (d2 + h / 3.0 * (d3 + h / 4.0 * (d4 + h / 5.0 * (d5 + h / 6.0 * d6)))))
}

/// Two-point match of `u` to `sqrt(r)(alpha J_m + beta Y_m)`.
fn match_phase(m: usize, k: f64, ra: f64, ua: f64, rb: f64, ub: f64) -> Result<f64> {
    let (ja, ya) = bessel_jy_seq_partial(k * ra, m)?;
    let (jb, yb) = bessel_jy_seq_partial(k * rb, m)?;
    if ya.len() <= m || yb.len() <= m {
        // The exterior wave never reaches this far in: no scattering.
        return Ok(0.0);
    }
    let (sa, sb) = (ra.sqrt(), rb.sqrt());
    let (ja, ya, jb, yb) = (sa * ja[m], sa * ya[m], sb * jb[m], sb * yb[m]);
    // -beta / alpha
    let num = ua * jb - ub * ja;
    let den = ua * yb - ub * ya;
    if den == 0.0 {
        return Ok(if num == 0.0 { 0.0 } else { FRAC_PI_2 });
    }
    Ok((num / den).atan())
}

/// Integrates partial wave `m` in channel `ch` and extracts its phase shift.
pub fn solve_radial(m: usize, ch: ChannelSign, cfg: &ScatterConfig) -> Result<RadialSolution> {
    solve_radial_with(m, ch, cfg, &RadialOptions::default())
}

pub fn solve_radial_with(m: usize, ch: ChannelSign, cfg: &ScatterConfig, opts: &RadialOptions) -> Result<RadialSolution> {
    let s = Setup::new(m, ch, cfg, opts)?;
    let t = integrate(m, &s, opts.record);
    if !(t.ua.is_finite() && t.ub.is_finite()) {
        return Err(Error::overflow(format!("Numerov solution for m = {m} is not finite")));
    }
    let delta = match_phase(m, s.k, s.n_a as f64 * s.h, t.ua, s.n_b as f64 * s.h, t.ub)?;
    Ok(RadialSolution {
        grid: t.grid,
        u: t.u,
        log_norm: t.log_norm,
        m,
        channel: ch,
        delta,
        r_cut: s.r_cut,
    })
}

/// Phase shift only, without storing the wavefunction.
pub fn radial_phase_shift(m: usize, ch: ChannelSign, cfg: &ScatterConfig) -> Result<f64> {
    let opts = RadialOptions {
        record: false,
        ..RadialOptions::default()
    };
    Ok(solve_radial_with(m, ch, cfg, &opts)?.delta)
}

/// Phase shifts for `m = lo..=hi` in one channel, in parallel.
pub fn radial_phase_shifts(ch: ChannelSign, cfg: &ScatterConfig, lo: usize, hi: usize) -> Result<Vec<f64>> {
    (lo..=hi).into_par_iter().map(|m| radial_phase_shift(m, ch, cfg)).collect()
}
