//! Quasibound states of the attractive channel of the constant mode.
//!
//! A purely outgoing solution (`J_m(k^- r)` inside, `H1_m(k r)` outside)
//! exists only where
//!
//! ```text
//! k J_m(k^- R) H1'_m(k R) - k^- J'_m(k^- R) H1_m(k R) = 0,
//! ```
//!
//! which happens at complex `kappa R = kappa R_0 - i Gamma / 2`. The
//! equation is solved at fixed `k / kappa_n`, so both arguments scale with
//! the single complex variable `x = kappa R`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::asymptotics::{cold_peak_positions, Parity};
use crate::format::{csv_row, sci};
use crate::model::{kappa_n_scale, ScatterConfig};
use crate::special::{bessel_j_seq_complex, bessel_jy_seq_complex, cylinder_derivative};
use crate::{Error, Result};

/// Where a record came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Polished complex root of the secular equation.
    ComplexRoot,
    /// Peak of the cold-regime analytic profile.
    AnalyticProfile,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ComplexRoot => "complex_root",
            Method::AnalyticProfile => "analytic_profile",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceRecord {
    pub m: usize,
    /// Peak position in `kappa R`.
    pub kappa_r0: f64,
    /// Width in `kappa R`.
    pub gamma: f64,
    /// `|secular|` at the root relative to the magnitude of its two terms;
    /// NaN for analytic-profile records, which are not roots.
    pub residual: f64,
    pub method: Method,
}

/// The two terms of the secular determinant, `k J H1'` and `k^- J' H1`.
fn secular_terms(m: usize, x: Complex64, ratio: f64, n: u32) -> Result<(Complex64, Complex64)> {
    if !(x.re > 0.0) {
        return Err(Error::domain(format!("secular equation needs Re(kappa R) > 0, got {x}")));
    }
    let s = kappa_n_scale(n);
    let k_in = (1.0 + ratio * ratio).sqrt();
    let z_out = x * (ratio * s);
    let z_in = x * (k_in * s);
    let j_in = bessel_j_seq_complex(z_in, m + 1)?;
    let (j_out, y_out) = bessel_jy_seq_complex(z_out, m + 1)?;
    let h: Vec<Complex64> = j_out.iter().zip(&y_out).map(|(j, y)| j + Complex64::i() * y).collect();
    let hp = cylinder_derivative(&h, z_out, m);
    let jp = cylinder_derivative(&j_in, z_in, m);
    Ok((j_in[m] * hp * ratio, jp * h[m] * k_in))
}

/// Secular determinant at complex `x = kappa R` for velocity ratio `ratio`
/// and photon number `n`.
pub fn secular(m: usize, x: Complex64, ratio: f64, n: u32) -> Result<Complex64> {
    let (a, b) = secular_terms(m, x, ratio, n)?;
    Ok(a - b)
}

/// `|secular|` divided by `|k J H1'| + |k^- J' H1|`. The Hankel factors
/// grow like `(kR)^{-m}`, so only the relative cancellation is a
/// meaningful root criterion.
pub fn relative_residual(m: usize, x: Complex64, ratio: f64, n: u32) -> Result<f64> {
    let (a, b) = secular_terms(m, x, ratio, n)?;
    let scale = a.norm() + b.norm();
    Ok(if scale > 0.0 { (a - b).norm() / scale } else { 0.0 })
}

/// Search settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceSearch {
    /// Largest width reported; the strip searched is `-Gamma_max/2 <= Im x < 0`.
    pub gamma_max: f64,
    /// Edge length of the winding-number cells along the real axis.
    pub cell: f64,
}

impl Default for ResonanceSearch {
    fn default() -> Self {
        ResonanceSearch { gamma_max: 2.0, cell: 0.25 }
    }
}

/// Smallest real part searched; the determinant blows up at the origin.
const RE_FLOOR: f64 = 1e-2;

/// Accumulated argument change of `f` along the segment `a -> b`, refined
/// until successive samples differ by less than `pi/4` in phase.
fn arg_change<F: Fn(Complex64) -> Result<Complex64>>(f: &F, a: Complex64, fa: Complex64, b: Complex64, fb: Complex64, depth: u32) -> Result<f64> {
    let d = (fb / fa).arg();
    if d.abs() < PI / 4.0 || depth >= 24 {
        return Ok(d);
    }
    let mid = (a + b) * 0.5;
    let fm = f(mid)?;
    Ok(arg_change(f, a, fa, mid, fm, depth + 1)? + arg_change(f, mid, fm, b, fb, depth + 1)?)
}

/// Number of zeros inside the rectangle `[x0, x1] x [y0, y1]`.
fn winding<F: Fn(Complex64) -> Result<Complex64>>(f: &F, x0: f64, x1: f64, y0: f64, y1: f64) -> Result<i64> {
    let corners = [
        Complex64::new(x0, y0),
        Complex64::new(x1, y0),
        Complex64::new(x1, y1),
        Complex64::new(x0, y1),
    ];
    let values = corners.iter().map(|&c| f(c)).collect::<Result<Vec<_>>>()?;
    let mut total = 0.0;
    for i in 0..4 {
        let j = (i + 1) % 4;
        // Each edge starts with a few samples so the refinement sees
        // oscillations shorter than the edge.
        let pieces = 4;
        let mut a = corners[i];
        let mut fa = values[i];
        for p in 1..=pieces {
            let b = corners[i] + (corners[j] - corners[i]) * (p as f64 / pieces as f64);
            let fb = if p == pieces { values[j] } else { f(b)? };
            total += arg_change(f, a, fa, b, fb, 0)?;
            a = b;
            fa = fb;
        }
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

/// Newton iteration with a central-difference derivative.
fn newton<F, R>(f: &F, res: &R, start: Complex64, tol: f64) -> Option<(Complex64, f64)>
where
    F: Fn(Complex64) -> Result<Complex64>,
    R: Fn(Complex64) -> Result<f64>,
{
    let mut x = start;
    for _ in 0..60 {
        let fx = f(x).ok()?;
        let h = 1e-6 * x.norm().max(1.0);
        let d = (f(x + h).ok()? - f(x - h).ok()?) / (2.0 * h);
        if d.norm() == 0.0 || !d.re.is_finite() {
            return None;
        }
        let step = fx / d;
        x -= step;
        if !(x.re > 0.0) {
            return None;
        }
        if step.norm() <= 1e-14 * x.norm().max(1.0) {
            let r = res(x).ok()?;
            return (r <= tol).then_some((x, r));
        }
    }
    let r = res(x).ok()?;
    (r <= tol).then_some((x, r))
}

fn polish_cell<F, R>(
    f: &F,
    res: &R,
    cell: (f64, f64, f64, f64),
    count: i64,
    tol: f64,
    depth: u32,
) -> std::result::Result<Vec<(Complex64, f64)>, f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
    R: Fn(Complex64) -> Result<f64>,
{
    let (x0, x1, y0, y1) = cell;
    if count == 1 || depth >= 6 {
        let starts = [
            Complex64::new(0.5 * (x0 + x1), 0.5 * (y0 + y1)),
            Complex64::new(0.75 * x0 + 0.25 * x1, 0.75 * y0 + 0.25 * y1),
            Complex64::new(0.25 * x0 + 0.75 * x1, 0.25 * y0 + 0.75 * y1),
            Complex64::new(0.75 * x0 + 0.25 * x1, 0.25 * y0 + 0.75 * y1),
            Complex64::new(0.25 * x0 + 0.75 * x1, 0.75 * y0 + 0.25 * y1),
        ];
        let inside = |z: Complex64| {
            let (mx, my) = (1e-9 * (x1 - x0), 1e-9 * (y1 - y0));
            z.re >= x0 - mx && z.re <= x1 + mx && z.im >= y0 - my && z.im <= y1 + my
        };
        for s in starts {
            if let Some((z, r)) = newton(f, res, s, tol) {
                if inside(z) {
                    return Ok(vec![(z, r)]);
                }
            }
        }
        let centre = res(starts[0]).unwrap_or(f64::INFINITY);
        return Err(centre);
    }
    // Several zeros: quarter the cell.
    let (xm, ym) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let mut out = Vec::new();
    for sub in [(x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1)] {
        let c = winding(f, sub.0, sub.1, sub.2, sub.3).map_err(|_| f64::INFINITY)?;
        if c > 0 {
            out.extend(polish_cell(f, res, sub, c, tol, depth + 1)?);
        }
    }
    Ok(out)
}

/// Roots polished in one cell, or the residual reached and the cell.
type CellOutcome = std::result::Result<Vec<(Complex64, f64)>, (f64, Cell)>;
type Cell = (f64, f64, f64, f64);

/// Every root with real part in `window` and width `0 < Gamma <= gamma_max`,
/// sorted by position.
pub fn find_resonances_with(m: usize, window: (f64, f64), cfg: &ScatterConfig, search: &ResonanceSearch) -> Result<Vec<ResonanceRecord>> {
    cfg.validate()?;
    let (lo, hi) = (window.0.max(RE_FLOOR), window.1);
    if !(hi > lo) {
        return Ok(Vec::new());
    }
    if hi > 200.0 {
        return Err(Error::Config(format!("resonance window must lie within (0, 200], got {hi}")));
    }
    let ratio = cfg.k();
    let n = cfg.n;
    let tol = cfg.tolerances.root_tol;
    let f = move |z: Complex64| secular(m, z, ratio, n);
    let res = move |z: Complex64| relative_residual(m, z, ratio, n);
    let cells_re = ((hi - lo) / search.cell).ceil().max(1.0) as usize;
    let dx = (hi - lo) / cells_re as f64;
    let depth = 0.5 * search.gamma_max;
    let cells_im = (depth / search.cell).ceil().max(1.0) as usize;
    let dy = depth / cells_im as f64;

    let cells: Vec<(f64, f64, f64, f64)> = (0..cells_re)
        .flat_map(|i| {
            (0..cells_im).map(move |j| {
                (
                    lo + i as f64 * dx,
                    lo + (i + 1) as f64 * dx,
                    -depth + j as f64 * dy,
                    -depth + (j + 1) as f64 * dy,
                )
            })
        })
        .collect();

    let found: Vec<CellOutcome> = cells
        .par_iter()
        .map(|&cell| {
            let count = match winding(&f, cell.0, cell.1, cell.2, cell.3) {
                Ok(c) => c,
                Err(_) => return Ok(Vec::new()),
            };
            if count <= 0 {
                return Ok(Vec::new());
            }
            polish_cell(&f, &res, cell, count, tol, 0).map_err(|e| (e, cell))
        })
        .collect();

    let mut roots: Vec<(Complex64, f64)> = Vec::new();
    for item in found {
        match item {
            Ok(v) => roots.extend(v),
            Err((achieved, c)) => {
                return Err(Error::convergence(
                    format!(
                        "resonance polishing for m = {m} in [{:.4}, {:.4}] x [{:.4}, {:.4}]",
                        c.0, c.1, c.2, c.3
                    ),
                    achieved,
                ))
            }
        }
    }
    roots.sort_by(|a, b| a.0.re.total_cmp(&b.0.re));
    let mut records: Vec<ResonanceRecord> = Vec::new();
    for (z, r) in roots {
        let gamma = -2.0 * z.im;
        if !(gamma > 0.0 && gamma <= search.gamma_max && z.re >= lo && z.re <= hi) {
            continue;
        }
        if let Some(last) = records.last() {
            if (last.kappa_r0 - z.re).abs() < 10.0 * tol.max(1e-9) && (last.gamma - gamma).abs() < 1e-6 {
                continue;
            }
        }
        records.push(ResonanceRecord {
            m,
            kappa_r0: z.re,
            gamma,
            residual: r,
            method: Method::ComplexRoot,
        });
    }
    Ok(records)
}

pub fn find_resonances(m: usize, window: (f64, f64), cfg: &ScatterConfig) -> Result<Vec<ResonanceRecord>> {
    find_resonances_with(m, window, cfg, &ResonanceSearch::default())
}

/// Resonances for several `m`, sorted by `(m, kappa R_0)`.
pub fn find_all(ms: std::ops::RangeInclusive<usize>, window: (f64, f64), cfg: &ScatterConfig) -> Result<Vec<ResonanceRecord>> {
    let mut all = Vec::new();
    for m in ms {
        all.extend(find_resonances(m, window, cfg)?);
    }
    sort_records(&mut all);
    Ok(all)
}

pub fn sort_records(records: &mut [ResonanceRecord]) {
    records.sort_by(|a, b| a.m.cmp(&b.m).then(a.kappa_r0.total_cmp(&b.kappa_r0)));
}

/// Peaks of the cold-regime analytic profile of parity `m % 2` in `window`.
/// The width is the profile's FWHM, `2 (k/kappa_n) / sqrt(1 + (k/kappa_n)^2)`
/// in `kappa_n R`.
pub fn analytic_records(m: usize, window: (f64, f64), cfg: &ScatterConfig) -> Vec<ResonanceRecord> {
    let r = cfg.k();
    let gamma = 2.0 * r / (1.0 + r * r).sqrt() / kappa_n_scale(cfg.n);
    cold_peak_positions(Parity::of(m), r, cfg.n, window.0.max(0.0), window.1)
        .into_iter()
        .filter(|&x| x > 0.0)
        .map(|x| ResonanceRecord {
            m,
            kappa_r0: x,
            gamma,
            residual: f64::NAN,
            method: Method::AnalyticProfile,
        })
        .collect()
}

/// A local maximum of a scanned curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPeak {
    pub index: usize,
    pub x: f64,
    pub value: f64,
    /// Full width at half maximum; each side stops early at the
    /// neighbouring minimum when the curve never drops to half height.
    pub fwhm: f64,
}

/// Strict interior local maxima of `ys` (plateaus count once).
pub fn scan_peaks(xs: &[f64], ys: &[f64]) -> Vec<ScanPeak> {
    let n = ys.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if ys[i] > ys[i - 1] {
            // walk across a plateau
            let mut j = i;
            while j + 1 < n && ys[j + 1] == ys[i] {
                j += 1;
            }
            if j + 1 < n && ys[j + 1] < ys[i] {
                let top = (i + j) / 2;
                out.push(ScanPeak {
                    index: top,
                    x: xs[top],
                    value: ys[top],
                    fwhm: half_width(xs, ys, top, -1) + half_width(xs, ys, top, 1),
                });
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

fn half_width(xs: &[f64], ys: &[f64], top: usize, dir: isize) -> f64 {
    let half = 0.5 * ys[top];
    let mut i = top as isize;
    loop {
        let next = i + dir;
        if next < 0 || next as usize >= ys.len() {
            return (xs[i as usize] - xs[top]).abs();
        }
        let (a, b) = (ys[i as usize], ys[next as usize]);
        if b <= half {
            // interpolate the crossing
            let t = (a - half) / (a - b);
            let x = xs[i as usize] + t * (xs[next as usize] - xs[i as usize]);
            return (x - xs[top]).abs();
        }
        if b > a {
            // neighbouring minimum reached first
            return (xs[i as usize] - xs[top]).abs();
        }
        i = next;
    }
}

/// A scan maximum with the partial wave it is attributed to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakLabel {
    pub x: f64,
    pub value: f64,
    /// `None` flags a peak with no record close enough.
    pub m: Option<usize>,
    pub method: Option<Method>,
}

/// Attributes every local maximum of a scan to the nearest record whose
/// position lies within `max(Gamma, scan step)`. Complex-root records take
/// precedence; analytic-profile records are the fallback.
pub fn label_total_length_peaks(xs: &[f64], ys: &[f64], records: &[ResonanceRecord]) -> Vec<PeakLabel> {
    let step = if xs.len() > 1 { (xs[1] - xs[0]).abs() } else { 0.0 };
    let nearest = |x: f64, method: Method| {
        records
            .iter()
            .filter(|r| r.method == method && (r.kappa_r0 - x).abs() <= r.gamma.max(step))
            .min_by(|a, b| (a.kappa_r0 - x).abs().total_cmp(&(b.kappa_r0 - x).abs()))
    };
    scan_peaks(xs, ys)
        .into_iter()
        .map(|p| {
            let hit = nearest(p.x, Method::ComplexRoot).or_else(|| nearest(p.x, Method::AnalyticProfile));
            PeakLabel {
                x: p.x,
                value: p.value,
                m: hit.map(|r| r.m),
                method: hit.map(|r| r.method),
            }
        })
        .collect()
}

pub const CSV_HEADER: &str = "m,kappa_R0,gamma,residual,method";

/// Writes records as CSV with a header row.
pub fn write_csv<W: Write>(mut w: W, records: &[ResonanceRecord]) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        let row = csv_row([
            r.m.to_string(),
            sci(r.kappa_r0),
            sci(r.gamma),
            if r.residual.is_nan() { "nan".to_string() } else { sci(r.residual) },
            r.method.name().to_string(),
        ]);
        writeln!(w, "{row}")?;
    }
    Ok(())
}
