//! Cylindrical Bessel functions of integer order.
//!
//! `J` is obtained by Miller's backward recurrence, normalized with the
//! generating-function identity (`1 = J_0 + 2 sum J_2k` on the real axis,
//! `exp(-/+ i z) = sum eps_k (-/+ i)^k J_k(z)` off it). For `|z| <= 1` the
//! ascending series is used instead. `Y_0` and `Y_1` follow from the Neumann
//! series over the same `J` sequence, higher orders from forward recurrence,
//! which is stable for the dominant solution. `I` uses the same backward
//! scheme with `exp(x) = I_0 + 2 sum I_k` and is returned exponentially
//! scaled to keep large arguments representable.
//!
//! Accuracy near the real axis is at the level of a few ulps times
//! `sqrt(|z|)`. Far into the upper half plane `H1 = J + iY` suffers
//! cancellation of order `exp(2 Im z)`.

use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const RESCALE: f64 = 1e120;
const SERIES_RADIUS: f64 = 1.0;

/// Which cylinder function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BesselKind {
    /// First kind.
    J,
    /// Second kind.
    Y,
    /// First Hankel function, `J + iY`.
    H1,
    /// Modified, first kind. Real arguments only.
    I,
}

trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
    + Neg<Output = Self>
{
    fn from_re(x: f64) -> Self;
    fn magnitude(self) -> f64;
    fn ln_half(self) -> Self;
}

impl Scalar for f64 {
    fn from_re(x: f64) -> Self {
        x
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn ln_half(self) -> Self {
        (0.5 * self).ln()
    }
}

impl Scalar for Complex64 {
    fn from_re(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn ln_half(self) -> Self {
        (self * 0.5).ln()
    }
}

fn miller_top(nmax: usize, abs_z: f64) -> usize {
    let base = nmax.max(abs_z.ceil() as usize);
    let top = base + 24 + (12.0 * abs_z.cbrt()).ceil() as usize;
    top + (top & 1)
}

/// Ascending series `J_m(z)` for `m = 0..=top`; `sign = -1` gives `J`,
/// `sign = +1` gives `I`.
fn ascending_series<T: Scalar>(z: T, top: usize, sign: f64) -> Vec<T> {
    let half = z * 0.5;
    let q = half * half * sign;
    let mut lead = T::from_re(1.0);
    let mut out = Vec::with_capacity(top + 1);
    for m in 0..=top {
        if m > 0 {
            lead = lead * half / m as f64;
        }
        let mut term = lead;
        let mut sum = lead;
        for j in 1..200 {
            term = term * q / (j as f64 * (m + j) as f64);
            sum = sum + term;
            if term.magnitude() <= 1e-17 * sum.magnitude() {
                break;
            }
        }
        out.push(sum);
    }
    out
}

/// Backward recurrence for the minimal solution of
/// `f_{n-1} = (2n/z) f_n + sign * f_{n+1}`, normalized so that
/// `sum_k weight(k) f_k = target`.
fn miller<T: Scalar>(z: T, top: usize, sign: f64, weight: impl Fn(usize) -> T, target: T) -> Vec<T> {
    let mut f = vec![T::from_re(0.0); top + 1];
    let mut next = T::from_re(0.0);
    let mut cur = T::from_re(1.0);
    f[top] = cur;
    let mut sum = weight(top) * cur;
    for n in (1..=top).rev() {
        let prev = cur * (2.0 * n as f64) / z + next * sign;
        next = cur;
        cur = prev;
        f[n - 1] = cur;
        sum = sum + weight(n - 1) * cur;
        if cur.magnitude() > RESCALE {
            for v in &mut f[n - 1..] {
                *v = *v / RESCALE;
            }
            next = next / RESCALE;
            cur = cur / RESCALE;
            sum = sum / RESCALE;
        }
    }
    let scale = target / sum;
    for v in &mut f {
        *v = *v * scale;
    }
    f
}

/// `J_0..=J_top` for real `x > 0`, with `top >= nmax` large enough for the
/// Neumann sums.
fn j_full_real(x: f64, nmax: usize) -> Vec<f64> {
    if x <= SERIES_RADIUS {
        return ascending_series(x, nmax.max(2) + 24, -1.0);
    }
    let top = miller_top(nmax, x);
    let weight = |k: usize| match k {
        0 => 1.0,
        k if k % 2 == 0 => 2.0,
        _ => 0.0,
    };
    miller(x, top, -1.0, weight, 1.0)
}

fn j_full_complex(z: Complex64, nmax: usize) -> Vec<Complex64> {
    let r = z.norm();
    if r <= SERIES_RADIUS {
        return ascending_series(z, nmax.max(2) + 24, -1.0);
    }
    let top = miller_top(nmax, r);
    // exp(-i z) = sum eps_k (-i)^k J_k for Im z >= 0, exp(i z) with i^k below.
    let unit = if z.im >= 0.0 {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::new(0.0, 1.0)
    };
    let target = (unit * z).exp();
    let weight = |k: usize| {
        let eps = if k == 0 { 1.0 } else { 2.0 };
        unit.powu((k % 4) as u32) * eps
    };
    miller(z, top, -1.0, weight, target)
}

/// Neumann series for `Y_0` and `Y_1` from a full `J` sequence.
fn neumann_y01<T: Scalar>(z: T, j: &[T]) -> (T, T) {
    let lg = z.ln_half() + T::from_re(EULER_GAMMA);
    let mut s0 = T::from_re(0.0);
    let mut s1 = T::from_re(0.0);
    let mut k = 1;
    while 2 * k + 1 < j.len() {
        let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
        s0 = s0 + j[2 * k] * (sign / k as f64);
        s1 = s1 + (j[2 * k - 1] - j[2 * k + 1]) * (sign / k as f64);
        k += 1;
    }
    let c = 2.0 / PI;
    let y0 = (lg * j[0] - s0 * 2.0) * c;
    let dy0 = (j[0] / z - lg * j[1] - s1) * c;
    (y0, -dy0)
}

fn y_forward<T: Scalar>(z: T, y0: T, y1: T, nmax: usize) -> Result<Vec<T>> {
    let mut y = Vec::with_capacity(nmax + 1);
    y.push(y0);
    if nmax >= 1 {
        y.push(y1);
    }
    for n in 1..nmax {
        let v = y[n] * (2.0 * n as f64) / z - y[n - 1];
        if !v.magnitude().is_finite() {
            return Err(Error::overflow(format!(
                "Y_{} exceeds the representable range",
                n + 1
            )));
        }
        y.push(v);
    }
    Ok(y)
}

/// `J_m(x)` for `m = 0..=nmax`, real `x` of either sign.
pub fn bessel_j_seq(x: f64, nmax: usize) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; nmax + 1];
        out[0] = 1.0;
        return out;
    }
    let mut full = j_full_real(x.abs(), nmax);
    full.truncate(nmax + 1);
    if x < 0.0 {
        for (m, v) in full.iter_mut().enumerate() {
            if m % 2 == 1 {
                *v = -*v;
            }
        }
    }
    full
}

/// `J_m(x)` and `Y_m(x)` for `m = 0..=nmax`, real `x > 0`.
pub fn bessel_jy_seq(x: f64, nmax: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("Y requires a positive finite real argument, got {x}")));
    }
    let mut j = j_full_real(x, nmax);
    let (y0, y1) = neumann_y01(x, &j);
    let y = y_forward(x, y0, y1, nmax)?;
    j.truncate(nmax + 1);
    Ok((j, y))
}

/// Like [`bessel_jy_seq`], but instead of failing when `Y_m` overflows the
/// `Y` sequence simply stops at the last representable order, so it may be
/// shorter than `nmax + 1`.
pub fn bessel_jy_seq_partial(x: f64, nmax: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("Y requires a positive finite real argument, got {x}")));
    }
    let mut j = j_full_real(x, nmax);
    let (y0, y1) = neumann_y01(x, &j);
    let mut y = vec![y0];
    if nmax >= 1 && y1.is_finite() {
        y.push(y1);
        for n in 1..nmax {
            let v = y[n] * (2.0 * n as f64) / x - y[n - 1];
            if !v.is_finite() {
                break;
            }
            y.push(v);
        }
    }
    j.truncate(nmax + 1);
    Ok((j, y))
}

/// `J_m(z)` and `Y_m(z)` for `m = 0..=nmax`, complex `z != 0`, principal
/// branch (cut along the negative real axis).
pub fn bessel_jy_seq_complex(z: Complex64, nmax: usize) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    check_finite(z)?;
    if z.norm() == 0.0 {
        return Err(Error::domain("Y is singular at z = 0"));
    }
    if z.im == 0.0 && z.re > 0.0 {
        let (j, y) = bessel_jy_seq(z.re, nmax)?;
        return Ok((
            j.into_iter().map(Complex64::from).collect(),
            y.into_iter().map(Complex64::from).collect(),
        ));
    }
    let mut j = j_full_complex(z, nmax);
    let (y0, y1) = neumann_y01(z, &j);
    let y = y_forward(z, y0, y1, nmax)?;
    j.truncate(nmax + 1);
    Ok((j, y))
}

/// `J_m(z)` for `m = 0..=nmax`, any finite complex `z`.
pub fn bessel_j_seq_complex(z: Complex64, nmax: usize) -> Result<Vec<Complex64>> {
    check_finite(z)?;
    if z.norm() == 0.0 {
        let mut out = vec![Complex64::new(0.0, 0.0); nmax + 1];
        out[0] = Complex64::new(1.0, 0.0);
        return Ok(out);
    }
    if z.im == 0.0 {
        return Ok(bessel_j_seq(z.re, nmax).into_iter().map(Complex64::from).collect());
    }
    let mut j = j_full_complex(z, nmax);
    j.truncate(nmax + 1);
    Ok(j)
}

/// Exponentially scaled `exp(-|x|) I_m(x)` for `m = 0..=nmax`.
pub fn bessel_i_scaled_seq(x: f64, nmax: usize) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; nmax + 1];
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    let mut out = if ax <= SERIES_RADIUS {
        let scale = (-ax).exp();
        let mut s = ascending_series(ax, nmax, 1.0);
        s.iter_mut().for_each(|v| *v *= scale);
        s
    } else {
        let top = nmax + 24 + (12.0 * ax.sqrt()).ceil() as usize;
        let weight = |k: usize| if k == 0 { 1.0 } else { 2.0 };
        miller(ax, top, 1.0, weight, 1.0)
    };
    out.truncate(nmax + 1);
    if x < 0.0 {
        for (m, v) in out.iter_mut().enumerate() {
            if m % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

/// `C'_m(z) = C_{m-1}(z) - (m/z) C_m(z)` for a sequence of `J`, `Y` or `H1`
/// values (`C'_0 = -C_1`). The sequence must extend to `max(m, 1)`.
pub fn cylinder_derivative(seq: &[Complex64], z: Complex64, m: usize) -> Complex64 {
    if m == 0 {
        -seq[1]
    } else {
        seq[m - 1] - seq[m] * (m as f64) / z
    }
}

/// Real-argument counterpart of [`cylinder_derivative`].
pub fn cylinder_derivative_real(seq: &[f64], x: f64, m: usize) -> f64 {
    if m == 0 {
        -seq[1]
    } else {
        seq[m - 1] - seq[m] * (m as f64) / x
    }
}

/// Derivative of `I_m`: `I'_m = I_{m-1} - (m/x) I_m`, `I'_0 = I_1`. Works on
/// scaled sequences unchanged.
pub fn modified_derivative(seq: &[f64], x: f64, m: usize) -> f64 {
    if m == 0 {
        seq[1]
    } else {
        seq[m - 1] - seq[m] * (m as f64) / x
    }
}

fn check_finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("non-finite argument {z}")))
    }
}

/// Sequence of the requested kind up to order `nmax` (inclusive).
fn sequence(kind: BesselKind, nmax: usize, z: Complex64) -> Result<Vec<Complex64>> {
    check_finite(z)?;
    match kind {
        BesselKind::J => bessel_j_seq_complex(z, nmax),
        BesselKind::Y => bessel_jy_seq_complex(z, nmax).map(|(_, y)| y),
        BesselKind::H1 => {
            let (j, y) = bessel_jy_seq_complex(z, nmax)?;
            Ok(j.iter()
                .zip(&y)
                .map(|(a, b)| a + Complex64::i() * b)
                .collect())
        }
        BesselKind::I => {
            if z.im != 0.0 {
                return Err(Error::domain("I is implemented for real arguments only"));
            }
            let x = z.re;
            let growth = x.abs().exp();
            let seq = bessel_i_scaled_seq(x, nmax);
            let mut out = Vec::with_capacity(seq.len());
            for (m, v) in seq.into_iter().enumerate() {
                let val = v * growth;
                if !val.is_finite() {
                    return Err(Error::overflow(format!("I_{m}({x}) exceeds the representable range")));
                }
                out.push(Complex64::from(val));
            }
            Ok(out)
        }
    }
}

/// Cylinder function `kind` of order `m` at `z`.
///
/// `Y` and `H1` are singular at the origin and return a domain error there;
/// a result that is not representable is reported as an overflow.
pub fn bessel(kind: BesselKind, m: u32, z: Complex64) -> Result<Complex64> {
    let seq = sequence(kind, m as usize, z)?;
    Ok(seq[m as usize])
}

/// `d/dz` of [`bessel`], through the order recurrence.
pub fn bessel_deriv(kind: BesselKind, m: u32, z: Complex64) -> Result<Complex64> {
    let m = m as usize;
    let seq = sequence(kind, m.max(1), z)?;
    if kind == BesselKind::I {
        let re: Vec<f64> = seq.iter().map(|c| c.re).collect();
        return Ok(Complex64::from(modified_derivative(&re, z.re, m)));
    }
    if z.norm() == 0.0 {
        // only J reaches here: J'_0(0) = 0, J'_1(0) = 1/2.
        return Ok(Complex64::from(if m == 1 { 0.5 } else { 0.0 }));
    }
    Ok(cylinder_derivative(&seq, z, m))
}
