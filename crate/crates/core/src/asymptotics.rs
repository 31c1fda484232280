//! Closed-form approximations: hot-regime Rabi-type formulas, approximate
//! differential and total scattering lengths, the classical trajectory
//! average, cold-regime resonance profiles, and the eikonal amplitude with
//! its Gaussian-mode stationary points.
//!
//! Everything is expressed through `ratio = k / kappa_n` and the mode size
//! in units of `1/kappa_n`.

use std::f64::consts::{E, FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::model::{kappa_n_scale, ExitChannel, ModeShape, ScatterConfig};
use crate::quad;
use crate::special::{bessel_j_seq, lambert_w, LambertBranch};
use crate::{Error, Result};

/// Dimensionless parameters of the approximate formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HotRegimeParams {
    /// `k / kappa_n`.
    pub ratio: f64,
    /// `kappa_n R` (or `kappa_n sigma`).
    pub kappa_n_r: f64,
}

impl HotRegimeParams {
    pub fn new(ratio: f64, kappa_n_r: f64) -> Self {
        HotRegimeParams { ratio, kappa_n_r }
    }

    pub fn from_config(cfg: &ScatterConfig) -> Self {
        HotRegimeParams::new(cfg.k(), cfg.profile().size)
    }

    /// `kappa_n R / (k / kappa_n)`, the Rabi angle.
    fn rabi_angle(&self) -> f64 {
        self.kappa_n_r / self.ratio
    }
}

fn j0(x: f64) -> f64 {
    bessel_j_seq(x, 0)[0]
}

/// `4 |B^b|^2 ~ sin^2(kappa_n R / (k/kappa_n))`.
pub fn rabi_b(p: &HotRegimeParams) -> f64 {
    p.rabi_angle().sin().powi(2)
}

/// `4 |B^a|^2 ~ 4 sin^4(kappa_n R / (2 k/kappa_n))`.
pub fn rabi_a(p: &HotRegimeParams) -> f64 {
    4.0 * (0.5 * p.rabi_angle()).sin().powi(4)
}

/// Stationary-phase photon-emission differential length
/// `(r^2/4) [1 - sin(2 kR sqrt(r^4 t^2 + 1) / r)] / (r^4 t^2 + 1)^{3/2}`.
pub fn hot_differential_b(theta: f64, p: &HotRegimeParams) -> f64 {
    let r = p.ratio;
    let s = r.powi(4) * theta * theta + 1.0;
    r * r / 4.0 * (1.0 - (2.0 * p.kappa_n_r * s.sqrt() / r).sin()) / s.powf(1.5)
}

/// Approximate totals `(lambda_b, lambda_a)`:
/// `1/2 [1 - (pi/2) J0(2x)]` and `1/2 [3 - 2 pi J0(x) + (pi/2) J0(2x)]`
/// with `x = kappa_n R / (k/kappa_n)`.
pub fn hot_totals(p: &HotRegimeParams) -> (f64, f64) {
    let x = p.rabi_angle();
    let (a1, a2) = (j0(x), j0(2.0 * x));
    (0.5 * (1.0 - FRAC_PI_2 * a2), 0.5 * (3.0 - 2.0 * PI * a1 + FRAC_PI_2 * a2))
}

/// Rabi probability averaged over straight classical trajectories,
/// `1/2 [1 - J0(2 kappa_n R / (k/kappa_n))]`.
pub fn classical_average_rabi(p: &HotRegimeParams) -> f64 {
    0.5 * (1.0 - j0(2.0 * p.rabi_angle()))
}

/// Parity of the partial wave for the cold-regime profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(m: usize) -> Self {
        if m % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

fn cold_argument(p: &HotRegimeParams) -> f64 {
    p.kappa_n_r * (1.0 + p.ratio * p.ratio).sqrt()
}

/// Cold-regime analytic approximation to `4 |B^b_m|^2`, with
/// `X = kappa_n R sqrt(1 + r^2)`:
/// even `(1 - cos 2X) / (1 + r^{-2} sin^2(X - pi/4))`,
/// odd `(1 + cos 2X) / (1 + r^{-2} cos^2(X - pi/4))`.
pub fn cold_resonance_profile(parity: Parity, p: &HotRegimeParams) -> f64 {
    let x = cold_argument(p);
    let finesse = 1.0 / (p.ratio * p.ratio);
    match parity {
        Parity::Even => (1.0 - (2.0 * x).cos()) / (1.0 + finesse * (x - FRAC_PI_4).sin().powi(2)),
        Parity::Odd => (1.0 + (2.0 * x).cos()) / (1.0 + finesse * (x - FRAC_PI_4).cos().powi(2)),
    }
}

/// Peak positions of [`cold_resonance_profile`] in `kappa R` (not
/// `kappa_n R`) inside `[lo, hi]`: `X = pi/4 + j pi` (even) or
/// `3 pi/4 + j pi` (odd).
pub fn cold_peak_positions(parity: Parity, ratio: f64, n: u32, lo: f64, hi: f64) -> Vec<f64> {
    let stretch = (1.0 + ratio * ratio).sqrt() * kappa_n_scale(n);
    let offset = match parity {
        Parity::Even => FRAC_PI_4,
        Parity::Odd => 3.0 * FRAC_PI_4,
    };
    let mut out = Vec::new();
    let mut j = ((lo * stretch - offset) / PI).ceil().max(0.0) as i64;
    loop {
        let x = (offset + j as f64 * PI) / stretch;
        if x > hi {
            break;
        }
        if x >= lo {
            out.push(x);
        }
        j += 1;
    }
    out
}

/// `theta_c = sqrt(pi / 2e) (k/kappa_n)^{-2}`.
pub fn critical_angle(p: &HotRegimeParams) -> f64 {
    (PI / (2.0 * E)).sqrt() / (p.ratio * p.ratio)
}

/// Argument `-(2/pi) (k/kappa_n)^4 theta^2` of the Lambert function that
/// fixes the Gaussian-mode stationary points.
pub fn stationary_argument(theta: f64, p: &HotRegimeParams) -> f64 {
    -2.0 / PI * p.ratio.powi(4) * theta * theta
}

/// Real stationary impact parameters `sigma sqrt(-W(z))` on both branches
/// (in units of `1/kappa_n`), or `None` above the critical angle where
/// they leave the real axis.
pub fn gaussian_stationary_points(theta: f64, p: &HotRegimeParams) -> Option<(f64, f64)> {
    let z = stationary_argument(theta, p);
    if z < -1.0 / E {
        return None;
    }
    if z == 0.0 {
        return Some((0.0, f64::INFINITY));
    }
    let w0 = lambert_w(LambertBranch::Principal, z).ok()?;
    let w1 = lambert_w(LambertBranch::Lower, z).ok()?;
    Some((p.kappa_n_r * (-w0).sqrt(), p.kappa_n_r * (-w1).sqrt()))
}

/// Absolute accuracy of the impact-parameter quadrature.
pub const EIKONAL_TOL: f64 = 1e-8;

/// Eikonal amplitude of an exit channel in units of `kappa_n^{-1/2}`,
///
/// ```text
/// f^b = -i P int cos(k b theta) sin(2 Phi(b)) db
/// f^a =    P int cos(k b theta) (cos(2 Phi(b)) - 1) db,   P = sqrt(2k/pi) e^{-i pi/4}
/// ```
///
/// with `2 Phi = sqrt(R^2 - b^2) / k` (constant mode, `b < R`) or
/// `(sigma / k) sqrt(pi/2) exp(-b^2 / 2 sigma^2)` (Gaussian, `b < r_cut`).
/// `p.kappa_n_r` is the mode size in `1/kappa_n`.
pub fn eikonal_amplitude(shape: ModeShape, exit: ExitChannel, theta: f64, p: &HotRegimeParams, series_tail: f64) -> Result<Complex64> {
    let k = p.ratio;
    let size = p.kappa_n_r;
    if size == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let kernel = move |phi2: f64| -> f64 {
        match exit {
            ExitChannel::PhotonEmission => phi2.sin(),
            ExitChannel::NoDeexcitation => phi2.cos() - 1.0,
        }
    };
    let integral = match shape {
        ModeShape::Constant => {
            // b = R sin t removes the square-root endpoint.
            let rate = k * size * theta.abs() + size / k;
            let panel = FRAC_PI_2 / rate;
            quad::integrate(
                |t| {
                    let (s, c) = t.sin_cos();
                    Complex64::from((k * size * s * theta).cos() * kernel(size * c / k) * size * c)
                },
                0.0,
                FRAC_PI_2,
                panel.min(FRAC_PI_2),
                EIKONAL_TOL,
            )
        }
        ModeShape::Gaussian => {
            let r_cut = size * (-2.0 * series_tail.ln()).sqrt();
            let depth = size / k * FRAC_PI_2.sqrt();
            let rate = k * theta.abs() + depth / size + 1.0 / size;
            let panel = FRAC_PI_2 / rate;
            quad::integrate(
                |b| {
                    let phi2 = depth * (-b * b / (2.0 * size * size)).exp();
                    Complex64::from((k * b * theta).cos() * kernel(phi2))
                },
                0.0,
                r_cut,
                panel.min(r_cut),
                EIKONAL_TOL,
            )
        }
    }
    .map_err(|e| match e {
        Error::Convergence { achieved, .. } => Error::convergence("eikonal impact-parameter integral", achieved),
        other => other,
    })?
    .value;
    let pref = Complex64::from_polar((2.0 * k / PI).sqrt(), -FRAC_PI_4);
    Ok(match exit {
        ExitChannel::PhotonEmission => pref * Complex64::new(0.0, -1.0) * integral,
        ExitChannel::NoDeexcitation => pref * integral,
    })
}

/// Eikonal differential length `|f|^2 / (2 size)`.
pub fn eikonal_differential(shape: ModeShape, exit: ExitChannel, theta: f64, p: &HotRegimeParams, series_tail: f64) -> Result<f64> {
    if p.kappa_n_r == 0.0 {
        return Ok(0.0);
    }
    Ok(eikonal_amplitude(shape, exit, theta, p, series_tail)?.norm_sqr() / (2.0 * p.kappa_n_r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::{amplitude, build_table};
    use crate::special::bessel_j_seq;
    use proptest::prelude::*;

    const J0_ZERO: f64 = 2.404_825_557_695_773;

    fn hot() -> HotRegimeParams {
        HotRegimeParams::new(10.0, 100.0)
    }

    #[test]
    fn rabi_values() {
        assert!(rabi_b(&HotRegimeParams::new(1.0, PI)).abs() < 1e-30);
        assert!((rabi_b(&HotRegimeParams::new(1.0, FRAC_PI_2)) - 1.0).abs() < 1e-15);
        assert!((rabi_b(&hot()) - 10f64.sin().powi(2)).abs() < 1e-15);
        assert!((rabi_b(&hot()) - 0.29595).abs() < 1e-5);
        assert_eq!(rabi_a(&HotRegimeParams::new(1.0, 0.0)), 0.0);
        assert!((rabi_a(&HotRegimeParams::new(1.0, PI)) - 4.0).abs() < 1e-14);
        assert!((rabi_a(&hot()) - 4.0 * 5f64.sin().powi(4)).abs() < 1e-14);
        assert!((rabi_a(&hot()) - 3.38).abs() < 5e-3);
    }

    #[test]
    fn differential_forward_value() {
        // 25 (1 - sin 20) with sin(20 rad) = 0.912945...
        let v = hot_differential_b(0.0, &hot());
        assert!((v - 25.0 * (1.0 - 20f64.sin())).abs() < 1e-12);
        assert!((v - 2.1764).abs() < 1e-4);
    }

    #[test]
    fn differential_envelope_and_symmetry() {
        let p = hot();
        for t in [1e-3, 0.02, 0.5, 3.0] {
            assert_eq!(hot_differential_b(t, &p), hot_differential_b(-t, &p));
            let s = p.ratio.powi(4) * t * t + 1.0;
            assert!(hot_differential_b(t, &p) <= p.ratio.powi(2) / 2.0 / s.powf(1.5) + 1e-15);
        }
    }

    #[test]
    fn totals_closed_forms() {
        let p = hot();
        let (b, a) = hot_totals(&p);
        let j = bessel_j_seq(20.0, 0)[0];
        assert!((j - 0.167_024_664_340_583).abs() < 1e-14);
        assert!((b - 0.5 * (1.0 - FRAC_PI_2 * j)).abs() < 1e-15);
        assert!((b - 0.3688).abs() < 1e-4);
        assert!(a > 0.0);
        let at_zero = HotRegimeParams::new(1.0, J0_ZERO / 2.0);
        assert!((hot_totals(&at_zero).0 - 0.5).abs() < 1e-14);
        assert!((classical_average_rabi(&at_zero) - 0.5).abs() < 1e-14);
        assert_eq!(classical_average_rabi(&HotRegimeParams::new(3.0, 0.0)), 0.0);
    }

    #[test]
    fn totals_oscillation_decays() {
        // amplitude of the J0 term shrinks like (kappa_n R)^{-1/2}
        let env = |kr: f64| {
            (0..400)
                .map(|i| {
                    let p = HotRegimeParams::new(1.0, kr + i as f64 * 0.01);
                    (hot_totals(&p).0 - 0.5).abs()
                })
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (env(100.0), env(400.0));
        assert!((e1 / e2 - 2.0).abs() < 0.1, "{e1} {e2}");
    }

    proptest! {
        #[test]
        fn classical_and_exact_differ_by_bessel_term(r in 0.5f64..20.0, kr in 0.0f64..200.0) {
            let p = HotRegimeParams::new(r, kr);
            let j = bessel_j_seq(2.0 * kr / r, 0)[0];
            let diff = classical_average_rabi(&p) - hot_totals(&p).0;
            prop_assert!((diff - (FRAC_PI_2 - 1.0) / 2.0 * j).abs() < 1e-14);
        }

        #[test]
        fn critical_angle_is_branch_point(r in 0.3f64..30.0) {
            let p = HotRegimeParams::new(r, 5.0);
            let tc = critical_angle(&p);
            let z = stationary_argument(tc, &p);
            prop_assert!((z + 1.0 / E).abs() <= 1e-15);
            prop_assert!(gaussian_stationary_points(tc * 0.999, &p).is_some());
            prop_assert!(gaussian_stationary_points(tc * 1.001, &p).is_none());
        }
    }

    #[test]
    fn critical_angle_values() {
        assert!((critical_angle(&hot()) - 7.602e-3).abs() < 1e-6);
        assert!((critical_angle(&HotRegimeParams::new(1.0, 3.0)) - 0.7602).abs() < 1e-4);
        assert_eq!(critical_angle(&HotRegimeParams::new(2.0, 3.0)), critical_angle(&HotRegimeParams::new(2.0, 90.0)));
    }

    #[test]
    fn stationary_points_solve_phase_condition() {
        // b exp(-b^2 / 2 sigma^2) / sigma^2 * sigma sqrt(pi/2) / k = k theta,
        // i.e. the Gaussian phase gradient equals the Fourier frequency.
        let p = HotRegimeParams::new(4.0, 6.0);
        let theta = 0.5 * critical_angle(&p);
        let (b0, b1) = gaussian_stationary_points(theta, &p).unwrap();
        assert!(b0 < b1);
        for b in [b0, b1] {
            let sigma = p.kappa_n_r;
            let grad = (sigma / p.ratio) * FRAC_PI_2.sqrt() * b / (sigma * sigma) * (-b * b / (2.0 * sigma * sigma)).exp();
            assert!((grad - p.ratio * theta).abs() < 1e-12 * grad.max(1.0), "{grad} vs {}", p.ratio * theta);
        }
    }

    #[test]
    fn cold_profile_peaks() {
        for j in 0..5 {
            let x = FRAC_PI_4 + j as f64 * PI;
            let r = 0.1;
            let p = HotRegimeParams::new(r, x / (1.0 + r * r).sqrt());
            assert!((cold_resonance_profile(Parity::Even, &p) - 1.0).abs() < 1e-12);
            let x = 3.0 * FRAC_PI_4 + j as f64 * PI;
            let p = HotRegimeParams::new(r, x / (1.0 + r * r).sqrt());
            assert!((cold_resonance_profile(Parity::Odd, &p) - 1.0).abs() < 1e-12);
        }
        // Off resonance the finesse 100 suppresses the even profile.
        let r = 0.1;
        let x = FRAC_PI_4 + 0.5 * PI;
        let p = HotRegimeParams::new(r, x / (1.0 + r * r).sqrt());
        assert!(cold_resonance_profile(Parity::Even, &p) < 2.0 / 100.0);
        let peaks = cold_peak_positions(Parity::Even, 0.1, 0, 0.0, 20.0);
        for w in peaks.windows(2) {
            assert!((w[1] - w[0] - PI / 1.01f64.sqrt()).abs() < 1e-12);
        }
        assert!((PI / 1.01f64.sqrt() - 3.125).abs() < 2e-3);
    }

    #[test]
    fn cold_peaks_track_exact_coefficients_deep_in_the_well() {
        // kappa_n R >> kappa r_m: compare analytic peak positions with the
        // maxima of the exact |B^b_m|^2.
        let ratio = 0.1;
        for m in 0..=3usize {
            let peaks = cold_peak_positions(Parity::of(m), ratio, 0, 100.0, 106.0);
            assert!(!peaks.is_empty());
            for x0 in peaks {
                let mut best = (x0, 0.0);
                let steps = 400;
                for i in 0..=steps {
                    let x = x0 - 0.2 + 0.4 * i as f64 / steps as f64;
                    let c = ScatterConfig::constant(x, 0, ratio);
                    let dp = crate::constant_mode::phase_shift(m, crate::model::ChannelSign::Plus, &c).unwrap();
                    let dm = crate::constant_mode::phase_shift(m, crate::model::ChannelSign::Minus, &c).unwrap();
                    let v = (dp - dm).sin().powi(2);
                    if v > best.1 {
                        best = (x, v);
                    }
                }
                assert!((best.0 - x0).abs() <= 0.05, "m {m}: analytic {x0} exact {}", best.0);
            }
        }
    }

    #[test]
    fn eikonal_vanishes_without_mode() {
        let p = HotRegimeParams::new(10.0, 0.0);
        for shape in [ModeShape::Constant, ModeShape::Gaussian] {
            let f = eikonal_amplitude(shape, ExitChannel::PhotonEmission, 0.01, &p, 1e-12).unwrap();
            assert_eq!(f.norm(), 0.0);
        }
    }

    #[test]
    fn eikonal_tracks_partial_waves_in_hot_regime() {
        let cfg = ScatterConfig::constant(60.0, 0, 10.0);
        let table = build_table(&cfg).unwrap();
        let p = HotRegimeParams::from_config(&cfg);
        for theta in [0.0, 0.002, 0.005, 0.01] {
            for exit in [ExitChannel::PhotonEmission, ExitChannel::NoDeexcitation] {
                let exact = amplitude(&table, exit, theta).norm_sqr();
                let eik = eikonal_amplitude(ModeShape::Constant, exit, theta, &p, 1e-12).unwrap().norm_sqr();
                let scale = amplitude(&table, exit, 0.0).norm_sqr();
                assert!((exact - eik).abs() < 0.03 * scale, "theta {theta} {exit:?}: {exact} vs {eik}");
            }
        }
    }

    #[test]
    fn eikonal_matches_rabi_for_tiny_mode() {
        // Weak, narrow mode: sin(2 Phi) ~ 2 Phi, so the forward amplitude is
        // sqrt(2k/pi) int sqrt(R^2 - b^2)/k db = sqrt(2k/pi) pi R^2 / (4k).
        let p = HotRegimeParams::new(50.0, 0.5);
        let f = eikonal_amplitude(ModeShape::Constant, ExitChannel::PhotonEmission, 0.0, &p, 1e-12).unwrap();
        let lin = (2.0 * p.ratio / PI).sqrt() * PI * 0.25 / (4.0 * p.ratio);
        assert!((f.norm() - lin).abs() < 1e-3 * lin);
    }

    #[test]
    fn gaussian_eikonal_drops_beyond_critical_angle() {
        let p = HotRegimeParams::new(10.0, 30.0);
        let tc = critical_angle(&p);
        let inside = eikonal_differential(ModeShape::Gaussian, ExitChannel::PhotonEmission, tc / 2.0, &p, 1e-12).unwrap();
        let outside = eikonal_differential(ModeShape::Gaussian, ExitChannel::PhotonEmission, 2.0 * tc, &p, 1e-12).unwrap();
        assert!(inside > 10.0 * outside, "{inside} {outside}");
    }
}
