//! Real branches of the Lambert W function, the inverse of `w exp(w)`.

use std::f64::consts::E;

use crate::{Error, Result};

/// Real branch selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambertBranch {
    /// Principal branch, `W >= -1`, defined for `x >= -1/e`.
    Principal,
    /// Lower branch, `W <= -1`, defined for `-1/e <= x < 0`.
    Lower,
}

const INV_E: f64 = 1.0 / E;

/// Series about the branch point in `p = sqrt(2 (e x + 1))`; `sign` picks the
/// branch (`+1` principal, `-1` lower).
fn branch_point_series(x: f64, sign: f64) -> f64 {
    let p = sign * (2.0 * (E * x + 1.0)).max(0.0).sqrt();
    -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p - 43.0 / 540.0 * p.powi(4)
}

fn initial_guess(branch: LambertBranch, x: f64) -> f64 {
    match branch {
        LambertBranch::Principal => {
            if x < -0.25 {
                branch_point_series(x, 1.0)
            } else if x < 3.0 {
                // Pade-like start, good to a few percent on [-0.25, 3].
                x * (1.0 + 4.0 / 3.0 * x) / (1.0 + 7.0 / 3.0 * x + 5.0 / 6.0 * x * x)
            } else {
                let l1 = x.ln();
                let l2 = l1.ln();
                l1 - l2 + l2 / l1
            }
        }
        LambertBranch::Lower => {
            if x < -0.25 {
                branch_point_series(x, -1.0)
            } else {
                let l1 = (-x).ln();
                let l2 = (-l1).ln();
                l1 - l2 + l2 / l1
            }
        }
    }
}

/// Lambert W on the requested real branch.
///
/// The result satisfies `|w exp(w) - x| <= 1e-13 max(1, |x|)`.
pub fn lambert_w(branch: LambertBranch, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("Lambert W of non-finite {x}")));
    }
    // Tolerate the rounding of -1/e itself.
    if x < -INV_E - 4.0 * f64::EPSILON {
        return Err(Error::domain(format!("Lambert W undefined below -1/e, got {x}")));
    }
    if branch == LambertBranch::Lower && x >= 0.0 {
        return Err(Error::domain(format!("lower branch requires -1/e <= x < 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x <= -INV_E {
        return Ok(-1.0);
    }
    // Very close to the branch point Halley's denominator vanishes; the
    // series is already exact to rounding there.
    if E * x + 1.0 < 1e-8 {
        let sign = if branch == LambertBranch::Principal { 1.0 } else { -1.0 };
        return Ok(branch_point_series(x, sign));
    }

    let mut w = initial_guess(branch, x);
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        let next = w - step;
        if step.abs() <= 1e-15 * (1.0 + next.abs()) {
            return Ok(next);
        }
        w = next;
    }
    let resid = (w * w.exp() - x).abs();
    if resid <= 1e-13 * x.abs().max(1.0) {
        Ok(w)
    } else {
        Err(Error::convergence("Lambert W Halley iteration", resid))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain Newton iteration on `w e^w = x`, started from a bracket midpoint.
    fn newton_oracle(x: f64, start: f64) -> f64 {
        let mut w = start;
        for _ in 0..200 {
            w -= (w * w.exp() - x) / ((w + 1.0) * w.exp());
        }
        w
    }

    #[test]
    fn trivial_points() {
        assert_eq!(lambert_w(LambertBranch::Principal, 0.0).unwrap(), 0.0);
        assert_eq!(lambert_w(LambertBranch::Principal, -INV_E).unwrap(), -1.0);
        assert_eq!(lambert_w(LambertBranch::Lower, -INV_E).unwrap(), -1.0);
    }

    #[test]
    fn principal_minus_tenth_matches_newton() {
        let o = newton_oracle(-0.1, 0.0);
        assert!((o + 0.111_832_5).abs() < 1e-7);
        let w = lambert_w(LambertBranch::Principal, -0.1).unwrap();
        assert!((w - o).abs() < 1e-15);
    }

    #[test]
    fn reference_values() {
        let refs = [
            (LambertBranch::Principal, -0.1, -0.111_832_559_158_962_97),
            (LambertBranch::Principal, 1.0, 0.567_143_290_409_783_9),
            (LambertBranch::Principal, 10.0, 1.745_528_002_740_699_4),
            (LambertBranch::Principal, -0.3678, -0.979_360_714_957_830_5),
            (LambertBranch::Principal, 1e5, 9.284_571_428_622_109),
            (LambertBranch::Lower, -0.1, -3.577_152_063_957_297),
            (LambertBranch::Lower, -0.3678, -1.020_927_239_409_425_5),
            (LambertBranch::Lower, -1e-5, -14.163_600_815_810_183),
            (LambertBranch::Lower, -0.01, -6.472_775_124_394_005),
        ];
        for (b, x, w) in refs {
            let v = lambert_w(b, x).unwrap();
            assert!((v - w).abs() <= 1e-13 * w.abs().max(1.0), "{b:?} {x}: {v} vs {w}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(lambert_w(LambertBranch::Principal, -0.5).is_err());
        assert!(lambert_w(LambertBranch::Lower, 0.0).is_err());
        assert!(lambert_w(LambertBranch::Lower, 0.3).is_err());
        assert!(lambert_w(LambertBranch::Lower, -0.4).is_err());
    }

    #[test]
    fn round_trip_log_spaced() {
        let check = |b: LambertBranch, x: f64| {
            let w = lambert_w(b, x).unwrap();
            let err = (w * w.exp() - x).abs();
            assert!(err <= 1e-13 * x.abs().max(1.0), "{b:?} x={x}: residual {err}");
        };
        for i in 0..=400 {
            let t = i as f64 / 400.0;
            // principal: x from -1/e up through 1e6, lower: -1/e .. -1e-300
            check(LambertBranch::Principal, 10f64.powf(-12.0 + 18.0 * t));
            check(LambertBranch::Principal, -10f64.powf(-12.0 + 12.0 * t).min(INV_E));
            check(LambertBranch::Lower, -INV_E * 10f64.powf(-300.0 * t));
            check(LambertBranch::Lower, -INV_E + 10f64.powf(-15.0 + 14.0 * t));
        }
    }
}
