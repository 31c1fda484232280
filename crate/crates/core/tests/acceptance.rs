//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::{E, PI};
use std::time::Instant;

use cavscat::asymptotics::{hot_differential_b, hot_totals, HotRegimeParams};
use cavscat::constant_mode::{matching_coefficients, phase_shift};
use cavscat::radial::{radial_phase_shift, solve_radial};
use cavscat::resonances::{find_resonances, scan_peaks};
use cavscat::scattering::{angular_distribution, build_table, differential, theta_grid, totals};
use cavscat::special::{bessel, bessel_deriv, lambert_w, BesselKind, LambertBranch};
use cavscat::{ChannelSign, Complex64, ExitChannel, ScatterConfig};
use rayon::prelude::*;

type Check = (bool, String);

fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..n).map(|i| start + i as f64 * step).collect()
}

fn lambda_b(cfg: &ScatterConfig) -> f64 {
    totals(&build_table(cfg).unwrap()).lambda_b_total
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Wraps a phase difference into `(-pi/2, pi/2]`; phase shifts are only
/// defined modulo `pi`.
fn wrap(d: f64) -> f64 {
    d - PI * (d / PI).round()
}

fn resonance_positions() -> Check {
    let t = Instant::now();
    let cfg = ScatterConfig::constant(1.0, 0, 0.1);
    let mut worst: f64 = 0.0;
    let mut found = Vec::new();
    for (m, x) in [(0usize, 0.72890), (1, 2.35741), (2, 3.79243), (3, 5.09697)] {
        let recs = find_resonances(m, (0.0, 6.0), &cfg).unwrap();
        let best = recs.iter().map(|r| r.kappa_r0).min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()));
        let d = best.map_or(f64::INFINITY, |b| (b - x).abs());
        worst = worst.max(d);
        found.push(format!("m={m}:{:.5}", best.unwrap_or(f64::NAN)));
    }
    let secs = t.elapsed().as_secs_f64();
    (worst <= 1e-3 && secs < 60.0, format!("{} max|dx|={worst:.2e} (tol 1e-3), {secs:.1}s (budget 60s)", found.join(" ")))
}

fn quasibound_match() -> Check {
    let cfg = ScatterConfig::constant(11.5287, 0, 0.1);
    let recs = find_resonances(3, (10.0, 13.0), &cfg).unwrap();
    let root = recs.iter().map(|r| r.kappa_r0).find(|x| (x - 11.5287).abs() <= 1e-3);
    let sol = solve_radial(3, ChannelSign::Minus, &cfg).unwrap();
    let r = cfg.profile().size;
    let frac = sol.weight_between(0.0, r) / sol.weight_between(0.0, 2.0 * r);
    (
        root.is_some() && frac > 0.9,
        format!("root {:?} (tol 1e-3), weight inside R / weight in [0,2R] = {frac:.4} (> 0.9)", root),
    )
}

fn hot_totals_check() -> Check {
    let base = ScatterConfig::constant(50.0, 0, 10.0);
    let devs: Vec<(f64, f64)> = grid(50.0, 120.0, 0.1)
        .into_par_iter()
        .map(|x| {
            let c = base.with_size(x);
            let s = totals(&build_table(&c).unwrap());
            let (b, a) = hot_totals(&HotRegimeParams::from_config(&c));
            ((s.lambda_b_total - b).abs(), (s.lambda_a_total - a).abs())
        })
        .collect();
    let db = devs.iter().map(|d| d.0).fold(0.0, f64::max);
    let da = devs.iter().map(|d| d.1).fold(0.0, f64::max);
    (db <= 0.02 && da <= 0.02, format!("max|dlambda_b|={db:.4}, max|dlambda_a|={da:.4} (tol 0.02)"))
}

fn hot_differential_check() -> Check {
    let cfg = ScatterConfig::constant(100.0, 0, 10.0);
    let table = build_table(&cfg).unwrap();
    let mut thetas = theta_grid(2048);
    thetas.extend(grid(-0.1, 0.1, 1e-4));
    let exact = differential(&table, ExitChannel::PhotonEmission, &thetas);
    let p = HotRegimeParams::from_config(&cfg);
    let top = exact.iter().cloned().fold(0.0, f64::max);
    let mut worst = (0.0, 0.0);
    for (&t, &e) in thetas.iter().zip(&exact) {
        if e > 0.01 * top {
            let rel = (hot_differential_b(t, &p) - e).abs() / e;
            if rel > worst.0 {
                worst = (rel, t);
            }
        }
    }
    (worst.0 <= 0.05, format!("max relative deviation {:.3} at theta={:.4} (tol 0.05)", worst.0, worst.1))
}

fn unitarity() -> Check {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for ratio in [0.05, 0.1, 1.0, 10.0] {
        for kr in [0.1, 0.5, 1.0, 2.35741, 5.09697, 11.5287, 20.0, 50.0, 120.0] {
            let cfg = ScatterConfig::constant(kr, 0, ratio);
            for ch in ChannelSign::BOTH {
                for m in 0..=50usize {
                    let (_, b) = matching_coefficients(m, ch, &cfg).unwrap();
                    let s = Complex64::new(1.0, 0.0) + Complex64::new(0.0, -1.0).powu(m as u32) * b * 2.0;
                    worst = worst.max((s.norm() - 1.0).abs());
                    cases += 1;
                }
            }
        }
    }
    (worst <= 1e-10, format!("max||S|-1|={worst:.2e} over {cases} waves (tol 1e-10)"))
}

fn configs() -> Vec<ScatterConfig> {
    let mut v = Vec::new();
    for (kr, ratio) in [(0.72890, 0.1), (2.35741, 0.1), (11.5287, 0.1), (7.0, 1.0), (50.0, 10.0), (100.0, 10.0), (3.0, 0.05)] {
        v.push(ScatterConfig::constant(kr, 0, ratio));
    }
    v.push(ScatterConfig::constant(4.0, 3, 0.3));
    for (ks, ratio) in [(2.0, 0.1), (6.5, 0.1), (5.0, 2.0)] {
        v.push(ScatterConfig::gaussian(ks, 0, ratio));
    }
    v
}

fn describe(c: &ScatterConfig) -> String {
    format!("{}({}, n={}, k/kn={})", c.mode.shape.name(), c.mode.size, c.n, c.k_over_kappa_n)
}

fn channel_sum() -> Check {
    let mut worst = (0.0, String::new());
    for c in configs() {
        let s = totals(&build_table(&c).unwrap());
        let lhs = s.lambda_a_total + s.lambda_b_total;
        let rhs = 0.5 * (s.lambda_plus_total + s.lambda_minus_total);
        let rel = (lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE);
        if rel > worst.0 {
            worst = (rel, describe(&c));
        }
    }
    (worst.0 <= 1e-10, format!("max relative mismatch {:.2e} ({}) (tol 1e-10)", worst.0, worst.1))
}

fn quadrature_vs_sum() -> Check {
    let mut worst = (0.0, String::new());
    for c in configs() {
        let table = build_table(&c).unwrap();
        let s = totals(&table);
        let (qa, qb) = angular_distribution(&table, &theta_grid(2048)).integrals();
        for (q, t) in [(qa, s.lambda_a_total), (qb, s.lambda_b_total)] {
            let rel = (q - t).abs() / t.abs();
            if rel > worst.0 {
                worst = (rel, describe(&c));
            }
        }
    }
    (worst.0 <= 1e-6, format!("max relative mismatch {:.2e} ({}) at 2048 points (tol 1e-6)", worst.0, worst.1))
}

fn oracle_equivalence() -> Check {
    let mut cases = Vec::new();
    for ratio in [0.1, 10.0] {
        for kr in [0.5, 3.7, 11.0, 20.0] {
            for m in 0..=10usize {
                for ch in ChannelSign::BOTH {
                    cases.push((ratio, kr, m, ch));
                }
            }
        }
    }
    let worst = cases
        .par_iter()
        .map(|&(ratio, kr, m, ch)| {
            let c = ScatterConfig::constant(kr, 0, ratio);
            let d = wrap(radial_phase_shift(m, ch, &c).unwrap() - phase_shift(m, ch, &c).unwrap()).abs();
            (d, format!("k/kn={ratio} kR={kr} m={m} {}", ch.name()))
        })
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap();
    (worst.0 <= 1e-6, format!("max|d delta|={:.2e} rad at {} over {} cases (tol 1e-6)", worst.0, worst.1, cases.len()))
}

fn cold_patterns() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for (m, kr) in [(1usize, 2.35741), (2, 3.79243), (3, 5.09697)] {
        let cfg = ScatterConfig::constant(kr, 0, 0.1);
        let thetas = theta_grid(2048);
        let y = angular_distribution(&build_table(&cfg).unwrap(), &thetas).lambda_b;
        let basis: Vec<f64> = thetas.iter().map(|t| (m as f64 * t).cos().powi(2)).collect();
        let c = y.iter().zip(&basis).map(|(y, b)| y * b).sum::<f64>() / basis.iter().map(|b| b * b).sum::<f64>();
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        let ss_res: f64 = y.iter().zip(&basis).map(|(y, b)| (y - c * b).powi(2)).sum();
        let ss_tot: f64 = y.iter().map(|y| (y - mean).powi(2)).sum();
        let r2 = 1.0 - ss_res / ss_tot;
        ok &= r2 >= 0.99;
        parts.push(format!("m={m}: R^2={r2:.4}"));
    }
    (ok, format!("{} (min 0.99)", parts.join(", ")))
}

fn gaussian_mode() -> Check {
    let g = ScatterConfig::gaussian(1.0, 0, 0.1);
    let gx = grid(0.01, 15.0, 0.01);
    let gy: Vec<f64> = gx.par_iter().map(|&x| lambda_b(&g.with_size(x))).collect();
    let c = ScatterConfig::constant(1.0, 0, 0.1);
    let cx = grid(0.0, 15.0, 0.005);
    let cy: Vec<f64> = cx.par_iter().map(|&x| lambda_b(&c.with_size(x))).collect();
    let gp = scan_peaks(&gx, &gy);
    let cp = scan_peaks(&cx, &cy);
    let gw = median(gp.iter().map(|p| p.fwhm).collect());
    let cw = median(cp.iter().map(|p| p.fwhm).collect());
    (
        gp.len() >= 5 && gw > cw,
        format!("{} gaussian maxima (min 5), median FWHM {gw:.4} vs constant {cw:.4} ({} peaks)", gp.len(), cp.len()),
    )
}

fn special_functions() -> Check {
    let xs: Vec<f64> = (0..=400).map(|i| 0.1 * (2000.0f64).powf(i as f64 / 400.0)).collect();
    let mut wr: f64 = 0.0;
    let mut rec: f64 = 0.0;
    for &x in &xs {
        let z = Complex64::from(x);
        for m in 0..=50u32 {
            let j = bessel(BesselKind::J, m, z).unwrap().re;
            let y = bessel(BesselKind::Y, m, z).unwrap().re;
            let jp = bessel_deriv(BesselKind::J, m, z).unwrap().re;
            let yp = bessel_deriv(BesselKind::Y, m, z).unwrap().re;
            let expected = 2.0 / (PI * x);
            wr = wr.max(((j * yp - jp * y) - expected).abs() / expected);
            if m >= 1 {
                for kind in [BesselKind::J, BesselKind::Y] {
                    let lo = bessel(kind, m - 1, z).unwrap().re;
                    let mid = bessel(kind, m, z).unwrap().re;
                    let hi = bessel(kind, m + 1, z).unwrap().re;
                    let rhs = 2.0 * m as f64 / x * mid;
                    if rhs.abs() > 1e-3 * lo.abs().max(hi.abs()) {
                        rec = rec.max(((lo + hi) - rhs).abs() / rhs.abs());
                    }
                }
            }
        }
    }
    let mut lw: f64 = 0.0;
    let inv_e = 1.0 / E;
    for i in 0..=300 {
        let t = i as f64 / 300.0;
        let samples = [
            (LambertBranch::Principal, -inv_e * (1.0 - 10f64.powf(-12.0 * t))),
            (LambertBranch::Principal, 10f64.powf(-10.0 + 20.0 * t)),
            (LambertBranch::Lower, -inv_e * 10f64.powf(-300.0 * t)),
        ];
        for (b, x) in samples {
            let w = lambert_w(b, x).unwrap();
            lw = lw.max((w * w.exp() - x).abs() / x.abs().max(1.0));
        }
    }
    (
        wr <= 1e-10 && rec <= 1e-10 && lw <= 1e-13,
        format!("Wronskian {wr:.2e} (tol 1e-10), recurrence {rec:.2e} (tol 1e-10), Lambert W {lw:.2e} (tol 1e-13)"),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 11] = [
        ("resonance positions", resonance_positions),
        ("quasibound match", quasibound_match),
        ("hot-regime totals", hot_totals_check),
        ("hot-regime differential", hot_differential_check),
        ("unitarity", unitarity),
        ("channel-sum identity", channel_sum),
        ("quadrature vs sum", quadrature_vs_sum),
        ("Numerov vs closed form", oracle_equivalence),
        ("cold angular patterns", cold_patterns),
        ("gaussian mode", gaussian_mode),
        ("special functions", special_functions),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = check();
        if !pass {
            failed += 1;
        }
        println!("criterion {:>2} {:<26} {}  {detail}", i + 1, name, if pass { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
