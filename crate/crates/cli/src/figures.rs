//! Preconfigured datasets for the published figures.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use cavscat::asymptotics::{hot_differential_b, hot_totals, HotRegimeParams};
use cavscat::format::{csv_row, sci};
use cavscat::model::{critical_radius, effective_potential, kappa_n_scale};
use cavscat::radial::solve_radial;
use cavscat::resonances::label_total_length_peaks;
use cavscat::scattering::{build_table, theta_grid, totals};
use cavscat::{ChannelSign, ScatterConfig};
use rayon::prelude::*;

use crate::commands::{self, Quantity, Range};
use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;

pub const FIGURES: [u32; 6] = [2, 3, 4, 5, 6, 7];

/// Interaction lengths of the four resonances whose angular patterns are
/// shown for the cold constant mode.
pub const COLD_PATTERNS: [(usize, f64); 4] = [(0, 0.72890), (1, 2.35741), (2, 3.79243), (3, 5.09697)];

/// Quasibound-state parameters: `m = 3` at `kappa R = 11.5287`.
pub const QUASIBOUND: (usize, f64) = (3, 11.5287);

/// Largest `m` searched when labelling the cold resonance comb.
pub const LABEL_M_MAX: usize = 20;

/// Configuration a figure is computed from (the one echoed in its manifest).
pub fn figure_config(id: u32) -> CliResult<ScatterConfig> {
    Ok(match id {
        2 | 4 => ScatterConfig::constant(120.0, 0, 10.0),
        3 => ScatterConfig::constant(100.0, 0, 10.0),
        5 => ScatterConfig::constant(QUASIBOUND.1, 0, 0.1),
        6 => ScatterConfig::constant(15.0, 0, 0.1),
        7 => ScatterConfig::gaussian(15.0, 0, 0.1),
        _ => return Err(CliError::Config(format!("unknown figure {id}; choose one of {FIGURES:?}"))),
    })
}

struct Writer {
    dir: PathBuf,
    written: Vec<String>,
}

impl Writer {
    fn put(&mut self, name: &str, body: &str) -> CliResult<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
        self.written.push(name.to_string());
        Ok(())
    }
}

/// Writes every dataset of figure `id` into `outdir` plus `manifest.txt`;
/// returns the dataset file names.
pub fn run_figure(id: u32, outdir: &Path) -> CliResult<Vec<String>> {
    let cfg = figure_config(id)?;
    std::fs::create_dir_all(outdir).map_err(|e| CliError::io(outdir, e))?;
    let mut w = Writer {
        dir: outdir.to_path_buf(),
        written: Vec::new(),
    };
    match id {
        2 => figure2(&cfg, &mut w)?,
        3 => figure3(&cfg, &mut w)?,
        4 => figure4(&cfg, &mut w)?,
        5 => figure5(&cfg, &mut w)?,
        6 => figure6(&cfg, &mut w)?,
        _ => figure7(&cfg, &mut w)?,
    }
    RunManifest::new(format!("figure {id}"), &cfg, w.written.clone()).write(&outdir.join("manifest.txt"))?;
    Ok(w.written)
}

fn hot_range() -> Range {
    Range {
        start: 0.0,
        stop: 120.0,
        step: 0.1,
    }
}

/// `|B_m|^2` for `m = 0, 200` in both exit channels, and the classically
/// forbidden region of `m = 200`.
fn figure2(cfg: &ScatterConfig, w: &mut Writer) -> CliResult<()> {
    let qs = [Quantity::CoeffA(0), Quantity::CoeffB(0), Quantity::CoeffA(200), Quantity::CoeffB(200)];
    let rows: Vec<(f64, Vec<f64>)> = hot_range()
        .points()
        .into_par_iter()
        .map(|x| {
            let c = cfg.with_size(x);
            Ok((x, qs.iter().map(|q| q.evaluate(&c)).collect::<CliResult<Vec<_>>>()?))
        })
        .collect::<CliResult<_>>()?;
    let mut body = String::from("x,abs2_B_a_m0,abs2_B_b_m0,abs2_B_a_m200,abs2_B_b_m200\n");
    for (x, v) in rows {
        writeln!(body, "{}", csv_row(std::iter::once(sci(x)).chain(v.into_iter().map(sci)))).unwrap();
    }
    w.put("fig2_coefficients.csv", &body)?;
    let edge = critical_radius(200, cfg.k()) / kappa_n_scale(cfg.n);
    w.put("fig2_forbidden.csv", &format!("m,kappa_r_m\n200,{}\n", sci(edge)))
}

/// Exact hot-regime pattern and its stationary-phase overlay.
fn figure3(cfg: &ScatterConfig, w: &mut Writer) -> CliResult<()> {
    w.put("fig3_differential.csv", &commands::differential_csv(cfg)?)?;
    let p = HotRegimeParams::from_config(cfg);
    let rows: Vec<(f64, f64)> = theta_grid(cfg.theta_points).into_iter().map(|t| (t, hot_differential_b(t, &p))).collect();
    w.put("fig3_overlay.csv", &commands::xy_csv("theta_rad,lambda_b_approx", &rows))
}

/// Exact totals and the two closed-form overlays.
fn figure4(cfg: &ScatterConfig, w: &mut Writer) -> CliResult<()> {
    let pts = hot_range().points();
    let exact: Vec<(f64, f64, f64)> = pts
        .par_iter()
        .map(|&x| {
            let s = totals(&build_table(&cfg.with_size(x))?);
            Ok((x, s.lambda_a_total, s.lambda_b_total))
        })
        .collect::<CliResult<_>>()?;
    let mut body = String::from("x,lambda_a,lambda_b\n");
    for (x, a, b) in exact {
        writeln!(body, "{}", csv_row([sci(x), sci(a), sci(b)])).unwrap();
    }
    w.put("fig4_totals.csv", &body)?;
    let approx: Vec<(f64, (f64, f64))> = pts
        .iter()
        .map(|&x| (x, hot_totals(&HotRegimeParams::from_config(&cfg.with_size(x)))))
        .collect();
    let b: Vec<(f64, f64)> = approx.iter().map(|&(x, (b, _))| (x, b)).collect();
    let a: Vec<(f64, f64)> = approx.iter().map(|&(x, (_, a))| (x, a)).collect();
    w.put("fig4_overlay_b.csv", &commands::xy_csv("x,lambda_b_approx", &b))?;
    w.put("fig4_overlay_a.csv", &commands::xy_csv("x,lambda_a_approx", &a))
}

/// Attractive-channel wavefunction at the quasibound state and the
/// effective potential it lives in (`r` in units of `1/kappa_n`).
fn figure5(cfg: &ScatterConfig, w: &mut Writer) -> CliResult<()> {
    let m = QUASIBOUND.0;
    let sol = solve_radial(m, ChannelSign::Minus, cfg)?;
    let mut buf = Vec::new();
    sol.write_table(&mut buf).expect("writing to memory");
    w.put("fig5_wavefunction.csv", &String::from_utf8(buf).expect("ascii output"))?;
    let profile = cfg.profile();
    let energy = cfg.k() * cfg.k();
    let mut body = String::from("r,V,energy\n");
    let steps = 1000;
    for i in 1..=steps {
        let r = 2.0 * profile.size * i as f64 / steps as f64;
        writeln!(body, "{}", csv_row([sci(r), sci(effective_potential(m as u32, r, &profile)), sci(energy)])).unwrap();
    }
    w.put("fig5_potential.csv", &body)
}

/// Cold resonance comb with labels, the resonance table and the four
/// angular patterns.
fn figure6(cfg: &ScatterConfig, w: &mut Writer) -> CliResult<()> {
    let range = Range {
        start: 0.0,
        stop: 15.0,
        step: 0.005,
    };
    let scan = commands::scan_values(Quantity::TotalB, &range, cfg)?;
    w.put("fig6_total_b.csv", &commands::xy_csv("x,value", &scan))?;
    let records = commands::resonance_records(0..=LABEL_M_MAX, (range.start, range.stop), cfg)?;
    let mut buf = Vec::new();
    cavscat::resonances::write_csv(&mut buf, &records).expect("writing to memory");
    w.put("fig6_resonances.csv", &String::from_utf8(buf).expect("ascii output"))?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = scan.into_iter().unzip();
    let mut body = String::from("x,value,m,method\n");
    for l in label_total_length_peaks(&xs, &ys, &records) {
        let m = l.m.map(|m| m.to_string()).unwrap_or_default();
        let method = l.method.map(|m| m.name()).unwrap_or("");
        writeln!(body, "{}", csv_row([sci(l.x), sci(l.value), m, method.to_string()])).unwrap();
    }
    w.put("fig6_labels.csv", &body)?;
    for (m, x) in COLD_PATTERNS {
        w.put(&format!("fig6_differential_m{m}.csv"), &commands::differential_csv(&cfg.with_size(x))?)?;
    }
    Ok(())
}

/// Gaussian-mode comb over `kappa sigma in (0, 15]`.
fn figure7(cfg: &ScatterConfig, w: &mut Writer) -> CliResult<()> {
    let range = Range {
        start: 0.01,
        stop: 15.0,
        step: 0.01,
    };
    w.put("fig7_total_b.csv", &commands::scan_csv(Quantity::TotalB, &range, cfg)?)
}
