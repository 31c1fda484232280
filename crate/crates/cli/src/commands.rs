//! Command bodies. Each returns the CSV text so callers decide where it
//! goes; nothing here depends on the number of worker threads.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use cavscat::format::{csv_row, sci};
use cavscat::resonances::{analytic_records, find_resonances, sort_records, write_csv};
use cavscat::scattering::{angular_distribution, build_table, theta_grid, totals, trig_abs2};
use cavscat::{constant_mode, radial, ChannelSign, ModeShape, ScatterConfig};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};

/// Quantities available to `scan`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    TotalA,
    TotalB,
    TotalPlus,
    TotalMinus,
    /// `|B^a_m|^2`
    CoeffA(usize),
    /// `|B^b_m|^2`
    CoeffB(usize),
}

impl Quantity {
    /// Accepts `total_a`, `total_b`, `total_plus`, `total_minus`,
    /// `coeff_a(m)` / `coeff_b(m)` (also written `coeff_a:m`).
    pub fn parse(s: &str) -> CliResult<Self> {
        let s = s.trim();
        let simple = match s {
            "total_a" => Some(Quantity::TotalA),
            "total_b" => Some(Quantity::TotalB),
            "total_plus" => Some(Quantity::TotalPlus),
            "total_minus" => Some(Quantity::TotalMinus),
            _ => None,
        };
        if let Some(q) = simple {
            return Ok(q);
        }
        let err = || CliError::Config(format!("unknown quantity `{s}`"));
        let (head, rest) = s.split_at(s.find(['(', ':']).ok_or_else(err)?);
        let digits = rest.trim_start_matches(['(', ':']).trim_end_matches(')');
        let m: usize = digits.trim().parse().map_err(|_| err())?;
        match head {
            "coeff_a" => Ok(Quantity::CoeffA(m)),
            "coeff_b" => Ok(Quantity::CoeffB(m)),
            _ => Err(err()),
        }
    }

    pub fn name(self) -> String {
        match self {
            Quantity::TotalA => "total_a".into(),
            Quantity::TotalB => "total_b".into(),
            Quantity::TotalPlus => "total_plus".into(),
            Quantity::TotalMinus => "total_minus".into(),
            Quantity::CoeffA(m) => format!("coeff_a({m})"),
            Quantity::CoeffB(m) => format!("coeff_b({m})"),
        }
    }

    /// Value for one configuration.
    pub fn evaluate(self, cfg: &ScatterConfig) -> CliResult<f64> {
        match self {
            Quantity::CoeffA(m) | Quantity::CoeffB(m) => {
                if cfg.is_free() {
                    return Ok(0.0);
                }
                let (dp, dm) = match cfg.mode.shape {
                    ModeShape::Constant => (
                        constant_mode::phase_shift(m, ChannelSign::Plus, cfg)?,
                        constant_mode::phase_shift(m, ChannelSign::Minus, cfg)?,
                    ),
                    ModeShape::Gaussian => (
                        radial::radial_phase_shift(m, ChannelSign::Plus, cfg)?,
                        radial::radial_phase_shift(m, ChannelSign::Minus, cfg)?,
                    ),
                };
                let (a, b) = trig_abs2(dp, dm);
                Ok(if matches!(self, Quantity::CoeffA(_)) { a } else { b })
            }
            _ => {
                let s = totals(&build_table(cfg)?);
                Ok(match self {
                    Quantity::TotalA => s.lambda_a_total,
                    Quantity::TotalB => s.lambda_b_total,
                    Quantity::TotalPlus => s.lambda_plus_total,
                    _ => s.lambda_minus_total,
                })
            }
        }
    }
}

/// `start:stop:step` grid over the interaction length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn parse(s: &str) -> CliResult<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let nums: Option<Vec<f64>> = parts.iter().map(|p| p.trim().parse().ok()).collect();
        let r = match nums.as_deref() {
            Some(&[start, stop, step]) => Range { start, stop, step },
            _ => return Err(CliError::Config(format!("range must be `start:stop:step`, got `{s}`"))),
        };
        if !(r.step > 0.0 && r.step.is_finite()) {
            return Err(CliError::Config(format!("range step must be positive, got {}", r.step)));
        }
        if !(r.start < r.stop) || !r.stop.is_finite() {
            return Err(CliError::Config(format!("range needs start < stop, got {}:{}", r.start, r.stop)));
        }
        if r.start < 0.0 {
            return Err(CliError::Config(format!("range must not be negative, got start {}", r.start)));
        }
        Ok(r)
    }

    /// `floor((stop - start)/step) + 1` points; the `1e-9` guards against
    /// the representation error of decimal steps.
    pub fn count(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    /// Points computed as `start + i step` so every run sees the same values.
    pub fn points(&self) -> Vec<f64> {
        (0..self.count()).map(|i| self.start + i as f64 * self.step).collect()
    }
}

/// Parses `a:b` into a closed interval.
pub fn parse_window(s: &str) -> CliResult<(f64, f64)> {
    let err = || CliError::Config(format!("window must be `lo:hi`, got `{s}`"));
    let (a, b) = s.split_once(':').ok_or_else(err)?;
    let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| err())?, b.trim().parse().map_err(|_| err())?);
    if !(a >= 0.0 && b >= a && b.is_finite()) {
        return Err(err());
    }
    Ok((a, b))
}

/// Parses `a:b` (inclusive) or a single `m`.
pub fn parse_m_range(s: &str) -> CliResult<RangeInclusive<usize>> {
    let err = || CliError::Config(format!("m range must be `lo:hi` or `m`, got `{s}`"));
    let (a, b) = s.split_once(':').unwrap_or((s, s));
    let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| err())?, b.trim().parse().map_err(|_| err())?);
    if a > b {
        return Err(err());
    }
    Ok(a..=b)
}

pub const PHASE_SHIFT_HEADER: &str = "m,delta_plus,delta_minus,re_B_a,im_B_a,re_B_b,im_B_b,abs2_B_a,abs2_B_b";

pub fn phase_shifts_csv(cfg: &ScatterConfig) -> CliResult<String> {
    let table = build_table(cfg)?;
    let mut out = format!("{PHASE_SHIFT_HEADER}\n");
    for w in &table.waves {
        let row = csv_row([
            w.m.to_string(),
            sci(w.delta_plus),
            sci(w.delta_minus),
            sci(w.b_a.re),
            sci(w.b_a.im),
            sci(w.b_b.re),
            sci(w.b_b.im),
            sci(w.b_a.norm_sqr()),
            sci(w.b_b.norm_sqr()),
        ]);
        writeln!(out, "{row}").unwrap();
    }
    Ok(out)
}

/// Values of `q` over the grid, in grid order.
pub fn scan_values(q: Quantity, range: &Range, cfg: &ScatterConfig) -> CliResult<Vec<(f64, f64)>> {
    cfg.validate()?;
    range
        .points()
        .into_par_iter()
        .map(|x| Ok((x, q.evaluate(&cfg.with_size(x))?)))
        .collect()
}

pub fn xy_csv(header: &str, rows: &[(f64, f64)]) -> String {
    let mut out = format!("{header}\n");
    for &(x, y) in rows {
        writeln!(out, "{},{}", sci(x), sci(y)).unwrap();
    }
    out
}

pub fn scan_csv(q: Quantity, range: &Range, cfg: &ScatterConfig) -> CliResult<String> {
    Ok(xy_csv("x,value", &scan_values(q, range, cfg)?))
}

pub fn differential_csv(cfg: &ScatterConfig) -> CliResult<String> {
    let table = build_table(cfg)?;
    let d = angular_distribution(&table, &theta_grid(cfg.theta_points));
    let mut out = String::from("theta_rad,lambda_a,lambda_b\n");
    for i in 0..d.thetas.len() {
        writeln!(out, "{}", csv_row([sci(d.thetas[i]), sci(d.lambda_a[i]), sci(d.lambda_b[i])])).unwrap();
    }
    Ok(out)
}

/// Complex roots for every `m`; an `m` without any root in the window is
/// represented by its analytic-profile peaks instead.
pub fn resonance_records(ms: RangeInclusive<usize>, window: (f64, f64), cfg: &ScatterConfig) -> CliResult<Vec<cavscat::resonances::ResonanceRecord>> {
    let mut all = Vec::new();
    for m in ms {
        let found = find_resonances(m, window, cfg)?;
        if found.is_empty() {
            all.extend(analytic_records(m, window, cfg));
        } else {
            all.extend(found);
        }
    }
    sort_records(&mut all);
    Ok(all)
}

pub fn resonances_csv(ms: RangeInclusive<usize>, window: (f64, f64), cfg: &ScatterConfig) -> CliResult<String> {
    let records = resonance_records(ms, window, cfg)?;
    let mut buf = Vec::new();
    write_csv(&mut buf, &records).expect("writing to memory");
    Ok(String::from_utf8(buf).expect("ascii output"))
}
