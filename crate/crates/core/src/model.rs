//! The dimensionless physical model.
//!
//! All quantities are measured in units where `kappa_n = 1`: lengths in
//! `1/kappa_n`, wavenumbers in `kappa_n`. The atomic wavenumber is then
//! simply the velocity ratio `k / kappa_n`, and the dressed-channel radial
//! equation reads
//!
//! ```text
//! u'' + (k^2 -/+ v(r) - (m^2 - 1/4) / r^2) u = 0
//! ```
//!
//! with the upper sign for `|+n>` (repulsive) and the lower one for `|-n>`.

use crate::{Error, Result};

/// Dressed channel `|+n>` or `|-n>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelSign {
    /// Repulsive potential `+kappa_n^2 v(r)`.
    Plus,
    /// Attractive potential `-kappa_n^2 v(r)`.
    Minus,
}

impl ChannelSign {
    pub const BOTH: [ChannelSign; 2] = [ChannelSign::Plus, ChannelSign::Minus];

    /// Sign of the potential term in the radial equation.
    pub fn potential_sign(self) -> f64 {
        match self {
            ChannelSign::Plus => 1.0,
            ChannelSign::Minus => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ChannelSign::Plus => "plus",
            ChannelSign::Minus => "minus",
        }
    }
}

/// Bare exit channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExitChannel {
    /// `|a, n>`: the atom leaves excited. Carries the incident plane wave.
    NoDeexcitation,
    /// `|b, n+1>`: a photon was emitted into the cavity. Purely outgoing.
    PhotonEmission,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeShape {
    /// `v = 1` for `r <= R`, zero beyond.
    Constant,
    /// `v = exp(-r^2 / 2 sigma^2)`.
    Gaussian,
}

impl ModeShape {
    pub fn name(self) -> &'static str {
        match self {
            ModeShape::Constant => "constant",
            ModeShape::Gaussian => "gaussian",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "constant" => Some(ModeShape::Constant),
            "gaussian" => Some(ModeShape::Gaussian),
            _ => None,
        }
    }
}

/// Cylindrically symmetric cavity mode profile `v(r)`, `0 <= v <= 1`.
///
/// `size` is the radius `R` or the standard deviation `sigma`, in whatever
/// length unit the caller works in (`1/kappa` in a [`ScatterConfig`],
/// `1/kappa_n` once passed through [`ScatterConfig::profile`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFunction {
    pub shape: ModeShape,
    pub size: f64,
}

impl ModeFunction {
    pub fn constant(radius: f64) -> Self {
        ModeFunction {
            shape: ModeShape::Constant,
            size: radius,
        }
    }

    pub fn gaussian(sigma: f64) -> Self {
        ModeFunction {
            shape: ModeShape::Gaussian,
            size: sigma,
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        match self.shape {
            ModeShape::Constant => {
                if r <= self.size {
                    1.0
                } else {
                    0.0
                }
            }
            ModeShape::Gaussian => {
                if self.size == 0.0 {
                    0.0
                } else {
                    (-r * r / (2.0 * self.size * self.size)).exp()
                }
            }
        }
    }

    /// Same shape with the size multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        ModeFunction {
            shape: self.shape,
            size: self.size * factor,
        }
    }

    /// Radius beyond which the mode is treated as exactly zero: `R` for the
    /// constant mode, `sigma sqrt(-2 ln tail)` for the Gaussian.
    pub fn cutoff_radius(&self, tail: f64) -> f64 {
        match self.shape {
            ModeShape::Constant => self.size,
            ModeShape::Gaussian => self.size * (-2.0 * tail.ln()).sqrt(),
        }
    }

    /// Length used to make scattering lengths dimensionless: `2R` or `2 sigma`.
    pub fn divisor(&self) -> f64 {
        2.0 * self.size
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Partial-wave truncation threshold on `|B_m|^2`; also fixes the
    /// Gaussian cutoff radius.
    pub series_tail: f64,
    /// Numerov step as a fraction of the shortest length scale.
    pub ode_step: f64,
    /// Residual accepted for secular-equation roots.
    pub root_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            series_tail: 1e-12,
            ode_step: 1.0 / 40.0,
            root_tol: 1e-10,
        }
    }
}

/// Partial-wave truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MMax {
    Auto,
    Fixed(usize),
}

/// Complete dimensionless problem definition.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterConfig {
    /// Mode shape and interaction length `kappa R` (or `kappa sigma`).
    pub mode: ModeFunction,
    /// Photon number of the initial Fock state.
    pub n: u32,
    /// Velocity ratio `k / kappa_n`.
    pub k_over_kappa_n: f64,
    pub m_max: MMax,
    pub theta_points: usize,
    pub tolerances: Tolerances,
}

pub const DEFAULT_THETA_POINTS: usize = 2048;

impl ScatterConfig {
    pub fn new(mode: ModeFunction, n: u32, k_over_kappa_n: f64) -> Self {
        ScatterConfig {
            mode,
            n,
            k_over_kappa_n,
            m_max: MMax::Auto,
            theta_points: DEFAULT_THETA_POINTS,
            tolerances: Tolerances::default(),
        }
    }

    pub fn constant(kappa_r: f64, n: u32, k_over_kappa_n: f64) -> Self {
        Self::new(ModeFunction::constant(kappa_r), n, k_over_kappa_n)
    }

    pub fn gaussian(kappa_sigma: f64, n: u32, k_over_kappa_n: f64) -> Self {
        Self::new(ModeFunction::gaussian(kappa_sigma), n, k_over_kappa_n)
    }

    /// Copy with a different interaction length.
    pub fn with_size(&self, size: f64) -> Self {
        let mut c = self.clone();
        c.mode.size = size;
        c
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        if !(self.k_over_kappa_n > 0.0 && self.k_over_kappa_n.is_finite()) {
            return Err(Error::Config(format!(
                "k_over_kappa_n must be positive and finite, got {}",
                self.k_over_kappa_n
            )));
        }
        if !(self.mode.size >= 0.0 && self.mode.size.is_finite()) {
            return Err(Error::Config(format!(
                "size must be non-negative and finite, got {}",
                self.mode.size
            )));
        }
        if self.theta_points < 4 {
            return Err(Error::Config(format!(
                "theta_points must be at least 4, got {}",
                self.theta_points
            )));
        }
        if !(t.series_tail > 0.0 && t.series_tail < 1.0) {
            return Err(Error::Config(format!("series_tail must lie in (0, 1), got {}", t.series_tail)));
        }
        if !(t.ode_step > 0.0 && t.ode_step <= 0.5) {
            return Err(Error::Config(format!("ode_step must lie in (0, 0.5], got {}", t.ode_step)));
        }
        if !(t.root_tol > 0.0 && t.root_tol.is_finite()) {
            return Err(Error::Config(format!("root_tol must be positive, got {}", t.root_tol)));
        }
        Ok(())
    }

    /// Wavenumber in units of `kappa_n`.
    pub fn k(&self) -> f64 {
        self.k_over_kappa_n
    }

    /// Mode profile in units of `1/kappa_n` (`kappa_n R = kappa R (n+1)^{1/4}`).
    pub fn profile(&self) -> ModeFunction {
        self.mode.scaled(kappa_n_scale(self.n))
    }

    /// A vanishing interaction length means no potential at all.
    pub fn is_free(&self) -> bool {
        self.mode.size == 0.0
    }

    /// Initial truncation order: `ceil(m_l) + 8` with `m_l` taken at the
    /// cutoff radius, or the fixed value.
    pub fn initial_m_max(&self) -> usize {
        match self.m_max {
            MMax::Fixed(m) => m,
            MMax::Auto => {
                let r = self.profile().cutoff_radius(self.tolerances.series_tail);
                auto_m_max(self.k() * r)
            }
        }
    }
}

/// `kappa_n / kappa = (n + 1)^{1/4}`.
pub fn kappa_n_scale(n: u32) -> f64 {
    (n as f64 + 1.0).powf(0.25)
}

/// Classical turning radius of the centrifugal barrier,
/// `r_m = sqrt(m^2 - 1/4) / k`; zero for the barrier-free `m = 0` wave.
pub fn critical_radius(m: u32, k: f64) -> f64 {
    if m == 0 {
        0.0
    } else {
        let m = m as f64;
        (m * m - 0.25).sqrt() / k
    }
}

/// `m_l = sqrt((kR)^2 + 1/4)`, the order of magnitude of the number of
/// partial waves that feel the potential.
pub fn m_cutoff(kr: f64) -> f64 {
    (kr * kr + 0.25).sqrt()
}

pub fn auto_m_max(kr: f64) -> usize {
    m_cutoff(kr).ceil() as usize + 8
}

/// Effective radial potential of the attractive channel,
/// `-v(r) + (m^2 - 1/4) / r^2`, for a profile in `1/kappa_n` units.
pub fn effective_potential(m: u32, r: f64, profile: &ModeFunction) -> f64 {
    let m = m as f64;
    -profile.value(r) + (m * m - 0.25) / (r * r)
}

/// First local minimum of the attractive effective potential, searched on a
/// grid that contains the mode edge. Returns `(r, V(r))`.
pub fn effective_potential_minimum(m: u32, profile: &ModeFunction) -> Option<(f64, f64)> {
    let reach = 3.0 * profile.size.max(1.0);
    let steps = 6000;
    let mut grid: Vec<f64> = (1..=steps).map(|i| reach * i as f64 / steps as f64).collect();
    grid.push(profile.size);
    grid.sort_by(|a, b| a.total_cmp(b));
    grid.dedup();
    let v: Vec<f64> = grid.iter().map(|&r| effective_potential(m, r, profile)).collect();
    (1..grid.len() - 1)
        .find(|&i| v[i] < v[i - 1] && v[i] <= v[i + 1])
        .map(|i| (grid[i], v[i]))
}
