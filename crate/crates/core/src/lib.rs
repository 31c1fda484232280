//! Two-dimensional quantum scattering of slow two-level atoms by a resonant
//! cavity mode.
//!
//! The incoming atom (excited, field in the Fock state `|n>`) is decomposed
//! on the dressed states `|+n>` and `|-n>`, each of which scatters
//! independently on the potential `+/- kappa_n^2 v(r)`. Partial-wave phase
//! shifts of the two dressed channels are recombined into the bare exit
//! channels `|a, n>` (no deexcitation) and `|b, n+1>` (photon emission).
//!
//! Every length is expressed in units of `1 / kappa_n`; the user-facing
//! interaction length `kappa R` (or `kappa sigma`) is converted once through
//! [`model::kappa_n_scale`].
//!
//! Module map:
//!
//! * [`special`] - cylindrical Bessel functions and the Lambert W function.
//! * [`model`] - channels, mode functions, configuration and truncation.
//! * [`constant_mode`] - closed-form solution for the transverse constant mode.
//! * [`radial`] - Numerov integration of the radial equation for any mode.
//! * [`scattering`] - amplitudes and differential / total scattering lengths.
//! * [`asymptotics`] - hot-regime, cold-regime and eikonal approximations.
//! * [`resonances`] - quasibound-state poles of the secular equation.

pub mod asymptotics;
pub mod constant_mode;
pub mod format;
pub mod model;
pub mod quad;
pub mod radial;
pub mod resonances;
pub mod scattering;
pub mod special;

mod error;

pub use error::{Error, Result};
pub use model::{ChannelSign, ExitChannel, MMax, ModeFunction, ModeShape, ScatterConfig, Tolerances};
pub use num_complex::Complex64;
