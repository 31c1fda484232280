//! Special-function kernel: cylindrical Bessel functions of integer order
//! and the real branches of the Lambert W function.

mod bessel;
mod lambert;

pub use bessel::{
    bessel, bessel_deriv, bessel_i_scaled_seq, bessel_j_seq, bessel_j_seq_complex, bessel_jy_seq,
    bessel_jy_seq_complex, bessel_jy_seq_partial, cylinder_derivative, cylinder_derivative_real, modified_derivative,
    BesselKind,
};
pub use lambert::{lambert_w, LambertBranch};
