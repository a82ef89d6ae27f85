//! Special functions and quadrature used by every other module.

mod bessel;
mod quadrature;

pub use bessel::{
    bessel_i, bessel_k, i0, i0_scaled, i1, i1_scaled, k0, k0_scaled, k1, k1_scaled, kn_log_derivative,
    kn_scaled_sequence, one_minus_z_k1, BesselOrder, Scaling, SERIES_I_MAX, SERIES_K_MAX,
};
pub use quadrature::{integrate, integrate_radial, Quadrature, QuadratureSpec};
