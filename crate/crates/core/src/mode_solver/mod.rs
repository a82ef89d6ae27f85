//! The filtered Biot-Savart operator `T(q)` in the exterior of the disk, by
//! azimuthal Fourier modes and radial boundary value problems.
//!
//! Per mode the fourth-order problem `(1 - αΔ)Δψ = q` is split into a
//! Helmholtz solve for `χ = Δψ` and a Poisson solve for `ψ`. The decaying
//! `K_n` amplitude of `χ` is fixed by the no-slip condition `ψ'(eps) = 0`.
//! The velocity is `u = ∇⊥ψ + (γ + m) w3`.

mod field;
mod solve;

pub use field::{analyze, synthesize, Analysis, ModeCoefficients, PolarField, PolarGrid, ALIASING_THRESHOLD};
pub use solve::{
    eval_velocity, eval_velocity_at, exterior_poisson, filtered_velocity, ModeField, ModeSolver, PoissonSolver,
    NO_SLIP_TOLERANCE,
};
