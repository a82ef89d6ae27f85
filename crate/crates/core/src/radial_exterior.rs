//! Radially symmetric solutions in the exterior of the disk `|x| > eps`.
//!
//! Every field here has the form `u_θ(r) θ̂`. The filtered harmonic field `w3`
//! solves `w3 - αΔw3 = H` with `w3 = 0` on the circle, `w4 = w3 - K^α`, and
//! `F = curl w4` solves `F - αΔF = 0` with Neumann datum `a_eps`.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::kernels::{bessel_mass_alpha, cutoff_with_derivatives, g_alpha_unchecked, FilterParams};
use crate::specfun::{integrate, integrate_radial, k0, k0_scaled, k1, k1_scaled, one_minus_z_k1, QuadratureSpec};

/// Azimuthal velocity `u_θ(r)` sampled on a radial grid starting at `eps`.
#[derive(Debug, Clone)]
pub struct AzimuthalProfile {
    pub grid: RadialGrid,
    pub values: Vec<f64>,
}

impl AzimuthalProfile {
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!("profile has {} values for {} nodes", values.len(), grid.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { time: 0.0, detail: "azimuthal profile".into() });
        }
        Ok(AzimuthalProfile { grid, values })
    }

    pub fn from_fn(grid: RadialGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        AzimuthalProfile::new(grid, values)
    }

    /// Piecewise-linear interpolation; `None` outside the grid.
    pub fn value_at(&self, r: f64) -> Option<f64> {
        let i = self.grid.locate(r)?;
        let nodes = self.grid.nodes();
        let t = (r - nodes[i]) / (nodes[i + 1] - nodes[i]);
        Some(self.values[i] + t * (self.values[i + 1] - self.values[i]))
    }

    /// `‖u‖²_{L²} + α‖∇u‖²_{L²}` of the vector field `u_θ(r) θ̂` on the annulus.
    ///
    /// Uses `|∇(u θ̂)|² = u'² + (u/r)²`.
    pub fn h1_energy(&self, alpha: f64) -> f64 {
        let r = self.grid.nodes();
        let du = self.grid.derivative(&self.values);
        let w = self.grid.trapezoid_weights();
        let s: f64 = (0..r.len())
            .map(|i| {
                let u = self.values[i];
                w[i] * r[i] * (u * u + alpha * (du[i] * du[i] + (u / r[i]).powi(2)))
            })
            .sum();
        TAU * s
    }

    pub fn h1_norm(&self, alpha: f64) -> f64 {
        self.h1_energy(alpha).sqrt()
    }
}

/// Boundary data of the `w4` problem and its H¹ energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryConstants {
    pub a_eps: f64,
    pub b_eps: f64,
    pub h1_energy: f64,
}

/// How [`w4_h1_energy`] evaluates the energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyMode {
    /// `2πα²ε a (α a/ε - b)` from the boundary constants.
    Identity,
    /// Adaptive radial quadrature of `|w4|² + α|∇w4|²`.
    Quadrature,
}

fn require_eps(params: &FilterParams, function: &'static str) -> Result<()> {
    if params.eps > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(function, "needs a positive obstacle radius"))
    }
}

fn require_outside(r: f64, params: &FilterParams, function: &'static str) -> Result<()> {
    require_eps(params, function)?;
    if r >= params.eps && r.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(function, format!("radius {r} lies inside the obstacle eps = {}", params.eps)))
    }
}

/// `K1(r/√α) / K1(eps/√α)` without overflow or underflow for large arguments.
fn k1_ratio(r: f64, params: &FilterParams) -> f64 {
    let sa = params.sqrt_alpha();
    let (z, ze) = (r / sa, params.eps / sa);
    k1_scaled(z) / k1_scaled(ze) * (ze - z).exp()
}

/// Amplitude `c` in `w4(r) = c K1(r/√α)`, written without cancellation.
fn w4_amplitude_scaled(params: &FilterParams) -> f64 {
    let sa = params.sqrt_alpha();
    let ze = params.eps / sa;
    -one_minus_z_k1(ze) / (TAU * sa * ze * k1(ze))
}

/// Azimuthal value of `w3 = (1 - αΔ)^{-1} H` in the exterior domain.
pub fn filtered_harmonic(r: f64, params: &FilterParams) -> Result<f64> {
    require_outside(r, params, "filtered_harmonic")?;
    Ok(1.0 / (TAU * r) - k1_ratio(r, params) / (TAU * params.eps))
}

/// Azimuthal value of `w4 = w3 - K^α`.
pub fn w4_profile(r: f64, params: &FilterParams) -> Result<f64> {
    require_outside(r, params, "w4_profile")?;
    let z = r / params.sqrt_alpha();
    Ok(w4_amplitude_scaled(params) * k1_scaled(z) * (-z).exp())
}

/// Radial derivative of the `w4` profile.
pub fn w4_derivative(r: f64, params: &FilterParams) -> Result<f64> {
    require_outside(r, params, "w4_derivative")?;
    let sa = params.sqrt_alpha();
    let z = r / sa;
    let e = (-z).exp();
    Ok(-w4_amplitude_scaled(params) * (k0_scaled(z) + k1_scaled(z) / z) * e / sa)
}

/// Neumann datum `a_eps = -k(eps)/α`.
pub fn a_eps(params: &FilterParams) -> Result<f64> {
    require_eps(params, "a_eps")?;
    Ok(-bessel_mass_alpha(params.eps, params.alpha) / (params.eps * params.alpha))
}

/// Boundary trace `b_eps = -√α a_eps K0(eps/√α)/K1(eps/√α)` of `F`.
pub fn b_eps(params: &FilterParams) -> Result<f64> {
    let a = a_eps(params)?;
    let ze = params.eps / params.sqrt_alpha();
    Ok(-params.sqrt_alpha() * a * k0(ze) / k1(ze))
}

/// `b_eps` from the ratio of the two `G_α` integrals, both evaluated by quadrature.
pub fn b_eps_quadrature(params: &FilterParams, spec: &QuadratureSpec) -> Result<f64> {
    let a = a_eps(params)?;
    let alpha = params.alpha;
    let eps = params.eps;
    let circle = TAU * eps * g_alpha_unchecked(eps, alpha);
    let outside = TAU * integrate_radial(|s| s * g_alpha_unchecked(s, alpha), eps, f64::INFINITY, spec)?;
    Ok(-alpha * a * circle / outside)
}

/// `‖w4‖²_{L²} + α‖∇w4‖²_{L²}` over the exterior domain.
pub fn w4_h1_energy(params: &FilterParams, mode: EnergyMode) -> Result<f64> {
    require_eps(params, "w4_h1_energy")?;
    match mode {
        EnergyMode::Identity => {
            let a = a_eps(params)?;
            let b = b_eps(params)?;
            let (alpha, eps) = (params.alpha, params.eps);
            Ok(TAU * alpha * alpha * eps * a * (alpha * a / eps - b))
        }
        EnergyMode::Quadrature => {
            let alpha = params.alpha;
            let amp = w4_amplitude_scaled(params);
            let sa = params.sqrt_alpha();
            let integrand = |r: f64| {
                let z = r / sa;
                let e = (-z).exp();
                let (k0s, k1s) = (k0_scaled(z), k1_scaled(z));
                let u = amp * k1s * e;
                let du = -amp * (k0s + k1s / z) * e / sa;
                r * (u * u + alpha * (du * du + (u / r).powi(2)))
            };
            let spec = QuadratureSpec::new(0.0, 1e-12, 4000)?;
            let q = integrate(integrand, params.eps, f64::INFINITY, &spec)?;
            Ok(TAU * q.value)
        }
    }
}

/// `a_eps`, `b_eps` and the identity-mode energy in one call.
pub fn boundary_constants(params: &FilterParams) -> Result<BoundaryConstants> {
    Ok(BoundaryConstants {
        a_eps: a_eps(params)?,
        b_eps: b_eps(params)?,
        h1_energy: w4_h1_energy(params, EnergyMode::Identity)?,
    })
}

/// `F = curl w4` outside the disk, extended by the constant `b_eps` inside.
pub fn f_extension(r: f64, params: &FilterParams) -> Result<f64> {
    require_eps(params, "f_extension")?;
    if !(r >= 0.0) {
        return Err(Error::domain("f_extension", format!("radius must be non-negative, got {r}")));
    }
    if r <= params.eps {
        return b_eps(params);
    }
    let sa = params.sqrt_alpha();
    let z = r / sa;
    Ok(-w4_amplitude_scaled(params) / sa * k0_scaled(z) * (-z).exp())
}

/// Default truncation radius `8 max(1, 30√α)` for the radial boundary value problems.
pub fn default_r_max(alpha: f64) -> f64 {
    8.0 * (30.0 * alpha.sqrt()).max(1.0)
}

/// Radial grid from `eps` to `r_max` with quadratic grading.
pub fn exterior_grid(params: &FilterParams, r_max: f64, n: usize) -> Result<RadialGrid> {
    require_eps(params, "exterior_grid")?;
    RadialGrid::graded(params.eps, r_max, n, 2.0)
}

/// Azimuthal profile of `αΔH_cut`, supported in `1 ≤ r ≤ 2`.
pub fn cutoff_forcing(r: f64, alpha: f64) -> f64 {
    let (_, d1, d2) = cutoff_with_derivatives(r);
    alpha * (d2 - d1 / r) / (TAU * r)
}

/// Solution of the `H_cut` correction problem.
#[derive(Debug, Clone)]
pub struct CutoffCorrection {
    pub profile: AzimuthalProfile,
    pub h1_norm: f64,
    /// Max-norm residual of the discrete equations at interior nodes.
    pub residual: f64,
}

/// Solves `w2 - αΔw2 = αΔH_cut` for the azimuthal profile of `w2` with
/// `w2(eps) = 0` and `w2(r_max) = 0`.
pub fn cutoff_correction(params: &FilterParams, grid: &RadialGrid) -> Result<CutoffCorrection> {
    require_eps(params, "cutoff_correction")?;
    if params.eps >= 1.0 {
        return Err(Error::domain("cutoff_correction", "needs eps < 1 so the cutoff lies in the fluid"));
    }
    if (grid.first() - params.eps).abs() > 1e-12 * params.eps || grid.last() <= 2.0 {
        return Err(Error::InvalidGrid(format!(
            "grid must start at eps = {} and extend past r = 2, got [{}, {}]",
            params.eps,
            grid.first(),
            grid.last()
        )));
    }
    let alpha = params.alpha;
    let mut m = grid.mode_operator(1, 1.0, -alpha);
    RadialGrid::dirichlet_left(&mut m);
    grid.dirichlet_right(&mut m);
    let rhs: Vec<f64> = grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &r)| if i == 0 || i == grid.len() - 1 { 0.0 } else { cutoff_forcing(r, alpha) })
        .collect();
    let lu = m.factor(&format!("cutoff correction on {} nodes, min spacing {:.3e}", grid.len(), grid.min_spacing()))?;
    let mut w = rhs.clone();
    lu.solve_in_place(&mut w);
    let applied = grid.apply_mode_operator(1, 1.0, -alpha, &w);
    let residual = (1..grid.len() - 1).map(|i| (applied[i] - rhs[i]).abs()).fold(0.0, f64::max);
    let profile = AzimuthalProfile::new(grid.clone(), w)?;
    let h1_norm = profile.h1_norm(alpha);
    Ok(CutoffCorrection { profile, h1_norm, residual })
}
