use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use super::field::{analyze, ModeCoefficients, PolarField, PolarGrid};
use crate::banded::BandLu;
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::grid::RadialGrid;
use crate::kernels::FilterParams;
use crate::specfun::kn_log_derivative;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Relative size of `|u|` on the boundary tolerated by the no-slip check.
pub const NO_SLIP_TOLERANCE: f64 = 1e-6;

/// Velocity in azimuthal-Fourier form on the radial grid of a [`PolarGrid`].
///
/// `u_r(r, θ) = Σ_n ur[n](r) e^{inθ}`, likewise for `u_θ`, with negative
/// modes given by conjugation.
#[derive(Debug, Clone)]
pub struct ModeField {
    pub grid: PolarGrid,
    pub params: FilterParams,
    pub n_max: usize,
    pub ur: Vec<Vec<Complex64>>,
    pub uth: Vec<Vec<Complex64>>,
    /// Mode-0 profile of `χ = curl u_K` (the part driven by `q`).
    pub chi0: Vec<f64>,
}

impl ModeField {
    /// `∮_{|x|=r_i} (1 - αΔ)u · ds` at radial node `i`.
    ///
    /// The harmonic part contributes `γ + m` exactly; the `q` part contributes
    /// `2πr (u_θ0 - α χ0')` with `u_θ0` net of the harmonic part.
    pub fn circulation_at(&self, i: usize, harmonic: &[f64]) -> f64 {
        let radial = self.grid.radial();
        let r = radial.nodes()[i];
        let dchi = radial.derivative(&self.chi0)[i];
        let beta = self.params.beta();
        let u_k = self.uth[0][i].re - beta * harmonic[i];
        TAU * r * (u_k - self.params.alpha * dchi) + beta
    }

    /// Largest `|u|` on the inner circle relative to the largest `|u|` anywhere,
    /// bounded using mode magnitudes.
    pub fn boundary_slip(&self) -> f64 {
        let mut edge = 0.0;
        let mut peak: f64 = 0.0;
        for i in 0..self.grid.n_r() {
            let s: f64 = (0..=self.n_max)
                .map(|n| {
                    let f = if n == 0 { 1.0 } else { 2.0 };
                    f * (self.ur[n][i].norm() + self.uth[n][i].norm())
                })
                .sum();
            if i == 0 {
                edge = s;
            }
            peak = peak.max(s);
        }
        if peak == 0.0 {
            0.0
        } else {
            edge / peak
        }
    }

    /// Velocity at grid nodes, as `(u_r, u_θ)` arrays in radius-major order.
    pub fn synthesize_polar(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let nt = self.grid.n_theta();
        let ur = super::field::synthesize(&ModeCoefficients { n_max: self.n_max, modes: self.ur.clone() }, nt)?;
        let uth = super::field::synthesize(&ModeCoefficients { n_max: self.n_max, modes: self.uth.clone() }, nt)?;
        Ok((ur, uth))
    }

    /// Largest speed over the grid nodes.
    pub fn max_speed(&self) -> Result<f64> {
        let (ur, uth) = self.synthesize_polar()?;
        Ok(ur.iter().zip(&uth).map(|(a, b)| a.hypot(*b)).fold(0.0, f64::max))
    }
}

/// Lagrange weights for cubic interpolation on four nonuniform nodes.
fn cubic_weights(x: &[f64; 4], t: f64) -> [f64; 4] {
    let mut w = [1.0; 4];
    for k in 0..4 {
        for m in 0..4 {
            if m != k {
                w[k] *= (t - x[m]) / (x[k] - x[m]);
            }
        }
    }
    w
}

/// Evaluates the velocity at arbitrary points of the annulus by Fourier
/// synthesis in θ and cubic interpolation in r.
pub fn eval_velocity(u: &ModeField, points: &[Point2]) -> Result<Vec<Point2>> {
    points.par_iter().map(|&p| eval_velocity_at(u, p)).collect()
}

pub fn eval_velocity_at(u: &ModeField, p: Point2) -> Result<Point2> {
    let radial = u.grid.radial();
    let r = p.norm();
    let slack = 1e-12 * radial.first();
    let r = if r < radial.first() && r >= radial.first() - slack { radial.first() } else { r };
    let i = radial.locate(r).ok_or_else(|| {
        Error::domain(
            "eval_velocity",
            format!("point at radius {r} lies outside the annulus [{}, {}]", radial.first(), radial.last()),
        )
    })?;
    let n = radial.len();
    let start = i.saturating_sub(1).min(n - 4);
    let nodes = radial.nodes();
    let x = [nodes[start], nodes[start + 1], nodes[start + 2], nodes[start + 3]];
    let w = cubic_weights(&x, r);
    let theta = p.x2.atan2(p.x1);
    let e1 = Complex64::from_polar(1.0, theta);
    let mut e = Complex64::new(1.0, 0.0);
    let mut vr = 0.0;
    let mut vt = 0.0;
    for m in 0..=u.n_max {
        let (mut cr, mut ct) = (ZERO, ZERO);
        for k in 0..4 {
            cr += u.ur[m][start + k] * w[k];
            ct += u.uth[m][start + k] * w[k];
        }
        if m == 0 {
            vr += cr.re;
            vt += ct.re;
        } else {
            vr += 2.0 * (cr * e).re;
            vt += 2.0 * (ct * e).re;
        }
        e *= e1;
    }
    let (s, c) = theta.sin_cos();
    Ok(Point2::new(vr * c - vt * s, vr * s + vt * c))
}

/// Cached factorizations for `T(q)` on a fixed grid, filter and mode count.
#[derive(Debug)]
pub struct ModeSolver {
    grid: PolarGrid,
    alpha: f64,
    n_max: usize,
    helmholtz: Vec<BandLu>,
    poisson: Vec<BandLu>,
    kappa: Vec<f64>,
    chi_h: Vec<Vec<f64>>,
    psi_h: Vec<Vec<f64>>,
    dpsi_h: Vec<f64>,
    harmonic: Vec<f64>,
}

fn far_kappa(radial: &RadialGrid, alpha: f64, n_max: usize) -> Vec<f64> {
    let sa = alpha.sqrt();
    let s = radial.last() / sa;
    kn_log_derivative(n_max.max(1), s).into_iter().map(|d| d / sa).collect()
}

fn left_slope<T>(radial: &RadialGrid, v: &[T]) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let w = radial.left_derivative_weights();
    v[0] * w[0] + v[1] * w[1] + v[2] * w[2]
}

impl ModeSolver {
    pub fn new(grid: &PolarGrid, alpha: f64, n_max: usize) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        if grid.n_theta() < 2 * n_max + 2 {
            return Err(Error::InvalidParameter(format!("n_theta = {} cannot resolve {n_max} modes", grid.n_theta())));
        }
        let radial = grid.radial();
        let len = radial.len();
        let r_max = radial.last();
        let kappa = far_kappa(radial, alpha, n_max);
        let built: Vec<_> = (0..=n_max)
            .into_par_iter()
            .map(|n| -> Result<_> {
                let mut h = radial.mode_operator(n, 1.0, -alpha);
                RadialGrid::dirichlet_left(&mut h);
                radial.robin_right(&mut h, kappa[n]);
                let h = h.factor(&format!("Helmholtz mode {n}, {len} nodes"))?;
                let mut p = radial.mode_operator(n, 0.0, 1.0);
                RadialGrid::dirichlet_left(&mut p);
                radial.robin_right(&mut p, -(n as f64) / r_max);
                let p = p.factor(&format!("Poisson mode {n}, {len} nodes"))?;

                let mut chi = vec![0.0; len];
                chi[0] = 1.0;
                h.solve_in_place(&mut chi);
                let psi = poisson_with_closure(radial, &p, &chi, alpha, kappa[n], n);
                let slope = left_slope(radial, &psi);
                if !(slope.abs() > 0.0) {
                    return Err(Error::SingularSystem {
                        row: 0,
                        size: len,
                        context: format!("no-slip amplitude for mode {n}"),
                    });
                }
                Ok((h, p, chi, psi, slope))
            })
            .collect::<Result<_>>()?;

        let mut helmholtz = Vec::with_capacity(n_max + 1);
        let mut poisson = Vec::with_capacity(n_max + 1);
        let mut chi_h = Vec::with_capacity(n_max + 1);
        let mut psi_h = Vec::with_capacity(n_max + 1);
        let mut dpsi_h = Vec::with_capacity(n_max + 1);
        for (h, p, c, s, d) in built {
            helmholtz.push(h);
            poisson.push(p);
            chi_h.push(c);
            psi_h.push(s);
            dpsi_h.push(d);
        }
        let harmonic = harmonic_profile(radial, alpha, kappa[1])?;
        Ok(ModeSolver { grid: grid.clone(), alpha, n_max, helmholtz, poisson, kappa, chi_h, psi_h, dpsi_h, harmonic })
    }

    pub fn grid(&self) -> &PolarGrid {
        &self.grid
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Discrete azimuthal profile of the filtered harmonic field `w3` on the radial grid.
    pub fn harmonic(&self) -> &[f64] {
        &self.harmonic
    }

    /// `T(q) = (1 + αA_ε)^{-1}[K(q) + (γ + m)H]` for a gridded vorticity.
    pub fn filtered_velocity(&self, q: &PolarField, params: &FilterParams) -> Result<ModeField> {
        if q.grid() != &self.grid {
            return Err(Error::Mismatch("vorticity grid differs from the solver grid".into()));
        }
        if (params.alpha - self.alpha).abs() > 0.0 {
            return Err(Error::Mismatch(format!(
                "solver built for alpha = {}, called with {}",
                self.alpha, params.alpha
            )));
        }
        let analysis = analyze(q, self.n_max)?;
        self.velocity_from_modes(&analysis.coefficients, params)
    }

    pub fn velocity_from_modes(&self, q: &ModeCoefficients, params: &FilterParams) -> Result<ModeField> {
        let radial = self.grid.radial();
        let beta = params.beta();
        let per_mode: Vec<(Vec<Complex64>, Vec<Complex64>, Vec<Complex64>)> =
            (0..=self.n_max).into_par_iter().map(|n| self.solve_mode(n, &q.modes[n])).collect();
        let mut ur = Vec::with_capacity(self.n_max + 1);
        let mut uth = Vec::with_capacity(self.n_max + 1);
        let mut chi0 = Vec::new();
        for (n, (psi, chi, mut dpsi)) in per_mode.into_iter().enumerate() {
            let factor = Complex64::new(0.0, -(n as f64));
            let radial_part: Vec<Complex64> = psi.iter().zip(radial.nodes()).map(|(p, &r)| factor * p / r).collect();
            if n == 0 {
                for (u, h) in dpsi.iter_mut().zip(&self.harmonic) {
                    u.re += beta * h;
                }
                chi0 = chi.iter().map(|c| c.re).collect();
            }
            ur.push(radial_part);
            uth.push(dpsi);
        }
        let field = ModeField { grid: self.grid.clone(), params: *params, n_max: self.n_max, ur, uth, chi0 };
        let slip = field.boundary_slip();
        if slip > NO_SLIP_TOLERANCE {
            return Err(Error::NoSlipViolation { magnitude: slip, tolerance: NO_SLIP_TOLERANCE });
        }
        Ok(field)
    }

    /// Returns `(ψ_n, χ_n, ψ_n')` for one mode.
    fn solve_mode(&self, n: usize, q: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>, Vec<Complex64>) {
        let radial = self.grid.radial();
        let len = radial.len();
        let mut chi: Vec<Complex64> = q.to_vec();
        chi[0] = ZERO;
        chi[len - 1] = ZERO;
        self.helmholtz[n].solve_in_place(&mut chi);
        let mut psi = poisson_with_closure(radial, &self.poisson[n], &chi, self.alpha, self.kappa[n], n);
        let c = -left_slope(radial, &psi) / self.dpsi_h[n];
        for i in 0..len {
            chi[i] += self.chi_h[n][i] * c;
            psi[i] += self.psi_h[n][i] * c;
        }
        let dpsi = radial.derivative(&psi);
        (psi, chi, dpsi)
    }
}

/// Solves `Δ_n ψ = χ` with `ψ(eps) = 0` and the far closure
/// `ψ' + (n/R)ψ = α χ(R) (κ_n + n/R)`, which is exact when `χ ∝ K_n(r/√α)` beyond `R`.
fn poisson_with_closure<T>(radial: &RadialGrid, lu: &BandLu, chi: &[T], alpha: f64, kappa: f64, n: usize) -> Vec<T>
where
    T: Copy + std::ops::SubAssign + std::ops::Mul<f64, Output = T> + std::ops::Div<f64, Output = T> + Default,
{
    let len = radial.len();
    let mut psi: Vec<T> = chi.to_vec();
    psi[0] = T::default();
    psi[len - 1] = chi[len - 1] * (alpha * (kappa + n as f64 / radial.last()));
    lu.solve_in_place(&mut psi);
    psi
}

/// `w3` on the radial grid: `w - α(w'' + w'/r - w/r²) = 1/(2πr)`, `w(eps) = 0`,
/// and `(w - 1/(2πr))' = κ_1 (w - 1/(2πr))` at `R`.
fn harmonic_profile(radial: &RadialGrid, alpha: f64, kappa1: f64) -> Result<Vec<f64>> {
    let len = radial.len();
    let mut m = radial.mode_operator(1, 1.0, -alpha);
    RadialGrid::dirichlet_left(&mut m);
    radial.robin_right(&mut m, kappa1);
    let lu = m.factor("filtered harmonic profile")?;
    let r_max = radial.last();
    let mut w: Vec<f64> = radial.nodes().iter().map(|r| 1.0 / (TAU * r)).collect();
    w[0] = 0.0;
    w[len - 1] = -1.0 / (TAU * r_max * r_max) - kappa1 / (TAU * r_max);
    lu.solve_in_place(&mut w);
    Ok(w)
}

/// One-shot `T(q)`; builds a [`ModeSolver`] internally.
pub fn filtered_velocity(q: &PolarField, params: &FilterParams, n_max: usize) -> Result<ModeField> {
    ModeSolver::new(q.grid(), params.alpha, n_max)?.filtered_velocity(q, params)
}

/// Cached Dirichlet Poisson solves `Δ_n ξ = f` on the exterior annulus.
///
/// Far condition: `ξ' + (n/R)ξ = 0` (decaying `r^{-n}` branch for `n ≥ 1`,
/// zero far-field circulation for `n = 0`).
#[derive(Debug)]
pub struct PoissonSolver {
    grid: PolarGrid,
    n_max: usize,
    lus: Vec<BandLu>,
}

impl PoissonSolver {
    pub fn new(grid: &PolarGrid, n_max: usize) -> Result<Self> {
        let radial = grid.radial();
        let lus = (0..=n_max)
            .into_par_iter()
            .map(|n| {
                let mut p = radial.mode_operator(n, 0.0, 1.0);
                RadialGrid::dirichlet_left(&mut p);
                radial.robin_right(&mut p, -(n as f64) / radial.last());
                p.factor(&format!("exterior Poisson mode {n}"))
            })
            .collect::<Result<_>>()?;
        Ok(PoissonSolver { grid: grid.clone(), n_max, lus })
    }

    pub fn solve_mode(&self, n: usize, rhs: &[Complex64]) -> Vec<Complex64> {
        let len = rhs.len();
        let mut xi = rhs.to_vec();
        xi[0] = ZERO;
        xi[len - 1] = ZERO;
        self.lus[n].solve_in_place(&mut xi);
        xi
    }

    /// Streamfunction modes `ξ_n` of `Δξ = q`.
    pub fn solve(&self, q: &PolarField) -> Result<ModeCoefficients> {
        if q.grid() != &self.grid {
            return Err(Error::Mismatch("field grid differs from the Poisson solver grid".into()));
        }
        let a = analyze(q, self.n_max)?;
        let modes = (0..=self.n_max).into_par_iter().map(|n| self.solve_mode(n, &a.coefficients.modes[n])).collect();
        Ok(ModeCoefficients { n_max: self.n_max, modes })
    }

    /// `‖∇ξ‖²_{L²}` over `|x| > eps`, including the exact `r^{-n}` tail beyond the grid.
    pub fn gradient_energy(&self, xi: &ModeCoefficients) -> f64 {
        let radial = self.grid.radial();
        let nodes = radial.nodes();
        let w = radial.trapezoid_weights();
        let last = nodes.len() - 1;
        let mut total = 0.0;
        for (n, mode) in xi.modes.iter().enumerate() {
            let d = radial.derivative(mode);
            let n2 = (n * n) as f64;
            let mut s: f64 = (0..nodes.len())
                .map(|i| w[i] * nodes[i] * (d[i].norm_sqr() + n2 * mode[i].norm_sqr() / (nodes[i] * nodes[i])))
                .sum();
            s += n as f64 * mode[last].norm_sqr();
            total += if n == 0 { s } else { 2.0 * s };
        }
        TAU * total
    }

    /// `‖∇Δ^{-1} q‖_{L²}`.
    pub fn gradient_norm(&self, q: &PolarField) -> Result<f64> {
        Ok(self.gradient_energy(&self.solve(q)?).sqrt())
    }
}

/// Single-mode Dirichlet Poisson solve; see [`PoissonSolver`] for the far condition.
pub fn exterior_poisson(n: usize, rhs: &[Complex64], grid: &RadialGrid) -> Result<Vec<Complex64>> {
    if rhs.len() != grid.len() {
        return Err(Error::InvalidGrid(format!("rhs has {} values for {} nodes", rhs.len(), grid.len())));
    }
    let mut p = grid.mode_operator(n, 0.0, 1.0);
    RadialGrid::dirichlet_left(&mut p);
    grid.robin_right(&mut p, -(n as f64) / grid.last());
    let lu = p.factor(&format!("exterior Poisson mode {n}"))?;
    let len = rhs.len();
    let mut xi = rhs.to_vec();
    xi[0] = ZERO;
    xi[len - 1] = ZERO;
    lu.solve_in_place(&mut xi);
    Ok(xi)
}
