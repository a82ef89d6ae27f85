use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::grid::RadialGrid;

/// Tensor grid on the annulus `[eps, r_max] × [0, 2π)`.
///
/// Radial nodes are `eps + (r_max - eps) (i/(n_r-1))^grading`; angular nodes
/// are `2πj/n_theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid {
    eps: f64,
    r_max: f64,
    grading: f64,
    n_theta: usize,
    radial: RadialGrid,
}

impl PolarGrid {
    pub fn new(eps: f64, r_max: f64, n_r: usize, grading: f64, n_theta: usize) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidGrid(format!("inner radius must be positive, got {eps}")));
        }
        if n_r < 16 {
            return Err(Error::InvalidGrid(format!("need n_r >= 16, got {n_r}")));
        }
        if n_theta < 8 || !n_theta.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("n_theta must be a power of two >= 8, got {n_theta}")));
        }
        let radial = RadialGrid::graded(eps, r_max, n_r, grading)?;
        Ok(PolarGrid { eps, r_max, grading, n_theta, radial })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n_r(&self) -> usize {
        self.radial.len()
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn radial(&self) -> &RadialGrid {
        &self.radial
    }

    pub fn d_theta(&self) -> f64 {
        TAU / self.n_theta as f64
    }

    pub fn theta(&self, j: usize) -> f64 {
        j as f64 * self.d_theta()
    }

    pub fn len(&self) -> usize {
        self.n_r() * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node(&self, i: usize, j: usize) -> Point2 {
        Point2::from_polar(self.radial.nodes()[i], self.theta(j))
    }

    /// Area weights `r_i w_i Δθ` of the trapezoid-in-r, rectangle-in-θ rule.
    pub fn area_weights(&self) -> Vec<f64> {
        let dt = self.d_theta();
        self.radial.trapezoid_weights().iter().zip(self.radial.nodes()).map(|(w, r)| w * r * dt).collect()
    }
}

/// Scalar field sampled at the nodes of a [`PolarGrid`], stored radius-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarField {
    grid: PolarGrid,
    values: Vec<f64>,
}

impl PolarField {
    pub fn zeros(grid: PolarGrid) -> Self {
        let values = vec![0.0; grid.len()];
        PolarField { grid, values }
    }

    pub fn new(grid: PolarGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!("{} values for {} grid nodes", values.len(), grid.len())));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { time: 0.0, detail: format!("field value at flat index {k}") });
        }
        Ok(PolarField { grid, values })
    }

    pub fn from_fn(grid: PolarGrid, f: impl Fn(Point2) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.n_r() {
            for j in 0..grid.n_theta() {
                values.push(f(grid.node(i, j)));
            }
        }
        PolarField::new(grid, values)
    }

    pub fn grid(&self) -> &PolarGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.n_theta() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.grid.n_theta();
        &self.values[i * n..(i + 1) * n]
    }

    /// `∫ q dx` over the annulus.
    pub fn mass(&self) -> f64 {
        self.weighted_sum(|v| v)
    }

    /// `∫ q φ dx` for a test function `φ`.
    pub fn pair(&self, phi: impl Fn(Point2) -> f64) -> f64 {
        let w = self.grid.area_weights();
        let mut s = 0.0;
        for (i, wi) in w.iter().enumerate() {
            let row: f64 = (0..self.grid.n_theta()).map(|j| self.get(i, j) * phi(self.grid.node(i, j))).sum();
            s += wi * row;
        }
        s
    }

    pub fn l2_norm(&self) -> f64 {
        self.weighted_sum(|v| v * v).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn weighted_sum(&self, f: impl Fn(f64) -> f64) -> f64 {
        let w = self.grid.area_weights();
        w.iter().enumerate().map(|(i, wi)| wi * self.row(i).iter().map(|&v| f(v)).sum::<f64>()).sum()
    }

    pub fn sub(&self, other: &PolarField) -> Result<PolarField> {
        if self.grid != other.grid {
            return Err(Error::Mismatch("fields live on different grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(PolarField { grid: self.grid.clone(), values })
    }
}

/// Fourier coefficients `c_n(r_i)` for `n = 0..=n_max`, with
/// `q(r, θ) = Σ_{|n| ≤ n_max} c_n(r) e^{inθ}` and `c_{-n} = conj(c_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeCoefficients {
    pub n_max: usize,
    /// `modes[n][i]`
    pub modes: Vec<Vec<Complex64>>,
}

impl ModeCoefficients {
    pub fn zeros(n_max: usize, n_r: usize) -> Self {
        ModeCoefficients { n_max, modes: vec![vec![Complex64::new(0.0, 0.0); n_r]; n_max + 1] }
    }

    pub fn n_r(&self) -> usize {
        self.modes.first().map_or(0, Vec::len)
    }
}

/// Result of [`analyze`].
#[derive(Debug, Clone)]
pub struct Analysis {
    pub coefficients: ModeCoefficients,
    /// Fraction of the (area-weighted) energy in modes `|n| > n_max`.
    pub dropped_fraction: f64,
}

/// Energy fraction in truncated modes above which [`analyze`] logs a warning.
pub const ALIASING_THRESHOLD: f64 = 1e-8;

fn check_modes(n_theta: usize, n_max: usize) -> Result<()> {
    if n_theta < 2 * n_max + 2 {
        return Err(Error::InvalidParameter(format!(
            "n_theta = {n_theta} cannot resolve {n_max} modes (need n_theta >= 2N + 2)"
        )));
    }
    Ok(())
}

/// Discrete Fourier transform in θ at each radial node, truncated to `n_max` modes.
pub fn analyze(q: &PolarField, n_max: usize) -> Result<Analysis> {
    let grid = q.grid();
    let nt = grid.n_theta();
    check_modes(nt, n_max)?;
    let fft = FftPlanner::new().plan_fft_forward(nt);
    let weights = grid.radial().trapezoid_weights();
    let nodes = grid.radial().nodes();
    let mut coefficients = ModeCoefficients::zeros(n_max, grid.n_r());
    let mut kept = 0.0;
    let mut total = 0.0;
    let mut buf = vec![Complex64::new(0.0, 0.0); nt];
    let scale = 1.0 / nt as f64;
    for i in 0..grid.n_r() {
        for (b, &v) in buf.iter_mut().zip(q.row(i)) {
            *b = Complex64::new(v, 0.0);
        }
        fft.process(&mut buf);
        let w = weights[i] * nodes[i];
        for (k, b) in buf.iter().enumerate() {
            let e = (b * scale).norm_sqr() * w;
            total += e;
            let n = if k <= nt / 2 { k } else { nt - k };
            if n <= n_max && k != nt / 2 {
                kept += e;
            }
        }
        for n in 0..=n_max {
            coefficients.modes[n][i] = buf[n] * scale;
        }
    }
    let dropped_fraction = if total > 0.0 { ((total - kept) / total).max(0.0) } else { 0.0 };
    if dropped_fraction > ALIASING_THRESHOLD {
        log::warn!("{dropped_fraction:.3e} of the field energy lies above mode {n_max}; increase the mode count");
    }
    Ok(Analysis { coefficients, dropped_fraction })
}

/// Inverse of [`analyze`] onto `n_theta` equispaced angles per radial node.
pub fn synthesize(coefficients: &ModeCoefficients, n_theta: usize) -> Result<Vec<f64>> {
    check_modes(n_theta, coefficients.n_max)?;
    let fft = FftPlanner::new().plan_fft_inverse(n_theta);
    synthesize_with(coefficients, n_theta, &fft)
}

pub(crate) fn synthesize_with(
    coefficients: &ModeCoefficients,
    n_theta: usize,
    fft: &Arc<dyn rustfft::Fft<f64>>,
) -> Result<Vec<f64>> {
    let n_r = coefficients.n_r();
    let mut out = Vec::with_capacity(n_r * n_theta);
    let mut buf = vec![Complex64::new(0.0, 0.0); n_theta];
    for i in 0..n_r {
        buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
        buf[0] = Complex64::new(coefficients.modes[0][i].re, 0.0);
        for n in 1..=coefficients.n_max {
            let c = coefficients.modes[n][i];
            buf[n] = c;
            buf[n_theta - n] = c.conj();
        }
        fft.process(&mut buf);
        out.extend(buf.iter().map(|c| c.re));
    }
    Ok(out)
}
