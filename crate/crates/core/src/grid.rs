//! Graded radial grids and second-order finite differences on them.

use std::ops::{Add, Mul};

use crate::banded::BandMatrix;
use crate::error::{Error, Result};

/// Strictly increasing radial nodes `r_0 < r_1 < ... < r_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
}

impl RadialGrid {
    /// `r_i = r_min + (r_max - r_min) (i/(n-1))^grading`, clustering nodes near `r_min`.
    pub fn graded(r_min: f64, r_max: f64, n: usize, grading: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 radial nodes, got {n}")));
        }
        if !(r_min.is_finite() && r_max.is_finite() && r_min >= 0.0 && r_min < r_max) {
            return Err(Error::InvalidGrid(format!("need 0 <= r_min < r_max, got [{r_min}, {r_max}]")));
        }
        if !(grading >= 1.0) || !grading.is_finite() {
            return Err(Error::InvalidGrid(format!("grading exponent must be >= 1, got {grading}")));
        }
        let span = r_max - r_min;
        let last = (n - 1) as f64;
        let mut nodes: Vec<f64> = (0..n).map(|i| r_min + span * (i as f64 / last).powf(grading)).collect();
        nodes[0] = r_min;
        nodes[n - 1] = r_max;
        RadialGrid::from_nodes(nodes)
    }

    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::InvalidGrid("need at least 3 radial nodes".into()));
        }
        if nodes.iter().any(|r| !r.is_finite()) || nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid("radial nodes must be finite and strictly increasing".into()));
        }
        Ok(RadialGrid { nodes })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.nodes[0]
    }

    pub fn last(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn min_spacing(&self) -> f64 {
        self.nodes.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    /// Index `i` with `r_i <= r <= r_{i+1}`, or `None` outside the grid.
    pub fn locate(&self, r: f64) -> Option<usize> {
        let n = self.nodes.len();
        if !(r >= self.nodes[0] && r <= self.nodes[n - 1]) {
            return None;
        }
        let i = self.nodes.partition_point(|&x| x <= r);
        Some(i.saturating_sub(1).min(n - 2))
    }

    /// Three-point weights `(d1, d2)` for the first and second derivative at interior node `i`.
    pub fn interior_stencil(&self, i: usize) -> ([f64; 3], [f64; 3]) {
        let r = &self.nodes;
        let hm = r[i] - r[i - 1];
        let hp = r[i + 1] - r[i];
        let s = hm + hp;
        let d1 = [-hp / (hm * s), (hp - hm) / (hm * hp), hm / (hp * s)];
        let d2 = [2.0 / (hm * s), -2.0 / (hm * hp), 2.0 / (hp * s)];
        (d1, d2)
    }

    /// One-sided second-order first-derivative weights at the left end (nodes 0, 1, 2).
    pub fn left_derivative_weights(&self) -> [f64; 3] {
        let r = &self.nodes;
        one_sided(r[1] - r[0], r[2] - r[0])
    }

    /// One-sided weights at the right end (nodes n-1, n-2, n-3).
    pub fn right_derivative_weights(&self) -> [f64; 3] {
        let r = &self.nodes;
        let n = r.len();
        one_sided(r[n - 2] - r[n - 1], r[n - 3] - r[n - 1])
    }

    /// Second-order derivative of nodal values (one-sided at both ends).
    pub fn derivative<T>(&self, v: &[T]) -> Vec<T>
    where
        T: Copy + Add<Output = T> + Mul<f64, Output = T>,
    {
        let n = self.nodes.len();
        assert_eq!(v.len(), n);
        let mut out = Vec::with_capacity(n);
        let l = self.left_derivative_weights();
        out.push(v[0] * l[0] + v[1] * l[1] + v[2] * l[2]);
        for i in 1..n - 1 {
            let (d1, _) = self.interior_stencil(i);
            out.push(v[i - 1] * d1[0] + v[i] * d1[1] + v[i + 1] * d1[2]);
        }
        let rw = self.right_derivative_weights();
        out.push(v[n - 1] * rw[0] + v[n - 2] * rw[1] + v[n - 3] * rw[2]);
        out
    }

    /// Trapezoid weights for `∫ f dr` over the grid.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let r = &self.nodes;
        let n = r.len();
        let mut w = vec![0.0; n];
        for i in 0..n - 1 {
            let h = 0.5 * (r[i + 1] - r[i]);
            w[i] += h;
            w[i + 1] += h;
        }
        w
    }

    /// Builds the band matrix of `c_id u + c_lap (u'' + u'/r - n² u/r²)` on the
    /// interior rows. Rows 0 and n-1 are left empty for boundary conditions;
    /// the matrix has two sub-diagonals so the right row can hold a one-sided
    /// derivative.
    pub fn mode_operator(&self, n_mode: usize, c_id: f64, c_lap: f64) -> BandMatrix {
        let len = self.nodes.len();
        let mut m = BandMatrix::zeros(len, 2, 1);
        let n2 = (n_mode * n_mode) as f64;
        for i in 1..len - 1 {
            let r = self.nodes[i];
            let (d1, d2) = self.interior_stencil(i);
            for k in 0..3 {
                let mut c = c_lap * (d2[k] + d1[k] / r);
                if k == 1 {
                    c += c_id - c_lap * n2 / (r * r);
                }
                m.set(i, i + k - 1, c);
            }
        }
        m
    }

    /// Applies the interior part of [`RadialGrid::mode_operator`] to `v`.
    pub fn apply_mode_operator(&self, n_mode: usize, c_id: f64, c_lap: f64, v: &[f64]) -> Vec<f64> {
        let len = self.nodes.len();
        let n2 = (n_mode * n_mode) as f64;
        let mut out = vec![0.0; len];
        for i in 1..len - 1 {
            let r = self.nodes[i];
            let (d1, d2) = self.interior_stencil(i);
            let lap = (0..3).map(|k| (d2[k] + d1[k] / r) * v[i + k - 1]).sum::<f64>() - n2 / (r * r) * v[i];
            out[i] = c_id * v[i] + c_lap * lap;
        }
        out
    }

    /// Sets row 0 to the Dirichlet condition `u(r_0) = value` (value goes in the rhs).
    pub fn dirichlet_left(m: &mut BandMatrix) {
        m.set(0, 0, 1.0);
    }

    /// Sets the last row to `u'(r_max) - kappa u(r_max)` (rhs supplied by the caller).
    pub fn robin_right(&self, m: &mut BandMatrix, kappa: f64) {
        let n = self.nodes.len();
        let w = self.right_derivative_weights();
        m.set(n - 1, n - 1, w[0] - kappa);
        m.set(n - 1, n - 2, w[1]);
        m.set(n - 1, n - 3, w[2]);
    }

    /// Sets the last row to the Dirichlet condition `u(r_max) = value`.
    pub fn dirichlet_right(&self, m: &mut BandMatrix) {
        let n = self.nodes.len();
        m.set(n - 1, n - 1, 1.0);
    }
}

fn one_sided(h1: f64, h2: f64) -> [f64; 3] {
    [-(h1 + h2) / (h1 * h2), h2 / (h1 * (h2 - h1)), -h1 / (h2 * (h2 - h1))]
}
