//! Closed-form fields of the filtered Biot-Savart law in the plane and in the
//! exterior of a centered disk.
//!
//! The Bessel potential is fixed as `G_α(x) = K0(|x|/√α) / (2πα)`, the radial
//! fundamental solution of `1 - αΔ` with unit mass. Its Biot-Savart kernel is
//! `K^α(x) = x⊥/|x|² · M(|x|)` with `M(r) = ∫_0^r s g_α(s) ds`.

use std::f64::consts::TAU;

mod table;

pub use table::KernelTable;

use crate::error::{Error, Result};
use crate::geometry::{Jacobian, Point2};
use crate::specfun::{k0, one_minus_z_k1};

/// Filter length² `alpha`, obstacle radius `eps`, boundary circulation `gamma`
/// of the unfiltered velocity, and vorticity mass `m` of the initial data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterParams {
    pub alpha: f64,
    pub eps: f64,
    pub gamma: f64,
    pub m: f64,
}

impl FilterParams {
    pub fn new(alpha: f64, eps: f64, gamma: f64, m: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        if !(eps >= 0.0) || !eps.is_finite() {
            return Err(Error::InvalidParameter(format!("eps must be non-negative, got {eps}")));
        }
        if !gamma.is_finite() || !m.is_finite() {
            return Err(Error::InvalidParameter("gamma and m must be finite".into()));
        }
        Ok(FilterParams { alpha, eps, gamma, m })
    }

    /// Parameters for the full-plane limit problem (`eps = 0`).
    pub fn plane(alpha: f64, gamma: f64) -> Result<Self> {
        FilterParams::new(alpha, 0.0, gamma, 0.0)
    }

    pub fn with_eps(self, eps: f64) -> Result<Self> {
        FilterParams::new(self.alpha, eps, self.gamma, self.m)
    }

    pub fn with_mass(self, m: f64) -> Result<Self> {
        FilterParams::new(self.alpha, self.eps, self.gamma, m)
    }

    /// Coefficient `γ + m` of the harmonic field in the exterior Biot-Savart law.
    pub fn beta(&self) -> f64 {
        self.gamma + self.m
    }

    pub fn sqrt_alpha(&self) -> f64 {
        self.alpha.sqrt()
    }
}

/// Radial profile `g_α(r)` of the Bessel potential.
pub fn g_alpha(r: f64, params: &FilterParams) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain("g_alpha", format!("radius must be positive, got {r}")));
    }
    Ok(g_alpha_unchecked(r, params.alpha))
}

pub(crate) fn g_alpha_unchecked(r: f64, alpha: f64) -> f64 {
    k0(r / alpha.sqrt()) / (TAU * alpha)
}

/// `∫_0^r s g_α(s) ds = (1 - z K1(z)) / 2π` with `z = r/√α`.
pub fn bessel_mass(r: f64, params: &FilterParams) -> f64 {
    bessel_mass_alpha(r, params.alpha)
}

pub(crate) fn bessel_mass_alpha(r: f64, alpha: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let z = r / alpha.sqrt();
    if z > 700.0 {
        return 1.0 / TAU;
    }
    one_minus_z_k1(z) / TAU
}

/// `H(x) = x⊥ / (2π|x|²)`.
pub fn harmonic_field(x: Point2) -> Result<Point2> {
    let r2 = x.norm_sq();
    if r2 == 0.0 {
        return Err(Error::domain("harmonic_field", "undefined at the origin"));
    }
    Ok(x.perp() * (1.0 / (TAU * r2)))
}

fn psi(s: f64) -> f64 {
    if s <= 1e-3 {
        0.0
    } else {
        (-1.0 / s).exp()
    }
}

fn psi_d1(s: f64) -> f64 {
    if s <= 1e-3 {
        0.0
    } else {
        psi(s) / (s * s)
    }
}

fn psi_d2(s: f64) -> f64 {
    if s <= 1e-3 {
        0.0
    } else {
        psi(s) * (1.0 - 2.0 * s) / s.powi(4)
    }
}

/// Smooth radial cutoff `η(r)`: zero for `r ≤ 1`, one for `r ≥ 2`.
pub fn cutoff(r: f64) -> f64 {
    cutoff_with_derivatives(r).0
}

/// `(η, η', η'')` at radius `r`.
pub fn cutoff_with_derivatives(r: f64) -> (f64, f64, f64) {
    if r <= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    if r >= 2.0 {
        return (1.0, 0.0, 0.0);
    }
    let (a, a1, a2) = (psi(r - 1.0), psi_d1(r - 1.0), psi_d2(r - 1.0));
    let (b, b1, b2) = (psi(2.0 - r), -psi_d1(2.0 - r), psi_d2(2.0 - r));
    let d = a + b;
    let d1 = a1 + b1;
    let d2 = a2 + b2;
    let eta = a / d;
    let num1 = a1 * d - a * d1;
    let eta1 = num1 / (d * d);
    let eta2 = (a2 * d - a * d2) / (d * d) - 2.0 * d1 * num1 / (d * d * d);
    (eta, eta1, eta2)
}

/// `H_cut(x) = η(|x|) H(x)`; identically zero on `|x| ≤ 1`.
pub fn cutoff_field(x: Point2) -> Point2 {
    let r = x.norm();
    let eta = cutoff(r);
    if eta == 0.0 {
        return Point2::ZERO;
    }
    x.perp() * (eta / (TAU * r * r))
}

/// Azimuthal component `k(r) = M(r)/r` of the filtered kernel; `k(0) = 0`.
pub fn k_alpha_azimuthal(r: f64, params: &FilterParams) -> f64 {
    k_azimuthal_alpha(r, params.alpha)
}

pub(crate) fn k_azimuthal_alpha(r: f64, alpha: f64) -> f64 {
    if r <= 0.0 {
        0.0
    } else {
        bessel_mass_alpha(r, alpha) / r
    }
}

/// Filtered Biot-Savart kernel `K^α(x) = G_α * H`, continuous with `K^α(0) = 0`.
pub fn k_alpha(x: Point2, params: &FilterParams) -> Point2 {
    k_alpha_with(x, params.alpha)
}

#[inline]
pub(crate) fn k_alpha_with(x: Point2, alpha: f64) -> Point2 {
    let r2 = x.norm_sq();
    if r2 == 0.0 {
        return Point2::ZERO;
    }
    x.perp() * (bessel_mass_alpha(r2.sqrt(), alpha) / r2)
}

/// Jacobian of `K^α`, differentiated from the radial formula.
pub fn grad_k_alpha(x: Point2, params: &FilterParams) -> Result<Jacobian> {
    let r2 = x.norm_sq();
    if r2 == 0.0 {
        return Err(Error::domain("grad_k_alpha", "the gradient is log-singular at the origin"));
    }
    let r = r2.sqrt();
    let mass = bessel_mass(r, params);
    let g = g_alpha_unchecked(r, params.alpha);
    let phi = mass / r2;
    // φ'(r)/r with φ = M/r², M' = r g
    let dphi_over_r = g / r2 - 2.0 * mass / (r2 * r2);
    let (x1, x2) = (x.x1, x.x2);
    Ok(Jacobian([
        [-x1 * x2 * dphi_over_r, -phi - x2 * x2 * dphi_over_r],
        [phi + x1 * x1 * dphi_over_r, x1 * x2 * dphi_over_r],
    ]))
}

/// Radial factor of the shear `∂2K1 + ∂1K2 = (x1² - x2²)/|x|² · (g_α - 2M/|x|²)`.
pub fn shear_factor(r: f64, params: &FilterParams) -> f64 {
    g_alpha_unchecked(r, params.alpha) - 2.0 * bessel_mass(r, params) / (r * r)
}

/// One row of the kernel bound table at radius `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSample {
    pub r: f64,
    pub g_alpha: f64,
    pub k_theta: f64,
    /// `|K^α|/(r |log r|)` below `r = 1/2`; beyond, the denominator is frozen at its value at 1/2.
    pub bound_a_ratio: f64,
    /// `|K^α| (1 + r)`.
    pub bound_b_ratio: f64,
    /// `max_θ |∂2K1 + ∂1K2|` on the circle of radius `r`.
    pub cross_deriv: f64,
}

/// Kernel magnitudes and bound ratios at radius `r > 0`.
pub fn bound_sample(r: f64, params: &FilterParams) -> Result<BoundSample> {
    let g = g_alpha(r, params)?;
    let k = k_alpha_azimuthal(r, params);
    let log_scale = if r < 0.5 { r * r.ln().abs() } else { 0.5 * std::f64::consts::LN_2 };
    Ok(BoundSample {
        r,
        g_alpha: g,
        k_theta: k,
        bound_a_ratio: k.abs() / log_scale,
        bound_b_ratio: k.abs() * (1.0 + r),
        cross_deriv: shear_factor(r, params).abs(),
    })
}

/// [`bound_sample`] on `n` log-spaced radii from `r_min` to `r_max`.
pub fn bound_table(r_min: f64, r_max: f64, n: usize, params: &FilterParams) -> Result<Vec<BoundSample>> {
    if !(r_min > 0.0 && r_max >= r_min && r_max.is_finite()) || n == 0 {
        return Err(Error::domain("bound_table", "need 0 < r_min <= r_max and at least one sample"));
    }
    let step = if n > 1 { (r_max / r_min).ln() / (n - 1) as f64 } else { 0.0 };
    (0..n).map(|i| bound_sample(r_min * (step * i as f64).exp(), params)).collect()
}

/// Biot-Savart kernel of the exterior of the disk `|x| ≤ eps` with Dirichlet
/// stream function, obtained from the free-space kernel and the image point
/// `eps² y/|y|²`.
pub fn image_kernel(x: Point2, y: Point2, eps: f64) -> Result<Point2> {
    if !(eps >= 0.0) {
        return Err(Error::domain("image_kernel", format!("eps must be non-negative, got {eps}")));
    }
    let slack = 1e-12 * eps;
    if x.norm() < eps - slack || y.norm() < eps - slack {
        return Err(Error::domain("image_kernel", "points must lie outside the obstacle"));
    }
    let d = x - y;
    if d.norm_sq() == 0.0 {
        return Err(Error::domain("image_kernel", "kernel is singular at x = y"));
    }
    let direct = d.perp() * (1.0 / (TAU * d.norm_sq()));
    if eps == 0.0 {
        return Ok(direct);
    }
    let y2 = y.norm_sq();
    let image = x - y * (eps * eps / y2);
    let ni = image.norm_sq();
    if ni == 0.0 {
        return Ok(Point2::ZERO);
    }
    Ok(direct - image.perp() * (1.0 / (TAU * ni)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> FilterParams {
        FilterParams::plane(1.0, 0.0).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(FilterParams::new(0.0, 0.1, 0.0, 0.0).is_err());
        assert!(FilterParams::new(1.0, -0.1, 0.0, 0.0).is_err());
        assert!(FilterParams::new(1.0, 0.1, f64::NAN, 0.0).is_err());
        let p = FilterParams::new(1.0, 0.1, 0.5, 0.25).unwrap();
        assert_eq!(p.beta(), 0.75);
    }

    #[test]
    fn harmonic_field_values() {
        let h = harmonic_field(Point2::new(1.0, 0.0)).unwrap();
        assert!((h.x2 - 0.159_154_943_091_895_35).abs() < 1e-15 && h.x1 == 0.0);
        let h = harmonic_field(Point2::new(0.0, 2.0)).unwrap();
        assert!((h.x1 + 0.079_577_471_545_947_67).abs() < 1e-15);
        assert!(harmonic_field(Point2::ZERO).is_err());
    }

    #[test]
    fn cutoff_regions() {
        assert_eq!(cutoff_field(Point2::new(0.5, 0.0)), Point2::ZERO);
        let c = cutoff_field(Point2::new(3.0, 0.0));
        assert!((c.x2 - 1.0 / (TAU * 3.0)).abs() < 1e-15);
        assert!((cutoff(1.5) - 0.5).abs() < 1e-15);
        let mut prev = 0.0;
        for i in 0..=100 {
            let e = cutoff(1.0 + i as f64 / 100.0);
            assert!(e >= prev);
            prev = e;
        }
    }

    #[test]
    fn cutoff_derivatives_match_differences() {
        for &r in &[1.1, 1.3, 1.5, 1.77, 1.95] {
            let h = 1e-5;
            let (_, d1, d2) = cutoff_with_derivatives(r);
            let fd1 = (cutoff(r + h) - cutoff(r - h)) / (2.0 * h);
            let fd2 = (cutoff(r + h) - 2.0 * cutoff(r) + cutoff(r - h)) / (h * h);
            assert!((d1 - fd1).abs() < 1e-7, "{r}: {d1} vs {fd1}");
            assert!((d2 - fd2).abs() < 1e-3 * (1.0 + d2.abs()), "{r}: {d2} vs {fd2}");
        }
    }

    #[test]
    fn k_alpha_is_odd_and_vanishes_at_origin() {
        let p = unit();
        assert_eq!(k_alpha(Point2::ZERO, &p), Point2::ZERO);
        let x = Point2::new(0.3, -1.7);
        assert_eq!(k_alpha(-x, &p), -k_alpha(x, &p));
    }

    #[test]
    fn image_kernel_domain() {
        let eps = 0.1;
        assert!(image_kernel(Point2::new(0.05, 0.0), Point2::new(1.0, 0.0), eps).is_err());
        assert!(image_kernel(Point2::new(1.0, 0.0), Point2::new(1.0, 0.0), eps).is_err());
        assert!(image_kernel(Point2::new(1.0, 0.0), Point2::new(0.0, 0.01), eps).is_err());
    }
}
