mod common;

use std::f64::consts::{PI, TAU};

use common::{k_oracle, rel_err};
use proptest::prelude::*;
use vortexlab_core::kernels::*;
use vortexlab_core::specfun::{integrate_radial, QuadratureSpec};
use vortexlab_core::{FilterParams, Point2};

fn unit() -> FilterParams {
    FilterParams::plane(1.0, 0.0).unwrap()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

fn fd_jacobian(f: impl Fn(Point2) -> Point2, x: Point2, h: f64) -> [[f64; 2]; 2] {
    let e1 = Point2::new(h, 0.0);
    let e2 = Point2::new(0.0, h);
    let a = (f(x + e1) - f(x - e1)) * (0.5 / h);
    let b = (f(x + e2) - f(x - e2)) * (0.5 / h);
    [[a.x1, b.x1], [a.x2, b.x2]]
}

#[test]
fn g_alpha_has_unit_mass_and_log_singularity() {
    let spec = QuadratureSpec::default();
    for &alpha in &[0.25, 1.0, 3.0] {
        let p = FilterParams::plane(alpha, 0.0).unwrap();
        let m = integrate_radial(|s| s * g_alpha(s, &p).unwrap(), 0.0, f64::INFINITY, &spec).unwrap();
        assert!((TAU * m - 1.0).abs() < 1e-11);
        let r = 1e-12;
        let ratio = g_alpha(r, &p).unwrap() / (1.0 / r).ln();
        assert!((ratio * TAU * alpha - 1.0).abs() < 0.05, "{ratio}");
    }
    assert!((g_alpha(1.0, &unit()).unwrap() - k_oracle(0.0, 1.0) / TAU).abs() < 1e-13);
    assert!((g_alpha(1.0, &unit()).unwrap() - 0.067008).abs() < 5e-7);
    assert!(g_alpha(0.0, &unit()).is_err());
}

#[test]
fn bessel_mass_examples() {
    let p = unit();
    assert_eq!(bessel_mass(0.0, &p), 0.0);
    assert!((bessel_mass(1e6, &p) - 1.0 / TAU).abs() < 1e-15);
    let want = (1.0 - 0.1 * k_oracle(1.0, 0.1)) / TAU;
    assert!(rel_err(bessel_mass(0.1, &p), want) < 1e-12);
    assert!((bessel_mass(0.1, &p) - 0.002326).abs() < 5e-7);
    let spec = QuadratureSpec::new(0.0, 1e-13, 4000).unwrap();
    for &r in &[0.01, 0.1, 1.0, 5.0] {
        let q = integrate_radial(|s| s * g_alpha(s, &p).unwrap(), 0.0, r, &spec).unwrap();
        assert!(rel_err(bessel_mass(r, &p), q) < 1e-10, "r = {r}");
    }
    let grid = log_grid(1e-5, 40.0, 400);
    for w in grid.windows(2) {
        assert!(bessel_mass(w[1], &p) > bessel_mass(w[0], &p));
    }
}

#[test]
fn harmonic_field_examples() {
    let h = harmonic_field(Point2::new(1.0, 0.0)).unwrap();
    assert!(h.x1.abs() < 1e-16 && (h.x2 - 0.1591549).abs() < 1e-7);
    let h = harmonic_field(Point2::new(0.0, 2.0)).unwrap();
    assert!((h.x1 + 0.0795775).abs() < 1e-7 && h.x2.abs() < 1e-16);
    assert!(harmonic_field(Point2::ZERO).is_err());
    for &r in &[0.01, 1.0, 37.0] {
        let n = 64;
        let circ: f64 = (0..n)
            .map(|j| {
                let t = TAU * j as f64 / n as f64;
                let x = Point2::from_polar(r, t);
                harmonic_field(x).unwrap().dot(x.perp() * (1.0 / r)) * r * TAU / n as f64
            })
            .sum();
        assert!((circ - 1.0).abs() < 1e-13);
    }
}

#[test]
fn cutoff_field_examples() {
    assert_eq!(cutoff_field(Point2::new(0.5, 0.0)), Point2::ZERO);
    let c = cutoff_field(Point2::new(3.0, 0.0));
    assert!(c.x1.abs() < 1e-16 && (c.x2 - 0.0530516).abs() < 1e-7);
    for &(x1, x2) in &[(1.2, 0.3), (-0.7, 1.1), (1.4, -0.9), (0.2, -1.9)] {
        let j = fd_jacobian(cutoff_field, Point2::new(x1, x2), 1e-5);
        assert!((j[0][0] + j[1][1]).abs() < 1e-6);
    }
}

#[test]
fn k_alpha_examples() {
    let p = unit();
    assert_eq!(k_alpha(Point2::ZERO, &p), Point2::ZERO);
    let want = (1.0 - k_oracle(1.0, 1.0)) / TAU;
    assert!(rel_err(k_alpha_azimuthal(1.0, &p), want) < 1e-12);
    assert!((k_alpha_azimuthal(1.0, &p) - 0.063358).abs() < 5e-7);
    for &t in &[0.0, 1.0, 2.5] {
        let x = Point2::from_polar(20.0, t);
        assert!((k_alpha(x, &p) - harmonic_field(x).unwrap()).norm() < 1e-7);
    }
}

#[test]
fn gradient_matches_finite_differences() {
    for &alpha in &[0.3, 1.0, 2.0] {
        let p = FilterParams::plane(alpha, 0.0).unwrap();
        for &(x1, x2) in &[(0.3, 0.1), (-1.0, 2.0), (0.05, -0.02), (4.0, 3.0), (-0.7, -0.6)] {
            let x = Point2::new(x1, x2);
            let j = grad_k_alpha(x, &p).unwrap();
            let h = 1e-5 * x.norm();
            let fd = fd_jacobian(|y| k_alpha(y, &p), x, h);
            for i in 0..2 {
                for k in 0..2 {
                    assert!((j.0[i][k] - fd[i][k]).abs() < 1e-6, "{x:?} [{i}][{k}]");
                }
            }
            assert!(j.trace().abs() < 1e-14 * j.frobenius().max(1.0));
        }
    }
    assert!(grad_k_alpha(Point2::ZERO, &unit()).is_err());
}

#[test]
fn kernel_bounds_on_log_grid() {
    let p = unit();
    let mut max_shear = 0.0f64;
    let mut max_strain = 0.0f64;
    let mut max_decay = 0.0f64;
    let mut max_small = 0.0f64;
    let mut max_grad_log = 0.0f64;
    for r in log_grid(1e-5, 50.0, 300) {
        for &t in &[0.3, 1.1, 2.0] {
            let x = Point2::from_polar(r, t);
            let k = k_alpha(x, &p).norm();
            max_decay = max_decay.max(k * (1.0 + r));
            if r < 0.5 {
                max_small = max_small.max(k / (r * r.ln().abs()));
                if r >= 1e-4 {
                    let g = grad_k_alpha(x, &p).unwrap().frobenius();
                    max_grad_log = max_grad_log.max(g / r.ln().abs());
                }
            }
            if (1e-4..=30.0).contains(&r) {
                let j = grad_k_alpha(x, &p).unwrap();
                max_shear = max_shear.max(j.shear().abs());
                max_strain = max_strain.max(j.strain().abs());
            }
        }
    }
    // G_α is log-singular at 0, so the shear tends to the finite value 1/(4πα).
    for v in [max_shear, max_strain, max_decay, max_small, max_grad_log] {
        assert!(v.is_finite() && v < 1.0, "{v}");
    }
    assert!(max_shear <= 1.0 / (4.0 * PI) + 1e-9);
}

#[test]
fn image_kernel_properties() {
    let x = Point2::new(0.7, -0.4);
    let y = Point2::new(-0.3, 1.2);
    let d = x - y;
    let free = d.perp() * (1.0 / (TAU * d.norm_sq()));
    // The image term tends to -H(x), so the unit point mass carries the harmonic
    // field with it in the limit.
    let limit = image_kernel(x, y, 1e-6).unwrap() + harmonic_field(x).unwrap();
    assert!((limit - free).norm() < 1e-4);
    assert!((image_kernel(x, y, 1e-6).unwrap() - free).norm() > 0.1);
    assert_eq!(image_kernel(x, y, 0.0).unwrap(), free);
    for j in 0..16 {
        let eps = 0.3;
        let xb = Point2::from_polar(eps, TAU * j as f64 / 16.0);
        let yb = Point2::from_polar(0.9 + 0.1 * j as f64, 0.37 * j as f64);
        let k = image_kernel(xb, yb, eps).unwrap();
        assert!(k.dot(xb * (1.0 / eps)).abs() < 1e-10);
    }
    assert!(image_kernel(Point2::new(0.1, 0.0), y, 0.2).is_err());
    assert!(image_kernel(y, y, 0.2).is_err());
}

proptest! {
    #[test]
    fn image_kernel_far_bound(
        ry in 0.2f64..2.0, ty in 0.0f64..TAU,
        scale in 2.01f64..20.0, tx in 0.0f64..TAU,
        eps in 0.01f64..0.19,
    ) {
        let y = Point2::from_polar(ry, ty);
        let x = Point2::from_polar(ry * scale, tx);
        let k = image_kernel(x, y, eps).unwrap().norm();
        prop_assert!(k <= 4.0 * ry / (PI * x.norm_sq()));
    }

    #[test]
    fn k_alpha_is_odd(x1 in -10.0f64..10.0, x2 in -10.0f64..10.0, alpha in 0.1f64..4.0) {
        let p = FilterParams::plane(alpha, 0.0).unwrap();
        let x = Point2::new(x1, x2);
        prop_assert_eq!(k_alpha(-x, &p), -k_alpha(x, &p));
    }
}
