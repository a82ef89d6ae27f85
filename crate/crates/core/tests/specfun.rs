mod common;

use common::{d1, i_oracle, k_oracle, rel_err};
use proptest::prelude::*;
use vortexlab_core::specfun::*;
use vortexlab_core::Error;

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

#[test]
fn trivial_values() {
    assert_eq!(bessel_i(0, 0.0, Scaling::Unscaled).unwrap(), 1.0);
    assert_eq!(bessel_i(1, 0.0, Scaling::Unscaled).unwrap(), 0.0);
}

#[test]
fn i_matches_integral_representation() {
    for &z in &[1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 29.0, 30.0, 31.0] {
        assert!(rel_err(i0(z), i_oracle(0, z)) < 1e-12, "I0({z})");
        assert!(rel_err(i1(z), i_oracle(1, z)) < 1e-12, "I1({z})");
    }
    assert!(rel_err(i0(1.0), i_oracle(0, 1.0)) < 1e-13);
    // 1.2660658777520082 from the power series summed in extended precision
    assert!((i0(1.0) - 1.2660658777520082).abs() < 1e-12);
}

#[test]
fn k_matches_integral_representation() {
    for &z in &[1e-8, 1e-6, 1e-3, 0.1, 0.7, 1.0, 1.99, 2.0, 2.01, 5.0, 20.0, 100.0, 600.0] {
        assert!(rel_err(k0(z), k_oracle(0.0, z)) < 1e-12, "K0({z})");
        assert!(rel_err(k1(z), k_oracle(1.0, z)) < 1e-12, "K1({z})");
    }
}

#[test]
fn published_k_values() {
    let k01 = bessel_k(0, 1.0, Scaling::Unscaled).unwrap();
    assert!((k01 - 0.4210244382407083).abs() < 1e-12);
    // The tabulated K1(0.1) = 9.853844780870606; the integral oracle agrees.
    let k11 = bessel_k(1, 0.1, Scaling::Unscaled).unwrap();
    assert!(rel_err(k11, k_oracle(1.0, 0.1)) < 1e-12);
    assert!((k11 - 9.853844780870606).abs() < 1e-10);
}

#[test]
fn k_large_argument_asymptotic() {
    let z = 50.0;
    let lead = k0(z) * z.exp() * (2.0 * z / std::f64::consts::PI).sqrt();
    assert!((lead - 1.0).abs() < 1e-2);
    assert!(rel_err(bessel_k(0, 800.0, Scaling::Exponential).unwrap(), k0_scaled(800.0)) < 1e-15);
    assert_eq!(k0(800.0), 0.0);
}

#[test]
fn wronskian() {
    for z in log_grid(1e-6, 50.0, 200) {
        let w = i0(z) * k1(z) + i1(z) * k0(z);
        assert!(rel_err(w, 1.0 / z) < 1e-11, "z = {z}: {w}");
    }
}

#[test]
fn derivative_identities() {
    for &z in &[0.05, 0.3, 1.0, 1.9, 2.1, 4.0, 12.0, 29.5, 30.5] {
        let h = 1e-3 * z;
        assert!((d1(k0, z, h) + k1(z)).abs() < 1e-6 * k1(z).max(1.0), "K0' at {z}");
        assert!((d1(i0, z, h) - i1(z)).abs() < 1e-6 * i1(z).max(1.0), "I0' at {z}");
    }
}

#[test]
fn monotonicity() {
    let grid = log_grid(1e-6, 100.0, 2000);
    for w in grid.windows(2) {
        assert!(k0(w[1]) < k0(w[0]));
        assert!(k1(w[1]) < k1(w[0]));
        assert!(i0(w[1]) > i0(w[0]));
        assert!(i1(w[1]) > i1(w[0]));
    }
}

#[test]
fn domain_errors() {
    assert!(matches!(bessel_k(0, 0.0, Scaling::Unscaled), Err(Error::Domain { .. })));
    assert!(matches!(bessel_i(1, -0.5, Scaling::Unscaled), Err(Error::Domain { .. })));
    assert!(matches!(bessel_i(2, 0.5, Scaling::Unscaled), Err(Error::Domain { .. })));
}

#[test]
fn quadrature_examples() {
    let spec = QuadratureSpec::default();
    let v = integrate_radial(|s| s, 0.0, 1.0, &spec).unwrap();
    assert!((v - 0.5).abs() < 1e-14);
    let total = integrate_radial(|s| s * k0(s), 0.0, f64::INFINITY, &spec).unwrap();
    assert!((total - 1.0).abs() < 1e-12);
    let partial = integrate_radial(|s| s * k0(s), 0.0, 2.0, &spec).unwrap();
    assert!((partial - (1.0 - 2.0 * k_oracle(1.0, 2.0))).abs() < 1e-12);
}

#[test]
fn quadrature_reports_non_convergence() {
    let spec = QuadratureSpec::new(0.0, 1e-14, 3).unwrap();
    let r = integrate(|s: f64| (1.0 / s).sin() / s.sqrt(), 1e-6, 1.0, &spec);
    assert!(matches!(r, Err(Error::QuadratureNonConvergence { .. })));
    assert!(QuadratureSpec::new(0.0, 0.0, 10).is_err());
    assert!(QuadratureSpec::new(1e-10, 0.0, 0).is_err());
}

proptest! {
    #[test]
    fn one_minus_z_k1_is_consistent(z in 1e-6f64..50.0) {
        let direct = 1.0 - z * k1(z);
        prop_assert!((one_minus_z_k1(z) - direct).abs() < 1e-13);
        prop_assert!(one_minus_z_k1(z) > 0.0);
    }

    #[test]
    fn scaled_and_unscaled_agree(z in 0.01f64..600.0) {
        prop_assert!(rel_err(k0(z), k0_scaled(z) * (-z).exp()) < 1e-13);
        prop_assert!(rel_err(k1(z), k1_scaled(z) * (-z).exp()) < 1e-13);
    }
}
