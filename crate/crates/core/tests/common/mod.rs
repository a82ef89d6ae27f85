//! Reference values computed from integral representations, independent of
//! the series and continued-fraction code in the library.
#![allow(dead_code)]

use std::f64::consts::PI;

/// `K_ν(z) = ∫_0^∞ exp(-z cosh t) cosh(νt) dt` by the trapezoid rule, which
/// converges geometrically for this doubly-exponentially decaying integrand.
pub fn k_oracle(nu: f64, z: f64) -> f64 {
    let h = 1.0 / 256.0;
    let mut sum = 0.5 * (-z).exp();
    let mut t: f64 = h;
    loop {
        let term = (-z * t.cosh()).exp() * (nu * t).cosh();
        sum += term;
        if term < 1e-300 || (t > 1.0 && term < 1e-18 * sum) {
            break;
        }
        t += h;
    }
    sum * h
}

/// `I_n(z) = (1/π) ∫_0^π exp(z cos t) cos(nt) dt`, trapezoid on a periodic integrand.
pub fn i_oracle(n: u32, z: f64) -> f64 {
    let m = 4096;
    let h = PI / m as f64;
    let f = |t: f64| (z * t.cos()).exp() * (n as f64 * t).cos();
    let mut sum = 0.5 * (f(0.0) + f(PI));
    for j in 1..m {
        sum += f(j as f64 * h);
    }
    sum * h / PI
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

/// Five-point centered first derivative.
pub fn d1(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Five-point centered second derivative.
pub fn d2(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h * h)
}
