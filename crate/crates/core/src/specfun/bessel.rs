//! Modified Bessel functions of orders 0 and 1 for real non-negative argument.
//!
//! `I_n` uses the power series up to `SERIES_I_MAX` and the Hankel asymptotic
//! expansion beyond. `K_n` uses the logarithmic power series up to
//! `SERIES_K_MAX` and Steed's continued fraction (Thompson-Barnett form) beyond.
//! Every routine has a scaled companion that strips the exponential factor.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Crossover between the `I_n` power series and the asymptotic expansion.
pub const SERIES_I_MAX: f64 = 30.0;

/// Crossover between the `K_n` power series and the continued fraction.
pub const SERIES_K_MAX: f64 = 2.0;

/// Order of a modified Bessel function. Only orders 0 and 1 are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselOrder {
    Zero,
    One,
}

impl TryFrom<u32> for BesselOrder {
    type Error = Error;

    fn try_from(order: u32) -> Result<Self> {
        match order {
            0 => Ok(BesselOrder::Zero),
            1 => Ok(BesselOrder::One),
            n => Err(Error::domain("bessel", format!("unsupported order {n}, only 0 and 1 are implemented"))),
        }
    }
}

/// Whether to return the bare value or the exponentially scaled one
/// (`e^{-z} I_n(z)` and `e^{z} K_n(z)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scaling {
    #[default]
    Unscaled,
    Exponential,
}

/// `I_order(z)`, checked.
pub fn bessel_i(order: u32, z: f64, scaling: Scaling) -> Result<f64> {
    let order = BesselOrder::try_from(order)?;
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::domain("bessel_i", format!("argument must be finite and non-negative, got {z}")));
    }
    Ok(match (order, scaling) {
        (BesselOrder::Zero, Scaling::Unscaled) => i0(z),
        (BesselOrder::One, Scaling::Unscaled) => i1(z),
        (BesselOrder::Zero, Scaling::Exponential) => i0_scaled(z),
        (BesselOrder::One, Scaling::Exponential) => i1_scaled(z),
    })
}

/// `K_order(z)`, checked.
pub fn bessel_k(order: u32, z: f64, scaling: Scaling) -> Result<f64> {
    let order = BesselOrder::try_from(order)?;
    if !(z > 0.0) || z.is_nan() {
        return Err(Error::domain("bessel_k", format!("argument must be positive, got {z}")));
    }
    Ok(match (order, scaling) {
        (BesselOrder::Zero, Scaling::Unscaled) => k0(z),
        (BesselOrder::One, Scaling::Unscaled) => k1(z),
        (BesselOrder::Zero, Scaling::Exponential) => k0_scaled(z),
        (BesselOrder::One, Scaling::Exponential) => k1_scaled(z),
    })
}

// Power series of I_0 and I_1. All terms are positive, so summation is
// stable for any argument; the cost grows linearly with z.
fn i_series(z: f64) -> (f64, f64) {
    let y = 0.25 * z * z;
    let mut t0 = 1.0;
    let mut t1 = 1.0;
    let mut s0 = 1.0;
    let mut s1 = 1.0;
    let mut k = 1.0;
    loop {
        t0 *= y / (k * k);
        t1 *= y / (k * (k + 1.0));
        s0 += t0;
        s1 += t1;
        if t0 <= 1e-17 * s0 && t1 <= 1e-17 * s1 {
            break;
        }
        k += 1.0;
    }
    (s0, 0.5 * z * s1)
}

// Hankel expansion of e^{-z} I_n(z), valid for large z.
fn i_asymptotic_scaled(mu: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = -term * (mu - odd * odd) / (8.0 * kf * z);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * PI * z).sqrt()
}

pub fn i0(z: f64) -> f64 {
    if z <= SERIES_I_MAX {
        i_series(z).0
    } else {
        i_asymptotic_scaled(0.0, z) * z.exp()
    }
}

pub fn i1(z: f64) -> f64 {
    if z <= SERIES_I_MAX {
        i_series(z).1
    } else {
        i_asymptotic_scaled(4.0, z) * z.exp()
    }
}

pub fn i0_scaled(z: f64) -> f64 {
    if z <= SERIES_I_MAX {
        i_series(z).0 * (-z).exp()
    } else {
        i_asymptotic_scaled(0.0, z)
    }
}

pub fn i1_scaled(z: f64) -> f64 {
    if z <= SERIES_I_MAX {
        i_series(z).1 * (-z).exp()
    } else {
        i_asymptotic_scaled(4.0, z)
    }
}

// Returns (K0, K1, 1 - z K1) from the logarithmic series, z <= SERIES_K_MAX.
fn k_series(z: f64) -> (f64, f64, f64) {
    let y = 0.25 * z * z;
    let log_half = (0.5 * z).ln();
    let (i0v, i1v) = i_series(z);

    // K0 = -(ln(z/2) + gamma) I0 + sum_{k>=1} H_k y^k / (k!)^2
    // The psi sum for K1 uses psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma.
    let mut t0 = 1.0; // y^k / (k!)^2
    let mut t1 = 1.0; // y^k / (k! (k+1)!)
    let mut harmonic = 0.0;
    let mut s0 = 0.0;
    let mut s1 = 1.0 - 2.0 * EULER_GAMMA;
    let mut k = 1.0;
    loop {
        t0 *= y / (k * k);
        t1 *= y / (k * (k + 1.0));
        harmonic += 1.0 / k;
        let d0 = harmonic * t0;
        let d1 = (2.0 * harmonic + 1.0 / (k + 1.0) - 2.0 * EULER_GAMMA) * t1;
        s0 += d0;
        s1 += d1;
        if d0.abs() <= 1e-17 * s0.abs() && d1.abs() <= 1e-17 * s1.abs() {
            break;
        }
        k += 1.0;
    }
    let k0v = -(log_half + EULER_GAMMA) * i0v + s0;
    let one_minus_zk1 = -z * log_half * i1v + y * s1;
    let k1v = (1.0 - one_minus_zk1) / z;
    (k0v, k1v, one_minus_zk1)
}

// Steed's continued fraction for e^{z} K0 and e^{z} K1, z > SERIES_K_MAX.
fn k_steed_scaled(z: f64) -> (f64, f64) {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + z);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0s = (PI / (2.0 * z)).sqrt() / s;
    let k1s = k0s * (z + 0.5 - h) / z;
    (k0s, k1s)
}

pub fn k0(z: f64) -> f64 {
    if z <= SERIES_K_MAX {
        k_series(z).0
    } else {
        k_steed_scaled(z).0 * (-z).exp()
    }
}

pub fn k1(z: f64) -> f64 {
    if z <= SERIES_K_MAX {
        k_series(z).1
    } else {
        k_steed_scaled(z).1 * (-z).exp()
    }
}

pub fn k0_scaled(z: f64) -> f64 {
    if z <= SERIES_K_MAX {
        k_series(z).0 * z.exp()
    } else {
        k_steed_scaled(z).0
    }
}

pub fn k1_scaled(z: f64) -> f64 {
    if z <= SERIES_K_MAX {
        k_series(z).1 * z.exp()
    } else {
        k_steed_scaled(z).1
    }
}

/// `1 - z K1(z)` without cancellation for small `z`; `1` at `z = 0`.
///
/// This is `2π` times the Bessel-potential mass inside radius `z` (unit filter).
pub fn one_minus_z_k1(z: f64) -> f64 {
    if z <= 0.0 {
        0.0
    } else if z <= SERIES_K_MAX {
        k_series(z).2
    } else {
        1.0 - z * k1(z)
    }
}

/// `K_n(z)` for integer `n >= 0` by upward recurrence from `K0`, `K1`,
/// in scaled form (`e^{z} K_n(z)`). Upward recurrence is stable for `K`.
pub fn kn_scaled_sequence(n_max: usize, z: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut km = k0_scaled(z);
    out.push(km);
    if n_max == 0 {
        return out;
    }
    let mut k = k1_scaled(z);
    out.push(k);
    for n in 1..n_max {
        let kp = km + 2.0 * n as f64 / z * k;
        km = k;
        k = kp;
        out.push(k);
    }
    out
}

/// Logarithmic derivative `K_n'(z) / K_n(z)` for `n = 0..=n_max`.
///
/// Works with the ratios `K_{n-1}/K_n`, so it stays finite where `K_n` itself overflows.
pub fn kn_log_derivative(n_max: usize, z: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let (k0, k1) = (k0_scaled(z), k1_scaled(z));
    out.push(-k1 / k0);
    let mut ratio = k0 / k1;
    for n in 1..=n_max {
        out.push(-ratio - n as f64 / z);
        ratio = 1.0 / (ratio + 2.0 * n as f64 / z);
    }
    out
}
