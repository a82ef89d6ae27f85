use std::f64::consts::TAU;

use super::k_alpha_with;
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::specfun::{k0, one_minus_z_k1};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_TERMS: usize = 13;
const TABLE_START: f64 = 2.0;
const TABLE_END: f64 = 40.0;
const TABLE_STEP: f64 = 0.005;

/// Fast evaluation of `K^α(x) = x⊥ M(|x|)/|x|²` for the O(N²) particle sums.
///
/// For `|x| ≤ 2√α` the factor `M/|x|²` is a power series in `u = |x|²/(4α)`
/// plus `ln u` times another series, which avoids the square root and the
/// Bessel evaluation. Between `2√α` and `40√α` it uses a cubic Hermite table
/// of `1 - zK1(z)`; beyond that the kernel equals `H` to double precision.
#[derive(Debug, Clone)]
pub struct KernelTable {
    alpha: f64,
    inv_sqrt_alpha: f64,
    series_p: [f64; SERIES_TERMS],
    series_q: [f64; SERIES_TERMS],
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl KernelTable {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        let mut series_p = [0.0; SERIES_TERMS];
        let mut series_q = [0.0; SERIES_TERMS];
        let mut c = 1.0;
        let mut harmonic = 0.0;
        for k in 0..SERIES_TERMS {
            if k > 0 {
                c /= (k * (k + 1)) as f64;
                harmonic += 1.0 / k as f64;
            }
            // ψ(k+1) + ψ(k+2) = 2H_k + 1/(k+1) - 2γ
            let digammas = 2.0 * harmonic + 1.0 / (k + 1) as f64 - 2.0 * EULER_GAMMA;
            series_p[k] = c;
            series_q[k] = c * digammas;
        }
        let n = ((TABLE_END - TABLE_START) / TABLE_STEP).round() as usize + 1;
        let mut values = Vec::with_capacity(n);
        let mut slopes = Vec::with_capacity(n);
        for i in 0..n {
            let z = TABLE_START + i as f64 * TABLE_STEP;
            values.push(one_minus_z_k1(z));
            slopes.push(z * k0(z));
        }
        Ok(KernelTable { alpha, inv_sqrt_alpha: 1.0 / alpha.sqrt(), series_p, series_q, values, slopes })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `M(r)/r²` as a function of `r²`.
    #[inline]
    pub fn profile(&self, r2: f64) -> f64 {
        let u = 0.25 * r2 / self.alpha;
        if u <= 1.0 {
            if u == 0.0 {
                return 0.0;
            }
            let mut p = 0.0;
            let mut q = 0.0;
            for k in (0..SERIES_TERMS).rev() {
                p = p * u + self.series_p[k];
                q = q * u + self.series_q[k];
            }
            return (q - u.ln() * p) / (8.0 * std::f64::consts::PI * self.alpha);
        }
        let z = r2.sqrt() * self.inv_sqrt_alpha;
        if z >= TABLE_END {
            return 1.0 / (TAU * r2);
        }
        let s = (z - TABLE_START) / TABLE_STEP;
        let i = (s as usize).min(self.values.len() - 2);
        let t = s - i as f64;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.slopes[i] * TABLE_STEP, self.slopes[i + 1] * TABLE_STEP);
        let t2 = t * t;
        let t3 = t2 * t;
        let g =
            (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * d0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * d1;
        g / (TAU * r2)
    }

    /// `K^α(x)`, zero at the origin.
    #[inline]
    pub fn eval(&self, x: Point2) -> Point2 {
        let f = self.profile(x.norm_sq());
        Point2::new(-x.x2 * f, x.x1 * f)
    }

    /// Largest deviation from the direct formula over a log-spaced sample, relative to `|K^α|`.
    pub fn self_check(&self) -> f64 {
        let sa = self.alpha.sqrt();
        (0..2000)
            .map(|i| {
                let r = sa * 1e-6 * (1e8f64).powf(i as f64 / 1999.0);
                let x = Point2::from_polar(r, 0.3 + i as f64);
                let exact = k_alpha_with(x, self.alpha);
                (self.eval(x) - exact).norm() / exact.norm()
            })
            .fold(0.0, f64::max)
    }
}
