//! Initial vorticity profiles shared by the plane and exterior solvers.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::Point2;

/// Compactly supported initial vorticity `q0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialVorticity {
    Zero,
    /// `A cos²(π|x-c|/(2ρ)) (1 + tilt (x1 - c1)/ρ)` on `|x - c| < ρ`.
    Bump {
        center: Point2,
        radius: f64,
        amplitude: f64,
        tilt: f64,
    },
    /// `A cos²(π(|x| - r0)/(2w))` on `||x| - r0| < w`.
    Ring {
        radius: f64,
        width: f64,
        amplitude: f64,
    },
}

impl Default for InitialVorticity {
    fn default() -> Self {
        InitialVorticity::Bump { center: Point2::new(1.0, 0.0), radius: 0.4, amplitude: 1.0, tilt: 0.0 }
    }
}

impl InitialVorticity {
    pub fn validate(&self) -> Result<()> {
        match *self {
            InitialVorticity::Zero => Ok(()),
            InitialVorticity::Bump { center, radius, amplitude, tilt } => {
                if !(radius > 0.0) || !center.is_finite() || !amplitude.is_finite() || !tilt.is_finite() {
                    return Err(Error::InvalidParameter("bump needs finite center/amplitude and radius > 0".into()));
                }
                if center.norm() <= radius {
                    return Err(Error::InvalidParameter(format!(
                        "bump support must exclude the origin (|c| = {} <= rho = {radius})",
                        center.norm()
                    )));
                }
                Ok(())
            }
            InitialVorticity::Ring { radius, width, amplitude } => {
                if !(width > 0.0) || !(radius > width) || !amplitude.is_finite() {
                    return Err(Error::InvalidParameter("ring needs 0 < width < radius".into()));
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, x: Point2) -> f64 {
        match *self {
            InitialVorticity::Zero => 0.0,
            InitialVorticity::Bump { center, radius, amplitude, tilt } => {
                let s = (x - center).norm() / radius;
                if s >= 1.0 {
                    0.0
                } else {
                    amplitude * (FRAC_PI_2 * s).cos().powi(2) * (1.0 + tilt * (x.x1 - center.x1) / radius)
                }
            }
            InitialVorticity::Ring { radius, width, amplitude } => {
                let s = (x.norm() - radius) / width;
                if s.abs() >= 1.0 {
                    0.0
                } else {
                    amplitude * (FRAC_PI_2 * s).cos().powi(2)
                }
            }
        }
    }

    /// Exact `∫ q0 dx`.
    pub fn mass(&self) -> f64 {
        match *self {
            InitialVorticity::Zero => 0.0,
            // the tilt term is odd about the center and integrates to zero
            InitialVorticity::Bump { radius, amplitude, .. } => {
                amplitude * TAU * radius * radius * (0.25 - 1.0 / (PI * PI))
            }
            InitialVorticity::Ring { radius, width, amplitude } => amplitude * TAU * radius * width,
        }
    }

    /// `(r_min, r_max)` with the support inside `r_min ≤ |x| ≤ r_max`; `None` for zero data.
    pub fn support_annulus(&self) -> Option<(f64, f64)> {
        match *self {
            InitialVorticity::Zero => None,
            InitialVorticity::Bump { center, radius, .. } => Some((center.norm() - radius, center.norm() + radius)),
            InitialVorticity::Ring { radius, width, .. } => Some((radius - width, radius + width)),
        }
    }

    /// Bounding box `(lo, hi)` of the support.
    pub fn bounding_box(&self) -> Option<(Point2, Point2)> {
        match *self {
            InitialVorticity::Zero => None,
            InitialVorticity::Bump { center, radius, .. } => {
                Some((center - Point2::new(radius, radius), center + Point2::new(radius, radius)))
            }
            InitialVorticity::Ring { radius, width, .. } => {
                let r = radius + width;
                Some((Point2::new(-r, -r), Point2::new(r, r)))
            }
        }
    }

    /// Same profile with the amplitude scaled by `1 + delta`, i.e. `q0 + delta q0`.
    pub fn perturbed(&self, delta: f64) -> Result<Self> {
        match *self {
            InitialVorticity::Bump { center, radius, amplitude, tilt } => {
                Ok(InitialVorticity::Bump { center, radius, amplitude: amplitude * (1.0 + delta), tilt })
            }
            InitialVorticity::Ring { radius, width, amplitude } => {
                Ok(InitialVorticity::Ring { radius, width, amplitude: amplitude * (1.0 + delta) })
            }
            InitialVorticity::Zero => Err(Error::InvalidParameter("zero data has nothing to perturb".into())),
        }
    }
}

impl fmt::Display for InitialVorticity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            InitialVorticity::Zero => write!(f, "zero"),
            InitialVorticity::Bump { center, radius, amplitude, tilt } => write!(
                f,
                "bump center=({}, {}) radius={radius} amplitude={amplitude} tilt={tilt}",
                center.x1, center.x2
            ),
            InitialVorticity::Ring { radius, width, amplitude } => {
                write!(f, "ring radius={radius} width={width} amplitude={amplitude}")
            }
        }
    }
}
