//! Filtered Euler flow outside the disk `|x| ≤ eps`: semi-Lagrangian
//! transport of `q` on a polar grid with velocity `T(q)` refreshed each step,
//! the Picard iteration for the same problem, and the weak comparison with
//! the plane limit.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::initial::InitialVorticity;
use crate::kernels::FilterParams;
use crate::mode_solver::{ModeField, ModeSolver, PoissonSolver, PolarField, PolarGrid, NO_SLIP_TOLERANCE};
use crate::record::{Diagnostics, Provenance, RunRecord, Snapshot, SnapshotData};

/// Values below this fraction of `max|q0|` do not count towards the support radius.
pub const SUPPORT_THRESHOLD: f64 = 1e-3;

/// Configuration of an exterior run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExteriorSimConfig {
    pub alpha: f64,
    pub eps: f64,
    pub gamma: f64,
    /// Mass entering the far-field circulation; `None` uses the discrete mass of `q0`.
    pub m: Option<f64>,
    pub r_max: f64,
    pub n_r: usize,
    pub grading: f64,
    pub n_theta: usize,
    /// Highest azimuthal mode kept by the velocity solve.
    pub n_modes: usize,
    /// `None` picks the largest step dividing `t_end` with advisory CFL ≤ 1/2.
    pub dt: Option<f64>,
    pub t_end: f64,
    pub q0: InitialVorticity,
    pub snapshot_stride: usize,
    /// Foot crossings per step tolerated before the run aborts.
    pub max_foot_crossings: usize,
}

impl Default for ExteriorSimConfig {
    fn default() -> Self {
        ExteriorSimConfig {
            alpha: 1.0,
            eps: 0.1,
            gamma: 1.0,
            m: None,
            r_max: 3.0,
            n_r: 233,
            grading: 1.0,
            n_theta: 2048,
            n_modes: 1023,
            dt: None,
            t_end: 1.0,
            q0: InitialVorticity::default(),
            snapshot_stride: 10,
            max_foot_crossings: 0,
        }
    }
}

impl ExteriorSimConfig {
    pub fn grid(&self) -> Result<PolarGrid> {
        PolarGrid::new(self.eps, self.r_max, self.n_r, self.grading, self.n_theta)
    }

    /// Uniform radial spacing `dr` anchored at `r_max`, so that different `eps`
    /// share the nodes away from the obstacle.
    pub fn with_radial_spacing(mut self, dr: f64) -> Result<Self> {
        let cells = (self.r_max - self.eps) / dr;
        if !(dr > 0.0) || (cells - cells.round()).abs() > 1e-9 {
            return Err(Error::InvalidGrid(format!(
                "r_max - eps = {} is not a multiple of dr = {dr}",
                self.r_max - self.eps
            )));
        }
        self.n_r = cells.round() as usize + 1;
        self.grading = 1.0;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        FilterParams::new(self.alpha, self.eps, self.gamma, self.m.unwrap_or(0.0))?;
        self.grid()?;
        self.q0.validate()?;
        if let Some((lo, hi)) = self.q0.support_annulus() {
            if lo <= self.eps || hi >= self.r_max {
                return Err(Error::InvalidParameter(format!(
                    "q0 support [{lo}, {hi}] must lie strictly inside the annulus ({}, {})",
                    self.eps, self.r_max
                )));
            }
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) || !dt.is_finite() {
                return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
            }
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(Error::InvalidParameter(format!("t_end must be non-negative, got {}", self.t_end)));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::InvalidParameter("snapshot_stride must be at least 1".into()));
        }
        Ok(())
    }

    pub fn echo(&self, params: &FilterParams, dt: f64) -> Vec<(String, String)> {
        vec![
            ("solver".into(), "exterior".into()),
            ("alpha".into(), format!("{:?}", self.alpha)),
            ("eps".into(), format!("{:?}", self.eps)),
            ("gamma".into(), format!("{:?}", self.gamma)),
            ("m".into(), format!("{:?}", params.m)),
            ("r_max".into(), format!("{:?}", self.r_max)),
            ("n_r".into(), self.n_r.to_string()),
            ("grading".into(), format!("{:?}", self.grading)),
            ("n_theta".into(), self.n_theta.to_string()),
            ("n_modes".into(), self.n_modes.to_string()),
            ("dt".into(), format!("{dt:?}")),
            ("t_end".into(), format!("{:?}", self.t_end)),
            ("q0".into(), self.q0.to_string()),
            ("snapshot_stride".into(), self.snapshot_stride.to_string()),
            ("max_foot_crossings".into(), self.max_foot_crossings.to_string()),
        ]
    }
}

/// Velocity sampled at the grid nodes in polar components.
#[derive(Debug, Clone)]
pub struct NodalVelocity {
    pub ur: Vec<f64>,
    pub uth: Vec<f64>,
}

impl NodalVelocity {
    pub fn from_modes(u: &ModeField) -> Result<Self> {
        let (ur, uth) = u.synthesize_polar()?;
        Ok(NodalVelocity { ur, uth })
    }

    pub fn max_speed(&self) -> f64 {
        self.ur.iter().zip(&self.uth).map(|(a, b)| a.hypot(*b)).fold(0.0, f64::max)
    }

    /// `max |u|` with the harmonic part `β w3(r) θ̂` removed.
    pub fn max_blob_speed(&self, grid: &PolarGrid, harmonic: &[f64], beta: f64) -> f64 {
        let nt = grid.n_theta();
        (0..grid.len()).map(|k| self.ur[k].hypot(self.uth[k] - beta * harmonic[k / nt])).fold(0.0, f64::max)
    }

    /// Largest `dt |u_r|/Δr + dt |u_θ|/(r Δθ)` over the nodes.
    pub fn cfl(&self, grid: &PolarGrid, dt: f64) -> f64 {
        let nodes = grid.radial().nodes();
        let nt = grid.n_theta();
        let dth = grid.d_theta();
        let mut worst: f64 = 0.0;
        for i in 0..grid.n_r() {
            let dr = if i + 1 < nodes.len() { nodes[i + 1] - nodes[i] } else { nodes[i] - nodes[i - 1] };
            for j in 0..nt {
                let k = i * nt + j;
                worst = worst.max(dt * (self.ur[k].abs() / dr + self.uth[k].abs() / (nodes[i] * dth)));
            }
        }
        worst
    }
}

/// Bilinear weights of a point: radial interval, angular cell and fractions.
struct Cell {
    i: usize,
    j: usize,
    fr: f64,
    ft: f64,
}

/// Locates `(r, θ)` for interpolation; `r` must lie in `[eps, r_max]`.
fn locate(grid: &PolarGrid, r: f64, theta: f64) -> Cell {
    let radial = grid.radial();
    let nodes = radial.nodes();
    let i = radial.locate(r).unwrap_or(if r < nodes[0] { 0 } else { nodes.len() - 2 });
    let fr = ((r - nodes[i]) / (nodes[i + 1] - nodes[i])).clamp(0.0, 1.0);
    let s = theta.rem_euclid(std::f64::consts::TAU) / grid.d_theta();
    let j0 = s.floor();
    let ft = s - j0;
    let j = (j0 as usize) % grid.n_theta();
    Cell { i, j, fr, ft }
}

fn bilinear(values: &[f64], nt: usize, c: &Cell) -> f64 {
    let j1 = (c.j + 1) % nt;
    let a = values[c.i * nt + c.j] * (1.0 - c.ft) + values[c.i * nt + j1] * c.ft;
    let b = values[(c.i + 1) * nt + c.j] * (1.0 - c.ft) + values[(c.i + 1) * nt + j1] * c.ft;
    a * (1.0 - c.fr) + b * c.fr
}

/// `(u_r, u_θ)` at `(r, θ)`, with `r` clamped to the annulus.
fn velocity_at(grid: &PolarGrid, u: &NodalVelocity, r: f64, theta: f64) -> (f64, f64) {
    let c = locate(grid, r.clamp(grid.eps(), grid.r_max()), theta);
    let nt = grid.n_theta();
    (bilinear(&u.ur, nt, &c), bilinear(&u.uth, nt, &c))
}

/// Outcome of one transport step.
#[derive(Debug, Clone)]
pub struct TransportStep {
    pub q: PolarField,
    /// Feet that landed inside the disk and were clamped to `eps`.
    pub crossings: usize,
    /// Feet beyond `r_max` that picked up nonzero `q` from the outer circle.
    pub outflow: usize,
}

/// Advances `q` by `dt` along the frozen velocity `u` (backward RK2 feet in
/// polar coordinates, bilinear interpolation).
pub fn transport(q: &PolarField, u: &NodalVelocity, dt: f64) -> Result<TransportStep> {
    let grid = q.grid();
    let nt = grid.n_theta();
    let (eps, r_max) = (grid.eps(), grid.r_max());
    let values = q.values();
    let nodes = grid.radial().nodes();
    // the velocity on |x| = eps is zero only up to the no-slip tolerance
    let slack = dt * NO_SLIP_TOLERANCE * u.max_speed() + 1e-12 * eps;
    let results: Vec<(f64, bool, bool)> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / nt, k % nt);
            // characteristics in (r, θ): purely azimuthal flow keeps feet on their circle
            let (r0, th0) = (nodes[i], grid.theta(j));
            let rm = (r0 - 0.5 * dt * u.ur[k]).max(eps);
            let thm = th0 - 0.5 * dt * u.uth[k] / r0;
            let (vr, vt) = velocity_at(grid, u, rm, thm);
            let r = r0 - dt * vr;
            let theta = th0 - dt * vt / rm;
            let crossed = r < eps - slack;
            let cell = locate(grid, r.clamp(eps, r_max), theta);
            let value = bilinear(values, nt, &cell);
            (value, crossed, r > r_max && value != 0.0)
        })
        .collect();
    let crossings = results.iter().filter(|r| r.1).count();
    let outflow = results.iter().filter(|r| r.2).count();
    let q = PolarField::new(grid.clone(), results.into_iter().map(|r| r.0).collect())?;
    Ok(TransportStep { q, crossings, outflow })
}

/// Time step and step count for a run.
fn resolve_dt(config: &ExteriorSimConfig, u0: &NodalVelocity, grid: &PolarGrid) -> Result<(f64, usize)> {
    match config.dt {
        Some(dt) => Ok((dt, crate::plane_solver::step_count(config.t_end, dt)?)),
        None => {
            if config.t_end == 0.0 {
                return Ok((0.0, 0));
            }
            let cfl_per_time = u0.cfl(grid, 1.0);
            let raw = if cfl_per_time > 0.0 { 0.5 / cfl_per_time } else { config.t_end };
            let n = (config.t_end / raw).ceil().max(1.0) as usize;
            Ok((config.t_end / n as f64, n))
        }
    }
}

pub const EXTERIOR_COLUMNS: [&str; 12] = [
    "t",
    "mass",
    "max_q",
    "min_q",
    "l2_norm",
    "max_speed",
    "max_blob_speed",
    "support_radius",
    "boundary_slip",
    "cfl",
    "foot_crossings",
    "outflow",
];

/// Largest node radius where `|q|` exceeds `threshold`; `eps` for an empty field.
pub fn support_radius(q: &PolarField, threshold: f64) -> f64 {
    let grid = q.grid();
    let nodes = grid.radial().nodes();
    (0..grid.n_r()).rev().find(|&i| q.row(i).iter().any(|v| v.abs() > threshold)).map_or(grid.eps(), |i| nodes[i])
}

/// Builds the initial field, filter parameters and velocity solver for a config.
pub fn setup(config: &ExteriorSimConfig) -> Result<(PolarField, FilterParams, ModeSolver)> {
    config.validate()?;
    let grid = config.grid()?;
    let q0 = PolarField::from_fn(grid.clone(), |x| config.q0.eval(x))?;
    let m = config.m.unwrap_or_else(|| q0.mass());
    let params = FilterParams::new(config.alpha, config.eps, config.gamma, m)?;
    let solver = ModeSolver::new(&grid, config.alpha, config.n_modes)?;
    Ok((q0, params, solver))
}

/// Runs the exterior solver; numerical failures end the run early with `aborted` set.
pub fn run_exterior(config: &ExteriorSimConfig) -> Result<RunRecord> {
    let start = Instant::now();
    let (mut q, params, solver) = setup(config)?;
    let grid = q.grid().clone();
    let q_scale = q.max_abs();
    let threshold = SUPPORT_THRESHOLD * q_scale;

    let mut field = solver.filtered_velocity(&q, &params)?;
    let mut u = NodalVelocity::from_modes(&field)?;
    let (dt, n_steps) = resolve_dt(config, &u, &grid)?;

    let mut diagnostics = Diagnostics::new(EXTERIOR_COLUMNS.to_vec());
    let row = |t: f64, q: &PolarField, u: &NodalVelocity, f: &ModeField, crossings: usize, outflow: usize| {
        let (lo, hi) = q.values().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        vec![
            t,
            q.mass(),
            hi,
            lo,
            q.l2_norm(),
            u.max_speed(),
            u.max_blob_speed(&grid, solver.harmonic(), params.beta()),
            support_radius(q, threshold),
            f.boundary_slip(),
            u.cfl(&grid, dt),
            crossings as f64,
            outflow as f64,
        ]
    };
    diagnostics.push(row(0.0, &q, &u, &field, 0, 0));
    let mut snapshots = vec![Snapshot { step: 0, time: 0.0, data: SnapshotData::Polar(q.clone()) }];
    let mut aborted = None;
    let (mut crossings, mut outflow) = (0, 0);
    for n in 1..=n_steps {
        let t = n as f64 * dt;
        let advanced = transport(&q, &u, dt)?;
        crossings += advanced.crossings;
        outflow += advanced.outflow;
        let crossed = advanced.crossings;
        q = advanced.q;
        if crossed > config.max_foot_crossings {
            let err =
                Error::FootCrossing { count: crossed, threshold: config.max_foot_crossings, suggested_dt: 0.5 * dt };
            log::error!("step {n}: {err}");
            aborted = Some(format!("t = {t}: {err}"));
            diagnostics.push(row(t, &q, &u, &field, crossings, outflow));
            snapshots.push(Snapshot { step: n, time: t, data: SnapshotData::Polar(q.clone()) });
            break;
        }
        match solver.filtered_velocity(&q, &params).and_then(|f| NodalVelocity::from_modes(&f).map(|u| (f, u))) {
            Ok((f, v)) => {
                field = f;
                u = v;
            }
            Err(e) => {
                aborted = Some(format!("t = {t}: {e}"));
                break;
            }
        }
        if n % config.snapshot_stride == 0 || n == n_steps {
            diagnostics.push(row(t, &q, &u, &field, crossings, outflow));
            snapshots.push(Snapshot { step: n, time: t, data: SnapshotData::Polar(q.clone()) });
        }
    }
    Ok(RunRecord {
        config_echo: config.echo(&params, dt),
        diagnostics,
        snapshots,
        provenance: Provenance::new(start.elapsed().as_secs_f64()),
        aborted,
    })
}

/// Iteration count and horizon of the Picard construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardConfig {
    pub n_iters: usize,
    pub t0: f64,
}

impl Default for PicardConfig {
    fn default() -> Self {
        PicardConfig { n_iters: 6, t0: 0.5 }
    }
}

/// Result of [`picard`].
#[derive(Debug, Clone, PartialEq)]
pub struct PicardResult {
    /// `d_n = sup_t ‖∇Δ^{-1}(q^n - q^{n-1})‖` for `n = 1..=n_iters`.
    pub d: Vec<f64>,
    /// `d_{n+1}/d_n`, `None` when `d_n` is below the noise floor.
    pub ratios: Vec<Option<f64>>,
    /// `1e-12 ‖∇Δ^{-1} q0‖`.
    pub noise_floor: f64,
    pub dt: f64,
}

/// Picard iterates `q^0 ≡ q0`, `q^{n+1}` transported by `T(q^n)` on `[0, t0]`.
pub fn picard(config: &ExteriorSimConfig, picard: &PicardConfig) -> Result<PicardResult> {
    if !(picard.t0 > 0.0) || picard.n_iters < 2 {
        return Err(Error::InvalidParameter(format!(
            "picard needs t0 > 0 and at least 2 iterations (got t0 = {}, n_iters = {})",
            picard.t0, picard.n_iters
        )));
    }
    let config = ExteriorSimConfig { t_end: picard.t0, ..config.clone() };
    let (q0, params, solver) = setup(&config)?;
    let grid = q0.grid().clone();
    let poisson = PoissonSolver::new(&grid, config.n_modes)?;
    let u0 = NodalVelocity::from_modes(&solver.filtered_velocity(&q0, &params)?)?;
    let (dt, n_steps) = resolve_dt(&config, &u0, &grid)?;

    let mut previous: Vec<PolarField> = vec![q0.clone(); n_steps + 1];
    let mut d = Vec::with_capacity(picard.n_iters);
    for iter in 0..picard.n_iters {
        let mut next = Vec::with_capacity(n_steps + 1);
        next.push(q0.clone());
        for k in 0..n_steps {
            let step = if iter == 0 {
                transport(&next[k], &u0, dt)?
            } else {
                let u = NodalVelocity::from_modes(&solver.filtered_velocity(&previous[k], &params)?)?;
                transport(&next[k], &u, dt)?
            };
            if step.crossings > config.max_foot_crossings {
                return Err(Error::FootCrossing {
                    count: step.crossings,
                    threshold: config.max_foot_crossings,
                    suggested_dt: 0.5 * dt,
                });
            }
            next.push(step.q);
        }
        let gaps = next
            .par_iter()
            .zip(&previous)
            .map(|(a, b)| poisson.gradient_norm(&a.sub(b)?))
            .collect::<Result<Vec<f64>>>()?;
        d.push(gaps.into_iter().fold(0.0, f64::max));
        previous = next;
    }
    let noise_floor = 1e-12 * poisson.gradient_norm(&q0)?;
    let ratios = d.windows(2).map(|w| if w[0] > noise_floor { Some(w[1] / w[0]) } else { None }).collect();
    Ok(PicardResult { d, ratios, noise_floor, dt })
}

/// How the comparison treats the disk `|x| < eps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Extension {
    /// Exterior field extended by zero; plane integrals over the whole plane.
    #[default]
    Zero,
    /// Both integrals restricted to `|x| ≥ eps`.
    Excise,
}

/// Smooth bump test functions `φ_k(x) = exp(1 - 1/(1 - s²))`, `s = |x - c_k|/ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestDictionary {
    pub centers: Vec<Point2>,
    pub radius: f64,
}

impl TestDictionary {
    /// 4 × 3 centers over the bounding box of `q0`, padded by a quarter of its size.
    pub fn for_initial(q0: &InitialVorticity) -> Result<Self> {
        let (lo, hi) = q0
            .bounding_box()
            .ok_or_else(|| Error::InvalidParameter("zero data has no test-function dictionary".into()))?;
        let pad = (hi - lo) * 0.25;
        let (lo, hi) = (lo - pad, hi + pad);
        let (dx, dy) = ((hi.x1 - lo.x1) / 4.0, (hi.x2 - lo.x2) / 3.0);
        let centers = (0..3)
            .flat_map(|j| {
                (0..4).map(move |i| Point2::new(lo.x1 + (i as f64 + 0.5) * dx, lo.x2 + (j as f64 + 0.5) * dy))
            })
            .collect();
        Ok(TestDictionary { centers, radius: dx.max(dy) })
    }

    pub fn eval(&self, k: usize, x: Point2) -> f64 {
        let s2 = (x - self.centers[k]).norm_sq() / (self.radius * self.radius);
        if s2 >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - s2)).exp()
        }
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }
}

fn pairing(snapshot: &Snapshot, phi: impl Fn(Point2) -> f64, excise: f64) -> f64 {
    match &snapshot.data {
        SnapshotData::Particles { positions, weights, .. } => {
            positions.iter().zip(weights).filter(|(p, _)| p.norm() >= excise).map(|(p, w)| w * phi(*p)).sum()
        }
        SnapshotData::Polar(q) => q.pair(|x| if x.norm() >= excise { phi(x) } else { 0.0 }),
    }
}

fn echo<'a>(record: &'a RunRecord, key: &str) -> Option<&'a str> {
    record.config_echo.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

/// Weak-proxy distance `e(t) = Σ_k |∫ q_a φ_k - ∫ q_b φ_k|` at each common snapshot time.
pub fn compare_to_limit(a: &RunRecord, b: &RunRecord, extension: Extension) -> Result<Vec<(f64, f64)>> {
    for key in ["alpha", "gamma", "q0"] {
        if echo(a, key).is_none() || echo(a, key) != echo(b, key) {
            return Err(Error::Mismatch(format!("runs differ in {key}")));
        }
    }
    let (ta, tb) = (a.snapshot_times(), b.snapshot_times());
    if ta.len() != tb.len() || ta.iter().zip(&tb).any(|(x, y)| (x - y).abs() > 1e-9 * x.abs().max(1.0)) {
        return Err(Error::Mismatch("runs have different snapshot times".into()));
    }
    let q0 = a
        .snapshots
        .first()
        .map(|_| parse_q0(echo(a, "q0").unwrap_or_default()))
        .transpose()?
        .unwrap_or(InitialVorticity::Zero);
    let dict = TestDictionary::for_initial(&q0)?;
    let excise = match extension {
        Extension::Zero => 0.0,
        Extension::Excise => {
            let eps = |r: &RunRecord| echo(r, "eps").and_then(|v| v.parse::<f64>().ok()).unwrap_or(0.0);
            eps(a).max(eps(b))
        }
    };
    Ok(a.snapshots
        .iter()
        .zip(&b.snapshots)
        .map(|(sa, sb)| {
            let e = (0..dict.len())
                .map(|k| (pairing(sa, |x| dict.eval(k, x), excise) - pairing(sb, |x| dict.eval(k, x), excise)).abs())
                .sum();
            (sa.time, e)
        })
        .collect())
}

/// Inverse of the `Display` form of [`InitialVorticity`], used to recover `q0` from a config echo.
pub fn parse_q0(text: &str) -> Result<InitialVorticity> {
    let bad = || Error::InvalidParameter(format!("cannot parse initial data `{text}`"));
    let mut words = text.split_whitespace();
    let kind = words.next().ok_or_else(bad)?;
    let rest: String = words.collect::<Vec<_>>().join(" ");
    let field = |name: &str| -> Result<f64> {
        let start = rest.find(&format!("{name}=")).ok_or_else(bad)? + name.len() + 1;
        let tail = &rest[start..];
        let end = tail.find(' ').unwrap_or(tail.len());
        tail[..end].parse().map_err(|_| bad())
    };
    match kind {
        "zero" => Ok(InitialVorticity::Zero),
        "bump" => {
            let open = rest.find('(').ok_or_else(bad)?;
            let close = rest.find(')').ok_or_else(bad)?;
            let mut xy = rest[open + 1..close].split(',').map(|s| s.trim().parse::<f64>());
            let (x, y) = match (xy.next(), xy.next()) {
                (Some(Ok(x)), Some(Ok(y))) => (x, y),
                _ => return Err(bad()),
            };
            Ok(InitialVorticity::Bump {
                center: Point2::new(x, y),
                radius: field("radius")?,
                amplitude: field("amplitude")?,
                tilt: field("tilt")?,
            })
        }
        "ring" => Ok(InitialVorticity::Ring {
            radius: field("radius")?,
            width: field("width")?,
            amplitude: field("amplitude")?,
        }),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q0_display_round_trips() {
        for q in [
            InitialVorticity::Zero,
            InitialVorticity::default(),
            InitialVorticity::Bump { center: Point2::new(-0.3, 1.25), radius: 0.2, amplitude: -2.5e-3, tilt: 0.1 },
            InitialVorticity::Ring { radius: 1.0, width: 0.3, amplitude: 1.0 / 3.0 },
        ] {
            assert_eq!(parse_q0(&q.to_string()).unwrap(), q);
        }
        assert!(parse_q0("blob radius=1").is_err());
    }

    #[test]
    fn dictionary_covers_the_support() {
        let d = TestDictionary::for_initial(&InitialVorticity::default()).unwrap();
        assert_eq!(d.len(), 12);
        assert_eq!(d.eval(0, d.centers[0]), 1.0);
        let covered = (0..d.len()).any(|k| d.eval(k, Point2::new(1.0, 0.0)) > 0.1);
        assert!(covered);
    }

    #[test]
    fn interpolation_is_exact_on_bilinear_data() {
        let grid = PolarGrid::new(0.5, 2.0, 31, 1.0, 16).unwrap();
        let q = PolarField::from_fn(grid.clone(), |x| 3.0 * x.norm() - 1.0).unwrap();
        let c = locate(&grid, 1.234, 2.0);
        assert!((bilinear(q.values(), 16, &c) - (3.0 * 1.234 - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn radial_spacing_is_anchored() {
        let c = ExteriorSimConfig { eps: 0.05, ..Default::default() }.with_radial_spacing(0.0125).unwrap();
        assert_eq!(c.n_r, 237);
        assert!(ExteriorSimConfig::default().with_radial_spacing(0.013).is_err());
    }
}
