//! Vortex-blob solver for the limit system in the whole plane with a fixed
//! point vortex of strength `γ` at the origin: `u = K^α * q + γ K^α`.

use std::f64::consts::TAU;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::initial::InitialVorticity;
use crate::kernels::{FilterParams, KernelTable};
use crate::record::{Diagnostics, Provenance, RunRecord, Snapshot, SnapshotData};

/// How particles are seeded from `q0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lattice {
    /// Points `(i h, j h)`, weight `q0 h²`.
    Square,
    /// Rings at `r_min + (k + 1/2) h` with `n_theta` equally spaced angles each,
    /// weight `q0 r h Δθ`. Keeps radial data exactly symmetric.
    Polar { n_theta: usize },
}

/// Vortex blobs with fixed circulation weights.
#[derive(Debug, Clone)]
pub struct ParticleEnsemble {
    pub positions: Vec<Point2>,
    pub weights: Vec<f64>,
    pub q_values: Vec<f64>,
    pub params: FilterParams,
    kernel: Arc<KernelTable>,
}

impl ParticleEnsemble {
    pub fn new(positions: Vec<Point2>, weights: Vec<f64>, q_values: Vec<f64>, params: FilterParams) -> Result<Self> {
        if positions.len() != weights.len() || positions.len() != q_values.len() {
            return Err(Error::InvalidParameter("positions, weights and q_values differ in length".into()));
        }
        if params.eps != 0.0 {
            return Err(Error::InvalidParameter("the plane solver needs eps = 0".into()));
        }
        let kernel = Arc::new(KernelTable::new(params.alpha)?);
        Ok(ParticleEnsemble { positions, weights, q_values, params, kernel })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// `Σ weights`, summed in index order.
    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn kernel(&self) -> &KernelTable {
        &self.kernel
    }

    pub fn max_radius(&self) -> f64 {
        self.positions.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    pub fn min_radius(&self) -> f64 {
        self.positions.iter().map(|p| p.norm()).fold(f64::INFINITY, f64::min)
    }

    /// `Σ w |x|²`, conserved by the exact dynamics.
    pub fn angular_impulse(&self) -> f64 {
        self.positions.iter().zip(&self.weights).map(|(p, w)| w * p.norm_sq()).sum()
    }

    pub fn rotated(&self, phi: f64) -> Self {
        let mut out = self.clone();
        out.positions.iter_mut().for_each(|p| *p = p.rotate(phi));
        out
    }
}

/// Seeds particles from `q0` on the chosen lattice with spacing `h`.
pub fn init_particles(
    q0: &InitialVorticity,
    h: f64,
    lattice: Lattice,
    params: FilterParams,
) -> Result<ParticleEnsemble> {
    q0.validate()?;
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("lattice spacing must be positive, got {h}")));
    }
    let mut positions = Vec::new();
    let mut weights = Vec::new();
    let mut q_values = Vec::new();
    match lattice {
        Lattice::Square => {
            if let Some((lo, hi)) = q0.bounding_box() {
                let (i0, i1) = ((lo.x1 / h).floor() as i64, (hi.x1 / h).ceil() as i64);
                let (j0, j1) = ((lo.x2 / h).floor() as i64, (hi.x2 / h).ceil() as i64);
                for i in i0..=i1 {
                    for j in j0..=j1 {
                        let x = Point2::new(i as f64 * h, j as f64 * h);
                        let q = q0.eval(x);
                        if q != 0.0 {
                            positions.push(x);
                            weights.push(q * h * h);
                            q_values.push(q);
                        }
                    }
                }
            }
        }
        Lattice::Polar { n_theta } => {
            if n_theta < 1 {
                return Err(Error::InvalidParameter("polar lattice needs n_theta >= 1".into()));
            }
            if let Some((r_lo, r_hi)) = q0.support_annulus() {
                let dtheta = TAU / n_theta as f64;
                let n_rings = ((r_hi - r_lo) / h).ceil() as usize;
                for k in 0..n_rings {
                    let r = r_lo + (k as f64 + 0.5) * h;
                    for j in 0..n_theta {
                        let x = Point2::from_polar(r, j as f64 * dtheta);
                        let q = q0.eval(x);
                        if q != 0.0 {
                            positions.push(x);
                            weights.push(q * r * h * dtheta);
                            q_values.push(q);
                        }
                    }
                }
            }
        }
    }
    if positions.is_empty() && *q0 != InitialVorticity::Zero {
        return Err(Error::InvalidParameter(format!("no lattice point of spacing {h} hits the support of q0")));
    }
    ParticleEnsemble::new(positions, weights, q_values, params)
}

fn blob_velocity(kernel: &KernelTable, positions: &[Point2], weights: &[f64], x: Point2) -> Point2 {
    let mut u = Point2::ZERO;
    for (p, w) in positions.iter().zip(weights) {
        u += kernel.eval(x - *p) * *w;
    }
    u
}

/// `u(x) = Σ_j w_j K^α(x - x_j) + γ K^α(x)`.
pub fn velocity(ensemble: &ParticleEnsemble, x: Point2) -> Point2 {
    let k = &ensemble.kernel;
    blob_velocity(k, &ensemble.positions, &ensemble.weights, x) + k.eval(x) * ensemble.params.gamma
}

const PAIR_BLOCK: usize = 128;

/// Self-interaction sum at `positions` (one per particle). Each pair is
/// evaluated once using `K(-x) = -K(x)`. Work is split into fixed block pairs
/// and summed in a fixed order, so the result does not depend on thread count.
fn velocities_for(ensemble: &ParticleEnsemble, positions: &[Point2]) -> Vec<Point2> {
    let k = &ensemble.kernel;
    let w = &ensemble.weights;
    let n = positions.len();
    let n_blocks = n.div_ceil(PAIR_BLOCK);
    let pairs: Vec<(usize, usize)> = (0..n_blocks).flat_map(|a| (a..n_blocks).map(move |b| (a, b))).collect();
    let range = |b: usize| b * PAIR_BLOCK..((b + 1) * PAIR_BLOCK).min(n);
    let parts: Vec<(Vec<Point2>, Vec<Point2>)> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let (ra, rb) = (range(a), range(b));
            let mut ua = vec![Point2::ZERO; ra.len()];
            let mut ub = vec![Point2::ZERO; rb.len()];
            for (ia, i) in ra.clone().enumerate() {
                let start = if a == b { ia + 1 } else { 0 };
                for (jb, j) in rb.clone().enumerate().skip(start) {
                    let kij = k.eval(positions[i] - positions[j]);
                    ua[ia] += kij * w[j];
                    ub[jb] -= kij * w[i];
                }
            }
            (ua, ub)
        })
        .collect();
    let gamma = ensemble.params.gamma;
    let mut u: Vec<Point2> = positions.iter().map(|&x| k.eval(x) * gamma).collect();
    for (&(a, b), (ua, ub)) in pairs.iter().zip(parts) {
        for (i, v) in range(a).zip(ua) {
            u[i] += v;
        }
        for (j, v) in range(b).zip(ub) {
            u[j] += v;
        }
    }
    u
}

/// Velocity of every particle.
pub fn particle_velocities(ensemble: &ParticleEnsemble) -> Vec<Point2> {
    velocities_for(ensemble, &ensemble.positions)
}

/// Largest speed of the blob part alone (without the point vortex).
pub fn max_blob_speed(ensemble: &ParticleEnsemble) -> f64 {
    let k = &ensemble.kernel;
    ensemble
        .positions
        .par_iter()
        .map(|&x| blob_velocity(k, &ensemble.positions, &ensemble.weights, x).norm())
        .reduce(|| 0.0, f64::max)
}

/// One classical RK4 step of size `dt` (negative `dt` integrates backward).
pub fn step(ensemble: &mut ParticleEnsemble, dt: f64) -> Result<()> {
    let x0 = ensemble.positions.clone();
    let shifted = |k: &[Point2], s: f64| -> Vec<Point2> { x0.iter().zip(k).map(|(x, v)| *x + *v * s).collect() };
    let k1 = velocities_for(ensemble, &x0);
    let k2 = velocities_for(ensemble, &shifted(&k1, 0.5 * dt));
    let k3 = velocities_for(ensemble, &shifted(&k2, 0.5 * dt));
    let k4 = velocities_for(ensemble, &shifted(&k3, dt));
    let mut bad = None;
    for (i, p) in ensemble.positions.iter_mut().enumerate() {
        *p += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
        if bad.is_none() && !p.is_finite() {
            bad = Some(i);
        }
    }
    if let Some(i) = bad {
        return Err(Error::NonFinite { time: f64::NAN, detail: format!("particle {i} position") });
    }
    Ok(())
}

/// Configuration of a plane run.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneSimConfig {
    pub alpha: f64,
    pub gamma: f64,
    /// `None` picks `5e-3 ρ / max|u0|` with `ρ` the support half-width,
    /// shortened so that it divides `t_end`.
    pub dt: Option<f64>,
    pub t_end: f64,
    pub q0: InitialVorticity,
    pub h: f64,
    pub lattice: Lattice,
    pub snapshot_stride: usize,
}

impl Default for PlaneSimConfig {
    fn default() -> Self {
        PlaneSimConfig {
            alpha: 1.0,
            gamma: 1.0,
            dt: Some(0.01),
            t_end: 1.0,
            q0: InitialVorticity::default(),
            h: 0.02,
            lattice: Lattice::Square,
            snapshot_stride: 10,
        }
    }
}

impl PlaneSimConfig {
    pub fn params(&self) -> Result<FilterParams> {
        FilterParams::plane(self.alpha, self.gamma)
    }

    pub fn validate(&self) -> Result<()> {
        self.params()?;
        self.q0.validate()?;
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

    /// Time step, falling back to the turnover-based default.
    pub fn resolve_dt(&self, ensemble: &ParticleEnsemble) -> f64 {
        if let Some(dt) = self.dt {
            return dt;
        }
        let umax = particle_velocities(ensemble).iter().map(|u| u.norm()).fold(0.0, f64::max);
        let size = self.q0.support_annulus().map_or(1.0, |(lo, hi)| 0.5 * (hi - lo));
        let raw = if umax > 0.0 { 5e-3 * size / umax } else { 1e-2 };
        if self.t_end > 0.0 {
            self.t_end / (self.t_end / raw).ceil()
        } else {
            raw
        }
    }

    pub fn echo(&self, dt: f64, n_particles: usize) -> Vec<(String, String)> {
        let lattice = match self.lattice {
            Lattice::Square => "square".to_string(),
            Lattice::Polar { n_theta } => format!("polar n_theta={n_theta}"),
        };
        vec![
            ("solver".into(), "plane".into()),
            ("alpha".into(), format!("{:?}", self.alpha)),
            ("gamma".into(), format!("{:?}", self.gamma)),
            ("dt".into(), format!("{dt:?}")),
            ("t_end".into(), format!("{:?}", self.t_end)),
            ("q0".into(), self.q0.to_string()),
            ("h".into(), format!("{:?}", self.h)),
            ("lattice".into(), lattice),
            ("snapshot_stride".into(), self.snapshot_stride.to_string()),
            ("particles".into(), n_particles.to_string()),
        ]
    }
}

/// Number of steps of size `dt` that reach `t_end`.
pub(crate) fn step_count(t_end: f64, dt: f64) -> Result<usize> {
    let n = (t_end / dt).round();
    if (n * dt - t_end).abs() > 1e-9 * t_end.max(1.0) {
        return Err(Error::InvalidParameter(format!("t_end = {t_end} is not a multiple of dt = {dt}")));
    }
    Ok(n as usize)
}

pub const PLANE_COLUMNS: [&str; 6] = ["t", "mass", "max_radius", "min_radius", "angular_impulse", "max_blob_speed"];

fn plane_row(t: f64, e: &ParticleEnsemble) -> Vec<f64> {
    if e.is_empty() {
        return vec![t, 0.0, 0.0, 0.0, 0.0, 0.0];
    }
    vec![t, e.mass(), e.max_radius(), e.min_radius(), e.angular_impulse(), max_blob_speed(e)]
}

fn particle_snapshot(step: usize, time: f64, e: &ParticleEnsemble) -> Snapshot {
    Snapshot {
        step,
        time,
        data: SnapshotData::Particles {
            positions: e.positions.clone(),
            weights: e.weights.clone(),
            q_values: e.q_values.clone(),
        },
    }
}

/// Runs the plane solver; numerical failures end the run early with `aborted` set.
pub fn run_plane(config: &PlaneSimConfig) -> Result<RunRecord> {
    config.validate()?;
    let start = Instant::now();
    let params = config.params()?;
    let mut ensemble = init_particles(&config.q0, config.h, config.lattice, params)?;
    let dt = config.resolve_dt(&ensemble);
    let n_steps = step_count(config.t_end, dt)?;
    let echo = config.echo(dt, ensemble.len());
    run_ensemble(&mut ensemble, dt, n_steps, config.snapshot_stride, echo, start)
}

/// Advances an existing ensemble, recording every `stride` steps.
pub fn run_ensemble(
    ensemble: &mut ParticleEnsemble,
    dt: f64,
    n_steps: usize,
    stride: usize,
    config_echo: Vec<(String, String)>,
    start: Instant,
) -> Result<RunRecord> {
    let mut diagnostics = Diagnostics::new(PLANE_COLUMNS.to_vec());
    let mut snapshots = vec![particle_snapshot(0, 0.0, ensemble)];
    diagnostics.push(plane_row(0.0, ensemble));
    let mut aborted = None;
    for n in 1..=n_steps {
        let t = n as f64 * dt;
        if let Err(e) = step(ensemble, dt) {
            aborted = Some(match e {
                Error::NonFinite { detail, .. } => Error::NonFinite { time: t, detail }.to_string(),
                other => other.to_string(),
            });
            break;
        }
        if n % stride == 0 || n == n_steps {
            diagnostics.push(plane_row(t, ensemble));
            snapshots.push(particle_snapshot(n, t, ensemble));
        }
    }
    Ok(RunRecord {
        config_echo,
        diagnostics,
        snapshots,
        provenance: Provenance::new(start.elapsed().as_secs_f64()),
        aborted,
    })
}

fn echo_value<'a>(record: &'a RunRecord, key: &str) -> Option<&'a str> {
    record.config_echo.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

fn particles(s: &Snapshot) -> Result<(&[Point2], &[f64])> {
    match &s.data {
        SnapshotData::Particles { positions, weights, .. } => Ok((positions, weights)),
        SnapshotData::Polar(_) => Err(Error::Mismatch("stability_gap needs particle snapshots".into())),
    }
}

/// Cloud-in-cell deposit onto an `n × n` grid with lower corner `origin`.
fn deposit(positions: &[Point2], weights: &[f64], origin: Point2, h: f64, n: usize, sign: f64, out: &mut [f64]) {
    let inv_area = sign / (h * h);
    for (p, w) in positions.iter().zip(weights) {
        let gx = (p.x1 - origin.x1) / h;
        let gy = (p.x2 - origin.x2) / h;
        let (i, j) = (gx.floor(), gy.floor());
        let (fx, fy) = (gx - i, gy - j);
        let (i, j) = (i as usize, j as usize);
        let c = w * inv_area;
        out[j * n + i] += c * (1.0 - fx) * (1.0 - fy);
        out[j * n + i + 1] += c * fx * (1.0 - fy);
        out[(j + 1) * n + i] += c * (1.0 - fx) * fy;
        out[(j + 1) * n + i + 1] += c * fx * fy;
    }
}

/// `‖∇Δ^{-1} q‖_{L²}` of a zero-mean periodic grid function on a square box of side `l`.
fn periodic_gradient_norm(values: &[f64], n: usize, l: f64) -> f64 {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let fft = FftPlanner::new().plan_fft_forward(n);
    for row in buf.chunks_mut(n) {
        fft.process(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        for j in 0..n {
            col[j] = buf[j * n + i];
        }
        fft.process(&mut col);
        for j in 0..n {
            buf[j * n + i] = col[j];
        }
    }
    let scale = 1.0 / (n * n) as f64;
    let kf = TAU / l;
    let wrap = |m: usize| if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i == 0 && j == 0 {
                continue;
            }
            let k2 = kf * kf * (wrap(i).powi(2) + wrap(j).powi(2));
            s += (buf[j * n + i] * scale).norm_sqr() / k2;
        }
    }
    (l * l * s).sqrt()
}

/// Grid resolution used by [`stability_gap`].
pub const GAP_GRID: usize = 128;

/// `‖∇Δ^{-1}(q_a - q_b)‖_{L²}` at each common snapshot time.
pub fn stability_gap(a: &RunRecord, b: &RunRecord) -> Result<Vec<(f64, f64)>> {
    for key in ["alpha", "gamma"] {
        if echo_value(a, key) != echo_value(b, key) || echo_value(a, key).is_none() {
            return Err(Error::Mismatch(format!("runs differ in {key}")));
        }
    }
    if a.snapshot_times() != b.snapshot_times() {
        return Err(Error::Mismatch("runs have different snapshot times".into()));
    }
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for s in a.snapshots.iter().chain(&b.snapshots) {
        for p in particles(s)?.0 {
            lo = Point2::new(lo.x1.min(p.x1), lo.x2.min(p.x2));
            hi = Point2::new(hi.x1.max(p.x1), hi.x2.max(p.x2));
        }
    }
    let n = GAP_GRID;
    if !lo.is_finite() {
        return Ok(a.snapshots.iter().map(|s| (s.time, 0.0)).collect());
    }
    let extent = (hi.x1 - lo.x1).max(hi.x2 - lo.x2).max(1e-3);
    let l = 1.5 * extent;
    let center = (lo + hi) * 0.5;
    let origin = center - Point2::new(0.5 * l, 0.5 * l);
    let h = l / n as f64;
    a.snapshots
        .iter()
        .zip(&b.snapshots)
        .map(|(sa, sb)| {
            let (pa, wa) = particles(sa)?;
            let (pb, wb) = particles(sb)?;
            if pa == pb && wa == wb {
                return Ok((sa.time, 0.0));
            }
            let mut grid = vec![0.0; n * n];
            deposit(pa, wa, origin, h, n, 1.0, &mut grid);
            deposit(pb, wb, origin, h, n, -1.0, &mut grid);
            let mean = grid.iter().sum::<f64>() / (n * n) as f64;
            grid.iter_mut().for_each(|v| *v -= mean);
            Ok((sa.time, periodic_gradient_norm(&grid, n, l)))
        })
        .collect()
}

/// Least-squares fit `ln g(t) ≈ c + λ t` of a gap series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeFit {
    pub lambda: f64,
    pub intercept: f64,
    /// Largest `|ln g - fit|`.
    pub max_residual: f64,
    /// `max ln g - min ln g`.
    pub log_range: f64,
}

impl EnvelopeFit {
    /// `max_residual / log_range`.
    pub fn residual_fraction(&self) -> f64 {
        self.max_residual / self.log_range
    }

    /// Smallest `Λ ≥ λ` with `g(t) ≤ g(0) e^{Λ t}` at every sample.
    pub fn envelope_rate(gap: &[(f64, f64)]) -> f64 {
        let (t0, g0) = gap[0];
        gap.iter().skip(1).map(|&(t, g)| (g / g0).ln() / (t - t0)).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Fits an exponential to a strictly positive gap series.
pub fn fit_envelope(gap: &[(f64, f64)]) -> Result<EnvelopeFit> {
    if gap.len() < 3 {
        return Err(Error::InvalidParameter("need at least three gap samples".into()));
    }
    if let Some(&(t, g)) = gap.iter().find(|p| !(p.1 > 0.0) || !p.1.is_finite()) {
        return Err(Error::InvalidParameter(format!("gap {g} at t = {t} is not positive")));
    }
    let n = gap.len() as f64;
    let mt = gap.iter().map(|p| p.0).sum::<f64>() / n;
    let my = gap.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let sxy: f64 = gap.iter().map(|p| (p.0 - mt) * (p.1.ln() - my)).sum();
    let sxx: f64 = gap.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let lambda = sxy / sxx;
    let intercept = my - lambda * mt;
    let max_residual = gap.iter().map(|p| (p.1.ln() - intercept - lambda * p.0).abs()).fold(0.0, f64::max);
    let (lo, hi) =
        gap.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.1.ln()), hi.max(p.1.ln())));
    Ok(EnvelopeFit { lambda, intercept, max_residual, log_range: hi - lo })
}
