//! The subcommands. Each writes its files under `out` and returns an error
//! whose [`CliError::exit_code`] is the process status.

use std::path::Path;
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;
use vortexlab_core::exterior_solver::{compare_to_limit, picard, run_exterior};
use vortexlab_core::kernels::bound_table;
use vortexlab_core::plane_solver::run_plane;
use vortexlab_core::radial_exterior::{a_eps, b_eps, w4_h1_energy, EnergyMode};
use vortexlab_core::{ExteriorSimConfig, FilterParams, RunRecord};

use crate::config::{converge_config, exterior_config, picard_config, plane_config, ConfigFile};
use crate::error::{CliError, Result};
use crate::output::{create_dir, num, write_csv, write_run};
use crate::plot::loglog;

/// Largest `|identity - quadrature| / identity` accepted by `radial-verify`.
pub const ENERGY_GAP_TOLERANCE: f64 = 1e-6;
/// Largest Picard ratio accepted by `picard`.
pub const PICARD_RATIO_LIMIT: f64 = 0.6;

#[derive(Debug, Clone, PartialEq)]
pub struct KernelTableArgs {
    pub alpha: f64,
    pub samples: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub svg: bool,
}

impl Default for KernelTableArgs {
    fn default() -> Self {
        KernelTableArgs { alpha: 1.0, samples: 200, r_min: 1e-5, r_max: 50.0, svg: false }
    }
}

pub fn kernel_table(out: &Path, args: &KernelTableArgs) -> Result<()> {
    let params = FilterParams::plane(args.alpha, 0.0)?;
    let table = bound_table(args.r_min, args.r_max, args.samples, &params)?;
    create_dir(out)?;
    write_csv(
        &out.join("kernel_table.csv"),
        &["r", "g_alpha", "k_theta", "bound_a_ratio", "bound_b_ratio", "cross_deriv"],
        table.iter().map(|s| [s.r, s.g_alpha, s.k_theta, s.bound_a_ratio, s.bound_b_ratio, s.cross_deriv].map(num)),
    )?;
    if args.svg {
        let column = |f: fn(&vortexlab_core::kernels::BoundSample) -> f64| table.iter().map(|s| (s.r, f(s))).collect();
        loglog(
            &out.join("kernel_table.svg"),
            &format!("kernel bounds, alpha = {}", args.alpha),
            "r",
            "value",
            &[
                ("g_alpha", column(|s| s.g_alpha)),
                ("k_theta", column(|s| s.k_theta)),
                ("bound_a_ratio", column(|s| s.bound_a_ratio)),
                ("bound_b_ratio", column(|s| s.bound_b_ratio)),
                ("cross_deriv", column(|s| s.cross_deriv)),
            ],
        )?;
    }
    info!("kernel table: {} rows for alpha = {}", table.len(), args.alpha);
    Ok(())
}

/// One `radial_verify.csv` row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialRow {
    pub alpha: f64,
    pub eps: f64,
    pub a_eps: f64,
    pub b_eps: f64,
    pub energy_identity: f64,
    pub energy_quadrature: f64,
    pub rel_gap: f64,
    pub rate_ratio: f64,
}

pub fn radial_verify(out: &Path, alphas: &[f64], eps: &[f64]) -> Result<Vec<RadialRow>> {
    if alphas.is_empty() || eps.is_empty() {
        return Err(CliError::Config("radial-verify needs at least one alpha and one eps".into()));
    }
    let mut rows = Vec::new();
    for &alpha in alphas {
        for &e in eps {
            let p = FilterParams::new(alpha, e, 0.0, 0.0)?;
            let identity = w4_h1_energy(&p, EnergyMode::Identity)?;
            let quadrature = w4_h1_energy(&p, EnergyMode::Quadrature)?;
            rows.push(RadialRow {
                alpha,
                eps: e,
                a_eps: a_eps(&p)?,
                b_eps: b_eps(&p)?,
                energy_identity: identity,
                energy_quadrature: quadrature,
                rel_gap: ((quadrature - identity) / identity).abs(),
                rate_ratio: identity.sqrt() / (e * e.ln().abs()),
            });
        }
    }
    create_dir(out)?;
    write_csv(
        &out.join("radial_verify.csv"),
        &["alpha", "eps", "a_eps", "b_eps", "energy_identity", "energy_quadrature", "rel_gap", "rate_ratio"],
        rows.iter().map(|r| {
            [r.alpha, r.eps, r.a_eps, r.b_eps, r.energy_identity, r.energy_quadrature, r.rel_gap, r.rate_ratio].map(num)
        }),
    )?;
    if let Some(bad) = rows.iter().find(|r| !(r.rel_gap <= ENERGY_GAP_TOLERANCE)) {
        return Err(CliError::Acceptance(format!(
            "energy identity and quadrature differ by {:e} at alpha = {}, eps = {} (tolerance {ENERGY_GAP_TOLERANCE:e})",
            bad.rel_gap, bad.alpha, bad.eps
        )));
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Plane,
    Exterior,
}

fn check_aborted(record: &RunRecord) -> Result<()> {
    match &record.aborted {
        Some(reason) => Err(CliError::Aborted(reason.clone())),
        None => Ok(()),
    }
}

pub fn simulate(solver: Solver, config: &Path, out: &Path) -> Result<RunRecord> {
    let file = ConfigFile::load(config)?;
    let record = match solver {
        Solver::Plane => run_plane(&plane_config(&file)?)?,
        Solver::Exterior => run_exterior(&exterior_config(&file, true)?)?,
    };
    write_run(out, &record, true)?;
    check_aborted(&record)?;
    Ok(record)
}

/// One `converge.csv` row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergeRow {
    pub eps: f64,
    pub e_t: f64,
    pub e_floor: f64,
    pub runtime_s: f64,
}

/// Runs the plane limit once and the exterior solver for every `eps`
/// concurrently, each into its own run directory without snapshots.
/// The radial spacing of `[exterior]` is kept fixed across `eps`.
pub fn converge(config: &Path, out: &Path) -> Result<Vec<ConvergeRow>> {
    let file = ConfigFile::load(config)?;
    let study = converge_config(&file)?;
    let plane = plane_config(&file)?;
    let base = exterior_config(&file, true)?;
    let dr = (base.r_max - base.eps) / (base.n_r - 1) as f64;
    let configs = study
        .eps
        .iter()
        .map(|&eps| ExteriorSimConfig { eps, ..base.clone() }.with_radial_spacing(dr).map_err(CliError::from))
        .collect::<Result<Vec<_>>>()?;

    let limit = run_plane(&plane)?;
    write_run(&out.join("plane"), &limit, false)?;
    check_aborted(&limit)?;

    let rows = configs
        .par_iter()
        .map(|c| {
            let start = Instant::now();
            let record = run_exterior(c)?;
            let runtime_s = start.elapsed().as_secs_f64();
            write_run(&out.join(format!("eps_{}", c.eps)), &record, false)?;
            check_aborted(&record)?;
            let e = compare_to_limit(&record, &limit, study.extension)?;
            let (first, last) = (e[0].1, e[e.len() - 1].1);
            info!("eps = {}: e(T) = {last:e}, e(0) = {first:e}, {runtime_s:.1} s", c.eps);
            Ok(ConvergeRow { eps: c.eps, e_t: last, e_floor: first, runtime_s })
        })
        .collect::<Result<Vec<_>>>()?;

    write_csv(
        &out.join("converge.csv"),
        &["eps", "e_T", "e_floor", "runtime_s"],
        rows.iter().map(|r| [num(r.eps), num(r.e_t), num(r.e_floor), format!("{:.3}", r.runtime_s)]),
    )?;
    loglog(
        &out.join("converge.svg"),
        "weak-proxy error at the final time",
        "eps",
        "error",
        &[
            ("e_T", rows.iter().map(|r| (r.eps, r.e_t)).collect()),
            ("e_floor", rows.iter().map(|r| (r.eps, r.e_floor)).collect()),
        ],
    )?;

    let mut by_eps = rows.clone();
    by_eps.sort_by(|a, b| b.eps.total_cmp(&a.eps));
    if let Some(w) = by_eps.windows(2).find(|w| !(w[1].e_t < w[0].e_t)) {
        return Err(CliError::Acceptance(format!(
            "e(T) does not decrease from eps = {} ({:e}) to eps = {} ({:e})",
            w[0].eps, w[0].e_t, w[1].eps, w[1].e_t
        )));
    }
    Ok(rows)
}

pub fn picard_study(config: &Path, out: &Path) -> Result<vortexlab_core::exterior_solver::PicardResult> {
    let file = ConfigFile::load(config)?;
    let exterior = exterior_config(&file, false)?;
    let settings = picard_config(&file)?;
    let result = picard(&exterior, &settings)?;
    create_dir(out)?;
    let ratio = |n: usize| match n {
        0 => String::new(),
        _ => result.ratios[n - 1].map_or("n/a".to_string(), num),
    };
    write_csv(
        &out.join("picard.csv"),
        &["iter", "d_n", "ratio"],
        result.d.iter().enumerate().map(|(n, d)| [(n + 1).to_string(), num(*d), ratio(n)]),
    )?;
    for (n, r) in result.ratios.iter().enumerate() {
        if let Some(r) = r.filter(|r| !(*r <= PICARD_RATIO_LIMIT)) {
            return Err(CliError::Acceptance(format!("d_{}/d_{} = {r:e} exceeds {PICARD_RATIO_LIMIT}", n + 2, n + 1)));
        }
    }
    if result.ratios.iter().all(Option::is_none) {
        warn!("every Picard difference is below the noise floor {:e}", result.noise_floor);
    }
    Ok(result)
}
