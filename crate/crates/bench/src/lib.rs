//! Shared fixtures for the criterion benchmarks.

use vortexlab_core::plane_solver::init_particles;
use vortexlab_core::{
    ExteriorSimConfig, FilterParams, InitialVorticity, Lattice, ParticleEnsemble, Point2, PolarField,
};

/// Default bump on a square lattice of spacing `h`.
pub fn bump_ensemble(h: f64) -> ParticleEnsemble {
    init_particles(&InitialVorticity::default(), h, Lattice::Square, FilterParams::plane(1.0, 1.0).unwrap()).unwrap()
}

/// Points spread over `[1e-3, 40]` in radius, for kernel evaluation.
pub fn sample_points(n: usize) -> Vec<Point2> {
    (0..n)
        .map(|i| {
            let s = i as f64 / n as f64;
            Point2::from_polar(1e-3 * (4e4f64).powf(s), 2.399963 * i as f64)
        })
        .collect()
}

/// Default initial data on an exterior grid with `n_theta` angles.
pub fn exterior_field(n_theta: usize) -> (PolarField, FilterParams, usize) {
    let config = ExteriorSimConfig { n_theta, n_modes: n_theta / 2 - 1, ..Default::default() };
    let q = PolarField::from_fn(config.grid().unwrap(), |x| config.q0.eval(x)).unwrap();
    let params = FilterParams::new(config.alpha, config.eps, config.gamma, q.mass()).unwrap();
    (q, params, config.n_modes)
}
