//! Deterministic self-consistency of the closed forms.

use std::time::Instant;

use super::{ExperimentReport, TargetKind};
use crate::closed_forms::{max_bm_joint_mass, pde_residual, psi_eps_derivative_at_zero, small_psi};
use crate::error::Result;
use crate::tolerances::{DENSITY_MASS_MAX, PDE_RESIDUAL_MAX, PDE_STEP, PSI_DERIVATIVE_MAX};

/// Grids of the analytic checks.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticConfig {
    /// `(min, max, points)` in eps for the PDE residual.
    pub eps_grid: (f64, f64, usize),
    /// `(min, max, points)` in t for the PDE residual.
    pub t_grid: (f64, f64, usize),
    /// `(min, max, points)` in t for the eps-derivative, log spaced.
    pub derivative_grid: (f64, f64, usize),
    pub mass_times: Vec<f64>,
}

impl Default for AnalyticConfig {
    fn default() -> Self {
        AnalyticConfig {
            eps_grid: (0.1, 3.0, 20),
            t_grid: (0.2, 5.0, 20),
            derivative_grid: (0.1, 10.0, 50),
            mass_times: vec![0.25, 1.0, 4.0],
        }
    }
}

fn linspace((a, b, n): (f64, f64, usize)) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

fn logspace((a, b, n): (f64, f64, usize)) -> Vec<f64> {
    linspace((a.ln(), b.ln(), n))
        .into_iter()
        .map(f64::exp)
        .collect()
}

// claim: analytic-checks
pub fn analytic_checks(cfg: &AnalyticConfig) -> Result<Vec<ExperimentReport>> {
    let t0 = Instant::now();
    let mut pde: f64 = 0.0;
    for &e in &linspace(cfg.eps_grid) {
        for &t in &linspace(cfg.t_grid) {
            pde = pde.max(pde_residual(e, t, PDE_STEP)?.abs());
        }
    }
    let mut der: f64 = 0.0;
    for &t in &logspace(cfg.derivative_grid) {
        der = der.max((psi_eps_derivative_at_zero(t)? - small_psi(t)?).abs());
    }
    let mut mass: f64 = 0.0;
    for &t in &cfg.mass_times {
        mass = mass.max((max_bm_joint_mass(t)? - 1.0).abs());
    }
    let wall = t0.elapsed().as_secs_f64();
    let mk = |name: &str, est: f64, bound: f64| {
        let mut r = ExperimentReport::new(name, est, 0.0, bound, TargetKind::UpperBound, 0);
        r.wall_time = wall;
        r
    };
    Ok(vec![
        mk("analytic-pde-residual", pde, PDE_RESIDUAL_MAX)
            .param("eps_range", vec![cfg.eps_grid.0, cfg.eps_grid.1])
            .param("t_range", vec![cfg.t_grid.0, cfg.t_grid.1])
            .param("grid", vec![cfg.eps_grid.2, cfg.t_grid.2]),
        mk("analytic-eps-derivative", der, PSI_DERIVATIVE_MAX)
            .param(
                "t_range",
                vec![cfg.derivative_grid.0, cfg.derivative_grid.1],
            )
            .param("points", cfg.derivative_grid.2),
        mk("analytic-joint-mass", mass, DENSITY_MASS_MAX).param("times", cfg.mass_times.clone()),
    ])
}
