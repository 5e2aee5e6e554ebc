//! Fixed numerical steps, tolerances and verdict constants. Everything an
//! acceptance threshold depends on lives here.

/// Finite-difference step for the avoidance PDE residual.
pub const PDE_STEP: f64 = 1e-3;
/// Base step of the Richardson-extrapolated eps-derivative of `big_psi`.
pub const PSI_DERIVATIVE_STEP: f64 = 2e-3;
/// Finite-difference step for the supermartingale drift.
pub const DRIFT_STEP: f64 = 1e-3;
/// Absolute tolerance of the flux-bound quadrature.
pub const FLUX_QUAD_TOL: f64 = 1e-8;
/// Absolute tolerance of the inner and outer joint-density quadratures.
pub const DENSITY_QUAD_TOL: f64 = 1e-10;

/// Acceptance bound on the PDE residual.
pub const PDE_RESIDUAL_MAX: f64 = 1e-5;
/// Acceptance bound on |d Psi / d eps at 0 - psi|.
pub const PSI_DERIVATIVE_MAX: f64 = 1e-6;
/// Acceptance bound on |total mass - 1| of the joint density.
pub const DENSITY_MASS_MAX: f64 = 1e-6;

/// Default multiplier on the standard error in verdicts.
pub const K_SIGMA: f64 = 3.0;
/// KS and chi-square p-value threshold.
pub const P_THRESHOLD: f64 = 0.01;

/// Bias allowances `c * eps` for the lattice-to-continuum comparisons.
///
/// Calibrated with `calibrate_bias` (see `examples/calibrate.rs`) by running
/// each experiment at `eps` and `2 eps` with seed 1 and taking
/// `c = ceil(1.5 * max(slope, |bias(eps)| / eps))` with a floor of 1. The
/// backbone constants sit above the exact lattice offsets of the rescaled
/// intensity `2 - 2/(1+b)^2` and of the dispersion `rho`, both close to
/// `4 eps`.
pub mod bias {
    pub const DENSITY: f64 = 8.0;
    pub const AVOIDANCE: f64 = 1.0;
    pub const BACKBONE_INTENSITY: f64 = 8.0;
    pub const BACKBONE_DISPERSION: f64 = 8.0;
    /// Applied when an experiment is run with `beta` above the scaling
    /// regime; the allowance is multiplied by this factor.
    pub const OUTSIDE_REGIME_WIDENING: f64 = 4.0;
    /// Largest `beta` treated as inside the scaling regime.
    pub const REGIME_MAX_BETA: f64 = 0.05;
}
