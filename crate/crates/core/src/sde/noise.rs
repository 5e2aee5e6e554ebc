use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng;

/// Pre-drawn Brownian increments for the three driving motions plus one
/// uniform per step for bridge extremes.
///
/// There is one more step than the horizon needs. The left-right solver
/// restarts the sticky phase from the next grid node after a meeting that
/// falls inside a step, and the spare step covers the shift.
#[derive(Clone, Debug, PartialEq)]
pub struct DrivingNoise {
    step: f64,
    steps: usize,
    pub dl: Vec<f64>,
    pub dr: Vec<f64>,
    pub ds: Vec<f64>,
    /// Uniforms on (0, 1].
    pub u: Vec<f64>,
}

pub(crate) fn grid(step: f64, horizon: f64) -> Result<usize> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::param(
            "step",
            format!("must be positive, got {step}"),
        ));
    }
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::param(
            "horizon",
            format!("must be positive, got {horizon}"),
        ));
    }
    Ok((horizon / step - 1e-9).ceil() as usize)
}

pub fn sample_noise(step: f64, horizon: f64, seed: u64) -> Result<DrivingNoise> {
    let steps = grid(step, horizon)?;
    let n = steps + 1;
    let sd = step.sqrt();
    let mut r = rng::stream_rng(seed, rng::label("driving-noise"));
    let draw = |r: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
        (0..n)
            .map(|_| sd * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, r))
            .collect()
    };
    let dl = draw(&mut r);
    let dr = draw(&mut r);
    let ds = draw(&mut r);
    let u = (0..n).map(|_| 1.0 - r.random::<f64>()).collect();
    Ok(DrivingNoise {
        step,
        steps,
        dl,
        dr,
        ds,
        u,
    })
}

impl DrivingNoise {
    /// All increments zero, bridge extremes at the endpoints.
    pub fn zero(step: f64, horizon: f64) -> Result<Self> {
        let steps = grid(step, horizon)?;
        let n = steps + 1;
        Ok(DrivingNoise {
            step,
            steps,
            dl: vec![0.0; n],
            dr: vec![0.0; n],
            ds: vec![0.0; n],
            u: vec![1.0; n],
        })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Grid steps covering the horizon (one fewer than [`len`](Self::len)).
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Number of stored increments.
    pub fn len(&self) -> usize {
        self.dl.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dl.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        self.steps as f64 * self.step
    }

    /// Value of `B^s` at clock time `s`, linear between grid nodes.
    pub fn bs_at(&self, cum: &[f64], s: f64) -> f64 {
        let x = s / self.step;
        let k = (x.floor() as usize).min(cum.len() - 2);
        let f = x - k as f64;
        cum[k] + f * (cum[k + 1] - cum[k])
    }

    pub fn cumulative(inc: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(inc.len() + 1);
        let mut acc = 0.0;
        out.push(0.0);
        for &d in inc {
            acc += d;
            out.push(acc);
        }
        out
    }
}
