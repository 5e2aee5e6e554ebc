use super::DrivingNoise;
use crate::error::{Error, Result};

/// Three-path system: a left path `l`, a second left path `l_hat` reflected
/// off `l` from the right, and a right path `r_hat`, stopped when `r_hat`
/// first reaches `l_hat`.
#[derive(Clone, Debug, PartialEq)]
pub struct LlrSolution {
    step: f64,
    pub l: Vec<f64>,
    pub l_hat: Vec<f64>,
    pub r_hat: Vec<f64>,
    /// Reflection term keeping `l_hat >= l`.
    pub compensator: Vec<f64>,
    /// Time at which `r_hat` reaches `l_hat`, if it does by the horizon.
    pub hit: Option<f64>,
}

impl LlrSolution {
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.l.len()
    }

    pub fn is_empty(&self) -> bool {
        self.l.is_empty()
    }

    /// `(x, y)` with `x = r_hat - l_hat` and `y = (r_hat - l) + (l_hat - l)`.
    pub fn xy(&self, k: usize) -> (f64, f64) {
        let x = self.r_hat[k] - self.l_hat[k];
        let y = (self.r_hat[k] - self.l[k]) + (self.l_hat[k] - self.l[k]);
        (x, y)
    }

    pub fn alive_at(&self, t: f64) -> bool {
        self.hit.is_none_or(|h| h > t)
    }
}

/// Euler scheme with a discrete Skorohod reflection. A step can also end
/// the run through a Brownian-bridge crossing test, so hits between grid
/// nodes are not missed. `l`, `l_hat` and `r_hat` are driven by the `dl`,
/// `ds` and `dr` streams.
// claim: three-path-system
pub fn solve_llr(noise: &DrivingNoise, eta: f64) -> Result<LlrSolution> {
    if !(eta >= 0.0) || !eta.is_finite() {
        return Err(Error::param(
            "eta",
            format!("must be finite and >= 0, got {eta}"),
        ));
    }
    let h = noise.step();
    let n = noise.steps();
    let mut sol = LlrSolution {
        step: h,
        l: vec![0.0],
        l_hat: vec![0.0],
        r_hat: vec![eta],
        compensator: vec![0.0],
        hit: None,
    };
    if eta == 0.0 {
        sol.hit = Some(0.0);
        return Ok(sol);
    }
    let (mut l, mut v, mut r, mut c) = (0.0, 0.0, eta, 0.0);
    for k in 0..n {
        let x0 = r - (l + v);
        l += noise.dl[k] - h;
        v += noise.ds[k] - noise.dl[k];
        if v < 0.0 {
            c -= v;
            v = 0.0;
        }
        r += noise.dr[k] + h;
        let x1 = r - (l + v);
        sol.l.push(l);
        sol.l_hat.push(l + v);
        sol.r_hat.push(r);
        sol.compensator.push(c);
        if x1 <= 0.0 {
            let lam = x0 / (x0 - x1);
            sol.hit = Some((k as f64 + lam) * h);
            break;
        }
        if noise.u[k] < (-x0 * x1 / h).exp() {
            sol.hit = Some((k as f64 + 0.5) * h);
            break;
        }
    }
    Ok(sol)
}
