use super::{DrivingNoise, GapPath};
use crate::error::{Error, Result};

/// Drifted gap `W + 2 tau` reflected at zero, on the clock of the apart
/// phase, built from the same increments as [`solve_lr`](super::solve_lr).
#[derive(Clone, Debug)]
pub struct ReflectedPath {
    path: GapPath,
}

// claim: reflected-gap
pub fn solve_reflected(noise: &DrivingNoise, l0: f64, r0: f64) -> Result<ReflectedPath> {
    if l0 > r0 {
        return Err(Error::param("start", "reflection needs l0 <= r0"));
    }
    Ok(ReflectedPath {
        path: GapPath::build(noise, 0, r0 - l0),
    })
}

impl ReflectedPath {
    /// `X` at clock time `tau`, exact between vertices.
    pub fn value_at(&self, tau: f64) -> f64 {
        let (k, lam) = self.path.segment_of(tau);
        let (_, w, _, inf) = self.path.on_segment(k, lam);
        w - inf.min(0.0)
    }

    /// Non-decreasing reflection term, twice the sticky clock.
    pub fn compensator_at(&self, tau: f64) -> f64 {
        let (k, lam) = self.path.segment_of(tau);
        let (_, _, _, inf) = self.path.on_segment(k, lam);
        (-inf).max(0.0)
    }

    /// `(tau, X)` at every vertex.
    pub fn vertices(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.path.len()).map(|k| (self.path.tau[k], self.path.w[k] - self.path.inf[k].min(0.0)))
    }

    pub fn horizon(&self) -> f64 {
        *self.path.tau.last().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sde::{sample_noise, solve_lr};

    #[test]
    fn non_negative_with_monotone_compensator() {
        let nz = sample_noise(1e-3, 2.0, 1).unwrap();
        let x = solve_reflected(&nz, 0.0, 0.0).unwrap();
        assert!(x.vertices().all(|(_, v)| v >= 0.0));
        let mut prev = 0.0;
        for k in 0..=200 {
            let c = x.compensator_at(k as f64 * 0.01);
            assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn gap_equals_reflected_on_clock_t() {
        for seed in 0..10 {
            let nz = sample_noise(1e-3, 2.0, seed).unwrap();
            let s = solve_lr(&nz, 0.0, 0.2).unwrap();
            let x = solve_reflected(&nz, 0.0, 0.2).unwrap();
            for k in 0..s.len() {
                let d = (s.r[k] - s.l[k]) - x.value_at(s.clock_t[k]);
                assert!(d.abs() < 1e-9, "seed {seed} k {k} d {d}");
            }
        }
    }

    #[test]
    fn crossed_start_rejected() {
        let nz = DrivingNoise::zero(0.1, 1.0).unwrap();
        assert!(solve_reflected(&nz, 1.0, 0.0).is_err());
    }
}
