//! Experiments on the continuum solvers: the sticky-time law and the
//! hitting bound for the three-path system.

use std::time::Instant;

use super::{
    par_replicas, replica_seed, require_positive, require_replicas, ExperimentReport, TargetKind,
};
use crate::closed_forms::{big_psi, supermartingale_f};
use crate::error::{Error, Result};
use crate::sde::{sample_noise, sample_sticky_time, solve_llr};
use crate::stats::{ks_one_sample, mean_stderr, paired_difference, proportion, wilson_interval};
use crate::tolerances::P_THRESHOLD;

/// Two-sided confidence matching a 3-sigma normal band.
const WILSON_CONFIDENCE: f64 = 0.9973;

/// `S_horizon` for `replicas` independent runs from `(l0, r0)`.
pub fn sticky_times(
    h: f64,
    horizon: f64,
    replicas: usize,
    l0: f64,
    r0: f64,
    seed: u64,
) -> Result<Vec<f64>> {
    require_positive("h", h)?;
    require_positive("horizon", horizon)?;
    if h > horizon {
        return Err(Error::param("h", "must not exceed the horizon"));
    }
    par_replicas(replicas, |i| {
        sample_sticky_time(h, horizon, l0, r0, replica_seed(seed, "sticky", i))
    })
}

fn exp4_cdf(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        1.0 - (-4.0 * s).exp()
    }
}

/// Law of the total time spent together. When the paths start together or
/// crossed they meet for sure and `S` is exponential with rate 4. When
/// `l0 < r0` the paths never meet with probability `1 - exp(-2 (r0 - l0))`,
/// and given that they meet `S` is again exponential with rate 4.
// claim: sticky-time-experiment
pub fn sticky_time_experiment(
    h: f64,
    horizon: f64,
    replicas: usize,
    l0: f64,
    r0: f64,
    seed: u64,
) -> Result<Vec<ExperimentReport>> {
    let t0 = Instant::now();
    require_replicas(replicas, 10)?;
    let s = sticky_times(h, horizon, replicas, l0, r0, seed)?;
    let (mean, _) = mean_stderr(&s)?;
    let tag = |r: ExperimentReport| {
        r.param("h", h)
            .param("horizon", horizon)
            .param("l0", l0)
            .param("r0", r0)
            .param("replicas", replicas)
            .extra("mean_sticky_time", mean)
            .replicas(replicas)
    };
    let mut out = Vec::new();
    if l0 >= r0 {
        let ks = ks_one_sample(&s, exp4_cdf)?;
        out.push(tag(ExperimentReport::new(
            "sticky-ks",
            ks.p_value,
            0.0,
            P_THRESHOLD,
            TargetKind::PValue,
            seed,
        )
        .extra("ks_statistic", ks.statistic)));
    } else {
        let zeros = s.iter().filter(|&&x| x == 0.0).count() as u64;
        let n = s.len() as u64;
        let (p, se) = proportion(zeros, n)?;
        let (lo, hi) = wilson_interval(zeros, n, WILSON_CONFIDENCE)?;
        let target = 1.0 - (-2.0 * (r0 - l0)).exp();
        out.push(tag(ExperimentReport::new(
            "sticky-atom",
            p,
            se,
            target,
            TargetKind::Interval { lo, hi },
            seed,
        )));
        let tail: Vec<f64> = s.iter().copied().filter(|&x| x > 0.0).collect();
        if tail.len() >= 10 {
            let ks = ks_one_sample(&tail, exp4_cdf)?;
            out.push(tag(ExperimentReport::new(
                "sticky-tail-ks",
                ks.p_value,
                0.0,
                P_THRESHOLD,
                TargetKind::PValue,
                seed,
            )
            .extra("ks_statistic", ks.statistic)
            .extra("tail_samples", tail.len() as f64)));
        }
    }
    let wall = t0.elapsed().as_secs_f64();
    for r in &mut out {
        r.wall_time = wall;
    }
    Ok(out)
}

/// Survival of the three-path system up to `t` against `big_psi(eta, t)^2`,
/// and the checkpoint means of `F(t - s, X_s, Y_s) 1{alive at s}` at five
/// equally spaced `s`, which must not increase beyond noise.
// claim: hitting-bound-experiment
pub fn hitting_bound_experiment(
    eta: f64,
    t: f64,
    h: f64,
    replicas: usize,
    seed: u64,
) -> Result<Vec<ExperimentReport>> {
    let t0 = Instant::now();
    require_positive("t", t)?;
    require_positive("h", h)?;
    require_replicas(replicas, 10)?;
    if !(eta >= 0.0) || !eta.is_finite() {
        return Err(Error::param(
            "eta",
            format!("must be finite and >= 0, got {eta}"),
        ));
    }
    const CHECKPOINTS: usize = 5;
    let per = par_replicas(replicas, |i| {
        let noise = sample_noise(h, t, replica_seed(seed, "hitting", i))?;
        let sol = solve_llr(&noise, eta)?;
        let mut vals = [0.0; CHECKPOINTS];
        for (j, v) in vals.iter_mut().enumerate() {
            let s = t * j as f64 / (CHECKPOINTS - 1) as f64;
            let k = ((s / h).round() as usize).min(sol.len() - 1);
            let alive = if j == 0 { eta > 0.0 } else { sol.alive_at(s) };
            *v = if alive {
                let (x, y) = sol.xy(k);
                supermartingale_f(t - s, x.max(0.0), y.max(0.0))?
            } else {
                0.0
            };
        }
        Ok((sol.alive_at(t) && eta > 0.0, vals))
    })?;
    let alive = per.iter().filter(|(a, _)| *a).count() as u64;
    let (p, se) = proportion(alive, replicas as u64)?;
    let bound = if eta == 0.0 {
        0.0
    } else {
        big_psi(eta, t)?.powi(2)
    };
    let cols: Vec<Vec<f64>> = (0..CHECKPOINTS)
        .map(|j| per.iter().map(|(_, v)| v[j]).collect())
        .collect();
    let mut worst = (f64::NEG_INFINITY, 0.0);
    let mut means = Vec::new();
    for j in 0..CHECKPOINTS {
        means.push(mean_stderr(&cols[j])?.0);
        if j + 1 < CHECKPOINTS {
            // increase from checkpoint j to j + 1 with its paired error
            let (d, dse) = paired_difference(&cols[j + 1], &cols[j])?;
            if d - 3.0 * dse > worst.0 - 3.0 * worst.1 {
                worst = (d, dse);
            }
        }
    }
    let wall = t0.elapsed().as_secs_f64();
    let tag = |mut r: ExperimentReport| {
        r.wall_time = wall;
        r.param("eta", eta)
            .param("t", t)
            .param("h", h)
            .param("replicas", replicas)
            .replicas(replicas)
    };
    let mut sm = tag(ExperimentReport::new(
        "hitting-supermartingale",
        worst.0,
        worst.1,
        0.0,
        TargetKind::UpperBound,
        seed,
    ));
    for (j, m) in means.iter().enumerate() {
        sm = sm.extra(&format!("checkpoint_{j}"), *m);
    }
    Ok(vec![
        tag(ExperimentReport::new(
            "hitting-survival",
            p,
            se,
            bound,
            TargetKind::UpperBound,
            seed,
        )),
        sm,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sticky_law_small_run() {
        let r = sticky_time_experiment(1e-3, 4.0, 400, 0.0, 0.0, 1).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].pass, "{:?}", r[0]);
        let m = r[0].extra["mean_sticky_time"];
        assert!((m - 0.25).abs() < 0.05, "{m}");
    }

    #[test]
    fn apart_start_has_an_atom() {
        let r = sticky_time_experiment(1e-3, 4.0, 400, 0.0, 1.0, 2).unwrap();
        assert_eq!(r[0].name, "sticky-atom");
        assert!(r[0].pass, "{:?}", r[0]);
    }

    #[test]
    fn zero_eta_never_survives() {
        let r = hitting_bound_experiment(0.0, 0.5, 1e-3, 20, 0).unwrap();
        assert_eq!(r[0].estimate, 0.0);
        assert!(r[0].pass);
    }

    #[test]
    fn first_checkpoint_is_the_bound() {
        // at s = 0, F(t, eta, eta) = big_psi(eta, t)^2 exactly
        let r = hitting_bound_experiment(1.0, 1.0, 1e-3, 20, 0).unwrap();
        let c0 = r[1].extra["checkpoint_0"];
        assert!((c0 - big_psi(1.0, 1.0).unwrap().powi(2)).abs() < 1e-12);
    }
}
