use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::noise::grid;
use super::{bridge_extreme, DrivingNoise, GapPath};
use crate::error::{Error, Result};
use crate::rng;

/// Solution of the left-right SDE on the grid `t_k = k * step`.
#[derive(Clone, Debug, PartialEq)]
pub struct LrSolution {
    step: f64,
    pub l: Vec<f64>,
    pub r: Vec<f64>,
    /// Clock running while the paths are apart.
    pub clock_t: Vec<f64>,
    /// Clock running while the paths are together.
    pub clock_s: Vec<f64>,
    /// First time the paths are equal, if within the horizon.
    pub first_meeting: Option<f64>,
}

impl LrSolution {
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.l.len()
    }

    pub fn is_empty(&self) -> bool {
        self.l.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        (self.len() - 1) as f64 * self.step
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.step
    }

    fn interp(&self, v: &[f64], t: f64) -> Result<f64> {
        if !(0.0..=self.horizon() + 1e-12).contains(&t) {
            return Err(Error::param(
                "t",
                format!("outside [0, {}]", self.horizon()),
            ));
        }
        let x = t / self.step;
        let k = (x.floor() as usize).min(self.len() - 2);
        let f = (x - k as f64).clamp(0.0, 1.0);
        Ok(v[k] + f * (v[k + 1] - v[k]))
    }

    pub fn left_at(&self, t: f64) -> Result<f64> {
        self.interp(&self.l, t)
    }

    pub fn right_at(&self, t: f64) -> Result<f64> {
        self.interp(&self.r, t)
    }
}

/// `S_t`, the time spent together up to `t`.
// claim: sticky-clock
pub fn sticky_time(sol: &LrSolution, t: f64) -> Result<f64> {
    sol.interp(&sol.clock_s, t)
}

/// Solve the left-right SDE from `(l0, r0)` with the given noise.
///
/// While `l <= r` the pair is built from its time-change representation:
/// the gap is a drifted Brownian motion reflected at zero, run on the clock
/// `T`, and the clock `S` is half the reflection term. The running infimum
/// is taken over bridge minima so it carries no grid bias.
///
/// When `l0 > r0` the paths move independently until they meet, the meeting
/// time located through a bridge maximum; the sticky phase then restarts
/// from the meeting point with fresh increments.
// claim: left-right-sde
pub fn solve_lr(noise: &DrivingNoise, l0: f64, r0: f64) -> Result<LrSolution> {
    if !l0.is_finite() || !r0.is_finite() {
        return Err(Error::param("start", "must be finite"));
    }
    let n = noise.steps();
    let h = noise.step();
    let mut sol = LrSolution {
        step: h,
        l: Vec::with_capacity(n + 1),
        r: Vec::with_capacity(n + 1),
        clock_t: Vec::with_capacity(n + 1),
        clock_s: Vec::with_capacity(n + 1),
        first_meeting: None,
    };
    let (mut start_idx, mut t_start, mut base_l, mut gap0) = (0usize, 0.0, l0, r0 - l0);
    if l0 > r0 {
        let met = crossed_meeting(noise, l0, r0);
        let last = met.map_or(n, |m| m.0);
        let (mut bl, mut br) = (0.0, 0.0);
        for j in 0..=last {
            let t = j as f64 * h;
            sol.l.push(l0 + bl - t);
            sol.r.push(r0 + br + t);
            sol.clock_t.push(t);
            sol.clock_s.push(0.0);
            if j < n {
                bl += noise.dl[j];
                br += noise.dr[j];
            }
        }
        match met {
            None => return Ok(sol),
            Some((j, tm, mid)) => {
                sol.first_meeting = Some(tm);
                start_idx = j + 1;
                t_start = tm;
                base_l = mid;
                gap0 = 0.0;
            }
        }
    }
    let gp = GapPath::build(noise, start_idx, gap0);
    if gap0 == 0.0 && start_idx == 0 {
        sol.first_meeting = Some(0.0);
    } else if start_idx == 0 {
        sol.first_meeting = first_zero(&gp).filter(|&t| t <= noise.horizon());
    }
    let bs = DrivingNoise::cumulative(&noise.ds);
    let k0 = sol.l.len();
    let mut seg = 0usize;
    let g_at = |v: usize| gp.tau[v] + gp.s_at_vertex(v);
    for k in k0..=n {
        let t = k as f64 * h;
        let u = (t - t_start).max(0.0);
        while seg + 2 < gp.len() && g_at(seg + 1) < u {
            seg += 1;
        }
        if g_at(seg + 1) < u && seg + 2 >= gp.len() {
            return Err(Error::Degenerate("noise too short for the horizon".into()));
        }
        let lam = gp.invert_on_segment(seg, u);
        let (tau, w, a, inf) = gp.on_segment(seg, lam);
        let s = (-0.5 * inf).max(0.0);
        let dbm = w - gap0 - 2.0 * tau;
        let bl_t = 0.5 * (a - dbm);
        let l = base_l + bl_t + noise.bs_at(&bs, s) - u;
        sol.l.push(l);
        sol.r.push(l + (w - inf.min(0.0)));
        sol.clock_s.push(s);
        sol.clock_t.push(t - s);
    }
    Ok(sol)
}

/// Crossing test for one grid step of the shrinking gap of a crossed
/// start: `a` is the (negative) gap at the left node, `d` the increment of
/// `B^r - B^l`. Returns the fraction of the step at which the gap first
/// reaches zero, if it does.
#[inline]
fn crossing_in_step(a: f64, d: f64, h: f64, u: f64) -> Option<f64> {
    let b = a + d + 2.0 * h;
    let m = bridge_extreme(a, b, h, 2.0, u, false).max(b);
    if m < 0.0 {
        return None;
    }
    let denom = 2.0 * m - a - b;
    Some(if denom > 0.0 {
        (-a / denom).clamp(0.0, 1.0)
    } else {
        1.0
    })
}

/// Step, time and position at which paths started crossed (`l0 > r0`) first
/// meet, located through a bridge maximum of the shrinking gap.
fn crossed_meeting(noise: &DrivingNoise, l0: f64, r0: f64) -> Option<(usize, f64, f64)> {
    let h = noise.step();
    let (mut diff, mut sum) = (0.0, 0.0);
    for j in 0..noise.steps() {
        let a = (r0 - l0) + diff + 2.0 * (j as f64 * h);
        let (dl, dr) = (noise.dl[j], noise.dr[j]);
        if let Some(phi) = crossing_in_step(a, dr - dl, h, noise.u[j]) {
            let mid = 0.5 * (l0 + r0) + 0.5 * (sum + phi * (dl + dr));
            return Some((j, (j as f64 + phi) * h, mid));
        }
        diff += dr - dl;
        sum += dl + dr;
    }
    None
}

/// `S` at the horizon of `noise`, equal to the last entry of
/// `solve_lr(noise, l0, r0).clock_s` without building the paths.
pub fn sticky_time_at_horizon(noise: &DrivingNoise, l0: f64, r0: f64) -> Result<f64> {
    let incs = (0..noise.len()).map(|i| (noise.dr[i] - noise.dl[i], noise.u[i]));
    horizon_clock(noise.step(), noise.steps(), l0, r0, incs)
}

/// `S` at time `horizon` for fresh noise drawn from `seed`, with the same
/// law as `sticky_time_at_horizon(&sample_noise(step, horizon, seed), ..)`.
/// Only the gap increments are drawn and nothing is stored.
pub fn sample_sticky_time(step: f64, horizon: f64, l0: f64, r0: f64, seed: u64) -> Result<f64> {
    let steps = grid(step, horizon)?;
    let sd = (2.0 * step).sqrt();
    let mut r = rng::stream_rng(seed, rng::label("sticky-gap"));
    let incs = (0..=steps).map(move |_| {
        let z: f64 = StandardNormal.sample(&mut r);
        (sd * z, 1.0 - r.random::<f64>())
    });
    horizon_clock(step, steps, l0, r0, incs)
}

/// Terminal sticky clock from a stream of `(B^r - B^l increment, bridge
/// uniform)` pairs, `steps + 1` of them, on a grid of width `h`.
fn horizon_clock(
    h: f64,
    steps: usize,
    l0: f64,
    r0: f64,
    mut incs: impl Iterator<Item = (f64, f64)>,
) -> Result<f64> {
    if !l0.is_finite() || !r0.is_finite() {
        return Err(Error::param("start", "must be finite"));
    }
    let short = || Error::Degenerate("noise too short for the horizon".into());
    let horizon = steps as f64 * h;
    let (mut t_start, mut gap0) = (0.0, r0 - l0);
    if l0 > r0 {
        let mut diff = 0.0;
        let mut met = None;
        for j in 0..steps {
            let (d, u) = incs.next().ok_or_else(short)?;
            let a = (r0 - l0) + diff + 2.0 * (j as f64 * h);
            if let Some(phi) = crossing_in_step(a, d, h, u) {
                met = Some((j as f64 + phi) * h);
                break;
            }
            diff += d;
        }
        match met {
            None => return Ok(0.0),
            Some(tm) => (t_start, gap0) = (tm, 0.0),
        }
    }
    // walk the refined gap path vertex by vertex, as `GapPath::build` lays
    // it out, until the clock `tau + S(tau)` passes the remaining time
    let target = (horizon - t_start).max(0.0);
    let g = |tau: f64, inf: f64| tau + (-0.5 * inf).max(0.0);
    let (mut tau, mut w, mut inf) = (0.0, gap0, gap0);
    let mut k = 0usize;
    for (d, u) in incs {
        let w1 = w + d + 2.0 * h;
        let m = bridge_extreme(w, w1, h, 2.0, u, true);
        let denom = (w - m) + (w1 - m);
        let theta = if denom > 0.0 { (w - m) / denom } else { 0.5 };
        let m = m.min(w).min(w1);
        let inf_m = inf.min(m);
        let tau_m = tau + theta * h;
        k += 1;
        let tau1 = k as f64 * h;
        let inf1 = inf_m.min(w1);
        for (t, x, i) in [
            ([tau, tau_m], [w, m], [inf, inf_m]),
            ([tau_m, tau1], [m, w1], [inf_m, inf1]),
        ] {
            if g(t[1], i[1]) >= target {
                let seg = GapPath {
                    tau: t.to_vec(),
                    w: x.to_vec(),
                    a: vec![0.0; 2],
                    inf: i.to_vec(),
                };
                let lam = seg.invert_on_segment(0, target);
                let (_, _, _, inf) = seg.on_segment(0, lam);
                return Ok((-0.5 * inf).max(0.0));
            }
        }
        tau = tau1;
        w = w1;
        inf = inf1;
    }
    Err(short())
}

/// First clock time at which the gap path reaches zero.
fn first_zero(gp: &GapPath) -> Option<f64> {
    let v = gp.w.iter().position(|&w| w <= 0.0)?;
    if v == 0 {
        return Some(0.0);
    }
    let (w0, w1) = (gp.w[v - 1], gp.w[v]);
    let lam = w0 / (w0 - w1);
    Some(gp.tau[v - 1] + lam * (gp.tau[v] - gp.tau[v - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sde::sample_noise;

    #[test]
    fn zero_noise_from_common_start() {
        let z = DrivingNoise::zero(0.01, 1.0).unwrap();
        let s = solve_lr(&z, 0.0, 0.0).unwrap();
        for k in 0..s.len() {
            let t = s.time(k);
            assert!((s.l[k] + t).abs() < 1e-12);
            assert!((s.r[k] - t).abs() < 1e-12);
            assert!(s.clock_s[k].abs() < 1e-12);
        }
    }

    #[test]
    fn zero_noise_crossed_start_meets_at_half() {
        let z = DrivingNoise::zero(0.01, 2.0).unwrap();
        let s = solve_lr(&z, 1.0, 0.0).unwrap();
        let tm = s.first_meeting.unwrap();
        assert!((tm - 0.5).abs() < 1e-9, "{tm}");
        let l = s.left_at(1.5).unwrap();
        let r = s.right_at(1.5).unwrap();
        assert!((l - (0.5 - 1.0)).abs() < 1e-9);
        assert!((r - (0.5 + 1.0)).abs() < 1e-9);
    }

    #[test]
    fn ordered_and_clocks_add_up() {
        for seed in 0..20 {
            let nz = sample_noise(1e-3, 2.0, seed).unwrap();
            let s = solve_lr(&nz, 0.0, 0.0).unwrap();
            for k in 0..s.len() {
                assert!(s.l[k] <= s.r[k]);
                let t = s.time(k);
                assert!((s.clock_t[k] + s.clock_s[k] - t).abs() <= 1e-12 * t.max(1.0));
                assert!(s.clock_s[k] >= 0.0 && s.clock_t[k] >= -1e-15);
            }
            assert!(s.clock_s.windows(2).all(|w| w[1] >= w[0] - 1e-15));
            assert!(s.clock_t.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        }
    }

    #[test]
    fn crossed_start_ordered_after_meeting() {
        for seed in 0..20 {
            let nz = sample_noise(1e-3, 3.0, seed).unwrap();
            let s = solve_lr(&nz, 1.0, 0.0).unwrap();
            let tm = s.first_meeting.expect("drift brings the paths together");
            for k in 0..s.len() {
                if s.time(k) > tm + 1e-3 {
                    assert!(s.l[k] <= s.r[k]);
                }
            }
        }
    }

    #[test]
    fn reproducible_from_seed() {
        let a = solve_lr(&sample_noise(1e-3, 1.0, 5).unwrap(), 0.0, 0.3).unwrap();
        let b = solve_lr(&sample_noise(1e-3, 1.0, 5).unwrap(), 0.0, 0.3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn terminal_clock_matches_full_solution() {
        for seed in 0..30 {
            let nz = sample_noise(1e-3, 2.0, seed).unwrap();
            for (l0, r0) in [(0.0, 0.0), (0.0, 0.4), (0.3, 0.0)] {
                let full = solve_lr(&nz, l0, r0).unwrap();
                let last = *full.clock_s.last().unwrap();
                assert_eq!(sticky_time_at_horizon(&nz, l0, r0).unwrap(), last);
            }
        }
    }

    #[test]
    fn sampled_clock_matches_noise_with_the_same_draws() {
        let (h, horizon) = (1e-3, 2.0);
        for seed in 0..20 {
            let mut nz = DrivingNoise::zero(h, horizon).unwrap();
            let mut r = rng::stream_rng(seed, rng::label("sticky-gap"));
            for i in 0..nz.len() {
                let z: f64 = StandardNormal.sample(&mut r);
                nz.dr[i] = (2.0 * h).sqrt() * z;
                nz.u[i] = 1.0 - r.random::<f64>();
            }
            for (l0, r0) in [(0.0, 0.0), (0.0, 0.4), (0.3, 0.0)] {
                assert_eq!(
                    sample_sticky_time(h, horizon, l0, r0, seed).unwrap(),
                    sticky_time_at_horizon(&nz, l0, r0).unwrap()
                );
            }
        }
    }

    #[test]
    fn rejects_nonfinite_start() {
        let z = DrivingNoise::zero(0.1, 1.0).unwrap();
        assert!(solve_lr(&z, f64::NAN, 0.0).is_err());
    }
}
