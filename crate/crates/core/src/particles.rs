//! Branching-coalescing particle system driven by an arrow field.
//!
//! At each step every occupied site sends a particle along each of its
//! arrows; particles landing on the same site merge. Sets are kept as
//! sorted site lists so merging is a sorted dedup.

use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{is_even, trace_dual_extremal, ArrowConfig, Side, SiteState, Window};
use crate::rng;

/// Occupied even sites at one time, sorted and without repeats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParticleSet {
    pub t: i64,
    pub sites: Vec<i64>,
}

impl ParticleSet {
    pub fn new(t: i64, mut sites: Vec<i64>) -> Result<Self> {
        sites.sort_unstable();
        sites.dedup();
        if let Some(&x) = sites.iter().find(|&&x| !is_even(x, t)) {
            return Err(Error::InvalidSite { x, t, kind: "even" });
        }
        Ok(ParticleSet { t, sites })
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.sites.binary_search(&x).is_ok()
    }

    /// Number of occupied sites in `[lo, hi]`.
    pub fn count_in(&self, lo: i64, hi: i64) -> usize {
        if hi < lo {
            return 0;
        }
        let a = self.sites.partition_point(|&x| x < lo);
        let b = self.sites.partition_point(|&x| x <= hi);
        b - a
    }

    pub fn restrict(&self, lo: i64, hi: i64) -> ParticleSet {
        ParticleSet {
            t: self.t,
            sites: self
                .sites
                .iter()
                .copied()
                .filter(|&x| x >= lo && x <= hi)
                .collect(),
        }
    }
}

/// Every even site of `[lo, hi]` at time `t`.
pub fn full_slice(t: i64, lo: i64, hi: i64) -> ParticleSet {
    let first = if is_even(lo, t) { lo } else { lo + 1 };
    ParticleSet {
        t,
        sites: (first..=hi).step_by(2).collect(),
    }
}

/// Independent Bernoulli(`p`) occupation of the even sites of `[lo, hi]`.
pub fn bernoulli_slice(t: i64, lo: i64, hi: i64, p: f64, seed: u64) -> ParticleSet {
    let mut r = rng::stream_rng(seed, rng::label("bernoulli-slice"));
    let mut s = full_slice(t, lo, hi);
    s.sites.retain(|_| r.random::<f64>() < p);
    s
}

/// Edges used between times `t` and `t + 1`, as `(x at t, x at t + 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfStepEdges {
    pub t: i64,
    pub edges: Vec<(i64, i64)>,
}

impl HalfStepEdges {
    /// Endpoints at time `t`.
    pub fn lower(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.edges.iter().map(|e| e.0).collect();
        v.dedup();
        v
    }

    /// Endpoints at time `t + 1`.
    pub fn upper(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.edges.iter().map(|e| e.1).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn contains(&self, from: i64, to: i64) -> bool {
        self.edges.binary_search(&(from, to)).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub slices: Vec<ParticleSet>,
    pub edges: Vec<HalfStepEdges>,
}

fn check_row(cfg: &ArrowConfig, set: &ParticleSet) -> Result<Window> {
    let w = cfg.window();
    if set.t < w.t_min || set.t >= w.t_max {
        return Err(Error::param(
            "t",
            format!("time {} outside [{}, {})", set.t, w.t_min, w.t_max),
        ));
    }
    if let (Some(&a), Some(&b)) = (set.sites.first(), set.sites.last()) {
        if !w.strictly_inside_x(a) {
            return Err(Error::BoundaryTouch { x: a, t: set.t });
        }
        if !w.strictly_inside_x(b) {
            return Err(Error::BoundaryTouch { x: b, t: set.t });
        }
    }
    Ok(w)
}

/// One step, recording the edges used.
// claim: half-step-edges
pub fn step(cfg: &ArrowConfig, set: &ParticleSet) -> Result<(HalfStepEdges, ParticleSet)> {
    check_row(cfg, set)?;
    let t = set.t;
    let mut edges = Vec::with_capacity(set.len() * 2);
    for &x in &set.sites {
        let s = cfg.state(x, t);
        if s.has_left() {
            edges.push((x, x - 1));
        }
        if s.has_right() {
            edges.push((x, x + 1));
        }
    }
    let mut next = Vec::with_capacity(edges.len());
    step_sites(cfg, &set.sites, t, &mut next);
    Ok((
        HalfStepEdges { t, edges },
        ParticleSet {
            t: t + 1,
            sites: next,
        },
    ))
}

/// Successor sites of a sorted list, written sorted and deduplicated into
/// `out`. No boundary checks.
#[inline]
pub fn step_sites(cfg: &ArrowConfig, sites: &[i64], t: i64, out: &mut Vec<i64>) {
    out.clear();
    for &x in sites {
        let (l, r) = match cfg.state(x, t) {
            SiteState::LeftOnly => (true, false),
            SiteState::RightOnly => (false, true),
            SiteState::Both => (true, true),
        };
        // targets come in increasing order up to one overlap with the
        // previous site's right target
        if l && out.last() != Some(&(x - 1)) {
            out.push(x - 1);
        }
        if r {
            out.push(x + 1);
        }
    }
}

/// Evolve `initial` up to time `t_end`, keeping every slice and edge set.
pub fn evolve(cfg: &ArrowConfig, initial: &ParticleSet, t_end: i64) -> Result<Trajectory> {
    let mut slices = vec![initial.clone()];
    let mut edges = Vec::new();
    while slices.last().unwrap().t < t_end {
        let (e, next) = step(cfg, slices.last().unwrap())?;
        edges.push(e);
        slices.push(next);
    }
    Ok(Trajectory { slices, edges })
}

/// Lazy iterator over successive slices.
pub struct Evolution<'a> {
    cfg: &'a ArrowConfig,
    current: Option<ParticleSet>,
    failed: bool,
}

pub fn iter_evolution(cfg: &ArrowConfig, initial: ParticleSet) -> Evolution<'_> {
    Evolution {
        cfg,
        current: Some(initial),
        failed: false,
    }
}

impl Iterator for Evolution<'_> {
    type Item = Result<ParticleSet>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let cur = self.current.take()?;
        if cur.t < self.cfg.window().t_max {
            match check_row(self.cfg, &cur) {
                Ok(_) => {
                    let mut next = Vec::with_capacity(cur.len() + 1);
                    step_sites(self.cfg, &cur.sites, cur.t, &mut next);
                    self.current = Some(ParticleSet {
                        t: cur.t + 1,
                        sites: next,
                    });
                }
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e));
                }
            }
        }
        Some(Ok(cur))
    }
}

/// Evolve to `t_end`, dropping particles that can no longer reach
/// `[lo, hi]` at `t_end`. Exact on `[lo, hi]`: paths move one site per step
/// and only merge, so pruned particles cannot affect what arrives there.
pub fn evolve_pruned(
    cfg: &ArrowConfig,
    initial: &ParticleSet,
    t_end: i64,
    lo: i64,
    hi: i64,
) -> Result<ParticleSet> {
    let mut cur = initial.sites.clone();
    let mut next = Vec::with_capacity(cur.len() + 1);
    let mut t = initial.t;
    let w = cfg.window();
    if t_end > w.t_max {
        return Err(Error::param("t_end", "beyond the top of the window"));
    }
    loop {
        let reach = t_end - t;
        let a = cur.partition_point(|&x| x < lo - reach);
        let b = cur.partition_point(|&x| x <= hi + reach);
        if a > 0 || b < cur.len() {
            cur.truncate(b);
            cur.drain(..a);
        }
        if t == t_end {
            break;
        }
        if let (Some(&x0), Some(&x1)) = (cur.first(), cur.last()) {
            if !w.strictly_inside_x(x0) {
                return Err(Error::BoundaryTouch { x: x0, t });
            }
            if !w.strictly_inside_x(x1) {
                return Err(Error::BoundaryTouch { x: x1, t });
            }
        }
        step_sites(cfg, &cur, t, &mut next);
        std::mem::swap(&mut cur, &mut next);
        t += 1;
    }
    Ok(ParticleSet {
        t: t_end,
        sites: cur,
    })
}

/// Occupation of `[lo, hi]` at the top of the window for the system
/// started from every even site at the bottom, together with the bottom of
/// the dual wedge over `[lo, hi]` if it closes inside the window.
///
/// Only particles strictly inside the wedge bounded by the dual right-most
/// path from the odd site left of the interval and the dual left-most path
/// from the odd site right of it are evolved: forward paths cannot enter
/// that wedge from outside, so the result on `[lo, hi]` is exact.
// claim: wedge-pruned-evolution
pub fn full_start_in_wedge(
    cfg: &ArrowConfig,
    lo: i64,
    hi: i64,
) -> Result<(ParticleSet, Option<i64>)> {
    let w = cfg.window();
    let top = w.t_max;
    let first = if is_even(lo, top) { lo } else { lo + 1 };
    let last = if is_even(hi, top) { hi } else { hi - 1 };
    if last < first {
        return Err(Error::param("interval", "contains no even site"));
    }
    let dual = cfg.dual();
    let left = trace_dual_extremal(&dual, (first - 1, top), Side::Right)?;
    let right = trace_dual_extremal(&dual, (last + 1, top), Side::Left)?;
    let bottom = (w.t_min..top).rev().find(|&u| left.at(u) == right.at(u));
    if let Some(b) = bottom {
        return Ok((
            ParticleSet {
                t: top,
                sites: Vec::new(),
            },
            Some(b),
        ));
    }
    let inside = |t: i64| (left.at(t).unwrap(), right.at(t).unwrap());
    let (a, b) = inside(w.t_min);
    let mut cur = full_slice(w.t_min, a + 1, b - 1).sites;
    let mut next = Vec::with_capacity(cur.len() + 1);
    for t in w.t_min..top {
        step_sites(cfg, &cur, t, &mut next);
        std::mem::swap(&mut cur, &mut next);
        let (a, b) = inside(t + 1);
        let i = cur.partition_point(|&x| x < a);
        let j = cur.partition_point(|&x| x <= b);
        cur.truncate(j);
        cur.drain(..i);
    }
    Ok((ParticleSet { t: top, sites: cur }, None))
}

/// Invariant occupation probability of the particle system.
// claim: bernoulli-invariant-intensity
pub fn bernoulli_intensity(beta: f64) -> f64 {
    4.0 * beta / ((1.0 + beta) * (1.0 + beta))
}

/// Slice at the top of the window of the system started from every site
/// `burn_in` steps earlier, restricted to the sites that the full start
/// covers with its light cone inside the window.
// claim: backbone-approximation
pub fn backbone_slice(cfg: &ArrowConfig, burn_in: i64) -> Result<ParticleSet> {
    let w = cfg.window();
    backbone_slice_in(cfg, burn_in, w.x_min + burn_in + 1, w.x_max - burn_in - 1)
}

pub fn backbone_slice_in(cfg: &ArrowConfig, burn_in: i64, lo: i64, hi: i64) -> Result<ParticleSet> {
    let w = cfg.window();
    if burn_in < 0 || w.t_max - burn_in < w.t_min {
        return Err(Error::param(
            "burn_in",
            "must fit in the window's time extent",
        ));
    }
    if hi < lo {
        return Err(Error::InvalidWindow(
            "window too narrow for the burn-in".into(),
        ));
    }
    let t0 = w.t_max - burn_in;
    let start = full_slice(
        t0,
        (lo - burn_in).max(w.x_min + 1),
        (hi + burn_in).min(w.x_max - 1),
    );
    evolve_pruned(cfg, &start, w.t_max, lo, hi)
}

/// Per-site edge statistics of one half step, over lower sites in `[lo, hi]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HalfStepStats {
    pub sites: u64,
    pub left: u64,
    pub right: u64,
    pub both: u64,
    /// Right edge out of `x` against left edge out of `x + 2`, which share
    /// their upper endpoint.
    pub shared_top: [[u64; 2]; 2],
}

pub fn half_step_statistics(edges: &HalfStepEdges, lo: i64, hi: i64) -> HalfStepStats {
    let mut st = HalfStepStats::default();
    let first = if is_even(lo, edges.t) { lo } else { lo + 1 };
    for x in (first..=hi).step_by(2) {
        let l = edges.contains(x, x - 1);
        let r = edges.contains(x, x + 1);
        st.sites += 1;
        st.left += l as u64;
        st.right += r as u64;
        st.both += (l && r) as u64;
        if x + 2 <= hi {
            let l2 = edges.contains(x + 2, x + 1);
            st.shared_top[r as usize][l2 as usize] += 1;
        }
    }
    st
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::sample_config;

    #[test]
    fn wedge_pruning_matches_cone_pruning() {
        let mut closed = 0;
        for seed in 0..200u64 {
            let beta = [0.05, 0.2, 0.6][seed as usize % 3];
            let n = 30 + (seed as i64 % 7);
            let (lo, hi) = (-3 - (seed as i64 % 4), 4 + (seed as i64 % 5));
            let c = sample_config(
                Window::new(lo - n - 3, hi + n + 3, 0, n).unwrap(),
                beta,
                seed,
            )
            .unwrap();
            let full =
                evolve_pruned(&c, &full_slice(0, lo - n - 1, hi + n + 1), n, lo, hi).unwrap();
            let (w, bottom) = full_start_in_wedge(&c, lo, hi).unwrap();
            assert_eq!(w.sites, full.sites, "seed {seed}");
            // the interval is empty exactly when the wedge closes
            assert_eq!(bottom.is_some(), full.is_empty(), "seed {seed}");
            closed += bottom.is_some() as u32;
        }
        assert!(closed > 5 && closed < 195, "{closed}");
    }

    #[test]
    fn empty_stays_empty() {
        let c = sample_config(Window::centered(20, 0, 10).unwrap(), 0.5, 1).unwrap();
        let tr = evolve(&c, &ParticleSet::new(0, vec![]).unwrap(), 10).unwrap();
        assert!(tr.slices.iter().all(|s| s.is_empty()));
    }

    #[test]
    fn single_particle_without_branching_is_a_walk() {
        let c = sample_config(Window::centered(40, 0, 20).unwrap(), 0.0, 4).unwrap();
        let tr = evolve(&c, &ParticleSet::new(0, vec![0]).unwrap(), 20).unwrap();
        assert!(tr.slices.iter().all(|s| s.len() == 1));
    }

    #[test]
    fn full_branching_fills_the_cone() {
        let c = sample_config(Window::centered(40, 0, 20).unwrap(), 1.0, 4).unwrap();
        let tr = evolve(&c, &ParticleSet::new(0, vec![0]).unwrap(), 20).unwrap();
        for s in &tr.slices {
            assert_eq!(s.sites, (-s.t..=s.t).step_by(2).collect::<Vec<_>>());
        }
    }

    #[test]
    fn edges_project_to_slices() {
        let c = sample_config(Window::centered(60, 0, 30).unwrap(), 0.3, 8).unwrap();
        let tr = evolve(&c, &full_slice(0, -20, 20), 30).unwrap();
        for (k, e) in tr.edges.iter().enumerate() {
            assert_eq!(e.lower(), tr.slices[k].sites);
            assert_eq!(e.upper(), tr.slices[k + 1].sites);
        }
    }

    #[test]
    fn boundary_touch_fails() {
        let c = sample_config(Window::new(-4, 4, 0, 10).unwrap(), 1.0, 0).unwrap();
        let err = evolve(&c, &ParticleSet::new(0, vec![0]).unwrap(), 10).unwrap_err();
        assert!(matches!(err, Error::BoundaryTouch { .. }));
    }

    #[test]
    fn pruned_matches_full_evolution() {
        let c = sample_config(Window::centered(200, 0, 60).unwrap(), 0.2, 13).unwrap();
        let start = full_slice(0, -120, 120);
        let full = evolve(&c, &start, 60).unwrap();
        let pruned = evolve_pruned(&c, &start, 60, -10, 10).unwrap();
        assert_eq!(full.slices.last().unwrap().restrict(-10, 10), pruned);
    }

    #[test]
    fn iterator_agrees_with_evolve() {
        let c = sample_config(Window::centered(60, 0, 25).unwrap(), 0.4, 2).unwrap();
        let start = full_slice(0, -10, 10);
        let full = evolve(&c, &start, 25).unwrap();
        let it: Vec<ParticleSet> = iter_evolution(&c, start).map(|s| s.unwrap()).collect();
        assert_eq!(it, full.slices);
    }

    #[test]
    fn intensity_values() {
        assert_eq!(bernoulli_intensity(1.0), 1.0);
        assert_eq!(bernoulli_intensity(0.0), 0.0);
        assert!((bernoulli_intensity(0.02) - 0.08 / 1.0404).abs() < 1e-15);
    }

    /// Once the dual boundaries from just outside `[-n, n]` have crossed over
    /// the source, a single source reproduces the full start on `[-n, n]`.
    #[test]
    fn single_source_matches_full_start_when_duals_enclose_it() {
        let n = 20;
        let depth = 2000;
        let w = Window::centered(3 * depth, -depth, 0).unwrap();
        let mut checked = 0;
        for seed in 0..6 {
            let c = sample_config(w, 0.1, seed).unwrap();
            let d = c.dual();
            let lh = trace_dual_extremal(&d, (-n - 1, 0), Side::Left).unwrap();
            let rh = trace_dual_extremal(&d, (n + 1, 0), Side::Right).unwrap();
            let (a, b) = (rh.at(-depth).unwrap(), lh.at(-depth).unwrap());
            if b - a < 4 {
                continue;
            }
            let mut xs = (a + b) / 2;
            if !is_even(xs, -depth) {
                xs += 1;
            }
            let single =
                evolve_pruned(&c, &ParticleSet::new(-depth, vec![xs]).unwrap(), 0, -n, n).unwrap();
            let full =
                evolve_pruned(&c, &full_slice(-depth, -n - depth, n + depth), 0, -n, n).unwrap();
            assert_eq!(single, full, "seed {seed}");
            checked += 1;
        }
        assert!(checked >= 4);
    }
}
