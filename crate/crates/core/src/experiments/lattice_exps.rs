//! Experiments on the lattice: particle density, interval avoidance, pair
//! scaling, the invariant law, the backbone, the left flux and the
//! structural invariants.

use std::time::Instant;

use rand::Rng;

use super::{
    par_replicas, regime_allowance, replica_seed, require_positive, require_replicas,
    ExperimentReport, TargetKind,
};
use crate::closed_forms::{big_psi, left_flux_bound, small_psi};
use crate::error::{Error, Result};
use crate::lattice::{
    hop_at_crossings, intersection_times, is_even, noncrossing_report, sample_config,
    trace_extremal, trace_lr_pair, trace_random_branch, validate_path, wedge_entry_violations,
    ArrowConfig, LatticePath, Side, Window,
};
use crate::particles::{
    backbone_slice_in, bernoulli_intensity, bernoulli_slice, full_slice, full_start_in_wedge,
    half_step_statistics, step, step_sites, ParticleSet,
};
use crate::sde::{sample_noise, solve_lr};
use crate::stats::{chi_square_2x2, dispersion_index, ks_two_sample, mean_stderr, proportion};
use crate::tolerances::{bias, P_THRESHOLD};

/// Lattice steps for physical time `t` at scale `eps`.
fn lattice_steps(t: f64, eps: f64) -> i64 {
    (t / (eps * eps)).round() as i64
}

/// Even lattice length closest to the physical length `len`.
fn even_length(len: f64, eps: f64) -> i64 {
    2 * ((len / (2.0 * eps)).round() as i64).max(1)
}

fn check_beta(beta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&beta) || beta == 0.0 {
        return Err(Error::param(
            "beta",
            format!("must be in (0, 1], got {beta}"),
        ));
    }
    Ok(())
}

/// Occupied sites in `[lo, hi]` at time `n` of the system started from
/// every even site at time 0.
fn count_from_full_start(beta: f64, n: i64, lo: i64, hi: i64, seed: u64) -> Result<ParticleSet> {
    let w = Window::new(lo - n - 2, hi + n + 2, 0, n.max(1))?;
    let cfg = sample_config(w, beta, seed)?;
    Ok(full_start_in_wedge(&cfg, lo, hi)?.0)
}

/// Rescaled occupied-site density on a centred interval of physical width
/// `width` at physical time `t_phys`, against `small_psi(t_phys)`.
// claim: density-experiment
pub fn density_experiment(
    beta: f64,
    t_phys: f64,
    width: f64,
    replicas: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    let t0 = Instant::now();
    check_beta(beta)?;
    require_positive("t_phys", t_phys)?;
    require_positive("width", width)?;
    require_replicas(replicas, 2)?;
    let eps = beta;
    let n = lattice_steps(t_phys, eps);
    let len = even_length(width, eps);
    let (lo, hi) = (-len / 2, len / 2 - 1);
    let phys = len as f64 * eps;
    let dens = par_replicas(replicas, |i| {
        let s = count_from_full_start(beta, n, lo, hi, replica_seed(seed, "density", i))?;
        Ok(s.len() as f64 / phys)
    })?;
    let (m, se) = mean_stderr(&dens)?;
    let (allow, warn) = regime_allowance(beta, bias::DENSITY);
    let mut r = ExperimentReport::new(
        "density",
        m,
        se,
        small_psi(t_phys)?,
        TargetKind::TwoSided { allowance: allow },
        seed,
    )
    .param("beta", beta)
    .param("t", t_phys)
    .param("width", width)
    .param("replicas", replicas)
    .extra("lattice_steps", n as f64)
    .extra("sites_per_interval", (len / 2) as f64)
    .replicas(replicas);
    if let Some(w) = warn {
        r = r.note(w);
    }
    Ok(r.timed(t0))
}

/// Probability that an interval of physical length `gap` is empty at time
/// `t_phys`, against `1 - big_psi(gap, t_phys)`.
// claim: avoidance-experiment
pub fn avoidance_experiment(
    beta: f64,
    t_phys: f64,
    gap: f64,
    replicas: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    let t0 = Instant::now();
    check_beta(beta)?;
    require_positive("t_phys", t_phys)?;
    require_positive("gap", gap)?;
    require_replicas(replicas, 2)?;
    let eps = beta;
    let n = lattice_steps(t_phys, eps);
    let len = even_length(gap, eps);
    let (lo, hi) = (-len / 2, len / 2 - 1);
    let empty = par_replicas(replicas, |i| {
        let s = count_from_full_start(beta, n, lo, hi, replica_seed(seed, "avoidance", i))?;
        Ok(s.is_empty())
    })?;
    let k = empty.iter().filter(|&&e| e).count() as u64;
    let (p, se) = proportion(k, replicas as u64)?;
    let (allow, warn) = regime_allowance(beta, bias::AVOIDANCE);
    let mut r = ExperimentReport::new(
        "avoidance",
        p,
        se,
        1.0 - big_psi(gap, t_phys)?,
        TargetKind::TwoSided { allowance: allow },
        seed,
    )
    .param("beta", beta)
    .param("t", t_phys)
    .param("gap", gap)
    .param("replicas", replicas)
    .extra("lattice_steps", n as f64)
    .extra("sites_per_interval", (len / 2) as f64)
    .replicas(replicas);
    if let Some(w) = warn {
        r = r.note(w);
    }
    Ok(r.timed(t0))
}

/// Rescaled gaps `eps (r - l)` of the extremal pair from the origin after
/// `t_phys / eps^2` steps.
pub fn discrete_pair_gaps(beta: f64, t_phys: f64, replicas: usize, seed: u64) -> Result<Vec<f64>> {
    let eps = beta;
    let n = lattice_steps(t_phys, eps);
    if n == 0 {
        return Ok(vec![0.0; replicas]);
    }
    par_replicas(replicas, |i| {
        let cfg = sample_config(
            Window::centered(n + 2, 0, n)?,
            beta,
            replica_seed(seed, "pair-discrete", i),
        )?;
        let (l, r) = trace_lr_pair(&cfg, (0, 0))?;
        Ok(eps * (r.at(n).unwrap() - l.at(n).unwrap()) as f64)
    })
}

/// Two-sample KS between the rescaled lattice gap of the extremal pair and
/// the gap of the left-right SDE, both started together.
// claim: pair-scaling-experiment
pub fn pair_scaling_experiment(
    beta: f64,
    t_phys: f64,
    replicas: usize,
    h: f64,
    seed: u64,
) -> Result<ExperimentReport> {
    let t0 = Instant::now();
    check_beta(beta)?;
    require_positive("t_phys", t_phys)?;
    require_positive("h", h)?;
    require_replicas(replicas, 10)?;
    let lattice = discrete_pair_gaps(beta, t_phys, replicas, seed)?;
    let continuum = par_replicas(replicas, |i| {
        let noise = sample_noise(h, t_phys, replica_seed(seed, "pair-continuum", i))?;
        let sol = solve_lr(&noise, 0.0, 0.0)?;
        Ok(sol.right_at(t_phys)? - sol.left_at(t_phys)?)
    })?;
    let ks = ks_two_sample(&lattice, &continuum)?;
    let (ml, _) = mean_stderr(&lattice)?;
    let (mc, _) = mean_stderr(&continuum)?;
    let zl = lattice.iter().filter(|&&g| g == 0.0).count() as f64 / replicas as f64;
    let zc = continuum.iter().filter(|&&g| g <= 1e-12).count() as f64 / replicas as f64;
    Ok(ExperimentReport::new(
        "pair-scaling",
        ks.p_value,
        0.0,
        P_THRESHOLD,
        TargetKind::PValue,
        seed,
    )
    .param("beta", beta)
    .param("t", t_phys)
    .param("h", h)
    .param("replicas", replicas)
    .extra("ks_statistic", ks.statistic)
    .extra("mean_gap_lattice", ml)
    .extra("mean_gap_sde", mc)
    .extra("p_zero_lattice", zl)
    .extra("p_zero_sde", zc)
    .replicas(replicas)
    .timed(t0))
}

/// Invariance of the product Bernoulli law: starting from occupation
/// probability `rho(beta)` on `width` sites, the intensity after two steps,
/// the frequency of sites with both edges in the second half step, and
/// independence of the two edges entering a common site.
// claim: invariance-experiment
pub fn invariance_experiment(
    beta: f64,
    width: i64,
    replicas: usize,
    seed: u64,
) -> Result<Vec<ExperimentReport>> {
    let t0 = Instant::now();
    check_beta(beta)?;
    if width < 20 {
        return Err(Error::param(
            "width",
            format!("must be at least 20, got {width}"),
        ));
    }
    require_replicas(replicas, 1)?;
    let rho = bernoulli_intensity(beta);
    let half = width / 2;
    let (lo, hi) = (-half + 4, half - 4);
    let per = par_replicas(replicas, |i| {
        let s = replica_seed(seed, "invariance", i);
        let cfg = sample_config(Window::centered(half + 4, 0, 2)?, beta, s)?;
        let init = bernoulli_slice(0, -half, half, rho, rng_child(s));
        let (_, one) = step(&cfg, &init)?;
        let (e1, two) = step(&cfg, &one)?;
        let st = half_step_statistics(&e1, lo, hi);
        let sites1 = full_slice(1, lo, hi).len() as u64;
        let sites2 = full_slice(2, lo, hi).len() as u64;
        Ok((
            one.count_in(lo, hi) as u64,
            sites1,
            two.count_in(lo, hi) as u64,
            sites2,
            st,
        ))
    })?;
    let mut occ1 = 0;
    let mut n1 = 0;
    let mut occ2 = 0;
    let mut n2 = 0;
    let mut both = 0;
    let mut sites = 0;
    let mut table = [[0u64; 2]; 2];
    for (a, b, c, d, st) in &per {
        occ1 += a;
        n1 += b;
        occ2 += c;
        n2 += d;
        both += st.both;
        sites += st.sites;
        for (row, add) in table.iter_mut().zip(&st.shared_top) {
            for (cell, x) in row.iter_mut().zip(add) {
                *cell += x;
            }
        }
    }
    let exact = TargetKind::TwoSided { allowance: 0.0 };
    let wall = t0.elapsed().as_secs_f64();
    let mk = |name: &str, est: f64, se: f64, target: f64, kind| {
        let mut r = ExperimentReport::new(name, est, se, target, kind, seed)
            .param("beta", beta)
            .param("width", width)
            .param("replicas", replicas)
            .replicas(replicas);
        r.wall_time = wall;
        r
    };
    // binomial standard errors under the target law
    let se_at = |p: f64, n: u64| (p * (1.0 - p) / n as f64).sqrt();
    let p1 = occ1 as f64 / n1 as f64;
    let p2 = occ2 as f64 / n2 as f64;
    let pb = both as f64 / sites as f64;
    // a zero margin means one of the edges is deterministic, and
    // independence holds trivially
    let degenerate =
        (0..2).any(|i| table[i][0] + table[i][1] == 0 || table[0][i] + table[1][i] == 0);
    let (p_ind, stat) = if degenerate {
        (1.0, 0.0)
    } else {
        let chi = chi_square_2x2(table)?;
        (chi.p_value, chi.statistic)
    };
    Ok(vec![
        mk("invariance-intensity", p2, se_at(rho, n2), rho, exact).extra("intensity_step1", p1),
        mk(
            "invariance-both-edges",
            pb,
            se_at(rho * beta, sites),
            rho * beta,
            exact,
        ),
        mk(
            "invariance-independence",
            p_ind,
            0.0,
            P_THRESHOLD,
            TargetKind::PValue,
        )
        .extra("chi_square", stat),
    ])
}

fn rng_child(s: u64) -> u64 {
    crate::rng::derive_seed(s, crate::rng::label("initial-slice"))
}

/// Burn-in used by the backbone experiment: at least `20 / beta` steps and
/// at least physical time 5, where the density is within `2e-4` of its
/// limit.
pub fn backbone_depth(beta: f64) -> i64 {
    let a = (20.0 / beta).ceil() as i64;
    let b = (5.0 / (beta * beta)).ceil() as i64;
    a.max(b)
}

/// Backbone slice after `depth` steps: per-site intensity against
/// `rho(beta)`, rescaled intensity against 2 and the dispersion index of
/// counts in `intervals` disjoint unit intervals per replica against 1.
// claim: backbone-experiment
pub fn backbone_experiment(
    beta: f64,
    depth: i64,
    intervals: usize,
    replicas: usize,
    seed: u64,
) -> Result<Vec<ExperimentReport>> {
    let t0 = Instant::now();
    check_beta(beta)?;
    if (depth as f64) < 20.0 / beta {
        return Err(Error::param(
            "depth",
            format!("must be at least 20/beta, got {depth}"),
        ));
    }
    require_replicas(intervals * replicas, 10)?;
    let eps = beta;
    let len = even_length(1.0, eps);
    let total = len * intervals as i64;
    let (lo, hi) = (-total / 2, -total / 2 + total - 1);
    let per = par_replicas(replicas, |i| {
        let w = Window::new(lo - depth - 2, hi + depth + 2, 0, depth)?;
        let cfg = sample_config(w, beta, replica_seed(seed, "backbone", i))?;
        let s = backbone_slice_in(&cfg, depth, lo, hi)?;
        Ok((0..intervals as i64)
            .map(|k| s.count_in(lo + k * len, lo + (k + 1) * len - 1) as f64)
            .collect::<Vec<_>>())
    })?;
    let counts: Vec<f64> = per.into_iter().flatten().collect();
    let sites_per = (len / 2) as f64;
    let rho = bernoulli_intensity(beta);
    let per_site: Vec<f64> = counts.iter().map(|c| c / sites_per).collect();
    let (ps, ps_se) = mean_stderr(&per_site)?;
    let rescaled: Vec<f64> = counts.iter().map(|c| c / (len as f64 * eps)).collect();
    let (ri, ri_se) = mean_stderr(&rescaled)?;
    let (d, d_se) = dispersion_index(&counts)?;
    let (a_int, warn) = regime_allowance(beta, bias::BACKBONE_INTENSITY);
    let (a_disp, _) = regime_allowance(beta, bias::BACKBONE_DISPERSION);
    let wall = t0.elapsed().as_secs_f64();
    let mk = |name: &str, est, se, target, kind| {
        let mut r = ExperimentReport::new(name, est, se, target, kind, seed)
            .param("beta", beta)
            .param("depth", depth)
            .param("intervals", intervals)
            .param("replicas", replicas)
            .replicas(replicas);
        r.wall_time = wall;
        if let Some(w) = &warn {
            r = r.note(w.clone());
        }
        r
    };
    Ok(vec![
        mk(
            "backbone-site-intensity",
            ps,
            ps_se,
            rho,
            TargetKind::TwoSided { allowance: 0.0 },
        ),
        mk(
            "backbone-rescaled-intensity",
            ri,
            ri_se,
            2.0,
            TargetKind::TwoSided { allowance: a_int },
        ),
        mk(
            "backbone-dispersion",
            d,
            d_se,
            1.0,
            TargetKind::TwoSided { allowance: a_disp },
        ),
    ])
}

/// Rescaled backbone intensity at `depth` against the same quantity at
/// `2 depth`: the difference must vanish within noise if the burn-in has
/// mixed.
// claim: backbone-depth-stability
pub fn backbone_depth_stability(
    beta: f64,
    depth: i64,
    intervals: usize,
    replicas: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    let t0 = Instant::now();
    let at = |d: i64| -> Result<(f64, f64)> {
        let r = backbone_experiment(beta, d, intervals, replicas, seed)?;
        Ok((r[1].estimate, r[1].std_error))
    };
    let (a, a_se) = at(depth)?;
    let (b, b_se) = at(2 * depth)?;
    Ok(ExperimentReport::new(
        "backbone-depth-stability",
        b - a,
        a_se.hypot(b_se),
        0.0,
        TargetKind::TwoSided { allowance: 0.0 },
        seed,
    )
    .param("beta", beta)
    .param("depth", depth)
    .param("intervals", intervals)
    .param("replicas", replicas)
    .extra("rescaled_intensity", a)
    .extra("rescaled_intensity_double_depth", b)
    .replicas(replicas)
    .timed(t0))
}

/// Meetings of the left-most path from the origin by paths started to its
/// left at time 0, in one configuration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FluxCount {
    /// Meetings in the time range after de-clustering.
    pub events: u64,
    /// Every lattice step at which some particle reaches the path.
    pub raw_hits: u64,
}

/// Particles start on every even site left of the origin and are removed
/// when they reach the left-most path `l` from the origin, so every arrival
/// is the first meeting of some path with `l`. An arrival is a new event
/// only if, since the previous event, the gap between `l` and the nearest
/// particle on its left exceeded one even-lattice spacing (2) for at least
/// one step. Counts arrivals at steps in `[n_from, n_to]`.
// claim: left-flux-count
pub fn left_flux_count(cfg: &ArrowConfig, n_from: i64, n_to: i64) -> Result<FluxCount> {
    let w = cfg.window();
    if w.t_min != 0 || n_to > w.t_max || n_from > n_to {
        return Err(Error::param(
            "range",
            "need 0 = t_min and n_from <= n_to <= t_max",
        ));
    }
    let l = trace_extremal(cfg, (0, 0), Side::Left)?;
    let lx = |t: i64| l.at(t).unwrap();
    // a particle at (x, t) can reach l by n_to only if
    // x >= min over t' in [t, n_to] of l(t') - (t' - t)
    let mut reach = vec![0i64; (n_to + 1) as usize];
    let mut m = i64::MAX;
    for t in (0..=n_to).rev() {
        m = m.min(lx(t) - t);
        reach[t as usize] = m;
    }
    let lo0 = reach[0];
    let mut cur: Vec<i64> = full_slice(0, lo0.max(w.x_min + 1), -2).sites;
    let mut next = Vec::with_capacity(cur.len());
    let mut out = FluxCount::default();
    let mut armed = true;
    for t in 0..n_to {
        if let Some(&x0) = cur.first() {
            if !w.strictly_inside_x(x0) {
                return Err(Error::BoundaryTouch { x: x0, t });
            }
        }
        step_sites(cfg, &cur, t, &mut next);
        std::mem::swap(&mut cur, &mut next);
        let t1 = t + 1;
        let target = lx(t1);
        let keep = cur.partition_point(|&x| x < target);
        let hit = keep < cur.len();
        cur.truncate(keep);
        let a = cur.partition_point(|&x| x < reach[t1 as usize] + t1);
        cur.drain(..a);
        if hit {
            if t1 >= n_from {
                out.raw_hits += 1;
                if armed {
                    out.events += 1;
                }
            }
            armed = false;
        }
        match cur.last() {
            Some(&x) if target - x <= 2 => {}
            _ => armed = true,
        }
    }
    Ok(out)
}

/// Mean de-clustered meeting count on `[s_phys, t_phys]` against the
/// integrated bound `int 2 psi^2`.
// claim: left-flux-experiment
pub fn left_flux_experiment(
    beta: f64,
    s_phys: f64,
    t_phys: f64,
    replicas: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    let t0 = Instant::now();
    check_beta(beta)?;
    require_positive("s_phys", s_phys)?;
    if t_phys < s_phys {
        return Err(Error::param("t_phys", "must be at least s_phys"));
    }
    require_replicas(replicas, 2)?;
    let eps = beta;
    let n_from = (s_phys / (eps * eps)).ceil() as i64;
    let n_to = (t_phys / (eps * eps)).floor() as i64;
    let counts = par_replicas(replicas, |i| {
        let w = Window::new(-3 * n_to - 4, n_to + 4, 0, n_to.max(1))?;
        let cfg = sample_config(w, beta, replica_seed(seed, "left-flux", i))?;
        left_flux_count(&cfg, n_from, n_to)
    })?;
    let ev: Vec<f64> = counts.iter().map(|c| c.events as f64).collect();
    let raw: Vec<f64> = counts.iter().map(|c| c.raw_hits as f64).collect();
    let (m, se) = mean_stderr(&ev)?;
    let (mr, _) = mean_stderr(&raw)?;
    Ok(ExperimentReport::new(
        "left-flux",
        m,
        se,
        left_flux_bound(s_phys, t_phys)?,
        TargetKind::UpperBound,
        seed,
    )
    .param("beta", beta)
    .param("s", s_phys)
    .param("t", t_phys)
    .param("replicas", replicas)
    .extra("mean_raw_hits", mr)
    .replicas(replicas)
    .timed(t0))
}

#[derive(Clone, Copy, Debug, Default)]
struct StructuralCounts {
    noncrossing: u64,
    hopping: u64,
    wedge: u64,
    envelope: u64,
    paths: u64,
}

fn between(p: &LatticePath, l: &LatticePath, r: &LatticePath) -> bool {
    p.points().all(|(t, x)| {
        let (a, b) = (l.at(t).unwrap(), r.at(t).unwrap());
        a <= x && x <= b
    })
}

fn structural_one(beta: f64, seed: u64) -> Result<StructuralCounts> {
    let h = 40;
    let cfg = sample_config(Window::centered(60, 0, h)?, beta, seed)?;
    let mut c = StructuralCounts::default();
    let nc = noncrossing_report(&cfg);
    c.noncrossing = (nc.skeleton_crossings + nc.entering_crossings) as u64;
    c.wedge = wedge_entry_violations(&cfg, 3, seed)?.violations as u64;
    let mut rng = crate::rng::stream_rng(seed, crate::rng::label("structural"));
    for _ in 0..4 {
        let t0 = rng.random_range(0..h / 2);
        let mut x0 = rng.random_range(-8..=8i64);
        if !is_even(x0, t0) {
            x0 += 1;
        }
        let (l, r) = trace_lr_pair(&cfg, (x0, t0))?;
        let a = trace_random_branch(&cfg, (x0, t0), rng.random())?;
        let b = trace_random_branch(&cfg, (x0, t0), rng.random())?;
        let mut x1 = x0 + 2 * rng.random_range(1..=3i64);
        if !is_even(x1, t0 + 1) {
            x1 += 1;
        }
        let other = trace_random_branch(&cfg, (x1, t0 + 1), rng.random())?;
        let family = [l.clone(), r.clone(), a, b, other];
        let mut hopped = Vec::new();
        for i in 0..family.len() {
            for j in 0..family.len() {
                if i == j {
                    continue;
                }
                let times = intersection_times(&family[i], &family[j]);
                if let Some(&tm) = times.first() {
                    hopped.push(hop_at_crossings(
                        &[family[i].clone(), family[j].clone()],
                        &[tm],
                    )?);
                }
                if times.len() >= 2 {
                    // hop there and back
                    let (t1, t2) = (times[0], times[times.len() - 1]);
                    hopped.push(hop_at_crossings(
                        &[family[i].clone(), family[j].clone(), family[i].clone()],
                        &[t1, t2],
                    )?);
                }
            }
        }
        for p in family.iter().chain(&hopped) {
            c.paths += 1;
            if !validate_path(&cfg, p) {
                c.hopping += 1;
            }
            // paths from the common start lie between its extremal paths
            if p.start() == (x0, t0) && !between(p, &l, &r) {
                c.envelope += 1;
            }
        }
    }
    Ok(c)
}

/// Deterministic invariants over sampled configurations, spread evenly
/// over `betas`: forward/dual non-crossing, closure of the path set under
/// hopping, no wedge entry from outside, and the extremal envelope. Any
/// single violation fails the corresponding report.
// claim: structural-suite
pub fn structural_suite(betas: &[f64], configs: usize, seed: u64) -> Result<Vec<ExperimentReport>> {
    let t0 = Instant::now();
    if betas.is_empty() {
        return Err(Error::Empty("beta list"));
    }
    if let Some(&b) = betas.iter().find(|b| !(0.0..=1.0).contains(*b)) {
        return Err(Error::param("beta", format!("must be in [0, 1], got {b}")));
    }
    let per = par_replicas(configs, |i| {
        structural_one(betas[i % betas.len()], replica_seed(seed, "structural", i))
    })?;
    let mut tot = StructuralCounts::default();
    for c in &per {
        tot.noncrossing += c.noncrossing;
        tot.hopping += c.hopping;
        tot.wedge += c.wedge;
        tot.envelope += c.envelope;
        tot.paths += c.paths;
    }
    let wall = t0.elapsed().as_secs_f64();
    let mk = |name: &str, v: u64| {
        let mut r = ExperimentReport::new(name, v as f64, 0.0, 0.0, TargetKind::Exact, seed)
            .param("betas", betas.to_vec())
            .param("configs", configs)
            .extra("paths_checked", tot.paths as f64)
            .replicas(configs);
        r.wall_time = wall;
        r
    };
    Ok(vec![
        mk("structural-noncrossing", tot.noncrossing),
        mk("structural-hopping-closure", tot.hopping),
        mk("structural-wedge-entry", tot.wedge),
        mk("structural-envelope", tot.envelope),
    ])
}
