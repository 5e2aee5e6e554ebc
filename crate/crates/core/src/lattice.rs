//! Arrow configurations on the even sublattice, their duals, extremal paths
//! and the pathwise operations used by the structural checks.
//!
//! An even site is `(x, t)` with `x + t` even; odd sites carry the dual.
//! A configuration never stores its arrows: the state of a site is a pure
//! function of `(seed, x, t)` so arbitrarily large windows cost nothing until
//! they are looked at.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SiteState {
    LeftOnly,
    RightOnly,
    Both,
}

impl SiteState {
    #[inline]
    pub fn has_left(self) -> bool {
        !matches!(self, SiteState::RightOnly)
    }

    #[inline]
    pub fn has_right(self) -> bool {
        !matches!(self, SiteState::LeftOnly)
    }

    /// `dir` is `-1` or `+1`.
    #[inline]
    pub fn has(self, dir: i64) -> bool {
        if dir < 0 {
            self.has_left()
        } else {
            self.has_right()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[inline]
pub fn is_even(x: i64, t: i64) -> bool {
    (x + t).rem_euclid(2) == 0
}

/// Closed space-time box `[x_min, x_max] x [t_min, t_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub x_min: i64,
    pub x_max: i64,
    pub t_min: i64,
    pub t_max: i64,
}

impl Window {
    pub fn new(x_min: i64, x_max: i64, t_min: i64, t_max: i64) -> Result<Self> {
        if x_max - x_min < 2 {
            return Err(Error::InvalidWindow(format!(
                "x_max - x_min must be at least 2 (got [{x_min}, {x_max}])"
            )));
        }
        if t_max <= t_min {
            return Err(Error::InvalidWindow(format!(
                "t_max must exceed t_min (got [{t_min}, {t_max}])"
            )));
        }
        Ok(Window {
            x_min,
            x_max,
            t_min,
            t_max,
        })
    }

    /// `[-half_width, half_width] x [t_min, t_max]`.
    pub fn centered(half_width: i64, t_min: i64, t_max: i64) -> Result<Self> {
        Window::new(-half_width, half_width, t_min, t_max)
    }

    /// Check that the x-extent leaves `margin` on both sides of a light cone
    /// spanning the full time extent.
    pub fn require_margin(&self, margin: i64) -> Result<()> {
        let need = 2 * (self.t_max - self.t_min) + 2 * margin;
        if self.x_max - self.x_min < need {
            return Err(Error::InvalidWindow(format!(
                "x-extent {} is below 2*(t_max - t_min) + 2*margin = {need}",
                self.x_max - self.x_min
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn contains(&self, x: i64, t: i64) -> bool {
        x >= self.x_min && x <= self.x_max && t >= self.t_min && t <= self.t_max
    }

    #[inline]
    pub fn strictly_inside_x(&self, x: i64) -> bool {
        x > self.x_min && x < self.x_max
    }

    /// Sites of the given parity on row `t`, in increasing order.
    pub fn row(&self, t: i64, even: bool) -> impl Iterator<Item = i64> {
        let want = if even { 0 } else { 1 };
        let first = if (self.x_min + t).rem_euclid(2) == want {
            self.x_min
        } else {
            self.x_min + 1
        };
        (first..=self.x_max).step_by(2)
    }

    pub fn width(&self) -> i64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> i64 {
        self.t_max - self.t_min
    }
}

/// Random arrow field: every even site independently carries a left arrow
/// only, a right arrow only, or both, with probabilities
/// `(1 - beta)/2, (1 - beta)/2, beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArrowConfig {
    window: Window,
    beta: f64,
    seed: u64,
}

// claim: arrow-field-law
pub fn sample_config(window: Window, beta: f64, seed: u64) -> Result<ArrowConfig> {
    if !(0.0..=1.0).contains(&beta) || beta.is_nan() {
        return Err(Error::param(
            "beta",
            format!("must lie in [0, 1], got {beta}"),
        ));
    }
    Window::new(window.x_min, window.x_max, window.t_min, window.t_max)?;
    Ok(ArrowConfig { window, beta, seed })
}

impl ArrowConfig {
    pub fn window(&self) -> Window {
        self.window
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Same field, different window. The arrows at shared sites agree.
    pub fn with_window(&self, window: Window) -> ArrowConfig {
        ArrowConfig {
            window,
            beta: self.beta,
            seed: self.seed,
        }
    }

    /// State of an even site. Defined on all of the even sublattice; the
    /// window only restricts where paths may go.
    #[inline]
    pub fn state(&self, x: i64, t: i64) -> SiteState {
        debug_assert!(is_even(x, t));
        let u = rng::site_uniform(self.seed, x, t);
        if u < self.beta {
            SiteState::Both
        } else if u < self.beta + 0.5 * (1.0 - self.beta) {
            SiteState::LeftOnly
        } else {
            SiteState::RightOnly
        }
    }

    /// Dense copy of the states in the window: rows `t_min..t_max`, even
    /// sites left to right.
    pub fn states(&self) -> Vec<SiteState> {
        let w = self.window;
        let mut out = Vec::new();
        for t in w.t_min..w.t_max {
            out.extend(w.row(t, true).map(|x| self.state(x, t)));
        }
        out
    }

    /// Explicit list of the arrows leaving sites of the window.
    pub fn arrow_set(&self) -> ArrowSet {
        let w = self.window;
        let mut arrows = Vec::new();
        for t in w.t_min..w.t_max {
            for x in w.row(t, true) {
                let s = self.state(x, t);
                for d in [-1, 1] {
                    if s.has(d) {
                        arrows.push(Arrow { x, t, step: d });
                    }
                }
            }
        }
        arrows.sort();
        ArrowSet {
            window: w,
            kind: PathKind::Forward,
            arrows,
        }
    }

    /// Skeleton where every branching site keeps only its `side` arrow.
    pub fn skeleton_state(&self, x: i64, t: i64, side: Side) -> SiteState {
        match (self.state(x, t), side) {
            (SiteState::Both, Side::Left) => SiteState::LeftOnly,
            (SiteState::Both, Side::Right) => SiteState::RightOnly,
            (s, _) => s,
        }
    }

    pub fn dual(&self) -> DualArrowConfig {
        DualArrowConfig { cfg: self.clone() }
    }
}

/// The dual field on the odd sublattice. A dual arrow from `(x, t + 1)` to
/// `(x -/+ 1, t)` exists exactly when the forward arrow from `(x, t)` to
/// `(x +/- 1, t + 1)` exists, so the two fields never share a unit square
/// except at branching sites.
#[derive(Clone, Debug, PartialEq)]
pub struct DualArrowConfig {
    cfg: ArrowConfig,
}

impl DualArrowConfig {
    pub fn forward(&self) -> &ArrowConfig {
        &self.cfg
    }

    pub fn window(&self) -> Window {
        self.cfg.window
    }

    /// Whether the dual arrow from odd site `(x, t)` with step `step` exists.
    // claim: dual-arrow-relation
    #[inline]
    pub fn has_arrow(&self, x: i64, t: i64, step: i64) -> bool {
        debug_assert!(!is_even(x, t));
        self.cfg.state(x, t - 1).has(-step)
    }

    pub fn arrow_set(&self) -> ArrowSet {
        let w = self.cfg.window;
        let mut arrows = Vec::new();
        for t in (w.t_min + 1)..=w.t_max {
            for x in w.row(t, false) {
                for d in [-1, 1] {
                    if self.has_arrow(x, t, d) {
                        arrows.push(Arrow { x, t, step: d });
                    }
                }
            }
        }
        arrows.sort();
        ArrowSet {
            window: w,
            kind: PathKind::Dual,
            arrows,
        }
    }
}

/// One arrow, recorded at its starting site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub x: i64,
    pub t: i64,
    pub step: i64,
}

/// Explicit set of forward or dual arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowSet {
    pub window: Window,
    pub kind: PathKind,
    pub arrows: Vec<Arrow>,
}

impl ArrowSet {
    /// Apply the duality relation. Forward arrows become dual arrows and
    /// the other way round.
    pub fn dual(&self) -> ArrowSet {
        let (kind, dt) = match self.kind {
            PathKind::Forward => (PathKind::Dual, 1),
            PathKind::Dual => (PathKind::Forward, -1),
        };
        let mut arrows: Vec<Arrow> = self
            .arrows
            .iter()
            .map(|a| Arrow {
                x: a.x,
                t: a.t + dt,
                step: -a.step,
            })
            .collect();
        arrows.sort();
        ArrowSet {
            window: self.window,
            kind,
            arrows,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathKind {
    /// Runs upward in time on even sites.
    Forward,
    /// Runs downward in time on odd sites.
    Dual,
}

/// Nearest-neighbour path. `positions[k]` is the position at time
/// `start_t + k` (forward) or `start_t - k` (dual).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePath {
    start_t: i64,
    positions: Vec<i64>,
    kind: PathKind,
}

impl LatticePath {
    pub fn new(start_t: i64, positions: Vec<i64>, kind: PathKind) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::Empty("path positions"));
        }
        if positions.windows(2).any(|w| (w[1] - w[0]).abs() != 1) {
            return Err(Error::param(
                "positions",
                "consecutive positions must differ by 1",
            ));
        }
        let parity_ok = match kind {
            PathKind::Forward => is_even(positions[0], start_t),
            PathKind::Dual => !is_even(positions[0], start_t),
        };
        if !parity_ok {
            return Err(Error::InvalidSite {
                x: positions[0],
                t: start_t,
                kind: if kind == PathKind::Forward {
                    "even"
                } else {
                    "odd"
                },
            });
        }
        Ok(LatticePath {
            start_t,
            positions,
            kind,
        })
    }

    pub fn kind(&self) -> PathKind {
        self.kind
    }

    pub fn start(&self) -> (i64, i64) {
        (self.positions[0], self.start_t)
    }

    pub fn start_t(&self) -> i64 {
        self.start_t
    }

    pub fn end_t(&self) -> i64 {
        let n = self.positions.len() as i64 - 1;
        match self.kind {
            PathKind::Forward => self.start_t + n,
            PathKind::Dual => self.start_t - n,
        }
    }

    pub fn positions(&self) -> &[i64] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Position at integer time `t`, if `t` is in the path's time range.
    #[inline]
    pub fn at(&self, t: i64) -> Option<i64> {
        let k = match self.kind {
            PathKind::Forward => t - self.start_t,
            PathKind::Dual => self.start_t - t,
        };
        if k < 0 {
            return None;
        }
        self.positions.get(k as usize).copied()
    }

    /// Four times the linearly interpolated position at time `q4 / 4`.
    pub fn at_quarter(&self, q4: i64) -> Option<i64> {
        let k = q4.div_euclid(4);
        let f = q4.rem_euclid(4);
        let a = self.at(k)?;
        if f == 0 {
            return Some(4 * a);
        }
        let b = self.at(k + 1)?;
        Some(4 * a + f * (b - a))
    }

    /// `(t, x)` pairs in the order the path is traversed.
    pub fn points(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let sign = if self.kind == PathKind::Forward {
            1
        } else {
            -1
        };
        self.positions
            .iter()
            .enumerate()
            .map(move |(k, &x)| (self.start_t + sign * k as i64, x))
    }
}

fn check_start(cfg: &ArrowConfig, x: i64, t: i64, even: bool) -> Result<()> {
    let w = cfg.window();
    if !w.contains(x, t) || is_even(x, t) != even {
        return Err(Error::InvalidSite {
            x,
            t,
            kind: if even { "even" } else { "odd" },
        });
    }
    Ok(())
}

/// Trace a forward path from `(x, t)` to the top of the window, choosing
/// the step at branching sites with `choose`. Fails as soon as the path
/// touches the x-boundary.
pub fn trace_with<F>(cfg: &ArrowConfig, z: (i64, i64), mut choose: F) -> Result<LatticePath>
where
    F: FnMut(i64, i64) -> i64,
{
    let (mut x, t0) = z;
    check_start(cfg, x, t0, true)?;
    let w = cfg.window();
    let mut positions = Vec::with_capacity((w.t_max - t0 + 1) as usize);
    for t in t0..=w.t_max {
        if !w.strictly_inside_x(x) {
            return Err(Error::BoundaryTouch { x, t });
        }
        positions.push(x);
        if t == w.t_max {
            break;
        }
        x += match cfg.state(x, t) {
            SiteState::LeftOnly => -1,
            SiteState::RightOnly => 1,
            SiteState::Both => choose(x, t),
        };
    }
    LatticePath::new(t0, positions, PathKind::Forward)
}

/// Left-most (`Side::Left`) or right-most path from an even site.
// claim: extremal-paths
pub fn trace_extremal(cfg: &ArrowConfig, z: (i64, i64), side: Side) -> Result<LatticePath> {
    let d = if side == Side::Left { -1 } else { 1 };
    trace_with(cfg, z, |_, _| d)
}

pub fn trace_lr_pair(cfg: &ArrowConfig, z: (i64, i64)) -> Result<(LatticePath, LatticePath)> {
    Ok((
        trace_extremal(cfg, z, Side::Left)?,
        trace_extremal(cfg, z, Side::Right)?,
    ))
}

/// A path that picks each branch with probability 1/2, independently of
/// the field, driven by `seed`.
pub fn trace_random_branch(cfg: &ArrowConfig, z: (i64, i64), seed: u64) -> Result<LatticePath> {
    trace_with(cfg, z, |x, t| {
        if rng::site_hash(seed, x, t) & 1 == 0 {
            -1
        } else {
            1
        }
    })
}

/// Dual path from an odd site down to the bottom of the window.
///
/// Sides are named in the frame rotated by 180 degrees, where dual paths run
/// forward: the dual left-most path steps towards larger x at dual branching
/// sites and the dual right-most path towards smaller x.
pub fn trace_dual_extremal(
    dual: &DualArrowConfig,
    z: (i64, i64),
    side: Side,
) -> Result<LatticePath> {
    let (mut x, t0) = z;
    check_start(dual.forward(), x, t0, false)?;
    let w = dual.window();
    let pref = if side == Side::Left { 1 } else { -1 };
    let mut positions = Vec::with_capacity((t0 - w.t_min + 1) as usize);
    let mut t = t0;
    loop {
        if !w.strictly_inside_x(x) {
            return Err(Error::BoundaryTouch { x, t });
        }
        positions.push(x);
        if t == w.t_min {
            break;
        }
        x += if dual.has_arrow(x, t, pref) {
            pref
        } else {
            -pref
        };
        t -= 1;
    }
    LatticePath::new(t0, positions, PathKind::Dual)
}

/// Does every step of `path` follow an arrow of the field (forward arrows
/// for forward paths, dual arrows for dual paths) inside the window?
pub fn validate_path(cfg: &ArrowConfig, path: &LatticePath) -> bool {
    let w = cfg.window();
    let dual = cfg.dual();
    let pts: Vec<(i64, i64)> = path.points().collect();
    if pts.iter().any(|&(t, x)| !w.contains(x, t)) {
        return false;
    }
    pts.windows(2).all(|p| {
        let ((t, x), (_, x1)) = (p[0], p[1]);
        match path.kind() {
            PathKind::Forward => cfg.state(x, t).has(x1 - x),
            PathKind::Dual => dual.has_arrow(x, t, x1 - x),
        }
    })
}

/// Times at which the strict order of two forward paths is reversed: the
/// last time of equality before the order flips. Paths of equal parity only
/// meet at integer times, so crossings happen there.
pub fn crossing_times(p1: &LatticePath, p2: &LatticePath) -> Result<Vec<i64>> {
    if p1.kind() != PathKind::Forward || p2.kind() != PathKind::Forward {
        return Err(Error::param(
            "paths",
            "crossing times are defined for forward paths",
        ));
    }
    let lo = p1.start_t().max(p2.start_t());
    let hi = p1.end_t().min(p2.end_t());
    let mut out = Vec::new();
    let mut last_sign = 0i64;
    let mut last_zero: Option<i64> = None;
    for t in lo..=hi {
        let d = p1.at(t).unwrap() - p2.at(t).unwrap();
        if d == 0 {
            last_zero = Some(t);
            continue;
        }
        let s = d.signum();
        if last_sign != 0 && s != last_sign {
            out.push(last_zero.expect("same-parity paths pass through equality"));
        }
        last_sign = s;
    }
    Ok(out)
}

/// Times strictly after both starting times at which the paths coincide.
pub fn intersection_times(p1: &LatticePath, p2: &LatticePath) -> Vec<i64> {
    let lo = p1.start_t().max(p2.start_t()) + 1;
    let hi = p1.end_t().min(p2.end_t());
    (lo..=hi).filter(|&t| p1.at(t) == p2.at(t)).collect()
}

/// Follow `paths[0]` up to `hop_times[0]`, then `paths[1]` up to
/// `hop_times[1]`, and so on. Every hop must happen at an intersection time
/// that is strictly after both starting times.
// claim: hopping
pub fn hop_at_crossings(paths: &[LatticePath], hop_times: &[i64]) -> Result<LatticePath> {
    if paths.is_empty() {
        return Err(Error::Empty("paths"));
    }
    if hop_times.len() + 1 != paths.len() {
        return Err(Error::param(
            "hop_times",
            format!(
                "need {} hop times for {} paths",
                paths.len() - 1,
                paths.len()
            ),
        ));
    }
    if paths.iter().any(|p| p.kind() != PathKind::Forward) {
        return Err(Error::param(
            "paths",
            "hopping is defined for forward paths",
        ));
    }
    let first = &paths[0];
    let mut positions = Vec::new();
    let mut t_prev = first.start_t();
    for (k, &t) in hop_times.iter().enumerate() {
        let (a, b) = (&paths[k], &paths[k + 1]);
        if t <= t_prev && k > 0 {
            return Err(Error::param("hop_times", "must be strictly increasing"));
        }
        if t <= a.start_t().max(b.start_t()) {
            return Err(Error::HopAtStartingTime { t, to: k + 1 });
        }
        match (a.at(t), b.at(t)) {
            (Some(xa), Some(xb)) if xa == xb => {}
            _ => {
                return Err(Error::NotIntersection {
                    t,
                    from: k,
                    to: k + 1,
                })
            }
        }
        for s in t_prev..t {
            positions.push(a.at(s).unwrap());
        }
        t_prev = t;
    }
    let last = paths.last().unwrap();
    for s in t_prev..=last.end_t() {
        positions.push(last.at(s).unwrap());
    }
    LatticePath::new(first.start_t(), positions, PathKind::Forward)
}

/// Outcome of the exhaustive edge-crossing scan over a window.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NoncrossingReport {
    /// Forward left-skeleton edges crossing its dual, plus the same for the
    /// right skeleton. Must be zero.
    pub skeleton_crossings: usize,
    /// Forward edges that cross a dual skeleton edge into the region the
    /// dual path bounds. Must be zero.
    pub entering_crossings: usize,
    /// Forward edges crossing a dual skeleton edge outwards. Allowed; these
    /// occur only at branching sites.
    pub exiting_crossings: usize,
    /// Forward/dual edge pairs of the full fields that cross. Two per
    /// branching site; recorded for information.
    pub full_field_crossings: usize,
}

impl NoncrossingReport {
    pub fn ok(&self) -> bool {
        self.skeleton_crossings == 0 && self.entering_crossings == 0
    }
}

/// Unit square `(min x, t)` occupied by an edge between rows `t` and `t+1`.
#[inline]
fn square(x_low_row: i64, x_high_row: i64, t: i64) -> (i64, i64) {
    (x_low_row.min(x_high_row), t)
}

// claim: dual-noncrossing
pub fn noncrossing_report(cfg: &ArrowConfig) -> NoncrossingReport {
    let w = cfg.window();
    let dual = cfg.dual();
    // forward edges keyed by the unit square they occupy: (x at t, x at t+1)
    let mut fwd: HashMap<(i64, i64), (i64, i64)> = HashMap::new();
    let mut fwd_skel: [HashMap<(i64, i64), (i64, i64)>; 2] = [HashMap::new(), HashMap::new()];
    for t in w.t_min..w.t_max {
        for x in w.row(t, true) {
            for d in [-1i64, 1] {
                if !w.contains(x + d, t + 1) {
                    continue;
                }
                let key = square(x, x + d, t);
                if cfg.state(x, t).has(d) {
                    fwd.insert(key, (x, x + d));
                }
                for (i, side) in [Side::Left, Side::Right].into_iter().enumerate() {
                    if cfg.skeleton_state(x, t, side).has(d) {
                        fwd_skel[i].insert(key, (x, x + d));
                    }
                }
            }
        }
    }
    let mut rep = NoncrossingReport::default();
    for t in w.t_min..w.t_max {
        for x in w.row(t + 1, false) {
            for e in [-1i64, 1] {
                if !w.contains(x + e, t) {
                    continue;
                }
                // dual edge from (x, t+1) down to (x+e, t)
                let key = square(x + e, x, t);
                if dual.has_arrow(x, t + 1, e) && fwd.contains_key(&key) {
                    rep.full_field_crossings += 1;
                }
                for (i, side) in [Side::Left, Side::Right].into_iter().enumerate() {
                    // dual of the skeleton: arrow exists iff the skeleton's
                    // forward arrow from (x, t) with step -e exists
                    let in_dual_skel = cfg.skeleton_state(x, t, side).has(-e);
                    if !in_dual_skel {
                        continue;
                    }
                    if fwd_skel[i].contains_key(&key) {
                        rep.skeleton_crossings += 1;
                    }
                    if let Some(&(xf0, xf1)) = fwd.get(&key) {
                        // dual left-most paths bound regions on their left,
                        // dual right-most paths on their right
                        let (d_lo, d_hi) = (x + e, x);
                        let left_to_right = xf0 < d_lo && xf1 > d_hi;
                        let exiting = match side {
                            Side::Left => left_to_right,
                            Side::Right => !left_to_right,
                        };
                        if exiting {
                            rep.exiting_crossings += 1;
                        } else {
                            rep.entering_crossings += 1;
                        }
                    }
                }
            }
        }
    }
    rep
}

pub fn check_noncrossing(cfg: &ArrowConfig) -> bool {
    noncrossing_report(cfg).ok()
}

/// Result of a wedge-entry scan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WedgeReport {
    pub wedges: usize,
    pub paths: usize,
    pub violations: usize,
}

/// Wedge between a dual right-most path `r_hat` (left boundary) and a dual
/// left-most path `l_hat` (right boundary) started at the same time `s`.
#[derive(Clone, Debug)]
pub struct Wedge {
    pub r_hat: LatticePath,
    pub l_hat: LatticePath,
    /// First time below `s` at which the boundaries meet, if they do inside
    /// the window.
    pub bottom: Option<i64>,
}

impl Wedge {
    pub fn new(dual: &DualArrowConfig, x_left: i64, x_right: i64, s: i64) -> Result<Self> {
        if x_left >= x_right {
            return Err(Error::param(
                "wedge",
                "left start must be left of right start",
            ));
        }
        let r_hat = trace_dual_extremal(dual, (x_left, s), Side::Right)?;
        let l_hat = trace_dual_extremal(dual, (x_right, s), Side::Left)?;
        let bottom = (dual.window().t_min..s)
            .rev()
            .find(|&u| r_hat.at(u) == l_hat.at(u));
        Ok(Wedge {
            r_hat,
            l_hat,
            bottom,
        })
    }

    fn top(&self) -> i64 {
        self.r_hat.start_t()
    }

    /// Does a forward path enter the wedge from outside its closure?
    ///
    /// Membership is sampled at times `k`, `k + 1/4` and `k + 3/4`. Forward
    /// and dual paths have opposite parity so none of these samples lies on
    /// a boundary, and every open interval of inside or outside times
    /// contains one of them.
    pub fn entered_by(&self, p: &LatticePath) -> bool {
        let s4 = 4 * self.top();
        let t4 = self.bottom.map(|b| 4 * b);
        let mut seen_outside = false;
        for q4 in (4 * p.start_t() + 1)..=s4.min(4 * p.end_t()) {
            if q4.rem_euclid(4) == 2 {
                continue;
            }
            let below = t4.is_some_and(|b| q4 < b);
            let (inside, outside) = if below {
                (false, true)
            } else {
                let x = p.at_quarter(q4).unwrap();
                let r = self.r_hat.at_quarter(q4).unwrap();
                let l = self.l_hat.at_quarter(q4).unwrap();
                let at_bottom = t4 == Some(q4);
                (!at_bottom && q4 < s4 && r < x && x < l, x < r || x > l)
            };
            if inside && seen_outside {
                return true;
            }
            seen_outside |= outside;
        }
        false
    }
}

/// Sample wedges and forward paths (extremal, random-branch and hopped) and
/// count paths that enter a wedge from outside.
// claim: wedge-no-entry
pub fn wedge_entry_violations(cfg: &ArrowConfig, samples: usize, seed: u64) -> Result<WedgeReport> {
    use rand::Rng;
    let w = cfg.window();
    let dual = cfg.dual();
    let mut rng = rng::stream_rng(seed, rng::label("wedge"));
    let mut rep = WedgeReport::default();
    let h = w.height();
    let mid = (w.x_min + w.x_max) / 2;
    if w.width() < 2 * h + 24 {
        return Err(Error::InvalidWindow(format!(
            "wedge scan needs width >= 2*height + 24, got width {} height {h}",
            w.width()
        )));
    }
    for _ in 0..samples {
        let s = rng.random_range(w.t_min + 1..=w.t_max);
        let gap = 2 * rng.random_range(1..=4i64);
        let mut xl = mid + rng.random_range(-4..=4i64);
        if is_even(xl, s) {
            xl += 1;
        }
        let wedge = Wedge::new(&dual, xl, xl + gap, s)?;
        rep.wedges += 1;
        for _ in 0..6 {
            let t0 = rng.random_range(w.t_min..s);
            let mut x0 = xl + rng.random_range(-6..=gap + 6);
            if !is_even(x0, t0) {
                x0 += 1;
            }
            let (l, r) = trace_lr_pair(cfg, (x0, t0))?;
            let mut paths = vec![
                trace_random_branch(cfg, (x0, t0), rng.random())?,
                trace_random_branch(cfg, (x0, t0), rng.random())?,
            ];
            let meet = intersection_times(&l, &r);
            if let Some(&tm) = meet.first() {
                paths.push(hop_at_crossings(&[l.clone(), r.clone()], &[tm])?);
                paths.push(hop_at_crossings(&[r.clone(), l.clone()], &[tm])?);
            }
            paths.push(l);
            paths.push(r);
            for p in &paths {
                rep.paths += 1;
                if wedge.entered_by(p) {
                    rep.violations += 1;
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(beta: f64, seed: u64) -> ArrowConfig {
        sample_config(Window::centered(60, 0, 40).unwrap(), beta, seed).unwrap()
    }

    #[test]
    fn beta_zero_has_no_branching() {
        let c = cfg(0.0, 3);
        assert!(c.states().iter().all(|&s| s != SiteState::Both));
    }

    #[test]
    fn beta_one_branches_everywhere_and_paths_are_straight() {
        let c = cfg(1.0, 3);
        assert!(c.states().iter().all(|&s| s == SiteState::Both));
        let (l, r) = trace_lr_pair(&c, (0, 0)).unwrap();
        for (t, x) in l.points() {
            assert_eq!(x, -t);
        }
        for (t, x) in r.points() {
            assert_eq!(x, t);
        }
    }

    #[test]
    fn dual_left_most_on_full_branching_moves_right() {
        let c = cfg(1.0, 0);
        let p = trace_dual_extremal(&c.dual(), (0, 1), Side::Left).unwrap();
        assert_eq!(p.at(1), Some(0));
        assert_eq!(p.at(0), Some(1));
        let c = sample_config(Window::centered(60, -40, 1).unwrap(), 1.0, 0).unwrap();
        let p = trace_dual_extremal(&c.dual(), (0, 1), Side::Left).unwrap();
        for (t, x) in p.points() {
            assert_eq!(x, 1 - t);
        }
    }

    #[test]
    fn bad_window_and_beta_rejected() {
        assert!(matches!(
            Window::new(0, 0, 0, 5),
            Err(Error::InvalidWindow(_))
        ));
        assert!(matches!(
            Window::new(0, 10, 5, 5),
            Err(Error::InvalidWindow(_))
        ));
        let w = Window::centered(10, 0, 5).unwrap();
        assert!(sample_config(w, 1.5, 0).is_err());
        assert!(sample_config(w, f64::NAN, 0).is_err());
        assert!(w.require_margin(0).is_ok());
        assert!(w.require_margin(1).is_ok());
        assert!(w.require_margin(6).is_err());
    }

    #[test]
    fn path_touching_boundary_fails() {
        let w = Window::new(-3, 3, 0, 10).unwrap();
        let c = sample_config(w, 1.0, 0).unwrap();
        let err = trace_extremal(&c, (0, 0), Side::Right).unwrap_err();
        assert_eq!(err, Error::BoundaryTouch { x: 3, t: 3 });
    }

    #[test]
    fn odd_start_rejected() {
        let c = cfg(0.5, 0);
        assert!(matches!(
            trace_extremal(&c, (1, 0), Side::Left),
            Err(Error::InvalidSite { .. })
        ));
        assert!(trace_dual_extremal(&c.dual(), (0, 2), Side::Left).is_err());
    }

    #[test]
    fn hand_worked_crossing() {
        let p1 = LatticePath::new(0, vec![0, -1, 0, 1, 2], PathKind::Forward).unwrap();
        let p2 = LatticePath::new(0, vec![0, 1, 0, -1, -2], PathKind::Forward).unwrap();
        assert_eq!(crossing_times(&p1, &p2).unwrap(), vec![2]);
        let l = LatticePath::new(0, vec![0, -1, -2, -3], PathKind::Forward).unwrap();
        let r = LatticePath::new(0, vec![0, 1, 2, 3], PathKind::Forward).unwrap();
        assert!(crossing_times(&l, &r).unwrap().is_empty());
        // touching without swapping is not a crossing
        let a = LatticePath::new(0, vec![0, 1, 2, 1, 0], PathKind::Forward).unwrap();
        let b = LatticePath::new(0, vec![2, 1, 2, 3, 4], PathKind::Forward).unwrap();
        assert!(crossing_times(&a, &b).unwrap().is_empty());
    }

    #[test]
    fn hop_rules() {
        let p1 = LatticePath::new(0, vec![0, -1, 0, 1, 2], PathKind::Forward).unwrap();
        let p2 = LatticePath::new(0, vec![0, 1, 0, -1, -2], PathKind::Forward).unwrap();
        let h = hop_at_crossings(&[p1.clone(), p2.clone()], &[2]).unwrap();
        assert_eq!(h.positions(), &[0, -1, 0, -1, -2]);
        assert_eq!(
            hop_at_crossings(&[p1.clone(), p2.clone()], &[0]),
            Err(Error::HopAtStartingTime { t: 0, to: 1 })
        );
        assert_eq!(
            hop_at_crossings(&[p1, p2], &[1]),
            Err(Error::NotIntersection {
                t: 1,
                from: 0,
                to: 1
            })
        );
    }

    #[test]
    fn literal_full_field_crosses_at_branching_sites() {
        let c = sample_config(Window::centered(10, 0, 1).unwrap(), 1.0, 0).unwrap();
        let rep = noncrossing_report(&c);
        assert!(rep.full_field_crossings > 0);
        assert!(rep.ok());
    }

    #[test]
    fn noncrossing_across_betas() {
        for (i, beta) in [0.0, 0.1, 0.5, 0.9, 1.0].into_iter().enumerate() {
            let c = cfg(beta, 11 + i as u64);
            let rep = noncrossing_report(&c);
            assert!(rep.ok(), "beta {beta}: {rep:?}");
            let both = c.states().iter().filter(|&&s| s == SiteState::Both).count();
            assert!(rep.full_field_crossings <= 2 * both);
        }
    }

    #[test]
    fn dual_involution_and_validation() {
        let c = cfg(0.3, 5);
        let fwd = c.arrow_set();
        let dual = c.dual().arrow_set();
        assert_eq!(fwd.dual(), dual);
        assert_eq!(dual.dual(), fwd);
        assert_eq!(fwd.dual().dual(), fwd);
        let p = trace_extremal(&c, (0, 0), Side::Left).unwrap();
        assert!(validate_path(&c, &p));
        let d = trace_dual_extremal(&c.dual(), (1, 40), Side::Right).unwrap();
        assert!(validate_path(&c, &d));
    }

    #[test]
    fn every_odd_site_has_a_dual_arrow() {
        let c = cfg(0.0, 9);
        let d = c.dual();
        let w = c.window();
        for t in (w.t_min + 1)..=w.t_max {
            for x in w.row(t, false) {
                assert!(d.has_arrow(x, t, -1) || d.has_arrow(x, t, 1));
            }
        }
    }

    #[test]
    fn wedge_scan_finds_no_entry() {
        let w = Window::centered(80, 0, 50).unwrap();
        for (i, beta) in [0.0, 0.2, 0.7, 1.0].into_iter().enumerate() {
            let c = sample_config(w, beta, i as u64).unwrap();
            let rep = wedge_entry_violations(&c, 20, 1).unwrap();
            assert_eq!(rep.violations, 0, "beta {beta}");
            assert!(rep.paths > 0);
        }
    }

    #[test]
    fn wedge_entry_on_hand_built_wedge() {
        let r_hat = LatticePath::new(4, vec![-1, 0, -1, -2, -3], PathKind::Dual).unwrap();
        let l_hat = LatticePath::new(4, vec![1, 2, 3, 4, 5], PathKind::Dual).unwrap();
        let wedge = Wedge {
            r_hat,
            l_hat,
            bottom: None,
        };
        let cut_in = LatticePath::new(0, vec![-4, -3, -2, -1, 0], PathKind::Forward).unwrap();
        assert!(wedge.entered_by(&cut_in));
        let away = LatticePath::new(0, vec![-4, -5, -6, -7, -8], PathKind::Forward).unwrap();
        assert!(!wedge.entered_by(&away));
        let inside = LatticePath::new(0, vec![0, 1, 0, 1, 0], PathKind::Forward).unwrap();
        assert!(!wedge.entered_by(&inside));
        let leaves = LatticePath::new(0, vec![0, 1, 2, 3, 4], PathKind::Forward).unwrap();
        assert!(!wedge.entered_by(&leaves));
    }
}
