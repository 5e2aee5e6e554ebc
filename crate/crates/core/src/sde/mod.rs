//! The sticky left-right SDE and its relatives, solved through the
//! time-change representation on a Brownian grid.

mod coalescing;
mod llr;
mod lr;
mod noise;
mod reflected;

pub use coalescing::{solve_coalescing_system, CoalescingSystem, MotionKind};
pub use llr::{solve_llr, LlrSolution};
pub use lr::{sample_sticky_time, solve_lr, sticky_time, sticky_time_at_horizon, LrSolution};
pub use noise::{sample_noise, DrivingNoise};
pub use reflected::{solve_reflected, ReflectedPath};

/// Extreme of a Brownian bridge from `a` to `b` over a step of length `h`
/// with variance `var` per unit time, drawn by inversion from `u` in (0, 1].
/// `lower` selects the minimum, otherwise the maximum.
#[inline]
pub(crate) fn bridge_extreme(a: f64, b: f64, h: f64, var: f64, u: f64, lower: bool) -> f64 {
    let root = ((b - a) * (b - a) - 2.0 * var * h * u.ln()).sqrt();
    if lower {
        0.5 * (a + b - root)
    } else {
        0.5 * (a + b + root)
    }
}

/// Piecewise-linear path of the drifted gap process together with its
/// running infimum, refined by one vertex per grid step placed at a drawn
/// bridge minimum. On each segment the path is monotone, which makes the
/// running infimum, and anything built from it, exact between vertices.
#[derive(Clone, Debug)]
pub(crate) struct GapPath {
    pub tau: Vec<f64>,
    /// gap + (B^r - B^l) + 2 tau
    pub w: Vec<f64>,
    /// B^l + B^r
    pub a: Vec<f64>,
    /// running infimum of `w` up to and including each vertex
    pub inf: Vec<f64>,
}

impl GapPath {
    /// Build from increments `from..noise.len()`.
    pub fn build(noise: &DrivingNoise, from: usize, gap0: f64) -> GapPath {
        let h = noise.step();
        let n = noise.len() - from;
        let mut p = GapPath {
            tau: Vec::with_capacity(2 * n + 1),
            w: Vec::with_capacity(2 * n + 1),
            a: Vec::with_capacity(2 * n + 1),
            inf: Vec::with_capacity(2 * n + 1),
        };
        let (mut tau, mut w, mut a, mut inf) = (0.0, gap0, 0.0, gap0);
        p.push(tau, w, a, inf);
        for i in from..noise.len() {
            let (dl, dr) = (noise.dl[i], noise.dr[i]);
            let w1 = w + (dr - dl) + 2.0 * h;
            let a1 = a + dl + dr;
            let m = bridge_extreme(w, w1, h, 2.0, noise.u[i], true);
            let denom = (w - m) + (w1 - m);
            let theta = if denom > 0.0 { (w - m) / denom } else { 0.5 };
            let m = m.min(w).min(w1);
            inf = inf.min(m);
            p.push(tau + theta * h, m, a + theta * (a1 - a), inf);
            tau = (i - from + 1) as f64 * h;
            w = w1;
            a = a1;
            inf = inf.min(w);
            p.push(tau, w, a, inf);
        }
        p
    }

    fn push(&mut self, tau: f64, w: f64, a: f64, inf: f64) {
        self.tau.push(tau);
        self.w.push(w);
        self.a.push(a);
        self.inf.push(inf);
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    /// Clock `S` at vertex `k`.
    #[inline]
    pub fn s_at_vertex(&self, k: usize) -> f64 {
        (-0.5 * self.inf[k]).max(0.0)
    }

    /// State on segment `k` at fraction `lam`: `(tau, w, a, inf)`.
    #[inline]
    pub fn on_segment(&self, k: usize, lam: f64) -> (f64, f64, f64, f64) {
        let tau = self.tau[k] + lam * (self.tau[k + 1] - self.tau[k]);
        let w = self.w[k] + lam * (self.w[k + 1] - self.w[k]);
        let a = self.a[k] + lam * (self.a[k + 1] - self.a[k]);
        (tau, w, a, self.inf[k].min(w))
    }

    /// Segment containing `tau` (clamped to the last segment).
    pub fn segment_of(&self, tau: f64) -> (usize, f64) {
        let k = self.tau.partition_point(|&x| x <= tau).saturating_sub(1);
        let k = k.min(self.len() - 2);
        let span = self.tau[k + 1] - self.tau[k];
        let lam = if span > 0.0 {
            (tau - self.tau[k]) / span
        } else {
            0.0
        };
        (k, lam.clamp(0.0, 1.0))
    }

    /// Solve `tau + S(tau) = u` on segment `k`, where `S = max(0, -inf/2)`.
    /// `S` is piecewise linear on the segment with at most two kinks, so the
    /// inverse is exact.
    pub fn invert_on_segment(&self, k: usize, u: f64) -> f64 {
        let (w0, w1) = (self.w[k], self.w[k + 1]);
        let dw = w1 - w0;
        let mut cuts = [0.0, 1.0, 1.0, 1.0];
        let mut n = 2;
        if dw < 0.0 {
            // the kinks sit where w crosses the running infimum and zero
            let (a, b) = ((self.inf[k] - w0) / dw, -w0 / dw);
            let (a, b) = (a.min(b), a.max(b));
            for lam in [a, b] {
                if lam > 0.0 && lam < 1.0 {
                    cuts[n - 1] = lam;
                    cuts[n] = 1.0;
                    n += 1;
                }
            }
        }
        let g = |lam: f64| {
            let (tau, _, _, inf) = self.on_segment(k, lam);
            tau + (-0.5 * inf).max(0.0)
        };
        for c in cuts[..n].windows(2) {
            let (g0, g1) = (g(c[0]), g(c[1]));
            if u <= g1 || c[1] == 1.0 {
                let frac = if g1 > g0 {
                    ((u - g0) / (g1 - g0)).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                return c[0] + frac * (c[1] - c[0]);
            }
        }
        1.0
    }
}
