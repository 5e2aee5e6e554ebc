//! Compactified space-time: the map `theta`, the point and path metrics,
//! Hausdorff distance between finite path sets, and diffusive rescaling.

use crate::error::{Error, Result};
use crate::lattice::{LatticePath, PathKind};

/// Spatial coordinate of a compactified point. `Star` is the spatial
/// coordinate of the two poles at `t = +inf` and `t = -inf`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coord {
    Finite(f64),
    PlusInf,
    MinusInf,
    Star,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompactPoint {
    x: Coord,
    t: f64,
}

impl CompactPoint {
    pub fn new(x: Coord, t: f64) -> Result<Self> {
        if t.is_nan() {
            return Err(Error::param("t", "NaN"));
        }
        if let Coord::Finite(v) = x {
            if !v.is_finite() {
                return Err(Error::param("x", "finite coordinate must be finite"));
            }
        }
        let pole = t.is_infinite();
        if pole != (x == Coord::Star) {
            return Err(Error::param("point", "x is the star exactly at t = +-inf"));
        }
        Ok(CompactPoint { x, t })
    }

    pub fn finite(x: f64, t: f64) -> Result<Self> {
        Self::new(Coord::Finite(x), t)
    }

    pub fn pole(upper: bool) -> Self {
        CompactPoint {
            x: Coord::Star,
            t: if upper {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            },
        }
    }

    pub fn x(&self) -> Coord {
        self.x
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

fn theta1(x: f64, t: f64) -> f64 {
    x.tanh() / (1.0 + t.abs())
}

/// Image in `[-1, 1]^2`; the poles go to `(0, 1)` and `(0, -1)`.
// claim: compactification-map
pub fn theta_map(p: &CompactPoint) -> (f64, f64) {
    let u = match p.x {
        Coord::Star => 0.0,
        Coord::PlusInf => 1.0 / (1.0 + p.t.abs()),
        Coord::MinusInf => -1.0 / (1.0 + p.t.abs()),
        Coord::Finite(x) => theta1(x, p.t),
    };
    (u, p.t.tanh())
}

pub fn point_dist(a: &CompactPoint, b: &CompactPoint) -> f64 {
    let (ua, va) = theta_map(a);
    let (ub, vb) = theta_map(b);
    (ua - ub).abs().max((va - vb).abs())
}

/// Path sampled on the grid `sigma, sigma + step, ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledPath {
    sigma: f64,
    step: f64,
    values: Vec<f64>,
}

impl SampledPath {
    pub fn new(sigma: f64, step: f64, values: Vec<f64>) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::param("step", "must be positive"));
        }
        if !sigma.is_finite() {
            return Err(Error::param("sigma", "must be finite"));
        }
        if values.is_empty() {
            return Err(Error::Empty("path values"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("values", "must be finite"));
        }
        Ok(SampledPath {
            sigma,
            step,
            values,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn horizon(&self) -> f64 {
        self.sigma + self.step * (self.values.len() - 1) as f64
    }

    /// Value at `t`, linear between grid points, constant before `sigma`
    /// and after the horizon.
    pub fn value_at(&self, t: f64) -> f64 {
        let x = (t - self.sigma) / self.step;
        if x <= 0.0 {
            return self.values[0];
        }
        let last = self.values.len() - 1;
        if x >= last as f64 {
            return self.values[last];
        }
        let k = x.floor() as usize;
        let f = x - k as f64;
        self.values[k] + f * (self.values[k + 1] - self.values[k])
    }
}

/// Path metric: the larger of the gap between the images of the starting
/// times and the sup over `t >= min(sigma1, sigma2)` of the gap in the first
/// coordinate. Before its start each path is frozen at the image of its
/// starting point, `Theta_1(p(sigma), sigma)`, so every path is one fixed
/// function of `t` and the triangle inequality holds exactly. For equal
/// starting times this is the usual formula. The sup runs over the shared
/// grid, which must align.
// claim: path-metric
pub fn path_dist(p1: &SampledPath, p2: &SampledPath) -> Result<f64> {
    let h = p1.step;
    if ((p2.step - h) / h).abs() > 1e-9 {
        return Err(Error::IncompatibleGrids(format!(
            "steps {} and {}",
            p1.step, p2.step
        )));
    }
    let off = (p2.sigma - p1.sigma) / h;
    if (off - off.round()).abs() > 1e-6 {
        return Err(Error::IncompatibleGrids(
            "starting times are not on a common grid".into(),
        ));
    }
    if (p1.horizon() - p2.horizon()).abs() > 1e-6 * h {
        return Err(Error::IncompatibleGrids(format!(
            "horizons {} and {}",
            p1.horizon(),
            p2.horizon()
        )));
    }
    let start = p1.sigma.min(p2.sigma);
    let n = ((p1.horizon() - start) / h).round() as usize;
    let mut sup: f64 = 0.0;
    for k in 0..=n {
        let t = start + k as f64 * h;
        let (t1, t2) = (t.max(p1.sigma), t.max(p2.sigma));
        let a = theta1(p1.value_at(t1), t1);
        let b = theta1(p2.value_at(t2), t2);
        sup = sup.max((a - b).abs());
    }
    Ok(sup.max((p1.sigma.tanh() - p2.sigma.tanh()).abs()))
}

/// Hausdorff distance between finite sets of paths.
// claim: hausdorff-metric
pub fn hausdorff_dist(k1: &[SampledPath], k2: &[SampledPath]) -> Result<f64> {
    if k1.is_empty() || k2.is_empty() {
        return Err(Error::Empty("path set"));
    }
    let one_sided = |a: &[SampledPath], b: &[SampledPath]| -> Result<f64> {
        let mut worst: f64 = 0.0;
        for p in a {
            let mut best = f64::INFINITY;
            for q in b {
                best = best.min(path_dist(p, q)?);
            }
            worst = worst.max(best);
        }
        Ok(worst)
    };
    Ok(one_sided(k1, k2)?.max(one_sided(k2, k1)?))
}

/// Sup over `p` in `a` of the distance from `p` to the set `b`.
pub fn hausdorff_one_sided(a: &[SampledPath], b: &[SampledPath]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("path set"));
    }
    let mut worst: f64 = 0.0;
    for p in a {
        let mut best = f64::INFINITY;
        for q in b {
            best = best.min(path_dist(p, q)?);
        }
        worst = worst.max(best);
    }
    Ok(worst)
}

/// Image of a forward lattice path under `(x, t) -> (eps x, eps^2 t)`,
/// sampled at the images of the lattice times.
// claim: diffusive-scaling
pub fn rescale_path(p: &LatticePath, eps: f64) -> Result<SampledPath> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::param("eps", "must be positive"));
    }
    if p.kind() != PathKind::Forward {
        return Err(Error::param("path", "only forward paths are rescaled"));
    }
    SampledPath::new(
        eps * eps * p.start_t() as f64,
        eps * eps,
        p.positions().iter().map(|&x| eps * x as f64).collect(),
    )
}

/// The same map applied to an already sampled path.
pub fn rescale_sampled(p: &SampledPath, eps: f64) -> Result<SampledPath> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::param("eps", "must be positive"));
    }
    SampledPath::new(
        eps * eps * p.sigma,
        eps * eps * p.step,
        p.values.iter().map(|v| eps * v).collect(),
    )
}
