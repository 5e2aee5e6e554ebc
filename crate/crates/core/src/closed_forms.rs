//! Closed-form limits: the avoidance function `big_psi`, the density
//! `small_psi`, the flux bound, the joint law of a Brownian maximum, and the
//! supermartingale used for hitting bounds. Normal CDF and quadrature are
//! implemented here.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::tolerances::{DENSITY_QUAD_TOL, FLUX_QUAD_TOL, PSI_DERIVATIVE_STEP};

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Complementary error function, absolute error below 1e-14.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.abs() < 2.0 {
        return 1.0 - erf_series(x);
    }
    if x > 0.0 {
        erfc_cf(x)
    } else {
        2.0 - erfc_cf(-x)
    }
}

pub fn erf(x: f64) -> f64 {
    if x.abs() < 2.0 {
        erf_series(x)
    } else {
        1.0 - erfc(x)
    }
}

fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= -x2 / n;
        let add = term / (2.0 * n + 1.0);
        sum += add;
        if add.abs() <= 1e-17 * sum.abs() || n > 200.0 {
            break;
        }
    }
    2.0 * FRAC_1_SQRT_PI * sum
}

/// Continued fraction, modified Lentz, valid for `x >= 2`.
fn erfc_cf(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..500 {
        let a = 0.5 * n as f64;
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        d = 1.0 / d;
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() * FRAC_1_SQRT_PI / f
}

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Inverse normal CDF: Acklam's rational approximation refined by one
/// Halley step.
pub fn normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    let plow = 0.02425;
    let x = if p < plow {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - plow {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let e = normal_cdf(x) - p;
    let u = e * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    x - u / (1.0 + 0.5 * x * u)
}

fn check_t(t: f64) -> Result<()> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::param("t", format!("must be positive, got {t}")));
    }
    Ok(())
}

/// Probability that a drift-2 Brownian motion with diffusion 2 started at
/// `eps` has not hit zero by time `t`; equivalently the probability that
/// the limiting net has a point in an interval of length `eps` at time `t`.
// claim: avoidance-function
pub fn big_psi(eps: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::param(
            "eps",
            format!("must be non-negative, got {eps}"),
        ));
    }
    let a = (2.0 * t).sqrt();
    Ok(normal_cdf(a + eps / a) - (-2.0 * eps).exp() * normal_cdf(a - eps / a))
}

/// Derivative of `big_psi` in `eps` at zero: the density of the limiting
/// net at time `t` started from everywhere at time zero.
// claim: density-function
pub fn small_psi(t: f64) -> Result<f64> {
    check_t(t)?;
    Ok((-t).exp() / (PI * t).sqrt() + 2.0 * normal_cdf((2.0 * t).sqrt()))
}

pub fn expected_density(t: f64) -> Result<f64> {
    small_psi(t)
}

/// `int_s^t 2 small_psi(u)^2 du`, the bound on the expected number of
/// left-most paths crossing a left-most path between times `s` and `t`.
// claim: left-flux-bound
pub fn left_flux_bound(s: f64, t: f64) -> Result<f64> {
    check_t(s)?;
    if t < s {
        return Err(Error::param("t", format!("must be >= s, got s={s}, t={t}")));
    }
    Ok(quad::integrate(
        |u| {
            let p = small_psi(u).unwrap();
            2.0 * p * p
        },
        s,
        t,
        FLUX_QUAD_TOL,
    ))
}

/// `d_t Psi - (d_ee + 2 d_e) Psi` by central differences with step `h`.
/// Needs `eps >= h`.
// claim: avoidance-pde
pub fn pde_residual(eps: f64, t: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) || eps < h || t <= h {
        return Err(Error::param("h", "need 0 < h <= eps and h < t"));
    }
    let p = |e: f64, s: f64| big_psi(e, s).unwrap();
    let dt = (p(eps, t + h) - p(eps, t - h)) / (2.0 * h);
    let de = (p(eps + h, t) - p(eps - h, t)) / (2.0 * h);
    let dee = (p(eps + h, t) - 2.0 * p(eps, t) + p(eps - h, t)) / (h * h);
    Ok(dt - dee - 2.0 * de)
}

/// Joint density of `(M_t, -B_t)` for a standard Brownian motion `B` with
/// running maximum `M`. Supported on `x >= 0, y >= -x`.
// claim: joint-density
pub fn max_bm_joint_density(x: f64, y: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    if x < 0.0 || y < -x {
        return Ok(0.0);
    }
    let u = 2.0 * x + y;
    Ok((2.0 * PI * t).sqrt().recip() * (2.0 * u / t) * (-u * u / (2.0 * t)).exp())
}

/// Total mass of [`max_bm_joint_density`] by nested quadrature over the
/// support, truncated where the density is below 1e-30.
pub fn max_bm_joint_mass(t: f64) -> Result<f64> {
    check_t(t)?;
    let top = 12.0 * t.sqrt();
    Ok(quad::integrate(
        |x| {
            quad::integrate(
                |y| max_bm_joint_density(x, y, t).unwrap(),
                -x,
                top,
                DENSITY_QUAD_TOL,
            )
        },
        0.0,
        top,
        DENSITY_QUAD_TOL * 10.0,
    ))
}

/// `d Psi / d eps` at `eps = 0` by one-sided differences with two levels of
/// Richardson extrapolation. An independent route to `small_psi`.
pub fn psi_eps_derivative_at_zero(t: f64) -> Result<f64> {
    check_t(t)?;
    let d = |h: f64| big_psi(h, t).map(|v| v / h);
    let h = PSI_DERIVATIVE_STEP;
    let (d1, d2, d3) = (d(h)?, d(h / 2.0)?, d(h / 4.0)?);
    let r1 = 2.0 * d2 - d1;
    let r2 = 2.0 * d3 - d2;
    Ok((4.0 * r2 - r1) / 3.0)
}

/// `F(t, x, y) = Psi_x(t) Psi_y(t)`, with `F(0, x, y) = 1{x > 0}`.
// claim: hitting-supermartingale
pub fn supermartingale_f(t: f64, x: f64, y: f64) -> Result<f64> {
    if t < 0.0 || x < 0.0 || y < 0.0 {
        return Err(Error::param("F", "needs t, x, y >= 0"));
    }
    if t == 0.0 {
        return Ok(if x > 0.0 { 1.0 } else { 0.0 });
    }
    Ok(big_psi(x, t)? * big_psi(y, t)?)
}

/// `(-d_t + d_xx + 2 d_x + 3 d_yy + 2 d_y) F` by central differences.
pub fn supermartingale_drift(t: f64, x: f64, y: f64, h: f64) -> Result<f64> {
    if x < h || y < h || t <= h {
        return Err(Error::param("h", "need x, y >= h and t > h"));
    }
    let f = |t: f64, x: f64, y: f64| supermartingale_f(t, x, y).unwrap();
    let ft = (f(t + h, x, y) - f(t - h, x, y)) / (2.0 * h);
    let fx = (f(t, x + h, y) - f(t, x - h, y)) / (2.0 * h);
    let fy = (f(t, x, y + h) - f(t, x, y - h)) / (2.0 * h);
    let f0 = f(t, x, y);
    let fxx = (f(t, x + h, y) - 2.0 * f0 + f(t, x - h, y)) / (h * h);
    let fyy = (f(t, x, y + h) - 2.0 * f0 + f(t, x, y - h)) / (h * h);
    Ok(-ft + fxx + 2.0 * fx + 3.0 * fyy + 2.0 * fy)
}

pub mod quad {
    //! Adaptive Gauss-Kronrod (7, 15) quadrature.

    const XGK: [f64; 8] = [
        0.991_455_371_120_812_6,
        0.949_107_912_342_758_5,
        0.864_864_423_359_769_1,
        0.741_531_185_599_394_4,
        0.586_087_235_467_691_1,
        0.405_845_151_377_397_2,
        0.207_784_955_007_898_5,
        0.0,
    ];
    const WGK: [f64; 8] = [
        0.022_935_322_010_529_22,
        0.063_092_092_629_978_55,
        0.104_790_010_322_250_2,
        0.140_653_259_715_525_9,
        0.169_004_726_639_267_9,
        0.190_350_578_064_785_4,
        0.204_432_940_075_298_9,
        0.209_482_141_084_727_8,
    ];
    const WG: [f64; 4] = [
        0.129_484_966_168_869_7,
        0.279_705_391_489_276_7,
        0.381_830_050_505_118_9,
        0.417_959_183_673_469_4,
    ];

    fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let fc = f(c);
        let mut k = WGK[7] * fc;
        let mut g = WG[3] * fc;
        for i in 0..7 {
            let dx = h * XGK[i];
            let s = f(c - dx) + f(c + dx);
            k += WGK[i] * s;
            if i % 2 == 1 {
                g += WG[i / 2] * s;
            }
        }
        (k * h, ((k - g) * h).abs())
    }

    /// Integral of `f` over `[a, b]` to absolute tolerance `tol`.
    pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        let mut stack = vec![(a, b, tol, 0u32)];
        let mut total = 0.0;
        while let Some((lo, hi, eps, depth)) = stack.pop() {
            let (val, err) = gk15(&f, lo, hi);
            if err <= eps || depth >= 40 {
                total += val;
            } else {
                let mid = 0.5 * (lo + hi);
                stack.push((lo, mid, 0.5 * eps, depth + 1));
                stack.push((mid, hi, 0.5 * eps, depth + 1));
            }
        }
        total
    }
}
