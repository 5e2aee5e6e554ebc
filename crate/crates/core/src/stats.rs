//! Small statistics toolkit: KS tests, means with standard errors,
//! ratio and dispersion estimators, 2x2 independence test.

use crate::closed_forms::erfc;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Kolmogorov survival function `P(K > lambda)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let l2 = -2.0 * lambda * lambda;
    for j in 1..200 {
        let jf = j as f64;
        let term = (l2 * jf * jf).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn sorted_finite(xs: &[f64], what: &'static str) -> Result<Vec<f64>> {
    if xs.is_empty() {
        return Err(Error::Empty(what));
    }
    if xs.iter().any(|x| x.is_nan()) {
        return Err(Error::Degenerate(format!("{what} contains NaN")));
    }
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(v)
}

/// Two-sample KS test. Ties across samples are handled by stepping both
/// empirical CDFs past each distinct value together.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    let a = sorted_finite(a, "first sample")?;
    let b = sorted_finite(b, "second sample")?;
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let v = a[i].min(b[j]);
        while i < n && a[i] == v {
            i += 1;
        }
        while j < m && b[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n * m) as f64 / (n + m) as f64;
    let s = ne.sqrt();
    let p = kolmogorov_sf((s + 0.12 + 0.11 / s) * d);
    Ok(KsResult {
        statistic: d,
        p_value: p,
    })
}

/// One-sample KS test against a continuous CDF.
pub fn ks_one_sample<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> Result<KsResult> {
    let v = sorted_finite(sample, "sample")?;
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in v.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    let s = n.sqrt();
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_sf((s + 0.12 + 0.11 / s) * d),
    })
}

/// Sample mean and its standard error.
pub fn mean_stderr(xs: &[f64]) -> Result<(f64, f64)> {
    if xs.len() < 2 {
        return Err(Error::SampleTooSmall {
            needed: 2,
            got: xs.len(),
        });
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

/// Mean and standard error of `a_i - b_i`.
pub fn paired_difference(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.len() != b.len() {
        return Err(Error::Degenerate("paired samples differ in length".into()));
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    mean_stderr(&d)
}

/// `sum(num) / sum(den)` with a delta-method standard error.
pub fn ratio_of_means(num: &[f64], den: &[f64]) -> Result<(f64, f64)> {
    if num.len() != den.len() {
        return Err(Error::Degenerate("ratio samples differ in length".into()));
    }
    if num.len() < 2 {
        return Err(Error::SampleTooSmall {
            needed: 2,
            got: num.len(),
        });
    }
    let n = num.len() as f64;
    let mx = num.iter().sum::<f64>() / n;
    let my = den.iter().sum::<f64>() / n;
    if my == 0.0 {
        return Err(Error::Degenerate("denominator has zero mean".into()));
    }
    let r = mx / my;
    let s2 = num
        .iter()
        .zip(den)
        .map(|(x, y)| (x - r * y).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    Ok((r, (s2 / n).sqrt() / my.abs()))
}

/// Variance-to-mean ratio of counts, with a jackknife standard error.
pub fn dispersion_index(counts: &[f64]) -> Result<(f64, f64)> {
    let n = counts.len();
    if n < 10 {
        return Err(Error::SampleTooSmall { needed: 10, got: n });
    }
    let nf = n as f64;
    let s1: f64 = counts.iter().sum();
    let s2: f64 = counts.iter().map(|c| c * c).sum();
    if s1 == 0.0 {
        return Err(Error::Degenerate("all counts are zero".into()));
    }
    let index = |s1: f64, s2: f64, k: f64| {
        let m = s1 / k;
        let v = (s2 - k * m * m) / (k - 1.0);
        v / m
    };
    let full = index(s1, s2, nf);
    let loo: Vec<f64> = counts
        .iter()
        .map(|c| index(s1 - c, s2 - c * c, nf - 1.0))
        .collect();
    let mean_loo = loo.iter().sum::<f64>() / nf;
    let var = loo.iter().map(|v| (v - mean_loo).powi(2)).sum::<f64>() * (nf - 1.0) / nf;
    Ok((full, var.sqrt()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub p_value: f64,
}

/// Pearson chi-square test of independence on a 2x2 table, one degree of
/// freedom. Refuses tables with an expected cell below 5.
pub fn chi_square_2x2(table: [[u64; 2]; 2]) -> Result<ChiSquare> {
    let total: u64 = table.iter().flatten().sum();
    if total == 0 {
        return Err(Error::Empty("contingency table"));
    }
    let rows = [table[0][0] + table[0][1], table[1][0] + table[1][1]];
    let cols = [table[0][0] + table[1][0], table[0][1] + table[1][1]];
    let n = total as f64;
    let mut stat = 0.0;
    let mut min_e = f64::INFINITY;
    for i in 0..2 {
        for j in 0..2 {
            let e = rows[i] as f64 * cols[j] as f64 / n;
            min_e = min_e.min(e);
            if e > 0.0 {
                stat += (table[i][j] as f64 - e).powi(2) / e;
            }
        }
    }
    if min_e < 5.0 {
        return Err(Error::SparseTable(min_e));
    }
    Ok(ChiSquare {
        statistic: stat,
        p_value: erfc((stat / 2.0).sqrt()),
    })
}

/// Wilson score interval for a binomial proportion at the given two-sided
/// confidence level.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials {
        return Err(Error::param(
            "counts",
            format!("need 0 <= successes <= trials and trials >= 1, got {successes}/{trials}"),
        ));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::param("confidence", "must lie in (0, 1)"));
    }
    let z = crate::closed_forms::normal_quantile(0.5 + 0.5 * confidence);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 {
        0.0
    } else {
        (centre - half).max(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    Ok((lo, hi))
}

/// Proportion with its binomial standard error.
pub fn proportion(successes: u64, trials: u64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::Empty("trials"));
    }
    let p = successes as f64 / trials as f64;
    Ok((p, (p * (1.0 - p) / trials as f64).sqrt()))
}
