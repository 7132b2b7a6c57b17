//! Reference CDFs, empirical distributions, Kolmogorov-Smirnov distances and
//! empirical characteristic functions.

use std::f64::consts::{FRAC_1_PI, FRAC_2_PI, FRAC_PI_2};

use num_complex::Complex64;
use thiserror::Error;

use crate::maps::ComplexPoint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("empirical distribution has no samples")]
    Empty,
    #[error("sample contains NaN")]
    NaN,
    #[error("quantile level {0} is outside (0, 1)")]
    LevelOutOfRange(f64),
    #[error("series lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

/// Standard Cauchy CDF `½ + arctan(x)/π`.
pub fn cauchy_cdf(x: f64) -> f64 {
    0.5 + x.atan() * FRAC_1_PI
}

/// CDF of the hyperbolic secant law, `(2/π)·arctan(e^{πy/2})`.
pub fn sech_cdf(y: f64) -> f64 {
    // Evaluate the smaller tail directly so both tails keep full precision.
    if y > 0.0 {
        1.0 - FRAC_2_PI * (-FRAC_PI_2 * y).exp().atan()
    } else {
        FRAC_2_PI * (FRAC_PI_2 * y).exp().atan()
    }
}

/// Sorted, immutable sample buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    sorted: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(mut samples: Vec<f64>) -> Result<Self, StatsError> {
        if samples.iter().any(|x| x.is_nan()) {
            return Err(StatsError::NaN);
        }
        samples.sort_unstable_by(f64::total_cmp);
        Ok(EmpiricalDistribution { sorted: samples })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn into_sorted(self) -> Vec<f64> {
        self.sorted
    }

    /// Fraction of samples `≤ x`.
    pub fn cdf(&self, x: f64) -> Result<f64, StatsError> {
        self.non_empty()?;
        let below = self.sorted.partition_point(|&s| s <= x);
        Ok(below as f64 / self.len() as f64)
    }

    fn non_empty(&self) -> Result<(), StatsError> {
        if self.sorted.is_empty() {
            Err(StatsError::Empty)
        } else {
            Ok(())
        }
    }
}

impl TryFrom<Vec<f64>> for EmpiricalDistribution {
    type Error = StatsError;

    fn try_from(samples: Vec<f64>) -> Result<Self, Self::Error> {
        EmpiricalDistribution::new(samples)
    }
}

/// One-sample Kolmogorov-Smirnov distance between `e` and a continuous `cdf`.
pub fn ks_one_sample<F>(e: &EmpiricalDistribution, cdf: F) -> Result<f64, StatsError>
where
    F: Fn(f64) -> f64,
{
    e.non_empty()?;
    let n = e.len() as f64;
    let d = e
        .sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max);
    Ok(d)
}

/// Two-sample Kolmogorov-Smirnov distance `sup |F̂₁ − F̂₂|`.
pub fn ks_two_sample(
    e1: &EmpiricalDistribution,
    e2: &EmpiricalDistribution,
) -> Result<f64, StatsError> {
    e1.non_empty()?;
    e2.non_empty()?;
    let (xs, ys) = (e1.sorted(), e2.sorted());
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        // Step past every copy of the smallest remaining value in both
        // samples before comparing, so ties never open a spurious gap.
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(d)
}

/// `(1/n)·Σ e^{iθx_j}`.
pub fn empirical_cf(e: &EmpiricalDistribution, theta: f64) -> Result<ComplexPoint, StatsError> {
    e.non_empty()?;
    let (re, im) = e.sorted.iter().fold((0.0, 0.0), |(re, im), &x| {
        let (s, c) = (theta * x).sin_cos();
        (re + c, im + s)
    });
    let n = e.len() as f64;
    Ok(Complex64::new(re / n, im / n))
}

/// Nearest-rank quantiles: the `⌈p·n⌉`-th smallest sample for each level `p`.
pub fn quantiles(e: &EmpiricalDistribution, levels: &[f64]) -> Result<Vec<f64>, StatsError> {
    e.non_empty()?;
    let n = e.len();
    levels
        .iter()
        .map(|&p| {
            if !(p > 0.0 && p < 1.0) {
                return Err(StatsError::LevelOutOfRange(p));
            }
            let rank = (p * n as f64).ceil() as usize;
            Ok(e.sorted[rank.clamp(1, n) - 1])
        })
        .collect()
}

/// Pearson correlation of two equally long series. Returns 0 when either
/// series is constant.
pub fn correlation(xs: &[f64], ys: &[f64]) -> Result<f64, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.is_empty() {
        return Err(StatsError::Empty);
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(0.0);
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Asymptotic Kolmogorov critical coefficient `c(α) = √(−ln(α/2)/2)`.
pub fn ks_coefficient(alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt()
}

/// Asymptotic one-sample KS critical value at level `alpha` for `n` samples.
pub fn ks_critical_one_sample(n: usize, alpha: f64) -> f64 {
    ks_coefficient(alpha) / (n as f64).sqrt()
}

/// Asymptotic two-sample KS critical value at level `alpha`.
pub fn ks_critical_two_sample(n: usize, m: usize, alpha: f64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    ks_coefficient(alpha) * ((n + m) / (n * m)).sqrt()
}
