//! Sample summaries for the d1/d2 diagnostics.

use serde::{Deserialize, Serialize};

use super::special::norm_cdf;
use crate::error::{Error, Result};

/// Moments and normality distance of a sample.
///
/// `skewness` and `excess_kurtosis` are `None` when the sample variance is
/// zero. `ks_distance` is the Kolmogorov–Smirnov distance between the
/// studentized sample and the standard normal; a constant sample is treated as
/// a point mass at the origin, which gives 0.5.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub skewness: Option<f64>,
    pub excess_kurtosis: Option<f64>,
    pub ks_distance: f64,
}

impl SampleStats {
    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        (self.variance / self.n as f64).sqrt()
    }
}

pub fn summarize(samples: &[f64]) -> Result<SampleStats> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::invalid(format!("summarize needs at least 2 samples, got {n}")));
    }
    if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("sample {i} is not finite")));
    }
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &v in samples {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let variance = m2 / (nf - 1.0);
    let (m2, m3, m4) = (m2 / nf, m3 / nf, m4 / nf);

    if m2 <= f64::MIN_POSITIVE {
        return Ok(SampleStats {
            n,
            mean,
            variance: 0.0,
            skewness: None,
            excess_kurtosis: None,
            ks_distance: 0.5,
        });
    }

    let skewness = m3 / m2.powf(1.5);
    let excess_kurtosis = m4 / (m2 * m2) - 3.0;

    let sd = variance.sqrt();
    let mut z: Vec<f64> = samples.iter().map(|v| (v - mean) / sd).collect();
    z.sort_unstable_by(f64::total_cmp);
    let mut ks: f64 = 0.0;
    for (i, &zi) in z.iter().enumerate() {
        let f = norm_cdf(zi);
        ks = ks.max((i + 1) as f64 / nf - f).max(f - i as f64 / nf);
    }

    Ok(SampleStats {
        n,
        mean,
        variance,
        skewness: Some(skewness),
        excess_kurtosis: Some(excess_kurtosis),
        ks_distance: ks.clamp(0.0, 1.0),
    })
}

/// Empirical quantiles of `samples` at probabilities `(i - 0.5) / k`,
/// paired with the matching standard normal quantiles.
pub fn qq_points(samples: &[f64], k: usize) -> Vec<(f64, f64)> {
    if samples.is_empty() || k == 0 {
        return Vec::new();
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len();
    (1..=k)
        .map(|i| {
            let p = (i as f64 - 0.5) / k as f64;
            let pos = p * n as f64 - 0.5;
            let lo = pos.floor().clamp(0.0, (n - 1) as f64) as usize;
            let hi = (lo + 1).min(n - 1);
            let w = (pos - lo as f64).clamp(0.0, 1.0);
            let q = sorted[lo] * (1.0 - w) + sorted[hi] * w;
            (super::special::norm_quantile(p), q)
        })
        .collect()
}
