//! Streaming moments, histograms, confidence intervals and least-squares fits.
//!
//! Variances are population variances (divide by the count) and kurtosis is
//! raw kurtosis, `m4 / m2^2`, which is 3 for a normal distribution.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{GridError, Result};

/// Mergeable single-pass summary of a real-valued sample.
///
/// `m2`, `m3` and `m4` are central power sums, not averages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
    pub min: f64,
    pub max: f64,
    bin_width: Option<f64>,
    histogram: BTreeMap<i64, u64>,
}

impl Default for SampleSummary {
    fn default() -> Self {
        Self::new()
    }
}

impl SampleSummary {
    pub fn new() -> Self {
        SampleSummary {
            count: 0,
            mean: 0.0,
            m2: 0.0,
            m3: 0.0,
            m4: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            bin_width: None,
            histogram: BTreeMap::new(),
        }
    }

    /// A summary that also keeps a histogram; bin `b` covers
    /// `[b * width, (b + 1) * width)`.
    pub fn with_histogram(bin_width: f64) -> Self {
        assert!(bin_width > 0.0, "bin width must be positive");
        SampleSummary {
            bin_width: Some(bin_width),
            ..Self::new()
        }
    }

    pub fn from_slice(xs: &[f64]) -> Self {
        let mut s = Self::new();
        s.extend(xs.iter().copied());
        s
    }

    pub fn extend(&mut self, xs: impl IntoIterator<Item = f64>) {
        for x in xs {
            self.accumulate(x);
        }
    }

    pub fn accumulate(&mut self, x: f64) {
        let n1 = self.count as f64;
        self.count += 1;
        let n = self.count as f64;
        let delta = x - self.mean;
        let delta_n = delta / n;
        let delta_n2 = delta_n * delta_n;
        let term1 = delta * delta_n * n1;
        self.m4 += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * self.m2
            - 4.0 * delta_n * self.m3;
        self.m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * self.m2;
        self.m2 += term1;
        self.mean += delta_n;
        self.min = self.min.min(x);
        self.max = self.max.max(x);
        if let Some(w) = self.bin_width {
            *self.histogram.entry((x / w).floor() as i64).or_default() += 1;
        }
    }

    /// Summary of the concatenation of both samples. Histograms are combined
    /// when both sides carry one with the same bin width.
    pub fn merge(&self, other: &SampleSummary) -> SampleSummary {
        if other.count == 0 {
            return self.clone();
        }
        if self.count == 0 {
            return other.clone();
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let delta = other.mean - self.mean;
        let d2 = delta * delta;
        let d3 = d2 * delta;
        let d4 = d2 * d2;

        let mean = self.mean + delta * nb / n;
        let m2 = self.m2 + other.m2 + d2 * na * nb / n;
        let m3 = self.m3
            + other.m3
            + d3 * na * nb * (na - nb) / (n * n)
            + 3.0 * delta * (na * other.m2 - nb * self.m2) / n;
        let m4 = self.m4
            + other.m4
            + d4 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * d2 * (na * na * other.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * delta * (na * other.m3 - nb * self.m3) / n;

        let mut histogram = self.histogram.clone();
        let bin_width = match (self.bin_width, other.bin_width) {
            (Some(a), Some(b)) if a == b => {
                for (k, v) in &other.histogram {
                    *histogram.entry(*k).or_default() += v;
                }
                Some(a)
            }
            _ => {
                histogram.clear();
                None
            }
        };

        SampleSummary {
            count: self.count + other.count,
            mean,
            m2,
            m3,
            m4,
            min: self.min.min(other.min),
            max: self.max.max(other.max),
            bin_width,
            histogram,
        }
    }

    /// Population variance.
    pub fn variance(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.m2 / self.count as f64
        }
    }

    /// Fourth central moment, `m4 / count`.
    pub fn fourth_moment(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.m4 / self.count as f64
        }
    }

    /// Raw kurtosis `m4 / sigma^4`.
    pub fn kurtosis(&self) -> Result<f64> {
        if self.count < 4 || self.m2 <= 0.0 {
            return Err(GridError::DegenerateSample);
        }
        Ok(self.count as f64 * self.m4 / (self.m2 * self.m2))
    }

    /// Normal-approximation 95% interval for the mean. Meant for
    /// `count >= 30`.
    pub fn mean_ci95(&self) -> (f64, f64) {
        let half = if self.count == 0 {
            0.0
        } else {
            1.96 * (self.variance() / self.count as f64).sqrt()
        };
        (self.mean - half, self.mean + half)
    }

    pub fn histogram(&self) -> &BTreeMap<i64, u64> {
        &self.histogram
    }

    pub fn bin_width(&self) -> Option<f64> {
        self.bin_width
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// Centered R^2 for free fits; uncentered (about zero) for fits through
    /// the origin.
    pub r_squared: f64,
    pub n_points: usize,
    pub residual_std_error: f64,
}

impl FitResult {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Ordinary least squares of `y` on `x`. With `force_zero_intercept` the line
/// passes through the origin and `slope = sum(xy) / sum(x^2)`.
pub fn ols_fit(points: &[(f64, f64)], force_zero_intercept: bool) -> Result<FitResult> {
    let k = points.len();
    let params = if force_zero_intercept { 1 } else { 2 };
    if k < 2 {
        return Err(GridError::DegenerateDesign);
    }
    let nf = k as f64;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let (slope, intercept) = if force_zero_intercept {
        let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
        if sxx == 0.0 || !sxx.is_finite() {
            return Err(GridError::DegenerateDesign);
        }
        let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
        (sxy / sxx, 0.0)
    } else {
        let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
        let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
        if sxx <= 0.0 || !sxx.is_finite() {
            return Err(GridError::DegenerateDesign);
        }
        let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = sxy / sxx;
        (slope, my - slope * mx)
    };

    let ssr: f64 = points
        .iter()
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let sst: f64 = if force_zero_intercept {
        points.iter().map(|(_, y)| y * y).sum()
    } else {
        points.iter().map(|(_, y)| (y - my).powi(2)).sum()
    };
    let r_squared = if sst > 0.0 {
        (1.0 - ssr / sst).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let dof = k - params;
    let residual_std_error = if dof > 0 {
        (ssr / dof as f64).sqrt()
    } else {
        0.0
    };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        n_points: k,
        residual_std_error,
    })
}
