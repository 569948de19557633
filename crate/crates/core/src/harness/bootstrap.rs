//! Percentile bootstrap confidence intervals.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::metrics::mean;

/// A sample mean with a confidence interval around it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub mean: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }
}

/// Linear-interpolated quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty data");
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Percentile bootstrap of the mean of `values`. The bounds are widened to
/// include the sample mean when resampling noise puts it outside.
pub fn bootstrap_mean<R: Rng + ?Sized>(values: &[f64], resamples: usize, confidence: f64, rng: &mut R) -> Interval {
    let m = mean(values);
    if values.is_empty() || resamples == 0 {
        return Interval {
            mean: m,
            lower: m,
            upper: m,
        };
    }
    let n = values.len();
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| (0..n).map(|_| values[rng.random_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let tail = (1.0 - confidence) / 2.0;
    Interval {
        mean: m,
        lower: quantile(&means, tail).min(m),
        upper: quantile(&means, 1.0 - tail).max(m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn quantile_interpolates() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile(&xs, 0.0), 1.0);
        assert_eq!(quantile(&xs, 0.5), 3.0);
        assert_eq!(quantile(&xs, 1.0), 5.0);
        assert!((quantile(&xs, 0.125) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn constant_sample_has_zero_width() {
        let ci = bootstrap_mean(&[4.0; 50], 1000, 0.95, &mut seeded(1));
        assert_eq!((ci.lower, ci.mean, ci.upper), (4.0, 4.0, 4.0));
    }

    #[test]
    fn width_matches_normal_approximation() {
        // Values 0..100 have sd ~28.87; the 95% interval of the mean of 100
        // draws is about +-1.96 * 2.887.
        let xs: Vec<f64> = (0..100).map(f64::from).collect();
        let ci = bootstrap_mean(&xs, 4000, 0.95, &mut seeded(2));
        let half = (ci.upper - ci.lower) / 2.0;
        assert!((half - 1.96 * 2.887).abs() < 0.6, "half width {half}");
        assert!(ci.contains(49.5));
    }

    #[test]
    fn overlap() {
        let a = Interval { mean: 1.0, lower: 0.5, upper: 1.5 };
        let b = Interval { mean: 2.0, lower: 1.5, upper: 2.5 };
        let c = Interval { mean: 3.0, lower: 2.6, upper: 3.5 };
        assert!(a.overlaps(&b));
        assert!(!a.overlaps(&c));
    }
}
