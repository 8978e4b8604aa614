//! Percentile and basic bootstrap intervals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum IntervalMethod {
    #[default]
    Percentile,
    Basic,
}

impl std::str::FromStr for IntervalMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "percentile" => Ok(IntervalMethod::Percentile),
            "basic" => Ok(IntervalMethod::Basic),
            other => Err(Error::invalid(format!("unknown interval method `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    /// Nominal coverage `1 - alpha`.
    pub level: f64,
    pub method: IntervalMethod,
    #[serde(skip)]
    pub point: f64,
}

impl ConfidenceInterval {
    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Interval with both endpoints multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        ConfidenceInterval { lower: self.lower * factor, upper: self.upper * factor, point: self.point * factor, ..*self }
    }
}

/// Zero-based positions of the lower and upper percentile order statistics.
///
/// Zero-based positions of the interval endpoints in the sorted replicates.
///
/// With `B` replicates and `alpha = 1 - level`, these are the
/// `ceil(B * alpha / 2)`-th and `ceil(B * (1 - alpha / 2))`-th smallest values.
pub fn percentile_positions(b: usize, level: f64) -> Result<(usize, usize)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid(format!("level {level} outside (0, 1)")));
    }
    if b == 0 {
        return Err(Error::invalid("no replicates"));
    }
    let alpha = 1.0 - level;
    // The slack keeps products like 100 * 0.05 / 2 from rounding up past an integer.
    let lower = ((b as f64 * alpha / 2.0) - 1e-9).ceil().max(1.0) as usize;
    let upper = ((b as f64 * (1.0 - alpha / 2.0)) - 1e-9).ceil().clamp(1.0, b as f64) as usize;
    Ok((lower - 1, upper - 1))
}

/// Interval from bootstrap replicates around the point estimate `point`.
pub fn confidence_interval(replicates: &[f64], point: f64, level: f64, method: IntervalMethod) -> Result<ConfidenceInterval> {
    if replicates.len() < 2 {
        return Err(Error::invalid("intervals need at least two replicates"));
    }
    if replicates.iter().any(|x| x.is_nan()) {
        return Err(Error::degenerate("replicate is NaN"));
    }
    let (lo, hi) = percentile_positions(replicates.len(), level)?;
    let mut sorted = replicates.to_vec();
    sorted.sort_unstable_by(|a, b| a.total_cmp(b));
    let (p_lower, p_upper) = (sorted[lo], sorted[hi]);
    let (lower, upper) = match method {
        IntervalMethod::Percentile => (p_lower, p_upper),
        IntervalMethod::Basic => (2.0 * point - p_upper, 2.0 * point - p_lower),
    };
    Ok(ConfidenceInterval { lower, upper, level, method, point })
}

/// Sample standard deviation (denominator `n - 1`); zero for fewer than two values.
pub fn standard_deviation(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}
