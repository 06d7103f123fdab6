use serde::{Deserialize, Serialize};

/// Mean with a standard error.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
}

impl Estimate {
    /// Mean of equally weighted block averages, with the standard error of
    /// that mean estimated from the block-to-block scatter.
    pub fn from_blocks(blocks: &[f64]) -> Self {
        let n = blocks.len();
        if n == 0 {
            return Self::default();
        }
        let mean = blocks.iter().sum::<f64>() / n as f64;
        if n == 1 {
            return Self { mean, std_err: f64::NAN };
        }
        let var = blocks.iter().map(|b| (b - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        Self {
            mean,
            std_err: (var / n as f64).sqrt(),
        }
    }

    /// Whether `value` lies within `k` standard errors, with an absolute
    /// floor for estimates whose blocks happen to be identical.
    pub fn agrees_with(&self, value: f64, k: f64, floor: f64) -> bool {
        (self.mean - value).abs() <= k * self.std_err + floor
    }
}

/// Centred moving average over `window` entries, shrinking at the ends.
pub fn window_average(values: &[f64], window: usize) -> Vec<f64> {
    let half = window / 2;
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(0.0);
    for v in values {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(values.len());
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}
