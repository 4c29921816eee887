use crate::error::{Error, Result};

/// Affine map of scores onto `[lo, hi]`: the lowest score costs `lo`, the
/// highest `hi`. Constant scores all cost `(lo + hi) / 2`.
pub fn normalized_linear_costs(scores: &[f64], lo: f64, hi: f64) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::Config(format!("cost range [{lo}, {hi}] must satisfy hi > lo > 0")));
    }
    if let Some(s) = scores.iter().find(|s| !s.is_finite()) {
        return Err(Error::Config(format!("non-finite score {s}")));
    }
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(scores
        .iter()
        .map(|&s| {
            if max == min {
                (lo + hi) / 2.0
            } else {
                (lo + (hi - lo) * (s - min) / (max - min)).clamp(lo, hi)
            }
        })
        .collect())
}
