//! Summation and formatting helpers shared by every module.

const PAIRWISE_BLOCK: usize = 16;

/// Pairwise (cascade) summation. Rounding error grows as O(log n) instead of
/// O(n) for naive left-to-right accumulation.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Pairwise sum of the terms produced by `terms`.
pub fn sum_terms<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let buf: Vec<f64> = terms.into_iter().collect();
    pairwise_sum(&buf)
}

/// Formats a float with 17 significant digits, which round-trips binary64.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}
