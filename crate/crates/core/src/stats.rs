//! Sample summaries for Monte Carlo output.

/// Sample mean and naive standard error `s / sqrt(m)`.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let m = values.len();
    if m == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / m as f64;
    if m == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
    (mean, (var / m as f64).sqrt())
}

const BATCHES: usize = 32;

/// Sample mean with a batch-means standard error, which stays honest for
/// autocorrelated chain output. Falls back to the naive error for short
/// series.
pub fn mean_batch_stderr(values: &[f64]) -> (f64, f64) {
    let m = values.len();
    if m < 2 * BATCHES {
        return mean_stderr(values);
    }
    let mean = values.iter().sum::<f64>() / m as f64;
    let size = m / BATCHES;
    let batch_means: Vec<f64> = values
        .chunks_exact(size)
        .take(BATCHES)
        .map(|c| c.iter().sum::<f64>() / size as f64)
        .collect();
    let (_, se) = mean_stderr(&batch_means);
    let (_, naive) = mean_stderr(values);
    (mean, se.max(naive))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naive_error_of_constant_and_pair() {
        assert_eq!(mean_stderr(&[2.0, 2.0, 2.0]), (2.0, 0.0));
        let (m, se) = mean_stderr(&[0.0, 2.0]);
        assert_eq!(m, 1.0);
        assert!((se - 1.0).abs() < 1e-15);
    }

    #[test]
    fn batch_error_grows_with_correlation() {
        // Long runs of identical values: strongly autocorrelated.
        let v: Vec<f64> = (0..6400).map(|i| ((i / 200) % 2) as f64).collect();
        let (_, naive) = mean_stderr(&v);
        let (_, batch) = mean_batch_stderr(&v);
        assert!(batch > 5.0 * naive);
    }
}
