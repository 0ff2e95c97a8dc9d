//! Small statistics helpers.

use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance with the `n - 1` denominator.
pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Mean of a correlated series with a standard error from `batches`
/// contiguous batch means. Leftover samples join the last batch.
pub fn batch_means(xs: &[f64], batches: usize) -> MeanEstimate {
    let n = xs.len();
    let m = mean(xs);
    let b = batches.min(n);
    if b < 2 {
        return MeanEstimate { mean: m, std_error: 0.0 };
    }
    let size = n / b;
    let means: Vec<f64> = (0..b)
        .map(|k| {
            let hi = if k + 1 == b { n } else { (k + 1) * size };
            mean(&xs[k * size..hi])
        })
        .collect();
    MeanEstimate { mean: m, std_error: (variance(&means) / b as f64).sqrt() }
}

/// Kolmogorov–Smirnov distance of a sample from the uniform law on `[lo, hi)`.
pub fn ks_uniform(sample: &[f64], lo: f64, hi: f64) -> f64 {
    let mut u: Vec<f64> = sample.iter().map(|x| (x - lo) / (hi - lo)).collect();
    u.sort_by(f64::total_cmp);
    let n = u.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in u.iter().enumerate() {
        d = d.max((i as f64 + 1.0) / n - x).max(x - i as f64 / n);
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batch_means_of_constant() {
        let xs = alloc::vec![2.0; 1000];
        let e = batch_means(&xs, 20);
        assert_eq!(e.mean, 2.0);
        assert_eq!(e.std_error, 0.0);
    }

    #[test]
    fn batch_means_iid() {
        // alternating ±1 has batch means exactly zero
        let xs: Vec<f64> = (0..1000).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let e = batch_means(&xs, 10);
        assert!(e.mean.abs() < 1e-15 && e.std_error < 1e-15);
    }

    #[test]
    fn ks_of_grid() {
        let xs: Vec<f64> = (0..100).map(|k| (k as f64 + 0.5) / 100.0).collect();
        assert!((ks_uniform(&xs, 0.0, 1.0) - 0.005).abs() < 1e-12);
    }
}
