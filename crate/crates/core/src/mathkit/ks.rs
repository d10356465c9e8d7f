use crate::{Error, Result};

/// One-sample Kolmogorov–Smirnov statistic `sup |F_n − F|` for ascending
/// `samples` against a continuous `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Invalid("empty sample".into()));
    }
    debug_assert!(
        samples.windows(2).all(|w| w[0] <= w[1]),
        "samples must be sorted"
    );
    let n = samples.len() as f64;
    let mut d = 0.0_f64;
    for (i, &x) in samples.iter().enumerate() {
        let c = cdf(x);
        let above = (i + 1) as f64 / n - c;
        let below = c - i as f64 / n;
        d = d.max(above).max(below);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathkit::stream_rng;
    use rand::Rng;

    #[test]
    fn quantile_samples_are_close() {
        let n = 999;
        let xs: Vec<f64> = (1..=n).map(|i| i as f64 / (n + 1) as f64).collect();
        let d = ks_statistic(&xs, |x| x).unwrap();
        assert!(d <= 1.0 / (n + 1) as f64 + 1e-12, "{d}");
    }

    fn linear_density_draws(n: usize) -> Vec<f64> {
        // Inverse-CDF sampling of pdf 2F: F = √U.
        let mut rng = stream_rng(11, 0);
        let mut xs: Vec<f64> = (0..n).map(|_| rng.random::<f64>().sqrt()).collect();
        xs.sort_by(f64::total_cmp);
        xs
    }

    #[test]
    fn detects_right_and_wrong_law() {
        let xs = linear_density_draws(1_000_000);
        assert!(ks_statistic(&xs, |x| x * x).unwrap() < 0.005);
        assert!(ks_statistic(&xs, |x| x).unwrap() > 0.2);
    }

    #[test]
    fn empty_sample_is_rejected() {
        assert!(ks_statistic(&[], |x| x).is_err());
    }
}
