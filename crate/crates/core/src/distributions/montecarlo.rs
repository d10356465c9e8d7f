//! Monte-Carlo sampling of the fidelity law.
//!
//! Draws are split into fixed-size batches; batch `b` uses ChaCha stream `b`
//! of the seed, so the sample is the same for every thread count.

use rand::Rng;
use serde::Serialize;

use crate::exec::Execution;
use crate::mathkit::{sample_unit_sphere, stream_rng};
use crate::protocols::{fidelity, ProtocolEnsemble};
use crate::{Error, Result};

/// Draws per RNG stream.
pub const MC_BATCH: usize = 16_384;

/// Fidelities of independent protocol runs, in draw order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalSample {
    pub seed: u64,
    pub n: usize,
    pub values: Vec<f64>,
}

impl EmpiricalSample {
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.n as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (self.n as f64 - 1.0)
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        (self.variance() / self.n as f64).sqrt()
    }

    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Fraction of draws inside `[a, b]`.
    pub fn fraction_in(&self, a: f64, b: f64) -> f64 {
        self.values.iter().filter(|v| (a..=b).contains(*v)).count() as f64 / self.n as f64
    }
}

/// `n` protocol runs on uniformly random pure inputs.
pub fn mc_sample<E: ProtocolEnsemble + ?Sized>(
    ensemble: &E,
    n: usize,
    seed: u64,
) -> Result<EmpiricalSample> {
    mc_sample_with(ensemble, n, seed, Execution::default())
}

/// As [`mc_sample`] with an explicit execution policy.
pub fn mc_sample_with<E: ProtocolEnsemble + ?Sized>(
    ensemble: &E,
    n: usize,
    seed: u64,
    exec: Execution,
) -> Result<EmpiricalSample> {
    if n == 0 {
        return Err(Error::Invalid("sample size must be positive".into()));
    }
    let batches = n.div_ceil(MC_BATCH);
    let chunks = exec.map_indexed(batches, |b| {
        let len = MC_BATCH.min(n - b * MC_BATCH);
        let mut rng = stream_rng(seed, b as u64);
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let t = sample_unit_sphere(&mut rng);
            let branches = ensemble.branches(&t)?;
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut pick = branches.len() - 1;
            for (j, br) in branches.iter().enumerate() {
                acc += br.prob;
                if u < acc {
                    pick = j;
                    break;
                }
            }
            out.push(fidelity(&t, &branches[pick].out));
        }
        Ok::<_, Error>(out)
    });
    let mut values = Vec::with_capacity(n);
    for chunk in chunks {
        values.extend(chunk?);
    }
    Ok(EmpiricalSample { seed, n, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::{MeasurePrepare, StdTeleport};

    #[test]
    fn policies_agree_bitwise() {
        let p = MeasurePrepare::canonical_optimal();
        let a = mc_sample_with(&p, 40_000, 7, Execution::Parallel).unwrap();
        let b = mc_sample_with(&p, 40_000, 7, Execution::Sequential).unwrap();
        assert_eq!(a, b);
        let c = mc_sample_with(&p, 40_000, 8, Execution::Sequential).unwrap();
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn ideal_teleportation_is_perfect() {
        let s = mc_sample(&StdTeleport::ideal(), 1000, 1).unwrap();
        assert!(s.values.iter().all(|f| (f - 1.0).abs() < 1e-12));
    }

    #[test]
    fn classical_mean() {
        let s = mc_sample(&MeasurePrepare::canonical_optimal(), 200_000, 3).unwrap();
        assert!((s.mean() - 2.0 / 3.0).abs() < 4.0 * s.std_error());
        assert!(mc_sample(&StdTeleport::ideal(), 0, 1).is_err());
    }
}
