//! Certification sweeps over the Bell-diagonal tetrahedron and the
//! amplitude-damping grid.

use rand::Rng;
use serde::Serialize;

use crate::distributions::{adc_mean, pdf_adc, pdf_bell_diagonal, FidelityPdf};
use crate::exec::Execution;
use crate::mathkit::{stream_rng, Mat3, Vec3};
use crate::states::{
    amplitude_damping, apply_local_channels, is_physical_bell_diagonal, is_separable_bell_diagonal,
    is_separable_ppt, violates_chsh, Bell,
};
use crate::Result;

use super::gamma::{certify, Certification};
use super::prior::ImportancePrior;

/// Resource parameters of one sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SweepPoint {
    BellDiagonal { w1: f64, w2: f64, w3: f64 },
    AmplitudeDamping { pa: f64, pb: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriorOutcome {
    pub prior: String,
    #[serde(flatten)]
    pub result: Certification,
}

/// Everything computed for one resource.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertRecord {
    pub point: SweepPoint,
    pub physical: bool,
    pub separable: bool,
    pub chsh_violating: bool,
    pub mean_fidelity: f64,
    /// One entry per prior, in the order given.
    pub outcomes: Vec<PriorOutcome>,
}

impl CertRecord {
    pub fn certified(&self, prior: usize) -> bool {
        self.outcomes[prior].result.certified
    }

    pub fn gamma(&self, prior: usize) -> f64 {
        self.outcomes[prior].result.gamma
    }
}

fn outcomes(pdf: &FidelityPdf, priors: &[ImportancePrior]) -> Result<Vec<PriorOutcome>> {
    priors
        .iter()
        .map(|p| {
            Ok(PriorOutcome {
                prior: p.label(),
                result: certify(pdf, p)?,
            })
        })
        .collect()
}

/// Certification record of the Bell-diagonal resource `diag(w1, w2, w3)`.
pub fn bell_diagonal_record(w: Vec3, priors: &[ImportancePrior]) -> Result<CertRecord> {
    let pdf = pdf_bell_diagonal(w.x, w.y, w.z)?;
    Ok(CertRecord {
        point: SweepPoint::BellDiagonal {
            w1: w.x,
            w2: w.y,
            w3: w.z,
        },
        physical: is_physical_bell_diagonal(w.x, w.y, w.z),
        separable: is_separable_bell_diagonal(w.x, w.y, w.z)?,
        chsh_violating: violates_chsh(&Mat3::from_diagonal(&w)),
        mean_fidelity: pdf.mean()?,
        outcomes: outcomes(&pdf, priors)?,
    })
}

/// Certification record of `|Φ₁⟩` with amplitude damping on both halves.
pub fn adc_record(pa: f64, pb: f64, priors: &[ImportancePrior]) -> Result<CertRecord> {
    let pdf = pdf_adc(pa, pb)?;
    let resource =
        apply_local_channels(&amplitude_damping(pa)?, &amplitude_damping(pb)?, Bell::Phi1);
    Ok(CertRecord {
        point: SweepPoint::AmplitudeDamping { pa, pb },
        physical: true,
        separable: is_separable_ppt(&resource),
        chsh_violating: violates_chsh(&resource.w),
        mean_fidelity: adc_mean(pa, pb)?,
        outcomes: outcomes(&pdf, priors)?,
    })
}

/// Draws Bell weights from the flat Dirichlet law on the simplex, one stream
/// per call, and maps them to correlation diagonals.
fn dirichlet_points(n: usize, seed: u64, map: impl Fn([f64; 4]) -> [f64; 4]) -> Vec<Vec3> {
    let mut rng = stream_rng(seed, 0);
    (0..n)
        .map(|_| {
            let mut e = [0.0; 4];
            for x in e.iter_mut() {
                // 1 − U lies in (0, 1], so the logarithm is finite.
                *x = -(1.0 - rng.random::<f64>()).ln();
            }
            let total: f64 = e.iter().sum();
            let lambda = map(e.map(|x| x / total));
            Bell::ALL
                .iter()
                .zip(lambda)
                .map(|(k, l)| k.diagonal() * l)
                .sum()
        })
        .collect()
}

/// `n` points uniform in the Bell-diagonal tetrahedron.
pub fn tetrahedron_points(n: usize, seed: u64) -> Vec<Vec3> {
    dirichlet_points(n, seed, |l| l)
}

/// `n` points uniform in the corner `λ_vertex ≥ 1/2` of the tetrahedron.
pub fn vertex_region_points(n: usize, seed: u64, vertex: Bell) -> Vec<Vec3> {
    dirichlet_points(n, seed, |l| {
        let mut out = l.map(|x| 0.5 * x);
        out[vertex as usize] += 0.5;
        out
    })
}

/// Certification over `n` uniform Bell-diagonal resources.
pub fn sweep_tetrahedron(
    n: usize,
    seed: u64,
    priors: &[ImportancePrior],
    exec: Execution,
) -> Result<Vec<CertRecord>> {
    sweep_points(&tetrahedron_points(n, seed), priors, exec)
}

/// Certification over the given Bell-diagonal points.
pub fn sweep_points(
    points: &[Vec3],
    priors: &[ImportancePrior],
    exec: Execution,
) -> Result<Vec<CertRecord>> {
    exec.map_slice(points, |w| bell_diagonal_record(*w, priors))
        .into_iter()
        .collect()
}

/// `n × n` grid on `[0, 1]²`, ordered with `p_A` outer and `p_B` inner.
pub fn adc_grid(n: usize) -> Vec<(f64, f64)> {
    let step = |i: usize| {
        if n == 1 {
            0.0
        } else {
            i as f64 / (n - 1) as f64
        }
    };
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (step(i), step(j))))
        .collect()
}

/// Certification over the amplitude-damping points `(p_A, p_B)`.
pub fn sweep_adc_grid(
    points: &[(f64, f64)],
    priors: &[ImportancePrior],
    exec: Execution,
) -> Result<Vec<CertRecord>> {
    exec.map_slice(points, |&(pa, pb)| adc_record(pa, pb, priors))
        .into_iter()
        .collect()
}

/// `true` if some step goes from not certified to certified.
pub fn has_reentry(certified: &[bool]) -> bool {
    certified.windows(2).any(|w| !w[0] && w[1])
}

/// Grid lines of an `n × n` ADC sweep along which `γ` rises from `≤ 0` to `> 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reentry {
    /// `p_A` of rows (fixed `p_A`, increasing `p_B`) that enter the certified set.
    pub rows: Vec<f64>,
    /// `p_B` of columns (fixed `p_B`, increasing `p_A`) that enter the certified set.
    pub columns: Vec<f64>,
}

/// Scans rows and columns of an [`adc_grid`] sweep for re-entry under prior `prior`.
pub fn adc_reentry(records: &[CertRecord], n: usize, prior: usize) -> Reentry {
    let at = |i: usize, j: usize| records[i * n + j].certified(prior);
    let coord = |i: usize| {
        if n == 1 {
            0.0
        } else {
            i as f64 / (n - 1) as f64
        }
    };
    let rows = (0..n)
        .filter(|&i| has_reentry(&(0..n).map(|j| at(i, j)).collect::<Vec<_>>()))
        .map(coord)
        .collect();
    let columns = (0..n)
        .filter(|&j| has_reentry(&(0..n).map(|i| at(i, j)).collect::<Vec<_>>()))
        .map(coord)
        .collect();
    Reentry { rows, columns }
}
