use serde::Serialize;

use crate::distributions::{FidelityPdf, LAW_TOL};
use crate::Result;

use super::prior::ImportancePrior;

/// `γ` must exceed this for a resource to count as certified.
pub const CERT_THRESHOLD: f64 = 1e-12;
/// `|γ|` below this is reported as too close to call.
pub const NEAR_BOUNDARY: f64 = 1e-9;

/// `γ = ∫ W f_res − ∫ W·2F`: the prior-weighted advantage over the best
/// measure-and-prepare protocol.
pub fn gamma(pdf: &FidelityPdf, prior: &ImportancePrior) -> Result<f64> {
    let weighted = pdf.integrate_weighted(|x| prior.eval_unchecked(x), &prior.knots(), LAW_TOL)?;
    Ok(weighted - prior.baseline())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certification {
    pub gamma: f64,
    pub certified: bool,
    pub near_boundary: bool,
}

impl Certification {
    pub fn from_gamma(gamma: f64) -> Self {
        Certification {
            gamma,
            certified: gamma > CERT_THRESHOLD,
            near_boundary: gamma.abs() < NEAR_BOUNDARY,
        }
    }
}

pub fn certify(pdf: &FidelityPdf, prior: &ImportancePrior) -> Result<Certification> {
    gamma(pdf, prior).map(Certification::from_gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{pdf_bell_diagonal, pdf_mp};
    use crate::protocols::MeasurePrepare;

    #[test]
    fn classical_protocol_has_zero_gamma() {
        let pdf = pdf_mp(&MeasurePrepare::canonical_optimal());
        for prior in [
            ImportancePrior::beta(2.0, 1.0).unwrap(),
            ImportancePrior::beta(5.0, 2.0).unwrap(),
            ImportancePrior::step(0.6).unwrap(),
        ] {
            let g = gamma(&pdf, &prior).unwrap();
            assert!(g.abs() < 1e-10, "{} {g}", prior.label());
            assert!(!certify(&pdf, &prior).unwrap().certified);
        }
    }

    #[test]
    fn beta_two_matches_mean_criterion() {
        // With W = 2F, γ = 2(E[F] − 2/3).
        let prior = ImportancePrior::beta(2.0, 1.0).unwrap();
        for w in [(0.5, -0.3, 0.2), (0.2, -0.2, 0.2), (0.9, -0.8, 0.7)] {
            let pdf = pdf_bell_diagonal(w.0, w.1, w.2).unwrap();
            let g = gamma(&pdf, &prior).unwrap();
            let mean = pdf.mean().unwrap();
            assert!((g - 2.0 * (mean - 2.0 / 3.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn infinite_weight_on_atom_is_an_error() {
        let pdf = FidelityPdf::atom(1.0);
        let prior = ImportancePrior::beta(2.0, 0.5).unwrap();
        assert!(gamma(&pdf, &prior).is_err());
    }
}
