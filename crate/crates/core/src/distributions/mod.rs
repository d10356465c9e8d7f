//! Fidelity distributions: closed forms, level-set integration and sampling.

mod adc;
mod levelset;
mod montecarlo;
mod mp;
mod pdf;
mod quadratic;

pub use adc::{adc_mean, adc_support, pdf_adc, AdcModel};
pub use levelset::pdf_levelset_axial;
pub use montecarlo::{mc_sample, mc_sample_with, EmpiricalSample, MC_BATCH};
pub use mp::{mp_average, mp_interval_probability, pdf_mp};
pub use pdf::{cdf_distance, Atom, Cdf, Density, FidelityPdf, Piece, LAW_TOL};
pub use quadratic::{
    depolarizing_atom, pdf_bell_diagonal, pdf_depolarizing, pdf_phase_flip, pdf_quadratic_form,
    pdf_quadratic_form_with, pdf_unbiased_resource, EllipticBranch, EllipticConvention,
    PhaseFlipStats, EIGEN_MERGE_TOL, ELLIPTIC_CONVENTION,
};
