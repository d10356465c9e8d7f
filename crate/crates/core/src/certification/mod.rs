//! Importance-weighted certification of resources against the best
//! measure-and-prepare strategy.

mod gamma;
mod prior;
mod sweep;

pub use gamma::{certify, gamma, Certification, CERT_THRESHOLD, NEAR_BOUNDARY};
pub use prior::{ImportancePrior, PriorShape};
pub use sweep::{
    adc_grid, adc_record, adc_reentry, bell_diagonal_record, has_reentry, sweep_adc_grid,
    sweep_points, sweep_tetrahedron, tetrahedron_points, vertex_region_points, CertRecord,
    PriorOutcome, Reentry, SweepPoint,
};
