//! Laws of `F = (1 + tᵀ A t)/2` for a symmetric `A` with eigenvalues
//! `a₁ ≥ a₂ ≥ a₃` and `t` uniform on the sphere.
//!
//! With `y = 2F − 1`, the distinct-eigenvalue case splits at `y = a₂` into two
//! complete-elliptic pieces (log-singular at the split):
//!
//! * lower, `a₃ ≤ y ≤ a₂`: `2K(m)/(π√((a₂ − a₃)(a₁ − y)))`,
//!   `m = (a₁ − a₂)(y − a₃)/((a₂ − a₃)(a₁ − y))`;
//! * upper, `a₂ < y ≤ a₁`: `2K(m)/(π√((a₁ − a₂)(y − a₃)))`,
//!   `m = (a₂ − a₃)(a₁ − y)/((a₁ − a₂)(y − a₃))`.
//!
//! The upper form is the imaginary-modulus transform of the continuation of
//! the lower one, so both arguments stay in `[0, 1)`.

use crate::mathkit::{elliptic_k_or_inf, Vec3};
use crate::protocols::StdTeleport;
use crate::states::{self, apply_local_channels, Bell, TwoQubitFano};
use crate::{Error, Result};

use super::pdf::{Density, FidelityPdf, Piece};

/// Eigenvalues closer than this are merged.
pub const EIGEN_MERGE_TOL: f64 = 1e-12;

/// How the ratio in the elliptic pieces is fed to `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EllipticConvention {
    /// The ratio is the parameter `m = κ²`. Matches sampling.
    #[default]
    Parameter,
    /// The ratio is the modulus `κ`, i.e. `K` is evaluated at the squared ratio.
    /// Kept only to show that it does not reproduce sampled data.
    Modulus,
}

/// The convention used by every public constructor.
pub const ELLIPTIC_CONVENTION: EllipticConvention = EllipticConvention::Parameter;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllipticBranch {
    Lower,
    Upper,
}

pub(crate) fn elliptic_density(
    a: &[f64; 3],
    branch: EllipticBranch,
    convention: EllipticConvention,
    x: f64,
) -> f64 {
    let [a1, a2, a3] = *a;
    let y = 2.0 * x - 1.0;
    if y < a3 || y > a1 {
        return 0.0;
    }
    let (ratio, pre) = match branch {
        EllipticBranch::Lower => (
            (a1 - a2) * (y - a3) / ((a2 - a3) * (a1 - y)),
            (a2 - a3) * (a1 - y),
        ),
        EllipticBranch::Upper => (
            (a2 - a3) * (a1 - y) / ((a1 - a2) * (y - a3)),
            (a1 - a2) * (y - a3),
        ),
    };
    // Next to y = a₂ rounding can push the ratio to 1, where K diverges; the
    // true value is below 1 for every interior point.
    let ratio = ratio.clamp(0.0, 1.0 - f64::EPSILON);
    let m = match convention {
        EllipticConvention::Parameter => ratio,
        EllipticConvention::Modulus => ratio * ratio,
    };
    2.0 * elliptic_k_or_inf(m) / (std::f64::consts::PI * pre.sqrt())
}

/// Law of `(1 + tᵀ A t)/2` from the eigenvalues of `A` (any order, each in `[−1, 1]`).
pub fn pdf_quadratic_form(a: Vec3) -> Result<FidelityPdf> {
    pdf_quadratic_form_with(a, ELLIPTIC_CONVENTION)
}

/// As [`pdf_quadratic_form`] with an explicit elliptic convention.
pub fn pdf_quadratic_form_with(a: Vec3, convention: EllipticConvention) -> Result<FidelityPdf> {
    for v in a.iter() {
        if !(v.abs() <= 1.0 + EIGEN_MERGE_TOL) {
            return Err(Error::domain("eigenvalue", *v, "|a| <= 1"));
        }
    }
    let mut s = [a.x, a.y, a.z];
    s.sort_by(|x, y| y.total_cmp(x));
    let [a1, a2, a3] = s;
    let f = |y: f64| (1.0 + y) / 2.0;
    let top = a1 - a2 < EIGEN_MERGE_TOL;
    let bottom = a2 - a3 < EIGEN_MERGE_TOL;
    let pdf = match (top, bottom) {
        (true, true) => FidelityPdf::atom(f((a1 + a2 + a3) / 3.0)),
        (true, false) => single(
            f(a3),
            f(a1),
            Density::InvSqrt {
                gap: a1 - a3,
                edge: a1,
            },
        ),
        (false, true) => single(
            f(a3),
            f(a1),
            Density::InvSqrt {
                gap: a1 - a3,
                edge: a3,
            },
        ),
        (false, false) => {
            let a = [a1, a2, a3];
            FidelityPdf {
                atoms: Vec::new(),
                pieces: vec![
                    Piece::new(
                        f(a3),
                        f(a2),
                        Density::Elliptic {
                            a,
                            branch: EllipticBranch::Lower,
                            convention,
                        },
                    ),
                    Piece::new(
                        f(a2),
                        f(a1),
                        Density::Elliptic {
                            a,
                            branch: EllipticBranch::Upper,
                            convention,
                        },
                    ),
                ],
            }
        }
    };
    Ok(pdf)
}

fn single(lo: f64, hi: f64, density: Density) -> FidelityPdf {
    FidelityPdf {
        atoms: Vec::new(),
        pieces: vec![Piece::new(lo, hi, density)],
    }
}

/// Fidelity law of standard teleportation over a Bell-diagonal resource
/// `diag(w1, w2, w3)`.
pub fn pdf_bell_diagonal(w1: f64, w2: f64, w3: f64) -> Result<FidelityPdf> {
    if !states::is_physical_bell_diagonal(w1, w2, w3) {
        return Err(Error::Invalid(format!(
            "diag({w1}, {w2}, {w3}) is not a physical Bell-diagonal state"
        )));
    }
    let proto = StdTeleport::new(states::bell_diagonal(w1, w2, w3));
    pdf_quadratic_form(proto.corrections().effective_eigenvalues())
}

/// Fidelity law for a resource with vanishing local Bloch vectors, where each
/// branch outputs `effective·t`.
pub fn pdf_unbiased_resource(resource: &TwoQubitFano) -> Result<FidelityPdf> {
    if resource.r_a.norm() > EIGEN_MERGE_TOL || resource.r_b.norm() > EIGEN_MERGE_TOL {
        return Err(Error::Invalid(
            "resource has non-zero local Bloch vectors".into(),
        ));
    }
    let proto = StdTeleport::new(*resource);
    pdf_quadratic_form(proto.corrections().effective_eigenvalues())
}

/// Phase flips `p_A`, `p_B` on the two halves of `|Φ₁⟩`.
pub fn pdf_phase_flip(pa: f64, pb: f64) -> Result<FidelityPdf> {
    let resource = apply_local_channels(
        &states::phase_flip(pa)?,
        &states::phase_flip(pb)?,
        Bell::Phi1,
    );
    pdf_unbiased_resource(&resource)
}

/// Depolarizing noise `p_A`, `p_B` on the two halves of `|Φ₁⟩`: a single atom at
/// `(1 + (1 − p_A)(1 − p_B))/2`.
///
/// The expression `(2 − p_A p_B)/2` that is sometimes quoted for this atom
/// disagrees with sampling of the protocol; it is not used.
pub fn pdf_depolarizing(pa: f64, pb: f64) -> Result<FidelityPdf> {
    let resource = apply_local_channels(
        &states::depolarizing(pa)?,
        &states::depolarizing(pb)?,
        Bell::Phi1,
    );
    pdf_unbiased_resource(&resource)
}

/// Location of the depolarizing atom.
pub fn depolarizing_atom(pa: f64, pb: f64) -> f64 {
    0.5 * (1.0 + (1.0 - pa) * (1.0 - pb))
}

/// Closed-form statistics of the phase-flip law in terms of `c = 1 − (1 − p_A)(1 − p_B)`,
/// density `1/√(c(2F − 2 + c))` on `[1 − c/2, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseFlipStats {
    pub c: f64,
}

impl PhaseFlipStats {
    pub fn new(c: f64) -> Result<Self> {
        if !(c > 0.0 && c <= 2.0) {
            return Err(Error::domain("c", c, "0 < c <= 2"));
        }
        Ok(PhaseFlipStats { c })
    }

    pub fn from_probabilities(pa: f64, pb: f64) -> Result<Self> {
        Self::new(1.0 - (1.0 - pa) * (1.0 - pb))
    }

    pub fn support(&self) -> (f64, f64) {
        (1.0 - self.c / 2.0, 1.0)
    }

    pub fn density(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return 0.0;
        }
        1.0 / (2.0 * self.c * (x - lo)).sqrt()
    }

    pub fn mean(&self) -> f64 {
        1.0 - self.c / 3.0
    }

    pub fn variance(&self) -> f64 {
        self.c * self.c / 45.0
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        let x = x.clamp(lo, hi);
        (2.0 * (x - lo) / self.c).sqrt()
    }

    /// `P(a ≤ F ≤ b)`.
    pub fn interval(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        self.cdf(b) - self.cdf(a)
    }
}
