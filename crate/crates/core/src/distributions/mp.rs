//! Measure-and-prepare fidelity laws.
//!
//! For an element with weight `c²`, direction `s` and prepared state `r`, the
//! projection `v = t·r̂` of a uniform input is uniform on `[−1, 1]` and
//! `E[t | v] = v r̂`, so the branch contributes the linear density
//! `c²(1 + v s·r̂)/(2|r|)` with `v = (2F − 1)/|r|` on `[(1 − |r|)/2, (1 + |r|)/2]`.

use crate::protocols::{MeasurePrepare, PovmElement};
use crate::{Error, Result};

use super::pdf::{Atom, Density, FidelityPdf, Piece};

/// Below this prepared-state length the branch is treated as an atom at `F = 1/2`.
const POINT_STATE: f64 = 1e-12;

fn element_piece(e: &PovmElement) -> std::result::Result<Piece, Atom> {
    let len = e.r.norm();
    if len < POINT_STATE {
        return Err(Atom {
            location: 0.5,
            mass: e.c2 / 2.0,
        });
    }
    let cos = e.s.dot(&e.r) / len;
    let slope = e.c2 * cos / (len * len);
    let intercept = e.c2 / (2.0 * len) - e.c2 * cos / (2.0 * len * len);
    Ok(Piece::new(
        (1.0 - len) / 2.0,
        (1.0 + len) / 2.0,
        Density::Linear { intercept, slope },
    ))
}

/// Fidelity law of a measure-and-prepare protocol: a sum of linear pieces plus
/// atoms at `1/2` for elements that prepare the maximally mixed state.
pub fn pdf_mp(povm: &MeasurePrepare) -> FidelityPdf {
    let mut pdf = FidelityPdf::default();
    for e in povm.elements() {
        match element_piece(e) {
            Ok(piece) => pdf.pieces.push(piece),
            Err(atom) => {
                if let Some(a) = pdf.atoms.iter_mut().find(|a| a.location == atom.location) {
                    a.mass += atom.mass;
                } else {
                    pdf.atoms.push(atom);
                }
            }
        }
    }
    pdf
}

/// `P(a ≤ F ≤ b)` in closed form.
pub fn mp_interval_probability(povm: &MeasurePrepare, a: f64, b: f64) -> Result<f64> {
    if !(0.0 <= a && a <= b && b <= 1.0) {
        return Err(Error::Invalid(format!(
            "need 0 <= fa <= fb <= 1, got [{a}, {b}]"
        )));
    }
    let mut total = 0.0;
    for e in povm.elements() {
        match element_piece(e) {
            Ok(piece) => {
                let lo = a.max(piece.lo);
                let hi = b.min(piece.hi);
                if hi > lo {
                    if let Density::Linear { intercept, slope } = piece.density {
                        total += intercept * (hi - lo) + 0.5 * slope * (hi * hi - lo * lo);
                    }
                }
            }
            Err(atom) => {
                if (a..=b).contains(&atom.location) {
                    total += atom.mass;
                }
            }
        }
    }
    Ok(total)
}

/// Average fidelity `Σ (c²/4)(1 + s·r/3)`.
pub fn mp_average(povm: &MeasurePrepare) -> f64 {
    povm.elements()
        .iter()
        .map(|e| 0.25 * e.c2 * (1.0 + e.s.dot(&e.r) / 3.0))
        .sum()
}
