//! Semi-analytic fidelity law of an axially symmetric protocol.
//!
//! When every branch probability and fidelity depends on the input only
//! through `z = t₃`, the law of `F` is `Σ_j Σ_{z: F_j(z) = F} p_j(z)/(2|F_j'(z)|)`.
//! Roots are bracketed on a fixed grid and refined by bisection; derivatives
//! are central differences. Branches with constant fidelity become atoms.

use std::sync::Arc;

use crate::mathkit::{adaptive_quadrature, bisect, Vec3};
use crate::protocols::{fidelity, ProtocolEnsemble};
use crate::{Error, Result};

use super::pdf::{Atom, Density, FidelityPdf, Piece};

const GRID_CELLS: usize = 2048;
const ROOT_TOL: f64 = 1e-12;
const DIFF_STEP: f64 = 1e-6;
const AXIAL_TOL: f64 = 1e-10;
const CONSTANT_TOL: f64 = 1e-12;

fn axial_input(z: f64, phi: f64) -> Vec3 {
    let rho = (1.0 - z * z).max(0.0).sqrt();
    Vec3::new(rho * phi.cos(), rho * phi.sin(), z)
}

struct Axial<E> {
    ensemble: E,
    /// Branches that vary with `z`.
    active: Vec<usize>,
    grid: Vec<f64>,
    /// `fid[j][i]`: fidelity of branch `active[j]` at `grid[i]`.
    fid: Vec<Vec<f64>>,
}

impl<E: ProtocolEnsemble> Axial<E> {
    fn branch(&self, j: usize, z: f64) -> Result<(f64, f64)> {
        let t = axial_input(z.clamp(-1.0, 1.0), 0.0);
        let b = self.ensemble.branches(&t)?[j];
        Ok((b.prob, fidelity(&t, &b.out)))
    }

    fn fid(&self, j: usize, z: f64) -> f64 {
        self.branch(j, z).map(|b| b.1).unwrap_or(f64::NAN)
    }

    fn slope(&self, j: usize, z: f64) -> f64 {
        let lo = (z - DIFF_STEP).max(-1.0);
        let hi = (z + DIFF_STEP).min(1.0);
        (self.fid(j, hi) - self.fid(j, lo)) / (hi - lo)
    }

    fn density(&self, x: f64) -> f64 {
        let mut total = 0.0;
        for (row, &j) in self.fid.iter().zip(&self.active) {
            let n = self.grid.len();
            for i in 0..n {
                let g0 = row[i] - x;
                let root = if g0 == 0.0 {
                    Some(self.grid[i])
                } else if i + 1 < n
                    && (row[i + 1] - x) != 0.0
                    && (g0 < 0.0) != (row[i + 1] - x < 0.0)
                {
                    Some(bisect(
                        |z| self.fid(j, z) - x,
                        self.grid[i],
                        self.grid[i + 1],
                        ROOT_TOL,
                    ))
                } else {
                    None
                };
                if let Some(z) = root {
                    let p = self.branch(j, z).map(|b| b.0).unwrap_or(f64::NAN);
                    total += p / (2.0 * self.slope(j, z).abs());
                }
            }
        }
        total
    }
}

/// Fidelity law of an axially symmetric protocol by level-set integration.
/// Fails when a branch depends on the azimuth of the input.
pub fn pdf_levelset_axial<E>(ensemble: E) -> Result<FidelityPdf>
where
    E: ProtocolEnsemble + Send + 'static,
{
    check_axial(&ensemble)?;
    let grid: Vec<f64> = (0..=GRID_CELLS)
        .map(|i| -1.0 + 2.0 * i as f64 / GRID_CELLS as f64)
        .collect();
    let mut values = Vec::with_capacity(ensemble.branch_count());
    for &z in &grid {
        let t = axial_input(z, 0.0);
        let row: Vec<f64> = ensemble
            .branches(&t)?
            .iter()
            .map(|b| fidelity(&t, &b.out))
            .collect();
        values.push(row);
    }
    let mut atoms: Vec<Atom> = Vec::new();
    let mut active = Vec::new();
    let mut fid = Vec::new();
    for j in 0..ensemble.branch_count() {
        let row: Vec<f64> = values.iter().map(|r| r[j]).collect();
        let lo = row.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi - lo < CONSTANT_TOL {
            let mass = adaptive_quadrature(
                |z| {
                    0.5 * ensemble
                        .branches(&axial_input(z, 0.0))
                        .map(|b| b[j].prob)
                        .unwrap_or(f64::NAN)
                },
                -1.0,
                1.0,
                1e-12,
            )?;
            let location = 0.5 * (lo + hi);
            if mass > 0.0 {
                match atoms
                    .iter_mut()
                    .find(|a| (a.location - location).abs() < CONSTANT_TOL)
                {
                    Some(a) => a.mass += mass,
                    None => atoms.push(Atom { location, mass }),
                }
            }
        } else {
            active.push(j);
            fid.push(row);
        }
    }
    let axial = Arc::new(Axial {
        ensemble,
        active,
        grid,
        fid,
    });
    let mut pieces = Vec::new();
    if !axial.active.is_empty() {
        let mut breaks = Vec::new();
        for (row, &j) in axial.fid.iter().zip(&axial.active) {
            breaks.push(row[0]);
            breaks.push(row[row.len() - 1]);
            for i in 1..row.len() - 1 {
                let (a, b, c) = (row[i - 1], row[i], row[i + 1]);
                if (b - a) * (c - b) < 0.0 {
                    breaks.push(refine_extremum(
                        &axial,
                        j,
                        axial.grid[i - 1],
                        axial.grid[i + 1],
                        b > a,
                    ));
                }
            }
        }
        let lo = breaks.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = breaks.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let eval = Arc::clone(&axial);
        pieces.push(
            Piece::new(lo, hi, Density::Numeric(Arc::new(move |x| eval.density(x))))
                .with_breaks(breaks),
        );
    }
    Ok(FidelityPdf { atoms, pieces })
}

/// Golden-section search for the extreme fidelity of branch `j` in `[a, b]`.
fn refine_extremum<E: ProtocolEnsemble>(
    ax: &Axial<E>,
    j: usize,
    mut a: f64,
    mut b: f64,
    max: bool,
) -> f64 {
    let sgn = if max { -1.0 } else { 1.0 };
    let f = |z: f64| sgn * ax.fid(j, z);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    for _ in 0..80 {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - r * (b - a);
        d = a + r * (b - a);
    }
    ax.fid(j, 0.5 * (a + b))
}

fn check_axial<E: ProtocolEnsemble>(ensemble: &E) -> Result<()> {
    for z in [-0.9, -0.5, -0.1, 0.3, 0.7, 0.95] {
        let t0 = axial_input(z, 0.0);
        let base = ensemble.branches(&t0)?;
        for phi in [0.7, 1.9, 3.3, 5.1] {
            let t = axial_input(z, phi);
            for (b, b0) in ensemble.branches(&t)?.iter().zip(&base) {
                let df = (fidelity(&t, &b.out) - fidelity(&t0, &b0.out)).abs();
                let dp = (b.prob - b0.prob).abs();
                if df > AXIAL_TOL || dp > AXIAL_TOL {
                    return Err(Error::Invalid(format!(
                        "protocol is not axially symmetric (z = {z}, φ = {phi})"
                    )));
                }
            }
        }
    }
    Ok(())
}
