//! Teleportation through `|Φ₁⟩` with amplitude damping `p_A`, `p_B` on the two
//! halves.
//!
//! With `z = t₃` and `s = (−1)^k` for Alice's outcome class `k`, every branch
//! of the class has `2F − 1 = O_k(z)`,
//!
//! `O_k(z) = (s p_B z + g z² + c)/(1 + s p_A z)`,
//! `c = √((1 − p_A)(1 − p_B))`, `g = 1 − p_A − p_B + 2p_A p_B − c`,
//!
//! and the class has total probability `(1 + s p_A z)/2`. Since
//! `O₁(z) = O₀(−z)`, both classes cover the same range. Solving `O_k(z) = y`
//! is the quadratic `Q(z) = g z² + s(p_B − y p_A) z + (c − y) = 0`, and each root
//! in `[−1, 1]` contributes `(1 + s p_A z)²/(2|Q'(z)|)` to the density in `F`.

use crate::mathkit::{integrate, solve_quadratic};
use crate::{Error, Result};

use super::pdf::{Density, FidelityPdf, Piece};

/// Tolerance for roots that land marginally outside `[−1, 1]`.
const EDGE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdcModel {
    pa: f64,
    pb: f64,
    c: f64,
    g: f64,
}

fn sign(k: u8) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

impl AdcModel {
    pub fn new(pa: f64, pb: f64) -> Result<Self> {
        for (name, p) in [("p_A", pa), ("p_B", pb)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::domain(name, p, "0 <= p <= 1"));
            }
        }
        let c = ((1.0 - pa) * (1.0 - pb)).sqrt();
        let g = 1.0 - pa - pb + 2.0 * pa * pb - c;
        Ok(AdcModel { pa, pb, c, g })
    }

    pub fn pa(&self) -> f64 {
        self.pa
    }

    pub fn pb(&self) -> f64 {
        self.pb
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// `O_k(z)`, continued through the removable point `1 + s p_A z = 0`.
    pub fn o(&self, k: u8, z: f64) -> f64 {
        let s = sign(k);
        let den = 1.0 + s * self.pa * z;
        if den.abs() < 1e-12 {
            return (s * self.pb + 2.0 * self.g * z) / (s * self.pa);
        }
        (s * self.pb * z + self.g * z * z + self.c) / den
    }

    /// Stationary points of `O_k` strictly inside `(−1, 1)`, from
    /// `g s p_A z² + 2g z + s(p_B − c p_A) = 0`.
    pub fn critical_points(&self, k: u8) -> Vec<f64> {
        let s = sign(k);
        match solve_quadratic(
            self.g * s * self.pa,
            2.0 * self.g,
            s * (self.pb - self.c * self.pa),
        ) {
            Ok(roots) => roots
                .iter()
                .filter(|z| z.abs() < 1.0 && (1.0 + s * self.pa * z).abs() > 1e-12)
                .collect(),
            Err(_) => Vec::new(),
        }
    }

    /// `true` when `O_k` does not depend on `z` (e.g. `p_A = p_B = 0`).
    pub fn is_constant(&self) -> bool {
        let probe = [-1.0, -0.5, 0.0, 0.5, 1.0];
        let vals: Vec<f64> = probe.iter().map(|&z| self.o(0, z)).collect();
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        hi - lo < 1e-14
    }

    /// Fidelities where the density of class `k` has a kink or singularity:
    /// images of `z = ±1` and of the stationary points. Sorted.
    pub fn breakpoints(&self, k: u8) -> Vec<f64> {
        let mut ys = vec![self.o(k, -1.0), self.o(k, 1.0)];
        ys.extend(self.critical_points(k).into_iter().map(|z| self.o(k, z)));
        let mut fs: Vec<f64> = ys
            .into_iter()
            .map(|y| ((1.0 + y) / 2.0).clamp(0.0, 1.0))
            .collect();
        fs.sort_by(f64::total_cmp);
        fs.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        fs
    }

    /// `(F_min, F_max)` for class `k`.
    pub fn support(&self, k: u8) -> (f64, f64) {
        let b = self.breakpoints(k);
        (b[0], b[b.len() - 1])
    }

    /// Fidelities of stationary points: the density diverges there.
    pub fn singular_points(&self) -> Vec<f64> {
        let mut out: Vec<f64> = (0..2u8)
            .flat_map(|k| self.critical_points(k).into_iter().map(move |z| (k, z)))
            .map(|(k, z)| (1.0 + self.o(k, z)) / 2.0)
            .collect();
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        out
    }

    /// Density of `F` summed over both outcome classes.
    pub fn density(&self, x: f64) -> f64 {
        let y = 2.0 * x - 1.0;
        let mut total = 0.0;
        for k in 0..2u8 {
            let s = sign(k);
            let lin = s * (self.pb - y * self.pa);
            let Ok(roots) = solve_quadratic(self.g, lin, self.c - y) else {
                continue;
            };
            for z in roots.iter() {
                if z.abs() > 1.0 + EDGE_SLACK {
                    continue;
                }
                let d = 1.0 + s * self.pa * z;
                if d == 0.0 {
                    // Removable point: the contribution vanishes with D².
                    continue;
                }
                let dq = 2.0 * self.g * z + lin;
                total += d * d / (2.0 * dq.abs());
            }
        }
        total
    }

    /// `E[w(F)] = Σ_k ∫ w((1 + O_k(z))/2)(1 + s p_A z)/4 dz` over `z ∈ [−1, 1]`.
    ///
    /// Integrating over the input instead of over `F` avoids the inverse
    /// square-root peaks at stationary values, where the double root of `Q` is
    /// ill-conditioned. The `z` range is split wherever `F` crosses one of
    /// `breaks`, so step-like weights stay piecewise smooth.
    pub fn expectation<W: Fn(f64) -> f64>(&self, w: &W, breaks: &[f64], tol: f64) -> Result<f64> {
        let mut total = 0.0;
        for k in 0..2u8 {
            let s = sign(k);
            let mut zs = vec![-1.0, 1.0];
            zs.extend(self.critical_points(k));
            for &b in breaks {
                let y = 2.0 * b - 1.0;
                if let Ok(roots) = solve_quadratic(self.g, s * (self.pb - y * self.pa), self.c - y)
                {
                    zs.extend(roots.iter().filter(|z| z.abs() < 1.0));
                }
            }
            zs.sort_by(f64::total_cmp);
            zs.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
            let share = tol / (2 * (zs.len() - 1)) as f64;
            for seg in zs.windows(2) {
                let f = |z: f64| {
                    let x = ((1.0 + self.o(k, z)) / 2.0).clamp(0.0, 1.0);
                    0.25 * (1.0 + s * self.pa * z) * w(x)
                };
                total += integrate(f, seg[0], seg[1], share)?.value;
            }
        }
        Ok(total)
    }

    /// Closed-form mean `(1 + (2c + c² + p_A p_B)/3)/2`.
    pub fn mean(&self) -> f64 {
        0.5 * (1.0 + (2.0 * self.c + self.c * self.c + self.pa * self.pb) / 3.0)
    }
}

/// `(F_min, F_max)` of outcome class `k ∈ {0, 1}`.
pub fn adc_support(pa: f64, pb: f64, k: u8) -> Result<(f64, f64)> {
    if k > 1 {
        return Err(Error::domain("k", k as f64, "k in {0, 1}"));
    }
    Ok(AdcModel::new(pa, pb)?.support(k))
}

/// Closed-form mean fidelity under amplitude damping.
pub fn adc_mean(pa: f64, pb: f64) -> Result<f64> {
    Ok(AdcModel::new(pa, pb)?.mean())
}

/// Fidelity law under amplitude damping `p_A`, `p_B`.
pub fn pdf_adc(pa: f64, pb: f64) -> Result<FidelityPdf> {
    let model = AdcModel::new(pa, pb)?;
    if model.is_constant() {
        return Ok(FidelityPdf::atom((1.0 + model.o(0, 0.0)) / 2.0));
    }
    let mut breaks = model.breakpoints(0);
    breaks.extend(model.breakpoints(1));
    let lo = breaks.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = breaks.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(FidelityPdf {
        atoms: Vec::new(),
        pieces: vec![Piece::new(lo, hi, Density::AmplitudeDamping(model)).with_breaks(breaks)],
    })
}
