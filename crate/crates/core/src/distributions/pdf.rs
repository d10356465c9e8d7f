use std::fmt;
use std::sync::Arc;

use crate::mathkit::{gauss_kronrod_15, integrate, EndpointMap};
use crate::{Error, Result};

use super::adc::AdcModel;
use super::quadratic::{EllipticBranch, EllipticConvention};

/// Absolute tolerance for integrals of a law (mass, moments, weighted
/// expectations). Log and inverse-square-root singularities sit at rounded
/// locations, which caps the attainable accuracy near 1e-11.
pub const LAW_TOL: f64 = 1e-10;

/// A point mass of the fidelity law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

/// Closed-form (or semi-analytic) density of one absolutely continuous piece.
#[derive(Clone)]
pub enum Density {
    /// `intercept + slope·F`.
    Linear { intercept: f64, slope: f64 },
    /// `1/√(gap·|2F − 1 − edge|)`: a quadratic form with a repeated eigenvalue.
    InvSqrt { gap: f64, edge: f64 },
    /// One of the two complete-elliptic pieces of a quadratic form with distinct
    /// eigenvalues `a₁ > a₂ > a₃`.
    Elliptic {
        a: [f64; 3],
        branch: EllipticBranch,
        convention: EllipticConvention,
    },
    /// Teleportation through a Bell pair with local amplitude damping. The piece
    /// holding it spans the whole law, so weighted integrals are taken over the
    /// input coordinate instead (see [`AdcModel::expectation`]).
    AmplitudeDamping(AdcModel),
    /// Any other evaluator (level-set oracle, tests).
    Numeric(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Linear { intercept, slope } => {
                write!(f, "Linear({intercept} + {slope}·F)")
            }
            Density::InvSqrt { gap, edge } => write!(f, "InvSqrt(gap {gap}, edge {edge})"),
            Density::Elliptic {
                a,
                branch,
                convention,
            } => {
                write!(f, "Elliptic({a:?}, {branch:?}, {convention:?})")
            }
            Density::AmplitudeDamping(m) => write!(f, "AmplitudeDamping({}, {})", m.pa(), m.pb()),
            Density::Numeric(_) => write!(f, "Numeric(..)"),
        }
    }
}

impl Density {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Density::Linear { intercept, slope } => intercept + slope * x,
            Density::InvSqrt { gap, edge } => 1.0 / (gap * (2.0 * x - 1.0 - edge).abs()).sqrt(),
            Density::Elliptic {
                a,
                branch,
                convention,
            } => super::quadratic::elliptic_density(a, *branch, *convention, x),
            Density::AmplitudeDamping(m) => m.density(x),
            Density::Numeric(f) => f(x),
        }
    }

    /// Short identifier used in exports.
    pub fn kind(&self) -> &'static str {
        match self {
            Density::Linear { .. } => "linear",
            Density::InvSqrt { .. } => "inv_sqrt",
            Density::Elliptic { .. } => "elliptic",
            Density::AmplitudeDamping(_) => "amplitude_damping",
            Density::Numeric(_) => "numeric",
        }
    }
}

/// Absolutely continuous piece supported on `[lo, hi]`. `breaks` are interior
/// points where the density is not smooth (kinks, jumps, integrable
/// singularities); integration never straddles them.
#[derive(Debug, Clone)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub density: Density,
    pub breaks: Vec<f64>,
}

impl Piece {
    pub fn new(lo: f64, hi: f64, density: Density) -> Self {
        Piece {
            lo,
            hi,
            density,
            breaks: Vec::new(),
        }
    }

    pub fn with_breaks(mut self, mut breaks: Vec<f64>) -> Self {
        breaks.retain(|b| *b > self.lo && *b < self.hi);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        self.breaks = breaks;
        self
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.contains(x) {
            self.density.eval(x)
        } else {
            0.0
        }
    }

    /// `[lo, b₁, …, hi]` refined by the extra points `extra`.
    fn partition(&self, extra: &[f64]) -> Vec<f64> {
        let mut pts = vec![self.lo, self.hi];
        pts.extend(self.breaks.iter().copied());
        pts.extend(
            extra
                .iter()
                .copied()
                .filter(|x| *x > self.lo && *x < self.hi),
        );
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        pts
    }
}

/// Fidelity law: atoms plus absolutely continuous pieces. Overlapping pieces add.
#[derive(Debug, Clone, Default)]
pub struct FidelityPdf {
    pub atoms: Vec<Atom>,
    pub pieces: Vec<Piece>,
}

impl FidelityPdf {
    pub fn atom(location: f64) -> Self {
        FidelityPdf {
            atoms: vec![Atom {
                location,
                mass: 1.0,
            }],
            pieces: Vec::new(),
        }
    }

    /// The law `2F` on `[0, 1]` of the optimal classical protocol.
    pub fn optimal_classical() -> Self {
        FidelityPdf {
            atoms: Vec::new(),
            pieces: vec![Piece::new(
                0.0,
                1.0,
                Density::Linear {
                    intercept: 0.0,
                    slope: 2.0,
                },
            )],
        }
    }

    /// Density of the continuous part at `x` (atoms excluded).
    pub fn density(&self, x: f64) -> f64 {
        self.pieces.iter().map(|p| p.eval(x)).sum()
    }

    /// Smallest interval containing every atom and piece.
    pub fn support(&self) -> (f64, f64) {
        let lo = self
            .atoms
            .iter()
            .map(|a| a.location)
            .chain(self.pieces.iter().map(|p| p.lo))
            .fold(f64::INFINITY, f64::min);
        let hi = self
            .atoms
            .iter()
            .map(|a| a.location)
            .chain(self.pieces.iter().map(|p| p.hi))
            .fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    /// All points where integration must split: piece ends, breaks, atoms.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.atoms.iter().map(|a| a.location).collect();
        for p in &self.pieces {
            pts.push(p.lo);
            pts.push(p.hi);
            pts.extend(p.breaks.iter().copied());
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// `Σ mass·w(loc) + ∫ w(F) f(F) dF`, splitting at every break of the law
    /// and at `extra_breaks` (e.g. knots of `w`).
    pub fn integrate_weighted<W: Fn(f64) -> f64>(
        &self,
        w: W,
        extra_breaks: &[f64],
        tol: f64,
    ) -> Result<f64> {
        let mut total = 0.0;
        for a in &self.atoms {
            let wv = w(a.location);
            if !wv.is_finite() {
                return Err(Error::Invalid(format!(
                    "weight is infinite at the atom F = {}",
                    a.location
                )));
            }
            total += a.mass * wv;
        }
        for piece in &self.pieces {
            if let Density::AmplitudeDamping(model) = &piece.density {
                total += model.expectation(&w, extra_breaks, tol)?;
                continue;
            }
            let pts = piece.partition(extra_breaks);
            let share = tol / (pts.len().max(2) - 1) as f64;
            for seg in pts.windows(2) {
                let f = |x: f64| {
                    let d = piece.density.eval(x);
                    if d == 0.0 {
                        0.0
                    } else {
                        w(x) * d
                    }
                };
                total += integrate(f, seg[0], seg[1], share)?.value;
            }
        }
        Ok(total)
    }

    pub fn total_mass(&self) -> Result<f64> {
        self.integrate_weighted(|_| 1.0, &[], LAW_TOL)
    }

    /// `E[F^k]`.
    pub fn moment(&self, k: u32) -> Result<f64> {
        self.integrate_weighted(|x| x.powi(k as i32), &[], LAW_TOL)
    }

    pub fn mean(&self) -> Result<f64> {
        self.moment(1)
    }

    pub fn variance(&self) -> Result<f64> {
        let m1 = self.moment(1)?;
        let m2 = self.moment(2)?;
        Ok(m2 - m1 * m1)
    }

    /// Checks normalization (`1 ± 1e-8`), supports inside `[0, 1]` and
    /// non-negativity on 200 interior points of every piece.
    pub fn validate(&self) -> Result<()> {
        for a in &self.atoms {
            if !(0.0..=1.0).contains(&a.location) || !(0.0..=1.0 + 1e-12).contains(&a.mass) {
                return Err(Error::Consistency(format!("bad atom {a:?}")));
            }
        }
        for p in &self.pieces {
            if p.lo < -1e-12 || p.hi > 1.0 + 1e-12 || p.lo > p.hi {
                return Err(Error::Consistency(format!(
                    "piece support [{}, {}]",
                    p.lo, p.hi
                )));
            }
            for i in 1..=200 {
                let x = p.lo + (p.hi - p.lo) * i as f64 / 201.0;
                let d = p.density.eval(x);
                if !(d >= 0.0) {
                    return Err(Error::Consistency(format!("density {d} at F = {x}")));
                }
            }
        }
        let mass = self.total_mass()?;
        if (mass - 1.0).abs() > 1e-8 {
            return Err(Error::Consistency(format!("total probability {mass}")));
        }
        Ok(())
    }

    /// Builds the cumulative distribution function.
    pub fn cdf(&self) -> Cdf {
        Cdf::new(self)
    }
}

/// Knots of the cumulative table of one smooth segment.
const CDF_KNOTS: usize = 4096;

#[derive(Debug, Clone)]
struct Segment {
    piece: usize,
    map: EndpointMap,
    /// `cumulative[i] = ∫ density` over `u ∈ [0, i/(len−1)]`.
    cumulative: Vec<f64>,
}

/// Cumulative distribution of a [`FidelityPdf`].
///
/// Each smooth segment carries a 4096-knot table of partial integrals in the
/// smoothed variable of [`EndpointMap`]; evaluation adds one Kronrod panel from
/// the nearest knot, so the result is exact up to quadrature error and
/// monotone. Atoms enter as jumps (right-continuous).
#[derive(Debug, Clone)]
pub struct Cdf {
    pdf: FidelityPdf,
    segments: Vec<Segment>,
}

impl Cdf {
    fn new(pdf: &FidelityPdf) -> Self {
        let mut segments = Vec::new();
        for (idx, piece) in pdf.pieces.iter().enumerate() {
            let pts = piece.partition(&[]);
            let knots = (CDF_KNOTS / (pts.len() - 1)).max(256);
            for seg in pts.windows(2) {
                let map = EndpointMap::new(seg[0], seg[1]);
                let g = map.pull_back(|x| piece.density.eval(x));
                let mut cumulative = Vec::with_capacity(knots + 1);
                cumulative.push(0.0);
                let mut acc = 0.0;
                for i in 0..knots {
                    let u0 = i as f64 / knots as f64;
                    let u1 = (i + 1) as f64 / knots as f64;
                    acc += gauss_kronrod_15(&g, u0, u1).value;
                    cumulative.push(acc);
                }
                segments.push(Segment {
                    piece: idx,
                    map,
                    cumulative,
                });
            }
        }
        Cdf {
            pdf: pdf.clone(),
            segments,
        }
    }

    fn continuous_part(&self, x: f64) -> f64 {
        let mut total = 0.0;
        for seg in &self.segments {
            if x <= seg.map.a {
                continue;
            }
            let last = *seg.cumulative.last().unwrap();
            if x >= seg.map.b {
                total += last;
                continue;
            }
            let knots = seg.cumulative.len() - 1;
            let u = seg.map.u(x);
            let i = ((u * knots as f64).floor() as usize).min(knots - 1);
            let u0 = i as f64 / knots as f64;
            let piece = &self.pdf.pieces[seg.piece];
            let g = seg.map.pull_back(|y| piece.density.eval(y));
            let partial = if u > u0 {
                gauss_kronrod_15(&g, u0, u).value
            } else {
                0.0
            };
            total +=
                seg.cumulative[i] + partial.clamp(0.0, seg.cumulative[i + 1] - seg.cumulative[i]);
        }
        total
    }

    /// `P(F ≤ x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let jumps: f64 = self
            .pdf
            .atoms
            .iter()
            .filter(|a| a.location <= x)
            .map(|a| a.mass)
            .sum();
        jumps + self.continuous_part(x)
    }

    /// `P(F < x)`.
    pub fn eval_left(&self, x: f64) -> f64 {
        let jumps: f64 = self
            .pdf
            .atoms
            .iter()
            .filter(|a| a.location < x)
            .map(|a| a.mass)
            .sum();
        jumps + self.continuous_part(x)
    }

    /// `P(F ∈ [a, b])`.
    pub fn interval(&self, a: f64, b: f64) -> f64 {
        self.eval(b) - self.eval_left(a)
    }

    pub fn pdf(&self) -> &FidelityPdf {
        &self.pdf
    }
}

/// `sup_x |A(x) − B(x)|` over a uniform grid of `n` points in `[0, 1]`, plus
/// every breakpoint of both laws (evaluated on both sides).
pub fn cdf_distance(a: &Cdf, b: &Cdf, n: usize) -> f64 {
    let mut pts: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    pts.extend(a.pdf().breakpoints());
    pts.extend(b.pdf().breakpoints());
    pts.iter()
        .map(|&x| {
            let right = (a.eval(x) - b.eval(x)).abs();
            let left = (a.eval_left(x) - b.eval_left(x)).abs();
            right.max(left)
        })
        .fold(0.0, f64::max)
}
