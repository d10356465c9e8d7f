use crate::{Error, Result};

/// Real roots of a polynomial of degree at most two, in ascending order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Roots {
    len: usize,
    vals: [f64; 2],
}

impl Roots {
    fn none() -> Self {
        Roots {
            len: 0,
            vals: [0.0; 2],
        }
    }
    fn one(x: f64) -> Self {
        Roots {
            len: 1,
            vals: [x, 0.0],
        }
    }
    fn two(a: f64, b: f64) -> Self {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Roots {
            len: 2,
            vals: [lo, hi],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
    pub fn as_slice(&self) -> &[f64] {
        &self.vals[..self.len]
    }
    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.as_slice().iter().copied()
    }
}

/// Solves `a2·x² + a1·x + a0 = 0` over the reals.
///
/// Uses the cancellation-free pair `q = −(a1 + sgn(a1)√Δ)/2`, `x = q/a2`, `x = a0/q`.
/// When `|a2| < 1e-14 · max(|a1|, |a0|)` the equation is treated as linear.
/// A double root is reported once.
pub fn solve_quadratic(a2: f64, a1: f64, a0: f64) -> Result<Roots> {
    let scale = a1.abs().max(a0.abs());
    if a2 == 0.0 || a2.abs() < 1e-14 * scale {
        if a1 != 0.0 {
            return Ok(Roots::one(-a0 / a1));
        }
        if a0 != 0.0 {
            return Ok(Roots::none());
        }
        return Err(Error::Degenerate);
    }
    let disc = a1 * a1 - 4.0 * a2 * a0;
    if disc < 0.0 {
        return Ok(Roots::none());
    }
    if disc == 0.0 {
        return Ok(Roots::one(-a1 / (2.0 * a2)));
    }
    let sq = disc.sqrt();
    let q = -0.5 * (a1 + a1.signum() * sq);
    if q == 0.0 {
        // a1 = 0 and a0 = 0 cannot reach here (disc would be 0); a1 = 0 with disc > 0.
        let r = (-a0 / a2).sqrt();
        return Ok(Roots::two(-r, r));
    }
    Ok(Roots::two(q / a2, a0 / q))
}

/// Bisection on a bracketing interval `f(lo)·f(hi) ≤ 0` down to width `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
