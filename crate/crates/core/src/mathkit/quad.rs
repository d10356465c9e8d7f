//! Globally adaptive Gauss–Kronrod (7/15) quadrature on a smoothed variable.
//!
//! Every integrand here is piecewise smooth with at worst `(x − a)^{-1/2}` or
//! logarithmic behaviour at piece ends. Integrating in `u` with
//! `x = a + (b − a)(3u² − 2u³)` multiplies the integrand by `6u(1 − u)`, which
//! cancels an inverse square root and tames a logarithm, and the Kronrod nodes
//! never touch `u = 0` or `u = 1`, where densities are allowed to be infinite.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Error, Result};

/// Default absolute tolerance for density integrals.
pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_SEGMENTS: usize = 4000;
const MIN_WIDTH: f64 = 1e-14;

// QUADPACK tables, kept at their published precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// A quadrature result with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// One 15-point Kronrod panel on `[a, b]` with the QUADPACK error estimate.
pub(crate) fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = fc * WG[3];
    let mut kronrod = fc * WGK[7];
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Estimate { value, error }
}

/// The smoothing change of variables `x = a + (b − a)(3u² − 2u³)`, `u ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointMap {
    pub a: f64,
    pub b: f64,
}

impl EndpointMap {
    pub fn new(a: f64, b: f64) -> Self {
        EndpointMap { a, b }
    }

    pub fn x(&self, u: f64) -> f64 {
        self.a + (self.b - self.a) * u * u * (3.0 - 2.0 * u)
    }

    pub fn jacobian(&self, u: f64) -> f64 {
        (self.b - self.a) * 6.0 * u * (1.0 - u)
    }

    /// Inverse map, using the trigonometric solution of the cubic.
    pub fn u(&self, x: f64) -> f64 {
        let s = ((x - self.a) / (self.b - self.a)).clamp(0.0, 1.0);
        let mut u = (0.5 - ((1.0 - 2.0 * s).asin() / 3.0).sin()).clamp(0.0, 1.0);
        // asin loses digits near s ∈ {0, 1}; polish with Newton steps in s.
        for _ in 0..2 {
            let slope = 6.0 * u * (1.0 - u);
            if slope <= 0.0 {
                break;
            }
            u = (u - (u * u * (3.0 - 2.0 * u) - s) / slope).clamp(0.0, 1.0);
        }
        u
    }

    /// The transformed integrand `f(x(u)) · x'(u)`.
    pub fn pull_back<'f, F: Fn(f64) -> f64 + 'f>(&self, f: F) -> impl Fn(f64) -> f64 + 'f {
        let map = *self;
        move |u| {
            let jac = map.jacobian(u);
            if jac == 0.0 {
                0.0
            } else {
                f(map.x(u)) * jac
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Adaptive integration of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Returns the estimate and its error bound. Fails with
/// [`Error::NoConvergence`] (carrying the best estimate) when the segment budget
/// or the `1e-14` width floor is exhausted before the tolerance is met, or when
/// the integrand produces a non-finite value.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    if b < a {
        let e = integrate(f, b, a, tol)?;
        return Ok(Estimate {
            value: -e.value,
            error: e.error,
        });
    }
    let map = EndpointMap::new(a, b);
    let g = map.pull_back(&f);

    let first = gauss_kronrod_15(&g, 0.0, 1.0);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a: 0.0,
        b: 1.0,
        est: first,
    });
    let mut frozen_error = 0.0;

    loop {
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::NoConvergence {
                estimate: value,
                error,
            });
        }
        if error <= tol.max(1e-15 * value.abs()) {
            return Ok(Estimate { value, error });
        }
        let Some(seg) = heap.pop() else {
            return Err(Error::NoConvergence {
                estimate: value,
                error,
            });
        };
        if heap.len() + 2 > MAX_SEGMENTS {
            return Err(Error::NoConvergence {
                estimate: value,
                error,
            });
        }
        // Width floor in x units.
        if (map.x(seg.b) - map.x(seg.a)).abs() < MIN_WIDTH {
            frozen_error += seg.est.error;
            if frozen_error > tol {
                return Err(Error::NoConvergence {
                    estimate: value,
                    error,
                });
            }
            continue;
        }
        let mid = 0.5 * (seg.a + seg.b);
        let left = gauss_kronrod_15(&g, seg.a, mid);
        let right = gauss_kronrod_15(&g, mid, seg.b);
        value += left.value + right.value - seg.est.value;
        error += left.error + right.error - seg.est.error;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            est: left,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            est: right,
        });
    }
}

/// Value-only convenience wrapper around [`integrate`].
pub fn adaptive_quadrature<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate(f, a, b, tol).map(|e| e.value)
}
