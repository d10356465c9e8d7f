//! Numerical toolkit shared by the physics modules: 3-vectors and 3×3 matrices,
//! special functions, an SO(3)-constrained SVD, quadrature, root solving, seeded
//! sphere sampling and the Kolmogorov–Smirnov statistic.

mod elliptic;
mod ks;
mod quad;
mod roots;
mod sampling;
mod special;
mod svd;

pub use elliptic::{complete_elliptic_k, elliptic_k_or_inf};
pub use ks::ks_statistic;
pub(crate) use quad::gauss_kronrod_15;
pub use quad::{adaptive_quadrature, integrate, EndpointMap, Estimate, DEFAULT_TOL};
pub use roots::{bisect, solve_quadratic, Roots};
pub use sampling::{fibonacci_sphere, sample_unit_sphere, stream_rng, SimRng};
pub use special::beta_function;
pub use svd::{so3_svd, So3Svd};

/// Real 3-vector (Bloch vectors, POVM directions, affine offsets).
pub type Vec3 = nalgebra::Vector3<f64>;

/// Real 3×3 matrix (correlation matrices, rotations, affine channel parts).
pub type Mat3 = nalgebra::Matrix3<f64>;

/// Largest absolute entry of a matrix difference.
pub fn max_abs_diff(a: &Mat3, b: &Mat3) -> f64 {
    (a - b).abs().max()
}
