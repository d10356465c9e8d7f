//! Qubit and two-qubit state model: Bloch vectors, Fano forms, Bell-state
//! correlation matrices, local noise channels and classification predicates for
//! Bell-diagonal resources.

use serde::{Deserialize, Serialize};

use nalgebra::{Complex, Matrix2, Matrix4};

use crate::mathkit::{fibonacci_sphere, Mat3, Vec3};
use crate::{Error, Result};

/// Absolute tolerance of every boundary predicate in this module.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// A qubit state `ρ = (1 + v·σ)/2`, `|v| ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(Vec3);

impl BlochVector {
    pub fn new(v: Vec3) -> Result<Self> {
        let n = v.norm();
        if !(n <= 1.0 + BOUNDARY_TOL) {
            return Err(Error::domain("|v|", n, "Bloch vector inside the unit ball"));
        }
        Ok(BlochVector(v))
    }

    pub fn maximally_mixed() -> Self {
        BlochVector(Vec3::zeros())
    }

    pub fn vec(&self) -> &Vec3 {
        &self.0
    }

    pub fn is_pure(&self) -> bool {
        (self.0.norm() - 1.0).abs() <= BOUNDARY_TOL
    }
}

/// The four Bell states `|Φ₁⟩ … |Φ₄⟩`, identified through their correlation matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Bell {
    Phi1,
    Phi2,
    Phi3,
    Phi4,
}

impl Bell {
    pub const ALL: [Bell; 4] = [Bell::Phi1, Bell::Phi2, Bell::Phi3, Bell::Phi4];

    /// 1-based index as used in the literature.
    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn from_index(k: usize) -> Result<Self> {
        match k {
            1..=4 => Ok(Bell::ALL[k - 1]),
            _ => Err(Error::domain("k", k as f64, "Bell index in 1..=4")),
        }
    }

    /// Diagonal of `w_k = Tr(|Φ_k⟩⟨Φ_k| σ⊗σ)`.
    pub fn diagonal(self) -> Vec3 {
        match self {
            Bell::Phi1 => Vec3::new(1.0, -1.0, 1.0),
            Bell::Phi2 => Vec3::new(-1.0, 1.0, 1.0),
            Bell::Phi3 => Vec3::new(1.0, 1.0, -1.0),
            Bell::Phi4 => Vec3::new(-1.0, -1.0, -1.0),
        }
    }

    pub fn correlation(self) -> Mat3 {
        Mat3::from_diagonal(&self.diagonal())
    }
}

/// Two-qubit state in Fano form: local Bloch vectors and correlation matrix `w = Tr(ρ σ⊗σ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitFano {
    pub r_a: Vec3,
    pub r_b: Vec3,
    pub w: Mat3,
}

impl TwoQubitFano {
    pub fn bell(k: Bell) -> Self {
        TwoQubitFano {
            r_a: Vec3::zeros(),
            r_b: Vec3::zeros(),
            w: k.correlation(),
        }
    }

    /// Diagonal of `w` when the state is Bell-diagonal (zero local vectors, diagonal `w`).
    pub fn bell_diagonal_triple(&self) -> Option<Vec3> {
        let diag = self.w.diagonal();
        let off_diag = (self.w - Mat3::from_diagonal(&diag)).abs().max();
        (self.r_a.norm() == 0.0 && self.r_b.norm() == 0.0 && off_diag == 0.0).then_some(diag)
    }
}

/// Bell-diagonal resource with `w = diag(w1, w2, w3)`. Physicality is not enforced.
pub fn bell_diagonal(w1: f64, w2: f64, w3: f64) -> TwoQubitFano {
    TwoQubitFano {
        r_a: Vec3::zeros(),
        r_b: Vec3::zeros(),
        w: Mat3::from_diagonal(&Vec3::new(w1, w2, w3)),
    }
}

/// Weights of the four Bell projectors in a Bell-diagonal state,
/// `λ_k = (1 + Tr(w_k w))/4`, ordered Φ₁ … Φ₄.
pub fn bell_weights(w1: f64, w2: f64, w3: f64) -> [f64; 4] {
    let w = Vec3::new(w1, w2, w3);
    Bell::ALL.map(|k| (1.0 + k.diagonal().dot(&w)) / 4.0)
}

/// Membership in the tetrahedron spanned by the four Bell correlation diagonals.
pub fn is_physical_bell_diagonal(w1: f64, w2: f64, w3: f64) -> bool {
    bell_weights(w1, w2, w3).iter().all(|&l| l >= -BOUNDARY_TOL)
}

/// Membership in the separable octahedron `|w1| + |w2| + |w3| ≤ 1`.
pub fn is_separable_bell_diagonal(w1: f64, w2: f64, w3: f64) -> Result<bool> {
    if !is_physical_bell_diagonal(w1, w2, w3) {
        return Err(Error::Invalid(format!(
            "diag({w1}, {w2}, {w3}) is not a physical Bell-diagonal state"
        )));
    }
    Ok(w1.abs() + w2.abs() + w3.abs() <= 1.0 + BOUNDARY_TOL)
}

/// Horodecki criterion: the state violates some CHSH inequality iff the two
/// largest eigenvalues of `wᵀw` sum to more than one.
pub fn violates_chsh(w: &Mat3) -> bool {
    let mut ev: Vec<f64> = w.singular_values().iter().map(|s| s * s).collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev[0] + ev[1] > 1.0 + BOUNDARY_TOL
}

fn pauli() -> [Matrix2<Complex<f64>>; 4] {
    let c = |re: f64, im: f64| Complex::new(re, im);
    let z = c(0.0, 0.0);
    [
        Matrix2::new(c(1.0, 0.0), z, z, c(1.0, 0.0)),
        Matrix2::new(z, c(1.0, 0.0), c(1.0, 0.0), z),
        Matrix2::new(z, c(0.0, -1.0), c(0.0, 1.0), z),
        Matrix2::new(c(1.0, 0.0), z, z, c(-1.0, 0.0)),
    ]
}

impl TwoQubitFano {
    /// `ρ = ¼(1 + r_A·σ ⊗ 1 + 1 ⊗ r_B·σ + Σ w_ij σ_i ⊗ σ_j)`.
    pub fn density_matrix(&self) -> Matrix4<Complex<f64>> {
        let s = pauli();
        let mut rho = s[0].kronecker(&s[0]);
        for i in 0..3 {
            rho += s[i + 1].kronecker(&s[0]) * Complex::from(self.r_a[i]);
            rho += s[0].kronecker(&s[i + 1]) * Complex::from(self.r_b[i]);
            for j in 0..3 {
                rho += s[i + 1].kronecker(&s[j + 1]) * Complex::from(self.w[(i, j)]);
            }
        }
        rho * Complex::from(0.25)
    }

    /// Fano form of the partial transpose on `B` (`σ_y → −σ_y` on the second qubit).
    pub fn partial_transpose(&self) -> TwoQubitFano {
        let flip = Mat3::from_diagonal(&Vec3::new(1.0, -1.0, 1.0));
        TwoQubitFano {
            r_a: self.r_a,
            r_b: flip * self.r_b,
            w: self.w * flip,
        }
    }

    /// Smallest eigenvalue of the density matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        self.density_matrix()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Peres–Horodecki criterion, exact for two qubits: separable iff the partial
/// transpose is positive semidefinite (within the boundary tolerance).
pub fn is_separable_ppt(state: &TwoQubitFano) -> bool {
    state.partial_transpose().min_eigenvalue() >= -BOUNDARY_TOL
}

/// Qubit channel acting on Bloch vectors as `t ↦ a·t + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineChannel {
    pub a: Mat3,
    pub b: Vec3,
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain("p", p, "0 <= p <= 1"))
    }
}

impl AffineChannel {
    pub fn identity() -> Self {
        AffineChannel {
            a: Mat3::identity(),
            b: Vec3::zeros(),
        }
    }

    pub fn apply(&self, t: &Vec3) -> Vec3 {
        self.a * t + self.b
    }

    /// Checks that the unit sphere (hence the ball) is mapped into the ball,
    /// on a 100-point grid within `1e-9`.
    pub fn maps_ball_into_ball(&self) -> bool {
        fibonacci_sphere(100)
            .iter()
            .all(|t| self.apply(t).norm() <= 1.0 + 1e-9)
    }
}

/// Phase flip: `a = diag(1−p, 1−p, 1)`, `b = 0`.
pub fn phase_flip(p: f64) -> Result<AffineChannel> {
    check_probability(p)?;
    Ok(AffineChannel {
        a: Mat3::from_diagonal(&Vec3::new(1.0 - p, 1.0 - p, 1.0)),
        b: Vec3::zeros(),
    })
}

/// Depolarizing: `a = (1−p)·1`, `b = 0`.
pub fn depolarizing(p: f64) -> Result<AffineChannel> {
    check_probability(p)?;
    Ok(AffineChannel {
        a: Mat3::identity() * (1.0 - p),
        b: Vec3::zeros(),
    })
}

/// Amplitude damping towards the north pole:
/// `a = diag(√(1−p), √(1−p), 1−p)`, `b = p·k̂`.
pub fn amplitude_damping(p: f64) -> Result<AffineChannel> {
    check_probability(p)?;
    let s = (1.0 - p).sqrt();
    Ok(AffineChannel {
        a: Mat3::from_diagonal(&Vec3::new(s, s, 1.0 - p)),
        b: Vec3::new(0.0, 0.0, p),
    })
}

/// Fano form of `(E ⊗ F)(|Φ_k⟩⟨Φ_k|)`:
/// `r_A = b_E`, `r_B = b_F`, `w_αβ = b_E^α b_F^β + Σ_i [w_k]_ii A_E^{αi} A_F^{βi}`.
pub fn apply_local_channels(e: &AffineChannel, f: &AffineChannel, k: Bell) -> TwoQubitFano {
    let wk = k.diagonal();
    let w = e.b * f.b.transpose() + e.a * Mat3::from_diagonal(&wk) * f.a.transpose();
    TwoQubitFano {
        r_a: e.b,
        r_b: f.b,
        w,
    }
}
