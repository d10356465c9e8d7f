//! Teleportation protocols as branch generators.
//!
//! For a pure input `t`, a protocol emits a finite list of outcome branches,
//! each with a probability `p_{j|t}` and an output Bloch vector `t_{j|t}`. The
//! fidelity of a branch is the Bloch overlap `(1 + t·t_{j|t})/2`.

use crate::mathkit::{so3_svd, Mat3, Vec3};
use crate::states::{Bell, TwoQubitFano};
use crate::{Error, Result};

/// One outcome of a protocol run for a fixed input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeBranch {
    pub prob: f64,
    pub out: Vec3,
}

/// Anything that maps an input Bloch vector to outcome branches.
pub trait ProtocolEnsemble: Sync {
    /// Number of branches returned by [`ProtocolEnsemble::branches`].
    fn branch_count(&self) -> usize;

    fn branches(&self, t: &Vec3) -> Result<Vec<OutcomeBranch>>;
}

/// Bloch-overlap fidelity `F = (1 + t·out)/2` for a pure input `t`.
pub fn fidelity(t: &Vec3, out: &Vec3) -> f64 {
    0.5 * (1.0 + t.dot(out))
}

/// One POVM element `(c²/2)(1 + s·σ)` of Alice's measurement together with the
/// state `r` that Bob prepares for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PovmElement {
    pub c2: f64,
    pub s: Vec3,
    pub r: Vec3,
}

/// Measure-and-prepare (classical) protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurePrepare {
    elements: Vec<PovmElement>,
}

impl MeasurePrepare {
    /// Validates completeness (`Σ c² = 2`, `Σ c² s = 0`) and Bloch-ball membership.
    pub fn new(elements: Vec<PovmElement>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Invalid("a POVM needs at least one element".into()));
        }
        for e in &elements {
            if !(e.c2 >= 0.0) {
                return Err(Error::domain("c2", e.c2, "c2 >= 0"));
            }
            if e.s.norm() > 1.0 + 1e-12 {
                return Err(Error::domain("|s|", e.s.norm(), "|s| <= 1"));
            }
            if e.r.norm() > 1.0 + 1e-12 {
                return Err(Error::domain("|r|", e.r.norm(), "|r| <= 1"));
            }
        }
        let total: f64 = elements.iter().map(|e| e.c2).sum();
        if (total - 2.0).abs() > 1e-12 {
            return Err(Error::Invalid(format!(
                "POVM weights sum to {total}, expected 2"
            )));
        }
        let first_moment = elements
            .iter()
            .fold(Vec3::zeros(), |acc, e| acc + e.s * e.c2);
        if first_moment.abs().max() > 1e-12 {
            return Err(Error::Invalid(format!(
                "POVM is not complete: Σ c² s = {first_moment:?}"
            )));
        }
        Ok(MeasurePrepare { elements })
    }

    /// Six-outcome ±x, ±y, ±z measurement with `c² = 1/3` and `r = s`.
    pub fn canonical_optimal() -> Self {
        Self::six_axis(|s| s)
    }

    /// Six-outcome ±axis measurement with an arbitrary preparation rule.
    pub fn six_axis(prepare: impl Fn(Vec3) -> Vec3) -> Self {
        let axes = [
            Vec3::x(),
            -Vec3::x(),
            Vec3::y(),
            -Vec3::y(),
            Vec3::z(),
            -Vec3::z(),
        ];
        let elements = axes
            .into_iter()
            .map(|s| PovmElement {
                c2: 1.0 / 3.0,
                s,
                r: prepare(s),
            })
            .collect();
        MeasurePrepare::new(elements).expect("six-axis POVM is complete")
    }

    pub fn elements(&self) -> &[PovmElement] {
        &self.elements
    }

    /// `p_j = (c_j²/2)(1 + t·s_j)`, `out_j = r_j`.
    pub fn mp_branches(&self, t: &Vec3) -> Vec<OutcomeBranch> {
        self.elements
            .iter()
            .map(|e| OutcomeBranch {
                prob: 0.5 * e.c2 * (1.0 + t.dot(&e.s)),
                out: e.r,
            })
            .collect()
    }

    /// Optimality condition `r_j·s_j = 1` for every element.
    pub fn is_optimal(&self) -> bool {
        self.elements
            .iter()
            .all(|e| (e.r.dot(&e.s) - 1.0).abs() <= 1e-12)
    }
}

impl ProtocolEnsemble for MeasurePrepare {
    fn branch_count(&self) -> usize {
        self.elements.len()
    }

    fn branches(&self, t: &Vec3) -> Result<Vec<OutcomeBranch>> {
        Ok(self.mp_branches(t))
    }
}

/// Bob's conditional rotations for standard teleportation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corrections {
    /// `R_j = w_j O₁ w_l O₂ᵀ` for Alice's outcomes Φ₁ … Φ₄.
    pub rotations: [Mat3; 4],
    /// Bell matrix `w_l` maximizing `1 + Tr(w_l w_d)`, in the frame of the SVD.
    pub choice: Bell,
    /// `O₁ w_l w_d O₁ᵀ`: the quadratic form of the fidelity in the input frame.
    /// Diagonal for Bell-diagonal resources, where every branch outputs `effective·t`.
    pub effective: Mat3,
    /// `O₁ w_l O₂ᵀ`, the sign pattern of the choice expressed in the resource frame.
    pub frame_sign: Mat3,
}

impl Corrections {
    /// Bell state selected, expressed in the resource's own frame, when the frame
    /// sign matrix is one of the four Bell correlation matrices.
    pub fn resource_frame_choice(&self) -> Option<Bell> {
        Bell::ALL
            .into_iter()
            .find(|k| (self.frame_sign - k.correlation()).abs().max() < 1e-12)
    }

    /// Eigenvalues of the effective quadratic form, descending.
    pub fn effective_eigenvalues(&self) -> Vec3 {
        let mut a: Vec<f64> = self
            .effective
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        a.sort_by(|x, y| y.total_cmp(x));
        Vec3::new(a[0], a[1], a[2])
    }
}

/// Optimal corrections `R_j = w_j O₁ w_{l} O₂ᵀ` with `w = O₁ w_d O₂ᵀ` and
/// `l = argmax_i (1 + Tr[w_i w_d])`; ties go to the lowest Bell index.
pub fn bob_optimal_corrections(w: &Mat3) -> Corrections {
    let svd = so3_svd(w);
    let wd = Mat3::from_diagonal(&svd.d);
    let mut choice = Bell::Phi1;
    let mut best = f64::NEG_INFINITY;
    for k in Bell::ALL {
        let score = 1.0 + (k.correlation() * wd).trace();
        if score > best {
            best = score;
            choice = k;
        }
    }
    let wl = choice.correlation();
    let frame_sign = svd.o1 * wl * svd.o2.transpose();
    let rotations = Bell::ALL.map(|j| j.correlation() * frame_sign);
    let effective = svd.o1 * wl * wd * svd.o1.transpose();
    Corrections {
        rotations,
        choice,
        effective,
        frame_sign,
    }
}

/// Standard teleportation over a two-qubit resource with optimal corrections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StdTeleport {
    resource: TwoQubitFano,
    corrections: Corrections,
}

/// Branches with probability below this emit the maximally mixed output.
const NULL_BRANCH: f64 = 1e-15;

impl StdTeleport {
    pub fn new(resource: TwoQubitFano) -> Self {
        let corrections = bob_optimal_corrections(&resource.w);
        StdTeleport {
            resource,
            corrections,
        }
    }

    /// Teleportation over a perfect `|Φ₁⟩`.
    pub fn ideal() -> Self {
        Self::new(TwoQubitFano::bell(Bell::Phi1))
    }

    pub fn resource(&self) -> &TwoQubitFano {
        &self.resource
    }

    pub fn corrections(&self) -> &Corrections {
        &self.corrections
    }

    /// `p_j = (1 + t·(w_j r_A))/4`, `s_j = (r_B + (w_j w)ᵀ t)/(4 p_j)`, `out_j = R_j s_j`.
    pub fn sqt_branches(&self, t: &Vec3) -> Result<[OutcomeBranch; 4]> {
        let TwoQubitFano { r_a, r_b, w } = &self.resource;
        let mut out = [OutcomeBranch {
            prob: 0.0,
            out: Vec3::zeros(),
        }; 4];
        for (slot, j) in out.iter_mut().zip(Bell::ALL) {
            let wj = j.correlation();
            let prob = 0.25 * (1.0 + t.dot(&(wj * r_a)));
            let bloch = if prob < NULL_BRANCH {
                Vec3::zeros()
            } else {
                let cond = (r_b + (wj * w).transpose() * t) / (4.0 * prob);
                self.corrections.rotations[j as usize] * cond
            };
            if bloch.norm() > 1.0 + 1e-9 {
                return Err(Error::Consistency(format!(
                    "branch {} output {bloch:?} leaves the Bloch ball",
                    j.index()
                )));
            }
            *slot = OutcomeBranch { prob, out: bloch };
        }
        Ok(out)
    }
}

impl ProtocolEnsemble for StdTeleport {
    fn branch_count(&self) -> usize {
        4
    }

    fn branches(&self, t: &Vec3) -> Result<Vec<OutcomeBranch>> {
        self.sqt_branches(t).map(|b| b.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathkit::{fibonacci_sphere, max_abs_diff, sample_unit_sphere, stream_rng};
    use crate::states::{
        amplitude_damping, apply_local_channels, bell_diagonal, depolarizing, phase_flip,
    };

    fn probs(p: &MeasurePrepare, t: Vec3) -> Vec<f64> {
        p.mp_branches(&t).iter().map(|b| b.prob).collect()
    }

    #[test]
    fn six_axis_probabilities() {
        let p = MeasurePrepare::canonical_optimal();
        let got = probs(&p, Vec3::z());
        let want = [1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0, 0.0];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-15);
        }
        let centre = probs(&p, Vec3::zeros());
        assert!(centre.iter().all(|x| (x - 1.0 / 6.0).abs() < 1e-15));
    }

    #[test]
    fn two_element_povm() {
        let p = MeasurePrepare::new(vec![
            PovmElement {
                c2: 1.0,
                s: Vec3::z(),
                r: Vec3::z(),
            },
            PovmElement {
                c2: 1.0,
                s: -Vec3::z(),
                r: -Vec3::z(),
            },
        ])
        .unwrap();
        assert_eq!(probs(&p, Vec3::z()), vec![1.0, 0.0]);
        assert!(p.is_optimal());
    }

    #[test]
    fn invalid_povm_rejected() {
        let r = MeasurePrepare::new(vec![PovmElement {
            c2: 2.0,
            s: Vec3::z(),
            r: Vec3::z(),
        }]);
        assert!(r.is_err());
        let r = MeasurePrepare::new(vec![PovmElement {
            c2: 1.0,
            s: Vec3::z(),
            r: Vec3::z(),
        }]);
        assert!(r.is_err());
    }

    #[test]
    fn optimality() {
        assert!(MeasurePrepare::canonical_optimal().is_optimal());
        assert!(!MeasurePrepare::six_axis(|s| -s).is_optimal());
        assert!(!MeasurePrepare::six_axis(|s| s * 0.9).is_optimal());
    }

    #[test]
    fn fidelity_values() {
        assert_eq!(fidelity(&Vec3::z(), &Vec3::z()), 1.0);
        assert_eq!(fidelity(&Vec3::z(), &-Vec3::z()), 0.0);
        assert_eq!(fidelity(&Vec3::z(), &Vec3::zeros()), 0.5);
    }

    #[test]
    fn corrections_for_perfect_resource() {
        let c = bob_optimal_corrections(&Bell::Phi1.correlation());
        assert_eq!(c.resource_frame_choice(), Some(Bell::Phi1));
        assert!(max_abs_diff(&c.effective, &Mat3::identity()) < 1e-15);
        for r in &c.rotations {
            assert!((r.determinant() - 1.0).abs() < 1e-12);
            assert!(max_abs_diff(&(r * r.transpose()), &Mat3::identity()) < 1e-12);
        }
    }

    #[test]
    fn corrections_for_phase_flip() {
        for c in [0.1, 0.3, 0.7, 1.0] {
            let w = Mat3::from_diagonal(&Vec3::new(1.0 - c, c - 1.0, 1.0));
            let corr = bob_optimal_corrections(&w);
            let eff = Mat3::from_diagonal(&Vec3::new(1.0 - c, 1.0 - c, 1.0));
            assert!(max_abs_diff(&corr.effective, &eff) < 1e-15, "c = {c}");
            if c < 1.0 {
                assert_eq!(corr.resource_frame_choice(), Some(Bell::Phi1));
            }
        }
    }

    #[test]
    fn corrections_for_zero_resource() {
        let c = bob_optimal_corrections(&Mat3::zeros());
        assert_eq!(c.choice, Bell::Phi1);
        assert_eq!(c.resource_frame_choice(), Some(Bell::Phi1));
        assert_eq!(c.effective, Mat3::zeros());
    }

    #[test]
    fn ideal_teleportation_is_perfect() {
        let p = StdTeleport::ideal();
        for t in fibonacci_sphere(500) {
            for b in p.sqt_branches(&t).unwrap() {
                assert!((b.prob - 0.25).abs() < 1e-15);
                assert!((fidelity(&t, &b.out) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bell_diagonal_fidelity_is_quadratic_form() {
        for (w1, w2, w3) in [
            (0.9, -0.5, 0.2),
            (0.3, 0.3, 0.3),
            (-0.2, 0.1, 0.6),
            (0.5, -0.5, 0.5),
        ] {
            let p = StdTeleport::new(bell_diagonal(w1, w2, w3));
            let eff = p.corrections().effective;
            assert!(max_abs_diff(&eff, &Mat3::from_diagonal(&eff.diagonal())) == 0.0);
            for t in fibonacci_sphere(500) {
                let q = 0.5 * (1.0 + t.dot(&(eff * t)));
                for b in p.sqt_branches(&t).unwrap() {
                    assert!((b.prob - 0.25).abs() < 1e-15);
                    assert!((fidelity(&t, &b.out) - q).abs() < 1e-12);
                }
            }
        }
    }

    fn check_branch_invariants(p: &dyn ProtocolEnsemble) {
        for t in fibonacci_sphere(500) {
            let bs = p.branches(&t).unwrap();
            assert_eq!(bs.len(), p.branch_count());
            let total: f64 = bs.iter().map(|b| b.prob).sum();
            assert!((total - 1.0).abs() < 1e-12);
            assert!(bs
                .iter()
                .all(|b| b.prob >= -1e-14 && b.out.norm() <= 1.0 + 1e-9));
        }
    }

    #[test]
    fn branch_invariants_for_all_protocols() {
        check_branch_invariants(&MeasurePrepare::canonical_optimal());
        check_branch_invariants(&MeasurePrepare::six_axis(|s| s * 0.4));
        check_branch_invariants(&StdTeleport::ideal());
        check_branch_invariants(&StdTeleport::new(bell_diagonal(0.9, -0.5, 0.2)));
        let pf = apply_local_channels(
            &phase_flip(0.2).unwrap(),
            &phase_flip(0.4).unwrap(),
            Bell::Phi1,
        );
        check_branch_invariants(&StdTeleport::new(pf));
        let dp = apply_local_channels(
            &depolarizing(0.2).unwrap(),
            &depolarizing(0.3).unwrap(),
            Bell::Phi1,
        );
        check_branch_invariants(&StdTeleport::new(dp));
        for (pa, pb) in [(0.3, 0.85), (0.85, 0.3), (0.5, 0.5), (1.0, 0.4), (0.0, 1.0)] {
            let ad = apply_local_channels(
                &amplitude_damping(pa).unwrap(),
                &amplitude_damping(pb).unwrap(),
                Bell::Phi1,
            );
            check_branch_invariants(&StdTeleport::new(ad));
        }
    }

    /// Output of a damped Bell pair with the corrections applied, written in
    /// closed form: `(p_B [w_j]₃₃ k̂ + w₁ w_ad t) / (1 + p_A [w_j]₃₃ t₃)`.
    fn damped_output(pa: f64, pb: f64, j: Bell, t: &Vec3) -> (f64, Vec3) {
        let c = ((1.0 - pa) * (1.0 - pb)).sqrt();
        let sign = j.diagonal().z;
        let w1wad = Mat3::from_diagonal(&Vec3::new(c, c, c * c + pa * pb));
        let den = 1.0 + pa * sign * t.z;
        (den / 4.0, (Vec3::z() * (pb * sign) + w1wad * t) / den)
    }

    #[test]
    fn amplitude_damped_branches_match_closed_form() {
        for (pa, pb) in [
            (0.3, 0.85),
            (0.85, 0.3),
            (0.5, 0.5),
            (0.5, 0.2),
            (0.05, 0.95),
            (1.0, 0.4),
            (0.0, 1.0),
        ] {
            let ad = apply_local_channels(
                &amplitude_damping(pa).unwrap(),
                &amplitude_damping(pb).unwrap(),
                Bell::Phi1,
            );
            let p = StdTeleport::new(ad);
            for t in fibonacci_sphere(500) {
                let bs = p.sqt_branches(&t).unwrap();
                for (b, j) in bs.iter().zip(Bell::ALL) {
                    let (prob, out) = damped_output(pa, pb, j, &t);
                    assert!((b.prob - prob).abs() < 1e-14);
                    assert!((b.out - out).abs().max() < 1e-12, "({pa},{pb}) {j:?}");
                }
            }
        }
    }

    #[test]
    fn classical_average_matches_closed_form() {
        let p = MeasurePrepare::six_axis(|s| s * 0.8);
        let closed = 0.5
            * (1.0
                + p.elements()
                    .iter()
                    .map(|e| 0.5 * e.c2 * e.r.dot(&e.s))
                    .sum::<f64>()
                    / 3.0);
        let mut rng = stream_rng(5, 0);
        let n = 1_000_000;
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        use rand::Rng;
        for _ in 0..n {
            let t = sample_unit_sphere(&mut rng);
            let bs = p.mp_branches(&t);
            let mut u: f64 = rng.random();
            let mut chosen = bs.len() - 1;
            for (i, b) in bs.iter().enumerate() {
                if u < b.prob {
                    chosen = i;
                    break;
                }
                u -= b.prob;
            }
            let f = fidelity(&t, &bs[chosen].out);
            sum += f;
            sum2 += f * f;
        }
        let mean = sum / n as f64;
        let se = ((sum2 / n as f64 - mean * mean) / n as f64).sqrt();
        assert!(
            (mean - closed).abs() < 3.0 * se,
            "{mean} vs {closed} (se {se})"
        );
    }
}
