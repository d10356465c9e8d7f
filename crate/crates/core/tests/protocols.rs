use proptest::prelude::*;
use telefid::mathkit::{fibonacci_sphere, so3_svd};
use telefid::protocols::{fidelity, MeasurePrepare, ProtocolEnsemble, StdTeleport};
use telefid::states::{
    amplitude_damping, apply_local_channels, bell_diagonal, bell_weights,
    is_physical_bell_diagonal, is_separable_bell_diagonal, is_separable_ppt, Bell,
};
use telefid::{Mat3, Vec3};

fn branch_invariants(p: &dyn ProtocolEnsemble) {
    for t in fibonacci_sphere(64) {
        let bs = p.branches(&t).unwrap();
        assert_eq!(bs.len(), p.branch_count());
        let total: f64 = bs.iter().map(|b| b.prob).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for b in &bs {
            assert!(b.prob >= -1e-15);
            assert!(b.out.norm() <= 1.0 + 1e-12);
            let f = fidelity(&t, &b.out);
            assert!((-1e-12..=1.0 + 1e-12).contains(&f));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn so3_svd_reconstructs(v in prop::array::uniform9(-1.0f64..1.0)) {
        let m = Mat3::from_row_slice(&v);
        let s = so3_svd(&m);
        prop_assert!((s.reconstruct() - m).abs().max() < 1e-12);
        prop_assert!((s.o1.determinant() - 1.0).abs() < 1e-12);
        prop_assert!((s.o2.determinant() - 1.0).abs() < 1e-12);
        prop_assert!(s.d.x >= s.d.y && s.d.y >= s.d.z.abs() - 1e-12);
    }

    #[test]
    fn bell_diagonal_teleportation_is_a_valid_ensemble(l in prop::array::uniform4(0.0f64..1.0)) {
        let total: f64 = l.iter().sum();
        prop_assume!(total > 1e-6);
        let w: Vec3 = Bell::ALL.iter().zip(l).map(|(k, x)| k.diagonal() * (x / total)).sum();
        prop_assert!(is_physical_bell_diagonal(w.x, w.y, w.z));
        let weights = bell_weights(w.x, w.y, w.z);
        for (a, b) in weights.iter().zip(l) {
            prop_assert!((a - b / total).abs() < 1e-12);
        }
        branch_invariants(&StdTeleport::new(bell_diagonal(w.x, w.y, w.z)));
    }

    #[test]
    fn damped_resources_are_valid_ensembles(pa in 0.0f64..=1.0, pb in 0.0f64..=1.0) {
        let res = apply_local_channels(
            &amplitude_damping(pa).unwrap(),
            &amplitude_damping(pb).unwrap(),
            Bell::Phi1,
        );
        prop_assert!(res.min_eigenvalue() >= -1e-12);
        branch_invariants(&StdTeleport::new(res));
    }

    #[test]
    fn measure_prepare_is_a_valid_ensemble(r in -1.0f64..=1.0) {
        branch_invariants(&MeasurePrepare::six_axis(|s| s * r));
    }
}

#[test]
fn ppt_and_octahedron_agree_on_the_tetrahedron_edges() {
    for k in Bell::ALL {
        let w = k.diagonal();
        assert!(!is_separable_ppt(&bell_diagonal(w.x, w.y, w.z)));
        assert!(!is_separable_bell_diagonal(w.x, w.y, w.z).unwrap());
    }
    let centre = bell_diagonal(0.0, 0.0, 0.0);
    assert!(is_separable_ppt(&centre));
}

#[test]
fn ideal_teleportation_picks_phi1() {
    let p = StdTeleport::ideal();
    assert_eq!(p.corrections().resource_frame_choice(), Some(Bell::Phi1));
    for t in fibonacci_sphere(32) {
        for b in p.branches(&t).unwrap() {
            assert!((fidelity(&t, &b.out) - 1.0).abs() < 1e-12);
        }
    }
}
