use super::{Mat3, Vec3};

/// Singular value decomposition with both rotation factors in SO(3):
/// `m = o1 · diag(d) · o2ᵀ`, `det o1 = det o2 = +1`.
///
/// The price of proper rotations is that the last diagonal entry may be
/// negative; `d` is sorted by descending absolute value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct So3Svd {
    pub o1: Mat3,
    pub d: Vec3,
    pub o2: Mat3,
}

impl So3Svd {
    pub fn reconstruct(&self) -> Mat3 {
        self.o1 * Mat3::from_diagonal(&self.d) * self.o2.transpose()
    }
}

/// Computes an ordinary SVD and then moves reflections into the smallest
/// singular value: if `det U = −1` its last column and `d₃` are negated, and the
/// same for `V`.
///
/// Diagonal inputs bypass the iterative SVD: the factors are then exact signed
/// permutations, so conjugating a diagonal matrix by `o1` keeps it diagonal.
pub fn so3_svd(m: &Mat3) -> So3Svd {
    let (o1, d, o2) = if is_diagonal(m) {
        diagonal_factors(m)
    } else {
        general_factors(m)
    };
    fix_orientation(o1, d, o2)
}

fn is_diagonal(m: &Mat3) -> bool {
    (0..3).all(|i| (0..3).all(|j| i == j || m[(i, j)] == 0.0))
}

fn diagonal_factors(m: &Mat3) -> (Mat3, Vec3, Mat3) {
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| m[(b, b)].abs().total_cmp(&m[(a, a)].abs()));
    let mut o1 = Mat3::zeros();
    let mut o2 = Mat3::zeros();
    let mut d = Vec3::zeros();
    for (dst, &src) in order.iter().enumerate() {
        let v = m[(src, src)];
        o1[(src, dst)] = if v < 0.0 { -1.0 } else { 1.0 };
        o2[(src, dst)] = 1.0;
        d[dst] = v.abs();
    }
    (o1, d, o2)
}

fn general_factors(m: &Mat3) -> (Mat3, Vec3, Mat3) {
    let svd = m.svd(true, true);
    let u = svd.u.expect("requested U");
    let v = svd.v_t.expect("requested Vᵀ").transpose();
    let s = svd.singular_values;

    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));

    let mut o1 = Mat3::zeros();
    let mut o2 = Mat3::zeros();
    let mut d = Vec3::zeros();
    for (dst, &src) in order.iter().enumerate() {
        o1.set_column(dst, &u.column(src));
        o2.set_column(dst, &v.column(src));
        d[dst] = s[src];
    }
    (o1, d, o2)
}

fn fix_orientation(mut o1: Mat3, mut d: Vec3, mut o2: Mat3) -> So3Svd {
    if o1.determinant() < 0.0 {
        o1.column_mut(2).neg_mut();
        d[2] = -d[2];
    }
    if o2.determinant() < 0.0 {
        o2.column_mut(2).neg_mut();
        d[2] = -d[2];
    }
    So3Svd { o1, d, o2 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathkit::{max_abs_diff, stream_rng};
    use rand::Rng;

    fn check(m: &Mat3) -> So3Svd {
        let f = so3_svd(m);
        assert!(
            max_abs_diff(&f.reconstruct(), m) < 1e-10,
            "reconstruction of {m}"
        );
        assert!((f.o1.determinant() - 1.0).abs() < 1e-12);
        assert!((f.o2.determinant() - 1.0).abs() < 1e-12);
        assert!(f.d[0].abs() >= f.d[1].abs() && f.d[1].abs() >= f.d[2].abs());
        f
    }

    #[test]
    fn identity() {
        let f = check(&Mat3::identity());
        assert_eq!(f.d, Vec3::new(1.0, 1.0, 1.0));
    }

    #[test]
    fn bell_correlation_matrix() {
        let w1 = Mat3::from_diagonal(&Vec3::new(1.0, -1.0, 1.0));
        let f = check(&w1);
        // det w₁ = −1 forces exactly one negative entry.
        assert_eq!(f.d.iter().filter(|x| **x < 0.0).count(), 1);
        assert!(f.d.iter().all(|x| (x.abs() - 1.0).abs() < 1e-14));
    }

    #[test]
    fn rank_deficient() {
        check(&Mat3::zeros());
        check(&Mat3::from_diagonal(&Vec3::new(0.0, 0.0, 0.4)));
        check(&Mat3::new(1.0, 2.0, 3.0, 2.0, 4.0, 6.0, -1.0, -2.0, -3.0));
    }

    #[test]
    fn random_matrices_reconstruct() {
        let mut rng = stream_rng(2024, 0);
        for _ in 0..1000 {
            let m = Mat3::from_fn(|_, _| rng.random_range(-1.0..=1.0));
            check(&m);
        }
    }
}
