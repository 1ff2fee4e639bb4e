use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use symconc::matcore::{
    kron, partial_trace, partial_transpose, realign, swap_operator, trace, trace_norm, unrealign,
    CMatrix, Subsystem,
};

fn cmatrix(rows: usize, cols: usize) -> impl Strategy<Value = CMatrix> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols).prop_map(move |v| {
        CMatrix::from_iterator(rows, cols, v.into_iter().map(|(a, b)| Complex64::new(a, b)))
    })
}

fn square(max: usize) -> impl Strategy<Value = CMatrix> {
    (1..=max).prop_flat_map(|n| cmatrix(n, n))
}

/// Trace norm through the eigenvalues of the Hermitian dilation
/// `[[0, A], [A^dagger, 0]]`, which are `+-` the singular values of `A`.
fn dilation_trace_norm(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut h = CMatrix::zeros(2 * n, 2 * n);
    h.view_mut((0, n), (n, n)).copy_from(a);
    h.view_mut((n, 0), (n, n)).copy_from(&a.adjoint());
    // Real symmetric embedding of the complex Hermitian dilation.
    let m = 2 * n;
    let big = DMatrix::<f64>::from_fn(2 * m, 2 * m, |r, c| {
        let z = h[(r % m, c % m)];
        match (r < m, c < m) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    // Every eigenvalue appears twice in the embedding and once with each
    // sign in the dilation.
    big.symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|v| v.abs())
        .sum::<f64>()
        / 4.0
}

fn random_unitary(n: usize, seed: u64) -> CMatrix {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let g = CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    g.qr().q()
}

proptest! {
    #[test]
    fn trace_norm_matches_dilation(a in square(5)) {
        let tn = trace_norm(&a).unwrap();
        prop_assert!((tn - dilation_trace_norm(&a)).abs() < 1e-10 * (1.0 + tn));
    }

    #[test]
    fn trace_norm_unitary_invariance(a in cmatrix(4, 4), s1 in any::<u64>(), s2 in any::<u64>()) {
        let u = random_unitary(4, s1);
        let v = random_unitary(4, s2);
        let lhs = trace_norm(&(&u * &a * &v)).unwrap();
        prop_assert!((lhs - trace_norm(&a).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn trace_norm_triangle_and_homogeneity(a in cmatrix(3, 3), b in cmatrix(3, 3), s in -3.0f64..3.0) {
        let na = trace_norm(&a).unwrap();
        let nb = trace_norm(&b).unwrap();
        prop_assert!(trace_norm(&(&a + &b)).unwrap() <= na + nb + 1e-10);
        prop_assert!((trace_norm(&a.scale(s)).unwrap() - s.abs() * na).abs() < 1e-10);
    }

    #[test]
    fn partial_trace_preserves_trace(rho in cmatrix(6, 6)) {
        let t = trace(&rho);
        for keep in [Subsystem::First, Subsystem::Second] {
            let r = partial_trace(&rho, keep, 2, 3).unwrap();
            prop_assert!((trace(&r) - t).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_of_product(a in cmatrix(2, 2), b in cmatrix(3, 3)) {
        let ab = kron(&a, &b);
        let ra = partial_trace(&ab, Subsystem::First, 2, 3).unwrap();
        let expected = &a * trace(&b);
        prop_assert!((ra - expected).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn realign_roundtrip(rho in cmatrix(6, 6)) {
        let r = realign(&rho, 2, 3).unwrap();
        prop_assert_eq!(r.shape(), (4, 9));
        let back = unrealign(&r, 2, 3).unwrap();
        prop_assert!((back - &rho).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn realign_of_product_is_rank_one(a in cmatrix(3, 3), b in cmatrix(3, 3)) {
        let r = realign(&kron(&a, &b), 3, 3).unwrap();
        let sv = r.singular_values();
        let tn = sv.sum();
        // vec(A) vec(B)^T has trace norm ||A||_F ||B||_F.
        prop_assert!((tn - a.norm() * b.norm()).abs() < 1e-10 * (1.0 + tn));
    }

    #[test]
    fn partial_transpose_is_involution(rho in cmatrix(9, 9)) {
        let twice = partial_transpose(&partial_transpose(&rho, 3, 3).unwrap(), 3, 3).unwrap();
        prop_assert!((twice - &rho).iter().all(|z| z.norm() < 1e-15));
    }
}

#[test]
fn swap_operator_swaps() {
    let d = 3;
    let f = swap_operator(d);
    let a = CMatrix::from_fn(d, d, |i, j| Complex64::new(i as f64, j as f64));
    let b = CMatrix::from_fn(d, d, |i, j| Complex64::new((i * j) as f64, 1.0));
    let lhs = &f * kron(&a, &b) * &f;
    assert!((lhs - kron(&b, &a)).iter().all(|z| z.norm() < 1e-14));
}
