mod common;

use common::*;
use proptest::prelude::*;
use spinwit::linalg::{
    eig_lowest_k, eig_lowest_manifolds, eigh_dense, kron, ComplexMatrix, LanczosOptions, LinearOperator,
};
use spinwit::model::{chain_y, grid_2d, total_site_operator, GridPlane, DIPOLE_KAPPA_GHZ_NM3};
use spinwit::C64;

#[test]
fn dense_decomposition_reconstructs_matrix() {
    let mut r = rng(11);
    let h = random_hermitian(27, &mut r);
    let eig = eigh_dense(&h).unwrap();
    let rebuilt = ComplexMatrix::from_fn(27, 27, |i, j| {
        eig.values
            .iter()
            .zip(&eig.vectors)
            .map(|(l, v)| v[i] * v[j].conj() * *l)
            .sum()
    });
    assert!(rebuilt.max_abs_diff(&h) < 1e-12);
    for (a, va) in eig.vectors.iter().enumerate() {
        for (b, vb) in eig.vectors.iter().enumerate() {
            let expected = if a == b { 1.0 } else { 0.0 };
            assert!((dot(va, vb) - c(expected)).norm() < 1e-12);
        }
    }
    assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn dense_rejects_non_hermitian() {
    let mut m = ComplexMatrix::identity(3);
    m[(0, 1)] = c(1.0);
    assert!(eigh_dense(&m).is_err());
}

#[test]
fn lanczos_matches_dense_on_spin_hamiltonians() {
    for n in 2..=5 {
        for geom in [
            chain_y(n, 5.125).unwrap(),
            chain_y(n, 3.0).unwrap(),
            grid_2d(n, 5.125, GridPlane::Xy).unwrap(),
        ] {
            let op = total_site_operator(&geom, DIPOLE_KAPPA_GHZ_NM3).unwrap();
            let dense = eigh_dense(&op.to_dense().unwrap()).unwrap();
            let k = (2 * n + 2).min(op.hilbert_dim());
            let lz = eig_lowest_k(&op, k, 5).unwrap();
            for i in 0..k {
                assert!(
                    (lz.values[i] - dense.values[i]).abs() < 1e-8,
                    "n = {n}, i = {i}: {} vs {}",
                    lz.values[i],
                    dense.values[i]
                );
            }
            for (val, vec) in lz.values.iter().zip(&lz.vectors) {
                let hv = op.apply(vec);
                let res: f64 = hv
                    .iter()
                    .zip(vec)
                    .map(|(a, b)| (a - b * val).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(res < 1e-7, "residual {res}");
            }
        }
    }
}

#[test]
fn lanczos_resolves_uncoupled_degeneracy() {
    // kappa = 0: ground |000⟩ then a 6-fold single-flip manifold.
    let op = total_site_operator(&chain_y(3, 5.125).unwrap(), 0.0).unwrap();
    let eig = eig_lowest_manifolds(&op, 9, 3, &LanczosOptions::default()).unwrap();
    assert_eq!(eig.manifolds[0], 0..1);
    assert_eq!(eig.manifolds[1], 1..7);
    assert!((eig.values[0] + 5.74).abs() < 1e-9);
    assert!((eig.values[3] + 2.87).abs() < 1e-9);
    // The 12-fold double-flip manifold would be cut at 9, so it is dropped.
    assert_eq!(eig.len(), 7);
}

#[test]
fn lanczos_is_deterministic_per_seed() {
    let op = total_site_operator(&chain_y(4, 5.125).unwrap(), DIPOLE_KAPPA_GHZ_NM3).unwrap();
    let a = eig_lowest_k(&op, 6, 42).unwrap();
    let b = eig_lowest_k(&op, 6, 42).unwrap();
    assert_eq!(a.values, b.values);
    assert_eq!(a.vectors, b.vectors);
}

#[test]
fn lanczos_matches_dense_on_random_matrix() {
    let mut r = rng(3);
    let h = random_hermitian(81, &mut r);
    let dense = eigh_dense(&h).unwrap();
    let lz = eig_lowest_k(&h, 10, 1).unwrap();
    for i in 0..10 {
        assert!((lz.values[i] - dense.values[i]).abs() < 1e-8);
    }
}

fn small_matrix() -> impl Strategy<Value = (usize, Vec<(f64, f64)>)> {
    (1usize..5).prop_flat_map(|n| (Just(n), proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)))
}

fn to_matrix(n: usize, data: &[(f64, f64)]) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| {
        let (re, im) = data[i * n + j];
        C64::new(re, im)
    })
}

proptest! {
    #[test]
    fn kron_mixed_product((n, a) in small_matrix(), (m, b) in small_matrix()) {
        // (A ⊗ B)(A' ⊗ B') = AA' ⊗ BB' with A' = A†, B' = B†.
        let a = to_matrix(n, &a);
        let b = to_matrix(m, &b);
        let lhs = kron(&a, &b).unwrap().matmul(&kron(&a.adjoint(), &b.adjoint()).unwrap());
        let rhs = kron(&a.matmul(&a.adjoint()), &b.matmul(&b.adjoint())).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn kron_of_hermitian_is_hermitian((n, a) in small_matrix(), (m, b) in small_matrix()) {
        let a = to_matrix(n, &a);
        let b = to_matrix(m, &b);
        let ha = (&a + &a.adjoint()).scale(c(0.5));
        let hb = (&b + &b.adjoint()).scale(c(0.5));
        prop_assert!(kron(&ha, &hb).unwrap().hermitian_defect() < 1e-14);
    }

    #[test]
    fn operator_apply_is_linear(seed in 0u64..1000, s in -2.0f64..2.0) {
        let mut r = rng(seed);
        let op = total_site_operator(&chain_y(3, 4.0).unwrap(), DIPOLE_KAPPA_GHZ_NM3).unwrap();
        let x = random_state(3, &mut r);
        let y = random_state(3, &mut r);
        let z: Vec<C64> = x.iter().zip(&y).map(|(a, b)| a * s + b).collect();
        let lhs = op.apply(&z);
        let (ax, ay) = (op.apply(&x), op.apply(&y));
        let rhs: Vec<C64> = ax.iter().zip(&ay).map(|(a, b)| a * s + b).collect();
        prop_assert!(max_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn operator_is_self_adjoint(seed in 0u64..1000) {
        let mut r = rng(seed);
        let op = total_site_operator(&grid_2d(3, 5.125, GridPlane::Zy).unwrap(), DIPOLE_KAPPA_GHZ_NM3).unwrap();
        let x = random_state(3, &mut r);
        let y = random_state(3, &mut r);
        let lhs = dot(&x, &op.apply(&y));
        let rhs = dot(&op.apply(&x), &y);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }
}
