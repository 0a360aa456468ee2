#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinwit::linalg::{kron, ComplexMatrix};
use spinwit::C64;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_state(n: usize, rng: &mut impl Rng) -> Vec<C64> {
    let dim = 3usize.pow(n as u32);
    let mut v: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= nrm);
    v
}

pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let ah = a.adjoint();
    (&a + &ah).scale(c(0.5))
}

pub fn basis_state(levels: &[usize]) -> Vec<C64> {
    let n = levels.len();
    let mut v = vec![c(0.0); 3usize.pow(n as u32)];
    v[levels.iter().fold(0, |acc, &l| acc * 3 + l)] = c(1.0);
    v
}

/// `|α⟩⟨β|` as a 3×3 matrix.
pub fn unit(alpha: usize, beta: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(3, 3, |r, col| if r == alpha && col == beta { c(1.0) } else { c(0.0) })
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` by explicit Kronecker products.
pub fn embed_dense(op: &ComplexMatrix, site: usize, n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(1);
    for p in 0..n {
        let factor = if p == site {
            op.clone()
        } else {
            ComplexMatrix::identity(3)
        };
        m = kron(&m, &factor).unwrap();
    }
    m
}

pub fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn max_diff(x: &[C64], y: &[C64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    spinwit::linalg::eigh_dense(m).unwrap().values[0]
}

/// `E^p_{αβ}` for every composite index, as dense `3^N × 3^N` matrices.
pub fn dense_transitions(n: usize) -> Vec<ComplexMatrix> {
    (0..9 * n)
        .map(|k| embed_dense(&unit((k % 9) / 3, k % 3), k / 9, n))
        .collect()
}

pub fn expectation(state: &[C64], m: &ComplexMatrix) -> C64 {
    dot(state, &m.mat_vec(state))
}

/// `⟨ψ| E_a† E_b |ψ⟩` by dense operator products.
pub fn dense_ph_rdm(state: &[C64], n: usize) -> ComplexMatrix {
    let e = dense_transitions(n);
    ComplexMatrix::from_fn(9 * n, 9 * n, |a, b| expectation(state, &e[a].adjoint().matmul(&e[b])))
}
