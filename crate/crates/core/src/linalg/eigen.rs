use std::ops::Range;

use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Default gap (GHz) below which consecutive eigenvalues share a manifold.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-9;

/// Largest Hermitian defect accepted by the dense solver.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Ascending eigenpairs plus degeneracy grouping.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unit-norm eigenvectors, `vectors[i]` belongs to `values[i]`.
    pub vectors: Vec<Vec<C64>>,
    /// Half-open index ranges of (near-)degenerate eigenvalues, covering
    /// `0..values.len()` without overlap.
    pub manifolds: Vec<Range<usize>>,
}

impl EigenSystem {
    /// Sorts pairs ascending, fixes phases and groups with `tol`.
    pub fn new(mut pairs: Vec<(f64, Vec<C64>)>, tol: f64) -> Self {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (values, mut vectors): (Vec<f64>, Vec<Vec<C64>>) = pairs.into_iter().unzip();
        for v in &mut vectors {
            fix_phase(v);
        }
        let manifolds = group_degenerate(&values, tol);
        EigenSystem {
            values,
            vectors,
            manifolds,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn regroup(&mut self, tol: f64) {
        self.manifolds = group_degenerate(&self.values, tol);
    }

    /// Keeps only the first `count` pairs and regroups.
    pub fn truncate(&mut self, count: usize, tol: f64) {
        self.values.truncate(count);
        self.vectors.truncate(count);
        self.regroup(tol);
    }
}

/// Maximal runs of `values` whose consecutive gaps are at most `tol`.
pub fn group_degenerate(values: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > tol {
            if i > start {
                out.push(start..i);
            }
            start = i;
        }
    }
    out
}

/// Rotates `v` so its largest-magnitude entry (first on ties) is real positive.
pub fn fix_phase(v: &mut [C64]) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm_sqr();
        if m > best_mag * (1.0 + 1e-12) {
            best = i;
            best_mag = m;
        }
    }
    if best_mag <= 0.0 {
        return;
    }
    let z = v[best];
    let phase = z.conj() / z.norm();
    for x in v.iter_mut() {
        *x *= phase;
    }
    v[best] = C64::new(v[best].norm(), 0.0);
}

/// Full eigendecomposition of a dense Hermitian matrix.
pub fn eigh_dense(h: &ComplexMatrix) -> Result<EigenSystem> {
    eigh_dense_with_tol(h, DEFAULT_DEGENERACY_TOL)
}

pub fn eigh_dense_with_tol(h: &ComplexMatrix, degeneracy_tol: f64) -> Result<EigenSystem> {
    if !h.is_square() {
        return Err(Error::validation(format!(
            "eigh_dense needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let defect = h.hermitian_defect();
    let scale = h.norm_max().max(1.0);
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::validation(format!(
            "matrix is not Hermitian (max |M - M^dagger| = {defect:e})"
        )));
    }
    let n = h.rows();
    if n == 0 {
        return Ok(EigenSystem::new(Vec::new(), degeneracy_tol));
    }
    // Symmetrize so the solver sees an exactly Hermitian lower triangle.
    let m = faer::Mat::<faer::c64>::from_fn(n, n, |i, j| {
        let z = 0.5 * (h[(i, j)] + h[(j, i)].conj());
        faer::c64::new(z.re, z.im)
    });
    let evd = m
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| Error::NoConvergence {
            solver: "dense Hermitian eigensolver",
            iterations: 0,
        })?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let pairs = (0..n)
        .map(|k| {
            let value = s[k].re;
            let vec: Vec<C64> = (0..n)
                .map(|i| {
                    let z = u[(i, k)];
                    C64::new(z.re, z.im)
                })
                .collect();
            (value, vec)
        })
        .collect();
    Ok(EigenSystem::new(pairs, degeneracy_tol))
}

/// Eigenpairs of a small real symmetric matrix given as a dense array.
pub(crate) fn eigh_real_symmetric(a: &[f64], n: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let m = faer::Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (a[i * n + j] + a[j * n + i]));
    let evd = m
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| Error::NoConvergence {
            solver: "tridiagonal eigensolver",
            iterations: 0,
        })?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&x, &y| s[x].total_cmp(&s[y]));
    let values = idx.iter().map(|&k| s[k]).collect();
    let vectors = idx.iter().map(|&k| (0..n).map(|i| u[(i, k)]).collect()).collect();
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::norm;

    #[test]
    fn groups_from_doc_example() {
        let g = group_degenerate(&[0.0, 1.0, 1.0, 2.0], 1e-9);
        assert_eq!(g, vec![0..1, 1..3, 3..4]);
    }

    #[test]
    fn distinct_values_are_singletons() {
        let g = group_degenerate(&[0.0, 0.5, 1.0, 1.5], 1e-9);
        assert_eq!(g, vec![0..1, 1..2, 2..3, 3..4]);
        assert!(group_degenerate(&[], 1e-9).is_empty());
    }

    #[test]
    fn diagonal_spectrum_sorted() {
        let e = eigh_dense(&ComplexMatrix::from_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
        for v in &e.vectors {
            assert!((norm(v) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(eigh_dense(&m), Err(Error::Validation(_))));
        assert!(eigh_dense(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn phase_fix_makes_largest_entry_real_positive() {
        let mut v = vec![C64::new(0.1, 0.2), C64::new(0.0, -0.9), C64::new(0.3, 0.0)];
        fix_phase(&mut v);
        assert!(v[1].im.abs() < 1e-15 && v[1].re > 0.0);
        assert!((norm(&v) - (0.05f64 + 0.81 + 0.09).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn real_symmetric_helper_sorts() {
        let (vals, vecs) = eigh_real_symmetric(&[2.0, 1.0, 1.0, 2.0], 2).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
        assert!((vecs[0][0].abs() - vecs[0][1].abs()).abs() < 1e-12);
    }
}
