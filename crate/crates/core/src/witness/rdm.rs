use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{eigh_dense, inner, norm, ComplexMatrix};

/// Allowed deviation of `‖state‖` from one.
pub const NORM_TOL: f64 = 1e-8;

/// Composite particle-hole index `(site, bra level, ket level) ↦ 9p + 3α + β`.
pub fn ph_index(site: usize, alpha: usize, beta: usize) -> usize {
    9 * site + 3 * alpha + beta
}

pub(crate) fn sites_for_dim(dim: usize) -> Option<usize> {
    let mut n = 0;
    let mut d = 1usize;
    while d < dim {
        d *= 3;
        n += 1;
    }
    (d == dim).then_some(n)
}

pub(crate) fn check_state(state: &[C64], n: usize) -> Result<()> {
    let dim = 3usize.pow(n as u32);
    if state.len() != dim {
        return Err(Error::validation(format!(
            "state has {} amplitudes, {n} sites need {dim}",
            state.len()
        )));
    }
    let nrm = norm(state);
    if (nrm - 1.0).abs() > NORM_TOL {
        return Err(Error::validation(format!("state is not normalized (norm {nrm})")));
    }
    Ok(())
}

/// `(|α⟩⟨β|)_site ψ`
pub fn apply_transition(state: &[C64], n: usize, site: usize, alpha: usize, beta: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); state.len()];
    let stride = 3usize.pow((n - 1 - site) as u32);
    let block = 3 * stride;
    for base in (0..state.len()).step_by(block) {
        for lo in 0..stride {
            out[base + alpha * stride + lo] = state[base + beta * stride + lo];
        }
    }
    out
}

/// Site-local one-body matrices `D_p[α, β] = ⟨ψ| (|α⟩⟨β|)_p |ψ⟩`.
pub fn one_body_rdm(state: &[C64], n: usize) -> Result<Vec<ComplexMatrix>> {
    check_state(state, n)?;
    let mut blocks = Vec::with_capacity(n);
    for p in 0..n {
        let stride = 3usize.pow((n - 1 - p) as u32);
        let mut d = ComplexMatrix::zeros(3, 3);
        for base in (0..state.len()).step_by(3 * stride) {
            for lo in 0..stride {
                for a in 0..3 {
                    let bra = state[base + a * stride + lo].conj();
                    for b in 0..3 {
                        d[(a, b)] += bra * state[base + b * stride + lo];
                    }
                }
            }
        }
        blocks.push(d);
    }
    Ok(blocks)
}

/// Particle-hole reduced density matrix on `9N` composite indices.
#[derive(Clone, Debug)]
pub struct PhRdm {
    pub n_sites: usize,
    pub matrix: ComplexMatrix,
}

impl PhRdm {
    pub fn element(&self, row: (usize, usize, usize), col: (usize, usize, usize)) -> C64 {
        self.matrix[(ph_index(row.0, row.1, row.2), ph_index(col.0, col.1, col.2))]
    }

    /// The `9 × 9` block coupling sites `p` and `q`.
    pub fn block(&self, p: usize, q: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(9, 9, |r, c| self.matrix[(9 * p + r, 9 * q + c)])
    }
}

/// `G[(p,α,β),(q,γ,δ)] = ⟨ψ| E^p_{βα} E^q_{γδ} |ψ⟩` with `E_{αβ} = |α⟩⟨β|`.
///
/// Each entry is the overlap of `E^p_{αβ}ψ` with `E^q_{γδ}ψ`, so only `9N`
/// state-sized vectors are formed.
pub fn ph_rdm(state: &[C64], n: usize) -> Result<PhRdm> {
    check_state(state, n)?;
    let size = 9 * n;
    let images: Vec<Vec<C64>> = (0..size)
        .into_par_iter()
        .map(|k| apply_transition(state, n, k / 9, (k % 9) / 3, k % 3))
        .collect();
    let rows: Vec<Vec<C64>> = (0..size)
        .into_par_iter()
        .map(|a| {
            (0..size)
                .map(|b| {
                    if b < a {
                        C64::new(0.0, 0.0)
                    } else {
                        inner(&images[a], &images[b])
                    }
                })
                .collect()
        })
        .collect();
    let mut m = ComplexMatrix::zeros(size, size);
    for a in 0..size {
        for b in a..size {
            m[(a, b)] = rows[a][b];
            m[(b, a)] = rows[a][b].conj();
        }
    }
    Ok(PhRdm { n_sites: n, matrix: m })
}

/// Removes the state-to-state projection: `G̃ = G − conj(D_a) D_b`.
pub fn modified_ph_rdm(g: &PhRdm, d1: &[ComplexMatrix]) -> Result<PhRdm> {
    let n = g.n_sites;
    if d1.len() != n || g.matrix.rows() != 9 * n || d1.iter().any(|d| d.rows() != 3 || d.cols() != 3) {
        return Err(Error::validation(
            "particle-hole RDM and one-body blocks disagree in shape",
        ));
    }
    let flat: Vec<C64> = (0..9 * n).map(|k| d1[k / 9][((k % 9) / 3, k % 3)]).collect();
    let matrix = ComplexMatrix::from_fn(9 * n, 9 * n, |a, b| g.matrix[(a, b)] - flat[a].conj() * flat[b]);
    Ok(PhRdm { n_sites: n, matrix })
}

/// Largest eigenvalue of the modified particle-hole RDM.
#[derive(Clone, Debug)]
pub struct Witness {
    pub lambda: f64,
    pub eigenvector: Vec<C64>,
    /// Full ascending spectrum of `G̃`.
    pub spectrum: Vec<f64>,
}

pub fn lambda_witness(gt: &PhRdm) -> Result<Witness> {
    let eig = eigh_dense(&gt.matrix)?;
    let last = eig.len() - 1;
    Ok(Witness {
        lambda: eig.values[last],
        eigenvector: eig.vectors[last].clone(),
        spectrum: eig.values,
    })
}

/// `ph_rdm`, `one_body_rdm`, `modified_ph_rdm` and `lambda_witness` in one go.
pub fn witness_of_state(state: &[C64], n: usize) -> Result<Witness> {
    let g = ph_rdm(state, n)?;
    let d1 = one_body_rdm(state, n)?;
    lambda_witness(&modified_ph_rdm(&g, &d1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis_state(levels: &[usize]) -> Vec<C64> {
        let n = levels.len();
        let mut v = vec![C64::new(0.0, 0.0); 3usize.pow(n as u32)];
        let idx = levels.iter().fold(0, |acc, &l| acc * 3 + l);
        v[idx] = C64::new(1.0, 0.0);
        v
    }

    #[test]
    fn all_zero_state_one_body_blocks() {
        let d = one_body_rdm(&basis_state(&[1, 1, 1]), 3).unwrap();
        for block in d {
            assert_eq!(block, ComplexMatrix::from_diag(&[0.0, 1.0, 0.0]));
        }
    }

    #[test]
    fn plus_one_on_site_zero() {
        let d = one_body_rdm(&basis_state(&[0, 1]), 2).unwrap();
        assert_eq!(d[0], ComplexMatrix::from_diag(&[1.0, 0.0, 0.0]));
        assert_eq!(d[1], ComplexMatrix::from_diag(&[0.0, 1.0, 0.0]));
    }

    #[test]
    fn unnormalized_state_rejected() {
        let mut v = basis_state(&[1, 1]);
        v[0] = C64::new(0.1, 0.0);
        assert!(matches!(one_body_rdm(&v, 2), Err(Error::Validation(_))));
        assert!(ph_rdm(&v, 2).is_err());
        assert!(ph_rdm(&basis_state(&[1]), 2).is_err());
    }

    #[test]
    fn spot_value_single_zero_state() {
        let g = ph_rdm(&basis_state(&[1]), 1).unwrap();
        assert!((g.element((0, 0, 1), (0, 0, 1)) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(g.element((0, 1, 0), (0, 1, 0)).norm() < 1e-15);
    }

    #[test]
    fn product_state_cross_blocks_vanish_after_subtraction() {
        let g = ph_rdm(&basis_state(&[0, 1, 2]), 3).unwrap();
        let d = one_body_rdm(&basis_state(&[0, 1, 2]), 3).unwrap();
        let gt = modified_ph_rdm(&g, &d).unwrap();
        for p in 0..3 {
            for q in 0..3 {
                if p != q {
                    assert!(gt.block(p, q).norm_max() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn all_zero_state_witness_is_one() {
        let w = witness_of_state(&basis_state(&[1, 1, 1]), 3).unwrap();
        assert!((w.lambda - 1.0).abs() < 1e-12);
        // Top eigenvectors live on |α⟩⟨0| components (ket level 1) only.
        for (k, c) in w.eigenvector.iter().enumerate() {
            if k % 3 != 1 {
                assert!(c.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn sites_for_dim_detects_powers_of_three() {
        assert_eq!(sites_for_dim(1), Some(0));
        assert_eq!(sites_for_dim(27), Some(3));
        assert_eq!(sites_for_dim(28), None);
    }
}
