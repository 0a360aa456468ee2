use num_complex::Complex64 as C64;

use super::rdm::{apply_transition, check_state, NORM_TOL};
use crate::error::{Error, Result};
use crate::linalg::{axpy, inner, norm};
use crate::model::SiteOperator;

/// One-body operator `T̂ = Σ c_{pαβ} (|α⟩⟨β|)_p` built from a top
/// eigenvector of the modified particle-hole RDM.
#[derive(Clone, Debug)]
pub struct CollectiveOperator {
    pub n_sites: usize,
    /// Unit-norm coefficients indexed like the particle-hole RDM.
    pub coefficients: Vec<C64>,
}

pub fn collective_operator(eigenvector: &[C64]) -> Result<CollectiveOperator> {
    if eigenvector.is_empty() || !eigenvector.len().is_multiple_of(9) {
        return Err(Error::validation(format!(
            "eigenvector length {} is not a multiple of 9",
            eigenvector.len()
        )));
    }
    let nrm = norm(eigenvector);
    if !(nrm > 0.0) {
        return Err(Error::validation("zero eigenvector"));
    }
    Ok(CollectiveOperator {
        n_sites: eigenvector.len() / 9,
        coefficients: eigenvector.iter().map(|z| z / nrm).collect(),
    })
}

impl CollectiveOperator {
    /// `T̂ ψ`
    pub fn apply(&self, state: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); state.len()];
        for (k, &c) in self.coefficients.iter().enumerate() {
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            let img = apply_transition(state, self.n_sites, k / 9, (k % 9) / 3, k % 3);
            axpy(c, &img, &mut out);
        }
        out
    }

    /// The same operator as a sum of site-local terms.
    pub fn to_site_operator(&self) -> Result<SiteOperator> {
        let mut op = SiteOperator::new(self.n_sites);
        for p in 0..self.n_sites {
            let local = crate::linalg::ComplexMatrix::from_fn(3, 3, |a, b| self.coefficients[9 * p + 3 * a + b]);
            op.add_local(p, &local, C64::new(1.0, 0.0))?;
        }
        Ok(op)
    }
}

/// Both sides of `√λ ≈ |⟨g|T̂|e⟩|`.
#[derive(Clone, Copy, Debug)]
pub struct SqrtRelation {
    /// `⟨e|T̂† Q T̂|e⟩` with `Q = 1 − |e⟩⟨e|`.
    pub lambda: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// Share of `λ` carried by the ground state, in `[0, 1]`.
    pub ground_fraction: f64,
}

pub fn sqrt_relation_check(excited: &[C64], ground: &[C64], t_hat: &CollectiveOperator) -> Result<SqrtRelation> {
    let n = t_hat.n_sites;
    check_state(excited, n)?;
    check_state(ground, n)?;
    let te = t_hat.apply(excited);
    let mut qte = te.clone();
    axpy(-inner(excited, &te), excited, &mut qte);
    let lambda = inner(&qte, &qte).re;
    let rhs = inner(ground, &te).norm();
    let ground_fraction = if lambda > NORM_TOL * NORM_TOL {
        (inner(ground, &qte).norm_sqr() / lambda).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(SqrtRelation {
        lambda,
        lhs: lambda.max(0.0).sqrt(),
        rhs,
        ground_fraction,
    })
}
