use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, LinearOperator, DEFAULT_DENSE_BUDGET_BYTES};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Sum of one-site (3×3) and two-site (9×9) terms on `n` spin-1 sites.
///
/// Basis states are indexed with site 0 as the most significant base-3 digit,
/// matching `op_0 ⊗ op_1 ⊗ … ⊗ op_{n-1}`. Level 0 is `|+1⟩`, 1 is `|0⟩`,
/// 2 is `|−1⟩`.
#[derive(Clone, Debug)]
pub struct SiteOperator {
    n: usize,
    local: Vec<[C64; 9]>,
    pairs: Vec<PairBlock>,
}

#[derive(Clone, Debug)]
struct PairBlock {
    i: usize,
    j: usize,
    /// Row `3a + b`, column `3c + d` for `|a b⟩⟨c d|` on sites (i, j).
    m: [C64; 81],
}

fn check_local(op: &ComplexMatrix) -> Result<()> {
    if op.rows() != 3 || op.cols() != 3 {
        return Err(Error::validation(format!(
            "site-local operator must be 3x3, got {}x{}",
            op.rows(),
            op.cols()
        )));
    }
    Ok(())
}

impl SiteOperator {
    pub fn new(n: usize) -> Self {
        SiteOperator {
            n,
            local: vec![[ZERO; 9]; n],
            pairs: Vec::new(),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn hilbert_dim(&self) -> usize {
        3usize.pow(self.n as u32)
    }

    /// Adds `coeff · op` acting on `site`.
    pub fn add_local(&mut self, site: usize, op: &ComplexMatrix, coeff: C64) -> Result<()> {
        check_local(op)?;
        if site >= self.n {
            return Err(Error::validation(format!(
                "site {site} out of range for {} sites",
                self.n
            )));
        }
        for (dst, src) in self.local[site].iter_mut().zip(op.as_slice()) {
            *dst += coeff * src;
        }
        Ok(())
    }

    /// Adds `coeff · a⁽ⁱ⁾ b⁽ʲ⁾`.
    pub fn add_pair(&mut self, i: usize, j: usize, a: &ComplexMatrix, b: &ComplexMatrix, coeff: C64) -> Result<()> {
        check_local(a)?;
        check_local(b)?;
        if i == j || i >= self.n || j >= self.n {
            return Err(Error::validation(format!(
                "invalid site pair ({i}, {j}) for {} sites",
                self.n
            )));
        }
        let (i, j, a, b) = if i < j { (i, j, a, b) } else { (j, i, b, a) };
        let pos = match self.pairs.binary_search_by(|p| (p.i, p.j).cmp(&(i, j))) {
            Ok(pos) => pos,
            Err(pos) => {
                self.pairs.insert(pos, PairBlock { i, j, m: [ZERO; 81] });
                pos
            }
        };
        let block = &mut self.pairs[pos].m;
        for ra in 0..3 {
            for rb in 0..3 {
                for ca in 0..3 {
                    for cb in 0..3 {
                        block[(3 * ra + rb) * 9 + 3 * ca + cb] += coeff * a[(ra, ca)] * b[(rb, cb)];
                    }
                }
            }
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &SiteOperator, coeff: C64) {
        assert_eq!(self.n, other.n);
        for (dst, src) in self.local.iter_mut().zip(&other.local) {
            for (d, s) in dst.iter_mut().zip(src) {
                *d += coeff * s;
            }
        }
        for p in &other.pairs {
            let pos = match self.pairs.binary_search_by(|q| (q.i, q.j).cmp(&(p.i, p.j))) {
                Ok(pos) => pos,
                Err(pos) => {
                    self.pairs.insert(
                        pos,
                        PairBlock {
                            i: p.i,
                            j: p.j,
                            m: [ZERO; 81],
                        },
                    );
                    pos
                }
            };
            for (d, s) in self.pairs[pos].m.iter_mut().zip(&p.m) {
                *d += coeff * s;
            }
        }
    }

    /// Largest Hermitian defect over all blocks, which bounds the defect of
    /// the assembled operator's entries.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for m in &self.local {
            for r in 0..3 {
                for c in 0..3 {
                    worst = worst.max((m[3 * r + c] - m[3 * c + r].conj()).norm());
                }
            }
        }
        for p in &self.pairs {
            for r in 0..9 {
                for c in 0..9 {
                    worst = worst.max((p.m[9 * r + c] - p.m[9 * c + r].conj()).norm());
                }
            }
        }
        worst
    }

    fn stride(&self, site: usize) -> usize {
        3usize.pow((self.n - 1 - site) as u32)
    }

    /// Visits every `(base, stride)` with the digit at `site` equal to zero.
    fn for_each_local_base(&self, site: usize, mut f: impl FnMut(usize)) {
        let s = self.stride(site);
        let hi_count = 3usize.pow(site as u32);
        for hi in 0..hi_count {
            for lo in 0..s {
                f(hi * 3 * s + lo);
            }
        }
    }

    fn for_each_pair_base(&self, i: usize, j: usize, mut f: impl FnMut(usize)) {
        let si = self.stride(i);
        let sj = self.stride(j);
        let hi_count = 3usize.pow(i as u32);
        let mid_count = 3usize.pow((j - i - 1) as u32);
        for hi in 0..hi_count {
            for mid in 0..mid_count {
                for lo in 0..sj {
                    f(hi * 3 * si + mid * 3 * sj + lo);
                }
            }
        }
    }

    /// Assembles the full `3^n × 3^n` matrix under the default memory budget.
    pub fn to_dense(&self) -> Result<ComplexMatrix> {
        let dim = self.hilbert_dim();
        let requested = (dim as u128).pow(2) * std::mem::size_of::<C64>() as u128;
        if requested > DEFAULT_DENSE_BUDGET_BYTES {
            return Err(Error::Capacity {
                requested,
                budget: DEFAULT_DENSE_BUDGET_BYTES,
            });
        }
        let mut out = ComplexMatrix::zeros(dim, dim);
        for (site, m) in self.local.iter().enumerate() {
            let s = self.stride(site);
            let nz: Vec<(usize, usize, C64)> = nonzeros(m, 3);
            if nz.is_empty() {
                continue;
            }
            self.for_each_local_base(site, |base| {
                for &(r, c, v) in &nz {
                    out[(base + r * s, base + c * s)] += v;
                }
            });
        }
        for p in &self.pairs {
            let (si, sj) = (self.stride(p.i), self.stride(p.j));
            let nz = nonzeros(&p.m, 9);
            if nz.is_empty() {
                continue;
            }
            let off = |k: usize| (k / 3) * si + (k % 3) * sj;
            self.for_each_pair_base(p.i, p.j, |base| {
                for &(r, c, v) in &nz {
                    out[(base + off(r), base + off(c))] += v;
                }
            });
        }
        Ok(out)
    }
}

fn nonzeros(m: &[C64], width: usize) -> Vec<(usize, usize, C64)> {
    m.iter()
        .enumerate()
        .filter(|(_, v)| **v != ZERO)
        .map(|(k, &v)| (k / width, k % width, v))
        .collect()
}

impl LinearOperator for SiteOperator {
    fn dim(&self) -> usize {
        self.hilbert_dim()
    }

    fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        let dim = self.hilbert_dim();
        assert_eq!(x.len(), dim);
        assert_eq!(y.len(), dim);
        y.iter_mut().for_each(|z| *z = ZERO);
        for (site, m) in self.local.iter().enumerate() {
            let nz = nonzeros(m, 3);
            if nz.is_empty() {
                continue;
            }
            let s = self.stride(site);
            self.for_each_local_base(site, |base| {
                let xs = [x[base], x[base + s], x[base + 2 * s]];
                for &(r, c, v) in &nz {
                    y[base + r * s] += v * xs[c];
                }
            });
        }
        for p in &self.pairs {
            let nz = nonzeros(&p.m, 9);
            if nz.is_empty() {
                continue;
            }
            let (si, sj) = (self.stride(p.i), self.stride(p.j));
            let offs: [usize; 9] = std::array::from_fn(|k| (k / 3) * si + (k % 3) * sj);
            self.for_each_pair_base(p.i, p.j, |base| {
                let xs: [C64; 9] = std::array::from_fn(|k| x[base + offs[k]]);
                for &(r, c, v) in &nz {
                    y[base + offs[r]] += v * xs[c];
                }
            });
        }
    }
}

/// A many-body operator on `3^n` states: dense when small, matrix-free above.
#[derive(Clone, Debug)]
pub enum ManyBodyOperator {
    Dense { n_sites: usize, matrix: ComplexMatrix },
    MatrixFree(SiteOperator),
}

impl ManyBodyOperator {
    /// Materializes `op` densely when its dimension is at most `dense_max_dim`.
    pub fn from_site_operator(op: SiteOperator, dense_max_dim: usize) -> Result<Self> {
        if op.hilbert_dim() <= dense_max_dim {
            Ok(ManyBodyOperator::Dense {
                n_sites: op.n_sites(),
                matrix: op.to_dense()?,
            })
        } else {
            Ok(ManyBodyOperator::MatrixFree(op))
        }
    }

    pub fn n_sites(&self) -> usize {
        match self {
            ManyBodyOperator::Dense { n_sites, .. } => *n_sites,
            ManyBodyOperator::MatrixFree(op) => op.n_sites(),
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, ManyBodyOperator::Dense { .. })
    }

    pub fn as_dense(&self) -> Option<&ComplexMatrix> {
        match self {
            ManyBodyOperator::Dense { matrix, .. } => Some(matrix),
            ManyBodyOperator::MatrixFree(_) => None,
        }
    }

    pub fn to_dense(&self) -> Result<ComplexMatrix> {
        match self {
            ManyBodyOperator::Dense { matrix, .. } => Ok(matrix.clone()),
            ManyBodyOperator::MatrixFree(op) => op.to_dense(),
        }
    }

    pub fn hermitian_defect(&self) -> f64 {
        match self {
            ManyBodyOperator::Dense { matrix, .. } => matrix.hermitian_defect(),
            ManyBodyOperator::MatrixFree(op) => op.hermitian_defect(),
        }
    }
}

impl LinearOperator for ManyBodyOperator {
    fn dim(&self) -> usize {
        match self {
            ManyBodyOperator::Dense { matrix, .. } => matrix.rows(),
            ManyBodyOperator::MatrixFree(op) => op.hilbert_dim(),
        }
    }

    fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        match self {
            ManyBodyOperator::Dense { matrix, .. } => matrix.mat_vec_into(x, y),
            ManyBodyOperator::MatrixFree(op) => op.apply_into(x, y),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;
    use crate::model::spin1_operators;

    #[test]
    fn pair_term_matches_kron() {
        let s = spin1_operators();
        let mut op = SiteOperator::new(3);
        op.add_pair(2, 0, &s.x, &s.y, C64::new(0.7, 0.0)).unwrap();
        let dense = op.to_dense().unwrap();
        // site 0 carries y, site 2 carries x.
        let want = kron(&kron(&s.y, &ComplexMatrix::identity(3)).unwrap(), &s.x)
            .unwrap()
            .scale(C64::new(0.7, 0.0));
        assert!(dense.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn apply_matches_dense() {
        let s = spin1_operators();
        let mut op = SiteOperator::new(3);
        op.add_local(1, &s.z, C64::new(1.5, 0.0)).unwrap();
        op.add_pair(0, 1, &s.x, &s.x, C64::new(0.3, 0.0)).unwrap();
        op.add_pair(0, 2, &s.y, &s.z, C64::new(-0.2, 0.0)).unwrap();
        let dense = op.to_dense().unwrap();
        let x: Vec<C64> = (0..27)
            .map(|k| C64::new(k as f64 * 0.1, 1.0 - k as f64 * 0.03))
            .collect();
        let a = op.apply(&x);
        let b = dense.mat_vec(&x);
        for (u, v) in a.iter().zip(&b) {
            assert!((u - v).norm() < 1e-13);
        }
    }

    #[test]
    fn rejects_bad_sites() {
        let s = spin1_operators();
        let mut op = SiteOperator::new(2);
        assert!(op.add_local(2, &s.z, C64::new(1.0, 0.0)).is_err());
        assert!(op.add_pair(1, 1, &s.z, &s.z, C64::new(1.0, 0.0)).is_err());
        assert!(op
            .add_local(0, &ComplexMatrix::identity(2), C64::new(1.0, 0.0))
            .is_err());
    }
}
