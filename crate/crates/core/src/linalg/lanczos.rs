//! Lowest eigenpairs of a Hermitian operator by restarted Lanczos.
//!
//! Each cycle builds a Krylov basis with full (two-pass) Gram-Schmidt
//! reorthogonalization against both the basis and every locked eigenvector.
//! Converged Ritz pairs are locked from the bottom of the spectrum upward and
//! deflated from later cycles. A single Krylov space only sees one direction
//! of each degenerate eigenspace, so once `k` pairs are locked a final cycle
//! in the orthogonal complement checks that nothing below the `k`-th value
//! was missed.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::eigen::{eigh_real_symmetric, EigenSystem, DEFAULT_DEGENERACY_TOL};
use super::matrix::{axpy, inner, norm};
use super::operator::LinearOperator;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct LanczosOptions {
    /// Residual target relative to `max(1, |spectrum|)`.
    pub tol: f64,
    /// Maximum number of Lanczos cycles before giving up.
    pub max_restarts: usize,
    /// Krylov basis size per cycle; `None` picks one from `k`.
    pub krylov_dim: Option<usize>,
    pub degeneracy_tol: f64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            tol: 1e-10,
            max_restarts: 2000,
            krylov_dim: None,
            degeneracy_tol: DEFAULT_DEGENERACY_TOL,
        }
    }
}

/// Lowest `k` eigenpairs of a Hermitian `op`, deterministic for a given seed.
pub fn eig_lowest_k<A: LinearOperator + ?Sized>(op: &A, k: usize, seed: u64) -> Result<EigenSystem> {
    eig_lowest_k_with(op, k, seed, &LanczosOptions::default())
}

pub fn eig_lowest_k_with<A: LinearOperator + ?Sized>(
    op: &A,
    k: usize,
    seed: u64,
    opts: &LanczosOptions,
) -> Result<EigenSystem> {
    let (eig, _) = Solver::new(op, seed, opts).run(k)?;
    Ok(eig)
}

/// Like [`eig_lowest_k_with`] but drops a trailing manifold that continues
/// past index `k`, so every returned manifold is complete.
pub fn eig_lowest_manifolds<A: LinearOperator + ?Sized>(
    op: &A,
    k: usize,
    seed: u64,
    opts: &LanczosOptions,
) -> Result<EigenSystem> {
    let (mut eig, next) = Solver::new(op, seed, opts).run(k)?;
    if let (Some(next), Some(last)) = (next, eig.manifolds.last().cloned()) {
        if next - eig.values[last.end - 1] <= opts.degeneracy_tol && eig.manifolds.len() > 1 {
            eig.truncate(last.start, opts.degeneracy_tol);
        }
    }
    Ok(eig)
}

struct Solver<'a, A: ?Sized> {
    op: &'a A,
    opts: &'a LanczosOptions,
    rng: ChaCha8Rng,
    locked: Vec<(f64, Vec<C64>)>,
    scale: f64,
    cycles: usize,
}

/// Output of one Lanczos cycle.
struct Cycle {
    ritz_values: Vec<f64>,
    /// Residual estimate `beta_m |s_last|` per Ritz value.
    estimates: Vec<f64>,
    coeffs: Vec<Vec<f64>>,
    basis: Vec<Vec<C64>>,
}

impl Cycle {
    fn ritz_vector(&self, i: usize) -> Vec<C64> {
        let n = self.basis[0].len();
        let mut y = vec![C64::new(0.0, 0.0); n];
        for (q, &s) in self.basis.iter().zip(&self.coeffs[i]) {
            axpy(C64::new(s, 0.0), q, &mut y);
        }
        let nrm = norm(&y);
        y.iter_mut().for_each(|z| *z /= nrm);
        y
    }
}

impl<'a, A: LinearOperator + ?Sized> Solver<'a, A> {
    fn new(op: &'a A, seed: u64, opts: &'a LanczosOptions) -> Self {
        Solver {
            op,
            opts,
            rng: ChaCha8Rng::seed_from_u64(seed),
            locked: Vec::new(),
            scale: 1.0,
            cycles: 0,
        }
    }

    fn threshold(&self) -> f64 {
        self.opts.tol * self.scale
    }

    /// Returns the lowest `k` pairs and, when the space is not exhausted, the
    /// lowest converged eigenvalue of the complement.
    fn run(mut self, k: usize) -> Result<(EigenSystem, Option<f64>)> {
        let n = self.op.dim();
        if k > n {
            return Err(Error::validation(format!(
                "requested {k} eigenpairs of a {n}-dimensional operator"
            )));
        }
        let mut restart: Option<Vec<C64>> = None;
        while self.locked.len() < k {
            let want = k - self.locked.len();
            let cycle = self.cycle(restart.take(), want)?;
            let before = self.locked.len();
            restart = self.lock_converged(&cycle, want);
            if self.locked.len() == before && restart.is_none() {
                restart = Some(cycle.ritz_vector(0));
            }
        }

        // Check the complement for anything below the k-th value.
        let mut next = None;
        let mut restart: Option<Vec<C64>> = None;
        while self.locked.len() < n {
            let cycle = self.cycle(restart.take(), 1)?;
            let theta = cycle.ritz_values[0];
            let y = cycle.ritz_vector(0);
            let res = self.residual(&y, theta);
            if res > self.threshold() {
                restart = Some(y);
                continue;
            }
            let mut vals: Vec<f64> = self.locked.iter().map(|p| p.0).collect();
            vals.sort_by(f64::total_cmp);
            let kth = vals[k - 1];
            if theta < kth - self.threshold().max(1e-14) {
                self.locked.push((theta, y));
                continue;
            }
            next = Some(theta);
            break;
        }

        let mut pairs = self.locked;
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs.truncate(k);
        Ok((EigenSystem::new(pairs, self.opts.degeneracy_tol), next))
    }

    fn lock_converged(&mut self, cycle: &Cycle, want: usize) -> Option<Vec<C64>> {
        for i in 0..cycle.ritz_values.len().min(want) {
            let theta = cycle.ritz_values[i];
            if cycle.estimates[i] > self.threshold() {
                return Some(cycle.ritz_vector(i));
            }
            let y = cycle.ritz_vector(i);
            if self.residual(&y, theta) > self.threshold() {
                return Some(y);
            }
            self.locked.push((theta, y));
        }
        None
    }

    fn residual(&self, y: &[C64], theta: f64) -> f64 {
        let mut r = self.op.apply(y);
        axpy(C64::new(-theta, 0.0), y, &mut r);
        norm(&r)
    }

    fn random_start(&mut self, n: usize) -> Vec<C64> {
        (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut self.rng);
                let im: f64 = StandardNormal.sample(&mut self.rng);
                C64::new(re, im)
            })
            .collect()
    }

    fn orthogonalize(&self, w: &mut [C64], basis: &[Vec<C64>]) {
        for _ in 0..2 {
            for (_, v) in &self.locked {
                let c = inner(v, w);
                axpy(-c, v, w);
            }
            for q in basis {
                let c = inner(q, w);
                axpy(-c, q, w);
            }
        }
    }

    fn cycle(&mut self, start: Option<Vec<C64>>, want: usize) -> Result<Cycle> {
        self.cycles += 1;
        if self.cycles > self.opts.max_restarts {
            return Err(Error::NoConvergence {
                solver: "Lanczos",
                iterations: self.cycles - 1,
            });
        }
        let n = self.op.dim();
        let room = n - self.locked.len();
        let m = self
            .opts
            .krylov_dim
            .unwrap_or_else(|| (2 * want + 40).clamp(60, 160))
            .min(room)
            .max(1);

        let mut q = match start {
            Some(v) => v,
            None => self.random_start(n),
        };
        self.orthogonalize(&mut q, &[]);
        let mut nrm = norm(&q);
        while nrm < 1e-8 {
            q = self.random_start(n);
            self.orthogonalize(&mut q, &[]);
            nrm = norm(&q);
        }
        q.iter_mut().for_each(|z| *z /= nrm);

        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(m);
        let mut alpha: Vec<f64> = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        let mut w = vec![C64::new(0.0, 0.0); n];
        basis.push(q);
        let last_beta;
        loop {
            let j = basis.len() - 1;
            self.op.apply_into(&basis[j], &mut w);
            let a = inner(&basis[j], &w).re;
            alpha.push(a);
            self.scale = self.scale.max(a.abs());
            axpy(C64::new(-a, 0.0), &basis[j], &mut w);
            if j > 0 {
                axpy(C64::new(-beta[j - 1], 0.0), &basis[j - 1], &mut w);
            }
            self.orthogonalize(&mut w, &basis);
            let b = norm(&w);
            if basis.len() == m || b <= 1e-13 * self.scale {
                last_beta = if b <= 1e-13 * self.scale { 0.0 } else { b };
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|z| z / b).collect());
        }

        let dim = alpha.len();
        let mut t = vec![0.0; dim * dim];
        for i in 0..dim {
            t[i * dim + i] = alpha[i];
            if i + 1 < dim {
                t[i * dim + i + 1] = beta[i];
                t[(i + 1) * dim + i] = beta[i];
            }
        }
        let (ritz_values, coeffs) = eigh_real_symmetric(&t, dim)?;
        for v in &ritz_values {
            self.scale = self.scale.max(v.abs());
        }
        let estimates = coeffs.iter().map(|s| last_beta * s[dim - 1].abs()).collect();
        Ok(Cycle {
            ritz_values,
            estimates,
            coeffs,
            basis,
        })
    }
}
