use num_complex::Complex64 as C64;

use super::rdm::sites_for_dim;
use crate::error::{Error, Result};
use crate::linalg::{eigh_dense, fix_phase, inner, ComplexMatrix, EigenSystem, LinearOperator};

/// Amplitudes below this count as dark.
pub const BRIGHT_THRESHOLD: f64 = 1e-12;

/// One excited manifold's strongest transition from the ground state.
#[derive(Clone, Debug)]
pub struct AmplitudeEntry {
    /// Index into `EigenSystem::manifolds`.
    pub manifold: usize,
    pub energy: f64,
    pub degeneracy: usize,
    pub amplitude: f64,
    /// Canonical-basis vector attaining `amplitude`.
    pub state: Vec<C64>,
}

/// Entries in ascending energy, one per non-ground manifold.
#[derive(Clone, Debug, Default)]
pub struct AmplitudeTable {
    pub entries: Vec<AmplitudeEntry>,
}

impl AmplitudeTable {
    pub fn bright(&self, threshold: f64) -> impl Iterator<Item = &AmplitudeEntry> {
        self.entries.iter().filter(move |e| e.amplitude > threshold)
    }
}

/// `Σ_p (p + 1) m_p` for each product basis state, the diagonal of the
/// operator that fixes a basis inside degenerate manifolds.
fn site_weighted_sz(n: usize) -> Vec<f64> {
    let dim = 3usize.pow(n as u32);
    (0..dim)
        .map(|mut idx| {
            let mut total = 0.0;
            for p in (0..n).rev() {
                let level = idx % 3;
                idx /= 3;
                total += (p + 1) as f64 * (1.0 - level as f64);
            }
            total
        })
        .collect()
}

/// Re-diagonalizes `Σ_p (p+1) Sz⁽ᵖ⁾` inside the span of `vectors`. For
/// uncoupled spins this recovers product states.
pub fn canonical_basis(vectors: &[Vec<C64>], n: usize) -> Result<Vec<Vec<C64>>> {
    if vectors.len() <= 1 {
        return Ok(vectors.to_vec());
    }
    let weights = site_weighted_sz(n);
    let d = vectors.len();
    let weighted: Vec<Vec<C64>> = vectors
        .iter()
        .map(|v| v.iter().zip(&weights).map(|(z, w)| z * w).collect())
        .collect();
    let proj = ComplexMatrix::from_fn(d, d, |i, j| inner(&vectors[i], &weighted[j]));
    let eig = eigh_dense(&proj)?;
    let dim = vectors[0].len();
    Ok(eig
        .vectors
        .iter()
        .map(|u| {
            let mut w = vec![C64::new(0.0, 0.0); dim];
            for (coef, v) in u.iter().zip(vectors) {
                for (dst, src) in w.iter_mut().zip(v) {
                    *dst += coef * src;
                }
            }
            fix_phase(&mut w);
            w
        })
        .collect())
}

/// `A = |⟨e|T|g⟩|` for every manifold above the ground manifold, taking the
/// largest value over the manifold's canonical basis.
pub fn transition_amplitudes<T: LinearOperator + ?Sized>(
    eig: &EigenSystem,
    t: &T,
    ground: &[C64],
) -> Result<AmplitudeTable> {
    let n = sites_for_dim(ground.len())
        .ok_or_else(|| Error::validation(format!("state length {} is not a power of 3", ground.len())))?;
    if t.dim() != ground.len() {
        return Err(Error::validation(
            "transition operator and ground state differ in dimension",
        ));
    }
    let tg = t.apply(ground);
    let mut entries = Vec::new();
    for (m, range) in eig.manifolds.iter().enumerate().skip(1) {
        let basis = canonical_basis(&eig.vectors[range.clone()], n)?;
        let (best, amplitude) = basis
            .iter()
            .map(|v| inner(v, &tg).norm())
            .enumerate()
            .fold((0, -1.0), |acc, (k, a)| if a > acc.1 { (k, a) } else { acc });
        entries.push(AmplitudeEntry {
            manifold: m,
            energy: eig.values[range.start],
            degeneracy: range.len(),
            amplitude,
            state: basis[best].clone(),
        });
    }
    Ok(AmplitudeTable { entries })
}

/// The entry with the largest amplitude; ties go to the lower energy.
pub fn max_amplitude_state(table: &AmplitudeTable) -> Result<&AmplitudeEntry> {
    let mut best: Option<&AmplitudeEntry> = None;
    for e in &table.entries {
        match best {
            Some(b) if e.amplitude <= b.amplitude + BRIGHT_THRESHOLD => {}
            _ => best = Some(e),
        }
    }
    match best {
        Some(b) if b.amplitude >= BRIGHT_THRESHOLD => Ok(b),
        _ => Err(Error::NoBrightState {
            threshold: BRIGHT_THRESHOLD,
        }),
    }
}
