use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    eig_lowest_manifolds, eigh_dense_with_tol, EigenSystem, LanczosOptions, DEFAULT_DEGENERACY_TOL, DENSE_MAX_DIM,
};
use crate::model::{
    microwave_site_operator, total_site_operator, ManyBodyOperator, MicrowaveSpec, ModelParams, SpinGeometry,
};
use crate::witness::{canonical_basis, max_amplitude_state, transition_amplitudes, witness_of_state};

/// Amplitudes above this count a manifold as bright in [`PointResult::bright_manifolds`].
pub const BRIGHT_COUNT_THRESHOLD: f64 = 1e-8;

/// Which state the microwave drive starts from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroundReference {
    /// Lowest eigenstate of the interacting Hamiltonian.
    #[default]
    Eigenstate,
    /// `|0 0 … 0⟩`, the ground state without couplings.
    Product,
}

impl std::str::FromStr for GroundReference {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eigenstate" => Ok(GroundReference::Eigenstate),
            "product" => Ok(GroundReference::Product),
            other => Err(Error::validation(format!(
                "unknown ground reference {other:?}, expected eigenstate or product"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineOptions {
    pub ground_reference: GroundReference,
    /// Largest Hilbert dimension diagonalized densely; above it Lanczos runs.
    pub dense_max_dim: usize,
    /// Eigenpairs requested from Lanczos, `2N + 2` when unset.
    pub lanczos_states: Option<usize>,
    pub degeneracy_tol: f64,
    pub lanczos_tol: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            ground_reference: GroundReference::Eigenstate,
            dense_max_dim: DENSE_MAX_DIM,
            lanczos_states: None,
            degeneracy_tol: DEFAULT_DEGENERACY_TOL,
            lanczos_tol: LanczosOptions::default().tol,
        }
    }
}

impl PipelineOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.degeneracy_tol > 0.0) || !(self.lanczos_tol > 0.0) {
            return Err(Error::validation("solver tolerances must be positive"));
        }
        if self.lanczos_states == Some(0) {
            return Err(Error::validation("lanczos_states must be at least 1"));
        }
        Ok(())
    }
}

/// Outcome of the pipeline for one geometry.
#[derive(Clone, Debug)]
pub struct PointResult {
    pub amplitude: f64,
    pub lambda: f64,
    /// Eigenvalue of the brightest manifold, GHz.
    pub excited_energy: f64,
    pub ground_energy: f64,
    /// Index of the brightest manifold above the ground manifold (1 = first excited).
    pub manifold: usize,
    pub degeneracy: usize,
    /// Excited manifolds with amplitude above [`BRIGHT_COUNT_THRESHOLD`].
    pub bright_manifolds: usize,
    /// Lowest computed eigenvalues.
    pub spectrum: Vec<f64>,
}

/// Hamiltonian of `geom` with per-site zero-field values and `params.kappa`.
pub fn hamiltonian(geom: &SpinGeometry, params: &ModelParams, opts: &PipelineOptions) -> Result<ManyBodyOperator> {
    ManyBodyOperator::from_site_operator(total_site_operator(geom, params.kappa)?, opts.dense_max_dim)
}

/// Low-lying spectrum: everything on the dense path, complete manifolds
/// among the lowest `2N + 2` states on the iterative path.
pub fn solve(h: &ManyBodyOperator, opts: &PipelineOptions, seed: u64) -> Result<EigenSystem> {
    match h {
        ManyBodyOperator::Dense { matrix, .. } => eigh_dense_with_tol(matrix, opts.degeneracy_tol),
        ManyBodyOperator::MatrixFree(op) => {
            let lanczos = LanczosOptions {
                tol: opts.lanczos_tol,
                degeneracy_tol: opts.degeneracy_tol,
                ..LanczosOptions::default()
            };
            let k = opts
                .lanczos_states
                .unwrap_or(2 * op.n_sites() + 2)
                .min(op.hilbert_dim());
            eig_lowest_manifolds(op, k, seed, &lanczos)
        }
    }
}

fn product_ground(n: usize) -> Vec<C64> {
    let dim = 3usize.pow(n as u32);
    let mut v = vec![C64::new(0.0, 0.0); dim];
    // All digits equal to 1 (m = 0): (3^n − 1) / 2.
    v[(dim - 1) / 2] = C64::new(1.0, 0.0);
    v
}

/// Solves `geom`, picks the brightest excited manifold under the unit
/// microwave operator and evaluates the witness on it.
pub fn evaluate(geom: &SpinGeometry, params: &ModelParams, opts: &PipelineOptions, seed: u64) -> Result<PointResult> {
    params.validate()?;
    opts.validate()?;
    let n = geom.n();
    let h = hamiltonian(geom, params, opts)?;
    let eig = solve(&h, opts, seed)?;
    if eig.manifolds.len() < 2 {
        return Err(Error::validation("spectrum has no excited manifold"));
    }
    let ground = match opts.ground_reference {
        GroundReference::Eigenstate => {
            let range = eig.manifolds[0].clone();
            canonical_basis(&eig.vectors[range], n)?.swap_remove(0)
        }
        GroundReference::Product => product_ground(n),
    };
    let t = microwave_site_operator(n, &MicrowaveSpec::default())?;
    let table = transition_amplitudes(&eig, &t, &ground)?;
    let best = max_amplitude_state(&table)?;
    let witness = witness_of_state(&best.state, n)?;
    Ok(PointResult {
        amplitude: best.amplitude,
        lambda: witness.lambda,
        excited_energy: best.energy,
        ground_energy: eig.values[0],
        manifold: best.manifold,
        degeneracy: best.degeneracy,
        bright_manifolds: table.bright(BRIGHT_COUNT_THRESHOLD).count(),
        spectrum: eig.values.iter().take(2 * n + 2).copied().collect(),
    })
}
