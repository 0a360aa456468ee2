//! Triplet-spin model: spin-1 operators, Hamiltonian terms, the microwave
//! transition operator, geometries and Gaussian disorder.
//!
//! Energies are in GHz with ħ = 1. Positions are in Å; the dipole coupling
//! converts to nm internally.

mod geometry;
mod site_operator;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, DENSE_MAX_DIM};

pub use geometry::{
    chain_y, grid_2d, perturb, GridPlane, NoiseSpec, Perturbation, SpinGeometry, MAX_RESAMPLES, MIN_SEPARATION,
};
pub use site_operator::{ManyBodyOperator, SiteOperator};

/// Zero-field splitting of the NV centre at ambient conditions, GHz.
pub const NV_ZFS_GHZ: f64 = 2.87;
/// `(μ0/4π) ħ γ_e² / 2π` in GHz·nm³.
pub const DIPOLE_KAPPA_GHZ_NM3: f64 = 0.05204;
/// Default nearest-neighbour spacing, Å.
pub const DEFAULT_SPACING_ANGSTROM: f64 = 5.125;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelParams {
    /// Nominal zero-field splitting D, GHz.
    pub d0: f64,
    /// Dipole prefactor, GHz·nm³.
    pub kappa: f64,
    /// Lattice constant, Å.
    pub spacing: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            d0: NV_ZFS_GHZ,
            kappa: DIPOLE_KAPPA_GHZ_NM3,
            spacing: DEFAULT_SPACING_ANGSTROM,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.d0 > 0.0) {
            return Err(Error::validation(format!("d0 must be positive, got {}", self.d0)));
        }
        if !(self.kappa >= 0.0) {
            return Err(Error::validation(format!(
                "kappa must be non-negative, got {}",
                self.kappa
            )));
        }
        if !(self.spacing > 0.0) {
            return Err(Error::validation(format!(
                "spacing must be positive, got {}",
                self.spacing
            )));
        }
        Ok(())
    }
}

/// Microwave drive. `frequency` only enters the rotating-frame operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MicrowaveSpec {
    pub b1: f64,
    /// Phase φ in radians.
    pub phase: f64,
    /// Angular frequency ω in GHz.
    pub frequency: f64,
}

impl Default for MicrowaveSpec {
    fn default() -> Self {
        MicrowaveSpec {
            b1: 1.0,
            phase: 0.0,
            frequency: 0.0,
        }
    }
}

impl MicrowaveSpec {
    pub fn new(b1: f64, phase: f64, frequency: f64) -> Result<Self> {
        if !(b1 > 0.0) {
            return Err(Error::validation(format!(
                "microwave amplitude must be positive, got {b1}"
            )));
        }
        Ok(MicrowaveSpec { b1, phase, frequency })
    }
}

/// Spin-1 matrices in the `(|+1⟩, |0⟩, |−1⟩)` basis.
#[derive(Clone, Debug)]
pub struct SpinOperators {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub z: ComplexMatrix,
}

impl SpinOperators {
    pub fn components(&self) -> [&ComplexMatrix; 3] {
        [&self.x, &self.y, &self.z]
    }

    /// `S² = Sx² + Sy² + Sz²`
    pub fn total_squared(&self) -> ComplexMatrix {
        let xx = &self.x * &self.x;
        let yy = &self.y * &self.y;
        let zz = &self.z * &self.z;
        &(&xx + &yy) + &zz
    }
}

pub fn spin1_operators() -> SpinOperators {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let z0 = C64::new(0.0, 0.0);
    let re = |v: f64| C64::new(v, 0.0);
    let im = |v: f64| C64::new(0.0, v);
    let x = ComplexMatrix::from_row_major(3, 3, vec![z0, re(r), z0, re(r), z0, re(r), z0, re(r), z0]);
    let y = ComplexMatrix::from_row_major(3, 3, vec![z0, im(-r), z0, im(r), z0, im(-r), z0, im(r), z0]);
    SpinOperators {
        x: x.expect("3x3"),
        y: y.expect("3x3"),
        z: ComplexMatrix::from_diag(&[1.0, 0.0, -1.0]),
    }
}

/// Axial zero-field splitting `D (Sz² − S²/3)`.
pub fn single_site_h(d: f64) -> ComplexMatrix {
    let s = spin1_operators();
    let zz = &s.z * &s.z;
    let third = s.total_squared().scale(C64::new(1.0 / 3.0, 0.0));
    (&zz - &third).scale(C64::new(d, 0.0))
}

/// `I ⊗ … ⊗ op3 ⊗ … ⊗ I` with `op3` at `site`.
pub fn embed(op3: &ComplexMatrix, site: usize, n: usize) -> Result<ManyBodyOperator> {
    if site >= n {
        return Err(Error::validation(format!("site {site} out of range for {n} sites")));
    }
    if op3.rows() != 3 || op3.cols() != 3 {
        return Err(Error::validation("embedded operator must be 3x3"));
    }
    let dim = 3usize.pow(n as u32);
    if dim <= DENSE_MAX_DIM {
        let left = ComplexMatrix::identity(3usize.pow(site as u32));
        let right = ComplexMatrix::identity(3usize.pow((n - site - 1) as u32));
        let matrix = kron(&kron(&left, op3)?, &right)?;
        Ok(ManyBodyOperator::Dense { n_sites: n, matrix })
    } else {
        let mut op = SiteOperator::new(n);
        op.add_local(site, op3, C64::new(1.0, 0.0))?;
        Ok(ManyBodyOperator::MatrixFree(op))
    }
}

/// Dipole coupling `kappa / r³` in GHz, with `r` given in Å.
pub fn dipole_coupling(r_angstrom: f64, kappa: f64) -> f64 {
    let r_nm = r_angstrom / 10.0;
    kappa / (r_nm * r_nm * r_nm)
}

/// Adds `J(r) [S⁽ⁱ⁾·S⁽ʲ⁾ − 3 (S⁽ⁱ⁾·n)(S⁽ʲ⁾·n)]` for the pair (i, j).
pub fn add_dipole_terms(op: &mut SiteOperator, geom: &SpinGeometry, i: usize, j: usize, kappa: f64) -> Result<()> {
    if i == j {
        return Err(Error::validation("dipole term needs two distinct sites"));
    }
    if i >= geom.n() || j >= geom.n() {
        return Err(Error::validation(format!(
            "site pair ({i}, {j}) out of range for {} sites",
            geom.n()
        )));
    }
    let d = geom.displacement(i, j);
    let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    if !(r > 0.0) {
        return Err(Error::validation(format!("sites {i} and {j} coincide")));
    }
    if kappa == 0.0 {
        return Ok(());
    }
    let u = [d[0] / r, d[1] / r, d[2] / r];
    let coupling = dipole_coupling(r, kappa);
    let s = spin1_operators();
    let comps = s.components();
    for a in 0..3 {
        for b in 0..3 {
            let delta = if a == b { 1.0 } else { 0.0 };
            let c = delta - 3.0 * u[a] * u[b];
            if c != 0.0 {
                op.add_pair(i, j, comps[a], comps[b], C64::new(coupling * c, 0.0))?;
            }
        }
    }
    Ok(())
}

pub fn dipole_h(geom: &SpinGeometry, i: usize, j: usize, kappa: f64) -> Result<ManyBodyOperator> {
    let mut op = SiteOperator::new(geom.n());
    add_dipole_terms(&mut op, geom, i, j, kappa)?;
    ManyBodyOperator::from_site_operator(op, DENSE_MAX_DIM)
}

/// Zero-field splitting on every site plus all pairwise dipole terms.
pub fn total_site_operator(geom: &SpinGeometry, kappa: f64) -> Result<SiteOperator> {
    let n = geom.n();
    let mut op = SiteOperator::new(n);
    for (site, &d) in geom.zfs.iter().enumerate() {
        op.add_local(site, &single_site_h(d), C64::new(1.0, 0.0))?;
    }
    for i in 0..n {
        for j in i + 1..n {
            add_dipole_terms(&mut op, geom, i, j, kappa)?;
        }
    }
    Ok(op)
}

pub fn total_h(geom: &SpinGeometry, kappa: f64) -> Result<ManyBodyOperator> {
    ManyBodyOperator::from_site_operator(total_site_operator(geom, kappa)?, DENSE_MAX_DIM)
}

/// `b1 Σᵢ (Sx + Sy)⁽ⁱ⁾` with the `γ_e cos ωt` prefactor dropped.
pub fn microwave_site_operator(n: usize, spec: &MicrowaveSpec) -> Result<SiteOperator> {
    let s = spin1_operators();
    let local = &s.x + &s.y;
    let mut op = SiteOperator::new(n);
    for site in 0..n {
        op.add_local(site, &local, C64::new(spec.b1, 0.0))?;
    }
    Ok(op)
}

pub fn microwave_t(n: usize, spec: &MicrowaveSpec) -> Result<ManyBodyOperator> {
    ManyBodyOperator::from_site_operator(microwave_site_operator(n, spec)?, DENSE_MAX_DIM)
}

/// Rotating-frame drive `−ω Σ Sz + b1 Σ (cos φ Sx + sin φ Sy)`.
pub fn microwave_rotating(spec: &MicrowaveSpec, n: usize) -> Result<ManyBodyOperator> {
    let s = spin1_operators();
    let local = &(&s.z.scale(C64::new(-spec.frequency, 0.0)) + &s.x.scale(C64::new(spec.b1 * spec.phase.cos(), 0.0)))
        + &s.y.scale(C64::new(spec.b1 * spec.phase.sin(), 0.0));
    let mut op = SiteOperator::new(n);
    for site in 0..n {
        op.add_local(site, &local, C64::new(1.0, 0.0))?;
    }
    ManyBodyOperator::from_site_operator(op, DENSE_MAX_DIM)
}
