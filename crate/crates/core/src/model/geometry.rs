use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::NV_ZFS_GHZ;
use crate::error::{Error, Result};

/// Pairs closer than this (Å) after perturbation trigger a resample.
pub const MIN_SEPARATION: f64 = 1e-3;
/// Resample limit for a single perturbed instance.
pub const MAX_RESAMPLES: usize = 1000;

/// Site positions (Å) and per-site zero-field splittings (GHz).
#[derive(Clone, Debug, PartialEq)]
pub struct SpinGeometry {
    pub positions: Vec<[f64; 3]>,
    pub zfs: Vec<f64>,
}

impl SpinGeometry {
    pub fn new(positions: Vec<[f64; 3]>, zfs: Vec<f64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::validation("geometry needs at least one site"));
        }
        if positions.len() != zfs.len() {
            return Err(Error::validation(format!(
                "{} positions but {} zero-field values",
                positions.len(),
                zfs.len()
            )));
        }
        let geom = SpinGeometry { positions, zfs };
        if let Some((i, j, _)) = geom.closest_pair().filter(|&(_, _, d)| !(d > 0.0)) {
            return Err(Error::validation(format!("sites {i} and {j} coincide")));
        }
        Ok(geom)
    }

    /// Same positions, every site at zero-field splitting `d`.
    pub fn with_uniform_zfs(mut self, d: f64) -> Self {
        self.zfs.iter_mut().for_each(|z| *z = d);
        self
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    /// `R_j − R_i`
    pub fn displacement(&self, i: usize, j: usize) -> [f64; 3] {
        let (a, b) = (self.positions[i], self.positions[j]);
        [b[0] - a[0], b[1] - a[1], b[2] - a[2]]
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let d = self.displacement(i, j);
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }

    fn closest_pair(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                let d = self.distance(i, j);
                if best.is_none_or(|b| d < b.2) {
                    best = Some((i, j, d));
                }
            }
        }
        best
    }

    /// Smallest pairwise distance, `None` for a single site.
    pub fn min_separation(&self) -> Option<f64> {
        self.closest_pair().map(|p| p.2)
    }

    pub fn translated(&self, shift: [f64; 3]) -> Self {
        SpinGeometry {
            positions: self
                .positions
                .iter()
                .map(|p| [p[0] + shift[0], p[1] + shift[1], p[2] + shift[2]])
                .collect(),
            zfs: self.zfs.clone(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        SpinGeometry {
            positions: self
                .positions
                .iter()
                .map(|p| [p[0] * factor, p[1] * factor, p[2] * factor])
                .collect(),
            zfs: self.zfs.clone(),
        }
    }
}

/// `n` sites at `(0, k·spacing, 0)`.
pub fn chain_y(n: usize, spacing: f64) -> Result<SpinGeometry> {
    if n == 0 || !(spacing > 0.0) {
        return Err(Error::validation(format!(
            "chain needs n >= 1 and spacing > 0 (got {n}, {spacing})"
        )));
    }
    let positions = (0..n).map(|k| [0.0, k as f64 * spacing, 0.0]).collect();
    SpinGeometry::new(positions, vec![NV_ZFS_GHZ; n])
}

/// Direction of the second row in a two-row arrangement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridPlane {
    /// Second row offset along Z.
    #[serde(rename = "ZY")]
    Zy,
    /// Second row offset along X.
    #[serde(rename = "XY")]
    Xy,
}

impl GridPlane {
    pub fn label(self) -> &'static str {
        match self {
            GridPlane::Zy => "ZY",
            GridPlane::Xy => "XY",
        }
    }
}

impl std::fmt::Display for GridPlane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for GridPlane {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "ZY" => Ok(GridPlane::Zy),
            "XY" => Ok(GridPlane::Xy),
            other => Err(Error::validation(format!("unknown plane {other:?}, expected ZY or XY"))),
        }
    }
}

/// Two rows along Y filled alternately: site `k` sits in row `k mod 2`,
/// column `k / 2`.
pub fn grid_2d(n: usize, spacing: f64, plane: GridPlane) -> Result<SpinGeometry> {
    if n == 0 || !(spacing > 0.0) {
        return Err(Error::validation(format!(
            "grid needs n >= 1 and spacing > 0 (got {n}, {spacing})"
        )));
    }
    let positions = (0..n)
        .map(|k| {
            let row = (k % 2) as f64 * spacing;
            let y = (k / 2) as f64 * spacing;
            match plane {
                GridPlane::Zy => [0.0, y, row],
                GridPlane::Xy => [row, y, 0.0],
            }
        })
        .collect();
    SpinGeometry::new(positions, vec![NV_ZFS_GHZ; n])
}

/// Gaussian disorder: `sigma_d` on each zero-field value (GHz), `sigma_r` on
/// each Cartesian coordinate (Å).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    pub sigma_d: f64,
    pub sigma_r: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_d >= 0.0) || !(self.sigma_r >= 0.0) {
            return Err(Error::validation(format!(
                "noise widths must be non-negative (sigma_d = {}, sigma_r = {})",
                self.sigma_d, self.sigma_r
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Perturbation {
    pub geometry: SpinGeometry,
    /// Draws rejected because two sites ended up closer than [`MIN_SEPARATION`].
    pub resamples: usize,
}

/// Draws one disordered copy of `geom`.
///
/// Normal deviates come from `rand_distr::Normal` (ziggurat sampling of the
/// standard normal, scaled by σ). Per site, ascending: the zero-field shift
/// first, then the x, y and z shifts. Four deviates per site are always
/// drawn, even at σ = 0, so the stream layout does not depend on the widths.
pub fn perturb<R: Rng + ?Sized>(geom: &SpinGeometry, noise: &NoiseSpec, rng: &mut R) -> Result<Perturbation> {
    noise.validate()?;
    let zfs_noise = Normal::new(0.0, noise.sigma_d).map_err(|e| Error::validation(e.to_string()))?;
    let pos_noise = Normal::new(0.0, noise.sigma_r).map_err(|e| Error::validation(e.to_string()))?;
    for resamples in 0..=MAX_RESAMPLES {
        let mut positions = geom.positions.clone();
        let mut zfs = geom.zfs.clone();
        for (p, d) in positions.iter_mut().zip(zfs.iter_mut()) {
            *d += zfs_noise.sample(rng);
            for c in p.iter_mut() {
                *c += pos_noise.sample(rng);
            }
        }
        let candidate = SpinGeometry { positions, zfs };
        if candidate.min_separation().is_none_or(|d| d >= MIN_SEPARATION) {
            return Ok(Perturbation {
                geometry: candidate,
                resamples,
            });
        }
    }
    Err(Error::validation(format!(
        "could not draw a non-coincident geometry in {MAX_RESAMPLES} attempts"
    )))
}
