use serde::{Deserialize, Serialize};

use super::pipeline::PipelineOptions;
use crate::error::{Error, Result};
use crate::model::{GridPlane, ModelParams, DEFAULT_SPACING_ANGSTROM, DIPOLE_KAPPA_GHZ_NM3, NV_ZFS_GHZ};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Distance,
    Size,
    Grid2d,
    Noise,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::Distance => "distance",
            Family::Size => "size",
            Family::Grid2d => "grid2d",
            Family::Noise => "noise",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DistanceScan {
    pub n: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub r_step: f64,
}

impl Default for DistanceScan {
    fn default() -> Self {
        DistanceScan {
            n: 3,
            r_min: 2.0,
            r_max: 22.0,
            r_step: 0.5,
        }
    }
}

impl DistanceScan {
    /// `r_min, r_min + step, …` up to `r_max` inclusive (with a `1e-9` step slack).
    pub fn grid(&self) -> Vec<f64> {
        let count = ((self.r_max - self.r_min) / self.r_step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| self.r_min + k as f64 * self.r_step).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SizeScan {
    pub n_min: usize,
    pub n_max: usize,
    pub interacting: bool,
}

impl Default for SizeScan {
    fn default() -> Self {
        SizeScan {
            n_min: 1,
            n_max: 9,
            interacting: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Grid2dScan {
    pub n_min: usize,
    pub n_max: usize,
    pub plane: GridPlane,
}

impl Default for Grid2dScan {
    fn default() -> Self {
        Grid2dScan {
            n_min: 3,
            n_max: 9,
            plane: GridPlane::Zy,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseScan {
    pub n: usize,
    /// Upper end of the zero-field width axis as a multiple of `d0`.
    pub sigma_d_max_factor: f64,
    /// Upper end of the position width axis, Å.
    pub sigma_r_max: f64,
    /// Points per axis on the default evenly spaced grid.
    pub steps: usize,
    /// Explicit zero-field widths (GHz), replacing the default axis.
    pub sigma_d: Option<Vec<f64>>,
    /// Explicit position widths (Å), replacing the default axis.
    pub sigma_r: Option<Vec<f64>>,
}

impl Default for NoiseScan {
    fn default() -> Self {
        NoiseScan {
            n: 3,
            sigma_d_max_factor: 1.5,
            sigma_r_max: 2.5,
            steps: 11,
            sigma_d: None,
            sigma_r: None,
        }
    }
}

fn even_axis(max: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![0.0];
    }
    (0..steps).map(|k| max * k as f64 / (steps - 1) as f64).collect()
}

impl NoiseScan {
    pub fn sigma_d_axis(&self, d0: f64) -> Vec<f64> {
        self.sigma_d
            .clone()
            .unwrap_or_else(|| even_axis(self.sigma_d_max_factor * d0, self.steps))
    }

    pub fn sigma_r_axis(&self) -> Vec<f64> {
        self.sigma_r
            .clone()
            .unwrap_or_else(|| even_axis(self.sigma_r_max, self.steps))
    }
}

/// Everything needed to reproduce a scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanConfig {
    pub family: Option<Family>,
    pub d0: f64,
    pub kappa: f64,
    pub spacing: f64,
    pub reps: usize,
    pub seed: u64,
    pub distance: DistanceScan,
    pub size: SizeScan,
    pub grid2d: Grid2dScan,
    pub noise: NoiseScan,
    pub solver: PipelineOptions,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            family: None,
            d0: NV_ZFS_GHZ,
            kappa: DIPOLE_KAPPA_GHZ_NM3,
            spacing: DEFAULT_SPACING_ANGSTROM,
            reps: 100,
            seed: 0,
            distance: DistanceScan::default(),
            size: SizeScan::default(),
            grid2d: Grid2dScan::default(),
            noise: NoiseScan::default(),
            solver: PipelineOptions::default(),
        }
    }
}

fn check_n_range(what: &str, lo: usize, hi: usize) -> Result<()> {
    if lo == 0 || hi < lo {
        return Err(Error::validation(format!(
            "{what}: need 1 <= n_min <= n_max, got {lo}..{hi}"
        )));
    }
    Ok(())
}

impl ScanConfig {
    pub fn model(&self) -> ModelParams {
        ModelParams {
            d0: self.d0,
            kappa: self.kappa,
            spacing: self.spacing,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model().validate()?;
        self.solver.validate()?;
        if self.reps == 0 {
            return Err(Error::validation("reps must be at least 1"));
        }
        let d = &self.distance;
        if d.n == 0 {
            return Err(Error::validation("distance.n must be at least 1"));
        }
        if !(d.r_min > 0.0) || !(d.r_step > 0.0) || !(d.r_max >= d.r_min) {
            return Err(Error::validation(format!(
                "distance grid needs 0 < r_min <= r_max and r_step > 0, got {}..{} step {}",
                d.r_min, d.r_max, d.r_step
            )));
        }
        check_n_range("size", self.size.n_min, self.size.n_max)?;
        check_n_range("grid2d", self.grid2d.n_min, self.grid2d.n_max)?;
        let nz = &self.noise;
        if nz.n == 0 || nz.steps == 0 {
            return Err(Error::validation("noise.n and noise.steps must be at least 1"));
        }
        let sd = nz.sigma_d_axis(self.d0);
        let sr = nz.sigma_r_axis();
        if sd.is_empty() || sr.is_empty() {
            return Err(Error::validation("noise axes must be nonempty"));
        }
        if sd.iter().chain(&sr).any(|s| !(*s >= 0.0)) {
            return Err(Error::validation("noise widths must be non-negative"));
        }
        Ok(())
    }
}
