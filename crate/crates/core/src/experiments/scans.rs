use log::{info, warn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::ScanConfig;
use super::pipeline::{evaluate, PointResult};
use crate::error::{Error, Result};
use crate::model::{chain_y, grid_2d, perturb, GridPlane, ModelParams, NoiseSpec, SpinGeometry};

pub const STATUS_OK: &str = "ok";

/// A noise cell fails when more than this share of its repetitions fail.
pub const MAX_FAILED_FRACTION: f64 = 0.1;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for repetition `rep` of cell `cell`:
/// `mix64(mix64(mix64(base) ^ cell) ^ rep)` with the SplitMix64 finalizer.
pub fn split_seed(base: u64, cell: u64, rep: u64) -> u64 {
    mix64(mix64(mix64(base) ^ cell) ^ rep)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceRecord {
    pub r_angstrom: f64,
    pub amplitude: f64,
    pub lambda: f64,
    pub excited_energy_ghz: f64,
    pub status: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SizeRecord {
    pub n: usize,
    pub interacting: bool,
    pub amplitude: f64,
    pub lambda: f64,
    pub status: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grid2dRecord {
    pub n: usize,
    pub plane: GridPlane,
    pub amplitude: f64,
    pub lambda: f64,
    pub status: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseRecord {
    pub sigma_d_ghz: f64,
    pub sigma_r_angstrom: f64,
    pub mean_amplitude: f64,
    pub std_amplitude: f64,
    pub mean_lambda: f64,
    pub std_lambda: f64,
    /// Repetitions that produced a value.
    pub reps: usize,
    pub resamples: usize,
    pub status: String,
}

/// `(value, status)` of one scan point; failed points carry NaN.
fn settle(result: Result<PointResult>, what: &str) -> (Option<PointResult>, String) {
    match result {
        Ok(p) => (Some(p), STATUS_OK.to_string()),
        Err(e) => {
            warn!("{what}: {e}");
            (None, e.status_tag().to_string())
        }
    }
}

fn amp_lambda(p: &Option<PointResult>) -> (f64, f64) {
    p.as_ref().map_or((f64::NAN, f64::NAN), |p| (p.amplitude, p.lambda))
}

/// Chain of `cfg.distance.n` sites along Y at each separation of the grid.
pub fn run_distance_scan(cfg: &ScanConfig) -> Result<Vec<DistanceRecord>> {
    cfg.validate()?;
    let params = cfg.model();
    let grid = cfg.distance.grid();
    info!("distance scan: {} points, n = {}", grid.len(), cfg.distance.n);
    Ok(grid
        .par_iter()
        .map(|&r| {
            let result = chain_y(cfg.distance.n, r)
                .map(|g| g.with_uniform_zfs(params.d0))
                .and_then(|g| evaluate(&g, &params, &cfg.solver, cfg.seed));
            let (point, status) = settle(result, &format!("r = {r}"));
            let (amplitude, lambda) = amp_lambda(&point);
            DistanceRecord {
                r_angstrom: r,
                amplitude,
                lambda,
                excited_energy_ghz: point.map_or(f64::NAN, |p| p.excited_energy),
                status,
            }
        })
        .collect())
}

/// Chains of `n_min..=n_max` sites at the configured spacing. With
/// `interacting = false` the dipole prefactor is set to zero.
pub fn run_size_scan(cfg: &ScanConfig, interacting: bool) -> Result<Vec<SizeRecord>> {
    cfg.validate()?;
    let params = ModelParams {
        kappa: if interacting { cfg.kappa } else { 0.0 },
        ..cfg.model()
    };
    let ns: Vec<usize> = (cfg.size.n_min..=cfg.size.n_max).collect();
    info!(
        "size scan: n = {}..={}, interacting = {interacting}",
        cfg.size.n_min, cfg.size.n_max
    );
    Ok(ns
        .par_iter()
        .map(|&n| {
            let result = chain_y(n, params.spacing)
                .map(|g| g.with_uniform_zfs(params.d0))
                .and_then(|g| evaluate(&g, &params, &cfg.solver, cfg.seed));
            let (point, status) = settle(result, &format!("n = {n}"));
            let (amplitude, lambda) = amp_lambda(&point);
            SizeRecord {
                n,
                interacting,
                amplitude,
                lambda,
                status,
            }
        })
        .collect())
}

/// Two-row arrangements of `n_min..=n_max` sites.
pub fn run_grid2d_scan(cfg: &ScanConfig, plane: GridPlane) -> Result<Vec<Grid2dRecord>> {
    cfg.validate()?;
    let params = cfg.model();
    let ns: Vec<usize> = (cfg.grid2d.n_min..=cfg.grid2d.n_max).collect();
    info!(
        "2D scan: plane {}, n = {}..={}",
        plane.label(),
        cfg.grid2d.n_min,
        cfg.grid2d.n_max
    );
    Ok(ns
        .par_iter()
        .map(|&n| {
            let result = grid_2d(n, params.spacing, plane)
                .map(|g| g.with_uniform_zfs(params.d0))
                .and_then(|g| evaluate(&g, &params, &cfg.solver, cfg.seed));
            let (point, status) = settle(result, &format!("{} n = {n}", plane.label()));
            let (amplitude, lambda) = amp_lambda(&point);
            Grid2dRecord {
                n,
                plane,
                amplitude,
                lambda,
                status,
            }
        })
        .collect())
}

/// Mean and sample standard deviation (`n − 1` denominator, 0 for one value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

struct Rep {
    point: Result<PointResult>,
    resamples: usize,
}

fn noise_rep(base: &SpinGeometry, params: &ModelParams, cfg: &ScanConfig, noise: &NoiseSpec, rep: u64) -> Rep {
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    match perturb(base, noise, &mut rng) {
        Ok(p) => {
            if p.resamples > 0 {
                info!("rep {rep}: {} coincident draws resampled", p.resamples);
            }
            Rep {
                point: evaluate(&p.geometry, params, &cfg.solver, noise.seed),
                resamples: p.resamples,
            }
        }
        Err(e) => Rep {
            point: Err(e),
            resamples: crate::model::MAX_RESAMPLES,
        },
    }
}

/// Statistics over `reps` perturbed copies of one base geometry.
pub fn run_noise_cell(
    base: &SpinGeometry,
    cfg: &ScanConfig,
    sigma_d: f64,
    sigma_r: f64,
    cell: u64,
) -> Result<NoiseRecord> {
    let params = cfg.model();
    let reps: Vec<Rep> = (0..cfg.reps as u64)
        .into_par_iter()
        .map(|rep| {
            let noise = NoiseSpec {
                sigma_d,
                sigma_r,
                seed: split_seed(cfg.seed, cell, rep),
            };
            noise_rep(base, &params, cfg, &noise, rep)
        })
        .collect();
    let resamples = reps.iter().map(|r| r.resamples).sum();
    let mut amps = Vec::with_capacity(reps.len());
    let mut lams = Vec::with_capacity(reps.len());
    let mut first_error: Option<Error> = None;
    for r in reps {
        match r.point {
            Ok(p) => {
                amps.push(p.amplitude);
                lams.push(p.lambda);
            }
            Err(e) => {
                warn!("sigma_d = {sigma_d}, sigma_r = {sigma_r}: {e}");
                first_error.get_or_insert(e);
            }
        }
    }
    let failed = cfg.reps - amps.len();
    let status = match first_error {
        Some(e) if failed as f64 > MAX_FAILED_FRACTION * cfg.reps as f64 => e.status_tag().to_string(),
        _ => STATUS_OK.to_string(),
    };
    let (mean_amplitude, std_amplitude) = mean_std(&amps);
    let (mean_lambda, std_lambda) = mean_std(&lams);
    Ok(NoiseRecord {
        sigma_d_ghz: sigma_d,
        sigma_r_angstrom: sigma_r,
        mean_amplitude,
        std_amplitude,
        mean_lambda,
        std_lambda,
        reps: amps.len(),
        resamples,
        status,
    })
}

/// Heat-map grid over the configured widths, row-major with the zero-field
/// width as the outer index. Cell `k` seeds its repetitions with
/// [`split_seed`]`(seed, k, rep)`.
pub fn run_noise_map(cfg: &ScanConfig) -> Result<Vec<NoiseRecord>> {
    cfg.validate()?;
    let base = chain_y(cfg.noise.n, cfg.spacing)?.with_uniform_zfs(cfg.d0);
    let sd = cfg.noise.sigma_d_axis(cfg.d0);
    let sr = cfg.noise.sigma_r_axis();
    info!("noise map: {} x {} cells, {} reps each", sd.len(), sr.len(), cfg.reps);
    let cells: Vec<(f64, f64)> = sd.iter().flat_map(|&d| sr.iter().map(move |&r| (d, r))).collect();
    cells
        .par_iter()
        .enumerate()
        .map(|(k, &(d, r))| run_noise_cell(&base, cfg, d, r, k as u64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_seed_separates_streams() {
        let a = split_seed(7, 0, 1);
        let b = split_seed(7, 1, 0);
        let c = split_seed(8, 0, 1);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, split_seed(7, 0, 1));
    }

    #[test]
    fn mix64_reference_value() {
        // First output of SplitMix64 seeded with 0.
        assert_eq!(mix64(0), 0xe220_a839_7b1d_cdaf);
    }

    #[test]
    fn mean_std_sample_convention() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_std(&[3.0]), (3.0, 0.0));
        assert!(mean_std(&[]).0.is_nan());
    }
}
