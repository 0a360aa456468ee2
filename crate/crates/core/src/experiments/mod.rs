//! The four experiment families and power-law fitting.
//!
//! Every scan evaluates [`evaluate`] on a family of geometries: the
//! Hamiltonian is diagonalized, the excited manifold with the largest
//! microwave transition amplitude `A` is selected and the witness `λ` is
//! computed on it. Points run in parallel but results keep grid order, and
//! a failed point is kept with its `status` set instead of aborting the scan.

mod config;
mod fit;
mod pipeline;
mod scans;

pub use config::{DistanceScan, Family, Grid2dScan, NoiseScan, ScanConfig, SizeScan};
pub use fit::{fit_power_law, PowerFit};
pub use pipeline::{
    evaluate, hamiltonian, solve, GroundReference, PipelineOptions, PointResult, BRIGHT_COUNT_THRESHOLD,
};
pub use scans::{
    mean_std, run_distance_scan, run_grid2d_scan, run_noise_cell, run_noise_map, run_size_scan, split_seed,
    DistanceRecord, Grid2dRecord, NoiseRecord, SizeRecord, MAX_FAILED_FRACTION, STATUS_OK,
};
