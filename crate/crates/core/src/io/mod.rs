//! Configuration files, CSV tables, SVG plots, run manifests and the CLI.
//!
//! Configuration is TOML. Top-level keys hold the model and Monte Carlo
//! settings; each scan family has its own table:
//!
//! ```toml
//! d0 = 2.87          # GHz
//! kappa = 0.05204    # GHz nm^3
//! spacing = 5.125    # Å
//! reps = 100
//! seed = 0
//!
//! [distance]
//! n = 3
//! r_min = 2.0
//! r_max = 22.0
//! r_step = 0.5
//!
//! [size]
//! n_min = 1
//! n_max = 9
//! interacting = true
//!
//! [grid2d]
//! n_min = 3
//! n_max = 9
//! plane = "ZY"
//!
//! [noise]
//! n = 3
//! sigma_d_max_factor = 1.5
//! sigma_r_max = 2.5
//! steps = 11
//!
//! [solver]
//! ground_reference = "eigenstate"
//! dense_max_dim = 2187
//! degeneracy_tol = 1e-9
//! lanczos_tol = 1e-10
//! ```
//!
//! Floating-point CSV values carry 12 significant digits. All files are
//! written to a temporary sibling and renamed into place.

pub mod cli;
mod config;
mod manifest;
mod plot;
mod table;

pub use config::{dump_config, parse_config, parse_config_str, Override, Overrides};
pub use manifest::{now_rfc3339, RunManifest, MANIFEST_FILE};
pub use plot::{emit_plot, render_plot, PlotData, PlotKind};
pub use table::{
    csv_bytes, format_sig, read_csv, read_xy, sha256_hex, write_atomic, write_csv, CsvRow, OutputEntry,
    SIGNIFICANT_DIGITS,
};
