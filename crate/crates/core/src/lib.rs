//! Dipole-coupled triplet-spin ensembles and the particle-hole
//! large-eigenvalue entanglement witness.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: complex Hermitian matrices, Kronecker products, a dense
//!   eigensolver and a restarted Lanczos solver for matrix-free operators.
//! * [`model`]: spin-1 operators, zero-field splitting and dipole
//!   Hamiltonians, the microwave transition operator, geometries and noise.
//! * [`witness`]: transition amplitudes, the particle-hole reduced density
//!   matrix, its modified form and the large eigenvalue λ.
//! * [`experiments`]: distance, size, 2D and noise scans plus power-law fits.
//! * [`io`]: configuration files, CSV tables, SVG plots, run manifests and
//!   the command-line front end.
//!
//! ```
//! use spinwit::experiments::{evaluate, PipelineOptions};
//! use spinwit::model::{chain_y, ModelParams};
//!
//! let params = ModelParams::default();
//! let geom = chain_y(3, params.spacing).unwrap();
//! let point = evaluate(&geom, &params, &PipelineOptions::default(), 0).unwrap();
//! assert!((point.lambda - 1.36).abs() < 0.05);
//! ```

// `!(x > 0.0)` rejects NaN together with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod io;
pub mod linalg;
pub mod model;
pub mod witness;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/spin_model.md")]
    mod spin_model {}
    #[doc = include_str!("../../../book/src/eigensolvers.md")]
    mod eigensolvers {}
    #[doc = include_str!("../../../book/src/witness.md")]
    mod witness {}
    #[doc = include_str!("../../../book/src/amplitudes.md")]
    mod amplitudes {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
