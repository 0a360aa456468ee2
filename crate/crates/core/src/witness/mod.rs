//! Transition amplitudes and the particle-hole large-eigenvalue witness.
//!
//! For a state `|ψ⟩` on `N` spin-1 sites, the site-local transitions
//! `E_{αβ} = |α⟩⟨β|` span `9N` particle-hole operators. Their pair
//! expectation values form the particle-hole RDM `G`; subtracting the product
//! of one-body expectations gives `G̃ = ⟨E_a† Q E_b⟩` with `Q = 1 − |ψ⟩⟨ψ|`,
//! which is positive semidefinite. Its largest eigenvalue `λ` is the witness:
//! uncorrelated product states give `λ ≤ 1`, and `λ` never exceeds `N/2`.

mod amplitudes;
mod collective;
mod rdm;

pub use amplitudes::{
    canonical_basis, max_amplitude_state, transition_amplitudes, AmplitudeEntry, AmplitudeTable, BRIGHT_THRESHOLD,
};
pub use collective::{collective_operator, sqrt_relation_check, CollectiveOperator, SqrtRelation};
pub use rdm::{
    apply_transition, lambda_witness, modified_ph_rdm, one_body_rdm, ph_index, ph_rdm, witness_of_state, PhRdm,
    Witness, NORM_TOL,
};

/// Smallest eigenvalue of `G̃` tolerated as rounding.
pub const PSD_TOL: f64 = 1e-10;
