//! Noiselessly amplified thermal states and their multi-photon
//! added/subtracted variants.
//!
//! The amplifier `g^n` maps a thermal state with mean photon number
//! `nbar` to another thermal state with `Nbar = g^2 nbar / (1 - nbar
//! (g^2 - 1))`, physical only while `g^2 nbar / (nbar + 1) < 1`. On top
//! of that state, `m`-photon addition or subtraction produces diagonal
//! non-Gaussian states whose photon-number distributions, purities, and
//! Wigner functions all have closed forms — and this crate computes
//! each of them twice: once from the closed form and once from an
//! independent brute-force witness (operator pipeline in a truncated
//! Fock space, Laguerre-series Wigner kernel, diagonal purity sum).
//!
//! Modules:
//! - [`params`]: parameter validation, the amplification map, the
//!   physicality region, normalization constants.
//! - [`fock`]: photon-number distributions, truncated states, the
//!   operator-pipeline oracle, density-matrix elements.
//! - [`purity`]: terminating-hypergeometric purities and moments.
//! - [`wigner`]: closed-form Wigner evaluation, the Laguerre oracle,
//!   negativity diagnostics, grids and sections.
//! - [`verify`]: the cross-check suite behind `ampthermal verify`.
//!
//! The `examples/` directory holds one runnable example per capability;
//! the `ampthermal` binary exposes the same functionality as
//! subcommands emitting CSV/JSON.

pub mod cli;
pub mod error;
pub mod fock;
pub mod output;
pub mod params;
pub mod purity;
pub mod verify;
pub mod wigner;

pub use error::{Error, Result};
pub use fock::{build_state, matrix_element, oracle_pipeline, pnd_value, DiagonalFockState};
pub use params::{
    amplified_params, classify_region, critical_gain, critical_nbar, normalization_constants,
    AmplifiedParams, ModelParams, RegionClass, StateSpec, Variant,
};
pub use purity::{
    hyp2f1_terminating, mean_photon_number, purity_analytic, purity_numeric, PurityResult,
};
pub use verify::{run_verification, VerificationReport, VerifyConfig};
pub use wigner::{
    bilinear_derivative, min_section, negativity_radius_m1, nongaussian_term, wigner_grid,
    wigner_oracle, wigner_thermal, wigner_value, PhasePoint, WignerGrid,
};
