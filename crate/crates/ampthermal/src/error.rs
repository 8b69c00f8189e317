use thiserror::Error;

/// Errors shared across the whole crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error(
        "unphysical regime: g^2*nbar/(nbar+1) = {ratio} >= 1; \
         the amplified state diverges (critical gain g_c = {critical_gain})"
    )]
    UnphysicalRegime { ratio: f64, critical_gain: f64 },

    #[error(
        "parameters within the guard band of the critical boundary \
         (g^2*nbar/(nbar+1) = {ratio}); refusing to compute a divergent mean photon number"
    )]
    NearCritical { ratio: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("cannot subtract {m} photons from the vacuum (amplified mean photon number is 0)")]
    SubtractionFromVacuum { m: u32 },

    #[error("normalization constant overflows f64 (log value {ln_value})")]
    Overflow { ln_value: f64 },

    #[error("Fock cutoff {k_max} insufficient to certify tail mass below {tail_eps}")]
    CutoffExceeded { k_max: usize, tail_eps: f64 },

    #[error("state tail mass {tail_mass} exceeds the {limit} bound required for this operation")]
    TailTooLarge { tail_mass: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
