use thiserror::Error;

/// Errors raised by the simulation engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The Fock truncation needed for the requested state exceeds the hard cap.
    #[error("capacity error: mean photon number {mean_photon} needs a Fock basis beyond the cap n_max = {cap}")]
    Capacity { mean_photon: f64, cap: usize },

    /// The truncated basis loses more probability than the tail bound allows.
    #[error("precision error: truncation at n_max = {n_max} loses {deficit:e} of the norm (bound {bound:e})")]
    Precision { n_max: usize, deficit: f64, bound: f64 },

    /// An input violates a documented precondition (e.g. an unnormalized state).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A matrix argument is malformed (e.g. not Hermitian).
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
