//! Optical tomograms of Kerr-evolved coherent, photon-added coherent and
//! cat states, with amplitude-decay and phase-damping channels.
//!
//! States live in a truncated Fock basis. Tomograms are sampled on a uniform
//! (θ, X) lattice, either from a pure state vector or from a density matrix.

pub mod decoherence;
pub mod error;
pub mod fock;
pub mod kerr;
pub mod special;
pub mod states;
pub mod tomography;

pub use decoherence::{
    amplitude_decay, amplitude_decay_closed, longtime_amplitude_tomogram, longtime_phase_tomogram,
    phase_damping, phase_damping_closed, photon_number_distribution, ChannelKind, ChannelParams,
};
pub use error::{Error, Result};
pub use fock::{
    outer_product, oscillator_functions, quadrature_wavefunction, truncation_dim, DensityMatrix,
    FockVector, TruncationPolicy,
};
pub use kerr::{
    decompose_fractional, evolve, fourier_coefficients, fractional_revival_time, revival_time,
    Component, Flavor, KerrParams, SuperpositionDecomposition,
};
pub use states::{
    cat_state, coherent_state, mean_photon_number, photon_added_state, CatParams, CoherentParams,
    InitialState, Parity, PhotonAddedParams,
};
pub use tomography::{
    tomogram_coherent_t0, tomogram_fractional_closed, tomogram_mixed, tomogram_pure,
    tomogram_vacuum, verify_tomogram, QuadratureGrid, TomogramGrid, TomogramReport,
};
