//! Single-excitation dynamics: basis changes, free and atom-coupled
//! evolution, energy densities and decay fits.

pub mod atom;
pub mod bessel;
pub mod fit;
pub mod observables;
pub mod propagate;
pub mod state;

pub use atom::{
    evolve_free, evolve_with_atom, expectation, plane_wave_couplings, wavelet_couplings, AtomField, AtomParams,
    Trajectory, NORM_DRIFT_TOL,
};
pub use fit::{default_window, fit_decay, fit_log_linear, DecayFit};
pub use observables::{energy_density, energy_density_plane_wave, field_energy, DensityMap};
pub use propagate::{default_rk4_dt, propagate, Diagonal, Generator, Integrator};
pub use state::{gaussian_state, to_plane_wave, to_wavelet, Basis, GaussianPhotonSpec, SingleExcitationState};
