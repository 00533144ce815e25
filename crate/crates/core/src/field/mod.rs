//! Wavelet mode functions and the free-field coupling Hamiltonian.

pub mod hamiltonian;
pub mod modes;
pub mod sparse;

pub use hamiltonian::{assemble_hamiltonian, coupling_f, coupling_f_complex, coupling_w, displacement, CouplingMatrix};
pub use modes::{field_from_amplitudes, mode_b, mode_e, mode_e_at, FieldKind, ModeField, SpatialGrid};
pub use sparse::CsrMatrix;
