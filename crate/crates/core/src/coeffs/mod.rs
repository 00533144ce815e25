//! Plane-wave lattice and the plane-wave ↔ tensor-wavelet basis change.

pub mod grid;
pub mod table;

pub use grid::PlaneWaveGrid;
pub use table::{axis_kind, d_1d, Block, CoefficientTable, MultiIndex};
