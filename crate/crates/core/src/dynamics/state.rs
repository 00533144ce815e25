//! Single-excitation states: one photon over a mode set, plus an optional
//! excited-atom amplitude.

use num_complex::Complex64;

use crate::coeffs::{CoefficientTable, PlaneWaveGrid};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    PlaneWave,
    Wavelet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleExcitationState {
    pub basis: Basis,
    pub amps: Vec<Complex64>,
    pub atom: Option<Complex64>,
    pub time: f64,
}

impl SingleExcitationState {
    pub fn new(basis: Basis, amps: Vec<Complex64>) -> Self {
        SingleExcitationState { basis, amps, atom: None, time: 0.0 }
    }

    pub fn vacuum(basis: Basis, n: usize) -> Self {
        Self::new(basis, vec![Complex64::new(0.0, 0.0); n])
    }

    /// Field vacuum with the atom excited.
    pub fn excited_atom(basis: Basis, n: usize) -> Self {
        SingleExcitationState { atom: Some(Complex64::new(1.0, 0.0)), ..Self::vacuum(basis, n) }
    }

    pub fn field_norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.field_norm_sqr() + self.atom.map_or(0.0, |b| b.norm_sqr())
    }

    /// |⟨self|other⟩| over field and atom amplitudes.
    pub fn fidelity(&self, other: &SingleExcitationState) -> f64 {
        let mut acc: Complex64 = self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum();
        if let (Some(a), Some(b)) = (self.atom, other.atom) {
            acc += a.conj() * b;
        }
        acc.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPhotonSpec {
    pub k0: [f64; 3],
    pub r0: [f64; 3],
    pub dk2: f64,
}

/// c_k ∝ e^{−ik·r0} exp(−|k−k0|²/(4Δk²)), normalized on the grid.
pub fn gaussian_state(grid: &PlaneWaveGrid, spec: &GaussianPhotonSpec) -> Result<SingleExcitationState> {
    if !(spec.dk2 > 0.0) {
        return Err(Error::config("dk2", format!("must be positive, got {}", spec.dk2)));
    }
    let amps: Vec<Complex64> = (0..grid.len())
        .map(|j| {
            let k = grid.k(j);
            let d2: f64 = (0..3).map(|a| (k[a] - spec.k0[a]).powi(2)).sum();
            let ph: f64 = (0..3).map(|a| k[a] * spec.r0[a]).sum();
            Complex64::from_polar((-d2 / (4.0 * spec.dk2)).exp(), -ph)
        })
        .collect();
    if amps.iter().all(|c| c.norm() < 1e-300) {
        return Err(Error::config("k0", "Gaussian spectrum lies entirely outside the plane-wave grid"));
    }
    let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    Ok(SingleExcitationState::new(Basis::PlaneWave, amps.into_iter().map(|c| c / norm).collect()))
}

/// c_μ = Σ_k d_{kμ} c_k.
pub fn to_wavelet(state: &SingleExcitationState, table: &CoefficientTable) -> Result<SingleExcitationState> {
    match state.basis {
        Basis::Wavelet => Ok(state.clone()),
        Basis::PlaneWave => {
            if state.amps.len() != table.grid().len() {
                return Err(Error::Parameter("state does not live on the table's plane-wave grid".into()));
            }
            Ok(SingleExcitationState {
                basis: Basis::Wavelet,
                amps: table.to_wavelet(&state.amps),
                atom: state.atom,
                time: state.time,
            })
        }
    }
}

/// c_k = Σ_μ d*_{kμ} c_μ.
pub fn to_plane_wave(state: &SingleExcitationState, table: &CoefficientTable) -> Result<SingleExcitationState> {
    match state.basis {
        Basis::PlaneWave => Ok(state.clone()),
        Basis::Wavelet => {
            if state.amps.len() != table.len() {
                return Err(Error::Parameter("state does not live on the table's index set".into()));
            }
            Ok(SingleExcitationState {
                basis: Basis::PlaneWave,
                amps: table.to_plane_wave(&state.amps),
                atom: state.atom,
                time: state.time,
            })
        }
    }
}

