//! Two-level atom coupled to the field in the rotating-wave approximation.
//!
//! The single-excitation vector is laid out as [β, c_0, c_1, …] and evolves
//! under
//!   iβ̇ = ω_a β − Σ_μ g_μ c_μ,    iċ_μ = Σ_ν w_μν c_ν − g*_μ β,
//! with g_μ = D·u^E_μ(r0)_z.

use num_complex::Complex64;

use super::propagate::{propagate, Generator, Integrator};
use super::state::SingleExcitationState;
use crate::coeffs::{CoefficientTable, PlaneWaveGrid};
use crate::error::{Error, Result};
use crate::field::mode_e_at;
use crate::io::{fmt_f64, CsvWriter};

/// Largest tolerated drift of ‖c‖² + |β|² over a run.
pub const NORM_DRIFT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomParams {
    pub omega_a: f64,
    pub dipole: f64,
    pub position: [f64; 3],
}

impl AtomParams {
    pub fn new(omega_a: f64, dipole: f64, position: [f64; 3]) -> Result<Self> {
        if !(omega_a > 0.0) || !omega_a.is_finite() {
            return Err(Error::config("omega_a", format!("must be positive, got {omega_a}")));
        }
        if !dipole.is_finite() {
            return Err(Error::config("D", "must be finite"));
        }
        Ok(AtomParams { omega_a, dipole, position })
    }

    /// Golden-rule rate ½D²ω_a² for the 2D single-polarization continuum.
    pub fn gamma_theory(&self) -> f64 {
        0.5 * self.dipole * self.dipole * self.omega_a * self.omega_a
    }
}

/// Couplings g_μ = D·u^E_μ(r0) for wavelet modes.
pub fn wavelet_couplings(table: &CoefficientTable, atom: &AtomParams) -> Vec<Complex64> {
    mode_e_at(table, atom.position).into_iter().map(|u| u * atom.dipole).collect()
}

/// Couplings g_k = D·u^E_k(r0) for plane-wave modes.
pub fn plane_wave_couplings(grid: &PlaneWaveGrid, atom: &AtomParams) -> Vec<Complex64> {
    let norm = grid.box_len().powf(-(grid.dim() as f64) / 2.0);
    (0..grid.len())
        .map(|j| {
            let k = grid.k(j);
            let ph: f64 = (0..3).map(|a| k[a] * atom.position[a]).sum();
            Complex64::new(0.0, -norm) * Complex64::from_polar((grid.omega(j) / 2.0).sqrt(), ph) * atom.dipole
        })
        .collect()
}

/// Atom + field generator built on top of a field generator.
pub struct AtomField<'a> {
    pub field: &'a dyn Generator,
    pub omega_a: f64,
    pub g: Vec<Complex64>,
}

impl<'a> AtomField<'a> {
    pub fn new(field: &'a dyn Generator, omega_a: f64, g: Vec<Complex64>) -> Result<Self> {
        if g.len() != field.dim() {
            return Err(Error::Parameter(format!(
                "{} couplings for a field generator of dimension {}",
                g.len(),
                field.dim()
            )));
        }
        Ok(AtomField { field, omega_a, g })
    }
}

impl Generator for AtomField<'_> {
    fn dim(&self) -> usize {
        self.field.dim() + 1
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        let beta = x[0];
        self.field.apply(&x[1..], &mut y[1..]);
        let mut gc = Complex64::new(0.0, 0.0);
        for ((o, c), g) in y[1..].iter_mut().zip(&x[1..]).zip(&self.g) {
            gc += g * c;
            *o -= g.conj() * beta;
        }
        y[0] = beta * self.omega_a - gc;
    }

    fn bounds(&self) -> (f64, f64) {
        // The coupling block has operator norm ‖g‖.
        let (lo, hi) = self.field.bounds();
        let gn = self.g.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
        (lo.min(self.omega_a) - gn, hi.max(self.omega_a) + gn)
    }
}

/// ⟨x|H|x⟩.
pub fn expectation(h: &dyn Generator, x: &[Complex64]) -> f64 {
    let mut y = vec![Complex64::new(0.0, 0.0); x.len()];
    h.apply(x, &mut y);
    x.iter().zip(&y).map(|(a, b)| (a.conj() * b).re).sum()
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub atom: AtomParams,
    pub times: Vec<f64>,
    pub prob_atom: Vec<f64>,
    pub norm_field: Vec<f64>,
    pub energy: Vec<f64>,
    pub final_state: SingleExcitationState,
}

impl Trajectory {
    pub fn t_end(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }

    /// Largest |‖c‖² + |β|² − initial| along the samples.
    pub fn norm_drift(&self) -> f64 {
        let n0 = self.prob_atom[0] + self.norm_field[0];
        self.prob_atom
            .iter()
            .zip(&self.norm_field)
            .map(|(p, f)| (p + f - n0).abs())
            .fold(0.0, f64::max)
    }

    pub fn energy_drift(&self) -> f64 {
        self.energy.iter().map(|e| (e - self.energy[0]).abs()).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> CsvWriter {
        let mut w = CsvWriter::new("t,prob_atom,norm_field");
        for j in 0..self.times.len() {
            w.row_f64(&[self.times[j], self.prob_atom[j], self.norm_field[j]]);
        }
        w
    }

    pub fn summary_lines(&self) -> Vec<String> {
        vec![
            format!("omega_a = {}", fmt_f64(self.atom.omega_a)),
            format!("D = {}", fmt_f64(self.atom.dipole)),
            format!("samples = {}", self.times.len()),
            format!("final_prob_atom = {}", fmt_f64(*self.prob_atom.last().unwrap())),
            format!("norm_drift = {}", fmt_f64(self.norm_drift())),
            format!("energy_drift = {}", fmt_f64(self.energy_drift())),
        ]
    }
}

/// Evolves atom + field from `state` to t_end, sampling every `dt_out`.
///
/// `g` holds the couplings for the state's basis (see [`wavelet_couplings`]
/// and [`plane_wave_couplings`]); `field` must act on that same basis.
pub fn evolve_with_atom(
    state: &SingleExcitationState,
    field: &dyn Generator,
    atom: &AtomParams,
    g: Vec<Complex64>,
    t_end: f64,
    dt_out: f64,
    integrator: Integrator,
) -> Result<Trajectory> {
    if !(dt_out > 0.0) {
        return Err(Error::config("dt_out", format!("must be positive, got {dt_out}")));
    }
    if !(t_end >= 0.0) {
        return Err(Error::config("t_end", format!("must be non-negative, got {t_end}")));
    }
    if state.amps.len() != field.dim() {
        return Err(Error::Parameter("state and field generator have different dimensions".into()));
    }
    let h = AtomField::new(field, atom.omega_a, g)?;
    let mut x = Vec::with_capacity(h.dim());
    x.push(state.atom.unwrap_or_default());
    x.extend_from_slice(&state.amps);

    let steps = (t_end / dt_out).round() as usize;
    let mut traj = Trajectory {
        atom: *atom,
        times: Vec::with_capacity(steps + 1),
        prob_atom: Vec::with_capacity(steps + 1),
        norm_field: Vec::with_capacity(steps + 1),
        energy: Vec::with_capacity(steps + 1),
        final_state: state.clone(),
    };
    let n0: f64 = x.iter().map(|c| c.norm_sqr()).sum();
    let record = |traj: &mut Trajectory, t: f64, x: &[Complex64]| {
        traj.times.push(t);
        traj.prob_atom.push(x[0].norm_sqr());
        traj.norm_field.push(x[1..].iter().map(|c| c.norm_sqr()).sum());
        traj.energy.push(expectation(&h, x));
    };
    record(&mut traj, state.time, &x);
    for j in 1..=steps {
        propagate(&h, &mut x, dt_out, integrator)?;
        let t = state.time + j as f64 * dt_out;
        record(&mut traj, t, &x);
        let n: f64 = traj.prob_atom[j] + traj.norm_field[j];
        if (n - n0).abs() > NORM_DRIFT_TOL {
            return Err(Error::Numerical(format!(
                "norm drifted by {:.3e} at t = {t} (bound {NORM_DRIFT_TOL:e})",
                n - n0
            )));
        }
    }
    traj.final_state = SingleExcitationState {
        basis: state.basis,
        amps: x[1..].to_vec(),
        atom: Some(x[0]),
        time: state.time + steps as f64 * dt_out,
    };
    Ok(traj)
}

/// Free field evolution by duration `t`; the zero-point energy is a global
/// phase and is not included in the generator.
pub fn evolve_free(
    state: &SingleExcitationState,
    field: &dyn Generator,
    t: f64,
    integrator: Integrator,
) -> Result<SingleExcitationState> {
    if state.amps.len() != field.dim() {
        return Err(Error::Parameter("state and field generator have different dimensions".into()));
    }
    let n0 = state.field_norm_sqr();
    let mut amps = state.amps.clone();
    propagate(field, &mut amps, t, integrator)?;
    let out = SingleExcitationState { basis: state.basis, amps, atom: state.atom, time: state.time + t };
    let drift = (out.field_norm_sqr() - n0).abs();
    if drift > NORM_DRIFT_TOL {
        return Err(Error::Numerical(format!("free evolution changed the norm by {drift:.3e}")));
    }
    Ok(out)
}
