//! Python bindings: wavelet families, the basis change, the coupling
//! Hamiltonian and the single-excitation dynamics.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use wavequant_core::coeffs::{CoefficientTable, PlaneWaveGrid};
use wavequant_core::dynamics::{
    self, evolve_free, evolve_with_atom, fit_decay, plane_wave_couplings, wavelet_couplings, AtomParams, Basis,
    Diagonal, GaussianPhotonSpec, Integrator, SingleExcitationState,
};
use wavequant_core::field::{self, CouplingMatrix};
use wavequant_core::mra::{Kind, Wavelet1D};
use wavequant_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Numerical(_) | Error::Io(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn kind(name: &str) -> PyResult<Kind> {
    match name {
        "phi" | "scaling" => Ok(Kind::Scaling),
        "psi" | "wavelet" => Ok(Kind::Wavelet),
        _ => Err(PyValueError::new_err(format!("kind must be 'phi' or 'psi', got '{name}'"))),
    }
}

fn vec3(v: &[f64]) -> PyResult<[f64; 3]> {
    if v.is_empty() || v.len() > 3 {
        return Err(PyValueError::new_err("expected 1 to 3 components"));
    }
    let mut out = [0.0; 3];
    out[..v.len()].copy_from_slice(v);
    Ok(out)
}

/// A 1D wavelet family: 'shannon', 'meyer' or 'daubechiesN'.
#[pyclass(name = "Wavelet", frozen)]
struct PyWavelet {
    inner: Wavelet1D,
}

#[pymethods]
impl PyWavelet {
    #[new]
    #[pyo3(signature = (name, eps=None))]
    fn new(name: &str, eps: Option<f64>) -> PyResult<Self> {
        let inner = match eps {
            Some(e) if name == "meyer" => Wavelet1D::meyer_with_transition(e),
            Some(_) => return Err(PyValueError::new_err("eps applies to the meyer family only")),
            None => Wavelet1D::from_name(name),
        }
        .map_err(py_err)?;
        Ok(PyWavelet { inner })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.to_string()
    }

    /// φ or ψ at t.
    fn eval(&self, kind_name: &str, t: f64) -> PyResult<f64> {
        Ok(self.inner.eval(kind(kind_name)?, t))
    }

    /// f̂(ω) with f̂(ω) = (2π)^{-1/2} ∫ f(t) e^{-iωt} dt.
    fn fourier(&self, kind_name: &str, omega: f64) -> PyResult<Complex64> {
        Ok(self.inner.fourier(kind(kind_name)?, omega))
    }

    /// |k| interval resolved exactly by scales s_min..=s_max, or None.
    fn covered_band(&self, s_min: i32, s_max: i32) -> Option<(f64, f64)> {
        self.inner.covered_band(s_min, s_max)
    }

    fn __repr__(&self) -> String {
        format!("Wavelet('{}')", self.inner)
    }
}

/// Plane-wave lattice k = 2πn/L of a periodic box, optionally band-limited.
#[pyclass(name = "PlaneWaveGrid", frozen)]
struct PyGrid {
    inner: PlaneWaveGrid,
}

#[pymethods]
impl PyGrid {
    #[new]
    #[pyo3(signature = (dim, box_len, n_max, band=None))]
    fn new(dim: usize, box_len: f64, n_max: i32, band: Option<(f64, f64)>) -> PyResult<Self> {
        Ok(PyGrid { inner: PlaneWaveGrid::build(dim, box_len, n_max, band).map_err(py_err)? })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn k(&self, j: usize) -> PyResult<Vec<f64>> {
        if j >= self.inner.len() {
            return Err(PyValueError::new_err("index out of range"));
        }
        Ok(self.inner.k(j)[..self.inner.dim()].to_vec())
    }

    fn omegas(&self) -> Vec<f64> {
        self.inner.omegas()
    }

    /// Normalized Gaussian photon amplitudes c_k.
    fn gaussian_state(&self, k0: Vec<f64>, r0: Vec<f64>, dk2: f64) -> PyResult<Vec<Complex64>> {
        let spec = GaussianPhotonSpec { k0: vec3(&k0)?, r0: vec3(&r0)?, dk2 };
        Ok(dynamics::gaussian_state(&self.inner, &spec).map_err(py_err)?.amps)
    }

    /// c_k(t) = c_k(0) e^{-iω_k t}.
    fn evolve(&self, amps: Vec<Complex64>, t: f64) -> PyResult<Vec<Complex64>> {
        let st = SingleExcitationState::new(Basis::PlaneWave, amps);
        let out = evolve_free(&st, &Diagonal(self.inner.omegas()), t, Integrator::default()).map_err(py_err)?;
        Ok(out.amps)
    }
}

/// Basis-change coefficients between a plane-wave grid and wavelet modes.
#[pyclass(name = "CoefficientTable", frozen)]
struct PyTable {
    inner: CoefficientTable,
}

#[pymethods]
impl PyTable {
    #[new]
    #[pyo3(signature = (wavelet, grid, s_min, s_max, include_scaling=false))]
    fn new(wavelet: &PyWavelet, grid: &PyGrid, s_min: i32, s_max: i32, include_scaling: bool) -> PyResult<Self> {
        let inner = CoefficientTable::build_with(&wavelet.inner, &grid.inner, s_min, s_max, include_scaling)
            .map_err(py_err)?;
        Ok(PyTable { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn covers_grid(&self) -> bool {
        self.inner.covers_grid()
    }

    /// (s, (lx, ly, lz), i) of mode μ.
    fn index(&self, mu: usize) -> PyResult<(i32, (i64, i64, i64), u8)> {
        if mu >= self.inner.len() {
            return Err(PyValueError::new_err("index out of range"));
        }
        let m = self.inner.index(mu);
        Ok((m.s, (m.l[0], m.l[1], m.l[2]), m.i))
    }

    fn to_wavelet(&self, amps: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        if amps.len() != self.inner.grid().len() {
            return Err(PyValueError::new_err("length must equal the number of plane waves"));
        }
        Ok(self.inner.to_wavelet(&amps))
    }

    fn to_plane_wave(&self, amps: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        if amps.len() != self.inner.len() {
            return Err(PyValueError::new_err("length must equal the number of wavelet modes"));
        }
        Ok(self.inner.to_plane_wave(&amps))
    }

    /// Assembles the coupling matrix w.
    #[pyo3(signature = (sparsity_tol=None))]
    fn hamiltonian(&self, sparsity_tol: Option<f64>) -> PyResult<PyCoupling> {
        Ok(PyCoupling { inner: field::assemble_hamiltonian(&self.inner, sparsity_tol).map_err(py_err)? })
    }

    /// Excited-atom decay; returns a dict with the trajectory and the fit.
    #[pyo3(signature = (omega_a, dipole, position, t_end, dt_out, basis="wavelet", window=None))]
    #[allow(clippy::too_many_arguments)]
    fn atom_decay<'py>(
        &self,
        py: Python<'py>,
        omega_a: f64,
        dipole: f64,
        position: Vec<f64>,
        t_end: f64,
        dt_out: f64,
        basis: &str,
        window: Option<(f64, f64)>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let atom = AtomParams::new(omega_a, dipole, vec3(&position)?).map_err(py_err)?;
        let traj = match basis {
            "wavelet" => {
                let w = field::assemble_hamiltonian(&self.inner, None).map_err(py_err)?;
                let st = SingleExcitationState::excited_atom(Basis::Wavelet, self.inner.len());
                let g = wavelet_couplings(&self.inner, &atom);
                evolve_with_atom(&st, &w, &atom, g, t_end, dt_out, Integrator::default())
            }
            "plane-wave" => {
                let grid = self.inner.grid();
                let st = SingleExcitationState::excited_atom(Basis::PlaneWave, grid.len());
                let g = plane_wave_couplings(grid, &atom);
                evolve_with_atom(&st, &Diagonal(grid.omegas()), &atom, g, t_end, dt_out, Integrator::default())
            }
            _ => return Err(PyValueError::new_err("basis must be 'wavelet' or 'plane-wave'")),
        }
        .map_err(py_err)?;
        let fit = fit_decay(&traj, window.unwrap_or_else(|| dynamics::default_window(omega_a, t_end))).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("times", traj.times.clone())?;
        d.set_item("prob_atom", traj.prob_atom.clone())?;
        d.set_item("norm_field", traj.norm_field.clone())?;
        d.set_item("norm_drift", traj.norm_drift())?;
        d.set_item("gamma", fit.gamma)?;
        d.set_item("gamma_theory", fit.gamma_theory)?;
        d.set_item("r_squared", fit.r_squared)?;
        Ok(d)
    }
}

/// Real symmetric coupling matrix of the free field in the wavelet basis.
#[pyclass(name = "CouplingMatrix", frozen)]
struct PyCoupling {
    inner: CouplingMatrix,
}

#[pymethods]
impl PyCoupling {
    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn get(&self, row: usize, col: usize) -> PyResult<f64> {
        if row >= self.inner.n() || col >= self.inner.n() {
            return Err(PyValueError::new_err("index out of range"));
        }
        Ok(self.inner.get(row, col))
    }

    #[getter]
    fn zero_point(&self) -> f64 {
        self.inner.zero_point
    }

    #[getter]
    fn nnz_fraction(&self) -> f64 {
        self.inner.nnz_fraction()
    }

    /// Ascending eigenvalues (dense solve).
    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues()
    }

    /// c(t) = exp(-i w t) c(0).
    fn evolve(&self, amps: Vec<Complex64>, t: f64) -> PyResult<Vec<Complex64>> {
        let st = SingleExcitationState::new(Basis::Wavelet, amps);
        Ok(evolve_free(&st, &self.inner, t, Integrator::default()).map_err(py_err)?.amps)
    }
}

/// Runs the command-line front end with `args` (without the program name).
#[pyfunction]
fn run_cli(args: Vec<String>) -> i32 {
    let mut all = vec!["wavequant".to_string()];
    all.extend(args);
    wavequant_core::cli::main_with_args(all)
}

#[pymodule]
fn wavequant(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWavelet>()?;
    m.add_class::<PyGrid>()?;
    m.add_class::<PyTable>()?;
    m.add_class::<PyCoupling>()?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
