//! Mode couplings w_{μν} = Σ_k ω_k d*_{k,μ} d_{k,ν} and the free-field
//! Hamiltonian in the single-excitation sector.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::sparse::CsrMatrix;
use crate::coeffs::{CoefficientTable, MultiIndex};
use crate::error::{Error, Result};
use crate::io::{fmt_f64, CsvWriter};

/// Bound on |Im w| before the imaginary part is discarded.
pub const IMAG_TOL: f64 = 1e-10;

pub fn coupling_w(table: &CoefficientTable, mu: &MultiIndex, nu: &MultiIndex) -> Result<f64> {
    let grid = table.grid();
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, n) in grid.ns().iter().enumerate() {
        acc += grid.omega(j) * table.coefficient_n(*n, mu).conj() * table.coefficient_n(*n, nu);
    }
    real_part(acc, "w")
}

fn real_part(z: Complex64, what: &str) -> Result<f64> {
    if z.im.abs() > IMAG_TOL {
        return Err(Error::Numerical(format!(
            "{what} has imaginary part {:.3e} (bound {IMAG_TOL:e})",
            z.im
        )));
    }
    Ok(z.re)
}

/// F^{ii'}_{ss'}(x) = Σ_k ω_k d*^i_{k,s0} d^{i'}_{k,s'0} e^{ik·x}, before dropping Im.
pub fn coupling_f_complex(table: &CoefficientTable, s: i32, i: u8, s2: i32, i2: u8, x: [f64; 3]) -> Complex64 {
    let grid = table.grid();
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, n) in grid.ns().iter().enumerate() {
        let k = grid.k(j);
        let ph = k[0] * x[0] + k[1] * x[1] + k[2] * x[2];
        acc += grid.omega(j)
            * table.base_coefficient(*n, s, i).conj()
            * table.base_coefficient(*n, s2, i2)
            * Complex64::from_polar(1.0, ph);
    }
    acc
}

pub fn coupling_f(table: &CoefficientTable, s: i32, i: u8, s2: i32, i2: u8, x: [f64; 3]) -> Result<f64> {
    real_part(coupling_f_complex(table, s, i, s2, i2, x), "F")
}

/// Displacement 2^{-s'}l' − 2^{-s}l between two modes.
pub fn displacement(mu: &MultiIndex, nu: &MultiIndex) -> [f64; 3] {
    let a = 2f64.powi(-mu.s);
    let b = 2f64.powi(-nu.s);
    [
        b * nu.l[0] as f64 - a * mu.l[0] as f64,
        b * nu.l[1] as f64 - a * mu.l[1] as f64,
        b * nu.l[2] as f64 - a * mu.l[2] as f64,
    ]
}

#[derive(Debug, Clone)]
pub struct CouplingMatrix {
    pub matrix: CsrMatrix,
    pub sparsity_tol: f64,
    /// ½ Σ_μ w_μμ (one polarization).
    pub zero_point: f64,
    /// Frobenius norm of the entries dropped below `sparsity_tol`.
    pub dropped_norm: f64,
    /// Spectrum enclosure [λ_lo, λ_hi].
    pub bounds: (f64, f64),
    pub max_imag: f64,
}

/// F on the displacement lattice of spacing 2^{-m}, m = max(s, s'), for one block pair.
fn f_lattice(table: &CoefficientTable, s: i32, i: u8, s2: i32, i2: u8) -> Vec<Complex64> {
    let grid = table.grid();
    let v: Vec<Complex64> = grid
        .ns()
        .iter()
        .enumerate()
        .map(|(j, n)| grid.omega(j) * table.base_coefficient(*n, s, i).conj() * table.base_coefficient(*n, s2, i2))
        .collect();
    table.lattice_sum(&v, s.max(s2))
}

/// Assemble w over the whole index set, reusing one F table per (s, i, s', i').
///
/// `sparsity_tol = None` selects 1e-10 × the largest diagonal entry.
pub fn assemble_hamiltonian(table: &CoefficientTable, sparsity_tol: Option<f64>) -> Result<CouplingMatrix> {
    let blocks = table.blocks().to_vec();
    let dim = table.dim();
    let pairs: Vec<(usize, usize)> = (0..blocks.len())
        .flat_map(|a| (0..blocks.len()).map(move |b| (a, b)))
        .collect();
    let cache: HashMap<(usize, usize), Vec<Complex64>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let (p, q) = (&blocks[a], &blocks[b]);
            ((a, b), f_lattice(table, p.s, p.i, q.s, q.i))
        })
        .collect();
    let max_imag = cache
        .values()
        .flat_map(|f| f.iter().map(|z| z.im.abs()))
        .fold(0.0, f64::max);
    if max_imag > IMAG_TOL {
        return Err(Error::Numerical(format!(
            "coupling F has imaginary part {max_imag:.3e} (bound {IMAG_TOL:e}); the grid must be symmetric under k → −k"
        )));
    }
    let n = table.len();
    let lookup = |mu: &MultiIndex, a: usize, nu: &MultiIndex, b: usize| -> f64 {
        let (p, q) = (&blocks[a], &blocks[b]);
        let top = p.s.max(q.s);
        let m = table.translations(top) as i64;
        let (fa, fb) = (1i64 << (top - p.s), 1i64 << (top - q.s));
        let mut r = 0usize;
        for ax in 0..dim {
            r = r * m as usize + (fb * nu.l[ax] - fa * mu.l[ax]).rem_euclid(m) as usize;
        }
        cache[&(a, b)][r].re
    };
    let block_pos: Vec<usize> = (0..n)
        .map(|mu| blocks.partition_point(|b| b.offset <= mu) - 1)
        .collect();
    let indices = table.indices();
    let diag_max = (0..n)
        .map(|mu| lookup(&indices[mu], block_pos[mu], &indices[mu], block_pos[mu]))
        .fold(0.0, f64::max);
    let tol = sparsity_tol.unwrap_or(1e-10 * diag_max);

    let rows: Vec<(Vec<(usize, f64)>, f64, f64)> = (0..n)
        .into_par_iter()
        .map(|mu| {
            let mut row = Vec::new();
            let mut dropped = 0.0;
            let mut diag = 0.0;
            for nu in 0..n {
                let v = lookup(&indices[mu], block_pos[mu], &indices[nu], block_pos[nu]);
                if nu == mu {
                    diag = v;
                }
                if v.abs() >= tol && v != 0.0 {
                    row.push((nu, v));
                } else {
                    dropped += v * v;
                }
            }
            (row, dropped, diag)
        })
        .collect();
    let dropped_norm = rows.iter().map(|r| r.1).sum::<f64>().sqrt();
    let zero_point = 0.5 * rows.iter().map(|r| r.2).sum::<f64>();
    let matrix = CsrMatrix::from_rows(rows.into_iter().map(|r| r.0).collect());
    let omega_max = table.grid().omega_max();
    Ok(CouplingMatrix {
        matrix,
        sparsity_tol: tol,
        zero_point,
        dropped_norm,
        bounds: (-dropped_norm, omega_max + dropped_norm),
        max_imag,
    })
}

impl CouplingMatrix {
    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn nnz_fraction(&self) -> f64 {
        self.matrix.nnz() as f64 / (self.n() as f64).powi(2)
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.matrix.get(r, c)
    }

    /// Ascending eigenvalues (dense symmetric solve).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let m: DMatrix<f64> = self.matrix.to_dense();
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|r| self.matrix.get(r, r)).sum()
    }

    /// CSV `row,col,value` of the stored entries.
    pub fn to_csv(&self) -> CsvWriter {
        let mut csv = CsvWriter::new("row,col,value");
        for r in 0..self.n() {
            for (c, v) in self.matrix.row(r) {
                csv.row(&[r.to_string(), c.to_string(), fmt_f64(v)]);
            }
        }
        csv
    }
}
