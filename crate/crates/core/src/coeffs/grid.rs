//! Truncated plane-wave lattice k = 2πn/L of a periodic box.

use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWaveGrid {
    dim: usize,
    l: f64,
    n_max: i32,
    band: Option<(f64, f64)>,
    ns: Vec<[i32; 3]>,
}

impl PlaneWaveGrid {
    /// All lattice vectors with |n_j| ≤ n_max, k ≠ 0, and — when `band` is
    /// given — k_lo ≤ max_j |k_j| ≤ k_hi. Ordered lexicographically in (n_x, n_y, n_z).
    pub fn build(dim: usize, l: f64, n_max: i32, band: Option<(f64, f64)>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::config("dim", format!("must be 1, 2 or 3, got {dim}")));
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::config("L", format!("must be positive, got {l}")));
        }
        if n_max < 1 {
            return Err(Error::config("n_max", format!("must be ≥ 1, got {n_max}")));
        }
        if let Some((lo, hi)) = band {
            if !(lo >= 0.0 && hi >= lo) {
                return Err(Error::config("band_lo", format!("invalid band [{lo}, {hi}]")));
            }
        }
        let r = |a: usize| if a < dim { -n_max..=n_max } else { 0..=0 };
        let dk = 2.0 * PI / l;
        let mut ns = Vec::new();
        for nx in r(0) {
            for ny in r(1) {
                for nz in r(2) {
                    if nx == 0 && ny == 0 && nz == 0 {
                        continue;
                    }
                    if let Some((lo, hi)) = band {
                        let m = nx.abs().max(ny.abs()).max(nz.abs()) as f64 * dk;
                        let slack = 1e-12 * hi.max(1.0);
                        if m < lo - slack || m > hi + slack {
                            continue;
                        }
                    }
                    ns.push([nx, ny, nz]);
                }
            }
        }
        if ns.is_empty() {
            return Err(Error::config("band_lo", "plane-wave grid is empty after band filtering"));
        }
        Ok(PlaneWaveGrid { dim, l, n_max, band, ns })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn box_len(&self) -> f64 {
        self.l
    }

    pub fn n_max(&self) -> i32 {
        self.n_max
    }

    pub fn band(&self) -> Option<(f64, f64)> {
        self.band
    }

    pub fn len(&self) -> usize {
        self.ns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ns.is_empty()
    }

    pub fn ns(&self) -> &[[i32; 3]] {
        &self.ns
    }

    pub fn n(&self, j: usize) -> [i32; 3] {
        self.ns[j]
    }

    pub fn k(&self, j: usize) -> [f64; 3] {
        let dk = 2.0 * PI / self.l;
        let n = self.ns[j];
        [n[0] as f64 * dk, n[1] as f64 * dk, n[2] as f64 * dk]
    }

    pub fn omega(&self, j: usize) -> f64 {
        let k = self.k(j);
        (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt()
    }

    pub fn omegas(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.omega(j)).collect()
    }

    pub fn omega_max(&self) -> f64 {
        self.omegas().into_iter().fold(0.0, f64::max)
    }

    /// Position of lattice vector `n` in the grid ordering.
    pub fn find(&self, n: [i32; 3]) -> Option<usize> {
        self.ns.binary_search(&n).ok()
    }

    /// Largest |k_j| over the grid (for sampling-resolution choices).
    pub fn k_max_component(&self) -> f64 {
        2.0 * PI / self.l
            * self
                .ns
                .iter()
                .map(|n| n[0].abs().max(n[1].abs()).max(n[2].abs()))
                .max()
                .unwrap_or(0) as f64
    }
}
