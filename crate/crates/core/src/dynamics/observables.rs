//! Energy density maps and their moments.
//!
//! For a single-excitation state with plane-wave amplitudes a_k the
//! normal-ordered density is ρ(r) = |E⁺(r)|² + |B⁺(r)|², where E⁺, B⁺ are the
//! positive-frequency sums of the field module. Its integral over one period is
//! Σ_k ω_k |a_k|² exactly.

use num_complex::Complex64;

use super::state::{to_plane_wave, Basis, SingleExcitationState};
use crate::coeffs::{CoefficientTable, PlaneWaveGrid};
use crate::error::{Error, Result};
use crate::field::{field_from_amplitudes, FieldKind, SpatialGrid};
use crate::io::CsvWriter;

#[derive(Debug, Clone)]
pub struct DensityMap {
    pub grid: SpatialGrid,
    pub dim: usize,
    pub rho: Vec<f64>,
}

impl DensityMap {
    /// Σ ρ·cell.
    pub fn total(&self) -> f64 {
        self.rho.iter().sum::<f64>() * self.grid.cell(self.dim)
    }

    pub fn centroid(&self) -> [f64; 2] {
        let mut m = [0.0; 2];
        let mut w = 0.0;
        for (p, r) in self.rho.iter().enumerate() {
            let q = self.grid.point(p);
            m[0] += r * q[0];
            m[1] += r * q[1];
            w += r;
        }
        [m[0] / w, m[1] / w]
    }

    /// Fraction of the sampled energy at distance > `radius` from `center`.
    pub fn fraction_outside(&self, center: [f64; 2], radius: f64) -> f64 {
        let mut out = 0.0;
        let mut all = 0.0;
        for (p, r) in self.rho.iter().enumerate() {
            let q = self.grid.point(p);
            all += r;
            if (q[0] - center[0]).hypot(q[1] - center[1]) > radius {
                out += r;
            }
        }
        out / all
    }

    /// Largest |ρ(r) − ρ(mirror r)| / max ρ over reflections through `center`
    /// along x, along y and through the point. Requires a grid symmetric about
    /// `center`.
    pub fn mirror_asymmetry(&self, center: [f64; 2]) -> f64 {
        let [cx, cy] = self.grid.counts;
        let sp = self.grid.spacing;
        let mirror = |a: usize, c: usize, origin: f64, ctr: f64| -> Option<usize> {
            let x = origin + a as f64 * sp;
            let m = ((2.0 * ctr - x - origin) / sp).round();
            (m >= 0.0 && (m as usize) < c).then_some(m as usize)
        };
        let peak = self.rho.iter().copied().fold(0.0, f64::max);
        let mut worst: f64 = 0.0;
        for a in 0..cx {
            for b in 0..cy {
                let r = self.rho[a * cy + b];
                let (ma, mb) = (mirror(a, cx, self.grid.origin[0], center[0]), mirror(b, cy, self.grid.origin[1], center[1]));
                for (ia, ib) in [(ma, Some(b)), (Some(a), mb), (ma, mb)] {
                    if let (Some(ia), Some(ib)) = (ia, ib) {
                        worst = worst.max((r - self.rho[ia * cy + ib]).abs());
                    }
                }
            }
        }
        worst / peak
    }

    pub fn to_csv(&self) -> CsvWriter {
        let mut w = CsvWriter::new("x,y,rho");
        for (p, r) in self.rho.iter().enumerate() {
            let q = self.grid.point(p);
            w.row_f64(&[q[0], q[1], *r]);
        }
        w
    }
}

/// ρ on `sg` from plane-wave amplitudes.
pub fn energy_density_plane_wave(grid: &PlaneWaveGrid, a: &[Complex64], sg: &SpatialGrid) -> Result<DensityMap> {
    if a.len() != grid.len() {
        return Err(Error::Parameter("amplitude vector does not match the plane-wave grid".into()));
    }
    let e = field_from_amplitudes(grid, a, FieldKind::E, sg)?;
    let mut rho: Vec<f64> = e[0].iter().map(|c| c.norm_sqr()).collect();
    for comp in field_from_amplitudes(grid, a, FieldKind::B, sg)? {
        for (r, b) in rho.iter_mut().zip(comp) {
            *r += b.norm_sqr();
        }
    }
    Ok(DensityMap { grid: *sg, dim: grid.dim(), rho })
}

/// ρ on `sg` for a state in either basis.
pub fn energy_density(state: &SingleExcitationState, table: &CoefficientTable, sg: &SpatialGrid) -> Result<DensityMap> {
    let pw = match state.basis {
        Basis::PlaneWave => state.clone(),
        Basis::Wavelet => to_plane_wave(state, table)?,
    };
    energy_density_plane_wave(table.grid(), &pw.amps, sg)
}

/// Σ_k ω_k |a_k|².
pub fn field_energy(grid: &PlaneWaveGrid, a: &[Complex64]) -> f64 {
    a.iter().enumerate().map(|(j, c)| grid.omega(j) * c.norm_sqr()).sum()
}
