//! Electric and magnetic wavelet mode functions sampled on spatial grids.
//!
//! With ħ = ε₀ = c = 1, one polarization ε = −e₃ and plane-wave amplitudes a_k:
//!   E_z(r) = −i L^{-d/2} Σ_k √(ω_k/2) a_k e^{ik·r}
//!   B(r)   =  i L^{-d/2} Σ_k (2ω_k)^{-1/2} a_k (−k_y, k_x) e^{ik·r}
//! A mode function u_μ uses a_k = d*_{k,μ}.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coeffs::{CoefficientTable, MultiIndex, PlaneWaveGrid};
use crate::error::{Error, Result};
use crate::io::{fmt_f64, CsvWriter};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    E,
    B,
}

/// Regular sample grid: point (a, b) sits at origin + (a, b)·spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    pub origin: [f64; 2],
    pub spacing: f64,
    pub counts: [usize; 2],
}

impl SpatialGrid {
    /// One period [−L/2, L/2)^d at spacing L/(8·n_max).
    pub fn default_for(grid: &PlaneWaveGrid) -> Self {
        let l = grid.box_len();
        let per_axis = 8 * grid.n_max() as usize;
        let ny = if grid.dim() >= 2 { per_axis } else { 1 };
        let y0 = if grid.dim() >= 2 { -l / 2.0 } else { 0.0 };
        SpatialGrid { origin: [-l / 2.0, y0], spacing: l / per_axis as f64, counts: [per_axis, ny] }
    }

    /// Square grid of `n` points per axis centred on `center`.
    pub fn centered(center: [f64; 2], half_width: f64, n: usize) -> Self {
        let spacing = 2.0 * half_width / (n - 1) as f64;
        SpatialGrid {
            origin: [center[0] - half_width, center[1] - half_width],
            spacing,
            counts: [n, n],
        }
    }

    pub fn len(&self) -> usize {
        self.counts[0] * self.counts[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, a: usize) -> f64 {
        self.origin[0] + a as f64 * self.spacing
    }

    pub fn y(&self, b: usize) -> f64 {
        self.origin[1] + b as f64 * self.spacing
    }

    /// Area (or length in 1D) element.
    pub fn cell(&self, dim: usize) -> f64 {
        self.spacing.powi(dim as i32)
    }

    pub fn point(&self, p: usize) -> [f64; 2] {
        [self.x(p / self.counts[1]), self.y(p % self.counts[1])]
    }
}

/// f(r_p) = Σ_k a_k e^{ik·r_p}; points ordered x-major.
///
/// The k-sum is separable: first over n_y per n_x column, then over n_x,
/// both in lexicographic lattice order.
pub fn plane_wave_sum(grid: &PlaneWaveGrid, a: &[Complex64], sg: &SpatialGrid) -> Result<Vec<Complex64>> {
    if grid.dim() > 2 {
        return Err(Error::Parameter("field sampling is implemented for 1D and 2D boxes".into()));
    }
    let dk = 2.0 * PI / grid.box_len();
    let nm = grid.n_max();
    let width = (2 * nm + 1) as usize;
    let phase_table = |coord: &dyn Fn(usize) -> f64, count: usize| -> Vec<Complex64> {
        let mut t = vec![Complex64::new(0.0, 0.0); width * count];
        for n in -nm..=nm {
            for p in 0..count {
                t[(n + nm) as usize * count + p] = Complex64::from_polar(1.0, dk * n as f64 * coord(p));
            }
        }
        t
    };
    let [cx, cy] = sg.counts;
    let ex = phase_table(&|p| sg.x(p), cx);
    let ey = phase_table(&|p| sg.y(p), cy);
    // column[n_x][y] = Σ_{n_y} a_k e^{ik_y y}
    let mut column = vec![Complex64::new(0.0, 0.0); width * cy];
    for (j, n) in grid.ns().iter().enumerate() {
        let row = (n[0] + nm) as usize;
        let ny = (n[1] + nm) as usize;
        for b in 0..cy {
            column[row * cy + b] += a[j] * ey[ny * cy + b];
        }
    }
    let mut out = vec![Complex64::new(0.0, 0.0); cx * cy];
    for nx in 0..width {
        let col = &column[nx * cy..(nx + 1) * cy];
        if col.iter().all(|c| c.norm_sqr() == 0.0) {
            continue;
        }
        for a_ in 0..cx {
            let e = ex[nx * cx + a_];
            let dst = &mut out[a_ * cy..(a_ + 1) * cy];
            for b in 0..cy {
                dst[b] += e * col[b];
            }
        }
    }
    Ok(out)
}

/// Field components generated by plane-wave amplitudes `a`: one for E, two for B.
pub fn field_from_amplitudes(
    grid: &PlaneWaveGrid,
    a: &[Complex64],
    kind: FieldKind,
    sg: &SpatialGrid,
) -> Result<Vec<Vec<Complex64>>> {
    let norm = grid.box_len().powf(-(grid.dim() as f64) / 2.0);
    match kind {
        FieldKind::E => {
            let coef: Vec<Complex64> = (0..grid.len())
                .map(|j| a[j] * Complex64::new(0.0, -norm * (grid.omega(j) / 2.0).sqrt()))
                .collect();
            Ok(vec![plane_wave_sum(grid, &coef, sg)?])
        }
        FieldKind::B => {
            let mut comps = Vec::with_capacity(2);
            for axis in 0..2 {
                let coef: Vec<Complex64> = (0..grid.len())
                    .map(|j| {
                        let k = grid.k(j);
                        let dir = if axis == 0 { -k[1] } else { k[0] };
                        a[j] * Complex64::new(0.0, norm * dir / (2.0 * grid.omega(j)).sqrt())
                    })
                    .collect();
                comps.push(plane_wave_sum(grid, &coef, sg)?);
            }
            Ok(comps)
        }
    }
}

/// Plane-wave amplitudes d*_{k,μ} of a single wavelet mode.
pub fn mode_amplitudes(table: &CoefficientTable, idx: &MultiIndex) -> Vec<Complex64> {
    table.grid().ns().iter().map(|n| table.coefficient_n(*n, idx).conj()).collect()
}

#[derive(Debug, Clone)]
pub struct ModeField {
    pub index: MultiIndex,
    pub kind: FieldKind,
    pub grid: SpatialGrid,
    pub dim: usize,
    /// components[c][p], one entry per grid point.
    pub components: Vec<Vec<Complex64>>,
}

impl ModeField {
    pub fn max_abs(&self) -> f64 {
        (0..self.grid.len())
            .map(|p| self.components.iter().map(|c| c[p].norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// Σ_p u(r_p) ΔA per component.
    pub fn grid_integral(&self) -> Vec<Complex64> {
        let da = self.grid.cell(self.dim);
        self.components.iter().map(|c| c.iter().sum::<Complex64>() * da).collect()
    }

    /// Cartesian axes carried by `components`: E = (z), B = (x, y).
    pub fn axes(&self) -> &'static [usize] {
        match self.kind {
            FieldKind::E => &[2],
            FieldKind::B => &[0, 1],
        }
    }

    /// Σ_p u*(r_p)·v(r_p) ΔA (vector dot product).
    pub fn overlap(&self, other: &ModeField) -> Complex64 {
        self.dot(other, true)
    }

    /// Σ_p u(r_p)·v(r_p) ΔA without conjugation.
    pub fn bilinear(&self, other: &ModeField) -> Complex64 {
        self.dot(other, false)
    }

    fn dot(&self, other: &ModeField, conj: bool) -> Complex64 {
        let da = self.grid.cell(self.dim);
        let mut acc = Complex64::new(0.0, 0.0);
        for (ca, axis) in self.axes().iter().enumerate() {
            let Some(cb) = other.axes().iter().position(|x| x == axis) else { continue };
            for (x, y) in self.components[ca].iter().zip(&other.components[cb]) {
                acc += if conj { x.conj() } else { *x } * y;
            }
        }
        acc * da
    }

    pub fn to_csv(&self) -> CsvWriter {
        let header = if self.components.len() == 1 {
            "x,y,re_1,im_1"
        } else {
            "x,y,re_1,im_1,re_2,im_2"
        };
        let mut csv = CsvWriter::new(header);
        for p in 0..self.grid.len() {
            let r = self.grid.point(p);
            let mut row = vec![r[0], r[1]];
            for c in &self.components {
                row.push(c[p].re);
                row.push(c[p].im);
            }
            csv.row_f64(&row);
        }
        csv
    }

    /// Sidecar `key=value` description of the sampled mode.
    pub fn metadata(&self, family: &str) -> String {
        format!(
            "family={}\ns={}\nlx={}\nly={}\ni={}\nkind={}\norigin_x={}\norigin_y={}\nspacing={}\nnx={}\nny={}\n",
            family,
            self.index.s,
            self.index.l[0],
            self.index.l[1],
            self.index.i,
            match self.kind {
                FieldKind::E => "E",
                FieldKind::B => "B",
            },
            fmt_f64(self.grid.origin[0]),
            fmt_f64(self.grid.origin[1]),
            fmt_f64(self.grid.spacing),
            self.grid.counts[0],
            self.grid.counts[1],
        )
    }
}

fn mode(table: &CoefficientTable, idx: &MultiIndex, kind: FieldKind, sg: &SpatialGrid) -> Result<ModeField> {
    if table.position(idx).is_none() {
        return Err(Error::Parameter(format!("{idx:?} is not in the table's index set")));
    }
    let a = mode_amplitudes(table, idx);
    Ok(ModeField {
        index: *idx,
        kind,
        grid: *sg,
        dim: table.dim(),
        components: field_from_amplitudes(table.grid(), &a, kind, sg)?,
    })
}

pub fn mode_e(table: &CoefficientTable, idx: &MultiIndex, sg: &SpatialGrid) -> Result<ModeField> {
    mode(table, idx, FieldKind::E, sg)
}

pub fn mode_b(table: &CoefficientTable, idx: &MultiIndex, sg: &SpatialGrid) -> Result<ModeField> {
    mode(table, idx, FieldKind::B, sg)
}

/// u^E_μ(r0)_z for every mode μ, in table order.
pub fn mode_e_at(table: &CoefficientTable, r0: [f64; 3]) -> Vec<Complex64> {
    let grid = table.grid();
    let norm = grid.box_len().powf(-(grid.dim() as f64) / 2.0);
    // Σ_k d*_{kμ} v_k = conj(Σ_k d_{kμ} v*_k)
    let v: Vec<Complex64> = (0..grid.len())
        .map(|j| {
            let k = grid.k(j);
            let ph = k[0] * r0[0] + k[1] * r0[1] + k[2] * r0[2];
            Complex64::from_polar((grid.omega(j) / 2.0).sqrt(), ph).conj()
        })
        .collect();
    table
        .to_wavelet(&v)
        .into_iter()
        .map(|c| Complex64::new(0.0, -norm) * c.conj())
        .collect()
}
