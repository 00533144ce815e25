//! Basis-change coefficients d^i_{k,sl} = ⟨ψ^i_{sl} | plane wave k⟩ of a periodic box,
//! stored factorized per axis.

use std::f64::consts::PI;

use log::warn;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::PlaneWaveGrid;
use crate::error::{Error, Result};
use crate::io::{fmt_f64, CsvWriter};
use crate::mra::{scale_pow, Kind, Wavelet1D};

/// Tensor wavelet label: scale s, translation vector l, type i.
///
/// Bit `dim-1-a` of i selects the 1D function along axis a (0 = φ, 1 = ψ),
/// so in 2D i = 1 is φψ, 2 is ψφ, 3 is ψψ; i = 0 is the pure scaling layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    pub s: i32,
    pub l: [i64; 3],
    pub i: u8,
}

impl MultiIndex {
    pub fn new(s: i32, l: [i64; 3], i: u8) -> Self {
        MultiIndex { s, l, i }
    }

    pub fn axis_kind(&self, dim: usize, axis: usize) -> Kind {
        axis_kind(self.i, dim, axis)
    }
}

pub fn axis_kind(i: u8, dim: usize, axis: usize) -> Kind {
    if (i >> (dim - 1 - axis)) & 1 == 1 {
        Kind::Wavelet
    } else {
        Kind::Scaling
    }
}

/// (1/√L) ∫ f_{s,l}(x) e^{ikx} dx for the real function f_{s,l}(x) = 2^{s/2} f(2^s x − l).
pub fn d_1d(w: &Wavelet1D, kind: Kind, k: f64, s: i32, l: i64, box_len: f64) -> Complex64 {
    let q = scale_pow(-s) * k;
    let phase = Complex64::from_polar(1.0, q * l as f64);
    phase * w.fourier(kind, q).conj() * ((2.0 * PI).sqrt() * scale_pow(-s).sqrt() / box_len.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub s: i32,
    pub i: u8,
    pub offset: usize,
    /// Translations per axis, 2^s·L.
    pub m: usize,
}

#[derive(Debug, Clone)]
pub struct CoefficientTable {
    wavelet: Wavelet1D,
    grid: PlaneWaveGrid,
    s_min: i32,
    s_max: i32,
    include_scaling: bool,
    blocks: Vec<Block>,
    len: usize,
    // base[s - s_min][kind][n + n_max] = d_1d(kind, 2πn/L, s, 0, L)
    base: Vec<[Vec<Complex64>; 2]>,
    // roots[s - s_min][j] = e^{2πi j / M_s}
    roots: Vec<Vec<Complex64>>,
}

fn kind_slot(k: Kind) -> usize {
    match k {
        Kind::Scaling => 0,
        Kind::Wavelet => 1,
    }
}

impl CoefficientTable {
    pub fn build(w: &Wavelet1D, grid: &PlaneWaveGrid, s_min: i32, s_max: i32) -> Result<Self> {
        Self::build_with(w, grid, s_min, s_max, false)
    }

    /// `include_scaling` adds the pure scaling layer (i = 0) at s_min.
    pub fn build_with(
        w: &Wavelet1D,
        grid: &PlaneWaveGrid,
        s_min: i32,
        s_max: i32,
        include_scaling: bool,
    ) -> Result<Self> {
        if s_min > s_max {
            return Err(Error::config("s_min", format!("s_min = {s_min} exceeds s_max = {s_max}")));
        }
        let dim = grid.dim();
        let box_len = grid.box_len();
        let n_max = grid.n_max();
        let mut blocks = Vec::new();
        let mut offset = 0usize;
        let mut base = Vec::new();
        let mut roots = Vec::new();
        for s in s_min..=s_max {
            let mf = scale_pow(s) * box_len;
            let m = mf.round();
            if (mf - m).abs() > 1e-9 || m < 1.0 {
                return Err(Error::config(
                    "L",
                    format!("2^s·L must be a positive integer for every scale; s = {s} gives {mf}"),
                ));
            }
            let m = m as usize;
            let first = if include_scaling && s == s_min { 0 } else { 1 };
            for i in first..(1u8 << dim) {
                blocks.push(Block { s, i, offset, m });
                offset += m.pow(dim as u32);
            }
            let per_kind = |kind: Kind| -> Vec<Complex64> {
                (-n_max..=n_max)
                    .map(|n| d_1d(w, kind, 2.0 * PI * n as f64 / box_len, s, 0, box_len))
                    .collect()
            };
            base.push([per_kind(Kind::Scaling), per_kind(Kind::Wavelet)]);
            roots.push(
                (0..m)
                    .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64))
                    .collect(),
            );
        }
        let table = CoefficientTable {
            wavelet: w.clone(),
            grid: grid.clone(),
            s_min,
            s_max,
            include_scaling,
            blocks,
            len: offset,
            base,
            roots,
        };
        if !table.covers_grid() {
            warn!(
                "scales {s_min}..={s_max} of {w} do not exactly cover the grid band; \
                 the basis change is not unitary on this grid"
            );
        }
        Ok(table)
    }

    pub fn wavelet(&self) -> &Wavelet1D {
        &self.wavelet
    }

    pub fn grid(&self) -> &PlaneWaveGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn scales(&self) -> (i32, i32) {
        (self.s_min, self.s_max)
    }

    pub fn include_scaling(&self) -> bool {
        self.include_scaling
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Number of wavelet modes.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn translations(&self, s: i32) -> usize {
        self.roots[(s - self.s_min) as usize].len()
    }

    /// Band on max_j|k_j| where the index set resolves the identity exactly.
    pub fn covered_band(&self) -> Option<(f64, f64)> {
        let (lo, hi) = self.wavelet.covered_band(self.s_min, self.s_max)?;
        Some((if self.include_scaling { 0.0 } else { lo }, hi))
    }

    pub fn covers_grid(&self) -> bool {
        let Some((lo, hi)) = self.covered_band() else { return false };
        let dk = 2.0 * PI / self.grid.box_len();
        self.grid.ns().iter().all(|n| {
            let m = n[0].abs().max(n[1].abs()).max(n[2].abs()) as f64 * dk;
            m >= lo * (1.0 - 1e-12) && m <= hi * (1.0 + 1e-12)
        })
    }

    pub fn block_of(&self, mu: usize) -> &Block {
        let p = self.blocks.partition_point(|b| b.offset <= mu);
        &self.blocks[p - 1]
    }

    pub fn index(&self, mu: usize) -> MultiIndex {
        let b = *self.block_of(mu);
        let dim = self.dim();
        let mut r = mu - b.offset;
        let mut l = [0i64; 3];
        for a in (0..dim).rev() {
            l[a] = (r % b.m) as i64;
            r /= b.m;
        }
        MultiIndex { s: b.s, l, i: b.i }
    }

    pub fn indices(&self) -> Vec<MultiIndex> {
        (0..self.len).map(|mu| self.index(mu)).collect()
    }

    /// Position of a multi-index; translations are taken modulo 2^s·L.
    pub fn position(&self, idx: &MultiIndex) -> Option<usize> {
        let b = self.blocks.iter().find(|b| b.s == idx.s && b.i == idx.i)?;
        let mut r = 0usize;
        for a in 0..self.dim() {
            r = r * b.m + idx.l[a].rem_euclid(b.m as i64) as usize;
        }
        Some(b.offset + r)
    }

    /// Centre of the mode's localization, wrapped into [−L/2, L/2) per axis.
    /// φ is centred at 0 and ψ at the family's `psi_center`.
    pub fn center(&self, idx: &MultiIndex) -> [f64; 3] {
        let len = self.grid.box_len();
        let mut c = [0.0; 3];
        for a in 0..self.dim() {
            let off = match idx.axis_kind(self.dim(), a) {
                Kind::Scaling => 0.0,
                Kind::Wavelet => self.wavelet.psi_center(),
            };
            let x = (idx.l[a] as f64 + off) * scale_pow(-idx.s);
            c[a] = (x + len / 2.0).rem_euclid(len) - len / 2.0;
        }
        c
    }

    /// 1D factor d^{kind}_{k,s,l} for lattice index n along one axis.
    pub fn axis_factor(&self, s: i32, kind: Kind, n: i32, l: i64) -> Complex64 {
        let si = (s - self.s_min) as usize;
        let roots = &self.roots[si];
        let m = roots.len() as i64;
        let b = self.base[si][kind_slot(kind)][(n + self.grid.n_max()) as usize];
        b * roots[((n as i64 * l).rem_euclid(m)) as usize]
    }

    /// l = 0 coefficient d^i_{k,s,0}, the product of axis factors.
    pub fn base_coefficient(&self, n: [i32; 3], s: i32, i: u8) -> Complex64 {
        let dim = self.dim();
        let si = (s - self.s_min) as usize;
        let mut acc = Complex64::new(1.0, 0.0);
        for a in 0..dim {
            acc *= self.base[si][kind_slot(axis_kind(i, dim, a))][(n[a] + self.grid.n_max()) as usize];
        }
        acc
    }

    pub fn coefficient_n(&self, n: [i32; 3], idx: &MultiIndex) -> Complex64 {
        let dim = self.dim();
        let mut acc = Complex64::new(1.0, 0.0);
        for a in 0..dim {
            acc *= self.axis_factor(idx.s, idx.axis_kind(dim, a), n[a], idx.l[a]);
        }
        acc
    }

    /// d^i_{k,sl} for grid position `k` and mode position `mu`.
    pub fn coefficient(&self, k: usize, mu: usize) -> Complex64 {
        self.coefficient_n(self.grid.n(k), &self.index(mu))
    }

    /// Dense D with rows = wavelet modes and columns = plane waves.
    pub fn dense(&self) -> DMatrix<Complex64> {
        let idx = self.indices();
        let nk = self.grid.len();
        let rows: Vec<Vec<Complex64>> = idx
            .par_iter()
            .map(|mi| (0..nk).map(|k| self.coefficient_n(self.grid.n(k), mi)).collect())
            .collect();
        DMatrix::from_fn(self.len, nk, |r, c| rows[r][c])
    }

    /// c_μ = Σ_k d_{μk} c_k.
    ///
    /// Per (s, i) block the sum folds k onto n mod M and becomes an M^dim
    /// inverse DFT, done axis by axis.
    pub fn to_wavelet(&self, ck: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(ck.len(), self.grid.len());
        let dim = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); self.len];
        let parts: Vec<(usize, Vec<Complex64>)> = self
            .blocks
            .par_iter()
            .map(|b| {
                let size = b.m.pow(dim as u32);
                let mut acc = vec![Complex64::new(0.0, 0.0); size];
                for (j, n) in self.grid.ns().iter().enumerate() {
                    let v = self.base_coefficient(*n, b.s, b.i) * ck[j];
                    acc[self.fold(n, b.m)] += v;
                }
                self.dft(&mut acc, b.s, 1);
                (b.offset, acc)
            })
            .collect();
        for (off, v) in parts {
            out[off..off + v.len()].copy_from_slice(&v);
        }
        out
    }

    /// c_k = Σ_μ d*_{μk} c_μ.
    pub fn to_plane_wave(&self, cmu: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(cmu.len(), self.len);
        let dim = self.dim();
        let transformed: Vec<Vec<Complex64>> = self
            .blocks
            .par_iter()
            .map(|b| {
                let size = b.m.pow(dim as u32);
                let mut a = cmu[b.offset..b.offset + size].to_vec();
                self.dft(&mut a, b.s, -1);
                a
            })
            .collect();
        self.grid
            .ns()
            .par_iter()
            .map(|n| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (b, a) in self.blocks.iter().zip(&transformed) {
                    acc += self.base_coefficient(*n, b.s, b.i).conj() * a[self.fold(n, b.m)];
                }
                acc
            })
            .collect()
    }

    /// out[j] = Σ_k v_k e^{2πi n_k·j/M_s} over the periodic lattice j ∈ [0, M_s)^dim.
    pub fn lattice_sum(&self, v: &[Complex64], s: i32) -> Vec<Complex64> {
        let m = self.translations(s);
        let mut acc = vec![Complex64::new(0.0, 0.0); m.pow(self.dim() as u32)];
        for (j, n) in self.grid.ns().iter().enumerate() {
            acc[self.fold(n, m)] += v[j];
        }
        self.dft(&mut acc, s, 1);
        acc
    }

    fn fold(&self, n: &[i32; 3], m: usize) -> usize {
        let mut r = 0usize;
        for a in 0..self.dim() {
            r = r * m + (n[a] as i64).rem_euclid(m as i64) as usize;
        }
        r
    }

    // In place: out[l] = Σ_j a[j] e^{sign·2πi j·l/M}, separable over axes.
    fn dft(&self, a: &mut [Complex64], s: i32, sign: i32) {
        let roots = &self.roots[(s - self.s_min) as usize];
        let m = roots.len();
        let dim = self.dim();
        let mut line = vec![Complex64::new(0.0, 0.0); m];
        for axis in 0..dim {
            let stride = m.pow((dim - 1 - axis) as u32);
            let outer = a.len() / (m * stride);
            for o in 0..outer {
                for inner in 0..stride {
                    let base = o * m * stride + inner;
                    for (l, slot) in line.iter_mut().enumerate() {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for j in 0..m {
                            let r = roots[(j * l) % m];
                            let r = if sign > 0 { r } else { r.conj() };
                            acc += a[base + j * stride] * r;
                        }
                        *slot = acc;
                    }
                    for (l, v) in line.iter().enumerate() {
                        a[base + l * stride] = *v;
                    }
                }
            }
        }
    }

    /// Σ_μ d*_{μk} d_{μk'} − δ_{kk'}.
    pub fn completeness_residual(&self, k: usize, k2: usize) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for mu in 0..self.len {
            acc += self.coefficient(k, mu).conj() * self.coefficient(k2, mu);
        }
        acc - if k == k2 { 1.0 } else { 0.0 }
    }

    /// Σ_k d*_{μk} d_{νk} − δ_{μν}.
    pub fn orthogonality_residual(&self, mu: usize, nu: usize) -> Complex64 {
        let a = self.index(mu);
        let b = self.index(nu);
        let mut acc = Complex64::new(0.0, 0.0);
        for n in self.grid.ns() {
            acc += self.coefficient_n(*n, &a).conj() * self.coefficient_n(*n, &b);
        }
        acc - if mu == nu { 1.0 } else { 0.0 }
    }

    /// CSV `kx,ky,kz,s,lx,ly,lz,i,re,im` over every (k, μ) pair.
    pub fn to_csv(&self) -> CsvWriter {
        let mut csv = CsvWriter::new("kx,ky,kz,s,lx,ly,lz,i,re,im");
        let idx = self.indices();
        for j in 0..self.grid.len() {
            let k = self.grid.k(j);
            let n = self.grid.n(j);
            for mi in &idx {
                let d = self.coefficient_n(n, mi);
                csv.row(&[
                    fmt_f64(k[0]),
                    fmt_f64(k[1]),
                    fmt_f64(k[2]),
                    mi.s.to_string(),
                    mi.l[0].to_string(),
                    mi.l[1].to_string(),
                    mi.l[2].to_string(),
                    mi.i.to_string(),
                    fmt_f64(d.re),
                    fmt_f64(d.im),
                ]);
            }
        }
        csv
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meyer_1d() -> CoefficientTable {
        let g = PlaneWaveGrid::build(1, 1.0, 16, Some((2.0 * PI, 32.0 * PI))).unwrap();
        CoefficientTable::build(&Wavelet1D::meyer(), &g, 0, 5).unwrap()
    }

    #[test]
    fn translation_counts() {
        let t = meyer_1d();
        assert_eq!(t.translations(0), 1);
        assert_eq!(t.translations(3), 8);
        assert_eq!(t.len(), 63);
        assert!(t.covers_grid());
    }

    #[test]
    fn two_dim_layout() {
        let g = PlaneWaveGrid::build(2, 16.0, 32, Some((PI, 4.0 * PI))).unwrap();
        let t = CoefficientTable::build(&Wavelet1D::meyer(), &g, 0, 1).unwrap();
        assert_eq!(t.blocks().len(), 6);
        assert_eq!(t.len(), 3 * 256 + 3 * 1024);
        for mu in [0, 5, 767, 768, 3000, t.len() - 1] {
            assert_eq!(t.position(&t.index(mu)), Some(mu));
        }
        assert_eq!(t.index(768), MultiIndex::new(1, [0, 0, 0], 1));
    }

    #[test]
    fn non_integer_translations_rejected() {
        let g = PlaneWaveGrid::build(1, 1.5, 4, None).unwrap();
        let e = CoefficientTable::build(&Wavelet1D::meyer(), &g, 0, 1).unwrap_err();
        assert!(matches!(e, Error::Config { ref key, .. } if key == "L"));
        assert!(CoefficientTable::build(&Wavelet1D::meyer(), &g, 1, 2).is_ok());
        assert!(CoefficientTable::build(&Wavelet1D::meyer(), &g, 2, 1).is_err());
    }

    #[test]
    fn fast_transforms_match_dense() {
        let g = PlaneWaveGrid::build(2, 4.0, 8, Some((3.6, 11.0))).unwrap();
        let t = CoefficientTable::build(&Wavelet1D::meyer(), &g, 0, 1).unwrap();
        let d = t.dense();
        let ck: Vec<Complex64> = (0..g.len())
            .map(|j| Complex64::new((j as f64 * 0.37).sin(), (j as f64 * 0.11).cos()))
            .collect();
        let fast = t.to_wavelet(&ck);
        let slow = &d * nalgebra::DVector::from_vec(ck.clone());
        for (a, b) in fast.iter().zip(slow.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
        let cmu: Vec<Complex64> = (0..t.len())
            .map(|j| Complex64::new((j as f64 * 0.7).cos(), (j as f64 * 0.3).sin()))
            .collect();
        let fast = t.to_plane_wave(&cmu);
        let slow = d.adjoint() * nalgebra::DVector::from_vec(cmu);
        for (a, b) in fast.iter().zip(slow.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
