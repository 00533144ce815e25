//! Expansion of sampled functions in ψ_{s,l} by direct quadrature, and the
//! inverse synthesis.

use std::collections::BTreeMap;

use log::warn;
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::quadrature::simpson_weights;
use super::{scale_pow, Kind, ScaleTranslate, Wavelet1D, SHANNON_WINDOW};
use crate::io::CsvWriter;

/// Uniform samples f(t0 + j·dt).
#[derive(Debug, Clone)]
pub struct SampledFunction {
    pub t0: f64,
    pub dt: f64,
    pub values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn from_fn(t0: f64, t1: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Self {
        let dt = (t1 - t0) / (n - 1) as f64;
        let values = (0..n).map(|j| f(t0 + j as f64 * dt)).collect();
        SampledFunction { t0, dt, values }
    }

    pub fn from_real(t0: f64, t1: f64, n: usize, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(t0, t1, n, |t| Complex64::new(f(t), 0.0))
    }

    pub fn t(&self, j: usize) -> f64 {
        self.t0 + j as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.values.len()).map(|j| self.t(j)).collect()
    }

    pub fn window(&self) -> (f64, f64) {
        (self.t0, self.t(self.values.len() - 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationWarning {
    pub index: ScaleTranslate,
    /// 1 − ∫_window ψ_{s,l}², the norm fraction falling outside the samples.
    pub leakage: f64,
}

#[derive(Debug, Clone, Default)]
pub struct Analysis {
    pub coeffs: BTreeMap<ScaleTranslate, Complex64>,
    pub warnings: Vec<TruncationWarning>,
}

impl Analysis {
    /// Coefficients at scale `s` ordered by translation.
    pub fn scale(&self, s: i32) -> Vec<(i64, Complex64)> {
        self.coeffs
            .iter()
            .filter(|(k, _)| k.s == s)
            .map(|(k, &v)| (k.l, v))
            .collect()
    }
}

pub const LEAKAGE_WARN: f64 = 1e-6;

/// Translations l at scale s whose ψ_{s,l} is centered inside [a, b].
pub fn translations_in(w: &Wavelet1D, s: i32, a: f64, b: f64) -> std::ops::RangeInclusive<i64> {
    let c = w.psi_center();
    let lo = (scale_pow(s) * a - c).ceil() as i64;
    let hi = (scale_pow(s) * b - c).floor() as i64;
    lo..=hi
}

/// d_{s,l} = ∫ f ψ_{s,l} dt by composite Simpson on the sample grid.
pub fn analyze(f: &SampledFunction, w: &Wavelet1D, indices: &[ScaleTranslate]) -> Analysis {
    let n = f.values.len();
    let weights = simpson_weights(n, f.dt);
    let times = f.times();
    let mut out = Analysis::default();
    for &idx in indices {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut norm = 0.0;
        for j in 0..n {
            let p = w.eval_scaled(Kind::Wavelet, idx, times[j]);
            if p != 0.0 {
                acc += f.values[j] * (weights[j] * p);
                norm += weights[j] * p * p;
            }
        }
        let leakage = 1.0 - norm;
        if leakage > LEAKAGE_WARN {
            warn!("ψ(s={}, l={}) leaks {:.2e} of its norm outside the window", idx.s, idx.l, leakage);
            out.warnings.push(TruncationWarning { index: idx, leakage });
        }
        out.coeffs.insert(idx, acc);
    }
    out
}

pub fn synthesize(
    coeffs: &BTreeMap<ScaleTranslate, Complex64>,
    w: &Wavelet1D,
    times: &[f64],
) -> Vec<Complex64> {
    times
        .iter()
        .map(|&t| {
            coeffs
                .iter()
                .map(|(&idx, &c)| c * w.eval_scaled(Kind::Wavelet, idx, t))
                .sum()
        })
        .collect()
}

/// CSV `t,phi,psi` of the fundamental functions at `n` points on [a, b].
pub fn tabulate(w: &Wavelet1D, a: f64, b: f64, n: usize) -> CsvWriter {
    let mut csv = CsvWriter::new("t,phi,psi");
    let dt = if n > 1 { (b - a) / (n - 1) as f64 } else { 0.0 };
    for j in 0..n {
        let t = a + j as f64 * dt;
        csv.row_f64(&[t, w.eval(Kind::Scaling, t), w.eval(Kind::Wavelet, t)]);
    }
    csv
}

/// Quadrature grid used for inner products of `w`'s functions: (radius, step).
fn quad_grid(w: &Wavelet1D) -> (f64, f64) {
    match w {
        Wavelet1D::Shannon => (SHANNON_WINDOW, 1.0 / 64.0),
        Wavelet1D::Meyer(_) => (100.0, 1.0 / 128.0),
        Wavelet1D::Daubechies(d) => (0.0, 0.5 * d.spacing()),
    }
}

fn gram_on(w: &Wavelet1D, indices: &[ScaleTranslate], a: f64, b: f64, h: f64) -> DMatrix<f64> {
    let n = ((b - a) / h).round() as usize + 1;
    let weights = simpson_weights(n, h);
    let rows: Vec<Vec<f64>> = indices
        .iter()
        .map(|&idx| (0..n).map(|j| w.eval_scaled(Kind::Wavelet, idx, a + j as f64 * h)).collect())
        .collect();
    let m = indices.len();
    let mut g = DMatrix::zeros(m, m);
    for p in 0..m {
        for q in p..m {
            let v: f64 = (0..n).map(|j| weights[j] * rows[p][j] * rows[q][j]).sum();
            g[(p, q)] = v;
            g[(q, p)] = v;
        }
    }
    g
}

/// Gram matrix ⟨ψ_μ, ψ_ν⟩ by quadrature.
///
/// Compactly supported families integrate exactly over the joint support on
/// the cascade grid. Shannon integrands decay like 1/t², so the window
/// integral I(R) ≈ I − c/R is Richardson-extrapolated from R and R/2.
pub fn gram(w: &Wavelet1D, indices: &[ScaleTranslate]) -> DMatrix<f64> {
    let (radius, h) = quad_grid(w);
    match w {
        Wavelet1D::Daubechies(_) => {
            let (sa, sb) = w.real_support(Kind::Wavelet);
            let mut a = f64::INFINITY;
            let mut b = f64::NEG_INFINITY;
            for idx in indices {
                let k = scale_pow(-idx.s);
                a = a.min((sa + idx.l as f64) * k);
                b = b.max((sb + idx.l as f64) * k);
            }
            let a = (a / h).floor() * h;
            let b = (b / h).ceil() * h;
            gram_on(w, indices, a, b, h)
        }
        Wavelet1D::Shannon => {
            let full = gram_on(w, indices, -radius, radius, h);
            let half = gram_on(w, indices, -radius / 2.0, radius / 2.0, h);
            full * 2.0 - half
        }
        Wavelet1D::Meyer(_) => gram_on(w, indices, -radius, radius, h),
    }
}

/// ∫ f(t) dt for the fundamental φ or ψ.
///
/// Non-compact families are integrated against the Gaussian convergence
/// factor e^{-(t/σ)²}, σ = 20, which equals √(2π)(f̂ ∗ ĝ)(0): exact up to
/// e^{-(σ·Δ/2)²} where Δ is the distance of the nearest spectral feature
/// from ω = 0.
pub fn integral(w: &Wavelet1D, kind: Kind) -> f64 {
    let (radius, h) = quad_grid(w);
    match w {
        Wavelet1D::Daubechies(_) => {
            let (a, b) = w.real_support(kind);
            let n = ((b - a) / h).round() as usize + 1;
            let vals: Vec<f64> = (0..n).map(|j| w.eval(kind, a + j as f64 * h)).collect();
            super::quadrature::simpson(&vals, h)
        }
        _ => {
            let sigma = 20.0;
            let r = radius.min(8.0 * sigma);
            let n = (2.0 * r / h).round() as usize + 1;
            let vals: Vec<f64> = (0..n)
                .map(|j| {
                    let t = -r + j as f64 * h;
                    w.eval(kind, t) * (-(t / sigma).powi(2)).exp()
                })
                .collect();
            super::quadrature::simpson(&vals, h)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_single_wavelet() {
        let w = Wavelet1D::meyer();
        let f = SampledFunction::from_real(-60.0, 60.0, 120 * 64 + 1, |t| {
            w.eval_scaled(Kind::Wavelet, ScaleTranslate::new(0, 0), t)
        });
        let idx: Vec<_> = (0..=1)
            .flat_map(|s| (-4..=4).map(move |l| ScaleTranslate::new(s, l)))
            .collect();
        let a = analyze(&f, &w, &idx);
        for (k, v) in &a.coeffs {
            let target = if k.s == 0 && k.l == 0 { 1.0 } else { 0.0 };
            assert!((v - target).norm() < 1e-6, "{k:?}: {v}");
        }
    }

    #[test]
    fn empty_synthesis_is_zero() {
        let out = synthesize(&BTreeMap::new(), &Wavelet1D::meyer(), &[0.0, 1.0]);
        assert!(out.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn small_window_warns() {
        let w = Wavelet1D::meyer();
        let f = SampledFunction::from_real(-2.0, 2.0, 257, |_| 1.0);
        let a = analyze(&f, &w, &[ScaleTranslate::new(0, 0)]);
        assert_eq!(a.warnings.len(), 1);
        assert!(a.warnings[0].leakage > 1e-3);
    }

    #[test]
    fn tabulate_header_and_rows() {
        let csv = tabulate(&Wavelet1D::shannon(), -1.0, 1.0, 3);
        let lines: Vec<_> = csv.as_str().lines().collect();
        assert_eq!(lines[0], "t,phi,psi");
        assert_eq!(lines.len(), 4);
    }
}
