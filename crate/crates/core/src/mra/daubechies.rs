//! Daubechies filters by spectral factorization, φ/ψ by the cascade algorithm.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::filter::{FilterBank, Sequence};
use crate::error::{Error, Result};

pub const CASCADE_LEVELS: u32 = 12;

/// Lowpass filter of length `n` with n/2 vanishing moments, normalized to Σh = √2.
pub fn lowpass(n: usize) -> Result<Vec<f64>> {
    if n < 2 || n % 2 != 0 || n > 40 {
        return Err(Error::Parameter(format!(
            "Daubechies filter length must be even and in [2, 40], got {n}"
        )));
    }
    let p = n / 2;
    // P(y) = Σ_{k<p} C(p-1+k, k) y^k, the Bezout polynomial in y = sin²(ω/2).
    let mut poly = Vec::with_capacity(p);
    for k in 0..p {
        poly.push(binomial(p - 1 + k, k));
    }
    let yroots = poly_roots(&poly);

    // Each y root maps to z + 1/z = 2 − 4y; keep the root inside the unit circle.
    let mut h: Vec<Complex64> = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..p {
        h = poly_mul_linear(&h, Complex64::new(1.0, 0.0));
    }
    for y in yroots {
        let b = Complex64::new(2.0, 0.0) - 4.0 * y;
        let disc = (b * b - 4.0).sqrt();
        let z1 = (b + disc) / 2.0;
        let z2 = (b - disc) / 2.0;
        let z = if z1.norm() < z2.norm() { z1 } else { z2 };
        h = poly_mul_linear(&h, -z);
    }
    let mut re: Vec<f64> = h.iter().map(|c| c.re).collect();
    let sum: f64 = re.iter().sum();
    for c in re.iter_mut() {
        *c *= SQRT_2 / sum;
    }
    if re[0].abs() < re[n - 1].abs() {
        re.reverse();
    }
    Ok(re)
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut r = 1.0;
    for j in 0..k {
        r = r * (n - j) as f64 / (j + 1) as f64;
    }
    r
}

/// Multiply polynomial (ascending coefficients) by (z + a).
fn poly_mul_linear(p: &[Complex64], a: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); p.len() + 1];
    for (j, &c) in p.iter().enumerate() {
        out[j] += c * a;
        out[j + 1] += c;
    }
    out
}

fn poly_eval(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn poly_deriv(p: &[Complex64]) -> Vec<Complex64> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(j, &c)| c * j as f64)
        .collect()
}

/// All complex roots of a real polynomial given in ascending order
/// (Durand–Kerner iteration, Newton-polished).
fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    let p: Vec<Complex64> = coeffs.iter().map(|&c| Complex64::new(c / lead, 0.0)).collect();
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|j| seed.powu(j as u32 + 1)).collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = poly_eval(&p, roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    let dp = poly_deriv(&p);
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let d = poly_eval(&dp, *r);
            if d.norm() == 0.0 {
                break;
            }
            *r -= poly_eval(&p, *r) / d;
        }
    }
    roots
}

/// Tabulated φ and ψ on the dyadic grid 2^-levels over [0, N-1].
#[derive(Debug, Clone)]
pub struct Daubechies {
    pub n: usize,
    pub bank: FilterBank,
    levels: u32,
    phi: Vec<f64>,
    psi: Vec<f64>,
}

impl Daubechies {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_levels(n, CASCADE_LEVELS)
    }

    pub fn with_levels(n: usize, levels: u32) -> Result<Self> {
        let h = lowpass(n)?;
        let bank = FilterBank::from_lowpass(Sequence::new(0, h));
        let phi = cascade(&bank.h, n, levels)?;
        let psi = wavelet_from_phi(&bank.h1, &phi, n, levels);
        Ok(Daubechies { n, bank, levels, phi, psi })
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn spacing(&self) -> f64 {
        (0.5f64).powi(self.levels as i32)
    }

    /// Samples at t_j = j·spacing, j = 0..=(N-1)·2^levels.
    pub fn phi_samples(&self) -> &[f64] {
        &self.phi
    }

    pub fn psi_samples(&self) -> &[f64] {
        &self.psi
    }

    /// Integer offset applied to ψ so its support is [0, N-1].
    pub fn psi_shift(&self) -> i32 {
        (self.n as i32 - 2) / 2
    }

    pub fn phi(&self, t: f64) -> f64 {
        interp(&self.phi, self.levels, t)
    }

    pub fn psi(&self, t: f64) -> f64 {
        interp(&self.psi, self.levels, t)
    }

    pub fn phi_hat(&self, w: f64) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        let mut xi = w / 2.0;
        while xi.abs() > 1e-17 {
            acc *= self.bank.h.symbol(xi);
            xi /= 2.0;
            if acc.norm() < 1e-300 {
                break;
            }
        }
        acc / (2.0 * PI).sqrt()
    }

    pub fn psi_hat(&self, w: f64) -> Complex64 {
        let raw = self.bank.h1.symbol(w / 2.0) * self.phi_hat(w / 2.0);
        raw * Complex64::from_polar(1.0, -w * self.psi_shift() as f64)
    }
}

fn interp(table: &[f64], levels: u32, t: f64) -> f64 {
    let x = t * (1u64 << levels) as f64;
    if !(x >= 0.0) {
        return 0.0;
    }
    let last = (table.len() - 1) as f64;
    if x > last {
        return 0.0;
    }
    let j = x.floor() as usize;
    if j + 1 >= table.len() {
        return table[table.len() - 1];
    }
    let f = x - j as f64;
    table[j] * (1.0 - f) + table[j + 1] * f
}

/// φ at integers from the eigenvector of M_kj = √2 h(2k−j), then dyadic refinement.
fn cascade(h: &Sequence, n: usize, levels: u32) -> Result<Vec<f64>> {
    let ints = if n == 2 {
        // Haar: the box on [0, 1), right-continuous at the integers.
        DVector::from_vec(vec![1.0, 0.0])
    } else {
        integer_values(h, n)?
    };
    Ok(refine(h, n, levels, ints))
}

fn integer_values(h: &Sequence, n: usize) -> Result<DVector<f64>> {
    let m = DMatrix::from_fn(n, n, |k, j| {
        let idx = 2 * k as i32 - j as i32;
        let v = SQRT_2 * h.get(idx);
        if k == j {
            v - 1.0
        } else {
            v
        }
    });
    // Replace the last row by the normalization Σφ(k) = 1.
    let mut a = m;
    let mut rhs = DVector::zeros(n);
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    rhs[n - 1] = 1.0;
    a.lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("cascade eigen-system is singular".into()))
}

fn refine(h: &Sequence, n: usize, levels: u32, ints: DVector<f64>) -> Vec<f64> {
    let scale = 1usize << levels;
    let len = (n - 1) * scale + 1;
    let mut phi = vec![0.0; len];
    for k in 0..n {
        phi[k * scale] = ints[k];
    }
    // Level j fills odd multiples of 2^(levels-j).
    for j in 1..=levels {
        let stride = 1usize << (levels - j);
        let mut idx = stride;
        while idx < len {
            // t = idx/scale; φ(t) = Σ √2 h(n) φ(2t − n), where 2t − n has grid index 2·idx − n·scale.
            let mut acc = 0.0;
            for (nn, c) in h.iter() {
                let arg = 2 * idx as i64 - nn as i64 * scale as i64;
                if arg >= 0 && (arg as usize) < len {
                    acc += c * phi[arg as usize];
                }
            }
            phi[idx] = SQRT_2 * acc;
            idx += 2 * stride;
        }
    }
    phi
}

/// ψ(t) = Σ √2 h1(n) φ(2t − (N−2) − n), tabulated on the same grid as φ.
fn wavelet_from_phi(h1: &Sequence, phi: &[f64], n: usize, levels: u32) -> Vec<f64> {
    let scale = 1i64 << levels;
    let len = phi.len();
    let shift = n as i64 - 2;
    let mut psi = vec![0.0; len];
    for (idx, out) in psi.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (nn, c) in h1.iter() {
            let arg = 2 * idx as i64 - (shift + nn as i64) * scale;
            if arg >= 0 && (arg as usize) < len {
                acc += c * phi[arg as usize];
            }
        }
        *out = SQRT_2 * acc;
    }
    psi
}
