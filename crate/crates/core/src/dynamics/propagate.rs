//! Time stepping of iψ̇ = Hψ for Hermitian single-excitation generators.
//!
//! The default propagator expands exp(−iHτ) in Chebyshev polynomials of the
//! rescaled generator; its error is set by the truncation of the Bessel
//! series (1e-15), independent of the step. Fixed-step RK4 is available for
//! comparison and rejects any step whose norm drift exceeds 1e-10.

use num_complex::Complex64;
use rayon::prelude::*;

use super::bessel::bessel_j_all;
use crate::error::{Error, Result};
use crate::field::CouplingMatrix;

/// A Hermitian operator with a known spectral enclosure.
pub trait Generator: Sync {
    fn dim(&self) -> usize;
    /// y = H x.
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]);
    /// [λ_min, λ_max] enclosing the spectrum.
    fn bounds(&self) -> (f64, f64);
}

impl Generator for CouplingMatrix {
    fn dim(&self) -> usize {
        self.n()
    }
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.matrix.matvec(x, y)
    }
    fn bounds(&self) -> (f64, f64) {
        self.bounds
    }
}

/// Diagonal generator, e.g. plane-wave frequencies.
pub struct Diagonal(pub Vec<f64>);

impl Generator for Diagonal {
    fn dim(&self) -> usize {
        self.0.len()
    }
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        for ((o, a), w) in y.iter_mut().zip(x).zip(&self.0) {
            *o = a * w;
        }
    }
    fn bounds(&self) -> (f64, f64) {
        let lo = self.0.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo.min(0.0), hi.max(0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Integrator {
    /// Chebyshev expansion; segments keep the Bessel argument below `max_arg`.
    Chebyshev { max_arg: f64 },
    /// Classical RK4 with fixed step `dt`.
    Rk4 { dt: f64 },
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator::Chebyshev { max_arg: 40.0 }
    }
}

/// Per-step norm drift above which RK4 rejects its step.
pub const STEP_DRIFT_TOL: f64 = 1e-10;

/// Default RK4 step 0.4/ω_max.
pub fn default_rk4_dt(omega_max: f64) -> f64 {
    0.4 / omega_max
}

fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(|c| c.norm_sqr()).sum()
}

/// x ← exp(−iHτ) x.
pub fn propagate(h: &dyn Generator, x: &mut [Complex64], tau: f64, integrator: Integrator) -> Result<()> {
    if tau == 0.0 {
        return Ok(());
    }
    match integrator {
        Integrator::Chebyshev { max_arg } => {
            let (lo, hi) = h.bounds();
            let half = 0.5 * (hi - lo).max(1e-300);
            let segs = ((half * tau.abs()) / max_arg).ceil().max(1.0) as usize;
            let step = tau / segs as f64;
            for _ in 0..segs {
                chebyshev_step(h, x, step);
            }
            Ok(())
        }
        Integrator::Rk4 { dt } => {
            let steps = (tau.abs() / dt).ceil().max(1.0) as usize;
            let step = tau / steps as f64;
            for j in 0..steps {
                let before = norm_sqr(x);
                rk4_step(h, x, step);
                let drift = (norm_sqr(x) - before).abs();
                if drift > STEP_DRIFT_TOL {
                    return Err(Error::Numerical(format!(
                        "RK4 step {j} (dt = {step:.3e}) changed the norm by {drift:.3e} > {STEP_DRIFT_TOL:e}; reduce dt"
                    )));
                }
            }
            Ok(())
        }
    }
}

fn chebyshev_step(h: &dyn Generator, x: &mut [Complex64], tau: f64) {
    let (lo, hi) = h.bounds();
    let a = 0.5 * (hi - lo);
    let b = 0.5 * (hi + lo);
    let arg = a * tau.abs();
    let n_terms = (arg + 20.0 + 4.0 * arg.sqrt()).ceil() as usize;
    let jn = bessel_j_all(n_terms + 10, arg);
    let n = x.len();
    let sign = tau.signum();
    // X = (H − b)/a; T_0 = x, T_1 = X x, T_{n+1} = 2X T_n − T_{n−1}.
    let apply_x = |src: &[Complex64], dst: &mut [Complex64]| {
        h.apply(src, dst);
        dst.par_iter_mut().zip(src.par_iter()).for_each(|(d, s)| *d = (*d - s * b) / a);
    };
    let mut t_prev = x.to_vec();
    let mut t_cur = vec![Complex64::new(0.0, 0.0); n];
    let mut t_next = vec![Complex64::new(0.0, 0.0); n];
    let mut acc: Vec<Complex64> = t_prev.iter().map(|v| v * jn[0]).collect();
    apply_x(&t_prev, &mut t_cur);
    // coefficient 2 (−i·sign)^k J_k(aτ)
    let minus_i = Complex64::new(0.0, -sign);
    let mut phase = minus_i;
    for k in 1..=n_terms {
        let c = phase * (2.0 * jn[k]);
        acc.par_iter_mut().zip(t_cur.par_iter()).for_each(|(o, t)| *o += c * t);
        if k > arg as usize && jn[k].abs() < 1e-16 && jn[k - 1].abs() < 1e-16 {
            break;
        }
        apply_x(&t_cur, &mut t_next);
        t_next
            .par_iter_mut()
            .zip(t_prev.par_iter())
            .for_each(|(nx, p)| *nx = 2.0 * *nx - p);
        std::mem::swap(&mut t_prev, &mut t_cur);
        std::mem::swap(&mut t_cur, &mut t_next);
        phase *= minus_i;
    }
    let global = Complex64::from_polar(1.0, -b * tau);
    for (o, v) in x.iter_mut().zip(acc) {
        *o = v * global;
    }
}

fn rk4_step(h: &dyn Generator, x: &mut [Complex64], dt: f64) {
    let n = x.len();
    let mi = Complex64::new(0.0, -1.0);
    let f = |src: &[Complex64], dst: &mut [Complex64]| {
        h.apply(src, dst);
        for d in dst.iter_mut() {
            *d *= mi;
        }
    };
    let mut k1 = vec![Complex64::new(0.0, 0.0); n];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();
    f(x, &mut k1);
    for j in 0..n {
        tmp[j] = x[j] + k1[j] * (dt / 2.0);
    }
    f(&tmp, &mut k2);
    for j in 0..n {
        tmp[j] = x[j] + k2[j] * (dt / 2.0);
    }
    f(&tmp, &mut k3);
    for j in 0..n {
        tmp[j] = x[j] + k3[j] * dt;
    }
    f(&tmp, &mut k4);
    for j in 0..n {
        x[j] += (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) * (dt / 6.0);
    }
}
