//! Meyer wavelets: defined in Fourier space, tabulated in real space by FFT.
//!
//! The family is parametrized by the transition half-width ε: φ̂ is flat on
//! |ω| ≤ π(1−ε) and falls to zero at π(1+ε), smoothed by the polynomial
//! ν(x) = x⁴(35 − 84x + 70x² − 20x³). ε = 1/3 is the textbook shape;
//! the default 1/8 gives sharper scale separation.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

pub const DEFAULT_EPS: f64 = 0.125;

/// Sample spacing of the real-space table.
pub const TABLE_STEP: f64 = 1.0 / 256.0;
/// Real-space radius of the table; evaluation outside returns 0.
pub const TABLE_RADIUS: f64 = 256.0;
// Period of the discrete inverse transform; aliasing comes from |t| > PERIOD/2.
const PERIOD: f64 = 1024.0;

pub fn nu(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        x.powi(4) * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x)
    }
}

#[derive(Debug)]
struct Table {
    // φ(u) and g(u) = ψ(u − ½) for u = j·TABLE_STEP, both even in u.
    phi: Vec<f64>,
    g: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Meyer {
    eps: f64,
    table: Arc<Table>,
}

impl Meyer {
    pub fn new() -> Self {
        static DEFAULT: OnceLock<Arc<Table>> = OnceLock::new();
        let table = DEFAULT.get_or_init(|| Arc::new(build_table(DEFAULT_EPS))).clone();
        Meyer { eps: DEFAULT_EPS, table }
    }

    /// Meyer family with transition half-width `eps` ∈ (0, 1/3].
    pub fn with_transition(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0 / 3.0 + 1e-15) {
            return Err(Error::Parameter(format!(
                "Meyer transition width must lie in (0, 1/3], got {eps}"
            )));
        }
        if eps == DEFAULT_EPS {
            return Ok(Self::new());
        }
        Ok(Meyer { eps, table: Arc::new(build_table(eps)) })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// √(2π)·φ̂(ω), real and even.
    pub fn phi_amp(&self, w: f64) -> f64 {
        phi_amp(self.eps, w)
    }

    /// √(2π)·|ψ̂(ω)|, real and even.
    pub fn psi_amp(&self, w: f64) -> f64 {
        psi_amp(self.eps, w)
    }

    pub fn phi_hat(&self, w: f64) -> Complex64 {
        Complex64::new(self.phi_amp(w) / (2.0 * PI).sqrt(), 0.0)
    }

    pub fn psi_hat(&self, w: f64) -> Complex64 {
        Complex64::from_polar(self.psi_amp(w) / (2.0 * PI).sqrt(), w / 2.0)
    }

    pub fn phi(&self, t: f64) -> f64 {
        lookup(&self.table.phi, t.abs())
    }

    pub fn psi(&self, t: f64) -> f64 {
        lookup(&self.table.g, (t + 0.5).abs())
    }

    /// |ω| range where ψ̂ is nonzero.
    pub fn psi_band(&self) -> (f64, f64) {
        (PI * (1.0 - self.eps), 2.0 * PI * (1.0 + self.eps))
    }
}

impl Default for Meyer {
    fn default() -> Self {
        Self::new()
    }
}

fn phi_amp(eps: f64, w: f64) -> f64 {
    let a = PI * (1.0 - eps);
    let w = w.abs();
    if w <= a {
        1.0
    } else if w >= PI * (1.0 + eps) {
        0.0
    } else {
        (PI / 2.0 * nu((w - a) / (2.0 * PI * eps))).cos()
    }
}

fn psi_amp(eps: f64, w: f64) -> f64 {
    let a = PI * (1.0 - eps);
    let b = PI * (1.0 + eps);
    let w = w.abs();
    if w <= a || w >= 2.0 * b {
        0.0
    } else if w < b {
        (PI / 2.0 * nu((w - a) / (2.0 * PI * eps))).sin()
    } else if w <= 2.0 * a {
        1.0
    } else {
        (PI / 2.0 * nu((w / 2.0 - a) / (2.0 * PI * eps))).cos()
    }
}

fn build_table(eps: f64) -> Table {
    let n = (PERIOD / TABLE_STEP).round() as usize;
    let keep = (TABLE_RADIUS / TABLE_STEP).round() as usize + 1;
    let dw = 2.0 * PI / PERIOD;
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_inverse(n);
    let run = |amp: &dyn Fn(f64) -> f64| -> Vec<f64> {
        let mut buf: Vec<Complex64> = (0..n)
            .map(|m| {
                let mm = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
                Complex64::new(amp(mm * dw), 0.0)
            })
            .collect();
        fft.process(&mut buf);
        buf[..keep].iter().map(|c| c.re / PERIOD).collect()
    };
    let phi = run(&|w| phi_amp(eps, w));
    let g = run(&|w| psi_amp(eps, w));
    Table { phi, g }
}

// Six-point Lagrange interpolation of an even function tabulated at u ≥ 0.
fn lookup(tab: &[f64], u: f64) -> f64 {
    let x = u / TABLE_STEP;
    let last = tab.len() - 1;
    if x > last as f64 {
        return 0.0;
    }
    let j = x.floor() as i64;
    let f = x - j as f64;
    let at = |i: i64| -> f64 {
        let i = i.unsigned_abs() as usize;
        if i > last {
            0.0
        } else {
            tab[i]
        }
    };
    if f == 0.0 {
        return at(j);
    }
    let mut acc = 0.0;
    for m in -2i64..=3 {
        let mut w = 1.0;
        for q in -2i64..=3 {
            if q != m {
                w *= (f - q as f64) / (m - q) as f64;
            }
        }
        acc += w * at(j + m);
    }
    acc
}
