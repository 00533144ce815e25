//! One-dimensional multiresolution analysis: Shannon, Meyer and Daubechies
//! families with real- and Fourier-space evaluation.
//!
//! Fourier convention: f̂(ω) = (2π)^{-1/2} ∫ f(t) e^{-iωt} dt.

pub mod daubechies;
pub mod filter;
pub mod meyer;
pub mod quadrature;
pub mod shannon;
pub mod transform;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

pub use daubechies::Daubechies;
pub use filter::{check_filter_conditions, derive_highpass, FilterBank, FilterReport, Sequence};
pub use meyer::Meyer;
pub use transform::{analyze, synthesize, tabulate, Analysis, SampledFunction};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Scaling,
    Wavelet,
}

/// (s, l) of ψ_{s,l}(t) = 2^{s/2} ψ(2^s t − l).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScaleTranslate {
    pub s: i32,
    pub l: i64,
}

impl ScaleTranslate {
    pub fn new(s: i32, l: i64) -> Self {
        ScaleTranslate { s, l }
    }
}

#[derive(Debug, Clone)]
pub enum Wavelet1D {
    Shannon,
    Meyer(Meyer),
    Daubechies(Arc<Daubechies>),
}

impl fmt::Display for Wavelet1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wavelet1D::Shannon => write!(f, "shannon"),
            Wavelet1D::Meyer(m) if m.eps() == meyer::DEFAULT_EPS => write!(f, "meyer"),
            Wavelet1D::Meyer(m) => write!(f, "meyer(eps={})", m.eps()),
            Wavelet1D::Daubechies(d) => write!(f, "daubechies{}", d.n),
        }
    }
}

impl Wavelet1D {
    pub fn shannon() -> Self {
        Wavelet1D::Shannon
    }

    pub fn meyer() -> Self {
        Wavelet1D::Meyer(Meyer::new())
    }

    pub fn meyer_with_transition(eps: f64) -> Result<Self> {
        Ok(Wavelet1D::Meyer(Meyer::with_transition(eps)?))
    }

    pub fn daubechies(n: usize) -> Result<Self> {
        Ok(Wavelet1D::Daubechies(Arc::new(Daubechies::new(n)?)))
    }

    /// Parses `shannon`, `meyer` or `daubechiesN` (e.g. `daubechies6`).
    pub fn from_name(name: &str) -> Result<Self> {
        let name = name.trim().to_ascii_lowercase();
        match name.as_str() {
            "shannon" => Ok(Self::shannon()),
            "meyer" => Ok(Self::meyer()),
            _ => {
                if let Some(n) = name.strip_prefix("daubechies") {
                    let n: usize = n
                        .parse()
                        .map_err(|_| Error::Parameter(format!("unknown wavelet family `{name}`")))?;
                    Self::daubechies(n)
                } else {
                    Err(Error::Parameter(format!("unknown wavelet family `{name}`")))
                }
            }
        }
    }

    pub fn filter_bank(&self) -> Option<&FilterBank> {
        match self {
            Wavelet1D::Daubechies(d) => Some(&d.bank),
            _ => None,
        }
    }

    pub fn eval(&self, kind: Kind, t: f64) -> f64 {
        match (self, kind) {
            (Wavelet1D::Shannon, Kind::Scaling) => shannon::phi(t),
            (Wavelet1D::Shannon, Kind::Wavelet) => shannon::psi(t),
            (Wavelet1D::Meyer(m), Kind::Scaling) => m.phi(t),
            (Wavelet1D::Meyer(m), Kind::Wavelet) => m.psi(t),
            (Wavelet1D::Daubechies(d), Kind::Scaling) => d.phi(t),
            (Wavelet1D::Daubechies(d), Kind::Wavelet) => d.psi(t),
        }
    }

    pub fn eval_scaled(&self, kind: Kind, idx: ScaleTranslate, t: f64) -> f64 {
        let x = scale_pow(idx.s) * t - idx.l as f64;
        scale_pow(idx.s).sqrt() * self.eval(kind, x)
    }

    pub fn fourier(&self, kind: Kind, w: f64) -> Complex64 {
        let norm = 1.0 / (2.0 * PI).sqrt();
        match (self, kind) {
            (Wavelet1D::Shannon, Kind::Scaling) => Complex64::new(norm * shannon::phi_amp(w), 0.0),
            (Wavelet1D::Shannon, Kind::Wavelet) => Complex64::new(norm * shannon::psi_amp(w), 0.0),
            (Wavelet1D::Meyer(m), Kind::Scaling) => m.phi_hat(w),
            (Wavelet1D::Meyer(m), Kind::Wavelet) => m.psi_hat(w),
            (Wavelet1D::Daubechies(d), Kind::Scaling) => d.phi_hat(w),
            (Wavelet1D::Daubechies(d), Kind::Wavelet) => d.psi_hat(w),
        }
    }

    /// Interval outside which the fundamental function is treated as zero.
    pub fn real_support(&self, kind: Kind) -> (f64, f64) {
        match (self, kind) {
            (Wavelet1D::Shannon, _) => (-SHANNON_WINDOW, SHANNON_WINDOW),
            (Wavelet1D::Meyer(_), Kind::Scaling) => (-meyer::TABLE_RADIUS, meyer::TABLE_RADIUS),
            (Wavelet1D::Meyer(_), Kind::Wavelet) => {
                (-meyer::TABLE_RADIUS - 0.5, meyer::TABLE_RADIUS - 0.5)
            }
            (Wavelet1D::Daubechies(d), _) => (0.0, (d.n - 1) as f64),
        }
    }

    /// Center used to place ψ_{s,l}: the fundamental ψ is centered here.
    pub fn psi_center(&self) -> f64 {
        match self {
            Wavelet1D::Shannon => 0.0,
            Wavelet1D::Meyer(_) => -0.5,
            Wavelet1D::Daubechies(d) => (d.n - 1) as f64 / 2.0,
        }
    }

    pub fn is_compact(&self) -> bool {
        matches!(self, Wavelet1D::Daubechies(_))
    }

    /// |ω| interval carrying ψ̂; `None` when ψ̂ is not band-limited.
    pub fn psi_band(&self) -> Option<(f64, f64)> {
        match self {
            Wavelet1D::Shannon => Some((PI, 2.0 * PI)),
            Wavelet1D::Meyer(m) => Some(m.psi_band()),
            Wavelet1D::Daubechies(_) => None,
        }
    }

    /// |ω| interval on which the scales s_min..=s_max alone resolve the identity,
    /// Σ_s 2^{-s}|√(2π)ψ̂(2^{-s}ω)|² = 1.
    pub fn covered_band(&self, s_min: i32, s_max: i32) -> Option<(f64, f64)> {
        if s_min > s_max {
            return None;
        }
        let (lo, hi) = match self {
            Wavelet1D::Shannon => (PI, 2.0 * PI),
            Wavelet1D::Meyer(m) => (PI * (1.0 + m.eps()), 2.0 * PI * (1.0 - m.eps())),
            Wavelet1D::Daubechies(_) => return None,
        };
        Some((lo * scale_pow(s_min), hi * scale_pow(s_max)))
    }
}

/// Quadrature window radius for Shannon integrals.
pub const SHANNON_WINDOW: f64 = 200.0;

pub fn scale_pow(s: i32) -> f64 {
    2f64.powi(s)
}
