//! Shannon (sinc) family: exact in both domains, slowly decaying in real space.

use std::f64::consts::PI;

pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

pub fn phi(t: f64) -> f64 {
    sinc(t)
}

pub fn psi(t: f64) -> f64 {
    2.0 * sinc(2.0 * t) - sinc(t)
}

/// √(2π)·φ̂: the box |ω| < π.
pub fn phi_amp(w: f64) -> f64 {
    if w.abs() < PI {
        1.0
    } else {
        0.0
    }
}

/// √(2π)·ψ̂: the box π ≤ |ω| < 2π (half-open so that scales tile the axis).
pub fn psi_amp(w: f64) -> f64 {
    let a = w.abs();
    if (PI..2.0 * PI).contains(&a) {
        1.0
    } else {
        0.0
    }
}
