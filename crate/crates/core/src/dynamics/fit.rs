//! Exponential decay fits of the atomic excitation probability.

use super::atom::Trajectory;
use crate::error::{Error, Result};
use crate::io::fmt_f64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub window: (f64, f64),
    pub points: usize,
    pub gamma: f64,
    /// ln P(0) intercept of the fitted line.
    pub intercept: f64,
    /// Coefficient of determination of the log-linear fit.
    pub r_squared: f64,
    /// RMS residual of ln P about the line.
    pub rms_residual: f64,
    pub gamma_theory: f64,
}

impl DecayFit {
    pub fn summary_lines(&self) -> Vec<String> {
        vec![
            format!("fit_window = [{}, {}]", fmt_f64(self.window.0), fmt_f64(self.window.1)),
            format!("fit_points = {}", self.points),
            format!("gamma_fit = {}", fmt_f64(self.gamma)),
            format!("gamma_theory = {}", fmt_f64(self.gamma_theory)),
            format!("fit_r_squared = {}", fmt_f64(self.r_squared)),
            format!("fit_rms_residual = {}", fmt_f64(self.rms_residual)),
        ]
    }
}

/// Window [1/ω_a, 0.8·t_end], skipping the initial transient.
pub fn default_window(omega_a: f64, t_end: f64) -> (f64, f64) {
    (1.0 / omega_a, 0.8 * t_end)
}

/// Least-squares line through (t, ln p) for samples inside `window`.
/// Returns (Γ, intercept, R², rms, count).
pub fn fit_log_linear(times: &[f64], probs: &[f64], window: (f64, f64)) -> Result<(f64, f64, f64, f64, usize)> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(Error::config("fit_window", format!("empty window [{lo}, {hi}]")));
    }
    let mut pts = Vec::new();
    for (&t, &p) in times.iter().zip(probs) {
        if t < lo || t > hi {
            continue;
        }
        if !(p > 0.0) {
            return Err(Error::Numerical(format!("probability {p} at t = {t} is not positive; cannot fit a log")));
        }
        pts.push((t, p.ln()));
    }
    if pts.len() < 3 {
        return Err(Error::config("fit_window", format!("only {} samples inside [{lo}, {hi}]", pts.len())));
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let sty: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sty / stt;
    let intercept = my - slope * mt;
    let sse: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r2 = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    Ok((-slope, intercept, r2, (sse / n).sqrt(), pts.len()))
}

pub fn fit_decay(traj: &Trajectory, window: (f64, f64)) -> Result<DecayFit> {
    let (gamma, intercept, r_squared, rms_residual, points) = fit_log_linear(&traj.times, &traj.prob_atom, window)?;
    Ok(DecayFit {
        window,
        points,
        gamma,
        intercept,
        r_squared,
        rms_residual,
        gamma_theory: traj.atom.gamma_theory(),
    })
}
