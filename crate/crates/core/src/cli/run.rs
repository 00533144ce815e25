//! Experiment pipelines. Every pipeline produces its artifacts in memory;
//! nothing touches the output directory until all stages have succeeded.

use std::time::Instant;

use num_complex::Complex64;

use super::config::{Experiment, ExperimentConfig};
use crate::coeffs::{CoefficientTable, PlaneWaveGrid};
use crate::dynamics::{
    energy_density, evolve_free, evolve_with_atom, fit_decay, gaussian_state, plane_wave_couplings, to_plane_wave,
    to_wavelet, wavelet_couplings, Basis, DensityMap, Diagonal, Generator, SingleExcitationState,
};
use crate::error::{Error, Result};
use crate::field::{assemble_hamiltonian, mode_b, mode_e, CouplingMatrix, SpatialGrid};
use crate::io::{fmt_f64, CsvWriter};
use crate::mra::{transform::tabulate, Kind, Wavelet1D};

/// Fidelity floor for wavelet-basis evolution against the diagonal oracle.
pub const ORACLE_FIDELITY: f64 = 1.0 - 1e-6;

/// Named artifacts plus summary lines.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub files: Vec<(String, String)>,
    pub summary: Vec<String>,
    pub timings: Vec<(String, f64)>,
}

impl Artifacts {
    fn file(&mut self, name: impl Into<String>, csv: CsvWriter) {
        self.files.push((name.into(), csv.as_str().to_string()));
    }

    fn line(&mut self, key: &str, value: impl std::fmt::Display) {
        self.summary.push(format!("{key} = {value}"));
    }

    fn num(&mut self, key: &str, value: f64) {
        self.line(key, fmt_f64(value));
    }

    /// Runs one stage, recording its wall time and naming it in errors.
    fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let t0 = Instant::now();
        let r = f().map_err(|e| e.in_stage(name));
        self.timings.push((name.to_string(), t0.elapsed().as_secs_f64()));
        r
    }

    pub fn summary_text(&self) -> String {
        let mut s = String::new();
        for l in &self.summary {
            s.push_str(l);
            s.push('\n');
        }
        for (name, secs) in &self.timings {
            s.push_str(&format!("runtime_{name}_s = {secs:.3}\n"));
        }
        s
    }
}

/// Plane-wave grid and coefficient table for the configured basis.
pub fn build_basis(cfg: &ExperimentConfig) -> Result<(Wavelet1D, CoefficientTable)> {
    let w = cfg.wavelet()?;
    let grid = PlaneWaveGrid::build(cfg.dim, cfg.box_len, cfg.n_max, Some(cfg.band))?;
    let table = CoefficientTable::build_with(&w, &grid, cfg.s_min, cfg.s_max, cfg.include_scaling)?;
    Ok((w, table))
}

pub fn run(cfg: &ExperimentConfig) -> Result<Artifacts> {
    let mut out = Artifacts::default();
    out.line("experiment", cfg.experiment.name());
    out.line("family", &cfg.family);
    if cfg.experiment == Experiment::Tabulate {
        run_tabulate(cfg, &mut out)?;
        return Ok(out);
    }
    let (_, table) = out.stage("basis", || build_basis(cfg))?;
    basis_summary(&table, &mut out);
    match cfg.experiment {
        Experiment::Tabulate => unreachable!(),
        Experiment::Coeffs => run_coeffs(cfg, &table, &mut out)?,
        Experiment::Modes => run_modes(cfg, &table, &mut out)?,
        Experiment::Gaussian1d | Experiment::Gaussian2d => run_gaussian(cfg, &table, &mut out)?,
        Experiment::ModeEvolve => run_mode_evolve(cfg, &table, &mut out)?,
        Experiment::AtomDecay => run_atom(cfg, &table, &mut out)?,
    }
    Ok(out)
}

fn basis_summary(table: &CoefficientTable, out: &mut Artifacts) {
    let g = table.grid();
    out.line("dim", g.dim());
    out.num("L", g.box_len());
    out.line("n_max", g.n_max());
    out.line("plane_waves", g.len());
    out.line("wavelet_modes", table.len());
    out.line("scales", format!("{}..{}", table.scales().0, table.scales().1));
    if let Some((lo, hi)) = table.covered_band() {
        out.line("covered_band", format!("[{}, {}]", fmt_f64(lo), fmt_f64(hi)));
    }
    out.line("covers_grid", table.covers_grid());
}

fn run_tabulate(cfg: &ExperimentConfig, out: &mut Artifacts) -> Result<()> {
    let w = cfg.wavelet()?;
    let (a, b) = cfg.tab_range;
    let csv = out.stage("tabulate", || Ok(tabulate(&w, a, b, cfg.tab_points)))?;
    if w.is_compact() {
        let (lo, hi) = w.real_support(Kind::Scaling);
        let mut outside: f64 = 0.0;
        for line in csv.as_str().lines().skip(1) {
            let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
            if v[0] < lo || v[0] > hi {
                outside = outside.max(v[1].abs()).max(v[2].abs());
            }
        }
        out.line("support", format!("[{}, {}]", fmt_f64(lo), fmt_f64(hi)));
        out.num("max_abs_outside_support", outside);
    }
    out.line("points", cfg.tab_points);
    out.file("tabulate.csv", csv);
    Ok(())
}

/// Fixed, reproducible test vector e^{i·0.7j}/√n.
fn probe_vector(n: usize) -> Vec<Complex64> {
    let s = (n as f64).sqrt();
    (0..n).map(|j| Complex64::from_polar(1.0 / s, 0.7 * j as f64)).collect()
}

fn run_coeffs(cfg: &ExperimentConfig, table: &CoefficientTable, out: &mut Artifacts) -> Result<()> {
    let (iso, rt) = out.stage("isometry", || {
        let v = probe_vector(table.grid().len());
        let c = table.to_wavelet(&v);
        let back = table.to_plane_wave(&c);
        let iso = (c.iter().map(|x| x.norm_sqr()).sum::<f64>() - 1.0).abs();
        let rt = back.iter().zip(&v).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        Ok((iso, rt))
    })?;
    out.num("isometry_error", iso);
    out.num("round_trip_error", rt);
    if table.covers_grid() && rt > 1e-6 {
        return Err(Error::Numerical(format!("round trip error {rt:.3e} on a covered grid")).in_stage("isometry"));
    }
    if cfg.write_coeffs {
        let csv = out.stage("export", || Ok(table.to_csv()))?;
        out.file("coeffs.csv", csv);
    }
    Ok(())
}

fn hamiltonian(cfg: &ExperimentConfig, table: &CoefficientTable, out: &mut Artifacts) -> Result<CouplingMatrix> {
    let w = out.stage("hamiltonian", || assemble_hamiltonian(table, cfg.sparsity_tol))?;
    out.line("w_dimension", w.n());
    out.num("w_nonzero_fraction", w.nnz_fraction());
    out.num("w_sparsity_tol", w.sparsity_tol);
    out.num("w_dropped_norm", w.dropped_norm);
    out.num("w_max_asymmetry", w.matrix.max_asymmetry());
    out.num("w_max_imag", w.max_imag);
    Ok(w)
}

fn run_modes(cfg: &ExperimentConfig, table: &CoefficientTable, out: &mut Artifacts) -> Result<()> {
    let sg = SpatialGrid::default_for(table.grid());
    let (e, b) = out.stage("modes", || Ok((mode_e(table, &cfg.mode, &sg)?, mode_b(table, &cfg.mode, &sg)?)))?;
    out.num("mode_e_max", e.max_abs());
    out.num("mode_b_max", b.max_abs());
    out.num("mode_e_norm", e.overlap(&e).re);
    out.num("mode_e_b_overlap", e.overlap(&b).norm());
    let meta = e.metadata(&cfg.family);
    out.file("mode_E.csv", e.to_csv());
    out.file("mode_B.csv", b.to_csv());
    out.files.push(("mode.meta".into(), meta));

    let w = hamiltonian(cfg, table, out)?;
    let half: f64 = 0.5 * table.grid().omegas().iter().sum::<f64>();
    out.num("zero_point", w.zero_point);
    out.num("zero_point_plane_wave", half);
    if let Some(mu) = table.position(&cfg.mode) {
        out.num("mode_energy", w.get(mu, mu));
    }
    if table.covers_grid() && (w.zero_point - half).abs() > 1e-8 * half.max(1.0) {
        return Err(Error::Numerical(format!("zero-point mismatch {} vs {half}", w.zero_point)).in_stage("hamiltonian"));
    }
    if cfg.write_matrix {
        let csv = out.stage("export", || Ok(w.to_csv()))?;
        out.file("w.csv", csv);
    }
    Ok(())
}

fn stamp(t: f64) -> String {
    format!("rho_t{t:.3}.csv")
}

/// Steps `state` through `times`, calling `snap` at each.
fn march(
    state: SingleExcitationState,
    field: &dyn Generator,
    cfg: &ExperimentConfig,
    mut snap: impl FnMut(&SingleExcitationState) -> Result<()>,
) -> Result<SingleExcitationState> {
    let mut s = state;
    for &t in &cfg.times {
        if t > s.time {
            s = evolve_free(&s, field, t - s.time, cfg.integrator)?;
        }
        snap(&s)?;
    }
    Ok(s)
}

fn field_generator<'a>(
    cfg: &ExperimentConfig,
    table: &CoefficientTable,
    out: &mut Artifacts,
    w: &'a mut Option<CouplingMatrix>,
    diag: &'a Diagonal,
) -> Result<&'a dyn Generator> {
    Ok(match cfg.propagation {
        Basis::Wavelet => {
            *w = Some(hamiltonian(cfg, table, out)?);
            w.as_ref().unwrap()
        }
        Basis::PlaneWave => diag,
    })
}

fn run_gaussian(cfg: &ExperimentConfig, table: &CoefficientTable, out: &mut Artifacts) -> Result<()> {
    let g = table.grid();
    let pw0 = out.stage("state", || gaussian_state(g, &cfg.photon))?;
    let wv0 = to_wavelet(&pw0, table)?;
    out.num("wavelet_norm_t0", wv0.norm_sqr());
    let mut amps = CsvWriter::new("s,lx,ly,lz,i,re,im,abs");
    for (mu, idx) in table.indices().iter().enumerate() {
        let c = wv0.amps[mu];
        amps.row(&[
            idx.s.to_string(),
            idx.l[0].to_string(),
            idx.l[1].to_string(),
            idx.l[2].to_string(),
            idx.i.to_string(),
            fmt_f64(c.re),
            fmt_f64(c.im),
            fmt_f64(c.norm()),
        ]);
    }
    out.file("wavelet_amplitudes_t0.csv", amps);
    let (s_lo, s_hi) = table.scales();
    for s in s_lo..=s_hi {
        let p: f64 = table
            .indices()
            .iter()
            .zip(&wv0.amps)
            .filter(|(m, _)| m.s == s)
            .map(|(_, c)| c.norm_sqr())
            .sum();
        out.num(&format!("scale_{s}_weight"), p);
    }

    let diag = Diagonal(g.omegas());
    let mut w = None;
    let field = field_generator(cfg, table, out, &mut w, &diag)?;
    let start = match cfg.propagation {
        Basis::Wavelet => wv0,
        Basis::PlaneWave => pw0.clone(),
    };
    let sg = SpatialGrid::default_for(g);
    let mut maps: Vec<(f64, DensityMap, f64)> = Vec::new();
    let t0 = Instant::now();
    march(start, field, cfg, |s| {
        let oracle = evolve_free(&pw0, &diag, s.time, cfg.integrator)?;
        let fid = to_plane_wave(s, table)?.fidelity(&oracle);
        maps.push((s.time, energy_density(s, table, &sg)?, fid));
        Ok(())
    })
    .map_err(|e| e.in_stage("evolve"))?;
    out.timings.push(("evolve".into(), t0.elapsed().as_secs_f64()));
    let c0 = maps.first().map(|m| m.1.centroid());
    for (t, map, fid) in maps {
        let tag = format!("{t:.3}");
        let c = map.centroid();
        out.num(&format!("fidelity_t{tag}"), fid);
        out.num(&format!("energy_t{tag}"), map.total());
        out.line(&format!("centroid_t{tag}"), format!("{}, {}", fmt_f64(c[0]), fmt_f64(c[1])));
        if let Some(c0) = c0 {
            out.num(&format!("centroid_shift_x_t{tag}"), c[0] - c0[0]);
        }
        if cfg.propagation == Basis::Wavelet && table.covers_grid() && fid < ORACLE_FIDELITY {
            return Err(Error::Numerical(format!("fidelity {fid} against the plane-wave oracle at t = {t}"))
                .in_stage("evolve"));
        }
        out.file(stamp(t), map.to_csv());
    }
    Ok(())
}

fn run_mode_evolve(cfg: &ExperimentConfig, table: &CoefficientTable, out: &mut Artifacts) -> Result<()> {
    let g = table.grid();
    let mu = table
        .position(&cfg.mode)
        .ok_or_else(|| Error::config("mode_s", format!("{:?} is not in the index set", cfg.mode)))?;
    let mut wv0 = SingleExcitationState::vacuum(Basis::Wavelet, table.len());
    wv0.amps[mu] = Complex64::new(1.0, 0.0);
    let diag = Diagonal(g.omegas());
    let mut w = None;
    let field = field_generator(cfg, table, out, &mut w, &diag)?;
    let start = match cfg.propagation {
        Basis::Wavelet => wv0,
        Basis::PlaneWave => to_plane_wave(&wv0, table)?,
    };
    out.num("plane_wave_norm", to_plane_wave(&start, table)?.norm_sqr());
    let c = table.center(&cfg.mode);
    let center = [c[0], c[1]];
    let n = 8 * g.n_max() as usize;
    let half = 0.5 * g.box_len() * (1.0 - 1.0 / n as f64);
    let sg = if cfg.dim == 2 {
        SpatialGrid::centered(center, half, n)
    } else {
        let mut s = SpatialGrid::default_for(g);
        s.origin[0] = center[0] - half;
        s
    };
    out.line("mode_center", format!("{}, {}", fmt_f64(center[0]), fmt_f64(center[1])));
    let mut maps = Vec::new();
    let t0 = Instant::now();
    march(start, field, cfg, |s| {
        maps.push((s.time, energy_density(s, table, &sg)?));
        Ok(())
    })
    .map_err(|e| e.in_stage("evolve"))?;
    out.timings.push(("evolve".into(), t0.elapsed().as_secs_f64()));
    for (t, map) in maps {
        let tag = format!("{t:.3}");
        out.num(&format!("energy_t{tag}"), map.total());
        out.num(&format!("fraction_outside_r4_t{tag}"), map.fraction_outside(center, 4.0));
        out.num(&format!("mirror_asymmetry_t{tag}"), map.mirror_asymmetry(center));
        out.file(stamp(t), map.to_csv());
    }
    Ok(())
}

fn run_atom(cfg: &ExperimentConfig, table: &CoefficientTable, out: &mut Artifacts) -> Result<()> {
    let g = table.grid();
    let diag = Diagonal(g.omegas());
    let mut w = None;
    let field = field_generator(cfg, table, out, &mut w, &diag)?;
    let (state, gs) = match cfg.propagation {
        Basis::Wavelet => {
            (SingleExcitationState::excited_atom(Basis::Wavelet, table.len()), wavelet_couplings(table, &cfg.atom))
        }
        Basis::PlaneWave => {
            (SingleExcitationState::excited_atom(Basis::PlaneWave, g.len()), plane_wave_couplings(g, &cfg.atom))
        }
    };
    let lo = cfg.atom.omega_a;
    if lo < g.band().map_or(0.0, |b| b.0) || lo > g.omega_max() {
        log::warn!("atomic frequency {lo} lies outside the grid's frequency range");
    }
    let traj = out.stage("evolve", || evolve_with_atom(&state, field, &cfg.atom, gs, cfg.t_end, cfg.dt_out, cfg.integrator))?;
    for l in traj.summary_lines() {
        out.summary.push(l);
    }
    let fit = out.stage("fit", || fit_decay(&traj, cfg.fit_window))?;
    for l in fit.summary_lines() {
        out.summary.push(l);
    }
    out.num("gamma_ratio", fit.gamma / fit.gamma_theory);
    out.file("trajectory.csv", traj.to_csv());
    Ok(())
}
