//! Experiment configuration: `[section]` headers and `key = value` lines.
//!
//! Key names are unique across sections, so `--set key=value` overrides do not
//! need a section prefix (`section.key` is accepted too). Every numeric value
//! is checked here, before any output is created.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::coeffs::MultiIndex;
use crate::dynamics::{AtomParams, Basis, GaussianPhotonSpec, Integrator};
use crate::error::{Error, Result};
use crate::mra::Wavelet1D;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Tabulate,
    Coeffs,
    Modes,
    Gaussian1d,
    Gaussian2d,
    ModeEvolve,
    AtomDecay,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Tabulate => "tabulate",
            Experiment::Coeffs => "coeffs",
            Experiment::Modes => "modes",
            Experiment::Gaussian1d => "gaussian-1d",
            Experiment::Gaussian2d => "gaussian-2d",
            Experiment::ModeEvolve => "mode-evolve",
            Experiment::AtomDecay => "atom-decay",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [
            Experiment::Tabulate,
            Experiment::Coeffs,
            Experiment::Modes,
            Experiment::Gaussian1d,
            Experiment::Gaussian2d,
            Experiment::ModeEvolve,
            Experiment::AtomDecay,
        ]
        .into_iter()
        .find(|e| e.name() == s)
    }

    /// Experiments a subcommand may run; the first is its default.
    pub fn for_subcommand(cmd: &str) -> &'static [Experiment] {
        match cmd {
            "tabulate" => &[Experiment::Tabulate],
            "coeffs" => &[Experiment::Coeffs],
            "modes" => &[Experiment::Modes],
            "evolve" => &[Experiment::Gaussian2d, Experiment::Gaussian1d, Experiment::ModeEvolve],
            "atom" => &[Experiment::AtomDecay],
            _ => &[],
        }
    }
}

/// (section, key) for every accepted key.
const KEYS: &[(&str, &str)] = &[
    ("basis", "family"),
    ("basis", "eps"),
    ("basis", "dim"),
    ("basis", "L"),
    ("basis", "n_max"),
    ("basis", "band_lo"),
    ("basis", "band_hi"),
    ("basis", "s_min"),
    ("basis", "s_max"),
    ("basis", "include_scaling"),
    ("basis", "sparsity_tol"),
    ("experiment", "type"),
    ("experiment", "propagation"),
    ("experiment", "integrator"),
    ("experiment", "rk4_dt"),
    ("tabulate", "t_min"),
    ("tabulate", "t_max"),
    ("tabulate", "points"),
    ("photon", "k0"),
    ("photon", "r0"),
    ("photon", "dk2"),
    ("mode", "mode_s"),
    ("mode", "mode_l"),
    ("mode", "mode_i"),
    ("atom", "omega_a"),
    ("atom", "D"),
    ("atom", "atom_position"),
    ("time", "t_end"),
    ("time", "dt_out"),
    ("time", "times"),
    ("time", "fit_lo"),
    ("time", "fit_hi"),
    ("output", "write_coeffs"),
    ("output", "write_matrix"),
];

fn section_of(key: &str) -> Option<&'static str> {
    KEYS.iter().find(|(_, k)| *k == key).map(|(s, _)| *s)
}

/// Unvalidated key → value pairs.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    values: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut raw = RawConfig::default();
        let mut section: Option<String> = None;
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let name = name.trim();
                if !KEYS.iter().any(|(s, _)| *s == name) {
                    return Err(Error::config(name, format!("unknown section on line {}", ln + 1)));
                }
                section = Some(name.to_string());
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::config(line, format!("line {} is not `key = value`", ln + 1)));
            };
            raw.insert(section.as_deref(), k.trim(), v.trim())?;
        }
        Ok(raw)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::config("--config", format!("cannot read {}: {e}", path.display())))?;
        Self::parse_str(&text)
    }

    /// Applies a `key=value` or `section.key=value` override.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let Some((k, v)) = assignment.split_once('=') else {
            return Err(Error::config(assignment, "override must look like key=value"));
        };
        let k = k.trim();
        match k.split_once('.') {
            Some((s, key)) => self.insert(Some(s), key, v.trim()),
            None => self.insert(None, k, v.trim()),
        }
    }

    fn insert(&mut self, section: Option<&str>, key: &str, value: &str) -> Result<()> {
        let Some(owner) = section_of(key) else {
            return Err(Error::config(key, "unknown key"));
        };
        if let Some(s) = section {
            if s != owner {
                return Err(Error::config(key, format!("belongs in section [{owner}], found in [{s}]")));
            }
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => parse_f64(key, v),
        }
    }

    fn opt_f64(&self, key: &str) -> Result<Option<f64>> {
        self.get(key).map(|v| parse_f64(key, v)).transpose()
    }

    fn int_or(&self, key: &str, default: i64) -> Result<i64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Error::config(key, format!("expected an integer, got `{v}`"))),
        }
    }

    fn bool_or(&self, key: &str, default: bool) -> Result<bool> {
        match self.get(key) {
            None => Ok(default),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(v) => Err(Error::config(key, format!("expected true or false, got `{v}`"))),
        }
    }

    fn vec_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => {
                let v = v.trim().trim_start_matches('(').trim_end_matches(')');
                v.split(',').map(|x| parse_f64(key, x.trim())).collect()
            }
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(Error::config(key, format!("expected a finite number, got `{v}`"))),
    }
}

fn positive(key: &str, x: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(x)
    } else {
        Err(Error::config(key, format!("must be positive, got {x}")))
    }
}

/// Fully validated experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub family: String,
    pub eps: Option<f64>,
    pub dim: usize,
    pub box_len: f64,
    pub n_max: i32,
    pub band: (f64, f64),
    pub s_min: i32,
    pub s_max: i32,
    pub include_scaling: bool,
    pub sparsity_tol: Option<f64>,
    pub propagation: Basis,
    pub integrator: Integrator,
    pub tab_range: (f64, f64),
    pub tab_points: usize,
    pub photon: GaussianPhotonSpec,
    pub mode: MultiIndex,
    pub atom: AtomParams,
    pub t_end: f64,
    pub dt_out: f64,
    pub times: Vec<f64>,
    pub fit_window: (f64, f64),
    pub write_coeffs: bool,
    pub write_matrix: bool,
}

fn vec3(key: &str, v: &[f64], dim: usize) -> Result<[f64; 3]> {
    if v.len() != dim {
        return Err(Error::config(key, format!("expected {dim} components, got {}", v.len())));
    }
    let mut out = [0.0; 3];
    out[..dim].copy_from_slice(v);
    Ok(out)
}

impl ExperimentConfig {
    /// Validates `raw` for subcommand `cmd`.
    pub fn from_raw(raw: &RawConfig, cmd: &str) -> Result<Self> {
        let allowed = Experiment::for_subcommand(cmd);
        if allowed.is_empty() {
            return Err(Error::config("subcommand", format!("unknown subcommand `{cmd}`")));
        }
        let experiment = match raw.get("type") {
            None => allowed[0],
            Some(t) => {
                let e = Experiment::parse(t).ok_or_else(|| Error::config("type", format!("unknown experiment `{t}`")))?;
                if !allowed.contains(&e) {
                    return Err(Error::config("type", format!("experiment `{t}` cannot run under `{cmd}`")));
                }
                e
            }
        };
        let family = raw.get("family").ok_or_else(|| Error::config("family", "missing; choose shannon, meyer or daubechies6"))?;
        let family = family.to_ascii_lowercase();
        let eps = raw.opt_f64("eps")?;
        let wavelet = build_wavelet(&family, eps)?;

        let one_d = experiment == Experiment::Gaussian1d;
        let dim = raw.int_or("dim", if one_d { 1 } else { 2 })?;
        if !(1..=3).contains(&dim) {
            return Err(Error::config("dim", format!("must be 1, 2 or 3, got {dim}")));
        }
        let dim = dim as usize;
        let dynamic = matches!(
            experiment,
            Experiment::Modes | Experiment::Gaussian1d | Experiment::Gaussian2d | Experiment::ModeEvolve | Experiment::AtomDecay
        );
        if dynamic && dim > 2 {
            return Err(Error::config("dim", "field sampling and dynamics run in 1D or 2D"));
        }
        if matches!(experiment, Experiment::Gaussian2d | Experiment::ModeEvolve | Experiment::AtomDecay) && dim != 2 {
            return Err(Error::config("dim", format!("{} runs in 2D", experiment.name())));
        }
        let box_len = positive("L", raw.f64_or("L", if one_d { 32.0 } else { 16.0 })?)?;
        let (ds_min, ds_max) = if one_d { (1, 3) } else { (0, 1) };
        let s_min = raw.int_or("s_min", ds_min)? as i32;
        let s_max = raw.int_or("s_max", ds_max)? as i32;
        if s_min > s_max {
            return Err(Error::config("s_min", format!("s_min = {s_min} exceeds s_max = {s_max}")));
        }
        if s_min < -20 || s_max > 20 {
            return Err(Error::config("s_max", "scales must lie in [-20, 20]"));
        }
        for s in [s_min, s_max] {
            let m = box_len * 2f64.powi(s);
            if (m - m.round()).abs() > 1e-9 || m.round() < 1.0 {
                return Err(Error::config("L", format!("2^{s}·L = {m} must be a positive integer")));
            }
        }
        let covered = wavelet.covered_band(s_min, s_max);
        let needs_basis = experiment != Experiment::Tabulate;
        let pick = |key: &str, given: Option<f64>, fallback: Option<f64>| -> Result<f64> {
            match (given, fallback) {
                (Some(x), _) | (None, Some(x)) => Ok(x),
                (None, None) if !needs_basis => Ok(0.0),
                (None, None) => Err(Error::config(key, format!("required for family {family}"))),
            }
        };
        let band_lo = pick("band_lo", raw.opt_f64("band_lo")?, covered.map(|b| b.0))?;
        let band_hi = pick("band_hi", raw.opt_f64("band_hi")?, covered.map(|b| b.1))?;
        let n_max = raw.int_or("n_max", (band_hi * box_len / (2.0 * PI)).floor() as i64)?;
        if needs_basis {
            if !(band_lo >= 0.0 && band_hi > band_lo) {
                return Err(Error::config(
                    "band_lo",
                    format!("need 0 <= band_lo < band_hi, got [{band_lo}, {band_hi}]"),
                ));
            }
            if !(1..=4096).contains(&n_max) {
                return Err(Error::config("n_max", format!("must be in 1..=4096, got {n_max}")));
            }
        }
        let sparsity_tol = raw.opt_f64("sparsity_tol")?;
        if let Some(t) = sparsity_tol {
            if t < 0.0 {
                return Err(Error::config("sparsity_tol", "must be non-negative"));
            }
        }

        let propagation = match raw.get("propagation").unwrap_or("wavelet") {
            "wavelet" => Basis::Wavelet,
            "plane-wave" => Basis::PlaneWave,
            v => return Err(Error::config("propagation", format!("expected wavelet or plane-wave, got `{v}`"))),
        };
        let integrator = match raw.get("integrator").unwrap_or("chebyshev") {
            "chebyshev" => Integrator::default(),
            "rk4" => {
                // 0.4/ω_max, ω_max at the lattice corner
                let omega_max = (dim as f64).sqrt() * n_max as f64 * 2.0 * PI / box_len;
                let dt = raw.f64_or("rk4_dt", 0.4 / omega_max)?;
                Integrator::Rk4 { dt: positive("rk4_dt", dt)? }
            }
            v => return Err(Error::config("integrator", format!("expected chebyshev or rk4, got `{v}`"))),
        };

        let (def_lo, def_hi) = match wavelet.real_support(crate::mra::Kind::Scaling) {
            (a, b) if wavelet.is_compact() => (a - 1.0, b + 1.0),
            _ => (-8.0, 8.0),
        };
        let tab_range = (raw.f64_or("t_min", def_lo)?, raw.f64_or("t_max", def_hi)?);
        if !(tab_range.0 < tab_range.1) {
            return Err(Error::config("t_min", "t_min must be below t_max"));
        }
        let tab_points = raw.int_or("points", 1601)?;
        if !(2..=10_000_000).contains(&tab_points) {
            return Err(Error::config("points", format!("must be in 2..=10^7, got {tab_points}")));
        }

        let (k0d, r0d, dk2d): (&[f64], &[f64], f64) =
            if one_d { (&[18.0], &[10.0], 10.0) } else { (&[7.0, 0.0], &[-4.0, 0.0], 0.25) };
        let photon = GaussianPhotonSpec {
            k0: vec3("k0", &raw.vec_or("k0", k0d)?, dim)?,
            r0: vec3("r0", &raw.vec_or("r0", r0d)?, dim)?,
            dk2: positive("dk2", raw.f64_or("dk2", dk2d)?)?,
        };

        let mode_s = raw.int_or("mode_s", 1)? as i32;
        let default_i = (1i64 << dim) - 1;
        let mode_i = raw.int_or("mode_i", default_i)?;
        if !(0..=default_i).contains(&mode_i) {
            return Err(Error::config("mode_i", format!("type must be in 0..={default_i}")));
        }
        if dynamic || experiment == Experiment::Coeffs {
            let has_scaling = raw.bool_or("include_scaling", false)?;
            if mode_i == 0 && !has_scaling {
                return Err(Error::config("mode_i", "type 0 needs include_scaling = true"));
            }
            if experiment == Experiment::Modes || experiment == Experiment::ModeEvolve {
                if mode_s < s_min || mode_s > s_max {
                    return Err(Error::config("mode_s", format!("scale {mode_s} outside [{s_min}, {s_max}]")));
                }
            }
        }
        let ml = raw.vec_or("mode_l", &vec![0.0; dim])?;
        if ml.len() != dim || ml.iter().any(|x| x.fract() != 0.0) {
            return Err(Error::config("mode_l", format!("expected {dim} integers")));
        }
        let mut l = [0i64; 3];
        for a in 0..dim {
            l[a] = ml[a] as i64;
        }
        let mode = MultiIndex::new(mode_s, l, mode_i as u8);

        let atom = AtomParams::new(
            raw.f64_or("omega_a", 10.0)?,
            raw.f64_or("D", 0.06)?,
            vec3("atom_position", &raw.vec_or("atom_position", &vec![0.0; dim])?, dim)?,
        )?;

        let (t_end_d, times_d): (f64, &[f64]) = match experiment {
            Experiment::AtomDecay => (14.0, &[]),
            Experiment::ModeEvolve => (7.5, &[0.0, 7.5]),
            Experiment::Gaussian1d => (2.0, &[0.0, 2.0]),
            _ => (6.0, &[0.0, 6.0]),
        };
        let t_end = raw.f64_or("t_end", t_end_d)?;
        if t_end < 0.0 {
            return Err(Error::config("t_end", "must be non-negative"));
        }
        let dt_out = positive("dt_out", raw.f64_or("dt_out", 0.25)?)?;
        let times = raw.vec_or("times", times_d)?;
        if times.iter().any(|&t| t < 0.0) || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("times", "output times must be non-negative and increasing"));
        }
        let (fl, fh) = crate::dynamics::default_window(atom.omega_a, t_end);
        let fit_window = (raw.f64_or("fit_lo", fl)?, raw.f64_or("fit_hi", fh)?);
        if experiment == Experiment::AtomDecay && !(fit_window.0 < fit_window.1 && fit_window.1 <= t_end) {
            return Err(Error::config("fit_lo", format!("fit window [{}, {}] must be nonempty and end by t_end", fit_window.0, fit_window.1)));
        }

        Ok(ExperimentConfig {
            experiment,
            family,
            eps,
            dim,
            box_len,
            n_max: n_max as i32,
            band: (band_lo, band_hi),
            s_min,
            s_max,
            include_scaling: raw.bool_or("include_scaling", false)?,
            sparsity_tol,
            propagation,
            integrator,
            tab_range,
            tab_points: tab_points as usize,
            photon,
            mode,
            atom,
            t_end,
            dt_out,
            times,
            fit_window,
            write_coeffs: raw.bool_or("write_coeffs", false)?,
            write_matrix: raw.bool_or("write_matrix", false)?,
        })
    }

    pub fn wavelet(&self) -> Result<Wavelet1D> {
        build_wavelet(&self.family, self.eps)
    }

    /// Effective configuration in the input format.
    pub fn resolved(&self) -> String {
        let f = |x: f64| format!("{x:?}");
        let v = |x: &[f64]| x.iter().map(|y| f(*y)).collect::<Vec<_>>().join(", ");
        let d = self.dim;
        let mut s = String::new();
        let _ = writeln!(s, "[experiment]\ntype = {}", self.experiment.name());
        let _ = writeln!(
            s,
            "propagation = {}",
            match self.propagation {
                Basis::Wavelet => "wavelet",
                Basis::PlaneWave => "plane-wave",
            }
        );
        match self.integrator {
            Integrator::Chebyshev { .. } => {
                let _ = writeln!(s, "integrator = chebyshev");
            }
            Integrator::Rk4 { dt } => {
                let _ = writeln!(s, "integrator = rk4\nrk4_dt = {}", f(dt));
            }
        }
        let _ = writeln!(s, "\n[basis]\nfamily = {}", self.family);
        if let Some(e) = self.eps {
            let _ = writeln!(s, "eps = {}", f(e));
        }
        if self.experiment == Experiment::Tabulate {
            let _ = writeln!(
                s,
                "\n[tabulate]\nt_min = {}\nt_max = {}\npoints = {}",
                f(self.tab_range.0),
                f(self.tab_range.1),
                self.tab_points
            );
            return s;
        }
        let _ = writeln!(
            s,
            "dim = {}\nL = {}\nn_max = {}\nband_lo = {}\nband_hi = {}\ns_min = {}\ns_max = {}\ninclude_scaling = {}",
            d,
            f(self.box_len),
            self.n_max,
            f(self.band.0),
            f(self.band.1),
            self.s_min,
            self.s_max,
            self.include_scaling
        );
        if let Some(t) = self.sparsity_tol {
            let _ = writeln!(s, "sparsity_tol = {}", f(t));
        }
        match self.experiment {
            Experiment::Tabulate | Experiment::Coeffs => {}
            Experiment::Gaussian1d | Experiment::Gaussian2d => {
                let _ = writeln!(
                    s,
                    "\n[photon]\nk0 = {}\nr0 = {}\ndk2 = {}",
                    v(&self.photon.k0[..d]),
                    v(&self.photon.r0[..d]),
                    f(self.photon.dk2)
                );
            }
            Experiment::Modes | Experiment::ModeEvolve => {
                let l: Vec<String> = self.mode.l[..d].iter().map(|x| x.to_string()).collect();
                let _ = writeln!(
                    s,
                    "\n[mode]\nmode_s = {}\nmode_l = {}\nmode_i = {}",
                    self.mode.s,
                    l.join(", "),
                    self.mode.i
                );
            }
            Experiment::AtomDecay => {
                let _ = writeln!(
                    s,
                    "\n[atom]\nomega_a = {}\nD = {}\natom_position = {}",
                    f(self.atom.omega_a),
                    f(self.atom.dipole),
                    v(&self.atom.position[..d])
                );
            }
        }
        match self.experiment {
            Experiment::AtomDecay => {
                let _ = writeln!(
                    s,
                    "\n[time]\nt_end = {}\ndt_out = {}\nfit_lo = {}\nfit_hi = {}",
                    f(self.t_end),
                    f(self.dt_out),
                    f(self.fit_window.0),
                    f(self.fit_window.1)
                );
            }
            Experiment::Gaussian1d | Experiment::Gaussian2d | Experiment::ModeEvolve => {
                let _ = writeln!(s, "\n[time]\ntimes = {}", v(&self.times));
            }
            _ => {}
        }
        let _ = writeln!(s, "\n[output]\nwrite_coeffs = {}\nwrite_matrix = {}", self.write_coeffs, self.write_matrix);
        s
    }
}

fn build_wavelet(family: &str, eps: Option<f64>) -> Result<Wavelet1D> {
    let w = match (family, eps) {
        ("meyer", Some(e)) => Wavelet1D::meyer_with_transition(e).map_err(|e| Error::config("eps", e.to_string()))?,
        (_, Some(_)) => return Err(Error::config("eps", "only the meyer family has a transition width")),
        _ => Wavelet1D::from_name(family).map_err(|e| Error::config("family", e.to_string()))?,
    };
    Ok(w)
}
