//! Command-line front end: `wavequant <tabulate|coeffs|modes|evolve|atom>`.
//!
//! Exit status 0 on success, 2 for configuration errors, 3 for numerical
//! consistency failures, 1 for I/O problems.

pub mod config;
pub mod run;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use config::{Experiment, ExperimentConfig, RawConfig};
pub use run::{build_basis, run, Artifacts};

use crate::error::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "wavequant", about = "Field quantization in a wavelet basis")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample φ and ψ of a wavelet family.
    Tabulate(Common),
    /// Build the plane-wave ↔ wavelet coefficient table.
    Coeffs(Common),
    /// Sample one E/B mode function and assemble the coupling matrix.
    Modes(Common),
    /// Free evolution of a Gaussian photon or a single wavelet mode.
    Evolve(Common),
    /// Spontaneous decay of a two-level atom.
    Atom(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Override a configuration value, `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Command {
    fn split(&self) -> (&'static str, &Common) {
        match self {
            Command::Tabulate(c) => ("tabulate", c),
            Command::Coeffs(c) => ("coeffs", c),
            Command::Modes(c) => ("modes", c),
            Command::Evolve(c) => ("evolve", c),
            Command::Atom(c) => ("atom", c),
        }
    }
}

/// Reads, overrides and validates the configuration for `cmd`.
pub fn load_config(cmd: &str, path: Option<&Path>, sets: &[String]) -> Result<ExperimentConfig> {
    let mut raw = match path {
        Some(p) => RawConfig::from_file(p)?,
        None => RawConfig::default(),
    };
    for s in sets {
        raw.set(s)?;
    }
    ExperimentConfig::from_raw(&raw, cmd)
}

/// Writes artifacts, `config.resolved` and `summary.txt` into `dir`. On any
/// failure the files written so far (and the directory, if created here)
/// are removed.
pub fn write_outputs(dir: &Path, cfg: &ExperimentConfig, art: &Artifacts) -> Result<()> {
    let created = !dir.exists();
    let mut written: Vec<PathBuf> = Vec::new();
    let result = (|| -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut files: Vec<(&str, &str)> = art.files.iter().map(|(n, c)| (n.as_str(), c.as_str())).collect();
        let resolved = cfg.resolved();
        let summary = art.summary_text();
        files.push(("config.resolved", &resolved));
        files.push(("summary.txt", &summary));
        for (name, contents) in files {
            let p = dir.join(name);
            fs::write(&p, contents)?;
            written.push(p);
        }
        Ok(())
    })();
    if result.is_err() {
        for p in &written {
            let _ = fs::remove_file(p);
        }
        if created {
            let _ = fs::remove_dir(dir);
        }
    }
    result.map_err(|e| e.in_stage("write"))
}

fn execute(cmd: &str, common: &Common) -> Result<ExperimentConfig> {
    let cfg = load_config(cmd, common.config.as_deref(), &common.set)?;
    let threads = match common.threads {
        Some(0) => return Err(Error::config("--threads", "must be at least 1")),
        Some(n) => n,
        None => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::config("--threads", e.to_string()))?;
    let art = pool.install(|| run(&cfg))?;
    write_outputs(&common.out, &cfg, &art)?;
    Ok(cfg)
}

/// Parses `args` (including the program name) and runs; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (cmd, common) = cli.cmd.split();
    match execute(cmd, common) {
        Ok(_) => {
            println!("wrote {}", common.out.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
