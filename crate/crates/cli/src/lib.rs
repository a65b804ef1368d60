//! Command-line front end for the weak-value toolkit.
//!
//! Every run is described by a flat set of `key = value` parameters, read from
//! an optional config file and overridden by flags. Results go out as CSV plus
//! a JSON summary that echoes the resolved configuration.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

use crate::config::{read_config_file, RunConfig};
use crate::error::{CliError, EXIT_VALIDATION};

pub use crate::commands::{execute, Outcome};

#[derive(Debug, Parser)]
#[command(
    name = "weakval",
    version,
    about = "Weak values, weak measurements and two-photon interference",
    after_help = "Commands: threebox, weakvalue, interferometer, readout-sweep, fit, hom-sweep.\n\
                  Angles are in degrees. Grids are start:stop:step."
)]
struct Args {
    /// Experiment to run; may also come from the config file.
    command: Option<String>,
    /// `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Weak value of the path-A projector (comma list for hom-sweep).
    #[arg(long = "p_A", allow_hyphen_values = true)]
    p_a: Option<String>,
    /// Weak value for photon 1 in hom-sweep.
    #[arg(long = "p_A1", allow_hyphen_values = true)]
    p_a1: Option<String>,
    /// Measurement strength, or a G grid for readout-sweep.
    #[arg(long = "G", allow_hyphen_values = true)]
    g: Option<String>,
    /// Grid of G (readout-sweep) or of HWP5 angles in degrees (hom-sweep).
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// HWP5 step in degrees when no grid is given.
    #[arg(long, allow_hyphen_values = true)]
    step: Option<String>,
    /// Photons per G value; switches readout-sweep to counts.
    #[arg(long, allow_hyphen_values = true)]
    trials: Option<String>,
    /// Base RNG seed (default 0); the i-th G value uses seed + i.
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    /// Per-trial noise click probability for failed postselections.
    #[arg(long, allow_hyphen_values = true)]
    background: Option<String>,
    /// Also simulate p = 1 and p = 0 reference runs and fit calibrated readouts.
    #[arg(long)]
    calibrate: bool,
    /// Accidental-to-signal ratio r.
    #[arg(long = "background_ratio", allow_hyphen_values = true)]
    background_ratio: Option<String>,
    /// Accidentals constant; r = kappa / postselection probability.
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    /// HWP4 angle in degrees.
    #[arg(long, allow_hyphen_values = true)]
    hwp4: Option<String>,
    /// CSV to fit.
    #[arg(long)]
    input: Option<String>,
    /// CSV destination; the summary goes next to it as `<output>.json`.
    #[arg(long)]
    output: Option<String>,
}

impl Args {
    fn flags(self) -> (Option<PathBuf>, BTreeMap<String, String>) {
        let pairs = [
            ("command", self.command),
            ("p_A", self.p_a),
            ("p_A1", self.p_a1),
            ("G", self.g),
            ("grid", self.grid),
            ("step", self.step),
            ("trials", self.trials),
            ("seed", self.seed),
            ("background", self.background),
            ("calibrate", self.calibrate.then(|| "true".to_string())),
            ("background_ratio", self.background_ratio),
            ("kappa", self.kappa),
            ("hwp4", self.hwp4),
            ("input", self.input),
            ("output", self.output),
        ];
        let map = pairs
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
            .collect();
        (self.config, map)
    }
}

/// Resolves the configuration from arguments (including the program name).
pub fn resolve<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(args).map_err(|e| CliError::Validation(e.to_string()))?;
    let (config, flags) = args.flags();
    let file = match config {
        Some(path) => read_config_file(&path)?,
        None => BTreeMap::new(),
    };
    RunConfig::merge(file, flags)
}

fn run_config(cfg: &RunConfig) -> Result<(), CliError> {
    let out = cfg.output();
    if let Some(path) = &out {
        output::check_writable(path)?;
    }
    let Outcome { table, summary } = execute(cfg)?;
    output::emit(&table, &summary, out.as_deref())
}

/// Runs the program and returns its exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    match Args::try_parse_from(&args) {
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let _ = e.print();
            return EXIT_VALIDATION;
        }
        Ok(_) => {}
    }
    match resolve(&args).and_then(|cfg| run_config(&cfg)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("weakval: {e}");
            e.exit_code()
        }
    }
}
