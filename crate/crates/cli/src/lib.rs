//! Command-line front end: configuration loading, subcommands and artifacts.

pub mod config;
pub mod output;
pub mod verify;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use sha2::{Digest, Sha256};
use vpconfine::characteristics::{trace, Potential, TraceOptions};
use vpconfine::equilibrium::{monotone_solve, scale_solution, sweep_lambda, Direction, EquilibriumSolution};
use vpconfine::model::Geometry;
use vpconfine::Error;

use config::{ConfigError, LoadedConfig};
use output::{atomic_write, csv, field_csv, json_string};

#[derive(Debug, Parser)]
#[command(name = "vpconfine", version, about = "Confined stationary Vlasov–Poisson equilibria")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (overrides `output_dir` in the configuration).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the maximal equilibrium and write phi.csv, rho_<species>.csv, summary.json.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Family member to solve instead of the species list.
        #[arg(long)]
        lambda: Option<f64>,
        /// Start from the lower barrier instead of the upper one.
        #[arg(long)]
        minimal: bool,
    },
    /// Charge-ratio family sweep, written to sweep.csv.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Family parameters as `start:stop:step`.
        #[arg(long, default_value = "0:1:0.1")]
        lambdas: String,
    },
    /// Field-scaling check, written to scale_report.json.
    Scale {
        #[command(flatten)]
        common: Common,
        /// Field scaling factor.
        #[arg(long)]
        lambda: f64,
    },
    /// Orbit integration with first-integral drift, written to trace.csv.
    Trace {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x0: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        v0: Vec<f64>,
        #[arg(long, default_value_t = 10.0)]
        tmax: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Species label (defaults to the first species).
        #[arg(long)]
        species: Option<String>,
        /// Trace with zero potential instead of the solved one.
        #[arg(long)]
        analytic: bool,
        /// Write every n-th step.
        #[arg(long, default_value_t = 10)]
        every: usize,
    },
    /// Run the verification battery and write verify.json; exit 1 on any failure.
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Numerical { error: Error, history: Option<PathBuf> },
    Io(std::io::Error),
    VerifyFailed(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical { .. } => 3,
            CliError::Io(_) | CliError::VerifyFailed(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "configuration error: {e}"),
            CliError::Numerical { error, history: Some(p) } => {
                write!(f, "numerical error: {error}; residual history in {}", p.display())
            }
            CliError::Numerical { error, history: None } => write!(f, "numerical error: {error}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::VerifyFailed(items) => write!(f, "verification failed: {}", items.join(", ")),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

/// Maps a solver error to the CLI error, saving any residual history in `out`.
fn numerical(error: Error, out: &Path) -> CliError {
    match error {
        Error::Config(message) => CliError::Config(ConfigError { line: None, message }),
        Error::NonConvergence { ref history, .. } => {
            let path = out.join("residual_history.csv");
            let rows = history.iter().enumerate().map(|(k, (d, r))| [(k + 1) as f64, *d, *r]);
            let written = std::fs::create_dir_all(out)
                .and_then(|_| atomic_write(&path, csv(&["step", "delta", "residual"], rows).as_bytes()))
                .is_ok();
            CliError::Numerical { error, history: written.then_some(path) }
        }
        error => CliError::Numerical { error, history: None },
    }
}

/// Parses `argv` (including the program name), runs the subcommand and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn out_dir(common: &Common, cfg: &LoadedConfig) -> PathBuf {
    common
        .out
        .clone()
        .or_else(|| cfg.raw.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

pub fn execute(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Solve { common, lambda, minimal } => {
            let cfg = config::load(&common.config)?;
            let out = out_dir(common, &cfg);
            let problem = cfg.configuration(*lambda)?;
            let direction = if *minimal { Direction::Minimal } else { Direction::Maximal };
            let sol = monotone_solve(&problem, direction).map_err(|e| numerical(e, &out))?;
            write_solution(&out, &cfg, &sol)
        }
        Command::Sweep { common, lambdas } => {
            let cfg = config::load(&common.config)?;
            let out = out_dir(common, &cfg);
            let template = cfg
                .family
                .as_ref()
                .ok_or_else(|| ConfigError { line: None, message: "sweep needs a family block".into() })?;
            let values = parse_range(lambdas)?;
            let rows = sweep_lambda(template, &values).map_err(|e| numerical(e, &out))?;
            let body = csv(
                &["lambda", "q_plus", "q_minus", "phi_sup"],
                rows.iter().map(|r| [r.lambda, r.q_plus, r.q_minus, r.phi_sup]),
            );
            atomic_write(&out.join("sweep.csv"), body.as_bytes())?;
            Ok(())
        }
        Command::Scale { common, lambda } => {
            let cfg = config::load(&common.config)?;
            let out = out_dir(common, &cfg);
            let problem = cfg.configuration(None)?;
            let base = monotone_solve(&problem, Direction::Maximal).map_err(|e| numerical(e, &out))?;
            let (_, _, report) = scale_solution(&base, *lambda).map_err(|e| numerical(e, &out))?;
            let value = json!({
                "config_hash": config_hash(&cfg),
                "lambda": report.lambda,
                "phi_max_deviation": report.phi_deviation,
                "phi_scaled_norm": report.phi_scaled_norm,
                "phi_relative_deviation": report.relative_phi_deviation(),
                "charges": report.charges.iter().map(|(l, q, ql, err)| json!({
                    "label": l, "Q": q, "Q_scaled": ql, "ratio": if *q == 0.0 { f64::NAN } else { ql / q }, "ratio_error": err
                })).collect::<Vec<_>>(),
                "spatial_radius": report.spatial_radii.iter().map(|(l, s, ss)| json!({
                    "label": l, "S0": s, "S0_scaled": ss, "unchanged": (s - ss).abs() <= 1e-14 * s.abs().max(1.0)
                })).collect::<Vec<_>>(),
            });
            atomic_write(&out.join("scale_report.json"), json_string(&value).as_bytes())?;
            Ok(())
        }
        Command::Trace { common, x0, v0, tmax, dt, species, analytic, every } => {
            let cfg = config::load(&common.config)?;
            let out = out_dir(common, &cfg);
            let problem = cfg.configuration(None)?;
            let index = match species {
                Some(label) => problem.species.iter().position(|s| &s.label == label).ok_or_else(|| {
                    ConfigError { line: None, message: format!("no species labelled '{label}'") }
                })?,
                None => 0,
            };
            let solved;
            let potential = if *analytic {
                Potential::Zero
            } else {
                solved = monotone_solve(&problem, Direction::Maximal).map_err(|e| numerical(e, &out))?;
                Potential::Grid(&solved.potential)
            };
            let opts = TraceOptions { t_max: *tmax, dt: *dt, record_every: *every };
            let res = trace(&problem.geometry, &problem.field, &problem.species[index], potential, x0, v0, opts)
                .map_err(|e| numerical(e, &out))?;
            let names = state_names(&problem.geometry);
            let mut header: Vec<&str> = vec!["t"];
            header.extend(names.iter());
            header.extend(["E", "I", "E_drift", "I_drift"]);
            let rows = res.samples.iter().map(|s| {
                let mut row = vec![s.t];
                row.extend(&s.state);
                row.push(s.energy);
                row.push(s.integral);
                row.push((s.energy - res.energy0).abs() / (res.energy0.abs() + 1.0));
                row.push((s.integral - res.integral0).abs() / (res.integral0.abs() + 1.0));
                row
            });
            atomic_write(&out.join("trace.csv"), csv(&header, rows).as_bytes())?;
            eprintln!(
                "energy drift {:e}, integral drift {:e}, exit {:?}",
                res.energy_drift, res.integral_drift, res.exit
            );
            Ok(())
        }
        Command::Verify { common } => {
            let cfg = config::load(&common.config)?;
            let out = out_dir(common, &cfg);
            let (value, failures) = verify::run(&cfg).map_err(|e| numerical(e, &out))?;
            atomic_write(&out.join("verify.json"), json_string(&value).as_bytes())?;
            if failures.is_empty() {
                Ok(())
            } else {
                Err(CliError::VerifyFailed(failures))
            }
        }
    }
}

fn state_names(geom: &Geometry) -> Vec<&'static str> {
    match geom {
        Geometry::ToroidalCrossSection { .. } => vec!["r", "z", "w1", "w2", "w3"],
        Geometry::RadialDisc { .. } => vec!["x1", "x2", "v1", "v2"],
        Geometry::MirrorCylinder { .. } => vec!["x1", "x2", "x3", "v1", "v2", "v3"],
    }
}

/// `start:stop:step` into the inclusive list of values.
pub fn parse_range(spec: &str) -> Result<Vec<f64>, ConfigError> {
    let bad = || ConfigError { line: None, message: format!("expected start:stop:step, got '{spec}'") };
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let [a, b, h] = parts[..] else { return Err(bad()) };
    if !(h > 0.0 && b >= a) {
        return Err(bad());
    }
    let n = ((b - a) / h + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| if k == n && ((a + n as f64 * h) - b).abs() < 1e-9 { b } else { a + k as f64 * h }).collect())
}

pub fn config_hash(cfg: &LoadedConfig) -> String {
    format!("{:x}", Sha256::digest(cfg.text.as_bytes()))
}

fn write_solution(out: &Path, cfg: &LoadedConfig, sol: &EquilibriumSolution) -> Result<(), CliError> {
    atomic_write(&out.join("phi.csv"), field_csv(&sol.grid, &sol.potential, "phi").as_bytes())?;
    for (sp, rho) in sol.config.species.iter().zip(&sol.densities) {
        atomic_write(&out.join(format!("rho_{}.csv", sp.label)), field_csv(&sol.grid, rho, "rho").as_bytes())?;
    }
    atomic_write(&out.join("summary.json"), json_string(&summary(cfg, sol)).as_bytes())?;
    Ok(())
}

pub fn summary(cfg: &LoadedConfig, sol: &EquilibriumSolution) -> serde_json::Value {
    let l = sol.grid.lattice;
    let charge_kind = match sol.config.geometry {
        Geometry::RadialDisc { .. } => "cross_sectional_per_unit_length",
        _ => "total",
    };
    json!({
        "config_hash": config_hash(cfg),
        "converged": sol.converged,
        "direction": match sol.direction { Direction::Maximal => "maximal", Direction::Minimal => "minimal" },
        "iterations": sol.iterations(),
        "final_residual": sol.final_residual(),
        "k_shift": sol.k_shift,
        "phi_sup": sol.potential.max_abs(),
        "barriers": { "c_low": sol.barriers.c_low, "c_high": sol.barriers.c_high },
        "grid": { "nr": l.nr, "nz": l.nz, "hr": l.hr, "hz": l.hz, "r_min": l.r_min, "z_min": l.z_min },
        "charge_kind": charge_kind,
        "species": sol.species.iter().map(|s| json!({
            "label": s.label, "Q": s.charge, "R0": s.r0, "S0": s.s0, "measured_support": s.measured_support
        })).collect::<Vec<_>>(),
        "residual_history": sol.log.iter().map(|r| json!([r.delta, r.residual])).collect::<Vec<_>>(),
    })
}
