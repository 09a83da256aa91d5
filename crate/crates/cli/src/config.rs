//! Run configuration: command-line flags layered over an optional flat TOML file.

use borel_pde::certificates::EX3_K;
use crate::error::CliError;
use borel_pde::{Ex3Table, Example, ProblemSpec};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ExampleName {
    Ex1,
    Ex2,
    Ex3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TableChoice {
    Consistent,
    Tabulated,
}

/// Every setting is optional here; unset values fall back to the config file, then to defaults.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Flat TOML file with the same keys as the long flags (`-` written as `_`).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub example: Option<ExampleName>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Which Example 3 coefficient table to use.
    #[arg(long = "ex3-table", value_enum)]
    pub ex3_table: Option<TableChoice>,
    /// Final time.
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t_final: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long = "time-steps")]
    pub time_steps: Option<usize>,
    /// Series truncation for Example 3.
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub k_trunc: Option<usize>,
    /// Picard tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
    /// Norm weight used by the solver.
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long = "p-max")]
    pub p_max: Option<f64>,
    #[arg(long)]
    pub grading: Option<f64>,
    /// Ball factor of the certificate.
    #[arg(long)]
    pub b: Option<f64>,
    /// Multiplier C of the certificate sums.
    #[arg(long = "C")]
    #[serde(rename = "C")]
    pub c: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "sweep-T", value_delimiter = ',')]
    #[serde(rename = "sweep_T")]
    pub sweep_t: Option<Vec<f64>>,
    #[arg(long = "sweep-nu", value_delimiter = ',')]
    pub sweep_nu: Option<Vec<f64>>,
}

impl Settings {
    fn or(self, other: Settings) -> Settings {
        Settings {
            config: self.config.or(other.config),
            example: self.example.or(other.example),
            gamma: self.gamma.or(other.gamma),
            delta: self.delta.or(other.delta),
            ex3_table: self.ex3_table.or(other.ex3_table),
            t_final: self.t_final.or(other.t_final),
            theta: self.theta.or(other.theta),
            phi: self.phi.or(other.phi),
            nodes: self.nodes.or(other.nodes),
            time_steps: self.time_steps.or(other.time_steps),
            k_trunc: self.k_trunc.or(other.k_trunc),
            tol: self.tol.or(other.tol),
            max_iter: self.max_iter.or(other.max_iter),
            nu: self.nu.or(other.nu),
            p_max: self.p_max.or(other.p_max),
            grading: self.grading.or(other.grading),
            b: self.b.or(other.b),
            c: self.c.or(other.c),
            out: self.out.or(other.out),
            format: self.format.or(other.format),
            seed: self.seed.or(other.seed),
            sweep_t: self.sweep_t.or(other.sweep_t),
            sweep_nu: self.sweep_nu.or(other.sweep_nu),
        }
    }
}

/// Fully resolved configuration.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub spec: ProblemSpec,
    #[serde(skip)]
    pub out: PathBuf,
    pub format: Format,
    pub seed: u64,
    pub b: f64,
    pub c: f64,
    pub ex3_k: f64,
    pub sweep_t: Vec<f64>,
    pub sweep_nu: Vec<f64>,
}

fn bad(name: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{name}: {reason}"))
}

fn read_file(path: &Path) -> Result<Settings, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| bad("config", format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| bad("config", format!("{}: {e}", path.display())))
}

impl RunConfig {
    pub fn resolve(flags: Settings) -> Result<RunConfig, CliError> {
        let merged = match &flags.config {
            Some(path) => {
                let file = read_file(path)?;
                flags.or(file)
            }
            None => flags,
        };
        let example = match merged.example.unwrap_or(ExampleName::Ex1) {
            ExampleName::Ex1 => Example::Ex1 { gamma: merged.gamma.unwrap_or(0.5) },
            ExampleName::Ex2 => Example::Ex2,
            ExampleName::Ex3 => Example::Ex3 {
                delta: merged.delta.unwrap_or(1.0),
                table: match merged.ex3_table.unwrap_or(TableChoice::Consistent) {
                    TableChoice::Consistent => Ex3Table::Consistent,
                    TableChoice::Tabulated => Ex3Table::Tabulated,
                },
            },
        };
        if let Example::Ex1 { gamma } = example {
            if !(gamma > 0.0 && gamma < 1.0) {
                return Err(bad("gamma", format!("must lie in (0, 1), got {gamma}")));
            }
        }
        if let Example::Ex3 { delta, .. } = example {
            if !(delta > 0.0) {
                return Err(bad("delta", format!("must be positive, got {delta}")));
            }
        }
        let mut spec = ProblemSpec::new(example, merged.t_final.unwrap_or(0.05));
        if let Some(nu) = merged.nu {
            spec.nu_run = nu;
            spec.p_max = 40.0 / nu;
        }
        spec.theta = merged.theta.unwrap_or(spec.theta);
        spec.phi = merged.phi.unwrap_or(spec.phi);
        spec.nodes = merged.nodes.unwrap_or(spec.nodes);
        spec.time_steps = merged.time_steps.unwrap_or(spec.time_steps);
        spec.k_trunc = merged.k_trunc.unwrap_or(spec.k_trunc);
        spec.picard_tol = merged.tol.unwrap_or(spec.picard_tol);
        spec.max_iter = merged.max_iter.unwrap_or(spec.max_iter);
        spec.p_max = merged.p_max.unwrap_or(spec.p_max);
        spec.grading = merged.grading.unwrap_or(spec.grading);
        spec.validate()?;
        if spec.nodes < 16 {
            return Err(bad("nodes", format!("need at least 16, got {}", spec.nodes)));
        }
        if !(spec.p_max > 0.0 && spec.grading >= 1.0) {
            return Err(bad("grid", "need p_max > 0 and grading >= 1"));
        }
        let b = merged.b.unwrap_or(2.0);
        if !(b > 1.0) {
            return Err(bad("b", format!("ball factor must exceed 1, got {b}")));
        }
        let c = merged.c.unwrap_or(1.0);
        if !(c > 0.0) {
            return Err(bad("C", format!("must be positive, got {c}")));
        }
        let sweep_t = merged.sweep_t.unwrap_or_else(|| vec![0.01, 0.02, 0.05, 0.1, 0.2]);
        let sweep_nu = merged.sweep_nu.unwrap_or_else(|| vec![2.0, 4.0, 8.0, 16.0, 32.0]);
        if sweep_t.is_empty() || sweep_nu.is_empty() {
            return Err(bad("sweep", "empty sweep range"));
        }
        if sweep_t.iter().any(|t| !(*t >= 0.0)) || sweep_nu.iter().any(|n| !(*n > 0.0)) {
            return Err(bad("sweep", "sweep T must be non-negative and sweep nu positive"));
        }
        Ok(RunConfig {
            spec,
            out: merged.out.unwrap_or_else(|| PathBuf::from("out")),
            format: merged.format.unwrap_or(Format::Csv),
            seed: merged.seed.unwrap_or(0),
            b,
            c,
            ex3_k: EX3_K,
            sweep_t,
            sweep_nu,
        })
    }
}
