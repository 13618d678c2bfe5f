use std::path::PathBuf;
use std::str::FromStr;

use balobs_core::metrics::Convention;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "balobs", version, about = "Obstructions to balanced metrics along deformations of invariant complex structures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verb {
    CheckAlgebra,
    CheckBalanced,
    McResidual,
    Obstruction,
    Conditions,
    Verdict,
    VerifyTheorem,
    Cohomology,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check d^2 = 0 and integrability of the structure equations.
    CheckAlgebra(Opts),
    /// Check whether the model metric is balanced.
    CheckBalanced(Opts),
    /// Maurer-Cartan residual of each deformation curve.
    McResidual(Opts),
    /// First-order obstruction form and its conditions.
    Obstruction(Opts),
    /// Vanishing conditions extracted from the obstruction class.
    Conditions(Opts),
    /// Evaluate the conditions at a numeric sample.
    Verdict(Opts),
    /// Finite-difference check of the first-order formula.
    VerifyTheorem(Opts),
    /// Invariant Dolbeault cohomology dimensions per sector.
    Cohomology(Opts),
}

impl Command {
    pub fn split(self) -> (Verb, Opts) {
        match self {
            Command::CheckAlgebra(o) => (Verb::CheckAlgebra, o),
            Command::CheckBalanced(o) => (Verb::CheckBalanced, o),
            Command::McResidual(o) => (Verb::McResidual, o),
            Command::Obstruction(o) => (Verb::Obstruction, o),
            Command::Conditions(o) => (Verb::Conditions, o),
            Command::Verdict(o) => (Verb::Verdict, o),
            Command::VerifyTheorem(o) => (Verb::VerifyTheorem, o),
            Command::Cohomology(o) => (Verb::Cohomology, o),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConventionArg {
    PaperLiteral,
    HermitianStandard,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::PaperLiteral => Convention::PaperLiteral,
            ConventionArg::HermitianStandard => Convention::HermitianStandard,
        }
    }
}

#[derive(Args, Debug, Clone)]
#[command(group(ArgGroup::new("source").required(true).args(["registry", "model"])))]
pub struct Opts {
    /// Built-in model: iwasawa, nakamura-i or nakamura-ii.
    #[arg(long)]
    pub registry: Option<String>,
    /// Path to a `.balg` model file.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// How the metric matrix becomes a fundamental form.
    #[arg(long, value_enum)]
    pub convention: Option<ConventionArg>,
    /// Numeric values, e.g. `a1=0,a2=1+0.5i`.
    #[arg(long, value_delimiter = ',')]
    pub assign: Vec<String>,
    /// `identity` or a file of `name=value` entries for the metric variables.
    #[arg(long)]
    pub metric_sample: Option<String>,
    /// Finite-difference steps.
    #[arg(long, value_delimiter = ',')]
    pub fd_steps: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Registry(String),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricSample {
    Identity,
    File(PathBuf),
}

pub const DEFAULT_FD_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// Validated invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub verb: Verb,
    pub source: Source,
    pub convention: Option<Convention>,
    pub assignments: Vec<(String, Complex64)>,
    pub metric_sample: Option<MetricSample>,
    pub fd_steps: Vec<f64>,
    pub format: Format,
}

impl RunConfig {
    pub fn from_command(cmd: Command) -> Result<Self, CliError> {
        let (verb, o) = cmd.split();
        let source = match (o.registry, o.model) {
            (Some(r), None) => Source::Registry(r),
            (None, Some(p)) => Source::File(p),
            _ => return Err(CliError::Usage("exactly one of --registry and --model is required".into())),
        };
        let assignments = o
            .assign
            .iter()
            .filter(|s| !s.trim().is_empty())
            .map(|s| parse_pair(s))
            .collect::<Result<Vec<_>, _>>()?;
        let metric_sample = o.metric_sample.map(|s| {
            if s == "identity" {
                MetricSample::Identity
            } else {
                MetricSample::File(PathBuf::from(s))
            }
        });
        let fd_steps = if o.fd_steps.is_empty() {
            DEFAULT_FD_STEPS.to_vec()
        } else {
            o.fd_steps
        };
        if fd_steps.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(CliError::Usage("--fd-steps must be positive".into()));
        }
        Ok(RunConfig {
            verb,
            source,
            convention: o.convention.map(Into::into),
            assignments,
            metric_sample,
            fd_steps,
            format: o.format,
        })
    }
}

/// `name=value` with a complex value such as `1`, `-0.5i` or `1+2i`.
pub fn parse_pair(s: &str) -> Result<(String, Complex64), CliError> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("expected name=value, got `{s}`")))?;
    let k = k.trim();
    if k.is_empty() {
        return Err(CliError::Usage(format!("missing name in `{s}`")));
    }
    let v: String = v.chars().filter(|c| !c.is_whitespace()).collect();
    let z = Complex64::from_str(&v)
        .map_err(|_| CliError::Usage(format!("invalid complex number `{v}` for `{k}`")))?;
    Ok((k.to_string(), z))
}

/// Entries of a metric sample file: `name=value` separated by commas or
/// newlines, `#` comments.
pub fn parse_sample_file(text: &str) -> Result<Vec<(String, Complex64)>, CliError> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(','))
        .filter(|s| !s.trim().is_empty())
        .map(parse_pair)
        .collect()
}
