//! Command-line frontend: argument handling, orchestration and reports.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;

use balobs_core::dsl::{parse_model, registry, Model};
use balobs_core::Error;
use clap::error::ErrorKind;
use clap::Parser;

use config::{Cli, RunConfig, Source, Verb};
use report::{AlgebraReport, Body, Report, Status};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Input(#[from] Error),
    /// Failure while loading a model, with its source for span rendering.
    #[error("{label}:{err}")]
    Model { label: String, text: String, err: Error },
}

impl CliError {
    /// Message followed by the offending source line and a caret.
    pub fn render(&self) -> String {
        match self {
            CliError::Model { label, text, err } => {
                let mut out = match err {
                    Error::Parse { .. } | Error::Located { .. } => format!("error: {label}:{err}\n"),
                    _ => format!("error: {label}: {err}\n"),
                };
                if let Some((line, col)) = span(err) {
                    if let Some(src) = text.lines().nth(line.saturating_sub(1)) {
                        let gutter = line.to_string();
                        out.push_str(&format!("{gutter} | {src}\n"));
                        out.push_str(&format!(
                            "{} | {}^\n",
                            " ".repeat(gutter.len()),
                            " ".repeat(col.saturating_sub(1))
                        ));
                    }
                }
                out
            }
            other => format!("error: {other}\n"),
        }
    }
}

fn span(err: &Error) -> Option<(usize, usize)> {
    match err {
        Error::Parse { line, col, .. } | Error::Located { line, col, .. } => Some((*line, *col)),
        _ => None,
    }
}

fn innermost(err: &Error) -> &Error {
    match err {
        Error::Located { inner, .. } => innermost(inner),
        e => e,
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn load(source: &Source) -> Result<Model, CliError> {
    match source {
        Source::Registry(name) => Ok(registry(name)?),
        Source::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            parse_model(&text).map_err(|err| CliError::Model {
                label: path.display().to_string(),
                text,
                err,
            })
        }
    }
}

pub fn run_config(cfg: &RunConfig) -> Result<(Report, i32), CliError> {
    let model = match load(&cfg.source) {
        Ok(m) => m,
        Err(CliError::Model { label, err, .. })
            if cfg.verb == Verb::CheckAlgebra
                && matches!(innermost(&err), Error::InvalidAlgebra(_) | Error::Bidegree(_)) =>
        {
            let report = Report {
                model: label,
                convention: None,
                body: Body::CheckAlgebra(AlgebraReport {
                    status: Status::Fails,
                    dimension: 0,
                    characters: Vec::new(),
                    structure: Vec::new(),
                    violations: vec![innermost(&err).to_string()],
                }),
            };
            return Ok((report, 2));
        }
        Err(e) => return Err(e),
    };
    commands::execute(&commands::Ctx { cfg, model: &model })
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: 0, stdout: text, stderr: String::new() },
                _ => Outcome { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    let result = RunConfig::from_command(cli.command).and_then(|cfg| {
        let (report, code) = run_config(&cfg)?;
        Ok((report.render(cfg.format), code))
    });
    match result {
        Ok((stdout, code)) => Outcome { code, stdout, stderr: String::new() },
        Err(e) => Outcome { code: 1, stdout: String::new(), stderr: e.render() },
    }
}
