//! Command-line front end: single points, sweeps, truncation studies,
//! optimization and oracle verification with deterministic CSV/JSON output.

pub mod cli;
pub mod commands;
pub mod error;
pub mod grid;
pub mod params;
pub mod recipes;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use bounce_core::ModelKind;
use clap::Parser;

use crate::cli::{Cli, Command, Format, GlobalArgs, OptimizeTarget};
use crate::error::CliError;
use crate::grid::SweepGrid;
use crate::params::Params;
use crate::verify::VerifyConfig;

/// Result of a command: text to emit and whether the run counts as failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub failed: bool,
}

fn table(grid: &SweepGrid, format: Format) -> String {
    match format {
        Format::Csv => grid.to_csv(),
        Format::Json => grid.to_json(),
    }
}

/// Executes a parsed command line without touching stdout or files.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let g: &GlobalArgs = &cli.global;
    let model = g.model_kind();
    let format = g.format();
    let ok = |text: String| Ok(Output { text, failed: false });
    match &cli.command {
        Command::Point { params, side } => ok(commands::point(model, &params.to_params()?, *side)?.render(format)),
        Command::Scan {
            axes,
            observables,
            params,
        } => ok(table(&commands::scan(model, axes, observables, &params.to_params()?)?, format)),
        Command::Truncate { bounces, axis, params } => {
            ok(table(&commands::truncate(model, bounces, axis, &params.to_params()?)?, format))
        }
        Command::Optimize { target } => match target {
            OptimizeTarget::Popt => ok(commands::optimize_popt().render(format)),
            OptimizeTarget::Report { params } => {
                ok(commands::optimize_report(model, &params.to_params()?)?.render(format))
            }
        },
        Command::Verify { samples, tolerance } => {
            // Without an explicit --model both models are verified.
            let models = match g.model {
                Some(_) => vec![model],
                None => ModelKind::ALL.to_vec(),
            };
            let summary = verify::run(&VerifyConfig {
                models,
                samples: *samples,
                seed: g.seed,
                tolerance: *tolerance,
            });
            Ok(Output {
                text: summary.render(),
                failed: !summary.passed(),
            })
        }
        Command::Recipe { name: None } => ok(recipes::listing()),
        Command::Recipe { name: Some(name) } => {
            let recipe = recipes::find(name)
                .ok_or_else(|| CliError::Usage(format!("unknown recipe '{name}'")))?;
            let mut argv: Vec<OsString> = vec!["bounce".into()];
            argv.extend(recipe.args.iter().map(OsString::from));
            let mut inner = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
            inner.global.format = format;
            inner.global.json = false;
            execute(&inner)
        }
    }
}

/// Parses `args`, runs the command and writes its output to `--out` or
/// `stdout`. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = execute(&cli).and_then(|out| {
        match &cli.global.out {
            Some(path) => std::fs::write(path, &out.text)?,
            None => stdout.write_all(out.text.as_bytes())?,
        }
        if out.failed {
            // Echo the failure summary where it is seen even with --out.
            if cli.global.out.is_some() {
                let _ = stderr.write_all(out.text.as_bytes());
            }
            Err(CliError::VerificationFailed)
        } else {
            Ok(())
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Parameters from a list of `name=value` pairs, for programmatic use.
pub fn params_from_pairs(pairs: &[(&str, f64)]) -> Result<Params, CliError> {
    let mut p = Params::default();
    for &(name, v) in pairs {
        p.set(params::Coord::parse(name)?, v)?;
    }
    Ok(p)
}
