mod args;
mod cache;
mod commands;
mod config;
mod error;
mod input;
mod validate;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::commands::Outcome;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

fn run(cli: &Cli) -> CliResult<Outcome> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure threads: {e}")))?;
    }
    let cfg = RunConfig::from_cli(cli)?;
    match &cli.command {
        Command::Sequences(dims) => commands::sequences(&cfg, *dims),
        Command::Vertices { dims, w } => commands::vertices(&cfg, *dims, w.as_deref()),
        Command::Facets { dims, w, verify } => commands::facets(&cfg, *dims, w.as_deref(), *verify),
        Command::Member {
            n,
            d,
            w,
            lambda,
            exact,
        } => commands::member(&cfg, *n, *d, w, lambda, *exact),
        Command::Spectrum { input, levels } => commands::spectrum_cmd(&cfg, input, *levels),
        Command::Energy { input, w } => commands::energy(&cfg, input, w.as_deref()),
        Command::Functional {
            input,
            w,
            fixed_spectrum,
        } => commands::functional(&cfg, input, w.as_deref(), *fixed_spectrum),
        Command::FigureS1 { n, d, w } => commands::figure_s1(&cfg, *n, *d, w),
        Command::Validate { trials } => validate::validate(&cfg, *trials),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
