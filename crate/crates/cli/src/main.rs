mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use hookparity::Precision;

use args::{Cli, Format};
use commands::{RunConfig, EXIT_BAD_ARGS};
use output::{render, render_error, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_BAD_ARGS,
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let format = cli.format;
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
        {
            return fail(
                &CliError {
                    kind: "invalid_input",
                    code: EXIT_BAD_ARGS,
                    message: e.to_string(),
                },
                format,
            );
        }
    }
    let cfg = RunConfig {
        precision: Precision::digits(cli.precision),
        cutoff: cli.cutoff.map(|d| d as usize),
        enum_cap: cli.enum_cap as usize,
    };
    match commands::run(&cfg, &cli.command) {
        Ok(outcome) => {
            print!("{}", render(&outcome.report, format));
            let _ = std::io::stdout().flush();
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => fail(&e, format),
    }
}

fn fail(err: &CliError, format: Format) -> ExitCode {
    let text = render_error(err, format);
    if format == Format::Json {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
    ExitCode::from(err.code as u8)
}
