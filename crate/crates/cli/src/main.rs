//! `dsdl`: validate, inspect and summarize DSDL dataset descriptions.
//!
//! Exit status: 0 clean, 1 findings that fail the run, 2 usage or IO failure.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{CommandFactory, Parser};

use commands::{Output, Status};
use config::{Cli, CliConfig, Command, Format};

const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = CliConfig::from_process_env(&cli.global);

    let mut stdout = String::new();
    if cli.global.show_config {
        stdout += &match cfg.format {
            Format::Text => cfg.render_text(),
            Format::Json => serde_json::to_string_pretty(&cfg).expect("config serializes") + "\n",
        };
    }

    let result = match &cli.command {
        None if cli.global.show_config => Ok(Output {
            text: String::new(),
            status: Status::Ok,
        }),
        None => {
            eprint!("{}", Cli::command().render_help());
            return ExitCode::from(EXIT_USAGE);
        }
        Some(Command::Validate { file }) => commands::validate(file, &cfg),
        Some(Command::Inspect { file }) => commands::inspect(file, &cfg),
        Some(Command::Summary { file }) => commands::summary(file, &cfg),
        Some(Command::ResolveLoc { locators }) => Ok(commands::resolve_loc(locators, &cfg)),
    };

    match result {
        Ok(out) => {
            stdout += &out.text;
            let mut lock = std::io::stdout().lock();
            if lock
                .write_all(stdout.as_bytes())
                .and_then(|_| lock.flush())
                .is_err()
            {
                return ExitCode::from(EXIT_USAGE);
            }
            match out.status {
                Status::Ok => ExitCode::SUCCESS,
                Status::Failed => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("dsdl: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
