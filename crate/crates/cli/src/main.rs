mod artifact;
mod cli;
mod config;
mod error;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::error::{CliError, EXIT_VALIDATION};

fn main() -> ExitCode {
    let parsed = match cli::Cli::try_parse() {
        Ok(p) => p,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(parsed) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(parsed: cli::Cli) -> Result<(), CliError> {
    let out = parsed.global.out.clone();
    let save_config = parsed.global.save_config.clone();
    let config = parsed.resolve()?;
    if let Some(path) = &save_config {
        std::fs::write(path, config.to_toml())?;
    }
    let (artifact, pass) = run::execute(&config)?;
    let text = artifact.render(config.format)?;
    match &out {
        Some(path) => {
            std::fs::write(path, text)?;
            print!("{}", artifact.summary_text());
        }
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
        }
    }
    if !pass {
        let failed = artifact.data["checks"]
            .as_array()
            .map_or(0, |c| c.iter().filter(|c| c["pass"] == false).count());
        return Err(CliError::ToleranceMiss(failed));
    }
    Ok(())
}
