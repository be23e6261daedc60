use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use tracelab::output::{ErrorEnvelope, SCHEMA_VERSION};
use tracelab::{Cli, CliError};

fn fail(command: Option<&str>, err: &CliError) -> ExitCode {
    let envelope = ErrorEnvelope {
        schema_version: SCHEMA_VERSION,
        command,
        error: err.record(),
    };
    match serde_json::to_string(&envelope) {
        Ok(line) => eprintln!("{line}"),
        Err(_) => eprintln!("error: {err}"),
    }
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => return fail(None, &CliError::Usage(e.render().to_string().trim().to_string())),
    };
    let name = cli.command.name();
    match tracelab::run(&cli).and_then(|report| report.write(cli.format, cli.out.as_deref())) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(Some(name), &e),
    }
}
