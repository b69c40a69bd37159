use std::io;
use std::process::ExitCode;

use clap::Parser;
use iitt_cli::{run, CliConfig};

fn main() -> ExitCode {
    let config = CliConfig::parse();
    let code = run(
        config,
        &mut io::stdin().lock(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
