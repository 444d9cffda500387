use std::process::ExitCode;

use billiard_knots::cli::{run, Cli, EXIT_SPEC};
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_SPEC } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let code = run(cli, &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(code as u8)
}
