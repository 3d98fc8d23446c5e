use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use fitscape_cli::{execute, Cli};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Help and version requests are not errors.
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(&cli.command, &argv) {
        Ok(outcome) => {
            // A closed stdout (e.g. piped into `head`) must not turn a finished
            // run into a failure.
            let mut stdout = std::io::stdout().lock();
            for line in &outcome.report.lines {
                let _ = writeln!(stdout, "{line}");
            }
            let _ = writeln!(stdout, "wrote {}", outcome.out_dir.display());
            if let Some(v) = &outcome.report.violation {
                eprintln!("violation: {v}");
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
