use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qcurv_cli::commands::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(report.render(cli.format).as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("qcurv: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
