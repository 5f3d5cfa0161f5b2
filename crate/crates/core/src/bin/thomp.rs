use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use thomp::cli::{exit_code, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(o.stdout.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(o.code as u8)
        }
        Err(e) => {
            eprintln!("thomp: error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
