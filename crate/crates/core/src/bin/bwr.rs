use std::process::ExitCode;

use bwr::cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bwr: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
