use std::process::ExitCode;

use clap::Parser;
use rindler_gate::cli::{self, Cli};

fn main() -> ExitCode {
    let args = Cli::parse();
    let threads = std::env::var(cli::THREADS_ENV).ok();
    let result = cli::configure_threads(threads.as_deref()).and_then(|()| cli::run(args));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
