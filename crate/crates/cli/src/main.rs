use std::process::ExitCode;

use clap::Parser;
use quenchscape::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.resolve().and_then(|cfg| run(cli.command, &cfg));
    match result {
        Ok(manifest) => {
            for f in &manifest.files {
                println!("{}  {}", f.sha256, f.path);
            }
            eprintln!(
                "{} finished in {:.1} s on {} workers",
                manifest.subcommand, manifest.wall_clock_seconds, manifest.workers
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
