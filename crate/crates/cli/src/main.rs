use clap::Parser;

use isar_cli::args::Cli;
use isar_cli::commands::run_command;

fn main() {
    // clap exits with code 2 on usage errors.
    let cli = Cli::parse();
    if let Err(e) = run_command(&cli.command) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
