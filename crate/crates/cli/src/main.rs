use clap::Parser;
use locman_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("locman: {e}");
        std::process::exit(e.exit_code());
    }
}
