use clap::Parser;
use netsparse_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("netsparse: {e}");
        std::process::exit(e.exit_code());
    }
}
