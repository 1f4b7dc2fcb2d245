use clap::Parser;
use hqc_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("hqc: {e}");
        std::process::exit(e.exit_code());
    }
}
