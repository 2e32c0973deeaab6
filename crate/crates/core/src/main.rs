use clap::Parser;

use powerlaw_lrt::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if let Err(e) = run(cli, &mut out) {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
}
