use bt_orbits_cli::{main_with, Cli};
use clap::Parser;

fn main() {
    let cli = Cli::parse();
    std::process::exit(main_with(&cli));
}
