use clap::Parser;

use ampthermal::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
