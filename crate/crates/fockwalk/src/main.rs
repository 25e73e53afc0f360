use clap::Parser;
use fockwalk::cli;

fn main() {
    let parsed = cli::Cli::parse();
    std::process::exit(cli::run(parsed));
}
