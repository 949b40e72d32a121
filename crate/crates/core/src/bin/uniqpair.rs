use clap::Parser;
use uniqpair::cli::{run, RunConfig};

fn main() {
    std::process::exit(run(&RunConfig::parse()));
}
