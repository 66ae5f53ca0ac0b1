use clap::Parser;

mod args;
mod run;

fn main() {
    // clap prints usage and exits with code 2 on parse errors.
    let config = args::RunConfig::parse();
    std::process::exit(run::run(config));
}
