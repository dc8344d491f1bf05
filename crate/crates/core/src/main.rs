use clap::Parser;

fn main() {
    let cli = rayforge::cli::Cli::parse();
    std::process::exit(rayforge::cli::run(cli));
}
