use clap::Parser;

fn main() {
    let cli = niggli::cli::Cli::parse();
    std::process::exit(niggli::cli::run(cli));
}
