use clap::Parser;
use hydra_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => print!("{text}"),
        Err(e) => {
            eprintln!("hydra {}: {e}", cli.command.name());
            std::process::exit(e.exit_code());
        }
    }
}
