use clap::Parser;
use decremental::harness::{run_cli, Cli};

fn main() {
    env_logger::init();
    let cli = Cli::parse();
    match run_cli(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
