use clap::Parser;
use dynsub_harness::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("dynsub: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
