use clap::Parser;
use idealgas_ctp_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            for file in &outcome.files {
                println!("{}", file.display());
            }
            if outcome.defects > 0 {
                eprintln!(
                    "warning: {} nodes failed; see the defects list in the metadata",
                    outcome.defects
                );
            }
            std::process::exit(outcome.exit_code());
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
