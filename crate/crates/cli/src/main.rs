use clap::error::ErrorKind;
use clap::Parser;

fn main() {
    match qpdkit_cli::Cli::try_parse() {
        Ok(cli) => std::process::exit(qpdkit_cli::run(cli)),
        Err(e) => {
            // Help and version displays are successful runs; everything else
            // is a usage error (exit code 1 by the output contract).
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprint!("{e}");
            std::process::exit(1);
        }
    }
}
