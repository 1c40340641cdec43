use clap::error::ErrorKind;
use clap::Parser;
use fmkernel_cli::app::{run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            // clap's own code 2 would read as an expected failure
            let _ = e.print();
            std::process::exit(64);
        }
    };
    std::process::exit(run(&cli));
}
