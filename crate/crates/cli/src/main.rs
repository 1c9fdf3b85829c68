use std::process::ExitCode;

use clap::Parser;

use certkit_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (status, text) = run(&cli);
    if status == 2 {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    ExitCode::from(status)
}
