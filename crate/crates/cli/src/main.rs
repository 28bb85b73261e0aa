use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::Parser;
use numsg_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli, || {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        Ok(text)
    })
    .and_then(|out| Ok((out.render(&cli)?, out.mismatch_in_regime)));
    match outcome {
        Ok((text, mismatch)) => {
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = io::stdout().write_all(text.as_bytes());
            if mismatch {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
