use std::process::ExitCode;

use clap::Parser;
use yamabe::cli::{exit_code, render_json, render_table, run, Cli, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    match run(&cli.command, echo) {
        Ok(doc) => {
            match cli.format {
                Format::Json => println!("{}", render_json(&doc)),
                Format::Table => print!("{}", render_table(&doc)),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
