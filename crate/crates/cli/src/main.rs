//! `senti` command-line tool.
//!
//! Exit codes: 0 success, 2 usage, 3 data or schema, 4 training, 5 I/O.

mod args;
mod commands;

use clap::Parser;

fn main() {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_USAGE } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = commands::run(cli.command, &cli.global) {
        eprintln!("error: {e}");
        std::process::exit(e.code);
    }
}
