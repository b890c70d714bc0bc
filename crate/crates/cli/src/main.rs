//! `qrel`: check, evaluate and verify .qrel workspaces.

mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Output};

fn main() -> ExitCode {
    // panics are caught per file and reported as errors
    std::panic::set_hook(Box::new(|_| {}));
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { report::EXIT_ERROR as u8 } else { 0 });
        }
    };
    let rep = commands::run(&cli.command);
    let mut err = std::io::stderr().lock();
    for d in &rep.diagnostics {
        let at = if d.file.is_empty() {
            String::new()
        } else if d.line == 0 {
            format!("{}: ", d.file)
        } else {
            format!("{}:{}:{}: ", d.file, d.line, d.col)
        };
        let _ = writeln!(err, "{at}{}: {}", d.severity, d.message);
    }
    let text = match cli.command.common().output {
        Output::Human => rep.human(),
        Output::Json => rep.json(),
    };
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    ExitCode::from(rep.exit_code as u8)
}
