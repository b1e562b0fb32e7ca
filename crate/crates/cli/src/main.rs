use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use cospan_cli::{run, Cli};

fn main() -> ExitCode {
    let outcome = run(Cli::parse());
    let _ = writeln!(std::io::stdout().lock(), "{}", outcome.render());
    if let Some(message) = outcome.document.get("error").and_then(|e| e.get("message")) {
        let _ = writeln!(std::io::stderr().lock(), "error: {}", message.as_str().unwrap_or_default());
    }
    ExitCode::from(outcome.code)
}
