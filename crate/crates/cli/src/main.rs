use std::process::ExitCode;

use clap::Parser;
use qortho_cli::{emit_report, run_suite, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("qortho: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("qortho: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit_report(&report, cli.format, cli.out.as_deref()) {
        eprintln!("qortho: cannot write report: {e}");
        return ExitCode::from(2);
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
