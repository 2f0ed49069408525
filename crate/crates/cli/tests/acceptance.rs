//! One PASS/FAIL line per acceptance criterion. `KAPPA_SLOW=1` extends the
//! Betti table to n = 12.

use std::process::ExitCode;

fn main() -> ExitCode {
    let slow = std::env::var("KAPPA_SLOW").is_ok_and(|v| v == "1");
    let outcomes = kappa_cli::verify::run_suite(slow, |o| println!("{}", o.line()));
    if outcomes.iter().all(|o| o.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
