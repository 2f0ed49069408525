use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(kappa_cli::run(std::env::args_os()))
}
