use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(homothety::cli::run())
}
