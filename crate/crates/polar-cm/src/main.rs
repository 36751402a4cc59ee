use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(polar_cm::cli::run() as u8)
}
