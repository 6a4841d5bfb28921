use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(szego_cli::run(std::env::args_os()))
}
