use std::process::ExitCode;

fn main() -> ExitCode {
    prodres::cli::run(std::env::args_os())
}
