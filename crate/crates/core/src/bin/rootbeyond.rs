use std::process::ExitCode;

fn main() -> ExitCode {
    rootbeyond::cli::run(std::env::args_os())
}
