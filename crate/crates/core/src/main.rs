use std::process::ExitCode;

fn main() -> ExitCode {
    kuq::cli::main_with_args(std::env::args_os())
}
