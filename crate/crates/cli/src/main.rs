use std::process::ExitCode;

fn main() -> ExitCode {
    cpfluct::main_with_args(std::env::args_os())
}
