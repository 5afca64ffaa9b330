use std::process::ExitCode;

fn main() -> ExitCode {
    fockshift::cli::main()
}
