use std::process::ExitCode;

fn main() -> ExitCode {
    disambig::cli::run()
}
