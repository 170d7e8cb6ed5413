use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = padzeta::cli::run(std::env::args_os());
    if outcome.code == padzeta::cli::EXIT_OK || outcome.code == padzeta::cli::EXIT_FAIL {
        println!("{}", outcome.output);
    } else {
        eprintln!("{}", outcome.output);
    }
    ExitCode::from(outcome.code as u8)
}
