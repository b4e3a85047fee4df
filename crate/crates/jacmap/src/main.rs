use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = jacmap::cli::run(std::env::args_os());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.status.clamp(0, 255) as u8)
}
