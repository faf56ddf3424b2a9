use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    // Unlocked handles: suite progress is written from worker threads.
    let code = qrlab::cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    ExitCode::from(code as u8)
}
