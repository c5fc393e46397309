use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let exec = hk::run(std::env::args());
    print!("{}", exec.stdout);
    eprint!("{}", exec.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(exec.code as u8)
}
