use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = p1dyn::cli::run(std::env::args_os());
    let mut stdout = std::io::stdout();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    ExitCode::from(code as u8)
}
