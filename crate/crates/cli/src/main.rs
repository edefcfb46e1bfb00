use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = bcs_gap_cli::run(std::env::args_os(), &mut out, &mut io::stderr());
    let code = if out.flush().is_err() && code == 0 {
        1
    } else {
        code
    };
    ExitCode::from(code as u8)
}
