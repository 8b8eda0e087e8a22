use std::io::{self, Write};
use std::process::ExitCode;

use arctan_bounds_cli::{main_with, Faults};

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = main_with(std::env::args_os(), &Faults::default(), &mut out, &mut io::stderr());
    if out.flush().is_err() {
        return ExitCode::from(arctan_bounds_cli::EXIT_USAGE);
    }
    ExitCode::from(code)
}
