use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = ibc_cli::Cli::parse();
    let stdin = io::stdin();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match ibc_cli::run(cli, &mut stdin.lock(), &mut out) {
        Ok(code) => code,
        Err(f) => {
            let _ = out.flush();
            eprintln!("ibc: {}", f.message);
            f.code
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
