use std::io::Write;
use std::panic;

use fadel_cli::{run, ExitCode};

fn main() {
    let outcome = panic::catch_unwind(|| run(std::env::args_os(), &mut std::io::stdin().lock()));
    let code = match outcome {
        Ok(out) => {
            print!("{}", out.stdout);
            eprint!("{}", out.stderr);
            let _ = std::io::stdout().flush();
            out.code
        }
        Err(_) => ExitCode::Internal,
    };
    std::process::exit(code as i32);
}
