use std::process::ExitCode;

use boxcast::{run, Args, RunConfig};
use clap::Parser;

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(err) if !err.use_stderr() => {
            // --help and --version.
            let _ = err.print();
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            let rendered = err.to_string();
            let first = rendered.lines().next().unwrap_or("usage error");
            eprintln!("{first}");
            return ExitCode::from(2);
        }
    };
    let result = RunConfig::try_from(args).and_then(|config| {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        run(&config, &mut lock)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
