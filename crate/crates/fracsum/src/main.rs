use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use fracsum::cli::{self, RunConfig};

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    let result = run(&cfg);
    if let Err(e) = &result {
        eprintln!("fracsum: {e}");
    }
    ExitCode::from(cli::exit_code(&result) as u8)
}

fn run(cfg: &RunConfig) -> fracsum::Result<bool> {
    let stdout = io::stdout();
    let stderr = io::stderr();
    match &cfg.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            // with a data file, verdicts go to stdout
            let pass = cli::run_to_writers(cfg, &mut file, &mut stdout.lock())?;
            file.flush()?;
            Ok(pass)
        }
        None => cli::run_to_writers(cfg, &mut stdout.lock(), &mut stderr.lock()),
    }
}
