use std::io::Write;
use std::process::ExitCode;

use slmod::cli::parse_config;
use slmod::commands::execute;
use slmod::report::{emit, ReportDocument};

fn main() -> ExitCode {
    if let Some(w) = std::env::var("SLMOD_WORKERS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    let config = match parse_config(std::env::args_os()) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let results = match execute(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let doc = ReportDocument::new(config.clone(), results);
    let bytes = match emit(&doc, config.format) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &config.output {
        Some(path) => std::fs::write(path, &bytes),
        None => std::io::stdout().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(doc.exit_code() as u8)
}
