use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use primecert_cli::config::{Cli, RunConfig};
use primecert_cli::{exit, run};

const DEFAULT_DUMP: &str = "primecert-dump.json";

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { 0 });
        }
    };
    let cfg = RunConfig::from_cli(cli);
    let env = std::env::var("PRIMECERT_WORKERS").ok();
    let workers = match cfg.workers(env.as_deref()) {
        Ok(w) => w,
        Err(e) => return usage(&e),
    };
    // a second initialisation only fails if something already built the pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global();

    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => return usage(&e.0),
    };
    if let Some(dump) = &outcome.dump {
        let path = cfg
            .global
            .dump
            .clone()
            .unwrap_or_else(|| PathBuf::from(DEFAULT_DUMP));
        let body = serde_json::to_string_pretty(dump).expect("dump serializes");
        match std::fs::write(&path, body + "\n") {
            Ok(()) => eprintln!("primecert: replay dump written to {}", path.display()),
            Err(e) => eprintln!("primecert: could not write dump to {}: {e}", path.display()),
        }
    }
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(outcome.render(&cfg).as_bytes());
    let _ = stdout.flush();
    ExitCode::from(outcome.exit as u8)
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("primecert: {msg}");
    ExitCode::from(exit::USAGE as u8)
}
