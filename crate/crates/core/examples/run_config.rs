//! Runs a config file in process and prints the per-check summary.
use std::path::Path;

use rilab::cli::{execute, summarize, RunConfig};

fn main() -> rilab::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/dumbbell.toml").into());
    let path = Path::new(&path);
    let cfg = RunConfig::load(path)?;
    let outcome = execute(&cfg, path.parent().unwrap_or(Path::new(".")))?;
    let all: Vec<_> = outcome.all_reports().cloned().collect();
    for row in summarize(&all) {
        println!("{:<40} {:>6} {:>6.3} {:+.3e}", row.name, row.count, row.pass_rate, row.min_slack);
    }
    println!("{} failures", outcome.failures().len());
    Ok(())
}
