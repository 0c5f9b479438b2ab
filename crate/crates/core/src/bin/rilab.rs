use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rilab::cli::{self, RunConfig};
use rilab::error::Error;

#[derive(Parser)]
#[command(name = "rilab", version, about = "Run inequality audits on rotationally symmetric Ricci flows")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the suites of a config and write reports.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Restrict to these suites (repeatable); overrides the config.
        #[arg(long = "suite")]
        suites: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Summarize report JSON files into one CSV on stdout.
    Merge { files: Vec<PathBuf> },
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("rilab: {e}");
    ExitCode::from(cli::error_status(e) as u8)
}

fn run(config: &Path, suites: Vec<String>, out: Option<PathBuf>, seed: Option<u64>) -> Result<ExitCode, Error> {
    let mut cfg = RunConfig::load(config)?;
    if !suites.is_empty() {
        cfg.suites = suites;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let base = config.parent().unwrap_or(Path::new("."));
    let out = out.unwrap_or_else(|| base.join(&cfg.out));
    cfg.validate()?;
    let (outcome, written) = cli::run(&cfg, base, &out)?;
    let failures = outcome.failures();
    let total = outcome.all_reports().count();
    println!("{} reports, {} failed, {} files in {}", total, failures.len(), written.len(), out.display());
    for r in &failures {
        eprintln!("FAIL {} [{}] lhs={} rhs={} slack={}", r.name, r.witness, r.lhs, r.rhs, r.slack);
    }
    Ok(ExitCode::from(cli::status(&outcome) as u8))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let res = match args.cmd {
        Cmd::Run { config, suites, out, seed } => run(&config, suites, out, seed),
        Cmd::Merge { files } => cli::report_merge(&files).map(|a| {
            print!("{}", String::from_utf8_lossy(&a.contents));
            ExitCode::SUCCESS
        }),
    };
    res.unwrap_or_else(|e| fail(&e))
}
