//! Config-driven runs of the verification suites and report export.

mod config;
mod export;
mod run;
mod svg;

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub use config::{FlowSpec, ManifoldSpec, RunConfig, SUITES};
pub use export::{num, report_merge, summarize, summary_csv, write_all, write_atomic, Artifact, SummaryRow};
pub use run::{apply_tolerances, execute, sample_indices, RunOutcome, SAMPLED_TIMES, SIGMA_GRID};
pub use svg::{line_plot, Axes, Series};

/// Exit status of a finished run: 0 when every asserted check holds, 1 otherwise.
pub fn status(outcome: &RunOutcome) -> i32 {
    i32::from(!outcome.failures().is_empty())
}

/// Exit status for an error: 2 for configuration problems, 1 for the rest.
pub fn error_status(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::SchemaMismatch { .. } => 2,
        _ => 1,
    }
}

/// Executes the suites and then writes every artifact under `out`.
/// Config-relative paths resolve against `base`.
pub fn run(cfg: &RunConfig, base: &Path, out: &Path) -> Result<(RunOutcome, Vec<PathBuf>)> {
    let outcome = execute(cfg, base)?;
    let written = write_all(out, &outcome.artifacts)?;
    Ok((outcome, written))
}
