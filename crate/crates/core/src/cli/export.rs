use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::InequalityReport;

/// One output file, held in memory until the run has finished.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: Vec<u8>,
}

impl Artifact {
    pub fn json<T: Serialize + ?Sized>(name: impl Into<String>, value: &T) -> Result<Self> {
        let mut contents = serde_json::to_vec_pretty(value)?;
        contents.push(b'\n');
        Ok(Self { name: name.into(), contents })
    }

    pub fn text(name: impl Into<String>, text: String) -> Self {
        Self { name: name.into(), contents: text.into_bytes() }
    }

    /// CSV with a header row; every float uses the shortest round-trip form.
    pub fn csv(name: impl Into<String>, header: &[&str], rows: &[Vec<String>]) -> Result<Self> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        let contents = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(Self { name: name.into(), contents })
    }
}

/// Formats a float so that it parses back to the same value.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:?}")
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let file = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{file}.{}.tmp", std::process::id()));
    let res = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if res.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    Ok(res?)
}

/// Writes every artifact under `dir`, returning the written paths in order.
pub fn write_all(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    artifacts
        .iter()
        .map(|a| {
            let p = dir.join(&a.name);
            write_atomic(&p, &a.contents)?;
            Ok(p)
        })
        .collect()
}

/// One row per check name: count, pass rate and minimum slack.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub name: String,
    pub count: usize,
    pub pass_rate: f64,
    pub min_slack: f64,
}

pub fn summarize(reports: &[InequalityReport]) -> Vec<SummaryRow> {
    let mut by: BTreeMap<&str, (usize, usize, f64)> = BTreeMap::new();
    for r in reports {
        let e = by.entry(r.name.as_str()).or_insert((0, 0, f64::INFINITY));
        e.0 += 1;
        e.1 += usize::from(r.pass);
        e.2 = e.2.min(r.slack);
    }
    by.into_iter()
        .map(|(name, (count, pass, min_slack))| SummaryRow {
            name: name.to_string(),
            count,
            pass_rate: pass as f64 / count as f64,
            min_slack,
        })
        .collect()
}

pub fn summary_csv(name: &str, reports: &[InequalityReport]) -> Result<Artifact> {
    let rows: Vec<Vec<String>> = summarize(reports)
        .into_iter()
        .map(|r| vec![r.name, num(r.min_slack), num(r.pass_rate), r.count.to_string()])
        .collect();
    Artifact::csv(name, &["name", "slack_min", "pass_rate", "count"], &rows)
}

/// Reads report arrays from JSON files and summarizes them together.
pub fn report_merge(paths: &[PathBuf]) -> Result<Artifact> {
    let mut all = Vec::new();
    for p in paths {
        let text = std::fs::read_to_string(p)?;
        let reports: Vec<InequalityReport> = serde_json::from_str(&text)
            .map_err(|e| Error::SchemaMismatch { path: p.display().to_string(), reason: e.to_string() })?;
        all.extend(reports);
    }
    summary_csv("summary.csv", &all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(name: &str, slack: f64) -> InequalityReport {
        InequalityReport::new(name, 0.0, slack, 0.0, "w")
    }

    #[test]
    fn merge_adds_counts_and_takes_min() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.json");
        let b = dir.path().join("b.json");
        std::fs::write(&a, serde_json::to_string(&vec![rep("x", 1.0), rep("y", 2.0)]).unwrap()).unwrap();
        std::fs::write(&b, serde_json::to_string(&vec![rep("x", -0.5)]).unwrap()).unwrap();
        let out = String::from_utf8(report_merge(&[a, b]).unwrap().contents).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "name,slack_min,pass_rate,count");
        assert_eq!(lines[1], "x,-0.5,0.5,2");
        assert_eq!(lines[2], "y,2.0,1.0,1");
        let empty = String::from_utf8(report_merge(&[]).unwrap().contents).unwrap();
        assert_eq!(empty.trim_end(), "name,slack_min,pass_rate,count");
    }

    #[test]
    fn merge_rejects_other_schemas() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.json");
        std::fs::write(&p, r#"[{"name": "x"}]"#).unwrap();
        assert!(matches!(report_merge(&[p]), Err(Error::SchemaMismatch { .. })));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
