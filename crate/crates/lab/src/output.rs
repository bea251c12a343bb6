//! JSON report assembly and atomic file output.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::config::ExperimentConfig;
use crate::runner::{execute, Finding, RunOptions, Sidecar, Status, TaskOutput};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const REPORT_FILE: &str = "report.json";
pub const DEFAULT_OUTPUT_DIR: &str = "cesaro-lab-output";

/// Run metadata that changes between invocations.
#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub version: &'static str,
    pub started_unix_seconds: u64,
    pub wall_clock_seconds: f64,
}

/// Deterministic part of the report.
#[derive(Debug, Clone, Serialize)]
pub struct Body {
    pub version: &'static str,
    pub task: String,
    pub config: BTreeMap<String, String>,
    pub arithmetic: &'static str,
    pub status: &'static str,
    pub findings: Vec<Finding>,
    pub data: BTreeMap<String, Value>,
    pub tolerances: BTreeMap<String, f64>,
    pub sidecars: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub header: Header,
    pub body: Body,
}

/// Report plus the tables that accompany it.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub report: Report,
    pub sidecars: Vec<Sidecar>,
}

impl RunResult {
    /// 0 for pass or neutral, 2 for fail verdicts, 1 for execution errors.
    pub fn exit_code(&self) -> u8 {
        match self.report.body.status {
            "error" => 1,
            "fail" => 2,
            _ => 0,
        }
    }

    pub fn body_json(&self) -> String {
        to_json(&self.report.body)
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report values serialize");
    s.push('\n');
    s
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Inconclusive => "inconclusive",
        Status::Neutral => "neutral",
    }
}

/// Executes the config and assembles the report; numeric failures are embedded.
pub fn run(cfg: &ExperimentConfig, opts: RunOptions) -> RunResult {
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let clock = Instant::now();
    let task = cfg.task();
    let (output, error) = match execute(cfg, opts) {
        Ok(out) => (out, None),
        Err(e) => (TaskOutput { arithmetic: if opts.exact { "exact" } else { "f64" }, ..TaskOutput::default() }, Some(e.to_string())),
    };
    let status = if error.is_some() { "error" } else { status_name(output.status()) };
    let sidecars = output.sidecars;
    let body = Body {
        version: VERSION,
        task: task.to_string(),
        config: cfg.echo().clone(),
        arithmetic: output.arithmetic,
        status,
        findings: output.findings,
        data: output.data,
        tolerances: output.tolerances,
        sidecars: sidecars.iter().map(|s| s.name.clone()).collect(),
        error,
    };
    let header = Header { version: VERSION, started_unix_seconds: started, wall_clock_seconds: clock.elapsed().as_secs_f64() };
    RunResult { report: Report { header, body }, sidecars }
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Writes the report and its sidecars into `dir`; returns the written paths.
pub fn write_outputs(dir: &Path, result: &RunResult) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for s in &result.sidecars {
        let path = dir.join(&s.name);
        write_atomic(&path, &s.contents)?;
        written.push(path);
    }
    let path = dir.join(REPORT_FILE);
    write_atomic(&path, &to_json(&result.report))?;
    written.push(path);
    Ok(written)
}
