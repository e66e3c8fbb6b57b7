//! Deterministic CSV and JSON artifacts.
//!
//! Numbers are written in Rust's shortest round-trip form, so equal inputs give equal bytes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::drift::DriftReport;
use super::integrate::TrajectoryLog;
use crate::coords::modes;
use crate::error::Result;
use crate::resonance::Certificate;

/// Header of the scan and certificate CSV.
pub const SCAN_HEADER: &str = "kappa,nu,tau,worst_index,worst_divisor";

/// Header of the drift CSV.
pub const DRIFT_HEADER: &str = "eps,coordinates,drift_eps,drift_half,ratio,expected,passed";

/// `t,energy,momentum,J_1..J_J,re_z_k,im_z_k` for `k = -J..J`, `k ≠ 0`.
pub fn trajectory_header(box_j: u32) -> String {
    let mut h = String::from("t,energy,momentum");
    for n in 1..=box_j {
        let _ = write!(h, ",J_{n}");
    }
    for k in modes(box_j) {
        let _ = write!(h, ",re_z_{k},im_z_{k}");
    }
    h
}

pub fn trajectory_csv(log: &TrajectoryLog) -> String {
    let mut s = trajectory_header(log.box_j);
    s.push('\n');
    for i in 0..log.len() {
        let _ = write!(s, "{},{},{}", log.times[i], log.energy[i], log.momentum[i]);
        for j in &log.superactions[i] {
            let _ = write!(s, ",{j}");
        }
        for v in log.states[i].amplitudes() {
            let _ = write!(s, ",{},{}", v.re, v.im);
        }
        s.push('\n');
    }
    s
}

/// One row per certificate; the index is written in its text form.
pub fn scan_csv(rows: &[Certificate]) -> String {
    let mut s = format!("{SCAN_HEADER}\n");
    for c in rows {
        let _ = writeln!(s, "{},{},{},{},{}", c.kappa, c.nu, c.tau, c.worst.index, c.worst.divisor);
    }
    s
}

pub fn drift_csv(reports: &[DriftReport]) -> String {
    let mut s = format!("{DRIFT_HEADER}\n");
    for r in reports {
        for (name, p) in [("original", &r.pre), ("normal_form", &r.post)] {
            let _ = writeln!(
                s,
                "{},{name},{},{},{},{},{}",
                r.eps[0], p.drift[0], p.drift[1], p.ratio, p.expected, p.passed
            );
        }
    }
    s
}

/// JSON manifest written next to every CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_digest: String,
    pub config: RunConfig,
    pub files: Vec<String>,
    pub result: serde_json::Value,
}

impl Manifest {
    pub fn new(command: &str, cfg: &RunConfig, files: &[&str], result: serde_json::Value) -> Self {
        Manifest {
            tool: "wwlab".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config_digest: cfg.digest(),
            config: cfg.clone(),
            files: files.iter().map(|f| f.to_string()).collect(),
            result,
        }
    }
}

/// Writes `name` under `dir`, creating the directory.
pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_file(dir, name, &text)
}
