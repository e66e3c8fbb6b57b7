//! Flat `key = value` run configuration with strict key checking.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::integrate::max_frequency;
use crate::error::{LabError, Result};
use crate::medium::{max_abs_omega, omega, Depth, MediumParams};
use crate::resonance::kappa_grid;

/// Recognized keys, in canonical order.
pub const KEYS: &[&str] = &[
    "g",
    "kappa",
    "gamma",
    "depth",
    "box",
    "order",
    "eps",
    "horizon",
    "dt",
    "seed",
    "out",
    "grid",
    "degree",
    "tau",
    "tau_list",
    "threshold",
    "sample_every",
    "model",
];

/// Default `dt·max|Ω|` when no step is given.
pub const DEFAULT_STEP_PHASE: f64 = 0.2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub params: MediumParams,
    pub box_j: u32,
    /// Normal-form order `N`.
    pub order: u32,
    pub eps: Vec<f64>,
    /// Time horizon; defaults to `50/ω_1`.
    pub horizon: Option<f64>,
    /// Step; defaults to `0.2/max|Ω|`.
    pub dt: Option<f64>,
    pub seed: u64,
    pub out: PathBuf,
    /// κ grid `(a, b, step)` for scans.
    pub grid: Option<(f64, f64, f64)>,
    /// Certificate degree `M`.
    pub degree: u32,
    pub tau: f64,
    pub tau_list: Vec<f64>,
    /// ν floor for scans and certificates, small-divisor threshold for normal forms.
    pub threshold: Option<f64>,
    pub sample_every: usize,
    /// Directory holding a serialized model to load instead of building one.
    pub model: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: MediumParams::deep(1.0, 1.37, 1.0),
            box_j: 4,
            order: 1,
            eps: vec![1e-2],
            horizon: None,
            dt: None,
            seed: 1,
            out: PathBuf::from("out"),
            grid: None,
            degree: 3,
            tau: 6.0,
            tau_list: Vec::new(),
            threshold: None,
            sample_every: 1,
            model: None,
        }
    }
}

fn num(line: usize, key: &str, v: &str) -> Result<f64> {
    let x: f64 = v.parse().map_err(|_| LabError::Parse { line, msg: format!("`{key}`: `{v}` is not a number") })?;
    if !x.is_finite() {
        return Err(LabError::Parse { line, msg: format!("`{key}` must be finite") });
    }
    Ok(x)
}

fn uint(line: usize, key: &str, v: &str) -> Result<u64> {
    v.parse().map_err(|_| LabError::Parse { line, msg: format!("`{key}`: `{v}` is not a nonnegative integer") })
}

fn list(line: usize, key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| num(line, key, s.trim())).collect()
}

/// Parses `A:B:STEP`.
pub fn parse_grid(v: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = v.split(':').collect();
    if parts.len() != 3 {
        return Err(LabError::Invalid(format!("grid `{v}` is not A:B:STEP")));
    }
    let p = |s: &str| -> Result<f64> {
        s.trim().parse::<f64>().map_err(|_| LabError::Invalid(format!("grid entry `{s}` is not a number")))
    };
    let g = (p(parts[0])?, p(parts[1])?, p(parts[2])?);
    kappa_grid(g.0, g.1, g.2)?;
    Ok(g)
}

/// Parses a comma-separated list of numbers.
pub fn parse_list(v: &str) -> Result<Vec<f64>> {
    list(0, "list", v)
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Sets one key from its text value.
    pub fn set(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        let v = value.trim();
        match key {
            "g" => self.params.g = num(line, key, v)?,
            "kappa" => self.params.kappa = num(line, key, v)?,
            "gamma" => self.params.gamma = num(line, key, v)?,
            "depth" => self.params.depth = v.parse::<Depth>().map_err(|e| LabError::Parse { line, msg: e.to_string() })?,
            "box" => self.box_j = uint(line, key, v)? as u32,
            "order" => self.order = uint(line, key, v)? as u32,
            "eps" => self.eps = list(line, key, v)?,
            "horizon" => self.horizon = Some(num(line, key, v)?),
            "dt" => self.dt = Some(num(line, key, v)?),
            "seed" => self.seed = uint(line, key, v)?,
            "out" => self.out = PathBuf::from(v),
            "grid" => self.grid = Some(parse_grid(v).map_err(|e| LabError::Parse { line, msg: e.to_string() })?),
            "degree" => self.degree = uint(line, key, v)? as u32,
            "tau" => self.tau = num(line, key, v)?,
            "tau_list" => self.tau_list = list(line, key, v)?,
            "threshold" => self.threshold = Some(num(line, key, v)?),
            "sample_every" => self.sample_every = uint(line, key, v)? as usize,
            "model" => self.model = Some(PathBuf::from(v)),
            _ => return Err(LabError::Parse { line, msg: format!("unknown key `{key}`") }),
        }
        Ok(())
    }

    /// Reads `key = value` lines over the defaults; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen: Vec<String> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (k, v) = body
                .split_once('=')
                .ok_or_else(|| LabError::Parse { line, msg: format!("expected `key = value`, got `{body}`") })?;
            let k = k.trim();
            if seen.iter().any(|s| s == k) {
                return Err(LabError::Parse { line, msg: format!("duplicate key `{k}`") });
            }
            cfg.set(k, v, line)?;
            seen.push(k.to_string());
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.box_j < 2 {
            return Err(LabError::Invalid(format!("box J = {} below 2", self.box_j)));
        }
        if self.eps.is_empty() || self.eps.iter().any(|e| !(*e > 0.0)) {
            return Err(LabError::Invalid("amplitudes must be positive".into()));
        }
        if let Some(t) = self.horizon {
            if !(t > 0.0) {
                return Err(LabError::Invalid(format!("horizon must be positive, got {t}")));
            }
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) {
                return Err(LabError::Invalid(format!("dt must be positive, got {dt}")));
            }
        }
        if self.degree == 0 {
            return Err(LabError::Invalid("certificate degree must be positive".into()));
        }
        if !(self.tau >= 0.0) || self.tau_list.iter().any(|t| !(*t >= 0.0)) {
            return Err(LabError::Invalid("τ must be nonnegative".into()));
        }
        if self.sample_every == 0 {
            return Err(LabError::Invalid("sample_every must be positive".into()));
        }
        Ok(())
    }

    /// `T`, defaulting to `50/ω_1`.
    pub fn horizon(&self) -> f64 {
        self.horizon.unwrap_or_else(|| 50.0 / omega(&self.params, 1).expect("mode 1"))
    }

    /// `dt`, defaulting to `0.2/max|Ω|` over the box.
    pub fn dt(&self) -> f64 {
        self.dt.unwrap_or_else(|| DEFAULT_STEP_PHASE / max_abs_omega(&self.params, self.box_j))
    }

    /// Same as [`RunConfig::dt`] but for an explicit Hamiltonian.
    pub fn dt_for(&self, h: &crate::polyham::PolyHamiltonian) -> f64 {
        self.dt.unwrap_or_else(|| DEFAULT_STEP_PHASE / max_frequency(h))
    }

    pub fn kappa_grid(&self) -> Result<Vec<f64>> {
        let (a, b, s) = self.grid.ok_or_else(|| LabError::Invalid("no κ grid given".into()))?;
        kappa_grid(a, b, s)
    }

    /// Canonical text with every key that has a value, in [`KEYS`] order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let p = &self.params;
        let _ = writeln!(s, "g = {}", p.g);
        let _ = writeln!(s, "kappa = {}", p.kappa);
        let _ = writeln!(s, "gamma = {}", p.gamma);
        let _ = writeln!(s, "depth = {}", p.depth);
        let _ = writeln!(s, "box = {}", self.box_j);
        let _ = writeln!(s, "order = {}", self.order);
        let _ = writeln!(s, "eps = {}", fmt_list(&self.eps));
        if let Some(t) = self.horizon {
            let _ = writeln!(s, "horizon = {t}");
        }
        if let Some(dt) = self.dt {
            let _ = writeln!(s, "dt = {dt}");
        }
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "out = {}", self.out.display());
        if let Some((a, b, st)) = self.grid {
            let _ = writeln!(s, "grid = {a}:{b}:{st}");
        }
        let _ = writeln!(s, "degree = {}", self.degree);
        let _ = writeln!(s, "tau = {}", self.tau);
        if !self.tau_list.is_empty() {
            let _ = writeln!(s, "tau_list = {}", fmt_list(&self.tau_list));
        }
        if let Some(t) = self.threshold {
            let _ = writeln!(s, "threshold = {t}");
        }
        let _ = writeln!(s, "sample_every = {}", self.sample_every);
        if let Some(m) = &self.model {
            let _ = writeln!(s, "model = {}", m.display());
        }
        s
    }

    /// SHA-256 of the canonical text without the output directory, in hex.
    pub fn digest(&self) -> String {
        let text: String = self.to_text().lines().filter(|l| !l.starts_with("out =")).map(|l| format!("{l}\n")).collect();
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}
