//! Subcommand bodies. Each writes its CSV or text output plus a JSON manifest.

use std::path::Path;

use serde_json::json;
use wwlab_core::birkhoff::{normal_form as birkhoff_nf, NormalFormOptions};
use wwlab_core::darboux::{corrector, exp_symplectic};
use wwlab_core::lab::{
    drift_csv, drift_experiment, initial_direction, scan_csv, trajectory_csv, write_file, write_json, DriftOptions,
    Manifest, MidpointIntegrator, RunConfig,
};
use wwlab_core::resonance::{self, Certificate, ScanPlan};
use wwlab_core::wwmodel::{ModelManifest, TruncatedModel};
use wwlab_core::{random, LabError, Result};

fn finish(cfg: &RunConfig, command: &str, files: &[&str], result: serde_json::Value) -> Result<()> {
    let name = format!("{}.json", files[0].rsplit_once('.').map_or(files[0], |(stem, _)| stem));
    write_json(&cfg.out, &name, &Manifest::new(command, cfg, files, result))?;
    for f in files {
        println!("{}", cfg.out.join(f).display());
    }
    Ok(())
}

fn taus(cfg: &RunConfig) -> Vec<f64> {
    let mut t = if cfg.tau_list.is_empty() { vec![cfg.tau] } else { cfg.tau_list.clone() };
    t.sort_by(f64::total_cmp);
    t.dedup();
    t
}

/// Smallest listed `τ` whose `ν` clears the floor; the largest when none does.
fn pick(certs: Vec<Certificate>, floor: f64) -> Certificate {
    let fallback = certs.last().cloned().expect("tau list is nonempty");
    certs.into_iter().find(|c| c.nu > floor).unwrap_or(fallback)
}

pub fn scan(cfg: &RunConfig) -> Result<()> {
    let grid = cfg.kappa_grid()?;
    let plan = ScanPlan::new(cfg.degree, cfg.box_j);
    if plan.is_empty() {
        return Err(LabError::Invalid("no non-SAP momentum-zero index in range".into()));
    }
    let floor = cfg.threshold.unwrap_or(0.0);
    let taus = taus(cfg);
    let mut rows = Vec::with_capacity(grid.len());
    for &k in &grid {
        let p = cfg.params.with_kappa(k);
        p.validate()?;
        let certs = taus.iter().map(|&t| plan.certify(&p, t).expect("plan is nonempty")).collect();
        rows.push(pick(certs, floor));
    }
    write_file(&cfg.out, "scan.csv", &scan_csv(&rows))?;
    let resonant: Vec<f64> = rows.iter().filter(|c| c.is_resonant()).map(|c| c.kappa).collect();
    let below = rows.iter().filter(|c| c.nu <= floor).count();
    let min_nu = rows.iter().map(|c| c.nu).fold(f64::INFINITY, f64::min);
    finish(
        cfg,
        "scan",
        &["scan.csv"],
        json!({
            "points": rows.len(),
            "indices": plan.len(),
            "taus": taus,
            "floor": floor,
            "min_nu": min_nu,
            "below_floor": below,
            "resonant_kappas": resonant,
        }),
    )
}

pub fn certify(cfg: &RunConfig) -> Result<()> {
    let floor = cfg.threshold.unwrap_or(0.0);
    let certs = taus(cfg)
        .into_iter()
        .map(|t| resonance::certify(&cfg.params, cfg.degree, cfg.box_j, t))
        .collect::<Result<Vec<_>>>()?;
    let cert = pick(certs, floor);
    write_file(&cfg.out, "certificate.csv", &scan_csv(std::slice::from_ref(&cert)))?;
    finish(cfg, "certify", &["certificate.csv"], serde_json::to_value(&cert)?)?;
    println!("nu = {:e} at tau = {}, worst index {}", cert.nu, cert.tau, cert.worst.index);
    if cert.nu <= floor {
        return Err(LabError::Resonance { index: cert.worst.index.to_string(), value: cert.worst.divisor });
    }
    Ok(())
}

fn load_model(dir: &Path) -> Result<TruncatedModel> {
    let text = std::fs::read_to_string(dir.join("model.txt"))?;
    let manifest: Manifest = serde_json::from_str(&std::fs::read_to_string(dir.join("model.json"))?)?;
    let mm: ModelManifest = serde_json::from_value(manifest.result)?;
    TruncatedModel::from_parts(&text, &mm)
}

/// The configured model: loaded when `model` is set, built otherwise.
fn model(cfg: &RunConfig) -> Result<TruncatedModel> {
    match &cfg.model {
        Some(dir) => {
            let m = load_model(dir)?;
            if m.params != cfg.params || m.box_j != cfg.box_j {
                return Err(LabError::Invalid(format!(
                    "model in {} does not match the configured parameters or box",
                    dir.display()
                )));
            }
            Ok(m)
        }
        None => TruncatedModel::build(&cfg.params, cfg.box_j),
    }
}

pub fn build_model(cfg: &RunConfig) -> Result<()> {
    let m = TruncatedModel::build(&cfg.params, cfg.box_j)?;
    write_file(&cfg.out, "model.txt", &m.to_text())?;
    finish(cfg, "build-model", &["model.txt"], serde_json::to_value(m.manifest())?)
}

pub fn normal_form(cfg: &RunConfig) -> Result<()> {
    let m = model(cfg)?;
    let opts = NormalFormOptions { threshold: cfg.threshold, ..NormalFormOptions::new(cfg.order) };
    let nf = birkhoff_nf(&m.hamiltonian, &m.params, &opts)?;
    write_file(&cfg.out, "normal_form.txt", &nf.hamiltonian.to_text())?;
    let mut files = vec!["normal_form.txt".to_string()];
    for (k, g) in nf.generators.iter().enumerate() {
        let name = format!("generator_{}.txt", k + 1);
        write_file(&cfg.out, &name, &g.to_text())?;
        files.push(name);
    }
    if let Some(d) = &nf.transformation {
        write_file(&cfg.out, "transformation.txt", &d.to_text())?;
        files.push("transformation.txt".into());
    }
    let names: Vec<&str> = files.iter().map(String::as_str).collect();
    finish(cfg, "normal-form", &names, serde_json::to_value(nf.manifest())?)
}

pub fn simulate(cfg: &RunConfig) -> Result<()> {
    let m = model(cfg)?;
    let eps = cfg.eps[0];
    let z0 = initial_direction(cfg.box_j, cfg.seed).scaled(eps);
    let dt = cfg.dt_for(&m.hamiltonian);
    let horizon = cfg.horizon();
    let integ = MidpointIntegrator::new(&m.hamiltonian);
    let log = integ.integrate(&z0, dt, horizon, cfg.sample_every)?;
    write_file(&cfg.out, "trajectory.csv", &trajectory_csv(&log))?;
    finish(
        cfg,
        "simulate",
        &["trajectory.csv"],
        json!({
            "eps": eps,
            "dt": dt,
            "horizon": horizon,
            "samples": log.len(),
            "energy_drift": log.energy_drift(),
            "momentum_drift": log.momentum_drift(),
            "superaction_drift": log.superaction_drift(),
            "max_inner_iterations": log.max_inner,
        }),
    )
}

pub fn drift(cfg: &RunConfig) -> Result<()> {
    let m = model(cfg)?;
    let reports = cfg
        .eps
        .iter()
        .map(|&eps| {
            let opts = DriftOptions {
                order: cfg.order,
                eps,
                horizon: cfg.horizon(),
                dt: cfg.dt_for(&m.hamiltonian),
                seed: cfg.seed,
                tau: cfg.tau,
                sample_every: cfg.sample_every,
            };
            drift_experiment(&m, &opts)
        })
        .collect::<Result<Vec<_>>>()?;
    write_file(&cfg.out, "drift.csv", &drift_csv(&reports))?;
    for r in &reports {
        println!(
            "eps = {:e}: original ratio {:.3} (expect {}), normal form ratio {:.3} (expect {})",
            r.eps[0], r.pre.ratio, r.pre.expected, r.post.ratio, r.post.expected
        );
    }
    finish(cfg, "drift", &["drift.csv"], serde_json::to_value(&reports)?)
}

pub fn darboux_check(cfg: &RunConfig) -> Result<()> {
    let mut rng = random::seeded(cfg.seed);
    let s = random::symmetric_op(cfg.box_j, 1, 0.5, 0.5, &mut rng);
    let map = exp_symplectic(&s, cfg.order)?;
    let sol = corrector(map, cfg.order)?;
    write_file(&cfg.out, "darboux.txt", &sol.to_text()?)?;
    finish(cfg, "darboux-check", &["darboux.txt"], serde_json::to_value(&sol.diagnostics)?)?;
    println!(
        "pullback residual {:e}, symplectic defect {:e}",
        sol.diagnostics.pullback_residual, sol.diagnostics.symplectic.defect
    );
    if !sol.passed() {
        return Err(LabError::NonConvergence("corrected map is not symplectic to the requested order".into()));
    }
    Ok(())
}
