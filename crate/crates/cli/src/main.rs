//! `wwlab`: command-line front end of the water-waves normal-form laboratory.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wwlab_core::lab::{parse_grid, parse_list, RunConfig};
use wwlab_core::LabError;

#[derive(Parser, Debug)]
#[command(name = "wwlab", version, about = "Birkhoff normal-form laboratory for gravity-capillary water waves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Resonance certificates over a κ grid.
    Scan(Common),
    /// Resonance certificate at one κ; exit 2 on resonance.
    Certify(Common),
    /// Assemble and serialize the truncated water-waves model.
    BuildModel(Common),
    /// Birkhoff normal form of the model; exit 2 on a small divisor.
    NormalForm(Common),
    /// Integrate the model from a seeded initial state.
    Simulate(Common),
    /// Super-action drift scaling before and after the normal form.
    Drift(Common),
    /// Darboux corrector on a seeded admissible map.
    DarbouxCheck(Common),
}

/// Flags shared by every subcommand; each overrides the config file.
#[derive(Args, Debug, Default)]
struct Common {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    kappa: Option<f64>,
    /// κ grid `A:B:STEP`.
    #[arg(long)]
    grid: Option<String>,
    /// Normal-form order `N`.
    #[arg(long)]
    order: Option<u32>,
    /// Box size `J`.
    #[arg(long = "box")]
    box_j: Option<u32>,
    /// Amplitudes, comma separated.
    #[arg(long)]
    eps: Option<String>,
    /// Time horizon `T`.
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    /// Certificate exponents, comma separated.
    #[arg(long = "tau-list")]
    tau_list: Option<String>,
    /// ν floor for certificates, small-divisor threshold for normal forms.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Keep every k-th integrator step in trajectory output.
    #[arg(long = "sample-every")]
    sample_every: Option<usize>,
    /// Directory with a model written by `build-model`.
    #[arg(long)]
    model: Option<PathBuf>,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig, LabError> {
        let mut cfg = match &self.config {
            Some(p) => {
                if !p.exists() {
                    return Err(LabError::Invalid(format!("config file {} not found", p.display())));
                }
                RunConfig::load(p)?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = &self.out {
            cfg.out = v.clone();
        }
        if let Some(v) = self.kappa {
            cfg.params.kappa = v;
        }
        if let Some(v) = &self.grid {
            cfg.grid = Some(parse_grid(v)?);
        }
        if let Some(v) = self.order {
            cfg.order = v;
        }
        if let Some(v) = self.box_j {
            cfg.box_j = v;
        }
        if let Some(v) = &self.eps {
            cfg.eps = parse_list(v)?;
        }
        if let Some(v) = self.horizon {
            cfg.horizon = Some(v);
        }
        if let Some(v) = self.dt {
            cfg.dt = Some(v);
        }
        if let Some(v) = &self.tau_list {
            cfg.tau_list = parse_list(v)?;
        }
        if let Some(v) = self.threshold {
            cfg.threshold = Some(v);
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.sample_every {
            cfg.sample_every = v;
        }
        if let Some(v) = &self.model {
            cfg.model = Some(v.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), LabError> {
    let (name, common) = match &cli.command {
        Command::Scan(c) => ("scan", c),
        Command::Certify(c) => ("certify", c),
        Command::BuildModel(c) => ("build-model", c),
        Command::NormalForm(c) => ("normal-form", c),
        Command::Simulate(c) => ("simulate", c),
        Command::Drift(c) => ("drift", c),
        Command::DarbouxCheck(c) => ("darboux-check", c),
    };
    let cfg = common.resolve()?;
    match name {
        "scan" => commands::scan(&cfg),
        "certify" => commands::certify(&cfg),
        "build-model" => commands::build_model(&cfg),
        "normal-form" => commands::normal_form(&cfg),
        "simulate" => commands::simulate(&cfg),
        "drift" => commands::drift(&cfg),
        _ => commands::darboux_check(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resonance() { 2 } else { 1 })
        }
    }
}
