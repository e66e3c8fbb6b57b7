//! Time integration, drift experiments, run configuration and export.

mod config;
mod drift;
mod export;
mod integrate;

pub use config::{parse_grid, parse_list, RunConfig, DEFAULT_STEP_PHASE, KEYS};
pub use drift::{drift_experiment, initial_direction, DriftOptions, DriftPair, DriftReport, RATIO_BAND};
pub use export::{
    drift_csv, scan_csv, trajectory_csv, trajectory_header, write_file, write_json, Manifest, DRIFT_HEADER, SCAN_HEADER,
};
pub use integrate::{integrate, max_frequency, MidpointIntegrator, TrajectoryLog, INNER_TOL, MAX_STEP_PHASE};

#[cfg(test)]
mod tests;
