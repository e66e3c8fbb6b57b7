//! Super-action drift before and after the normal form.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::integrate::MidpointIntegrator;
use crate::birkhoff::{normal_form, NormalFormOptions};
use crate::error::{LabError, Result};
use crate::polyham::State;
use crate::resonance::certify;
use crate::wwmodel::TruncatedModel;

/// Accepted relative deviation of a measured scaling ratio from its prediction.
pub const RATIO_BAND: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftOptions {
    pub order: u32,
    pub eps: f64,
    pub horizon: f64,
    pub dt: f64,
    pub seed: u64,
    /// Exponent of the resonance certificate checked first.
    pub tau: f64,
    pub sample_every: usize,
}

/// Drift `D(ε)` at `ε` and `ε/2` in one set of coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftPair {
    pub drift: [f64; 2],
    pub ratio: f64,
    pub expected: f64,
    pub passed: bool,
    pub energy_drift: [f64; 2],
}

impl DriftPair {
    fn new(d1: f64, d2: f64, e1: f64, e2: f64, expected: f64) -> Self {
        let ratio = d1 / d2;
        DriftPair {
            drift: [d1, d2],
            ratio,
            expected,
            passed: (ratio / expected - 1.0).abs() <= RATIO_BAND,
            energy_drift: [e1, e2],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub order: u32,
    pub eps: [f64; 2],
    pub horizon: f64,
    pub dt: f64,
    pub certificate_nu: f64,
    /// Original coordinates; cubic terms give `D(ε) ~ ε³`.
    pub pre: DriftPair,
    /// Normal-form coordinates; the tail gives `D(ε) ~ ε^{N+3}`.
    pub post: DriftPair,
}

/// Unit-norm random direction for the initial data.
pub fn initial_direction(box_j: u32, seed: u64) -> State {
    let z = State::random(box_j, 1.0, &mut ChaCha8Rng::seed_from_u64(seed));
    let n = z.norm();
    z.scaled(1.0 / n)
}

pub fn drift_experiment(model: &TruncatedModel, opts: &DriftOptions) -> Result<DriftReport> {
    if !(opts.eps > 0.0) {
        return Err(LabError::Invalid(format!("amplitude must be positive, got {}", opts.eps)));
    }
    if opts.order == 0 {
        return Err(LabError::Invalid("normal-form order must be at least 1".into()));
    }
    let params = model.params;
    let box_j = model.box_j;
    let cert = certify(&params, opts.order + 2, box_j, opts.tau)?;
    let h = &model.hamiltonian;
    let nf = normal_form(
        h,
        &params,
        &NormalFormOptions { tail_cap: Some(opts.order + 3), ..NormalFormOptions::new(opts.order) },
    )?;
    let d = nf.transformation.as_ref().expect("transformation requested");
    let dir = initial_direction(box_j, opts.seed);
    let eps = [opts.eps, 0.5 * opts.eps];
    let pre_int = MidpointIntegrator::new(h);
    let post_int = MidpointIntegrator::new(&nf.hamiltonian);
    let mut pre = [(0.0, 0.0); 2];
    let mut post = [(0.0, 0.0); 2];
    for (i, e) in eps.iter().enumerate() {
        let z0 = dir.scaled(*e);
        let log = pre_int.integrate(&z0, opts.dt, opts.horizon, opts.sample_every)?;
        pre[i] = (log.superaction_drift(), log.energy_drift());
        let w0 = d.apply_state(&z0);
        let log = post_int.integrate(&w0, opts.dt, opts.horizon, opts.sample_every)?;
        post[i] = (log.superaction_drift(), log.energy_drift());
    }
    Ok(DriftReport {
        order: opts.order,
        eps,
        horizon: opts.horizon,
        dt: opts.dt,
        certificate_nu: cert.nu,
        pre: DriftPair::new(pre[0].0, pre[1].0, pre[0].1, pre[1].1, 8.0),
        post: DriftPair::new(post[0].0, post[1].0, post[0].1, post[1].1, 2f64.powi(opts.order as i32 + 3)),
    })
}
