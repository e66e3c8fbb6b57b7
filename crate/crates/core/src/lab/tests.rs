use super::*;
use crate::error::LabError;
use crate::medium::{omega, MediumParams};
use crate::polyham::{PolyHamiltonian, State};
use crate::random;
use crate::wwmodel::TruncatedModel;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params() -> MediumParams {
    MediumParams::deep(1.0, 1.37, 1.0)
}

fn model(box_j: u32) -> TruncatedModel {
    TruncatedModel::build(&params(), box_j).unwrap()
}

fn start(box_j: u32, eps: f64, seed: u64) -> State {
    initial_direction(box_j, seed).scaled(eps)
}

#[test]
fn zero_state_stays_zero() {
    let m = model(3);
    let log = integrate(&m.hamiltonian, &State::zeros(3), 0.01, 0.5).unwrap();
    assert!(log.states.iter().all(|s| s.norm() == 0.0));
    assert!(log.is_consistent());
}

#[test]
fn linear_flow_conserves_every_superaction() {
    let h = PolyHamiltonian::quadratic(&params(), 4);
    let z0 = start(4, 0.3, 2);
    let log = integrate(&h, &z0, 0.02, 5.0).unwrap();
    let scale = z0.norm().powi(2);
    assert!(log.superaction_drift() < 1e-13 * scale, "{:e}", log.superaction_drift());
    assert!(log.is_consistent());
}

#[test]
fn energy_error_is_second_order() {
    let m = model(4);
    let z0 = start(4, 0.15, 3);
    let int = MidpointIntegrator::new(&m.hamiltonian);
    let dt = 0.2 / int.max_omega();
    let a = int.integrate(&z0, dt, 4.0, 1).unwrap().energy_drift();
    let b = int.integrate(&z0, 0.5 * dt, 4.0, 1).unwrap().energy_drift();
    let ratio = a / b;
    assert!((ratio / 4.0 - 1.0).abs() < 0.25, "ratio {ratio}");
}

#[test]
fn momentum_is_conserved() {
    let m = model(4);
    let z0 = start(4, 0.2, 4);
    let log = integrate(&m.hamiltonian, &z0, 0.01, 3.0).unwrap();
    assert!(log.momentum_drift() < 1e-10);
    assert!(log.momentum_drift() < 1e-12 * z0.norm().powi(2));
}

#[test]
fn forward_then_backward_returns() {
    let m = model(4);
    let z0 = start(4, 0.2, 5);
    let int = MidpointIntegrator::new(&m.hamiltonian);
    let dt = 0.01;
    let mut z = z0.clone();
    for _ in 0..300 {
        int.step(&mut z, dt).unwrap();
    }
    assert!(z.max_diff(&z0) > 1e-3);
    for _ in 0..300 {
        int.step(&mut z, -dt).unwrap();
    }
    assert!(z.max_diff(&z0) < 10.0 * INNER_TOL * z0.norm(), "{:e}", z.max_diff(&z0));
}

#[test]
fn coarse_steps_are_rejected() {
    let m = model(3);
    let int = MidpointIntegrator::new(&m.hamiltonian);
    let dt = 0.6 / int.max_omega();
    assert!(int.integrate(&start(3, 0.1, 6), dt, 1.0, 1).is_err());
    assert!(int.integrate(&start(3, 0.1, 6), -0.01, 1.0, 1).is_err());
    assert!(int.integrate(&start(2, 0.1, 6), 0.01, 1.0, 1).is_err());
}

#[test]
fn sampling_keeps_the_endpoints() {
    let m = model(2);
    let log = MidpointIntegrator::new(&m.hamiltonian).integrate(&start(2, 0.1, 7), 0.01, 0.105, 4).unwrap();
    assert_eq!(log.len(), 4);
    assert!((log.times.last().unwrap() - 0.105).abs() < 1e-15);
    assert!(log.is_consistent());
}

#[test]
fn random_quartic_flow_matches_small_steps() {
    // Midpoint converges to the exact flow: compare against a much finer run.
    let mut r = ChaCha8Rng::seed_from_u64(8);
    let h = PolyHamiltonian::quadratic(&params(), 2).add(&random::hamiltonian(2, &[3, 4], 0.5, 0.5, &mut r)).unwrap();
    let int = MidpointIntegrator::new(&h);
    let z0 = start(2, 0.5, 9);
    let run = |dt: f64| int.integrate(&z0, dt, 1.0, 1000).unwrap().last_state().unwrap().clone();
    let (a, b, c) = (run(0.02), run(0.01), run(0.005));
    let ratio = a.max_diff(&c) / b.max_diff(&c);
    assert!(ratio > 2.5, "ratio {ratio}");
}

fn drift_opts(order: u32, eps: f64) -> DriftOptions {
    let p = params();
    DriftOptions {
        order,
        eps,
        horizon: 50.0 / omega(&p, 1).unwrap(),
        dt: 0.2 / crate::medium::max_abs_omega(&p, 4),
        seed: 1,
        tau: 6.0,
        sample_every: 1,
    }
}

#[test]
fn linear_model_has_no_drift() {
    let mut m = model(4);
    m.hamiltonian = PolyHamiltonian::quadratic(&params(), 4);
    let r = drift_experiment(&m, &drift_opts(1, 1e-2)).unwrap();
    assert!(r.pre.drift.iter().chain(&r.post.drift).all(|d| *d < 1e-18), "{r:?}");
}

#[test]
fn drift_scales_with_the_normal_form_order() {
    let r = drift_experiment(&model(4), &drift_opts(1, 1e-2)).unwrap();
    assert!(r.pre.passed && r.post.passed, "{r:?}");
}

#[test]
fn resonant_parameters_abort_the_drift_run() {
    let mut m = model(4);
    m.params = MediumParams::deep(1.0, 0.5, 0.0);
    let e = drift_experiment(&m, &drift_opts(1, 1e-2)).unwrap_err();
    assert!(e.is_resonance(), "{e:?}");
    match e {
        LabError::Resonance { index, .. } => assert!(!index.is_empty()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn config_round_trips_and_rejects_unknown_keys() {
    let text = "# run\nkappa = 1.5\ngamma=0.5\ndepth = 2\nbox = 3\neps = 0.01, 0.005\ngrid = 1:2:0.5\ntau_list = 2,4\n";
    let cfg = RunConfig::parse(text).unwrap();
    assert_eq!(cfg.params.kappa, 1.5);
    assert_eq!(cfg.eps, vec![0.01, 0.005]);
    assert_eq!(cfg.kappa_grid().unwrap(), vec![1.0, 1.5, 2.0]);
    let back = RunConfig::parse(&cfg.to_text()).unwrap();
    assert_eq!(back, cfg);
    assert_eq!(back.digest(), cfg.digest());
    assert_eq!(cfg.digest().len(), 64);
    let other = RunConfig { out: "elsewhere".into(), ..cfg.clone() };
    assert_eq!(other.digest(), cfg.digest());
    let moved = RunConfig { seed: 2, ..cfg.clone() };
    assert_ne!(moved.digest(), cfg.digest());
    for bad in ["kapa = 1", "kappa = 1\nkappa = 2", "kappa 1", "box = 1", "dt = -1", "eps = 0", "horizon = 0", "kappa = x"] {
        assert!(RunConfig::parse(bad).is_err(), "{bad}");
    }
    match RunConfig::parse("g = 1\nfoo = 2") {
        Err(LabError::Parse { line, msg }) => {
            assert_eq!(line, 2);
            assert!(msg.contains("foo"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn trajectory_csv_is_deterministic() {
    let m = model(2);
    let run = || trajectory_csv(&integrate(&m.hamiltonian, &start(2, 0.1, 10), 0.02, 0.2).unwrap());
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    let mut lines = a.lines();
    assert_eq!(lines.next().unwrap(), trajectory_header(2));
    assert_eq!(a.lines().count(), 12);
    let cols = trajectory_header(2).split(',').count();
    assert!(a.lines().all(|l| l.split(',').count() == cols));
}
