use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::coords::Side::{Minus, Plus};
use crate::medium::big_omega;
use crate::polyham::State;
use crate::random;
use crate::resonance::MultiIndex;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn params() -> MediumParams {
    MediumParams::deep(1.0, 0.37, 0.3)
}

fn toy(box_j: u32, degrees: &[u32], seed: u64) -> PolyHamiltonian {
    let q = PolyHamiltonian::quadratic(&params(), box_j);
    q.add(&random::hamiltonian(box_j, degrees, 0.6, 0.5, &mut rng(seed))).unwrap()
}

fn idx(v: &[(i32, crate::coords::Side)]) -> MultiIndex {
    MultiIndex::from_monomial(v).unwrap()
}

#[test]
fn sap_terms_give_no_generator() {
    let m = idx(&[(1, Plus), (1, Minus), (2, Plus), (2, Minus)]);
    let h = PolyHamiltonian::from_poly(2, Poly::monomial(m, C64::new(1.5, 0.0))).unwrap();
    assert!(homological_solve(&h, &params(), 1e-8).unwrap().is_zero());
}

#[test]
fn cubic_generator_matches_formula() {
    let p = params();
    let m = idx(&[(1, Plus), (2, Plus), (3, Minus)]);
    let c = C64::new(0.7, -0.2);
    let mut poly = Poly::monomial(m.clone(), c);
    poly.add_term(m.conj(), c.conj());
    let h = PolyHamiltonian::from_poly(3, poly).unwrap();
    let chi = homological_solve(&h, &p, 1e-8).unwrap();
    let div = big_omega(&p, 1).unwrap() + big_omega(&p, 2).unwrap() - big_omega(&p, 3).unwrap();
    let expect = c / (C64::new(0.0, 1.0) * div);
    assert!((chi.coeff(&m) - expect).norm() < 1e-14 * expect.norm(), "{} vs {expect}", chi.coeff(&m));
    assert!((chi.coeff(&m.conj()) - expect.conj()).norm() < 1e-14 * expect.norm());
    assert!(chi.reality_defect() < 1e-15);
}

#[test]
fn homological_identity_holds() {
    let p = params();
    let box_j = 3;
    let f = random::hamiltonian(box_j, &[3], 0.5, 1.0, &mut rng(1));
    let (_, non) = f.sap_split();
    let chi = homological_solve(&non, &p, 1e-8).unwrap();
    let h2 = PolyHamiltonian::quadratic(&p, box_j);
    let br = chi.poisson(&h2).unwrap();
    assert!(br.add(&non).unwrap().max_abs() < 1e-13);
}

#[test]
fn wilton_ripple_is_a_small_divisor() {
    // Ω_1 + Ω_1 - Ω_2 = 0 bracketed in κ at γ = 0.
    let m = idx(&[(1, Plus), (1, Plus), (2, Minus)]);
    let div = |k: f64| small_divisor(&MediumParams::deep(1.0, k, 0.0), &m);
    let (mut a, mut b) = (0.1, 1.0);
    assert!(div(a) * div(b) < 0.0);
    for _ in 0..200 {
        let c = 0.5 * (a + b);
        if div(a) * div(c) <= 0.0 {
            b = c;
        } else {
            a = c;
        }
    }
    let kappa = 0.5 * (a + b);
    assert!((kappa - 0.5).abs() < 1e-12);
    let p = MediumParams::deep(1.0, kappa, 0.0);
    let mut poly = Poly::monomial(m.clone(), C64::new(1.0, 0.0));
    poly.add_term(m.conj(), C64::new(1.0, 0.0));
    let h = PolyHamiltonian::from_poly(2, poly).unwrap();
    match homological_solve(&h, &p, default_threshold(&p, 2)) {
        Err(LabError::SmallDivisor { index, value, .. }) => {
            assert!(value.abs() < 1e-10);
            assert!(index == m.to_string() || index == m.conj().to_string());
        }
        other => panic!("expected small divisor, got {other:?}"),
    }
}

#[test]
fn lie_transform_with_zero_generator_is_identity() {
    let h = toy(2, &[3, 4], 2);
    let (out, dropped) = lie_transform(&h, &PolyHamiltonian::zero(2), 4).unwrap();
    assert_eq!(out, h);
    assert_eq!(dropped, 0.0);
}

#[test]
fn lie_transform_cancels_cubic_term() {
    let p = params();
    let box_j = 2;
    let f = random::hamiltonian(box_j, &[3], 0.8, 1.0, &mut rng(3));
    assert!(!f.is_zero());
    let h = PolyHamiltonian::quadratic(&p, box_j).add(&f).unwrap();
    let chi = homological_solve(&f, &p, 1e-8).unwrap();
    let (out, _) = lie_transform(&h, &chi, 4).unwrap();
    assert!(out.degree_piece(3).max_abs() < 1e-13);
    assert!(out.degree_piece(2).distance(&h.degree_piece(2)) < 1e-15);
}

#[test]
fn lie_transform_round_trip() {
    let h = toy(2, &[3, 4], 4);
    let chi = random::hamiltonian(2, &[3, 4], 0.5, 0.3, &mut rng(5));
    let cap = 6;
    let (fwd, _) = lie_transform(&h, &chi, cap).unwrap();
    let (back, _) = lie_transform(&fwd, &chi.scale(-1.0), cap).unwrap();
    assert!(back.distance(&h) < 1e-9);
}

#[test]
fn lie_transform_rejects_quadratic_generator() {
    let q = PolyHamiltonian::quadratic(&params(), 2);
    assert!(lie_transform(&q, &q, 4).is_err());
}

#[test]
fn quadratic_only_gives_identity() {
    let p = params();
    let h = PolyHamiltonian::quadratic(&p, 3);
    let r = normal_form(&h, &p, &NormalFormOptions::new(2)).unwrap();
    assert!(r.generators.iter().all(|g| g.is_zero()));
    assert_eq!(r.transformation.as_ref().unwrap(), &PluriMap::identity(3));
    assert_eq!(r.hamiltonian, h);
    let rep = verify_sap(&r);
    assert_eq!(rep.bracket_max, 0.0);
    assert!(rep.passed);
}

#[test]
fn two_mode_toy_removes_all_cubic_terms() {
    let p = params();
    let h = toy(2, &[3], 6);
    assert!(!h.degree_piece(3).is_empty());
    let r = normal_form(&h, &p, &NormalFormOptions::new(1)).unwrap();
    assert!(r.normal_form().degree_piece(3).max_abs() < 1e-13);
    assert!(verify_sap(&r).passed);
    assert!(r.symplectic.as_ref().unwrap().passed);
}

#[test]
fn order_two_normal_form_is_sap() {
    let p = params();
    let h = toy(3, &[3, 4], 7);
    let r = normal_form(&h, &p, &NormalFormOptions::new(2)).unwrap();
    let rep = verify_sap(&r);
    assert!(rep.passed, "{rep:?}");
    assert!(r.hamiltonian.reality_defect() < 1e-12);
    assert!(r.hamiltonian.momentum_violations().is_empty());
    assert!(r.generators.iter().all(|g| g.reality_defect() < 1e-12));
    assert!(r.symplectic.as_ref().unwrap().passed);
    // SAP part of the quartic input passes through the generator untouched.
    let (sap4, _) = h.degree_piece(4).sap_split();
    assert!(sap4.iter().all(|(m, _)| r.generators[1].coeff(m) == C64::new(0.0, 0.0)));
}

#[test]
fn lower_degrees_are_unchanged_by_each_step() {
    let p = params();
    let h = toy(2, &[3, 4], 8);
    let r1 = normal_form(&h, &p, &NormalFormOptions { build_map: false, ..NormalFormOptions::new(1) }).unwrap();
    assert!(r1.hamiltonian.degree_piece(2).distance(&h.degree_piece(2)) < 1e-15);
    let r2 = normal_form(&h, &p, &NormalFormOptions { build_map: false, ..NormalFormOptions::new(2) }).unwrap();
    assert!(r2.hamiltonian.degree_range(0, 3).distance(&r1.hamiltonian.degree_range(0, 3)) < 1e-15);
}

#[test]
fn energy_is_preserved_along_the_transformation() {
    let p = params();
    let n = 2;
    let h = toy(2, &[3, 4], 9);
    let r = normal_form(&h, &p, &NormalFormOptions::new(n)).unwrap();
    let d = r.transformation.as_ref().unwrap();
    let nf = r.normal_form();
    let z = State::random(2, 1.0, &mut rng(10));
    let err = |eps: f64| {
        let ze = z.scaled(eps);
        (h.evaluate(&ze).unwrap() - nf.evaluate(&d.apply_state(&ze)).unwrap()).abs()
    };
    let (e1, e2) = (err(0.02), err(0.01));
    let ratio = e1 / e2;
    let target = 2f64.powi(n as i32 + 3);
    assert!((ratio / target - 1.0).abs() < 0.3, "ratio {ratio}, target {target}");
}

#[test]
fn corrupted_result_is_detected() {
    let p = params();
    let h = toy(2, &[3], 11);
    let mut r = normal_form(&h, &p, &NormalFormOptions::new(1)).unwrap();
    let m = idx(&[(1, Plus), (1, Plus), (2, Minus)]);
    let mut poly = r.hamiltonian.poly().clone();
    poly.add_term(m.clone(), C64::new(1e-3, 0.0));
    poly.add_term(m.conj(), C64::new(1e-3, 0.0));
    r.hamiltonian = PolyHamiltonian::from_poly(2, poly).unwrap();
    let rep = verify_sap(&r);
    assert!(!rep.passed);
    assert!(rep.bracket_max > 1e-4);
}

#[test]
fn non_diagonal_quadratic_is_rejected() {
    let p = params();
    let h = PolyHamiltonian::quadratic(&p, 2).scale(1.1);
    assert!(normal_form(&h, &p, &NormalFormOptions::new(1)).is_err());
}

#[test]
fn resonant_step_reports_index() {
    let p = MediumParams::deep(1.0, 0.5, 0.0);
    let m = idx(&[(1, Plus), (1, Plus), (2, Minus)]);
    let mut poly = PolyHamiltonian::quadratic(&p, 2).into_poly();
    poly.add_term(m.clone(), C64::new(1.0, 0.0));
    poly.add_term(m.conj(), C64::new(1.0, 0.0));
    let h = PolyHamiltonian::from_poly(2, poly).unwrap();
    let e = normal_form(&h, &p, &NormalFormOptions::new(1)).unwrap_err();
    assert!(e.is_resonance());
    assert!(matches!(e, LabError::SmallDivisor { step: 1, .. }));
}

#[test]
fn manifest_serializes() {
    let p = params();
    let r = normal_form(&toy(2, &[3, 4], 12), &p, &NormalFormOptions::new(2)).unwrap();
    let m = r.manifest();
    let s = serde_json::to_string(&m).unwrap();
    let back: NormalFormManifest = serde_json::from_str(&s).unwrap();
    assert_eq!(back, m);
    assert_eq!(m.steps.len(), 2);
    assert!(m.sap.passed);
}
