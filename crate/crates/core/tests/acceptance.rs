//! Acceptance suite: one test per criterion, named `criterion_NN_*`, each checking its
//! stated tolerance and runtime budget against an oracle coded here.

mod support;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use support::{real_field, StripOracle};
use wwlab_core::birkhoff::{normal_form, NormalFormOptions};
use wwlab_core::coords::{all_coords, modes, Coord, Side};
use wwlab_core::darboux::{corrector, exp_symplectic};
use wwlab_core::lab::{drift_experiment, initial_direction, DriftOptions, MidpointIntegrator, INNER_TOL};
use wwlab_core::medium::{big_omega, msym, omega, Depth};
use wwlab_core::plurimap::{approx_flow, approx_flow_family, symplectic_up_to_n, TauOp};
use wwlab_core::polyham::FourierField;
use wwlab_core::resonance::{
    badset_measure, cert_point, cert_rho, enumerate, rho_tau1, scan, small_divisor, BadSetQuery, CertFamily,
};
use wwlab_core::wwmodel::{dn_expand, TruncatedModel};
use wwlab_core::{random, MediumParams, MultiIndex, OpPoly, PluriMap, PolyHamiltonian, State, TauField};

fn budget(start: Instant, secs: u64) {
    let t = start.elapsed();
    assert!(t < Duration::from_secs(secs), "runtime {t:?} over the {secs} s budget");
}

fn nonresonant() -> MediumParams {
    MediumParams::deep(1.0, 1.37, 1.0)
}

fn gsym(p: &MediumParams, xi: f64) -> f64 {
    match p.depth {
        Depth::Infinite => xi.abs(),
        Depth::Finite(h) => xi.abs() * (h * xi.abs()).tanh(),
    }
}

#[test]
fn criterion_01_dispersion_identities() {
    let t0 = Instant::now();
    let grid = [
        (1.0, 1.37, 1.0, Depth::Infinite),
        (1.0, 0.5, 0.0, Depth::Infinite),
        (9.81, 0.07, -2.0, Depth::Infinite),
        (2.0, 3.0, 0.5, Depth::Infinite),
        (1.0, 1.0, 1.0, Depth::Finite(1.0)),
        (1.0, 0.2, -1.0, Depth::Finite(0.5)),
        (9.81, 0.07, 3.0, Depth::Finite(2.0)),
        (0.5, 2.0, 0.0, Depth::Finite(10.0)),
        (1.0, 1e-3, 2.0, Depth::Finite(0.1)),
        (3.0, 0.8, -0.3, Depth::Finite(30.0)),
    ];
    let mut worst = 0.0_f64;
    for (g, kappa, gamma, depth) in grid {
        let p = MediumParams::new(g, kappa, gamma, depth).unwrap();
        for j in (-64..=64).filter(|&j| j != 0) {
            let xi = j as f64;
            let gx = gsym(&p, xi);
            let w = omega(&p, j).unwrap();
            let m = msym(&p, xi).unwrap();
            let stiff = g + kappa * xi * xi + 0.25 * gamma * gamma * gx / (xi * xi);
            worst = worst.max((m * stiff * m / w - 1.0).abs());
            worst = worst.max((gx / (m * m) / w - 1.0).abs());
            assert!((w - (gx * stiff).sqrt()).abs() <= 1e-12 * w);
        }
    }
    println!("criterion 1: worst relative residual {worst:e}");
    assert!(worst < 1e-12);
    budget(t0, 1);
}

#[test]
fn criterion_02_eight_wave_identity() {
    let t0 = Instant::now();
    let mut worst = 0.0_f64;
    for gamma in [0.0, 1.0, 2.0] {
        let p = MediumParams::deep(1.0, 1.37, gamma);
        for n1 in 1..=20 {
            for n2 in 1..=20 {
                for n3 in 1..=20 {
                    for n4 in 1..=20 {
                        use Side::{Minus, Plus};
                        let idx = MultiIndex::from_monomial(&[
                            (n1, Plus),
                            (-n1, Minus),
                            (n2, Plus),
                            (-n2, Minus),
                            (-n3, Plus),
                            (n3, Minus),
                            (-n4, Plus),
                            (n4, Minus),
                        ])
                        .unwrap();
                        assert!(idx.is_sap());
                        worst = worst.max(small_divisor(&p, &idx).abs());
                    }
                }
            }
        }
    }
    println!("criterion 2: worst residual {worst:e}");
    assert!(worst < 1e-14);
    budget(t0, 1);
}

/// All exponent vectors over the coordinates of the box with total degree `≤ maxdeg`.
fn exhaustive(maxdeg: u32, box_j: u32) -> Vec<Vec<(Coord, u32)>> {
    let coords = all_coords(box_j);
    let mut out = Vec::new();
    fn rec(cs: &[Coord], k: usize, left: u32, cur: &mut Vec<(Coord, u32)>, out: &mut Vec<Vec<(Coord, u32)>>) {
        if k == cs.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            if e > 0 {
                cur.push((cs[k], e));
            }
            rec(cs, k + 1, left - e, cur, out);
            if e > 0 {
                cur.pop();
            }
        }
    }
    rec(&coords, 0, maxdeg, &mut Vec::new(), &mut out);
    out
}

#[test]
fn criterion_03_sap_combinatorics() {
    let t0 = Instant::now();
    let (maxdeg, box_j) = (4, 4);
    let mut checked = 0;
    let mut integrable = 0;
    let listed: std::collections::BTreeSet<MultiIndex> = enumerate(maxdeg, box_j, false).collect();
    for v in exhaustive(maxdeg, box_j) {
        if v.is_empty() {
            continue;
        }
        let mut cs = Vec::new();
        for (c, e) in &v {
            cs.extend(std::iter::repeat_n(*c, *e as usize));
        }
        let idx = MultiIndex::from_coords(&cs).unwrap();
        assert!(listed.contains(&idx));
        let exp = |k: i32, s: Side| v.iter().find(|(c, _)| *c == Coord::new(k, s)).map_or(0, |(_, e)| *e);
        let sap = (1..=box_j as i32)
            .all(|n| exp(n, Side::Plus) + exp(-n, Side::Plus) == exp(n, Side::Minus) + exp(-n, Side::Minus));
        assert_eq!(idx.is_sap(), sap, "{idx}");
        checked += 1;
        let degree: u32 = v.iter().map(|(_, e)| e).sum();
        let momentum: i64 = v.iter().map(|(c, e)| c.momentum() * *e as i64).sum();
        if sap && degree == 4 && momentum == 0 {
            let diagonal = modes(box_j).iter().all(|&k| exp(k, Side::Plus) == exp(k, Side::Minus));
            assert!(diagonal, "SAP quartic {idx} is not of the form |z_a|²|z_b|²");
            integrable += 1;
        }
    }
    assert_eq!(checked, listed.len());
    println!("criterion 3: {checked} indices, {integrable} SAP momentum-zero quartics, all integrable");
    budget(t0, 10);
}

/// Bisection on a sign change of `f` over `[a, b]`.
fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa0 = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (f(m) > 0.0) == (fa0 > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    if f(a).abs() < f(b).abs() {
        a
    } else {
        b
    }
}

#[test]
fn criterion_04_resonance_scanner() {
    let t0 = Instant::now();
    let p = nonresonant();
    let (maxdeg, box_j, tau) = (3, 20, 6.0);
    let n = 2000;
    let grid: Vec<f64> = (0..n).map(|i| 1.0 + i as f64 / (n - 1) as f64).collect();
    let certs = scan(&p, &grid, maxdeg, box_j, tau).unwrap();
    let positive = certs.iter().filter(|c| c.nu > 0.0 && c.worst.divisor.abs() > 1e-12).count();
    let fraction = positive as f64 / n as f64;
    println!("criterion 4: nu > 0 on {:.2}% of the grid", 100.0 * fraction);
    assert!(fraction >= 0.99);

    let triads: Vec<MultiIndex> = enumerate(maxdeg, box_j, true).filter(|i| i.len() == 3 && !i.is_sap()).collect();
    let mut roots = 0;
    for idx in &triads {
        let d = |k: f64| small_divisor(&p.with_kappa(k), idx);
        for w in grid.windows(2) {
            let (da, db) = (d(w[0]), d(w[1]));
            if da == 0.0 || (da > 0.0) == (db > 0.0) {
                continue;
            }
            let root = bisect(d, w[0], w[1]);
            roots += 1;
            let c = scan(&p, &[root], maxdeg, box_j, tau).unwrap().remove(0);
            assert!(
                c.worst.divisor.abs() < 1e-10,
                "root of {idx} at κ = {root}: worst {} with divisor {:e}",
                c.worst.index,
                c.worst.divisor
            );
            assert!(d(root).abs() < 1e-10);
        }
    }
    println!("criterion 4: {roots} bracketed triad resonances flagged");
    budget(t0, 120);
}

#[test]
fn criterion_05_certificate_functions() {
    let t0 = Instant::now();
    let p = nonresonant();
    let mut count = 0;
    let mut vecs: Vec<Vec<u64>> = Vec::new();
    for a in 1..=50u64 {
        vecs.push(vec![a]);
        for b in (a + 1)..=50 {
            if a + b <= 50 {
                vecs.push(vec![a, b]);
            }
            for c in (b + 1)..=50 {
                if a + b + c <= 50 {
                    vecs.push(vec![a, b, c]);
                }
            }
        }
    }
    for n in &vecs {
        let s: u64 = n.iter().sum();
        let x0 = 1.0 / s as f64;
        let pt = cert_point(&p, n, &[]);
        assert!((pt.x[0] - x0).abs() < 1e-15);
        for (a, &na) in n.iter().enumerate() {
            assert!((pt.x[a + 1] - x0 * (na as f64).sqrt()).abs() < 1e-15);
        }
        let rho = cert_rho(&p, &pt).abs();
        let a_len = n.len();
        let tau1 = a_len + 1 + a_len * (a_len - 1);
        assert_eq!(rho_tau1(a_len), tau1);
        let lower = (s as f64).powi(-(tau1 as i32));
        let upper = 1.0 / s as f64;
        assert!(rho >= lower * (1.0 - 1e-12) && rho <= upper * (1.0 + 1e-12), "n = {n:?}: {rho:e}");
        count += 1;
    }

    let mut families = Vec::new();
    for n in [vec![1u64, 2], vec![1, 3], vec![2, 3], vec![1, 2, 3]] {
        for c0 in -6..=6i64 {
            for signs in 0..(1 << n.len()) {
                let c: Vec<i64> = (0..n.len()).map(|k| if signs >> k & 1 == 1 { 1 } else { -1 }).collect();
                families.push(CertFamily::deep(c0, c, n.clone()));
            }
        }
    }
    let alphas = [1e-1, 1e-2, 1e-3, 1e-4];
    let measures: Vec<f64> = alphas
        .iter()
        .map(|&alpha| {
            let q = BadSetQuery { interval: (1.0, 2.0), alpha, big_n: 1, grid_points: 100_000, families: families.clone() };
            badset_measure(&p, &q).unwrap()
        })
        .collect();
    println!("criterion 5: {count} vectors within the rho bounds; bad-set measures {measures:?}");
    assert!(measures.windows(2).all(|w| w[1] <= w[0]));
    assert!(measures[0] > measures[3]);
    budget(t0, 60);
}

fn random_map(box_j: u32, p: u32, n: u32, seed: u64) -> PluriMap {
    let mut rng = random::seeded(seed);
    let mut m = OpPoly::zero(box_j);
    for d in p..=n {
        m = m.add(&random::op_poly(box_j, d, 0.4, 0.5, &mut rng));
    }
    PluriMap::identity_plus(m).unwrap()
}

fn random_tau_field(box_j: u32, p: u32, n: u32, seed: u64) -> TauField {
    let mut rng = random::seeded(seed);
    let coeffs = (0..2)
        .map(|_| {
            let mut m = OpPoly::zero(box_j);
            for d in p..=n {
                m = m.add(&random::op_poly(box_j, d, 0.4, 0.5, &mut rng));
            }
            m
        })
        .collect();
    TauField::from_ops(TauOp::from_coeffs(box_j, coeffs)).unwrap()
}

/// `∂_τ Φ^τ - X^τ(Φ^τ)` in field degrees `≤ n + 1`, at a given `τ`.
fn flow_residual(x: &TauField, family: &TauOp, n: u32, tau: f64) -> f64 {
    let box_j = x.box_j();
    let mut deriv = OpPoly::zero(box_j);
    for (k, m) in family.coeffs().iter().enumerate().skip(1) {
        deriv = deriv.add(&m.scale(C64::new(k as f64 * tau.powi(k as i32 - 1), 0.0)));
    }
    let phi = FourierField::identity(box_j).add(&family.at(tau).apply_identity());
    let rhs = x.field_at(tau).substitute(&phi, n + 1);
    deriv.apply_identity().sub(&rhs).truncate(n + 1).0.max_abs()
}

#[test]
fn criterion_06_plurimap_algebra() {
    let t0 = Instant::now();
    let mut worst_inv = 0.0_f64;
    let mut worst_flow = 0.0_f64;
    let mut worst_low = 0.0_f64;
    for k in 0..20u64 {
        let box_j = 1 + (k % 3) as u32;
        let p = 1 + (k / 3 % 2) as u32;
        let n = p + (k % 4) as u32 % (4 - p);
        let n = n.clamp(p, 3);

        let psi = random_map(box_j, p, n, 100 + k);
        let inv = psi.approx_inverse(n).unwrap();
        let left = psi.compose(&inv, n).unwrap().nonlin().max_abs_up_to(n);
        let right = inv.compose(&psi, n).unwrap().nonlin().max_abs_up_to(n);
        worst_inv = worst_inv.max(left).max(right);
        let low = inv.nonlin().degree_piece(p).add(&psi.nonlin().degree_piece(p)).max_abs();
        worst_low = worst_low.max(low);

        let x = random_tau_field(box_j, p, n, 200 + k);
        let family = approx_flow_family(&x, n);
        for tau in [0.25, 0.5, 1.0] {
            worst_flow = worst_flow.max(flow_residual(&x, &family, n, tau));
        }
        let f = approx_flow(&x, n).unwrap();
        let gp = |a: usize| x.ops().coeffs().get(a).cloned().unwrap_or_else(|| OpPoly::zero(box_j)).degree_piece(p);
        let integral = gp(0).add(&gp(1).scale(C64::new(0.5, 0.0)));
        worst_low = worst_low.max(f.nonlin().degree_piece(p).sub(&integral).max_abs());
    }
    println!("criterion 6: inverse {worst_inv:e}, flow {worst_flow:e}, lowest order {worst_low:e}");
    assert!(worst_inv < 1e-10);
    assert!(worst_flow < 1e-10);
    assert!(worst_low < 1e-12);
    budget(t0, 30);
}

#[test]
fn criterion_07_darboux_corrector() {
    let t0 = Instant::now();
    let n = 2;
    let mut worst = 0.0_f64;
    for k in 0..10u64 {
        let box_j = 2 + (k % 2) as u32;
        let s = random::symmetric_op(box_j, 1, 0.5, 0.5, &mut random::seeded(300 + k));
        let input = exp_symplectic(&s, n).unwrap();
        assert!(!symplectic_up_to_n(&input, n).unwrap().passed, "input {k} already symplectic");
        let sol = corrector(input, n).unwrap();
        let rep = symplectic_up_to_n(&sol.corrected, n).unwrap();
        assert!(rep.passed, "input {k}: {rep:?}");
        worst = worst.max(rep.defect).max(sol.diagnostics.pullback_residual);
    }
    println!("criterion 7: worst symplectic residual over corrected maps {worst:e}");
    assert!(worst < 1e-9);

    let mut worst_norm = 0.0_f64;
    for k in 0..5u64 {
        let box_j = 2 + (k % 2) as u32;
        let h = random::hamiltonian(box_j, &[3, 4], 0.5, 0.5, &mut random::seeded(400 + k));
        let input = approx_flow(&TauField::hamiltonian(&h).unwrap(), n).unwrap();
        assert!(symplectic_up_to_n(&input, n).unwrap().passed);
        let sol = corrector(input, n).unwrap();
        worst_norm = worst_norm.max(sol.correction.max_abs());
    }
    println!("criterion 7: worst corrector norm on symplectic inputs {worst_norm:e}");
    assert!(worst_norm < 1e-9);
    budget(t0, 60);
}

/// Dense polynomial in the eight coordinates of the box `J = 2`, coded independently of the
/// library: slots `0..4` hold the exponents of `z_{-2}, z_{-1}, z_1, z_2`, slots `4..8`
/// those of their conjugates.
type Toy = BTreeMap<[u8; 8], C64>;

const TOY_MODES: [i32; 4] = [-2, -1, 1, 2];

fn toy_slot(c: Coord) -> usize {
    let k = TOY_MODES.iter().position(|&m| m == c.k).unwrap();
    if c.side == Side::Plus {
        k
    } else {
        k + 4
    }
}

fn toy_from(h: &PolyHamiltonian) -> Toy {
    let mut out = Toy::new();
    for (idx, c) in h.iter() {
        let mut e = [0u8; 8];
        for (coord, k) in idx.factors() {
            e[toy_slot(coord)] += k as u8;
        }
        out.insert(e, *c);
    }
    out
}

fn toy_add(a: &mut Toy, e: [u8; 8], c: C64) {
    let v = a.entry(e).or_insert(C64::new(0.0, 0.0));
    *v += c;
}

fn toy_deriv(a: &Toy, slot: usize) -> Toy {
    let mut out = Toy::new();
    for (e, c) in a {
        if e[slot] > 0 {
            let mut f = *e;
            f[slot] -= 1;
            toy_add(&mut out, f, c * e[slot] as f64);
        }
    }
    out
}

fn toy_mul(a: &Toy, b: &Toy, cap: u32) -> Toy {
    let mut out = Toy::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let mut e = [0u8; 8];
            for i in 0..8 {
                e[i] = ea[i] + eb[i];
            }
            if e.iter().map(|&x| x as u32).sum::<u32>() <= cap {
                toy_add(&mut out, e, ca * cb);
            }
        }
    }
    out
}

/// `{F, G} = i Σ_k (∂_{z̄_k}F ∂_{z_k}G - ∂_{z_k}F ∂_{z̄_k}G)`.
fn toy_bracket(f: &Toy, g: &Toy, cap: u32) -> Toy {
    let mut out = Toy::new();
    for k in 0..4 {
        for (e, c) in toy_mul(&toy_deriv(f, k + 4), &toy_deriv(g, k), cap) {
            toy_add(&mut out, e, C64::new(0.0, 1.0) * c);
        }
        for (e, c) in toy_mul(&toy_deriv(f, k), &toy_deriv(g, k + 4), cap) {
            toy_add(&mut out, e, C64::new(0.0, -1.0) * c);
        }
    }
    out
}

fn toy_degree(e: &[u8; 8]) -> u32 {
    e.iter().map(|&x| x as u32).sum()
}

fn toy_sap(e: &[u8; 8]) -> bool {
    // Slots of ±1 are 1, 2 and of ±2 are 0, 3.
    e[1] + e[2] == e[5] + e[6] && e[0] + e[3] == e[4] + e[7]
}

/// Direct Lie-series normal form: at each degree, solve the homological equation and apply
/// `exp(ad_χ)` term by term.
fn toy_normal_form(h: &Toy, p: &MediumParams, order: u32) -> Toy {
    let om: Vec<f64> = TOY_MODES
        .iter()
        .map(|&k| {
            let xi = k as f64;
            let w = (xi.abs() * (p.g + p.kappa * xi * xi + 0.25 * p.gamma * p.gamma / xi.abs())).sqrt();
            w + 0.5 * p.gamma * xi.signum()
        })
        .collect();
    let cap = order + 2;
    let mut cur: Toy = h.iter().filter(|(e, _)| toy_degree(e) <= cap).map(|(e, c)| (*e, *c)).collect();
    for step in 1..=order {
        let d = step + 2;
        let mut chi = Toy::new();
        for (e, c) in &cur {
            if toy_degree(e) == d && !toy_sap(e) && c.norm() > 0.0 {
                let div: f64 = (0..4).map(|k| (e[k] as f64 - e[k + 4] as f64) * om[k]).sum();
                chi.insert(*e, c / (C64::new(0.0, 1.0) * div));
            }
        }
        let mut term = cur.clone();
        let mut total = cur.clone();
        for k in 1.. {
            term = toy_bracket(&chi, &term, cap);
            for v in term.values_mut() {
                *v /= k as f64;
            }
            term.retain(|_, v| v.norm() > 0.0);
            if term.is_empty() {
                break;
            }
            for (e, c) in &term {
                toy_add(&mut total, *e, *c);
            }
        }
        cur = total;
    }
    cur
}

#[test]
fn criterion_08_birkhoff_engine() {
    let t0 = Instant::now();
    let p = nonresonant();
    let order = 2;
    let mut worst_toy = 0.0_f64;
    for seed in 0..3 {
        let h = PolyHamiltonian::quadratic(&p, 2)
            .add(&random::hamiltonian(2, &[3, 4], 0.6, 0.5, &mut random::seeded(500 + seed)))
            .unwrap();
        let lib = normal_form(&h, &p, &NormalFormOptions::new(order)).unwrap();
        let ours = toy_from(&lib.hamiltonian.degree_range(0, order + 2));
        let oracle = toy_normal_form(&toy_from(&h), &p, order);
        let mut keys: std::collections::BTreeSet<[u8; 8]> = ours.keys().copied().collect();
        keys.extend(oracle.keys().copied());
        for e in keys {
            let a = ours.get(&e).copied().unwrap_or_default();
            let b = oracle.get(&e).copied().unwrap_or_default();
            worst_toy = worst_toy.max((a - b).norm());
        }
    }
    println!("criterion 8: toy vs direct Lie series {worst_toy:e}");
    assert!(worst_toy < 1e-10);

    let box_j = 4;
    let m = TruncatedModel::build(&p, box_j).unwrap();
    let nf = normal_form(&m.hamiltonian, &p, &NormalFormOptions::new(order)).unwrap();
    let low = nf.hamiltonian.degree_range(0, 4);
    let mut non_sap = 0.0_f64;
    for (idx, c) in low.iter() {
        let e = |k: i32, s: Side| idx.exponent(Coord::new(k, s));
        let sap = (1..=box_j as i32)
            .all(|n| e(n, Side::Plus) + e(-n, Side::Plus) == e(n, Side::Minus) + e(-n, Side::Minus));
        if !sap {
            non_sap = non_sap.max(c.norm());
        }
    }
    let bracket = (1..=box_j)
        .map(|n| PolyHamiltonian::superaction(box_j, n).poisson(&low).unwrap().max_abs())
        .fold(0.0, f64::max);
    println!("criterion 8: water waves N=2 J=4 non-SAP {non_sap:e}, super-action brackets {bracket:e}");
    assert!(non_sap < 1e-10);
    assert!(bracket < 1e-10);
    budget(t0, 120);
}

#[test]
fn criterion_09_gradient_checks() {
    let t0 = Instant::now();
    let box_j = 4;
    let m = TruncatedModel::build(&nonresonant(), box_j).unwrap();
    let x = m.vector_field();
    let mut worst = 0.0_f64;
    for seed in 0..3 {
        let z = State::random(box_j, 0.4, &mut random::seeded(600 + seed));
        let val = x.eval_state(&z);
        let h = 1e-5;
        for k in modes(box_j) {
            let bump = |d: C64| {
                let mut w = z.clone();
                w.set(k, z.get(k) + d);
                m.hamiltonian.evaluate(&w).unwrap()
            };
            let dre = (bump(C64::new(h, 0.0)) - bump(C64::new(-h, 0.0))) / (2.0 * h);
            let dim = (bump(C64::new(0.0, h)) - bump(C64::new(0.0, -h))) / (2.0 * h);
            let fd = C64::new(0.0, -0.5) * C64::new(dre, dim);
            let an = val[Coord::plus(k).dense_index(box_j)];
            worst = worst.max((fd - an).norm() / an.norm());
        }
    }
    println!("criterion 9: worst relative error {worst:e}");
    assert!(worst < 1e-6);
    budget(t0, 30);
}

#[test]
fn criterion_10_dn_oracle() {
    let t0 = Instant::now();
    let p = MediumParams::new(1.0, 0.5, 1.0, Depth::Finite(1.0)).unwrap();
    let o = StripOracle::new(256, 128, 1.0);
    let cases = [
        (real_field(&[(2, C64::new(0.2, -0.1))]), real_field(&[(1, C64::new(0.8, 0.3))])),
        (real_field(&[(4, C64::new(0.1, 0.1))]), real_field(&[(2, C64::new(-0.3, 0.6))])),
        (
            real_field(&[(1, C64::new(0.1, 0.05)), (3, C64::new(-0.07, 0.02)), (4, C64::new(0.03, 0.04))]),
            real_field(&[(1, C64::new(0.5, -0.2)), (2, C64::new(0.3, 0.4)), (4, C64::new(-0.2, 0.1))]),
        ),
    ];
    let mut worst = 0.0_f64;
    for (eta, psi) in &cases {
        let e = dn_expand(&p, eta, psi, 1, 4).unwrap();
        let g1: BTreeMap<i32, C64> = e.pieces[1].iter().copied().collect();
        let ours: C64 = psi.iter().map(|(j, c)| c * g1.get(&-j).copied().unwrap_or_default()).sum();
        let s = o.synthesize(psi);
        let [_, g1_strip, _] = o.dn_orders(&o.synthesize(eta), &s);
        let theirs = o.integrate(&s, &g1_strip);
        worst = worst.max((ours.re - theirs).abs() / theirs.abs());
        assert!(ours.im.abs() < 1e-12 * ours.re.abs().max(1.0));
    }
    println!("criterion 10: worst relative error {worst:e}");
    assert!(worst < 1e-4);
    budget(t0, 60);
}

#[test]
fn criterion_11_integrator() {
    let t0 = Instant::now();
    let box_j = 4;
    let m = TruncatedModel::build(&nonresonant(), box_j).unwrap();
    let int = MidpointIntegrator::new(&m.hamiltonian);

    let z0 = initial_direction(box_j, 3).scaled(0.15);
    let dt = 0.2 / int.max_omega();
    let a = int.integrate(&z0, dt, 4.0, 1).unwrap().energy_drift();
    let b = int.integrate(&z0, 0.5 * dt, 4.0, 1).unwrap().energy_drift();
    let ratio = a / b;

    let z1 = initial_direction(box_j, 4).scaled(0.2);
    let mom = int.integrate(&z1, dt, 10.0, 1).unwrap().momentum_drift();

    let z2 = initial_direction(box_j, 5).scaled(0.2);
    let mut z = z2.clone();
    for _ in 0..300 {
        int.step(&mut z, dt).unwrap();
    }
    for _ in 0..300 {
        int.step(&mut z, -dt).unwrap();
    }
    let back = z.max_diff(&z2);
    println!("criterion 11: energy ratio {ratio:.3}, momentum drift {mom:e}, reversibility {back:e}");
    assert!((ratio / 4.0 - 1.0).abs() <= 0.25);
    assert!(mom < 1e-10);
    assert!(back <= 10.0 * INNER_TOL * z2.norm());
    budget(t0, 60);
}

#[test]
fn criterion_12_superaction_drift_scaling() {
    let t0 = Instant::now();
    let p = nonresonant();
    let box_j = 4;
    let m = TruncatedModel::build(&p, box_j).unwrap();
    let max_omega = (1..=box_j as i32).flat_map(|j| [j, -j]).map(|j| big_omega(&p, j).unwrap().abs()).fold(0.0, f64::max);
    let opts = DriftOptions {
        order: 1,
        eps: 1e-2,
        horizon: 50.0 / omega(&p, 1).unwrap(),
        dt: 0.2 / max_omega,
        seed: 1,
        tau: 6.0,
        sample_every: 1,
    };
    let r = drift_experiment(&m, &opts).unwrap();
    assert_eq!(r.eps, [1e-2, 5e-3]);
    println!("criterion 12: pre-normal-form ratio {:.3}, post N=1 ratio {:.3}", r.pre.ratio, r.post.ratio);
    assert!((5.6..=10.4).contains(&r.pre.ratio));
    assert!((11.2..=20.8).contains(&r.post.ratio));
    budget(t0, 300);
}
