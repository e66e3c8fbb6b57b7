//! Symplectic correction of maps that are linearly symplectic up to a degree.
//!
//! Given `Φ(U) = B(U)U` with `B^T E_c B = E_c` up to degree `N`, a Moser-type
//! deformation builds a flow `F` with `F^*Ψ^*Ω_c = Ω_c` up to degree `N`,
//! where `Ψ = A(V)V` is the approximate inverse of `Φ`. The corrected map
//! `D = C ∘ Φ`, with `C` the approximate inverse of `F`, is symplectic up to `N`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::coords::all_coords;
use crate::error::{LabError, Result};
use crate::plurimap::forms::pullback2;
use crate::plurimap::{approx_flow, symplectic_up_to_n, OpPoly, PluriMap, SymplecticReport, TauField};
use crate::polyham::{FourierField, Poly};

/// Linear-symplecticity defect tolerance, relative to `max(1, |B|²)`.
pub const ADMISSION_TOL: f64 = 1e-10;

const HALF: C64 = C64::new(0.5, 0.0);
const NEG: C64 = C64::new(-1.0, 0.0);

/// `∇W` with `(∇W)^σ_k = ∂_{u^σ_{-k}} W`.
pub fn gradient(w: &Poly, box_j: u32) -> FourierField {
    let mut f = FourierField::zero(box_j);
    for c in all_coords(box_j) {
        f.set(c, w.derivative(c.paired()));
    }
    f
}

/// `⟨X, Y⟩_r` as a polynomial.
pub fn pairing(x: &FourierField, y: &FourierField) -> Poly {
    let mut out = Poly::zero();
    for (r, p) in x.iter() {
        let q = y.component(r.paired());
        if !q.is_zero() {
            out.add_assign(&p.mul(&q));
        }
    }
    out
}

/// First-stage choice. The Darboux equation fixes `Ỹ_0` only up to `E_c∇W̃_0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gauge {
    /// `Ỹ_0 = -½E_c G^T E_c A V`, `W̃_0 = 0`.
    Primitive,
    /// Removes the exact part of `½G^T E_c A V` through its Poincaré potential
    /// `W̃_0 = Σ_d ⟨β_d, V⟩_r/(d+1)`, so a symplectic input gives `Y ≡ 0`.
    #[default]
    Exact,
}

/// Input of the Darboux corrector.
#[derive(Clone, Debug)]
pub struct DarbouxProblem {
    map: PluriMap,
    order: u32,
    p: Option<u32>,
    a: OpPoly,
    g: OpPoly,
    inverse: PluriMap,
    admission_defect: f64,
}

impl DarbouxProblem {
    /// Admits `map = Id + M_{≤N}` after checking `B^T E_c B - E_c` vanishes up to degree `N`.
    pub fn new(map: PluriMap, order: u32) -> Result<Self> {
        if order == 0 {
            return Err(LabError::Invalid("order must be at least 1".into()));
        }
        if !map.has_identity() {
            return Err(LabError::MissingIdentity);
        }
        if map.max_degree() > order {
            return Err(LabError::NotAdmissible(format!(
                "map has degree {} above the order {order}",
                map.max_degree()
            )));
        }
        if !map.is_valid() {
            return Err(LabError::NotAdmissible("map violates reality or momentum".into()));
        }
        let box_j = map.box_j();
        let e = OpPoly::symplectic(box_j);
        let b = map.full_operator();
        let defect = b.transpose().mul_capped(&e, Some(order)).mul_capped(&b, Some(order)).sub(&e).max_abs();
        let scale = b.max_abs().powi(2).max(1.0);
        if !(defect <= ADMISSION_TOL * scale) {
            return Err(LabError::NotAdmissible(format!(
                "B^T E_c B - E_c has a coefficient {defect:e} at degree <= {order}"
            )));
        }
        let inverse = map.approx_inverse(order)?;
        let a = inverse.full_operator();
        let g = a.g_operator().degree_range(0, order);
        Ok(DarbouxProblem { p: map.lowest_degree(), map, order, a, g, inverse, admission_defect: defect })
    }

    pub fn map(&self) -> &PluriMap {
        &self.map
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn box_j(&self) -> u32 {
        self.map.box_j()
    }

    /// Lowest nonlinear degree `p`, `None` for the identity.
    pub fn lowest_degree(&self) -> Option<u32> {
        self.p
    }

    /// `Ψ = A(V)V`.
    pub fn inverse(&self) -> &PluriMap {
        &self.inverse
    }

    /// `A(V)`.
    pub fn a(&self) -> &OpPoly {
        &self.a
    }

    /// `G(V)`, with `G(V)W = dA(V)[W]V`.
    pub fn g(&self) -> &OpPoly {
        &self.g
    }

    pub fn admission_defect(&self) -> f64 {
        self.admission_defect
    }

    /// Number of recursion stages beyond the first: the least `Ā ≥ 0` with `(Ā + 2)p ≥ N + 1`.
    pub fn stage_count(&self) -> u32 {
        match self.p {
            None => 0,
            Some(p) => (self.order + 1).div_ceil(p).saturating_sub(2),
        }
    }

    fn cap(&self) -> Option<u32> {
        Some(self.order)
    }

    fn e(&self) -> OpPoly {
        OpPoly::symplectic(self.box_j())
    }

    /// `G^T E_c A`.
    pub fn gtea(&self) -> OpPoly {
        self.g.transpose().mul_capped(&self.e(), self.cap()).mul_capped(&self.a, self.cap())
    }

    /// `A^T E_c G`.
    pub fn ateg(&self) -> OpPoly {
        self.a.transpose().mul_capped(&self.e(), self.cap()).mul_capped(&self.g, self.cap())
    }

    /// `R = G^T E_c A + G^T E_c G`.
    pub fn r_operator(&self) -> OpPoly {
        let gte = self.g.transpose().mul_capped(&self.e(), self.cap());
        gte.mul_capped(&self.a, self.cap()).add(&gte.mul_capped(&self.g, self.cap()))
    }

    /// `S_{>N} = A^T E_c A - E_c`, restricted to degrees `≤ N` (zero for admitted input).
    pub fn s_low(&self) -> OpPoly {
        self.a.transpose().mul_capped(&self.e(), self.cap()).mul_capped(&self.a, self.cap()).sub(&self.e())
    }

    /// Operator of `Ψ^*Ω_c` truncated at degree `N`:
    /// `E_c + A^T E_c G + G^T E_c A + G^T E_c G + S_{>N}`.
    pub fn perturbed_operator(&self) -> OpPoly {
        self.e().add(&self.ateg()).add(&self.r_operator()).add(&self.s_low())
    }

    /// The 2-form `Ω_{≤N} = Ψ^*Ω_c` up to degree `N`.
    pub fn perturbed_tensor(&self) -> crate::plurimap::forms::TwoForm {
        crate::plurimap::forms::TwoForm::from_operator(&self.perturbed_operator())
    }

    /// Splits `A^T E_c G[X] = K(V)V` into `∇W + R̆V + M V`, with
    /// `K = A^T E_c dA[X]`, `W = ½⟨S V, V⟩_r` for `S = ½(K + K^T)`,
    /// `M = ½(K - K^T)` (degree `> N` for admitted input), and `R̆V` the leftover.
    pub fn structural_split(&self, x: &FourierField) -> StructuralSplit {
        let box_j = self.box_j();
        let da = self.a.directional(x, self.cap());
        let k = self.a.transpose().mul_capped(&self.e(), self.cap()).mul_capped(&da, self.cap());
        let kt = k.transpose();
        let s = k.add(&kt).scale(HALF);
        let m = k.sub(&kt).scale(HALF);
        let sv = s.apply_identity();
        let w = pairing(&sv, &FourierField::identity(box_j)).scale(HALF);
        let grad = gradient(&w, box_j);
        let remainder = sv.sub(&grad);
        StructuralSplit { w, gradient: grad, remainder, antisymmetric: m.apply_identity() }
    }

    /// Generator family `Y^τ = Σ_a τ^a Ỹ_a` and witnesses `W^τ = Σ_a τ^a W̃_a`.
    pub fn solve(&self) -> Result<DarbouxGenerator> {
        self.solve_with(Gauge::default())
    }

    /// [`solve`](Self::solve) with an explicit first-stage gauge.
    pub fn solve_with(&self, gauge: Gauge) -> Result<DarbouxGenerator> {
        let box_j = self.box_j();
        let e = self.e();
        let cap = self.order + 1;
        let trunc = |f: FourierField| f.truncate(cap).0;
        let beta = trunc(self.gtea().apply_identity().scale(HALF));
        let w0 = match gauge {
            Gauge::Primitive => Poly::zero(),
            Gauge::Exact => {
                let id = FourierField::identity(box_j);
                let mut w = Poly::zero();
                for d in 0..=cap {
                    w.add_assign(&pairing(&beta.degree_piece(d), &id).scale(C64::new(1.0 / (d as f64 + 1.0), 0.0)));
                }
                w
            }
        };
        let closed = beta.sub(&gradient(&w0, box_j));
        let y0 = trunc(e.apply_field(&closed, Some(cap)).scale(NEG));
        let r = self.r_operator();
        let mut diag = vec![StageDiagnostics::new(0, &y0, &w0, closed.max_abs(), 0.0)];
        let mut stages = vec![y0];
        let mut witnesses = vec![w0];
        for a in 1..=self.stage_count() {
            let prev = &stages[a as usize - 1];
            let split = self.structural_split(prev);
            let rhs = r.apply_field(prev, Some(cap)).add(&split.remainder);
            let ya = trunc(e.apply_field(&rhs, Some(cap)).scale(NEG));
            let (wa, _) = split.w.truncate(cap + 1);
            diag.push(StageDiagnostics::new(
                a,
                &ya,
                &wa,
                split.remainder.max_abs(),
                split.antisymmetric.truncate(cap).0.max_abs(),
            ));
            stages.push(ya);
            witnesses.push(wa);
        }
        let finite = stages.iter().all(|y| y.iter().all(|(_, p)| p.iter().all(|(_, v)| v.is_finite())));
        if !finite {
            return Err(LabError::NonConvergence("non-finite coefficient in Darboux stages".into()));
        }
        let field = TauField::from_fields(box_j, &stages)?;
        Ok(DarbouxGenerator { stages, witnesses, field, diagnostics: diag })
    }

    /// Largest degree-`≤ N+1` coefficient of the Darboux equation residual
    /// `E_c Y + ½G^T E_c A V + τ(R + A^T E_c G + S_{>N})Y + ½S_{>N}V - ∇W`, over all powers of `τ`.
    pub fn darboux_residual(&self, gen: &DarbouxGenerator) -> f64 {
        let box_j = self.box_j();
        let cap = self.order + 1;
        let e = self.e();
        let lin = self.r_operator().add(&self.ateg()).add(&self.s_low());
        let s_half = self.s_low().apply_identity().scale(HALF);
        let n = gen.stages.len();
        let mut worst = 0.0_f64;
        for t in 0..=n {
            let mut res = FourierField::zero(box_j);
            if t < n {
                res = res.add(&e.apply_field(&gen.stages[t], Some(cap)));
                res = res.sub(&gradient(&gen.witnesses[t], box_j));
            }
            if t == 0 {
                res = res.add(&self.gtea().apply_identity().scale(HALF)).add(&s_half);
            } else {
                res = res.add(&lin.apply_field(&gen.stages[t - 1], Some(cap)));
            }
            worst = worst.max(res.truncate(cap).0.max_abs());
        }
        worst
    }

    /// Builds the corrector and verifies the corrected map.
    pub fn corrector(&self) -> Result<DarbouxSolution> {
        self.corrector_with(Gauge::default())
    }

    /// [`corrector`](Self::corrector) with an explicit first-stage gauge.
    pub fn corrector_with(&self, gauge: Gauge) -> Result<DarbouxSolution> {
        let n = self.order;
        let box_j = self.box_j();
        let gen = self.solve_with(gauge)?;
        let flow = approx_flow(&gen.field, n)?;
        let inv_flow = flow.approx_inverse(n)?;
        let corrected = inv_flow.compose(&self.map, n)?;
        let symplectic = symplectic_up_to_n(&corrected, n)?;
        let pulled = pullback2(&flow, &self.perturbed_operator(), n);
        let pullback_residual = pulled.sub(&OpPoly::symplectic(box_j)).max_abs_up_to(n);
        let diagnostics = DarbouxDiagnostics {
            box_j,
            order: n,
            lowest_degree: self.p,
            stage_count: self.stage_count(),
            admission_defect: self.admission_defect,
            stages: gen.diagnostics.clone(),
            darboux_residual: self.darboux_residual(&gen),
            pullback_residual,
            corrector_max: inv_flow.max_abs_nonlinear(),
            symplectic,
        };
        Ok(DarbouxSolution {
            correction: inv_flow.nonlin().clone(),
            flow,
            inverse_flow: inv_flow,
            corrected,
            generator: gen,
            diagnostics,
        })
    }
}

/// Output of [`DarbouxProblem::structural_split`].
#[derive(Clone, Debug)]
pub struct StructuralSplit {
    /// `W = ½⟨S V, V⟩_r`.
    pub w: Poly,
    /// `∇W`.
    pub gradient: FourierField,
    /// `R̆V = S V - ∇W`.
    pub remainder: FourierField,
    /// `½(K - K^T)V`.
    pub antisymmetric: FourierField,
}

impl StructuralSplit {
    /// `∇W + R̆V + M V`, equal to `A^T E_c G[X]`.
    pub fn recompose(&self) -> FourierField {
        self.gradient.add(&self.remainder).add(&self.antisymmetric)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageDiagnostics {
    pub stage: u32,
    pub min_degree: Option<u32>,
    pub max_degree: Option<u32>,
    pub y_max: f64,
    pub w_max: f64,
    pub remainder_max: f64,
    pub antisymmetric_max: f64,
}

impl StageDiagnostics {
    fn new(stage: u32, y: &FourierField, w: &Poly, remainder_max: f64, antisymmetric_max: f64) -> Self {
        StageDiagnostics {
            stage,
            min_degree: y.min_degree(),
            max_degree: y.max_degree(),
            y_max: y.max_abs(),
            w_max: w.max_abs(),
            remainder_max,
            antisymmetric_max,
        }
    }
}

/// Stages `Ỹ_a` (coefficient of `τ^a`) and witnesses `W̃_a`.
#[derive(Clone, Debug)]
pub struct DarbouxGenerator {
    pub stages: Vec<FourierField>,
    pub witnesses: Vec<Poly>,
    pub field: TauField,
    pub diagnostics: Vec<StageDiagnostics>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DarbouxDiagnostics {
    pub box_j: u32,
    pub order: u32,
    pub lowest_degree: Option<u32>,
    pub stage_count: u32,
    pub admission_defect: f64,
    pub stages: Vec<StageDiagnostics>,
    /// Largest low-degree coefficient of the Darboux equation residual.
    pub darboux_residual: f64,
    /// Largest degree-`≤ N` coefficient of `F^*Ψ^*Ω_c - Ω_c`.
    pub pullback_residual: f64,
    pub corrector_max: f64,
    pub symplectic: SymplecticReport,
}

#[derive(Clone, Debug)]
pub struct DarbouxSolution {
    /// `R_{≤N}`, with `C = Id + R_{≤N}`.
    pub correction: OpPoly,
    /// `F = Id + ...`, time-one approximate flow of `Y^τ`.
    pub flow: PluriMap,
    /// `C`, the approximate inverse of `F`.
    pub inverse_flow: PluriMap,
    /// `D = C ∘ Φ`.
    pub corrected: PluriMap,
    pub generator: DarbouxGenerator,
    pub diagnostics: DarbouxDiagnostics,
}

impl DarbouxSolution {
    pub fn passed(&self) -> bool {
        self.diagnostics.symplectic.passed
    }

    /// Map text of `C` followed by the diagnostics block as `#`-prefixed JSON.
    pub fn to_text(&self) -> Result<String> {
        let mut s = self.inverse_flow.to_text();
        s.push_str("# diagnostics\n");
        for line in serde_json::to_string_pretty(&self.diagnostics)?.lines() {
            s.push_str("# ");
            s.push_str(line);
            s.push('\n');
        }
        Ok(s)
    }
}

/// Shortcut for [`DarbouxProblem::corrector`].
pub fn corrector(map: PluriMap, order: u32) -> Result<DarbouxSolution> {
    DarbouxProblem::new(map, order)?.corrector()
}

/// `Id + L + L²/2 + ...` truncated at degree `n`, with `L = E_c S` and `S` symmetric:
/// linearly symplectic up to `n`.
pub fn exp_symplectic(s: &OpPoly, n: u32) -> Result<PluriMap> {
    let box_j = s.box_j();
    let l = OpPoly::symplectic(box_j).mul_capped(s, Some(n));
    let mut term = OpPoly::identity(box_j);
    let mut sum = OpPoly::zero(box_j);
    for k in 1..=n {
        term = term.mul_capped(&l, Some(n)).scale(C64::new(1.0 / k as f64, 0.0));
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term);
    }
    PluriMap::identity_plus(sum.degree_range(1, n))
}

/// Complex form of the shear `(η, ζ) ↦ (η, ζ - Π(b·η))` with `b = strength·|D|ζ`
/// projected to the box: `Id + L` with `L² = 0` and `L = E_c S`, `S` symmetric.
pub fn good_unknown_toy(box_j: u32, strength: f64) -> Result<PluriMap> {
    use crate::coords::{modes, Coord};
    let j = box_j as i32;
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    // b_m = strength·|m|·ζ_m with ζ_m = -i(u⁺_m - u⁻_{-m})/√2.
    let b = |m: i32| -> Poly {
        if m == 0 || m.abs() > j {
            return Poly::zero();
        }
        Poly::coord(Coord::plus(m))
            .sub(&Poly::coord(Coord::minus(-m)))
            .scale(C64::new(0.0, -s2 * strength * m.abs() as f64))
    };
    let mut l = OpPoly::zero(box_j);
    for k in modes(box_j) {
        for jj in modes(box_j) {
            let bk = b(k - jj);
            if bk.is_zero() {
                continue;
            }
            // δu⁺_k = -i(bη)_k/√2, δu⁻_{-k} = +i(bη)_k/√2, η_j = (u⁺_j + u⁻_{-j})/√2.
            let plus = bk.scale(C64::new(0.0, -0.5));
            let minus = bk.scale(C64::new(0.0, 0.5));
            for col in [Coord::plus(jj), Coord::minus(-jj)] {
                l.add_entry(Coord::plus(k), col, &plus);
                l.add_entry(Coord::minus(-k), col, &minus);
            }
        }
    }
    PluriMap::identity_plus(l)
}
