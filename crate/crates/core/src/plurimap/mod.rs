//! Pluri-homogeneous maps on the truncated phase space: composition, transpose,
//! approximate inverses and flows, differential forms, symplecticity checks.

pub mod forms;
mod op;
mod text;
mod tpoly;

pub use op::OpPoly;
pub use tpoly::{substitute_t, TPoly, TauOp};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::coords::Coord;
use crate::error::{LabError, Result};
use crate::polyham::{FourierField, PolyHamiltonian, State};

/// A homogeneous graded piece: an [`OpPoly`] whose entries share one degree.
pub type HomMap = OpPoly;

/// Tolerance for invariant checks relative to the largest coefficient.
pub const INVARIANT_TOL: f64 = 1e-10;

/// `U ↦ L U + M(U) U` with an optional constant linear part `L`
/// and nonlinear operator pieces `M` of degrees `≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PluriMap {
    box_j: u32,
    linear: Option<OpPoly>,
    nonlin: OpPoly,
}

impl PluriMap {
    pub fn identity(box_j: u32) -> Self {
        PluriMap { box_j, linear: Some(OpPoly::identity(box_j)), nonlin: OpPoly::zero(box_j) }
    }

    /// `Id + M`.
    pub fn identity_plus(nonlin: OpPoly) -> Result<Self> {
        let box_j = nonlin.box_j();
        PluriMap::new(box_j, Some(OpPoly::identity(box_j)), nonlin)
    }

    /// Pure nonlinear map `M(U)U`.
    pub fn nonlinear(nonlin: OpPoly) -> Result<Self> {
        let box_j = nonlin.box_j();
        PluriMap::new(box_j, None, nonlin)
    }

    pub fn new(box_j: u32, linear: Option<OpPoly>, nonlin: OpPoly) -> Result<Self> {
        if nonlin.box_j() != box_j {
            return Err(LabError::BoxMismatch(box_j, nonlin.box_j()));
        }
        if nonlin.min_degree() == Some(0) {
            return Err(LabError::Invalid("nonlinear part has a degree-0 entry".into()));
        }
        if let Some(l) = &linear {
            if l.box_j() != box_j {
                return Err(LabError::BoxMismatch(box_j, l.box_j()));
            }
            if l.max_degree().is_some_and(|d| d > 0) {
                return Err(LabError::Invalid("linear part must be constant".into()));
            }
        }
        Ok(PluriMap { box_j, linear, nonlin })
    }

    pub fn box_j(&self) -> u32 {
        self.box_j
    }

    pub fn linear(&self) -> Option<&OpPoly> {
        self.linear.as_ref()
    }

    pub fn nonlin(&self) -> &OpPoly {
        &self.nonlin
    }

    pub fn has_identity(&self) -> bool {
        self.linear.as_ref().is_some_and(|l| *l == OpPoly::identity(self.box_j))
    }

    /// Homogeneous piece of operator degree `p`.
    pub fn piece(&self, p: u32) -> HomMap {
        if p == 0 {
            self.linear.clone().unwrap_or_else(|| OpPoly::zero(self.box_j))
        } else {
            self.nonlin.degree_piece(p)
        }
    }

    /// Lowest nonlinear degree, if any.
    pub fn lowest_degree(&self) -> Option<u32> {
        self.nonlin.min_degree()
    }

    pub fn max_degree(&self) -> u32 {
        self.nonlin.max_degree().unwrap_or(0)
    }

    /// `L + M(U)` as one operator polynomial.
    pub fn full_operator(&self) -> OpPoly {
        match &self.linear {
            Some(l) => l.add(&self.nonlin),
            None => self.nonlin.clone(),
        }
    }

    /// The vector polynomial `U ↦ (L + M(U))U`.
    pub fn as_field(&self) -> FourierField {
        self.full_operator().apply_identity()
    }

    /// Evaluates at a dense coordinate vector.
    pub fn apply(&self, u: &[C64]) -> Vec<C64> {
        self.full_operator().eval_apply(u, u)
    }

    /// Evaluates the nonlinear part `M(U)U` only.
    pub fn apply_nonlinear(&self, u: &[C64]) -> Vec<C64> {
        self.nonlin.eval_apply(u, u)
    }

    /// Evaluates on a real-to-real state and returns the `+` block as a state.
    pub fn apply_state(&self, z: &State) -> State {
        State::from_coords(self.box_j, &self.apply(&z.to_coords(self.box_j)))
    }

    /// `self ∘ other` truncated at operator degree `n`:
    /// `(L + M(φ'(U)))·(L' + M'(U))` with `φ'(U) = (L' + M'(U))U`.
    pub fn compose(&self, other: &PluriMap, n: u32) -> Result<PluriMap> {
        if self.box_j != other.box_j {
            return Err(LabError::BoxMismatch(self.box_j, other.box_j));
        }
        let inner = other.as_field();
        let outer = self.nonlin.substitute(&inner, n);
        let outer_full = match &self.linear {
            Some(l) => l.add(&outer),
            None => outer,
        };
        let prod = outer_full.mul_capped(&other.full_operator(), Some(n));
        let linear = match (&self.linear, &other.linear) {
            (Some(a), Some(b)) => Some(a.mul(b)),
            _ => None,
        };
        let nonlin = prod.degree_range(1, n);
        let out = PluriMap::new(self.box_j, linear, nonlin)?;
        debug_assert!(!(self.is_valid() && other.is_valid()) || out.is_valid());
        Ok(out)
    }

    /// Approximate inverse `Φ = Id + M̆` of `Ψ = Id + M` up to degree `n`,
    /// from the fixed point `M̆ = -M(Φ(U))·(Id + M̆)`.
    pub fn approx_inverse(&self, n: u32) -> Result<PluriMap> {
        if !self.has_identity() {
            return Err(LabError::MissingIdentity);
        }
        let id = OpPoly::identity(self.box_j);
        let m = self.nonlin.degree_range(1, n);
        let mut inv = OpPoly::zero(self.box_j);
        for _ in 0..n {
            let phi = id.add(&inv).apply_identity();
            let next = m.substitute(&phi, n).mul_capped(&id.add(&inv), Some(n)).scale(C64::new(-1.0, 0.0));
            let next = next.degree_range(1, n);
            if next == inv {
                break;
            }
            inv = next;
        }
        let out = PluriMap::identity_plus(inv)?;
        debug_assert!(!self.is_valid() || out.is_valid());
        Ok(out)
    }

    /// Jacobian `dφ(U)` of the map, entries up to degree `n`.
    pub fn differential(&self, n: u32) -> OpPoly {
        OpPoly::jacobian(&self.as_field()).degree_range(0, n)
    }

    /// Momentum violations and reality defect of all pieces.
    pub fn invariant_report(&self) -> (usize, f64) {
        let f = self.full_operator();
        (f.momentum_violations(), f.reality_defect())
    }

    /// True when every piece is momentum-consistent and real-to-real.
    pub fn is_valid(&self) -> bool {
        let (m, r) = self.invariant_report();
        m == 0 && r <= INVARIANT_TOL * self.full_operator().max_abs().max(1.0)
    }

    pub fn max_abs_nonlinear(&self) -> f64 {
        self.nonlin.max_abs()
    }

    pub fn to_text(&self) -> String {
        text::map_to_text(self)
    }

    pub fn from_text(s: &str) -> Result<Self> {
        text::map_from_text(s)
    }
}

/// τ-dependent vector field `X^τ(U) = G^τ(U)U` in operator form.
#[derive(Clone, Debug, PartialEq)]
pub struct TauField {
    ops: TauOp,
}

impl TauField {
    /// Operator form given directly; entries must have degree `≥ 1`.
    pub fn from_ops(ops: TauOp) -> Result<Self> {
        if ops.coeffs().iter().any(|m| m.min_degree() == Some(0)) {
            return Err(LabError::Invalid("linear fields are not admitted in approximate flows".into()));
        }
        Ok(TauField { ops })
    }

    /// From vector fields listed by power of `τ`, via the Euler operator form.
    pub fn from_fields(box_j: u32, fields: &[FourierField]) -> Result<Self> {
        let ops = fields.iter().map(OpPoly::euler_form).collect();
        TauField::from_ops(TauOp::from_coeffs(box_j, ops))
    }

    /// Time-independent field.
    pub fn autonomous(field: &FourierField) -> Result<Self> {
        TauField::from_fields(field.box_j(), std::slice::from_ref(field))
    }

    /// Hamiltonian field of `h`.
    pub fn hamiltonian(h: &PolyHamiltonian) -> Result<Self> {
        TauField::autonomous(&h.ham_field())
    }

    pub fn ops(&self) -> &TauOp {
        &self.ops
    }

    pub fn box_j(&self) -> u32 {
        self.ops.box_j()
    }

    /// `X^τ` as a vector polynomial at numeric `τ`.
    pub fn field_at(&self, tau: f64) -> FourierField {
        self.ops.at(tau).apply_identity()
    }
}

/// Time-one map `Id + F` of the approximate flow of `x` up to degree `n`, solving
/// `∂_τ F^τ = G^τ(Φ^τ(U))·(Id + F^τ)` degree by degree with exact `τ`-integration.
pub fn approx_flow(x: &TauField, n: u32) -> Result<PluriMap> {
    PluriMap::identity_plus(approx_flow_family(x, n).at(1.0))
}

/// The whole family `F^τ` of [`approx_flow`].
pub fn approx_flow_family(x: &TauField, n: u32) -> TauOp {
    let box_j = x.box_j();
    let id = TauOp::from_coeffs(box_j, vec![OpPoly::identity(box_j)]);
    let mut f = TauOp::zero(box_j);
    for _ in 0..n {
        let disp = f.apply_identity();
        let subs = |c: Coord| {
            let mut t = TPoly::constant_in_tau(crate::polyham::Poly::coord(c));
            if let Some(d) = disp.get(&c) {
                t.add_assign_shifted(d, 0);
            }
            t
        };
        let g = x.ops().substitute(&subs, n);
        let rhs = g.mul_capped(&id.add(&f), n);
        let next = rhs.integrate();
        let next = TauOp::from_coeffs(box_j, next.coeffs().iter().map(|m| m.degree_range(1, n)).collect());
        if next == f {
            break;
        }
        f = next;
    }
    f
}

/// Outcome of [`symplectic_up_to_n`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymplecticReport {
    pub passed: bool,
    /// Largest coefficient of degree `≤ N` in `dD^T E_c dD - E_c`.
    pub defect: f64,
    /// Largest coefficient of degree `> N`.
    pub residual: f64,
}

/// Absolute threshold for the degree-`≤ N` defect.
pub const SYMPLECTIC_TOL: f64 = 1e-9;

/// Checks `[dD]^T E_c [dD] - E_c` has no coefficients of degree `≤ n`.
pub fn symplectic_up_to_n(d: &PluriMap, n: u32) -> Result<SymplecticReport> {
    if !d.has_identity() {
        return Err(LabError::MissingIdentity);
    }
    let e = OpPoly::symplectic(d.box_j());
    let dd = OpPoly::jacobian(&d.as_field());
    let t = dd.transpose().mul(&e).mul(&dd).sub(&e);
    let defect = t.max_abs_up_to(n);
    Ok(SymplecticReport { passed: defect < SYMPLECTIC_TOL, defect, residual: t.max_abs_above(n) })
}
