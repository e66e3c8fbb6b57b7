//! Implicit-midpoint integration of `ż = -i ∂_{z̄} H`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::coords::{modes, Coord};
use crate::error::{LabError, Result};
use crate::polyham::{CompiledPoly, PolyHamiltonian, State};
use crate::resonance::MultiIndex;

/// Inner fixed-point tolerance, relative to the state size.
pub const INNER_TOL: f64 = 1e-12;

/// Largest admissible `dt · max|Ω|`.
pub const MAX_STEP_PHASE: f64 = 0.5;

const MAX_INNER: usize = 200;

/// `max_k |Ω_k|` read off the diagonal quadratic part of `h`.
pub fn max_frequency(h: &PolyHamiltonian) -> f64 {
    modes(h.box_j())
        .into_iter()
        .map(|k| {
            let m = MultiIndex::from_coords(&[Coord::plus(k), Coord::minus(k)]).expect("nonzero mode");
            h.coeff(&m).norm()
        })
        .fold(0.0, f64::max)
}

/// Compiled `+` components of the Hamiltonian field.
pub struct MidpointIntegrator {
    box_j: u32,
    field: Vec<CompiledPoly>,
    hamiltonian: CompiledPoly,
    max_omega: f64,
}

/// Sampled trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryLog {
    pub box_j: u32,
    pub times: Vec<f64>,
    pub states: Vec<State>,
    /// `superactions[i][n-1] = J_n(t_i)`.
    pub superactions: Vec<Vec<f64>>,
    pub energy: Vec<f64>,
    pub momentum: Vec<f64>,
    /// Largest number of inner iterations in a step.
    pub max_inner: usize,
}

impl TrajectoryLog {
    fn new(box_j: u32) -> Self {
        TrajectoryLog {
            box_j,
            times: Vec::new(),
            states: Vec::new(),
            superactions: Vec::new(),
            energy: Vec::new(),
            momentum: Vec::new(),
            max_inner: 0,
        }
    }

    fn push(&mut self, t: f64, z: &State, energy: f64) {
        self.times.push(t);
        self.superactions.push(z.superactions());
        self.momentum.push(z.momentum());
        self.energy.push(energy);
        self.states.push(z.clone());
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> Option<&State> {
        self.states.last()
    }

    /// `max_{t, n} |J_n(t) - J_n(0)|`.
    pub fn superaction_drift(&self) -> f64 {
        let Some(first) = self.superactions.first() else { return 0.0 };
        self.superactions
            .iter()
            .flat_map(|row| row.iter().zip(first).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
    }

    /// `max_t |H(t) - H(0)|`.
    pub fn energy_drift(&self) -> f64 {
        max_dev(&self.energy)
    }

    /// `max_t |M(t) - M(0)|`.
    pub fn momentum_drift(&self) -> f64 {
        max_dev(&self.momentum)
    }

    /// Lengths agree and times strictly increase.
    pub fn is_consistent(&self) -> bool {
        let n = self.times.len();
        [self.states.len(), self.superactions.len(), self.energy.len(), self.momentum.len()].iter().all(|&l| l == n)
            && self.times.windows(2).all(|w| w[1] > w[0])
            && self.superactions.iter().all(|r| r.len() == self.box_j as usize)
    }
}

fn max_dev(v: &[f64]) -> f64 {
    v.first().map_or(0.0, |a| v.iter().map(|b| (b - a).abs()).fold(0.0, f64::max))
}

impl MidpointIntegrator {
    pub fn new(h: &PolyHamiltonian) -> Self {
        let box_j = h.box_j();
        let x = h.ham_field();
        let field = modes(box_j).into_iter().map(|k| CompiledPoly::new(&x.component(Coord::plus(k)), box_j)).collect();
        MidpointIntegrator {
            box_j,
            field,
            hamiltonian: CompiledPoly::new(h.poly(), box_j),
            max_omega: max_frequency(h),
        }
    }

    pub fn max_omega(&self) -> f64 {
        self.max_omega
    }

    fn coords(&self, z: &[C64], u: &mut [C64]) {
        let n = z.len();
        u[..n].copy_from_slice(z);
        // The `-` block lists modes in the same order: u^-_k = conj(z_k).
        for (i, v) in z.iter().enumerate() {
            u[n + i] = v.conj();
        }
    }

    fn eval_field(&self, z: &[C64], u: &mut [C64], out: &mut [C64]) {
        self.coords(z, u);
        for (o, p) in out.iter_mut().zip(&self.field) {
            *o = p.eval(u);
        }
    }

    pub fn energy(&self, z: &State) -> f64 {
        self.hamiltonian.eval(&z.to_coords(self.box_j)).re
    }

    /// One midpoint step `z' = z + dt X((z + z')/2)`; `dt` may be negative.
    /// Returns the number of inner iterations.
    pub fn step(&self, z: &mut State, dt: f64) -> Result<usize> {
        let z0: Vec<C64> = z.amplitudes().to_vec();
        let n = z0.len();
        let mut u = vec![C64::new(0.0, 0.0); 2 * n];
        let mut f = vec![C64::new(0.0, 0.0); n];
        let mut mid = z0.clone();
        let mut next = z0.clone();
        let scale = z0.iter().fold(0.0_f64, |m, v| m.max(v.norm()));
        let mut prev_delta = f64::INFINITY;
        for it in 1..=MAX_INNER {
            self.eval_field(&mid, &mut u, &mut f);
            let mut delta = 0.0_f64;
            for i in 0..n {
                let v = z0[i] + f[i] * dt;
                delta = delta.max((v - next[i]).norm());
                next[i] = v;
                mid[i] = 0.5 * (z0[i] + v);
            }
            // Iterate to the rounding floor: stop once converged and no longer improving.
            if delta == 0.0 || (delta <= INNER_TOL * scale && delta >= 0.5 * prev_delta) {
                *z = State::from_vec(self.box_j, next).expect("same length");
                return Ok(it);
            }
            prev_delta = delta;
        }
        if prev_delta <= INNER_TOL * scale {
            *z = State::from_vec(self.box_j, next).expect("same length");
            return Ok(MAX_INNER);
        }
        Err(LabError::NonConvergence(format!("midpoint iteration stalled at {prev_delta:e}")))
    }

    /// Integrates from `z0` over `[0, t_end]` with `ceil(t_end/dt)` equal steps,
    /// sampling every `sample_every` steps and at the end.
    pub fn integrate(&self, z0: &State, dt: f64, t_end: f64, sample_every: usize) -> Result<TrajectoryLog> {
        if !(dt > 0.0 && dt.is_finite()) || !(t_end > 0.0 && t_end.is_finite()) {
            return Err(LabError::Invalid(format!("need dt > 0 and T > 0, got dt = {dt}, T = {t_end}")));
        }
        if z0.box_j() != self.box_j {
            return Err(LabError::BoxMismatch(self.box_j, z0.box_j()));
        }
        if dt * self.max_omega > MAX_STEP_PHASE {
            return Err(LabError::Invalid(format!(
                "dt·max|Ω| = {:.3} exceeds {MAX_STEP_PHASE}",
                dt * self.max_omega
            )));
        }
        let every = sample_every.max(1);
        let steps = (t_end / dt - 1e-9).ceil().max(1.0) as usize;
        let h = t_end / steps as f64;
        let mut log = TrajectoryLog::new(self.box_j);
        let mut z = z0.clone();
        log.push(0.0, &z, self.energy(&z));
        for s in 1..=steps {
            let it = self.step(&mut z, h)?;
            log.max_inner = log.max_inner.max(it);
            if s % every == 0 || s == steps {
                log.push(s as f64 * h, &z, self.energy(&z));
            }
        }
        Ok(log)
    }
}

/// `integrate(model, Z0, dt, T)` with every step sampled.
pub fn integrate(h: &PolyHamiltonian, z0: &State, dt: f64, t_end: f64) -> Result<TrajectoryLog> {
    MidpointIntegrator::new(h).integrate(z0, dt, t_end, 1)
}
