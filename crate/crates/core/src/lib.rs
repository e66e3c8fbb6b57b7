//! Finite-dimensional laboratory for Birkhoff normal forms of gravity-capillary
//! water waves with constant vorticity.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod birkhoff;
pub mod coords;
pub mod darboux;
pub mod error;
pub mod lab;
pub mod medium;
pub mod plurimap;
pub mod polyham;
pub mod random;
pub mod resonance;
pub mod wwmodel;

pub use coords::{Coord, Side};
pub use error::{LabError, Result};
pub use medium::{Depth, DispersionSample, MediumParams};
pub use num_complex::Complex64 as C64;
pub use plurimap::{OpPoly, PluriMap, TauField};
pub use polyham::{FourierField, Poly, PolyHamiltonian, State};
pub use resonance::{Certificate, DivisorRecord, MultiIndex};
pub use birkhoff::{normal_form, NormalFormOptions, NormalFormResult};
pub use darboux::{corrector, DarbouxProblem, DarbouxSolution, Gauge};
pub use lab::{drift_experiment, integrate, DriftReport, RunConfig, TrajectoryLog};
pub use wwmodel::TruncatedModel;
