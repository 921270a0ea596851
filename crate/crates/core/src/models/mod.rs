//! The three concrete purification protocols.
//!
//! Each model owns a parameter record, builds its register Hamiltonian(s),
//! and produces the projected one-cycle operator `V` on the surviving
//! factor. Closed-form expressions for the matrix elements and spectra are
//! exposed alongside the numeric route (exponentiate, then project), and
//! the [`duality`] module checks one against the other at random points.
//!
//! - [`TwoQubitParams`]: qubit A measured every `τ`, qubit B purified
//!   through exchange (`g`) and counter-rotating (`h`) couplings.
//! - [`MediatorParams`]: qubits A and B pumped toward a Bell state by a
//!   measured mediator C.
//! - [`SuccessiveParams`]: probe X interacts with A, flies to B, interacts
//!   again, and is measured once per cycle.

use alloc::vec::Vec;

pub mod duality;
mod mediator;
mod successive;
mod two_qubit;

pub use duality::{run_duality, DualityOutcome, FaultInjection, Family};
pub use mediator::MediatorParams;
pub use successive::{
    lambda_target, optimal_residual, successive_symmetric_check, symmetric_target,
    OptimalityReport, SuccessiveParams, SuccessiveSymmetric,
};
pub use two_qubit::TwoQubitParams;

use crate::error::Error;
use crate::linalg::ComplexMatrix;
use crate::quantum::{DensityMatrix, RegisterLayout};

/// Which protocol a configuration drives.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelKind {
    TwoQubit(TwoQubitParams),
    Mediator(MediatorParams),
    Successive(SuccessiveParams),
}

/// Initial state of the surviving factor.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialState {
    MaximallyMixed,
    Pure(crate::linalg::ComplexVector),
    Density(DensityMatrix),
}

/// A protocol plus the initial state its iteration starts from.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelConfig {
    pub kind: ModelKind,
    pub initial: InitialState,
}

impl ModelConfig {
    pub fn new(kind: ModelKind) -> Self {
        Self {
            kind,
            initial: InitialState::MaximallyMixed,
        }
    }

    pub fn layout(&self) -> RegisterLayout {
        match &self.kind {
            ModelKind::TwoQubit(_) => two_qubit::layout(),
            ModelKind::Mediator(_) => mediator::layout(),
            ModelKind::Successive(_) => successive::layout(),
        }
    }

    /// Dimension of the factor that survives the measurement.
    pub fn target_dim(&self) -> usize {
        self.layout().target_dim()
    }

    /// The projected one-cycle operator, by the numeric route.
    pub fn projected_v(&self) -> Result<ComplexMatrix, Error> {
        match &self.kind {
            ModelKind::TwoQubit(p) => p.projected_v(),
            ModelKind::Mediator(p) => p.projected_v(),
            ModelKind::Successive(p) => p.cycle_v(),
        }
    }

    /// The initial density matrix, validated against the target dimension.
    pub fn initial_density(&self) -> Result<DensityMatrix, Error> {
        let dim = self.target_dim();
        match &self.initial {
            InitialState::MaximallyMixed => Ok(DensityMatrix::maximally_mixed(dim)),
            InitialState::Pure(v) => {
                if v.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: v.dim(),
                    });
                }
                DensityMatrix::pure(v)
            }
            InitialState::Density(d) => {
                if d.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: d.dim(),
                    });
                }
                Ok(d.clone())
            }
        }
    }

    /// Names accepted by [`set_param`](Self::set_param) for this model.
    pub fn param_names(&self) -> Vec<&'static str> {
        match &self.kind {
            ModelKind::TwoQubit(_) => {
                alloc::vec!["omega_a", "omega_b", "g", "h", "tau", "theta", "phi"]
            }
            ModelKind::Mediator(_) => alloc::vec!["omega_ab", "omega_c", "g", "h", "tau"],
            ModelKind::Successive(_) => {
                alloc::vec!["omega", "g_a", "g_b", "t_a", "t_b", "tau_a", "tau_b"]
            }
        }
    }

    /// Reads one named scalar parameter.
    pub fn param(&self, name: &str) -> Option<f64> {
        match &self.kind {
            ModelKind::TwoQubit(p) => p.param(name),
            ModelKind::Mediator(p) => p.param(name),
            ModelKind::Successive(p) => p.param(name),
        }
    }

    /// Overwrites one named scalar parameter; used by sweeps.
    pub fn set_param(&mut self, name: &str, value: f64) -> Result<(), Error> {
        match &mut self.kind {
            ModelKind::TwoQubit(p) => p.set_param(name, value),
            ModelKind::Mediator(p) => p.set_param(name, value),
            ModelKind::Successive(p) => p.set_param(name, value),
        }
    }
}
