//! Measurement-conditioned iteration and its asymptotics.
//!
//! One cycle evolves the register, measures the designated qubit, and keeps
//! only the runs with the chosen outcome. On the surviving factor that is
//! the map
//!
//! `ρ(n) = Vⁿ ρ₀ (V†)ⁿ / P(n)`, `P(n) = Tr[Vⁿ ρ₀ (V†)ⁿ]`,
//!
//! where V is the projected one-cycle operator and P(n) the probability
//! that all n measurements came out right. [`iterate`] produces that
//! trajectory step by step; [`predict_asymptotics`] reads the same story
//! off the dual system of V instead: writing `Vⁿ = Σ λₖⁿ |uₖ)(vₖ|`, a
//! nondegenerate leading eigenvalue gives
//!
//! `ρ(n) → |u₀)(u₀|`, `P(n) → |λ₀|²ⁿ (v₀|ρ₀|v₀)`,
//!
//! with corrections shrinking like powers of the gap ratio `|λ₁/λ₀|`. The
//! two routes are independent enough that [`crosscheck`] comparing them on
//! the tail of a trajectory is a real test of both.

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Error;
use crate::linalg::{eig_biorthogonal_with, ComplexMatrix, ComplexVector};
use crate::models::ModelConfig;
use crate::quantum::DensityMatrix;
use crate::tolerances::Tolerances;

/// How far to iterate and what to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IterationPlan {
    /// Number of kept measurement cycles to simulate.
    pub n_max: usize,
    /// Store the conditioned state at every step, not just its summaries.
    pub record_states: bool,
}

/// One point of a conditioned trajectory.
#[derive(Clone, Debug)]
pub struct TrajectoryStep {
    pub n: usize,
    /// Cumulative success probability P(n).
    pub probability: f64,
    /// Overlap of the conditioned state with the target, `(t|ρ(n)|t)`.
    pub fidelity: f64,
    /// `Tr ρ(n)²`.
    pub purity: f64,
    /// The conditioned state itself, when the plan asked for it.
    pub state: Option<DensityMatrix>,
}

/// A conditioned trajectory, possibly cut short by yield underflow.
#[derive(Clone, Debug)]
pub struct PurificationTrajectory {
    /// Steps `n = 0, 1, …`; index equals `n` while the run survives.
    pub steps: Vec<TrajectoryStep>,
    /// `Some(n)` when P(n) fell below the yield floor and iteration
    /// stopped; the recorded steps end at `n − 1`.
    pub truncated_at: Option<usize>,
}

impl PurificationTrajectory {
    pub fn last(&self) -> &TrajectoryStep {
        self.steps.last().expect("trajectory always holds step 0")
    }
}

fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = m.clone();
    let dag = m.dagger();
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            out[(i, j)] = (out[(i, j)] + dag[(i, j)]) * Complex64::new(0.5, 0.0);
        }
    }
    out
}

fn overlap(state: &ComplexMatrix, t: &ComplexVector) -> f64 {
    t.dot(&state.apply(t)).re.clamp(0.0, 1.0)
}

fn purity_of(state: &ComplexMatrix) -> f64 {
    (state * state).trace().re.clamp(0.0, 1.0)
}

/// Runs the conditioned iteration for `plan.n_max` kept cycles.
///
/// `target` is the state fidelities are measured against; it must be unit
/// norm. The conditioned state is renormalized every step and the success
/// probability accumulated separately, so P(n) is exact down to the yield
/// floor rather than the underflow threshold of a single trace.
pub fn iterate(
    v: &ComplexMatrix,
    rho0: &DensityMatrix,
    target: &ComplexVector,
    plan: &IterationPlan,
    tol: &Tolerances,
) -> Result<PurificationTrajectory, Error> {
    if v.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            got: rho0.dim(),
        });
    }
    if target.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            got: target.dim(),
        });
    }
    if (target.norm() - 1.0).abs() > tol.unit_norm {
        return Err(Error::InvalidState("fidelity target must be unit norm"));
    }

    let vd = v.dagger();
    let mut state = rho0.mat().clone();
    let mut prob = 1.0f64;
    let mut steps = Vec::with_capacity(plan.n_max + 1);
    let push = |steps: &mut Vec<TrajectoryStep>, n: usize, prob: f64, state: &ComplexMatrix| {
        steps.push(TrajectoryStep {
            n,
            probability: prob,
            fidelity: overlap(state, target),
            purity: purity_of(state),
            state: if plan.record_states {
                Some(DensityMatrix::from_trusted(state.clone()))
            } else {
                None
            },
        });
    };
    push(&mut steps, 0, prob, &state);

    let mut truncated_at = None;
    for n in 1..=plan.n_max {
        let next = &(v * &state) * &vd;
        let p_step = next.trace().re;
        let p_new = prob * p_step.max(0.0);
        if p_new <= tol.yield_floor {
            truncated_at = Some(n);
            break;
        }
        state = hermitize(&next.scale(Complex64::new(1.0 / p_step, 0.0)));
        prob = p_new;
        push(&mut steps, n, prob, &state);
    }
    Ok(PurificationTrajectory {
        steps,
        truncated_at,
    })
}

/// The spectral side of the story: target state, leading eigenvalue, and
/// the constants of the asymptotic laws.
#[derive(Clone, Debug)]
pub struct AsymptoticPrediction {
    /// Leading right eigenvector `|u₀)`, unit norm: the purification target.
    pub target: ComplexVector,
    pub lambda0: Complex64,
    /// `(v₀|ρ₀|v₀)`: the constant in `P(n) → |λ₀|²ⁿ · prefactor`.
    pub yield_prefactor: f64,
    /// `|λ₁/λ₀|`: convergence is geometric in its square.
    pub gap_ratio: f64,
}

impl AsymptoticPrediction {
    /// `P(n)/P(n−1)` in the deep tail.
    pub fn decay_base(&self) -> f64 {
        self.lambda0.norm_sqr()
    }

    /// Predicted success probability after `n` kept cycles.
    pub fn yield_at(&self, n: u32) -> f64 {
        self.yield_prefactor * self.decay_base().powi(n as i32)
    }
}

/// Diagonalizes V and extracts the asymptotic behavior of the iteration.
///
/// Fails with [`Error::DegenerateLeading`] when the two largest eigenvalue
/// magnitudes coincide within the margin tolerance: the conditioned state
/// then keeps rotating inside the leading subspace and never settles, so
/// there is nothing to predict. A spectral radius of zero (nilpotent V)
/// fails with [`Error::NoConvergence`].
pub fn predict_asymptotics(
    v: &ComplexMatrix,
    rho0: &DensityMatrix,
    tol: &Tolerances,
) -> Result<AsymptoticPrediction, Error> {
    if v.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            got: rho0.dim(),
        });
    }
    let sd = eig_biorthogonal_with(v, tol)?;
    let lambda0 = sd.lambda0();
    if lambda0.norm() == 0.0 {
        return Err(Error::NoConvergence);
    }
    let margin = sd.leading_margin();
    if v.dim() >= 2 && margin <= tol.leading_margin {
        return Err(Error::DegenerateLeading { margin });
    }
    let v0 = sd.left_vec(0);
    let prefactor = v0.dot(&rho0.mat().apply(v0)).re.max(0.0);
    Ok(AsymptoticPrediction {
        target: sd.right_vec(0).clone(),
        lambda0,
        yield_prefactor: prefactor,
        gap_ratio: sd.gap_ratio(),
    })
}

/// Both routes for one model: spectral prediction plus simulated
/// trajectory, with fidelities measured against the predicted target.
pub fn run(
    config: &ModelConfig,
    plan: &IterationPlan,
    tol: &Tolerances,
) -> Result<(AsymptoticPrediction, PurificationTrajectory), Error> {
    let v = config.projected_v()?;
    let rho0 = config.initial_density()?;
    let pred = predict_asymptotics(&v, &rho0, tol)?;
    let traj = iterate(&v, &rho0, &pred.target, plan, tol)?;
    Ok((pred, traj))
}

/// Compares a trajectory's tail against the asymptotic laws on the window
/// `[n_last/2, n_last]`.
#[derive(Clone, Copy, Debug)]
pub struct CrosscheckReport {
    pub window: (usize, usize),
    /// `max |1 − F(n)|` over the window.
    pub max_fidelity_gap: f64,
    /// `max |P(n) − |λ₀|²ⁿ·prefactor| / P(n)` over the window.
    pub max_yield_rel_error: f64,
}

/// Audits the second half of a trajectory against `pred`.
///
/// Meaningful once the window is deep enough that `gap²ⁿ` corrections are
/// below the tolerance of interest; the caller chooses `n_max` with that
/// in mind.
pub fn crosscheck(
    traj: &PurificationTrajectory,
    pred: &AsymptoticPrediction,
) -> Result<CrosscheckReport, Error> {
    let n_last = traj.last().n;
    if n_last < 2 {
        return Err(Error::InvalidParams(
            "crosscheck needs a trajectory of at least two steps",
        ));
    }
    let lo = n_last / 2;
    let mut max_f = 0.0f64;
    let mut max_y = 0.0f64;
    for step in traj.steps.iter().filter(|s| s.n >= lo) {
        max_f = max_f.max((1.0 - step.fidelity).abs());
        let predicted = pred.yield_at(step.n as u32);
        max_y = max_y.max((step.probability - predicted).abs() / step.probability);
    }
    Ok(CrosscheckReport {
        window: (lo, n_last),
        max_fidelity_gap: max_f,
        max_yield_rel_error: max_y,
    })
}
