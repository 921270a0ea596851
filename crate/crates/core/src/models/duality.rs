//! Dual-route spot checks at random parameter points.
//!
//! Every closed-form quantity in this crate has an independent numeric
//! counterpart: exponentiate the register Hamiltonian, project onto the
//! measurement outcome, and read the answer off the resulting matrix. The
//! nine [`Family`] rows each draw random parameter points and report the
//! worst disagreement between the two routes. Neither route is derived
//! from the other, so a sign or index slip in either one shows up here.
//!
//! [`FaultInjection`] deliberately corrupts one closed form so tests can
//! confirm the comparison actually has teeth.

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::linalg::{c64, eigenvalues_with, ComplexMatrix};
use crate::optimizer::{solve_optimal_condition, FreeParam, OptimalSearch};
use crate::quantum::{BellState, ProjectorSpec};
use crate::tolerances::Tolerances;

use super::successive::{lambda_target, symmetric_target};
use super::{MediatorParams, SuccessiveParams, SuccessiveSymmetric, TwoQubitParams};

/// One closed-form-versus-numeric comparison family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Two-qubit Pauli coefficient c₀ of V.
    C0,
    C1,
    C2,
    C3,
    /// Two-qubit eigenvalue pair λ±, compared as a set.
    LambdaPm,
    /// Mediator singlet eigenvalue, checked as an eigenpair identity.
    LambdaPsiMinus,
    /// Successive-protocol even-parity block, elementwise.
    MBlock,
    /// Successive-protocol odd-parity block, elementwise.
    NBlock,
    /// Distilled eigenpair at solver-found optima of the symmetric
    /// successive protocol.
    LambdaPsi,
}

impl Family {
    pub fn all() -> [Family; 9] {
        [
            Family::C0,
            Family::C1,
            Family::C2,
            Family::C3,
            Family::LambdaPm,
            Family::LambdaPsiMinus,
            Family::MBlock,
            Family::NBlock,
            Family::LambdaPsi,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::C0 => "c0",
            Family::C1 => "c1",
            Family::C2 => "c2",
            Family::C3 => "c3",
            Family::LambdaPm => "lambda_pm",
            Family::LambdaPsiMinus => "lambda_psi_minus",
            Family::MBlock => "m_block",
            Family::NBlock => "n_block",
            Family::LambdaPsi => "lambda_psi",
        }
    }

    /// Acceptance threshold on the worst residual of the family.
    pub fn tolerance(&self) -> f64 {
        match self {
            // The solver row goes through root refinement and an 8x8
            // exponential chain, so it gets one order more slack.
            Family::LambdaPsi => 1e-8,
            _ => 1e-9,
        }
    }
}

/// Deliberate closed-form corruptions for mutation-testing the comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaultInjection {
    /// Negates the closed-form c₂ before the [`Family::C2`] comparison.
    FlipC2Sign,
}

/// Worst-case result of one family's random-point comparison.
#[derive(Clone, Debug)]
pub struct DualityOutcome {
    pub family: Family,
    pub points: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn draw_two_qubit(rng: &mut ChaCha8Rng) -> TwoQubitParams {
    TwoQubitParams {
        omega_a: rng.gen_range(0.2..2.0),
        omega_b: rng.gen_range(0.2..2.0),
        g: rng.gen_range(0.0..1.0),
        h: rng.gen_range(0.0..1.0),
        tau: rng.gen_range(0.1..3.0),
        projector: ProjectorSpec::Angles {
            theta: rng.gen_range(0.0..core::f64::consts::PI),
            phi: rng.gen_range(0.0..core::f64::consts::TAU),
        },
    }
}

fn draw_mediator(rng: &mut ChaCha8Rng) -> MediatorParams {
    // Rejection keeps the normalization away from a degenerate draw.
    let (alpha, beta) = loop {
        let a = c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let b = c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n > 0.1 {
            break (a / n, b / n);
        }
    };
    MediatorParams {
        omega_ab: rng.gen_range(0.2..2.0),
        omega_c: rng.gen_range(0.2..2.5),
        g: rng.gen_range(0.0..0.8),
        h: rng.gen_range(0.0..0.8),
        tau: rng.gen_range(0.1..3.0),
        alpha,
        beta,
    }
}

fn draw_successive(rng: &mut ChaCha8Rng) -> SuccessiveParams {
    SuccessiveParams {
        omega: rng.gen_range(0.3..1.8),
        g_a: rng.gen_range(0.1..1.2),
        g_b: rng.gen_range(0.1..1.2),
        t_a: rng.gen_range(0.1..3.0),
        tau_a: rng.gen_range(0.1..3.0),
        t_b: rng.gen_range(0.1..3.0),
        tau_b: rng.gen_range(0.1..3.0),
    }
}

/// Pauli components read directly off a 2×2 matrix:
/// `V = n₀·1 + n₁σ₁ + n₂σ₂ + n₃σ₃`.
fn pauli_components(v: &ComplexMatrix) -> [Complex64; 4] {
    [
        (v[(0, 0)] + v[(1, 1)]) * c64(0.5, 0.0),
        (v[(0, 1)] + v[(1, 0)]) * c64(0.5, 0.0),
        (v[(0, 1)] - v[(1, 0)]) * c64(0.0, 0.5),
        (v[(0, 0)] - v[(1, 1)]) * c64(0.5, 0.0),
    ]
}

fn coeff_residual(
    rng: &mut ChaCha8Rng,
    k: usize,
    fault: Option<FaultInjection>,
) -> Result<f64, Error> {
    let p = draw_two_qubit(rng);
    let v = p.projected_v()?;
    let mut c = p.coeffs()?;
    if k == 2 && fault == Some(FaultInjection::FlipC2Sign) {
        c[2] = -c[2];
    }
    Ok((c[k] - pauli_components(&v)[k]).norm())
}

fn lambda_pm_residual(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<f64, Error> {
    let p = draw_two_qubit(rng);
    let lam = eigenvalues_with(&p.projected_v()?, tol)?;
    let (lp, lm) = p.lambda_pm()?;
    let d1 = (lam[0] - lp).norm().max((lam[1] - lm).norm());
    let d2 = (lam[0] - lm).norm().max((lam[1] - lp).norm());
    Ok(d1.min(d2))
}

fn lambda_psi_minus_residual(rng: &mut ChaCha8Rng) -> Result<f64, Error> {
    let p = draw_mediator(rng);
    let v = p.projected_v()?;
    let psi = BellState::PsiMinus.vector();
    let lam = p.psi_minus_eigenvalue()?;
    Ok((&v.apply(&psi) - &psi.scale(lam)).norm())
}

fn block_residual(rng: &mut ChaCha8Rng, odd: bool) -> Result<f64, Error> {
    let p = draw_successive(rng);
    let v = p.cycle_v()?;
    let (block, idx) = if odd {
        (p.block_n()?, [1usize, 2])
    } else {
        (p.block_m()?, [0usize, 3])
    };
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((block[i][j] - v[(idx[i], idx[j])]).norm());
        }
    }
    Ok(worst)
}

fn lambda_psi_residual(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<f64, Error> {
    // The solver may legitimately find nothing for an unlucky (ω, g)
    // slice; redraw rather than fail, up to a hard cap.
    for _ in 0..25 {
        let omega = rng.gen_range(0.8..1.2);
        let g = rng.gen_range(0.45..0.65);
        let search = OptimalSearch {
            base: SuccessiveSymmetric {
                omega,
                g,
                t: 0.0,
                tau: 0.0,
            },
            free: (FreeParam::T, FreeParam::Tau),
            ranges: ((0.5, 6.5), (0.5, 6.5)),
            grid: 48,
            max_roots: 4,
        };
        let points = match solve_optimal_condition(&search, tol) {
            Ok(points) => points,
            Err(Error::NoSolutionInRange) => continue,
            Err(e) => return Err(e),
        };
        let sym = points[0].params;
        let target = symmetric_target(&sym);
        let lam = lambda_target(&sym);
        let v = sym.params().cycle_v()?;
        let eig = (&v.apply(&target) - &target.scale(lam)).norm();
        return Ok(eig.max(points[0].residual));
    }
    Err(Error::NoSolutionInRange)
}

/// Runs every family at `points_per_family` random points.
///
/// Draws are deterministic in `seed` and independent across families, so
/// adding points to one row never shifts another. `fault` corrupts the
/// closed form of the row it targets and leaves the rest untouched.
pub fn run_duality(
    points_per_family: usize,
    seed: u64,
    fault: Option<FaultInjection>,
) -> Result<Vec<DualityOutcome>, Error> {
    let tol = Tolerances::DEFAULT;
    let mut out = Vec::with_capacity(9);
    for (idx, fam) in Family::all().into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(idx as u64),
        );
        let mut max_residual = 0.0f64;
        for _ in 0..points_per_family {
            let r = match fam {
                Family::C0 => coeff_residual(&mut rng, 0, fault)?,
                Family::C1 => coeff_residual(&mut rng, 1, fault)?,
                Family::C2 => coeff_residual(&mut rng, 2, fault)?,
                Family::C3 => coeff_residual(&mut rng, 3, fault)?,
                Family::LambdaPm => lambda_pm_residual(&mut rng, &tol)?,
                Family::LambdaPsiMinus => lambda_psi_minus_residual(&mut rng)?,
                Family::MBlock => block_residual(&mut rng, false)?,
                Family::NBlock => block_residual(&mut rng, true)?,
                Family::LambdaPsi => lambda_psi_residual(&mut rng, &tol)?,
            };
            max_residual = max_residual.max(r);
        }
        let tolerance = fam.tolerance();
        out.push(DualityOutcome {
            family: fam,
            points: points_per_family,
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
        });
    }
    Ok(out)
}
