//! Registers, projectors, and state bookkeeping.
//!
//! Conventions, fixed once here and relied on everywhere:
//! - Spin up `|↑⟩` is basis index 0, so `σ₃ = diag(1, -1)` and
//!   `σ₊|↓⟩ = |↑⟩`.
//! - Registers are big-endian kron chains: qubit 0 is the most significant
//!   bit of a basis index. Models place the measured ancilla at qubit 0,
//!   but [`project_measured`] accepts any position.
//! - The measured-qubit state is
//!   `|φ⟩ = cos(θ/2) e^{-iφ/2} |↑⟩ + sin(θ/2) e^{iφ/2} |↓⟩`, and explicit
//!   amplitudes must be unit-norm.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Error;
use crate::linalg::{c64, eigenvalues, eigh_with, ComplexMatrix, ComplexVector};
use crate::tolerances::Tolerances;

/// Single-qubit operators placeable on a register.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
    /// Raising operator `σ₊ = (σ₁ + iσ₂)/2`.
    Plus,
    /// Lowering operator `σ₋ = (σ₁ - iσ₂)/2`.
    Minus,
}

impl Pauli {
    pub fn matrix(self) -> ComplexMatrix {
        let (a, b, c, d) = match self {
            Pauli::X => (c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)),
            Pauli::Y => (c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, 1.0), c64(0.0, 0.0)),
            Pauli::Z => (c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)),
            Pauli::Plus => (c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)),
            Pauli::Minus => (c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)),
        };
        ComplexMatrix::from_rows(&[&[a, b], &[c, d]]).unwrap()
    }
}

/// A register of up to three qubits with one designated measured factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    n_qubits: usize,
    measured: usize,
}

/// Most qubits a register may hold.
pub const MAX_QUBITS: usize = 3;

impl RegisterLayout {
    pub fn new(n_qubits: usize, measured: usize) -> Result<Self, Error> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::UnsupportedDimension {
                dim: n_qubits,
                max: MAX_QUBITS,
            });
        }
        if measured >= n_qubits {
            return Err(Error::IndexOutOfRange {
                index: measured,
                len: n_qubits,
            });
        }
        Ok(Self { n_qubits, measured })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn measured(&self) -> usize {
        self.measured
    }

    /// Full register dimension `2^n`.
    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// Dimension of the surviving (unmeasured) factor.
    pub fn target_dim(&self) -> usize {
        1 << (self.n_qubits - 1)
    }

    /// Unmeasured qubits in ascending label order.
    pub fn target_qubits(&self) -> Vec<usize> {
        (0..self.n_qubits).filter(|&q| q != self.measured).collect()
    }

    /// Bit of `index` belonging to `qubit` (big-endian).
    /// Full-register index with measured bit `s` and target-factor index
    /// `r` (target bits keep their relative order).
    fn compose(&self, s: usize, r: usize) -> usize {
        let mut idx = 0usize;
        let mut r_bits = self.n_qubits - 1;
        for q in 0..self.n_qubits {
            let b = if q == self.measured {
                s
            } else {
                r_bits -= 1;
                (r >> r_bits) & 1
            };
            idx = (idx << 1) | b;
        }
        idx
    }
}

/// Measured-qubit state, either Bloch angles or explicit amplitudes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProjectorSpec {
    /// `|φ⟩ = cos(θ/2) e^{-iφ/2} |↑⟩ + sin(θ/2) e^{iφ/2} |↓⟩`.
    Angles { theta: f64, phi: f64 },
    /// Explicit `(⟨↑|φ⟩, ⟨↓|φ⟩)`; must be unit norm.
    Amplitudes { up: Complex64, down: Complex64 },
}

impl ProjectorSpec {
    pub fn up() -> Self {
        ProjectorSpec::Angles { theta: 0.0, phi: 0.0 }
    }

    /// The pair `(⟨↑|φ⟩, ⟨↓|φ⟩)`, validated.
    pub fn amplitudes(&self) -> Result<(Complex64, Complex64), Error> {
        self.amplitudes_with(&Tolerances::DEFAULT)
    }

    pub fn amplitudes_with(&self, tol: &Tolerances) -> Result<(Complex64, Complex64), Error> {
        match *self {
            ProjectorSpec::Angles { theta, phi } => {
                if !theta.is_finite() || !phi.is_finite() {
                    return Err(Error::InvalidState("projector angles must be finite"));
                }
                let up = Complex64::from_polar((theta / 2.0).cos(), -phi / 2.0);
                let down = Complex64::from_polar((theta / 2.0).sin(), phi / 2.0);
                Ok((up, down))
            }
            ProjectorSpec::Amplitudes { up, down } => {
                let n2 = up.norm_sqr() + down.norm_sqr();
                if !n2.is_finite() || (n2.sqrt() - 1.0).abs() > tol.unit_norm {
                    return Err(Error::InvalidState("projector amplitudes must be unit norm"));
                }
                Ok((up, down))
            }
        }
    }

    /// Bloch angles `(θ, φ)` of the projector state.
    pub fn angles(&self) -> Result<(f64, f64), Error> {
        match *self {
            ProjectorSpec::Angles { theta, phi } => {
                if !theta.is_finite() || !phi.is_finite() {
                    return Err(Error::InvalidState("projector angles must be finite"));
                }
                Ok((theta, phi))
            }
            ProjectorSpec::Amplitudes { .. } => {
                let (up, down) = self.amplitudes()?;
                let theta = 2.0 * down.norm().atan2(up.norm());
                let phi = down.arg() - up.arg();
                Ok((theta, phi))
            }
        }
    }

    pub fn state(&self) -> Result<ComplexVector, Error> {
        let (up, down) = self.amplitudes()?;
        Ok(ComplexVector::from_slice(&[up, down]))
    }
}

/// Places a single-qubit operator on one register qubit (identity on the
/// rest).
pub fn pauli_on(layout: &RegisterLayout, qubit: usize, p: Pauli) -> Result<ComplexMatrix, Error> {
    if qubit >= layout.n_qubits() {
        return Err(Error::IndexOutOfRange {
            index: qubit,
            len: layout.n_qubits(),
        });
    }
    let mut m = ComplexMatrix::identity(1);
    for q in 0..layout.n_qubits() {
        let factor = if q == qubit {
            p.matrix()
        } else {
            ComplexMatrix::identity(2)
        };
        m = m.kron(&factor);
    }
    Ok(m)
}

/// Projects a full-register operator onto the measured qubit's state:
/// `V[r][r'] = Σ_{s,s'} conj(φ_s) φ_{s'} U[(s,r)][(s',r')]`.
///
/// This is the object the whole crate revolves around: conditioned on the
/// measured qubit being found in `|φ⟩` both before and after evolution,
/// the surviving factor evolves by `V`, a contraction rather than a
/// unitary.
pub fn project_measured(
    u: &ComplexMatrix,
    layout: &RegisterLayout,
    projector: &ProjectorSpec,
) -> Result<ComplexMatrix, Error> {
    if u.dim() != layout.dim() {
        return Err(Error::DimensionMismatch {
            expected: layout.dim(),
            got: u.dim(),
        });
    }
    let (up, down) = projector.amplitudes()?;
    let amps = [up, down];
    let td = layout.target_dim();
    let mut v = ComplexMatrix::zeros(td);
    for r in 0..td {
        for rp in 0..td {
            let mut acc = c64(0.0, 0.0);
            for (s, a) in amps.iter().enumerate() {
                for (sp, b) in amps.iter().enumerate() {
                    acc += a.conj() * b * u[(layout.compose(s, r), layout.compose(sp, rp))];
                }
            }
            v[(r, rp)] = acc;
        }
    }
    Ok(v)
}

/// The two-qubit Bell states on a 4-dimensional target factor (first
/// target qubit most significant).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub fn vector(self) -> ComplexVector {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let (i, j, sign) = match self {
            BellState::PhiPlus => (0, 3, 1.0),
            BellState::PhiMinus => (0, 3, -1.0),
            BellState::PsiPlus => (1, 2, 1.0),
            BellState::PsiMinus => (1, 2, -1.0),
        };
        let mut v = ComplexVector::zeros(4);
        v[i] = c64(s, 0.0);
        v[j] = c64(sign * s, 0.0);
        v
    }
}

/// Validated density matrix: Hermitian, unit trace, positive up to a small
/// negative eigenvalue floor.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self, Error> {
        Self::new_with(mat, &Tolerances::DEFAULT)
    }

    pub fn new_with(mat: ComplexMatrix, tol: &Tolerances) -> Result<Self, Error> {
        let defect = mat.hermiticity_defect();
        if defect > tol.density_hermitian {
            return Err(Error::InvalidDensity {
                what: "not Hermitian",
                value: defect,
            });
        }
        let tr = mat.trace();
        let tr_dev = (tr - c64(1.0, 0.0)).norm();
        if tr_dev > tol.density_trace {
            return Err(Error::InvalidDensity {
                what: "trace differs from one",
                value: tr_dev,
            });
        }
        let eig = eigh_with(&mat, tol)?;
        let min_eig = eig.values.first().copied().unwrap_or(0.0);
        if min_eig < tol.density_eigen_floor {
            return Err(Error::InvalidDensity {
                what: "negative eigenvalue",
                value: min_eig,
            });
        }
        Ok(Self { mat })
    }

    /// Construction for internally generated states that are Hermitian and
    /// unit trace by construction (renormalized conjugation products).
    pub(crate) fn from_trusted(mat: ComplexMatrix) -> Self {
        Self { mat }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let m = ComplexMatrix::identity(dim).scale(c64(1.0 / dim as f64, 0.0));
        Self { mat: m }
    }

    pub fn pure(state: &ComplexVector) -> Result<Self, Error> {
        Self::pure_with(state, &Tolerances::DEFAULT)
    }

    pub fn pure_with(state: &ComplexVector, tol: &Tolerances) -> Result<Self, Error> {
        if (state.norm() - 1.0).abs() > tol.unit_norm {
            return Err(Error::InvalidState("pure state must be unit norm"));
        }
        Ok(Self {
            mat: state.outer(state),
        })
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// `⟨s|ρ|s⟩`, clamped to `[0, 1]`.
    pub fn fidelity_to(&self, state: &ComplexVector) -> f64 {
        let f = state.dot(&self.mat.apply(state)).re;
        f.clamp(0.0, 1.0)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        let p = (&self.mat * &self.mat).trace().re;
        p.clamp(0.0, 1.0)
    }
}

/// Wootters concurrence of a two-qubit density matrix.
///
/// Uses the spectrum of `ρ·ρ̃` with `ρ̃ = (σ₂⊗σ₂) ρ* (σ₂⊗σ₂)`: the
/// eigenvalues are real and non-negative, and the concurrence is
/// `max(0, √μ₁ - √μ₂ - √μ₃ - √μ₄)` with `μ` sorted descending.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64, Error> {
    if rho.dim() != 4 {
        return Err(Error::UnsupportedDimension {
            dim: rho.dim(),
            max: 4,
        });
    }
    let layout = RegisterLayout::new(2, 0)?;
    let yy = &pauli_on(&layout, 0, Pauli::Y)? * &pauli_on(&layout, 1, Pauli::Y)?;
    let rho_tilde = &(&yy * &rho.mat().conj()) * &yy;
    let m = &rho.mat().clone() * &rho_tilde;
    let lam = eigenvalues(&m)?;
    let mut mu: Vec<f64> = lam.iter().map(|z| z.re.max(0.0).sqrt()).collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).max(0.0))
}
