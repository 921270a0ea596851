//! Bell-pair pumping through a measured mediator.
//!
//! Qubits A and B (splitting `Ω` each) never talk directly; a mediator C
//! (splitting `ω`) couples symmetrically to both with exchange `g` and
//! counter-rotating `h` amplitudes, and is measured every `τ` in the state
//! `α|↑⟩ + β|↓⟩`. The singlet `|Ψ⁻⟩` of A and B is decoupled from C, so
//! its projected eigenvalue closes trivially:
//!
//! `λ_{Ψ⁻} = |α|² e^{-i(Ω+ω)τ} + |β|² e^{-iΩτ}`,
//!
//! which sits on the unit circle whenever `ωτ` is a multiple of 2π. The
//! rest of the spectrum lives in two 3-dimensional spin-parity sectors.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Error;
use crate::linalg::{c64, ComplexMatrix};
use crate::quantum::{pauli_on, project_measured, Pauli, ProjectorSpec, RegisterLayout};
use crate::tolerances::Tolerances;

/// Register order (C, A, B): the measured mediator is the most significant
/// factor, so target indices are `a·2 + b`.
pub(crate) fn layout() -> RegisterLayout {
    RegisterLayout::new(3, 0).expect("static layout")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MediatorParams {
    /// Common splitting `Ω` of A and B.
    pub omega_ab: f64,
    /// Mediator splitting `ω`.
    pub omega_c: f64,
    pub g: f64,
    pub h: f64,
    pub tau: f64,
    /// Measured-state amplitude on `|↑⟩`.
    pub alpha: Complex64,
    /// Measured-state amplitude on `|↓⟩`.
    pub beta: Complex64,
}

impl Default for MediatorParams {
    /// A pumping point with `ωτ = 2π`: the singlet eigenvalue is exactly
    /// unimodular.
    fn default() -> Self {
        Self {
            omega_ab: 1.0,
            omega_c: 2.0,
            g: 0.4,
            h: 0.15,
            tau: core::f64::consts::PI,
            alpha: c64(1.0, 0.0),
            beta: c64(0.0, 0.0),
        }
    }
}

impl MediatorParams {
    pub fn validate(&self) -> Result<(), Error> {
        let vals = [self.omega_ab, self.omega_c, self.g, self.h, self.tau];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("mediator parameters must be finite"));
        }
        if self.tau < 0.0 {
            return Err(Error::InvalidParams("tau must be non-negative"));
        }
        self.projector()?;
        Ok(())
    }

    pub fn projector(&self) -> Result<ProjectorSpec, Error> {
        let spec = ProjectorSpec::Amplitudes {
            up: self.alpha,
            down: self.beta,
        };
        spec.amplitudes()?;
        Ok(spec)
    }

    /// `H = (Ω/2)(1+σ₃ᴬ) + (Ω/2)(1+σ₃ᴮ) + (ω/2)(1+τ₃ᶜ)
    ///      + g(σ₊ᴬτ₋ᶜ + σ₊ᴮτ₋ᶜ + h.c.) + h(σ₊ᴬτ₊ᶜ + σ₊ᴮτ₊ᶜ + h.c.)`.
    pub fn hamiltonian(&self) -> Result<ComplexMatrix, Error> {
        self.validate()?;
        let lay = layout();
        let id = ComplexMatrix::identity(8);
        let z = |q| pauli_on(&lay, q, Pauli::Z);
        let plus = |q| pauli_on(&lay, q, Pauli::Plus);
        let minus = |q| pauli_on(&lay, q, Pauli::Minus);
        let (qc, qa, qb) = (0usize, 1usize, 2usize);

        let mut ham = (&id + &z(qa)?).scale(c64(self.omega_ab / 2.0, 0.0));
        ham = &ham + &(&id + &z(qb)?).scale(c64(self.omega_ab / 2.0, 0.0));
        ham = &ham + &(&id + &z(qc)?).scale(c64(self.omega_c / 2.0, 0.0));

        let exch = &(&(&plus(qa)? * &minus(qc)?) + &(&minus(qa)? * &plus(qc)?))
            + &(&(&plus(qb)? * &minus(qc)?) + &(&minus(qb)? * &plus(qc)?));
        ham = &ham + &exch.scale(c64(self.g, 0.0));

        let counter = &(&(&plus(qa)? * &plus(qc)?) + &(&minus(qa)? * &minus(qc)?))
            + &(&(&plus(qb)? * &plus(qc)?) + &(&minus(qb)? * &minus(qc)?));
        ham = &ham + &counter.scale(c64(self.h, 0.0));
        Ok(ham)
    }

    /// Numeric one-cycle operator on the (A, B) factor.
    pub fn projected_v(&self) -> Result<ComplexMatrix, Error> {
        let ham = self.hamiltonian()?;
        let u = crate::linalg::herm_expm(&ham, self.tau)?;
        project_measured(&u, &layout(), &self.projector()?)
    }

    /// Closed-form singlet eigenvalue of V.
    pub fn psi_minus_eigenvalue(&self) -> Result<Complex64, Error> {
        self.validate()?;
        let a2 = self.alpha.norm_sqr();
        let b2 = self.beta.norm_sqr();
        let up = Complex64::from_polar(1.0, -(self.omega_ab + self.omega_c) * self.tau);
        let down = Complex64::from_polar(1.0, -self.omega_ab * self.tau);
        Ok(up * c64(a2, 0.0) + down * c64(b2, 0.0))
    }

    /// H restricted to the even spin-parity sector, in the basis
    /// `(|Φ⁺↑⟩, |Φ⁻↑⟩, |Ψ⁺↓⟩)` (Bell state of A,B ⊗ mediator state).
    pub fn sector_even(&self) -> Result<ComplexMatrix, Error> {
        self.validate()?;
        let (om, w, g, h) = (self.omega_ab, self.omega_c, self.g, self.h);
        ComplexMatrix::from_rows(&[
            &[c64(om + w, 0.0), c64(om, 0.0), c64(g + h, 0.0)],
            &[c64(om, 0.0), c64(om + w, 0.0), c64(h - g, 0.0)],
            &[c64(g + h, 0.0), c64(h - g, 0.0), c64(om, 0.0)],
        ])
    }

    /// H restricted to the odd spin-parity sector, in the basis
    /// `(|Φ⁺↓⟩, |Φ⁻↓⟩, |Ψ⁺↑⟩)`.
    pub fn sector_odd(&self) -> Result<ComplexMatrix, Error> {
        self.validate()?;
        let (om, w, g, h) = (self.omega_ab, self.omega_c, self.g, self.h);
        ComplexMatrix::from_rows(&[
            &[c64(om, 0.0), c64(om, 0.0), c64(g + h, 0.0)],
            &[c64(om, 0.0), c64(om, 0.0), c64(g - h, 0.0)],
            &[c64(g + h, 0.0), c64(g - h, 0.0), c64(om + w, 0.0)],
        ])
    }

    pub(crate) fn param(&self, name: &str) -> Option<f64> {
        match name {
            "omega_ab" => Some(self.omega_ab),
            "omega_c" => Some(self.omega_c),
            "g" => Some(self.g),
            "h" => Some(self.h),
            "tau" => Some(self.tau),
            _ => None,
        }
    }

    pub(crate) fn set_param(&mut self, name: &str, value: f64) -> Result<(), Error> {
        match name {
            "omega_ab" => self.omega_ab = value,
            "omega_c" => self.omega_c = value,
            "g" => self.g = value,
            "h" => self.h = value,
            "tau" => self.tau = value,
            _ => return Err(Error::InvalidSweep("unknown mediator parameter")),
        }
        Ok(())
    }

    /// Other-branch contraction bound: largest `|λ|` among the numeric
    /// eigenvalues of V excluding the singlet one.
    pub fn subleading_bound(&self, tol: &Tolerances) -> Result<f64, Error> {
        let v = self.projected_v()?;
        let lam = crate::linalg::eigenvalues_with(&v, tol)?;
        let psi = self.psi_minus_eigenvalue()?;
        // Remove the eigenvalue closest to the singlet one.
        let mut best = 0usize;
        let mut dist = f64::INFINITY;
        for (k, z) in lam.iter().enumerate() {
            let d = (z - psi).norm();
            if d < dist {
                dist = d;
                best = k;
            }
        }
        Ok(lam
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != best)
            .map(|(_, z)| z.norm())
            .fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexVector;
    use crate::quantum::BellState;

    /// `|bell⟩_{AB} ⊗ |c⟩` in the (C, A, B) register: C most significant.
    fn sector_state(bell: BellState, c_up: bool) -> ComplexVector {
        let c = ComplexVector::basis(2, if c_up { 0 } else { 1 });
        c.kron(&bell.vector())
    }

    #[test]
    fn singlet_states_are_hamiltonian_eigenstates() {
        let p = MediatorParams {
            omega_ab: 0.8,
            omega_c: 1.7,
            g: 0.5,
            h: 0.3,
            tau: 1.0,
            ..MediatorParams::default()
        };
        let ham = p.hamiltonian().unwrap();
        let up = sector_state(BellState::PsiMinus, true);
        let down = sector_state(BellState::PsiMinus, false);
        // H|Ψ⁻↑⟩ = (Ω+ω)|Ψ⁻↑⟩ and H|Ψ⁻↓⟩ = Ω|Ψ⁻↓⟩: the singlet sees only
        // the free precession, with the mediator contributing ω when up.
        let r_up = (&ham.apply(&up) - &up.scale(c64(p.omega_ab + p.omega_c, 0.0))).norm();
        let r_down = (&ham.apply(&down) - &down.scale(c64(p.omega_ab, 0.0))).norm();
        assert!(r_up < 1e-13, "residual {r_up}");
        assert!(r_down < 1e-13, "residual {r_down}");
    }

    #[test]
    fn sector_matrices_match_hamiltonian_elements() {
        let p = MediatorParams {
            omega_ab: 1.1,
            omega_c: 0.6,
            g: 0.45,
            h: 0.2,
            tau: 0.9,
            ..MediatorParams::default()
        };
        let ham = p.hamiltonian().unwrap();
        let even = [
            sector_state(BellState::PhiPlus, true),
            sector_state(BellState::PhiMinus, true),
            sector_state(BellState::PsiPlus, false),
        ];
        let odd = [
            sector_state(BellState::PhiPlus, false),
            sector_state(BellState::PhiMinus, false),
            sector_state(BellState::PsiPlus, true),
        ];
        let se = p.sector_even().unwrap();
        let so = p.sector_odd().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let d_even = (even[i].dot(&ham.apply(&even[j])) - se[(i, j)]).norm();
                let d_odd = (odd[i].dot(&ham.apply(&odd[j])) - so[(i, j)]).norm();
                assert!(d_even < 1e-13);
                assert!(d_odd < 1e-13);
            }
        }
        // The two sectors do not mix.
        for e in &even {
            for o in &odd {
                assert!(e.dot(&ham.apply(o)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn singlet_eigenvalue_closed_form() {
        let p = MediatorParams {
            omega_ab: 0.9,
            omega_c: 1.4,
            g: 0.35,
            h: 0.25,
            tau: 2.2,
            alpha: c64(0.6, 0.0),
            beta: c64(0.0, 0.8),
        };
        let v = p.projected_v().unwrap();
        let psi = BellState::PsiMinus.vector();
        let closed = p.psi_minus_eigenvalue().unwrap();
        let diag = psi.dot(&v.apply(&psi));
        assert!((diag - closed).norm() < 1e-12);
        let resid = (&v.apply(&psi) - &psi.scale(closed)).norm();
        assert!(resid < 1e-12);
    }

    #[test]
    fn spec_example_point() {
        // Ω = 1, ω = 2, g = 0.4, h = 0.15, τ = π, α = 1, β = 0: the singlet
        // eigenvalue is e^{-i(Ω+ω)τ} = e^{-3πi} = -1, unimodular because
        // ωτ = 2π.
        let p = MediatorParams::default();
        let lam = p.psi_minus_eigenvalue().unwrap();
        assert!((lam - c64(-1.0, 0.0)).norm() < 1e-12);
        assert!((lam.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pumping_point_contracts_other_branches() {
        let p = MediatorParams::default();
        let bound = p.subleading_bound(&Tolerances::DEFAULT).unwrap();
        assert!(bound < 1.0, "subleading {bound}");
    }

    #[test]
    fn validates_projector_norm() {
        let p = MediatorParams {
            alpha: c64(1.0, 0.0),
            beta: c64(0.5, 0.0),
            ..MediatorParams::default()
        };
        assert!(p.validate().is_err());
    }
}
