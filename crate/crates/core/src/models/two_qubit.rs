//! Direct exchange between a measured qubit A and a target qubit B.
//!
//! `H = (ω_A/2)(1+τ₃) + (ω_B/2)(1+σ₃) + g(τ₊σ₋ + τ₋σ₊) + h(τ₊σ₊ + τ₋σ₋)`
//! with `τᵢ` acting on A and `σᵢ` on B. A is measured every `τ` in the
//! state `|φ⟩` set by `projector`. The projected operator is a 2x2 matrix
//! `V = e^{-iω₊τ/2}(c₀·1 + c⃗·σ⃗)` whose coefficients close in terms of
//!
//! `ω± = ω_A ± ω_B`, `θ_h = √(ω₊² + 4h²)`, `θ_g = √(ω₋² + 4g²)`.

use alloc::vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Error;
use crate::linalg::{c64, ComplexMatrix, ComplexVector, SpectralDecomposition};
use crate::quantum::{pauli_on, project_measured, Pauli, ProjectorSpec, RegisterLayout};
use crate::tolerances::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitParams {
    pub omega_a: f64,
    pub omega_b: f64,
    pub g: f64,
    pub h: f64,
    pub tau: f64,
    pub projector: ProjectorSpec,
}

impl Default for TwoQubitParams {
    /// The resonant exchange point: `|λ₊| = 1` with the other branch dead.
    fn default() -> Self {
        Self {
            omega_a: 1.0,
            omega_b: 1.0,
            g: 1.0,
            h: 0.0,
            tau: core::f64::consts::FRAC_PI_2,
            projector: ProjectorSpec::up(),
        }
    }
}

pub(crate) fn layout() -> RegisterLayout {
    RegisterLayout::new(2, 0).expect("static layout")
}

/// `num/den` with the convention that a vanishing denominator means the
/// numerator vanishes too (θ = 0 forces ω = coupling = 0).
fn safe_ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

impl TwoQubitParams {
    pub fn validate(&self) -> Result<(), Error> {
        let vals = [self.omega_a, self.omega_b, self.g, self.h, self.tau];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("two-qubit parameters must be finite"));
        }
        if self.tau < 0.0 {
            return Err(Error::InvalidParams("tau must be non-negative"));
        }
        self.projector.amplitudes()?;
        Ok(())
    }

    pub fn hamiltonian(&self) -> Result<ComplexMatrix, Error> {
        self.validate()?;
        let lay = layout();
        let id = ComplexMatrix::identity(4);
        let za = pauli_on(&lay, 0, Pauli::Z)?;
        let zb = pauli_on(&lay, 1, Pauli::Z)?;
        let pa = pauli_on(&lay, 0, Pauli::Plus)?;
        let ma = pauli_on(&lay, 0, Pauli::Minus)?;
        let pb = pauli_on(&lay, 1, Pauli::Plus)?;
        let mb = pauli_on(&lay, 1, Pauli::Minus)?;

        let mut ham = (&id + &za).scale(c64(self.omega_a / 2.0, 0.0));
        ham = &ham + &(&id + &zb).scale(c64(self.omega_b / 2.0, 0.0));
        let exchange = &(&pa * &mb) + &(&ma * &pb);
        ham = &ham + &exchange.scale(c64(self.g, 0.0));
        let counter = &(&pa * &pb) + &(&ma * &mb);
        ham = &ham + &counter.scale(c64(self.h, 0.0));
        Ok(ham)
    }

    /// The numeric route: exponentiate the register Hamiltonian, then
    /// project on the measured qubit's state.
    pub fn projected_v(&self) -> Result<ComplexMatrix, Error> {
        let ham = self.hamiltonian()?;
        let u = crate::linalg::herm_expm(&ham, self.tau)?;
        project_measured(&u, &layout(), &self.projector)
    }

    /// Pauli coefficients of V without the global phase `e^{-iω₊τ/2}`,
    /// returned together with that phase.
    fn reduced_coeffs(&self) -> Result<(Complex64, [Complex64; 4]), Error> {
        self.validate()?;
        let (theta, phi) = self.projector.angles()?;
        let wp = self.omega_a + self.omega_b;
        let wm = self.omega_a - self.omega_b;
        let th = (wp * wp + 4.0 * self.h * self.h).sqrt();
        let tg = (wm * wm + 4.0 * self.g * self.g).sqrt();
        let (ch, sh) = {
            let x = self.tau * th / 2.0;
            (x.cos(), x.sin())
        };
        let (cg, sg) = {
            let x = self.tau * tg / 2.0;
            (x.cos(), x.sin())
        };
        let rh = safe_ratio(wp, th) * sh;
        let rg = safe_ratio(wm, tg) * sg;
        let hh = safe_ratio(self.h, th) * sh;
        let gg = safe_ratio(self.g, tg) * sg;

        let c0 = c64(0.5 * (ch + cg), -0.5 * theta.cos() * (rh + rg));
        let c1 = c64(0.0, -(hh + gg) * theta.sin() * phi.cos());
        let c2 = c64(0.0, (hh - gg) * theta.sin() * phi.sin());
        let c3 = c64(0.5 * theta.cos() * (ch - cg), -0.5 * (rh - rg));
        let phase = Complex64::from_polar(1.0, -wp * self.tau / 2.0);
        Ok((phase, [c0, c1, c2, c3]))
    }

    /// Closed-form Pauli coefficients of V: `V = c₀·1 + c⃗·σ⃗` including
    /// the global phase, so they match the numeric route elementwise.
    pub fn coeffs(&self) -> Result<[Complex64; 4], Error> {
        let (phase, c) = self.reduced_coeffs()?;
        Ok([phase * c[0], phase * c[1], phase * c[2], phase * c[3]])
    }

    /// Closed-form eigenvalues `λ± = e^{-iω₊τ/2}(c₀ ± c)`, `c = √(c⃗·c⃗)`.
    pub fn lambda_pm(&self) -> Result<(Complex64, Complex64), Error> {
        let (phase, [c0, c1, c2, c3]) = self.reduced_coeffs()?;
        let c = (c1 * c1 + c2 * c2 + c3 * c3).sqrt();
        Ok((phase * (c0 + c), phase * (c0 - c)))
    }

    /// Closed-form biorthogonal decomposition of V.
    ///
    /// The eigenvector pair is assembled from whichever of the two
    /// algebraically equivalent forms keeps the normalizer `2c(c ∓ c₃)`
    /// away from zero, so the only genuine failure is `c ≈ 0`
    /// ([`Error::DegenerateDirection`]), where V is proportional to the
    /// identity and has no preferred directions.
    pub fn eigen(&self) -> Result<SpectralDecomposition, Error> {
        let (phase, [c0, c1, c2, c3]) = self.reduced_coeffs()?;
        let c = (c1 * c1 + c2 * c2 + c3 * c3).sqrt();
        if c.norm() <= Tolerances::DEFAULT.degenerate_direction {
            return Err(Error::DegenerateDirection);
        }
        let i = c64(0.0, 1.0);
        let cp = c1 + i * c2;
        let cm = c1 - i * c2;
        let lp = phase * (c0 + c);
        let lm = phase * (c0 - c);

        // Bra components of the duals; kets are their conjugates.
        let (up, um, vp, vm) = if (c - c3).norm() >= (c + c3).norm() {
            (
                [cm, c - c3],
                [c3 - c, cp],
                [cp, c - c3],
                [c3 - c, cm],
            )
        } else {
            (
                [c + c3, cp],
                [-cm, c + c3],
                [c + c3, cm],
                [-cp, c + c3],
            )
        };
        let ket = |a: [Complex64; 2]| ComplexVector::from_slice(&a);
        let bra_ket = |a: [Complex64; 2]| ComplexVector::from_slice(&[a[0].conj(), a[1].conj()]);
        SpectralDecomposition::from_pairs(vec![
            (lp, ket(up), bra_ket(vp)),
            (lm, ket(um), bra_ket(vm)),
        ])
    }

    pub(crate) fn param(&self, name: &str) -> Option<f64> {
        match name {
            "omega_a" => Some(self.omega_a),
            "omega_b" => Some(self.omega_b),
            "g" => Some(self.g),
            "h" => Some(self.h),
            "tau" => Some(self.tau),
            "theta" | "phi" => match self.projector.angles() {
                Ok((theta, phi)) => Some(if name == "theta" { theta } else { phi }),
                Err(_) => None,
            },
            _ => None,
        }
    }

    pub(crate) fn set_param(&mut self, name: &str, value: f64) -> Result<(), Error> {
        match name {
            "omega_a" => self.omega_a = value,
            "omega_b" => self.omega_b = value,
            "g" => self.g = value,
            "h" => self.h = value,
            "tau" => self.tau = value,
            "theta" | "phi" => match self.projector {
                ProjectorSpec::Angles { theta, phi } => {
                    self.projector = if name == "theta" {
                        ProjectorSpec::Angles { theta: value, phi }
                    } else {
                        ProjectorSpec::Angles { theta, phi: value }
                    };
                }
                ProjectorSpec::Amplitudes { .. } => {
                    return Err(Error::InvalidSweep(
                        "cannot sweep angles of an amplitude-form projector",
                    ))
                }
            },
            _ => return Err(Error::InvalidSweep("unknown two-qubit parameter")),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigenvalues;

    fn spec_point() -> TwoQubitParams {
        TwoQubitParams {
            omega_a: 1.0,
            omega_b: 0.5,
            g: 0.3,
            h: 0.2,
            tau: 1.7,
            projector: ProjectorSpec::Angles { theta: 0.6, phi: 0.9 },
        }
    }

    #[test]
    fn hamiltonian_matrix_structure() {
        let p = spec_point();
        let ham = p.hamiltonian().unwrap();
        let wz = c64(0.0, 0.0);
        let rows: [[Complex64; 4]; 4] = [
            [c64(1.5, 0.0), wz, wz, c64(0.2, 0.0)],
            [wz, c64(1.0, 0.0), c64(0.3, 0.0), wz],
            [wz, c64(0.3, 0.0), c64(0.5, 0.0), wz],
            [c64(0.2, 0.0), wz, wz, wz],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!((ham[(i, j)] - rows[i][j]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn coeffs_match_numeric_projection() {
        let p = spec_point();
        let v = p.projected_v().unwrap();
        let c = p.coeffs().unwrap();
        // Pauli components of the numeric V.
        let n0 = (v[(0, 0)] + v[(1, 1)]) * c64(0.5, 0.0);
        let n1 = (v[(0, 1)] + v[(1, 0)]) * c64(0.5, 0.0);
        let n2 = (v[(0, 1)] - v[(1, 0)]) * c64(0.0, 0.5);
        let n3 = (v[(0, 0)] - v[(1, 1)]) * c64(0.5, 0.0);
        assert!((c[0] - n0).norm() < 1e-10);
        assert!((c[1] - n1).norm() < 1e-10);
        assert!((c[2] - n2).norm() < 1e-10);
        assert!((c[3] - n3).norm() < 1e-10);
    }

    #[test]
    fn lambda_pm_matches_numeric_eigenvalues() {
        let p = spec_point();
        let v = p.projected_v().unwrap();
        let lam = eigenvalues(&v).unwrap();
        let (lp, lm) = p.lambda_pm().unwrap();
        // Compare as sets.
        let d1 = (lam[0] - lp).norm().max((lam[1] - lm).norm());
        let d2 = (lam[0] - lm).norm().max((lam[1] - lp).norm());
        assert!(d1.min(d2) < 1e-10);
    }

    #[test]
    fn closed_form_eigen_solves_numeric_v() {
        let p = spec_point();
        let v = p.projected_v().unwrap();
        let sd = p.eigen().unwrap();
        for k in 0..2 {
            let u = sd.right_vec(k);
            let resid = (&v.apply(u) - &u.scale(sd.lambda(k))).norm();
            assert!(resid < 1e-10, "residual {resid}");
        }
        assert!(sd.biorthonormality_residual() < 1e-12);
        assert!((&sd.reconstruct() - &v).max_abs() < 1e-10);
    }

    #[test]
    fn resonant_point_kills_one_branch() {
        // ω_A = ω_B, h = 0, g = 1, τ = π/2: the up-axis branch survives
        // with unit magnitude while the exchange branch dies exactly.
        let p = TwoQubitParams::default();
        let (lp, lm) = p.lambda_pm().unwrap();
        let mags = [lp.norm(), lm.norm()];
        let hi = mags[0].max(mags[1]);
        let lo = mags[0].min(mags[1]);
        assert!((hi - 1.0).abs() < 1e-14);
        assert!(lo < 1e-14);
        let sd = p.eigen().unwrap();
        // Surviving eigenvector is |↑⟩.
        let u0 = sd.right_vec(0);
        assert!((u0[0].norm() - 1.0).abs() < 1e-12);
        assert!(u0[1].norm() < 1e-12);
    }

    #[test]
    fn axis_magnitudes_close_form() {
        // At θ = 0: |λ₊|² = 1 - (4h²/θ_h²)sin²(τθ_h/2), and the g-branch
        // analog for |λ₋|².
        let p = TwoQubitParams {
            omega_a: 0.9,
            omega_b: 0.4,
            g: 0.35,
            h: 0.25,
            tau: 2.3,
            projector: ProjectorSpec::up(),
        };
        let (lp, lm) = p.lambda_pm().unwrap();
        let wp = p.omega_a + p.omega_b;
        let wm = p.omega_a - p.omega_b;
        let th = (wp * wp + 4.0 * p.h * p.h).sqrt();
        let tg = (wm * wm + 4.0 * p.g * p.g).sqrt();
        let want_p = 1.0 - (4.0 * p.h * p.h / (th * th)) * (p.tau * th / 2.0).sin().powi(2);
        let want_m = 1.0 - (4.0 * p.g * p.g / (tg * tg)) * (p.tau * tg / 2.0).sin().powi(2);
        let up = lp.norm_sqr();
        let um = lm.norm_sqr();
        // λ± labels may swap relative to the axis branches; compare as sets.
        let d1 = (up - want_p).abs().max((um - want_m).abs());
        let d2 = (up - want_m).abs().max((um - want_p).abs());
        assert!(d1.min(d2) < 1e-12);
    }

    #[test]
    fn equator_projector_degenerates_magnitudes() {
        let p = TwoQubitParams {
            omega_a: 1.3,
            omega_b: 0.7,
            g: 0.4,
            h: 0.3,
            tau: 1.1,
            projector: ProjectorSpec::Angles {
                theta: core::f64::consts::FRAC_PI_2,
                phi: 0.8,
            },
        };
        let (lp, lm) = p.lambda_pm().unwrap();
        assert!((lp.norm() - lm.norm()).abs() < 1e-12);
        let v = p.projected_v().unwrap();
        let lam = eigenvalues(&v).unwrap();
        assert!((lam[0].norm() - lam[1].norm()).abs() < 1e-10);
    }

    #[test]
    fn isotropic_point_is_degenerate_direction() {
        // ω_A = ω_B = 1, h = 0, g = 1, τ = π puts both branch angles at π:
        // V ∝ 1 and no eigendirection is preferred.
        let p = TwoQubitParams {
            omega_a: 1.0,
            omega_b: 1.0,
            g: 1.0,
            h: 0.0,
            tau: core::f64::consts::PI,
            projector: ProjectorSpec::up(),
        };
        assert_eq!(p.eigen().unwrap_err(), Error::DegenerateDirection);
    }

    #[test]
    fn rejects_unphysical_parameters() {
        let p = TwoQubitParams { tau: -1.0, ..Default::default() };
        assert!(p.validate().is_err());
        let p = TwoQubitParams { g: f64::NAN, ..Default::default() };
        assert!(p.validate().is_err());
    }
}
