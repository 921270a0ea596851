use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::matrix::{c64, ComplexMatrix};
use crate::error::Error;
use crate::tolerances::Tolerances;

/// Eigensystem of a Hermitian matrix.
pub struct HermitianEigen {
    /// Eigenvalues, ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as matrix columns, ordered like `values`.
    pub vectors: ComplexMatrix,
}

/// Hermitian eigendecomposition with default tolerances.
pub fn eigh(m: &ComplexMatrix) -> Result<HermitianEigen, Error> {
    eigh_with(m, &Tolerances::DEFAULT)
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Rejects inputs whose Hermiticity defect exceeds `tol.hermitian_input`.
/// Always converges for the dimensions this crate supports; the sweep cap
/// exists only to bound the loop.
pub fn eigh_with(m: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEigen, Error> {
    let n = m.dim();
    if n == 0 || n > super::MAX_DIM {
        return Err(Error::UnsupportedDimension {
            dim: n,
            max: super::MAX_DIM,
        });
    }
    let defect = m.hermiticity_defect();
    if defect > tol.hermitian_input {
        return Err(Error::NonHermitianInput { defect });
    }

    // Work on the exactly Hermitian average so roundoff in the input does
    // not leak into the rotations.
    let mut w = ComplexMatrix::from_fn(n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * c64(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n);
    let scale = w.frobenius_norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += w[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| w[(a, a)].re.total_cmp(&w[(b, b)].re));
    let values: Vec<f64> = order.iter().map(|&k| w[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// One two-sided rotation annihilating `w[p][q]`.
///
/// With α = w_pp, γ = w_qq (real) and β = w_pq = |β|e^{iφ}, the unitary
/// U = [[c, -s·e^{iφ}], [s·e^{-iφ}, c]] zeroes the off-diagonal when
/// t = s/c solves t² - 2ζt - 1 = 0, ζ = (γ-α)/(2|β|); the root smaller in
/// magnitude keeps the rotation angle below π/4 and the sort stable.
fn rotate(w: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = w.dim();
    let beta = w[(p, q)];
    let ab = beta.norm();
    if ab == 0.0 {
        return;
    }
    let u = beta / c64(ab, 0.0);
    let alpha = w[(p, p)].re;
    let gamma = w[(q, q)].re;
    let zeta = (gamma - alpha) / (2.0 * ab);
    let t = if zeta == 0.0 {
        1.0
    } else {
        -zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let (cc, su, suc) = (c64(c, 0.0), u * c64(s, 0.0), u.conj() * c64(s, 0.0));

    // Columns: W ← W·U.
    for k in 0..n {
        let wkp = w[(k, p)];
        let wkq = w[(k, q)];
        w[(k, p)] = cc * wkp + suc * wkq;
        w[(k, q)] = cc * wkq - su * wkp;
    }
    // Rows: W ← U†·W.
    for k in 0..n {
        let wpk = w[(p, k)];
        let wqk = w[(q, k)];
        w[(p, k)] = cc * wpk + su * wqk;
        w[(q, k)] = cc * wqk - suc * wpk;
    }
    w[(p, q)] = c64(0.0, 0.0);
    w[(q, p)] = c64(0.0, 0.0);
    w[(p, p)] = c64(w[(p, p)].re, 0.0);
    w[(q, q)] = c64(w[(q, q)].re, 0.0);
    // Accumulate V ← V·U.
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = cc * vkp + suc * vkq;
        v[(k, q)] = cc * vkq - su * vkp;
    }
}

/// Unitary `e^{-iHt}` for Hermitian `H`, default tolerances.
pub fn herm_expm(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix, Error> {
    herm_expm_with(h, t, &Tolerances::DEFAULT)
}

/// Unitary `e^{-iHt}` through the eigendecomposition of `H`.
pub fn herm_expm_with(h: &ComplexMatrix, t: f64, tol: &Tolerances) -> Result<ComplexMatrix, Error> {
    let eig = eigh_with(h, tol)?;
    let n = h.dim();
    let phases: Vec<Complex64> = eig
        .values
        .iter()
        .map(|&e| Complex64::from_polar(1.0, -e * t))
        .collect();
    let v = &eig.vectors;
    Ok(ComplexMatrix::from_fn(n, |i, j| {
        let mut acc = c64(0.0, 0.0);
        for k in 0..n {
            acc += v[(i, k)] * phases[k] * v[(j, k)].conj();
        }
        acc
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::ComplexVector;
    use proptest::prelude::*;

    /// Order-`terms` Taylor series of e^{-iHt}, an independent oracle for
    /// the spectral exponential at small ‖Ht‖.
    fn taylor_expm(h: &ComplexMatrix, t: f64, terms: usize) -> ComplexMatrix {
        let n = h.dim();
        let step = h.scale(c64(0.0, -t));
        let mut sum = ComplexMatrix::identity(n);
        let mut term = ComplexMatrix::identity(n);
        for k in 1..=terms {
            term = &term * &step;
            term = term.scale(c64(1.0 / k as f64, 0.0));
            sum = &sum + &term;
        }
        sum
    }

    #[test]
    fn expm_of_sigma_x_quarter_period() {
        // e^{-i σx π/2} = -i σx exactly.
        let sx = ComplexMatrix::from_rows(&[
            &[c64(0.0, 0.0), c64(1.0, 0.0)],
            &[c64(1.0, 0.0), c64(0.0, 0.0)],
        ])
        .unwrap();
        let u = herm_expm(&sx, core::f64::consts::FRAC_PI_2).unwrap();
        let expect = sx.scale(c64(0.0, -1.0));
        assert!((&u - &expect).max_abs() < 1e-14);
    }

    #[test]
    fn expm_matches_taylor_oracle() {
        let h = ComplexMatrix::from_rows(&[
            &[c64(0.8, 0.0), c64(0.2, -0.4), c64(0.0, 0.1)],
            &[c64(0.2, 0.4), c64(-0.5, 0.0), c64(0.3, 0.0)],
            &[c64(0.0, -0.1), c64(0.3, 0.0), c64(1.1, 0.0)],
        ])
        .unwrap();
        let t = 0.7;
        let u = herm_expm(&h, t).unwrap();
        let oracle = taylor_expm(&h, t, 24);
        assert!((&u - &oracle).max_abs() < 1e-13);
    }

    #[test]
    fn eigh_diagonalizes_known_matrix() {
        // σy has eigenvalues ±1.
        let sy = ComplexMatrix::from_rows(&[
            &[c64(0.0, 0.0), c64(0.0, -1.0)],
            &[c64(0.0, 1.0), c64(0.0, 0.0)],
        ])
        .unwrap();
        let eig = eigh(&sy).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        for k in 0..2 {
            let v = ComplexVector::from_fn(2, |i| eig.vectors[(i, k)]);
            let resid = &sy.apply(&v) - &v.scale(c64(eig.values[k], 0.0));
            assert!(resid.norm() < 1e-14);
        }
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[
            &[c64(0.0, 0.0), c64(1.0, 0.0)],
            &[c64(0.0, 0.0), c64(0.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(eigh(&m), Err(Error::NonHermitianInput { .. })));
    }

    #[test]
    fn expm_handles_degenerate_spectra() {
        // diag(ω, ω, 0) at t = 2π/ω returns a block phase, identity on the
        // degenerate pair regardless of the basis Jacobi picked for it.
        let w = 1.3;
        let h = ComplexMatrix::from_fn(3, |i, j| {
            if i == j && i < 2 {
                c64(w, 0.0)
            } else {
                c64(0.0, 0.0)
            }
        });
        let u = herm_expm(&h, 2.0 * core::f64::consts::PI / w).unwrap();
        assert!((&u - &ComplexMatrix::identity(3)).max_abs() < 1e-13);
    }

    fn random_hermitian(dim: usize, entries: Vec<(f64, f64)>) -> ComplexMatrix {
        let a = ComplexMatrix::from_fn(dim, |i, j| {
            let (re, im) = entries[i * dim + j];
            c64(re, im)
        });
        ComplexMatrix::from_fn(dim, |i, j| (a[(i, j)] + a[(j, i)].conj()) * c64(0.5, 0.0))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn expm_is_unitary(
            dim in 2usize..=8,
            entries in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64),
            t in -3.0f64..3.0,
        ) {
            let h = random_hermitian(dim, entries);
            let u = herm_expm(&h, t).unwrap();
            let prod = &u.dagger() * &u;
            prop_assert!((&prod - &ComplexMatrix::identity(dim)).max_abs() < 1e-12);
        }

        #[test]
        fn expm_inverts_under_time_reversal(
            dim in 2usize..=6,
            entries in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64),
            t in 0.0f64..2.5,
        ) {
            let h = random_hermitian(dim, entries);
            let fwd = herm_expm(&h, t).unwrap();
            let bwd = herm_expm(&h, -t).unwrap();
            let prod = &fwd * &bwd;
            prop_assert!((&prod - &ComplexMatrix::identity(dim)).max_abs() < 1e-12);
        }

        #[test]
        fn eigh_reconstructs_input(
            dim in 2usize..=8,
            entries in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64),
        ) {
            let h = random_hermitian(dim, entries);
            let eig = eigh(&h).unwrap();
            let rebuilt = ComplexMatrix::from_fn(dim, |i, j| {
                let mut acc = c64(0.0, 0.0);
                for k in 0..dim {
                    acc += eig.vectors[(i, k)]
                        * c64(eig.values[k], 0.0)
                        * eig.vectors[(j, k)].conj();
                }
                acc
            });
            prop_assert!((&rebuilt - &h).max_abs() < 1e-12);
        }
    }
}
