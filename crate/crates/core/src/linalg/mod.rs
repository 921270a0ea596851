//! Dense complex linear algebra for dimensions up to 8.
//!
//! The operators this crate cares about are projections of small unitaries,
//! so everything is dense, heap-allocated, and deliberately simple. Two
//! eigenproblems matter:
//!
//! - Hermitian generators: [`eigh`] (cyclic complex Jacobi) feeding the
//!   matrix exponential [`herm_expm`].
//! - Non-normal projected operators: [`eig_biorthogonal`] producing the
//!   dual system `{λₙ, |uₙ), (vₙ|}` with `(vₙ|uₘ) = δₙₘ` and
//!   `Σₙ |uₙ)(vₙ| = 1`. Eigenvalues come from a closed-form quadratic
//!   (dim 2) or a Hessenberg reduction followed by an explicitly shifted
//!   QR iteration; eigenvectors from inverse iteration on the shifted
//!   matrix and its adjoint.
//!
//! Defective inputs, for which the dual system does not exist, surface as
//! [`Error::DefectiveMatrix`].

mod eig;
mod hermitian;
mod lu;
mod matrix;

pub use eig::{
    eig_biorthogonal, eig_biorthogonal_with, eigenvalues, eigenvalues_with,
    SpectralDecomposition,
};
pub use hermitian::{eigh, eigh_with, herm_expm, herm_expm_with, HermitianEigen};
pub use matrix::{c64, ComplexMatrix, ComplexVector};

use crate::error::Error;

/// Largest matrix dimension the eigensolvers accept.
pub const MAX_DIM: usize = 8;

/// Applies `m · rho · m†` a total of `n` times.
///
/// This is the conditioned-evolution primitive: each application maps an
/// unnormalized state through one kept measurement cycle.
pub fn mat_power_apply(
    m: &ComplexMatrix,
    n: usize,
    rho: &ComplexMatrix,
) -> Result<ComplexMatrix, Error> {
    if m.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            got: rho.dim(),
        });
    }
    let md = m.dagger();
    let mut out = rho.clone();
    for _ in 0..n {
        out = &(m * &out) * &md;
    }
    Ok(out)
}
