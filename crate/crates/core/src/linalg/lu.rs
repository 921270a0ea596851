use alloc::vec::Vec;

use num_complex::Complex64;

use super::matrix::{c64, ComplexMatrix, ComplexVector};

/// LU factorization with partial pivoting, stored as combined L\U.
///
/// Pivots with magnitude below `floor` are replaced by `floor` (keeping the
/// phase when nonzero). That keeps shifted systems solvable when the shift
/// sits exactly on an eigenvalue, which is what inverse iteration wants.
pub(crate) struct Lu {
    dim: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

impl Lu {
    pub(crate) fn factor(m: &ComplexMatrix, floor: f64) -> Lu {
        let n = m.dim();
        let mut lu: Vec<Complex64> = Vec::with_capacity(n * n);
        for i in 0..n {
            lu.extend_from_slice(m.row(i));
        }
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let mut piv = k;
            let mut best = lu[k * n + k].norm();
            for i in (k + 1)..n {
                let v = lu[i * n + k].norm();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if piv != k {
                for j in 0..n {
                    lu.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
            }
            let mut d = lu[k * n + k];
            if d.norm() < floor {
                d = if d.norm() == 0.0 {
                    c64(floor, 0.0)
                } else {
                    d * c64(floor / d.norm(), 0.0)
                };
                lu[k * n + k] = d;
            }
            if d.norm() == 0.0 {
                // Singular with a zero floor; leave the zero pivot in place.
                continue;
            }
            for i in (k + 1)..n {
                let f = lu[i * n + k] / d;
                lu[i * n + k] = f;
                for j in (k + 1)..n {
                    let sub = f * lu[k * n + j];
                    lu[i * n + j] -= sub;
                }
            }
        }

        Lu { dim: n, lu, perm }
    }

    /// Smallest pivot magnitude (zero means singular at working precision).
    pub(crate) fn min_pivot(&self) -> f64 {
        (0..self.dim)
            .map(|k| self.lu[k * self.dim + k].norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub(crate) fn solve(&self, b: &ComplexVector) -> ComplexVector {
        let n = self.dim;
        let mut x = ComplexVector::from_fn(n, |i| b[self.perm[i]]);
        // Forward substitution, unit lower triangle.
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc;
        }
        // Back substitution.
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc / self.lu[i * n + i];
        }
        x
    }
}

/// Matrix inverse via column solves; `None` when a pivot collapses.
pub(crate) fn invert(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = m.dim();
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let lu = Lu::factor(m, 0.0);
    if lu.min_pivot() <= scale * 1e-18 {
        return None;
    }
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        cols.push(lu.solve(&ComplexVector::basis(n, k)));
    }
    ComplexMatrix::from_columns(&cols).ok()
}
