use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::lu::{invert, Lu};
use super::matrix::{c64, ComplexMatrix, ComplexVector};
use crate::error::Error;
use crate::tolerances::Tolerances;

/// Biorthogonal eigensystem of a (generally non-normal) operator.
///
/// Stores `{λₙ, |uₙ), (vₙ|}` with the right vectors unit-normalized, the
/// duality `(vₙ|uₘ) = δₙₘ` enforced, and the completeness `Σₙ |uₙ)(vₙ| = 1`
/// holding to working precision. Entries are sorted by descending `|λ|`,
/// ties broken by descending real then imaginary part, so index 0 is the
/// leading (slowest-dying) mode of the conditioned iteration.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<Complex64>,
    right: Vec<ComplexVector>,
    left: Vec<ComplexVector>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn lambda(&self, n: usize) -> Complex64 {
        self.eigenvalues[n]
    }

    pub fn lambda0(&self) -> Complex64 {
        self.eigenvalues[0]
    }

    /// Right eigenvector `|uₙ)`, unit norm.
    pub fn right_vec(&self, n: usize) -> &ComplexVector {
        &self.right[n]
    }

    /// Left eigenvector `(vₙ|` stored as the ket `|vₙ)`; scaled so that
    /// `(vₙ|uₙ) = 1`, hence generally not unit norm.
    pub fn left_vec(&self, n: usize) -> &ComplexVector {
        &self.left[n]
    }

    /// `|λ₁| / |λ₀|`; zero when there is no subleading mode, 1.0 when the
    /// leading eigenvalue vanishes.
    pub fn gap_ratio(&self) -> f64 {
        if self.dim() < 2 {
            return 0.0;
        }
        let a = self.eigenvalues[0].norm();
        if a == 0.0 {
            1.0
        } else {
            self.eigenvalues[1].norm() / a
        }
    }

    /// `|λ₀| - |λ₁|`, infinite for one-dimensional systems.
    pub fn leading_margin(&self) -> f64 {
        if self.dim() < 2 {
            f64::INFINITY
        } else {
            self.eigenvalues[0].norm() - self.eigenvalues[1].norm()
        }
    }

    /// `Σₙ λₙ |uₙ)(vₙ|`, which should reproduce the input.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n);
        for k in 0..n {
            let term = self.right[k].outer(&self.left[k]).scale(self.eigenvalues[k]);
            m = &m + &term;
        }
        m
    }

    /// `Σₙ λₙᴺ |uₙ)(vₙ|`, the spectral route to `Vᴺ`.
    pub fn power(&self, n: u32) -> ComplexMatrix {
        let d = self.dim();
        let mut m = ComplexMatrix::zeros(d);
        for k in 0..d {
            let term = self.right[k]
                .outer(&self.left[k])
                .scale(self.eigenvalues[k].powu(n));
            m = &m + &term;
        }
        m
    }

    /// Largest elementwise deviation of `Σₙ |uₙ)(vₙ|` from the identity.
    pub fn completeness_residual(&self) -> f64 {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n);
        for k in 0..n {
            m = &m + &self.right[k].outer(&self.left[k]);
        }
        (&m - &ComplexMatrix::identity(n)).max_abs()
    }

    /// Largest deviation of `(vᵢ|uⱼ)` from `δᵢⱼ`.
    pub fn biorthonormality_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let d = self.left[i].dot(&self.right[j]);
                let target = if i == j { c64(1.0, 0.0) } else { c64(0.0, 0.0) };
                worst = worst.max((d - target).norm());
            }
        }
        worst
    }

    /// Builds a decomposition from raw `(λ, |u), |v))` triples with
    /// `(v|u) ≈ 1`; sorts, unit-normalizes the rights, fixes phases, and
    /// rescales the lefts to make the duality exact.
    pub(crate) fn from_pairs(
        mut pairs: Vec<(Complex64, ComplexVector, ComplexVector)>,
    ) -> Result<Self, Error> {
        pairs.sort_by(|a, b| cmp_eigen_desc(&a.0, &b.0));
        let mut eigenvalues = Vec::with_capacity(pairs.len());
        let mut right = Vec::with_capacity(pairs.len());
        let mut left = Vec::with_capacity(pairs.len());
        for (lam, u, v) in pairs {
            let (u, v) = normalize_pair(u, v)?;
            eigenvalues.push(lam);
            right.push(u);
            left.push(v);
        }
        Ok(Self {
            eigenvalues,
            right,
            left,
        })
    }
}

/// Descending eigenvalue order: magnitude, then real, then imaginary part.
pub(crate) fn cmp_eigen_desc(a: &Complex64, b: &Complex64) -> core::cmp::Ordering {
    b.norm()
        .total_cmp(&a.norm())
        .then(b.re.total_cmp(&a.re))
        .then(b.im.total_cmp(&a.im))
}

/// Unit-normalizes `u`, rotates the pair so the largest component of `u` is
/// real positive, and rescales `v` so `(v|u) = 1` exactly.
pub(crate) fn normalize_pair(
    u: ComplexVector,
    v: ComplexVector,
) -> Result<(ComplexVector, ComplexVector), Error> {
    let r = u.norm();
    if r == 0.0 || !r.is_finite() {
        return Err(Error::InvalidState("eigenvector has zero norm"));
    }
    let mut u = u.scale(c64(1.0 / r, 0.0));
    let k = u.argmax_abs();
    let lead = u[k];
    let phase = lead / c64(lead.norm(), 0.0);
    u = u.scale(phase.conj());
    // Same phase on v keeps (v|u) unchanged; the norm moved out of u goes in.
    let mut v = v.scale(phase.conj() * c64(r, 0.0));
    let d = v.dot(&u);
    if d.norm() < 1e-14 * v.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::DefectiveMatrix {
            condition: f64::INFINITY,
        });
    }
    v = v.scale(c64(1.0, 0.0) / d.conj());
    Ok((u, v))
}

/// Eigenvalues only, sorted like [`SpectralDecomposition`].
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>, Error> {
    eigenvalues_with(m, &Tolerances::DEFAULT)
}

pub fn eigenvalues_with(m: &ComplexMatrix, _tol: &Tolerances) -> Result<Vec<Complex64>, Error> {
    let n = m.dim();
    if n == 0 || n > super::MAX_DIM {
        return Err(Error::UnsupportedDimension {
            dim: n,
            max: super::MAX_DIM,
        });
    }
    let mut lam = match n {
        1 => vec![m[(0, 0)]],
        2 => {
            let (a, b) = quad_eigen(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
            vec![a, b]
        }
        _ => {
            let h = hessenberg(m);
            qr_eigenvalues(h)?
        }
    };
    lam.sort_by(cmp_eigen_desc);
    Ok(lam)
}

/// Eigenvalues of `[[a, b], [c, d]]` by the quadratic formula, with the
/// discriminant sign chosen to avoid cancellation and the second root
/// recovered from the determinant.
fn quad_eigen(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = ((a - d) * (a - d) + b * c * c64(4.0, 0.0)).sqrt();
    let disc = if tr.re * disc.re + tr.im * disc.im >= 0.0 {
        disc
    } else {
        -disc
    };
    let l1 = (tr + disc) * c64(0.5, 0.0);
    let l2 = if l1.norm() > 0.0 {
        det / l1
    } else {
        (tr - disc) * c64(0.5, 0.0)
    };
    (l1, l2)
}

/// Householder reduction to upper Hessenberg form (similarity transform;
/// the orthogonal factor is not accumulated since only eigenvalues are
/// taken from the QR pass).
fn hessenberg(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    let mut h = m.clone();
    let mut v = vec![c64(0.0, 0.0); n];
    for k in 0..n.saturating_sub(2) {
        let mut nrm2 = 0.0f64;
        for i in (k + 1)..n {
            nrm2 += h[(i, k)].norm_sqr();
        }
        let nrm = nrm2.sqrt();
        if nrm <= 1e-300 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let alpha = if x0.norm() == 0.0 {
            c64(-nrm, 0.0)
        } else {
            -(x0 / c64(x0.norm(), 0.0)) * c64(nrm, 0.0)
        };
        let m_len = n - (k + 1);
        v[0] = x0 - alpha;
        for i in 1..m_len {
            v[i] = h[(k + 1 + i, k)];
        }
        let vnorm2: f64 = v[..m_len].iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 <= 1e-300 {
            continue;
        }
        let tau = 2.0 / vnorm2;
        // Rows k+1..n: H ← (I - τ v v†) H.
        for j in 0..n {
            let mut s = c64(0.0, 0.0);
            for i in 0..m_len {
                s += v[i].conj() * h[(k + 1 + i, j)];
            }
            s *= c64(tau, 0.0);
            for i in 0..m_len {
                let sub = s * v[i];
                h[(k + 1 + i, j)] -= sub;
            }
        }
        // Columns k+1..n: H ← H (I - τ v v†).
        for i in 0..n {
            let mut s = c64(0.0, 0.0);
            for j in 0..m_len {
                s += h[(i, k + 1 + j)] * v[j];
            }
            s *= c64(tau, 0.0);
            for j in 0..m_len {
                let sub = s * v[j].conj();
                h[(i, k + 1 + j)] -= sub;
            }
        }
        h[(k + 1, k)] = alpha;
        for i in (k + 2)..n {
            h[(i, k)] = c64(0.0, 0.0);
        }
    }
    h
}

/// Rotation `G = [[c, s], [-s̄, c]]` (c real) with `G·(x, y)ᵀ = (r, 0)ᵀ`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, c64(0.0, 0.0));
    }
    if ax == 0.0 {
        return (0.0, y.conj() / c64(ay, 0.0));
    }
    let r = ax.hypot(ay);
    let c = ax / r;
    let s = (x / c64(ax, 0.0)) * y.conj() / c64(r, 0.0);
    (c, s)
}

/// Explicitly shifted QR iteration on a Hessenberg matrix; eigenvalues in
/// no particular order.
fn qr_eigenvalues(mut h: ComplexMatrix) -> Result<Vec<Complex64>, Error> {
    let n = h.dim();
    let mut eig = vec![c64(0.0, 0.0); n];
    let fnorm = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut hi = n;
    let mut iters = 0usize;

    while hi > 0 {
        // Deflation scan: find the start of the trailing irreducible block.
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let s = if s == 0.0 { fnorm } else { s };
            if h[(lo, lo - 1)].norm() <= f64::EPSILON * s {
                h[(lo, lo - 1)] = c64(0.0, 0.0);
                break;
            }
            lo -= 1;
        }

        if lo == hi - 1 {
            eig[lo] = h[(lo, lo)];
            hi -= 1;
            iters = 0;
            continue;
        }
        if lo == hi - 2 {
            let (a, b) = quad_eigen(
                h[(lo, lo)],
                h[(lo, lo + 1)],
                h[(lo + 1, lo)],
                h[(lo + 1, lo + 1)],
            );
            eig[lo] = a;
            eig[lo + 1] = b;
            hi -= 2;
            iters = 0;
            continue;
        }

        iters += 1;
        if iters > 64 {
            return Err(Error::ConvergenceFailure);
        }
        let mu = if iters % 13 == 0 {
            // Exceptional shift; breaks symmetric stalls (e.g. circulants).
            h[(hi - 1, hi - 1)] + c64(0.75 * h[(hi - 1, hi - 2)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 2, hi - 2)],
                h[(hi - 2, hi - 1)],
                h[(hi - 1, hi - 2)],
                h[(hi - 1, hi - 1)],
            )
        };
        qr_step(&mut h, lo, hi, mu);
    }
    Ok(eig)
}

/// Eigenvalue of the trailing 2x2 closest to its bottom-right entry.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let (l1, l2) = quad_eigen(a, b, c, d);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One shifted QR sweep `H - μ = QR`, `H ← RQ + μ` on the block `[lo, hi)`.
fn qr_step(h: &mut ComplexMatrix, lo: usize, hi: usize, mu: Complex64) {
    for i in lo..hi {
        h[(i, i)] -= mu;
    }
    let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(hi - lo);
    for k in lo..(hi - 1) {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        rots.push((c, s));
        let cc = c64(c, 0.0);
        for j in k..hi {
            let a = h[(k, j)];
            let b = h[(k + 1, j)];
            h[(k, j)] = cc * a + s * b;
            h[(k + 1, j)] = cc * b - s.conj() * a;
        }
        h[(k + 1, k)] = c64(0.0, 0.0);
    }
    for (idx, k) in (lo..(hi - 1)).enumerate() {
        let (c, s) = rots[idx];
        let cc = c64(c, 0.0);
        for i in lo..=(k + 1) {
            let a = h[(i, k)];
            let b = h[(i, k + 1)];
            h[(i, k)] = cc * a + s.conj() * b;
            h[(i, k + 1)] = cc * b - s * a;
        }
    }
    for i in lo..hi {
        h[(i, i)] += mu;
    }
}

/// Inverse iteration for the eigenvector of `m` at the (already computed)
/// eigenvalue `lam`. `start_offset` rotates the deterministic start list so
/// degenerate group members explore independent directions.
fn inverse_iteration(
    m: &ComplexMatrix,
    lam: Complex64,
    start_offset: usize,
    tol: &Tolerances,
) -> Result<ComplexVector, Error> {
    let n = m.dim();
    let scale = m.frobenius_norm().max(1.0);
    let mut shifted = m.clone();
    for i in 0..n {
        shifted[(i, i)] -= lam;
    }
    let lu = Lu::factor(&shifted, scale * 1e-15);

    let n_starts = n + 2;
    for attempt in 0..n_starts {
        let which = (start_offset + attempt) % n_starts;
        let mut x = make_start(n, which);
        let mut best: Option<(f64, ComplexVector)> = None;
        for _ in 0..6 {
            let y = lu.solve(&x);
            let nrm = y.norm();
            if !nrm.is_finite() || nrm == 0.0 {
                break;
            }
            x = y.scale(c64(1.0 / nrm, 0.0));
            let resid = (&m.apply(&x) - &x.scale(lam)).norm();
            if best.as_ref().map_or(true, |(r, _)| resid < *r) {
                best = Some((resid, x.clone()));
            }
            if resid <= tol.eig_residual * scale * 1e-3 {
                break;
            }
        }
        if let Some((resid, v)) = best {
            if resid <= tol.eig_residual * scale {
                return Ok(v);
            }
        }
    }
    Err(Error::ConvergenceFailure)
}

/// Deterministic start vectors: all-ones, a ramp, then the basis vectors.
fn make_start(n: usize, which: usize) -> ComplexVector {
    match which {
        0 => ComplexVector::from_fn(n, |_| c64(1.0, 0.0)),
        1 => ComplexVector::from_fn(n, |i| c64(1.0 + i as f64, (n - i) as f64 * 0.5)),
        k => ComplexVector::basis(n, (k - 2) % n),
    }
}

/// Biorthogonal eigendecomposition with default tolerances.
pub fn eig_biorthogonal(m: &ComplexMatrix) -> Result<SpectralDecomposition, Error> {
    eig_biorthogonal_with(m, &Tolerances::DEFAULT)
}

/// Full biorthogonal eigendecomposition.
///
/// Eigenvalues are grouped as degenerate when consecutive entries of the
/// magnitude-sorted list differ by less than `tol.eig_grouping` in both
/// magnitude and complex distance. Right vectors come from inverse
/// iteration on `m`, left vectors from inverse iteration on `m†` at the
/// conjugate shifts; inside each group the two families are sequentially
/// re-biorthogonalized. A defective input (Jordan block, or eigenvector
/// matrix with condition beyond `tol.max_condition`) is an error: the dual
/// system does not exist at working precision.
pub fn eig_biorthogonal_with(
    m: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<SpectralDecomposition, Error> {
    let n = m.dim();
    let lam = eigenvalues_with(m, tol)?;
    if n == 1 {
        return SpectralDecomposition::from_pairs(vec![(
            lam[0],
            ComplexVector::basis(1, 0),
            ComplexVector::basis(1, 0),
        )]);
    }
    let md = m.dagger();

    let mut pairs: Vec<(Complex64, ComplexVector, ComplexVector)> = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        // Extend the degeneracy group by chaining adjacent eigenvalues.
        let mut j = i + 1;
        while j < n {
            let a = lam[j - 1];
            let b = lam[j];
            if (a.norm() - b.norm()).abs() < tol.eig_grouping && (a - b).norm() < tol.eig_grouping {
                j += 1;
            } else {
                break;
            }
        }
        let group = &lam[i..j];
        let k = group.len();

        let us = group_vectors(m, group, tol)?;
        let ws = group_vectors(&md, &conj_all(group), tol)?;
        let (us, ws) = biorthogonalize_group(us, ws)?;
        for (g, (u, w)) in group.iter().zip(us.into_iter().zip(ws)) {
            pairs.push((*g, u, w));
        }
        debug_assert_eq!(k, j - i);
        i = j;
    }

    let sd = SpectralDecomposition::from_pairs(pairs)?;

    // Condition gate on the eigenvector matrix: past this the dual basis is
    // numerically meaningless and the matrix is defective for our purposes.
    let p = ComplexMatrix::from_columns(&sd.right)?;
    let pinv = invert(&p).ok_or(Error::DefectiveMatrix {
        condition: f64::INFINITY,
    })?;
    let condition = p.frobenius_norm() * pinv.frobenius_norm();
    if condition > tol.max_condition {
        return Err(Error::DefectiveMatrix { condition });
    }
    Ok(sd)
}

fn conj_all(lam: &[Complex64]) -> Vec<Complex64> {
    lam.iter().map(|z| z.conj()).collect()
}

/// Independent eigenvectors for one degeneracy group: each member runs
/// inverse iteration from a different start, is projected against the
/// members already accepted, and must keep a non-negligible remainder.
fn group_vectors(
    m: &ComplexMatrix,
    group: &[Complex64],
    tol: &Tolerances,
) -> Result<Vec<ComplexVector>, Error> {
    let n = m.dim();
    let n_starts = n + 2;
    let mut out: Vec<ComplexVector> = Vec::with_capacity(group.len());
    for (j, &lam) in group.iter().enumerate() {
        let mut accepted = None;
        for attempt in 0..n_starts {
            let v = match inverse_iteration(m, lam, j + attempt, tol) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let mut w = v;
            for prev in &out {
                let overlap = prev.dot(&w);
                w = &w - &prev.scale(overlap);
            }
            if w.norm() > 1e-8 {
                accepted = Some(w.normalized()?);
                break;
            }
        }
        match accepted {
            Some(v) => out.push(v),
            None => {
                return Err(Error::DefectiveMatrix {
                    condition: f64::INFINITY,
                })
            }
        }
    }
    Ok(out)
}

/// Two-sided sequential Gram-Schmidt inside a degeneracy group: members are
/// finalized one at a time so each projection uses already-dual partners.
fn biorthogonalize_group(
    us: Vec<ComplexVector>,
    ws: Vec<ComplexVector>,
) -> Result<(Vec<ComplexVector>, Vec<ComplexVector>), Error> {
    let k = us.len();
    let mut fu: Vec<ComplexVector> = Vec::with_capacity(k);
    let mut fw: Vec<ComplexVector> = Vec::with_capacity(k);
    for j in 0..k {
        let mut u = us[j].clone();
        let mut w = ws[j].clone();
        for b in 0..j {
            let c = fw[b].dot(&u);
            u = &u - &fu[b].scale(c);
            let c = fu[b].dot(&w);
            w = &w - &fw[b].scale(c);
        }
        let un = u.norm();
        let wn = w.norm();
        if un < 1e-8 || wn < 1e-8 {
            return Err(Error::DefectiveMatrix {
                condition: f64::INFINITY,
            });
        }
        let u = u.scale(c64(1.0 / un, 0.0));
        let mut w = w.scale(c64(1.0 / wn, 0.0));
        let d = w.dot(&u);
        if d.norm() < 1e-14 {
            return Err(Error::DefectiveMatrix {
                condition: f64::INFINITY,
            });
        }
        w = w.scale(c64(1.0, 0.0) / d.conj());
        fu.push(u);
        fw.push(w);
    }
    Ok((fu, fw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn eigenvalues_of_diagonal_matrix() {
        let m = ComplexMatrix::from_fn(4, |i, j| {
            if i == j {
                c64(0.1 * (i as f64 + 1.0), -0.2 * i as f64)
            } else {
                c64(0.0, 0.0)
            }
        });
        let lam = eigenvalues(&m).unwrap();
        // Sorted descending by magnitude.
        let mags: Vec<f64> = lam.iter().map(|z| z.norm()).collect();
        for w in mags.windows(2) {
            assert!(w[0] >= w[1]);
        }
        assert!((lam[3] - c64(0.1, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn eigenvalues_of_cyclic_permutation() {
        // The 3-cycle has eigenvalues at the cube roots of unity; the plain
        // Wilkinson shift stalls here, so this exercises the exceptional one.
        let mut m = ComplexMatrix::zeros(3);
        m[(0, 2)] = c64(1.0, 0.0);
        m[(1, 0)] = c64(1.0, 0.0);
        m[(2, 1)] = c64(1.0, 0.0);
        let lam = eigenvalues(&m).unwrap();
        for z in &lam {
            assert!((z.norm() - 1.0).abs() < 1e-10);
            assert!((z.powu(3) - c64(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn quadratic_path_handles_nilpotent_block() {
        let m = ComplexMatrix::from_rows(&[
            &[c64(0.0, 0.0), c64(1.0, 0.0)],
            &[c64(0.0, 0.0), c64(0.0, 0.0)],
        ])
        .unwrap();
        let lam = eigenvalues(&m).unwrap();
        assert!(lam[0].norm() < 1e-15);
        assert!(lam[1].norm() < 1e-15);
    }

    #[test]
    fn biorthogonal_on_triangular_example() {
        // [[0.9, 0.5], [0, 0.4]]: u0 = e0, u1 ∝ (1, -1), v0 ∝ (1, 1).
        let m = ComplexMatrix::from_rows(&[
            &[c64(0.9, 0.0), c64(0.5, 0.0)],
            &[c64(0.0, 0.0), c64(0.4, 0.0)],
        ])
        .unwrap();
        let sd = eig_biorthogonal(&m).unwrap();
        assert!((sd.lambda0() - c64(0.9, 0.0)).norm() < 1e-12);
        assert!((sd.lambda(1) - c64(0.4, 0.0)).norm() < 1e-12);
        let u0 = sd.right_vec(0);
        assert!((u0[0].norm() - 1.0).abs() < 1e-12);
        assert!(u0[1].norm() < 1e-12);
        let v0 = sd.left_vec(0);
        assert!((v0[0] - v0[1]).norm() < 1e-10);
        assert!(sd.biorthonormality_residual() < 1e-12);
        assert!((&sd.reconstruct() - &m).max_abs() < 1e-12);
    }

    #[test]
    fn jordan_block_is_defective() {
        let m = ComplexMatrix::from_rows(&[
            &[c64(1.0, 0.0), c64(1.0, 0.0)],
            &[c64(0.0, 0.0), c64(1.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            eig_biorthogonal(&m),
            Err(Error::DefectiveMatrix { .. })
        ));
    }

    #[test]
    fn degenerate_group_still_spans() {
        // Similarity transform of diag(0.8, 0.8, 0.3) by a mildly
        // non-orthogonal basis: a true degenerate pair with a full
        // eigenspace. The group machinery must return a spanning dual
        // system, not a defect.
        let r = ComplexMatrix::from_rows(&[
            &[c64(1.0, 0.0), c64(0.3, 0.1), c64(0.0, 0.0)],
            &[c64(0.0, 0.0), c64(1.0, 0.0), c64(-0.2, 0.0)],
            &[c64(0.1, 0.0), c64(0.0, 0.2), c64(1.0, 0.0)],
        ])
        .unwrap();
        let rinv = invert(&r).unwrap();
        let d = ComplexMatrix::from_fn(3, |i, j| {
            if i == j {
                if i < 2 {
                    c64(0.8, 0.0)
                } else {
                    c64(0.3, 0.0)
                }
            } else {
                c64(0.0, 0.0)
            }
        });
        let m = &(&r * &d) * &rinv;
        let sd = eig_biorthogonal(&m).unwrap();
        assert!((sd.lambda0().norm() - 0.8).abs() < 1e-10);
        assert!((sd.lambda(1).norm() - 0.8).abs() < 1e-10);
        assert!(sd.completeness_residual() < 1e-9);
        assert!(sd.biorthonormality_residual() < 1e-9);
        assert!((&sd.reconstruct() - &m).max_abs() < 1e-9);
    }

    #[test]
    fn power_matches_repeated_multiplication() {
        let m = ComplexMatrix::from_rows(&[
            &[c64(0.7, 0.1), c64(0.2, 0.0), c64(0.0, 0.1)],
            &[c64(0.0, 0.0), c64(0.4, -0.2), c64(0.3, 0.0)],
            &[c64(0.1, 0.0), c64(0.0, 0.0), c64(0.2, 0.0)],
        ])
        .unwrap();
        let sd = eig_biorthogonal(&m).unwrap();
        let mut direct = ComplexMatrix::identity(3);
        for _ in 0..7 {
            direct = &direct * &m;
        }
        assert!((&sd.power(7) - &direct).max_abs() < 1e-10);
    }

    #[test]
    fn leading_margin_and_gap_ratio() {
        let m = ComplexMatrix::from_fn(2, |i, j| {
            if i == j {
                if i == 0 {
                    c64(0.0, 1.0)
                } else {
                    c64(0.5, 0.0)
                }
            } else {
                c64(0.0, 0.0)
            }
        });
        let sd = eig_biorthogonal(&m).unwrap();
        assert!((sd.gap_ratio() - 0.5).abs() < 1e-12);
        assert!((sd.leading_margin() - 0.5).abs() < 1e-12);
    }

    fn matrix_from(entries: &[(f64, f64)], dim: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(dim, |i, j| {
            let (re, im) = entries[i * dim + j];
            c64(re, im)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn random_contractions_decompose(
            dim in 2usize..=5,
            entries in proptest::collection::vec((-0.45f64..0.45, -0.45f64..0.45), 64),
        ) {
            let m = matrix_from(&entries, dim);
            match eig_biorthogonal(&m) {
                Ok(sd) => {
                    prop_assert!(sd.biorthonormality_residual() < 1e-8);
                    prop_assert!(sd.completeness_residual() < 1e-7);
                    prop_assert!((&sd.reconstruct() - &m).max_abs() < 1e-7);
                }
                // Randomly drawn matrices can land near a defect; that is a
                // legitimate refusal, not a solver failure.
                Err(Error::DefectiveMatrix { .. }) => {}
                Err(e) => return Err(TestCaseError::fail(alloc::format!("{e}"))),
            }
        }

        #[test]
        fn eigenvalue_count_matches_dim(
            dim in 2usize..=8,
            entries in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64),
        ) {
            let m = matrix_from(&entries, dim);
            let lam = eigenvalues(&m).unwrap();
            prop_assert_eq!(lam.len(), dim);
            // Trace equals the eigenvalue sum (basic spectral sanity).
            let sum: Complex64 = lam.iter().sum();
            prop_assert!((sum - m.trace()).norm() < 1e-8 * (1.0 + m.frobenius_norm()));
        }
    }
}
