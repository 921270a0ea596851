//! Parameter-regime exploration.
//!
//! Purification quality at a parameter point is summarized by two numbers
//! read off the spectrum of V: how far the leading eigenvalue sits from
//! the unit circle (`loss = (1 − |λ₀|)²`, the asymptotic yield penalty)
//! and the gap ratio `|λ₁/λ₀|` (convergence is geometric in its square).
//! [`sweep`] scores a model over a small cartesian grid, [`refine`]
//! polishes any scalar objective by coordinate descent with golden-section
//! line searches, and [`solve_optimal_condition`] finds the operating
//! points of the symmetric successive protocol where the distillation
//! condition holds exactly.

use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Error;
use crate::linalg::eigenvalues_with;
use crate::models::{
    optimal_residual, successive_symmetric_check, ModelConfig, OptimalityReport,
    SuccessiveSymmetric,
};
use crate::tolerances::Tolerances;

/// Hard cap on the number of grid points a sweep will accept.
pub const MAX_GRID_POINTS: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisScale {
    Linear,
    /// Geometric spacing; requires a strictly positive range.
    Log,
}

/// One swept parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    /// Parameter name as understood by [`ModelConfig::set_param`].
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub n_points: usize,
    pub scale: AxisScale,
}

impl Axis {
    /// The i-th grid coordinate; a single-point axis sits at `min`.
    pub fn value_at(&self, i: usize) -> f64 {
        if self.n_points <= 1 {
            return self.min;
        }
        let f = (i as f64) / ((self.n_points - 1) as f64);
        match self.scale {
            AxisScale::Linear => self.min + (self.max - self.min) * f,
            AxisScale::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * f).exp(),
        }
    }

    fn validate(&self) -> Result<(), Error> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::InvalidSweep("axis bounds must be finite"));
        }
        if self.n_points == 0 {
            return Err(Error::InvalidSweep("axis needs at least one point"));
        }
        if self.n_points >= 2 && self.min >= self.max {
            return Err(Error::InvalidSweep(
                "axis with several points needs min < max",
            ));
        }
        if self.scale == AxisScale::Log && self.min <= 0.0 {
            return Err(Error::InvalidSweep("log axis needs a positive range"));
        }
        Ok(())
    }
}

/// A cartesian sweep grid of one to three axes.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub axes: Vec<Axis>,
}

impl SweepGrid {
    pub fn total_points(&self) -> u128 {
        self.axes.iter().map(|a| a.n_points as u128).product()
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.axes.is_empty() || self.axes.len() > 3 {
            return Err(Error::InvalidSweep("sweeps take one to three axes"));
        }
        for axis in &self.axes {
            axis.validate()?;
        }
        let points = self.total_points();
        if points > MAX_GRID_POINTS {
            return Err(Error::GridTooLarge {
                points,
                max: MAX_GRID_POINTS,
            });
        }
        Ok(())
    }
}

/// Spectral figures of merit at one parameter point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimalityScore {
    pub lambda0_mag: f64,
    /// `(1 − |λ₀|)²`.
    pub loss: f64,
    /// `|λ₁| / |λ₀|`; 0 for one-dimensional V, 1 when `λ₀ = 0`.
    pub gap_ratio: f64,
    /// `loss + gap_weight · gap_ratio²`; the quantity sweeps minimize.
    pub combined: f64,
}

/// Scores one configuration from the eigenvalue magnitudes of its V.
pub fn combined_score(
    config: &ModelConfig,
    gap_weight: f64,
    tol: &Tolerances,
) -> Result<OptimalityScore, Error> {
    let v = config.projected_v()?;
    let lam = eigenvalues_with(&v, tol)?;
    let l0 = lam[0].norm();
    let gap_ratio = if lam.len() < 2 {
        0.0
    } else if l0 == 0.0 {
        1.0
    } else {
        lam[1].norm() / l0
    };
    let loss = (1.0 - l0) * (1.0 - l0);
    let combined = loss + gap_weight * gap_ratio * gap_ratio;
    if !combined.is_finite() {
        return Err(Error::NonFiniteObjective);
    }
    Ok(OptimalityScore {
        lambda0_mag: l0,
        loss,
        gap_ratio,
        combined,
    })
}

/// One evaluated grid point. Points whose evaluation failed carry the
/// error instead of a score and sort behind every scored point.
#[derive(Clone, Debug)]
pub struct SweepPoint {
    pub coords: Vec<f64>,
    pub score: Option<OptimalityScore>,
    pub error: Option<Error>,
}

fn lex_less(a: &[f64], b: &[f64]) -> core::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            core::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    core::cmp::Ordering::Equal
}

/// Evaluates the grid and returns every point, best first.
///
/// Ordering is total and deterministic: ascending `combined`, ties broken
/// lexicographically by coordinates, failed points last.
pub fn sweep(
    config: &ModelConfig,
    grid: &SweepGrid,
    gap_weight: f64,
    tol: &Tolerances,
) -> Result<Vec<SweepPoint>, Error> {
    grid.validate()?;
    for axis in &grid.axes {
        if config.param(&axis.param).is_none() {
            return Err(Error::InvalidSweep("unknown parameter for this model"));
        }
    }
    let total = grid.total_points() as usize;
    let mut points = Vec::with_capacity(total);
    let mut index = alloc::vec![0usize; grid.axes.len()];
    for _ in 0..total {
        let coords: Vec<f64> = grid
            .axes
            .iter()
            .zip(&index)
            .map(|(a, &i)| a.value_at(i))
            .collect();
        let mut cfg = config.clone();
        let mut failed = None;
        for (axis, &x) in grid.axes.iter().zip(&coords) {
            if let Err(e) = cfg.set_param(&axis.param, x) {
                failed = Some(e);
                break;
            }
        }
        let outcome = match failed {
            Some(e) => Err(e),
            None => combined_score(&cfg, gap_weight, tol),
        };
        points.push(match outcome {
            Ok(score) => SweepPoint {
                coords,
                score: Some(score),
                error: None,
            },
            Err(e) => SweepPoint {
                coords,
                score: None,
                error: Some(e),
            },
        });
        // Odometer increment, last axis fastest.
        for k in (0..index.len()).rev() {
            index[k] += 1;
            if index[k] < grid.axes[k].n_points {
                break;
            }
            index[k] = 0;
        }
    }
    points.sort_by(|a, b| match (&a.score, &b.score) {
        (Some(x), Some(y)) => x
            .combined
            .total_cmp(&y.combined)
            .then_with(|| lex_less(&a.coords, &b.coords)),
        (Some(_), None) => core::cmp::Ordering::Less,
        (None, Some(_)) => core::cmp::Ordering::Greater,
        (None, None) => lex_less(&a.coords, &b.coords),
    });
    Ok(points)
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimization of `f` on `[lo, hi]`; errors count as +∞.
fn golden_line<F>(f: &mut F, lo: f64, hi: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (a + b);
    (mid, f(mid))
}

/// Polishes `start` by cyclic coordinate descent inside `bounds`.
///
/// Each pass line-searches every coordinate over its full bounded range
/// and keeps a move only when it does not increase the objective, so the
/// returned value is never worse than the starting one. Evaluation errors
/// at probe points are treated as +∞; an error at `start` itself is
/// returned. Stops after [`Tolerances::refine_max_iters`] passes or when a
/// full pass improves the objective by less than
/// [`Tolerances::refine_step`].
pub fn refine<F>(
    f: &mut F,
    start: &[f64],
    bounds: &[(f64, f64)],
    tol: &Tolerances,
) -> Result<(Vec<f64>, f64), Error>
where
    F: FnMut(&[f64]) -> Result<f64, Error>,
{
    if start.len() != bounds.len() || start.is_empty() {
        return Err(Error::InvalidParams(
            "refine needs matching, non-empty start and bounds",
        ));
    }
    for (x, (lo, hi)) in start.iter().zip(bounds) {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParams("refine bounds must be finite, lo < hi"));
        }
        if !x.is_finite() {
            return Err(Error::InvalidParams("refine start must be finite"));
        }
    }
    let mut current: Vec<f64> = start
        .iter()
        .zip(bounds)
        .map(|(x, (lo, hi))| x.clamp(*lo, *hi))
        .collect();
    let mut f_cur = f(&current)?;
    if !f_cur.is_finite() {
        return Err(Error::NonFiniteObjective);
    }
    for _ in 0..tol.refine_max_iters {
        let f_pass_start = f_cur;
        for k in 0..current.len() {
            let mut probe = current.clone();
            let mut line = |x: f64| {
                probe[k] = x;
                match f(&probe) {
                    Ok(v) if v.is_finite() => v,
                    _ => f64::INFINITY,
                }
            };
            let (x_best, f_best) = golden_line(&mut line, bounds[k].0, bounds[k].1);
            if f_best <= f_cur {
                current[k] = x_best;
                f_cur = f_best;
            }
        }
        if f_pass_start - f_cur < tol.refine_step {
            break;
        }
    }
    Ok((current, f_cur))
}

/// A free parameter of the symmetric successive protocol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreeParam {
    Omega,
    G,
    T,
    Tau,
}

impl FreeParam {
    pub fn name(&self) -> &'static str {
        match self {
            FreeParam::Omega => "omega",
            FreeParam::G => "g",
            FreeParam::T => "t",
            FreeParam::Tau => "tau",
        }
    }

    fn set(&self, sym: &mut SuccessiveSymmetric, value: f64) {
        match self {
            FreeParam::Omega => sym.omega = value,
            FreeParam::G => sym.g = value,
            FreeParam::T => sym.t = value,
            FreeParam::Tau => sym.tau = value,
        }
    }
}

/// A root search for the distillation condition `R = 0`.
#[derive(Clone, Debug)]
pub struct OptimalSearch {
    /// Fixed parameters; the free ones are overwritten during the search.
    pub base: SuccessiveSymmetric,
    pub free: (FreeParam, FreeParam),
    pub ranges: ((f64, f64), (f64, f64)),
    /// Seed points per free axis for the coarse scan.
    pub grid: usize,
    /// At most this many distinct roots are returned.
    pub max_roots: usize,
}

/// One admissible root of the distillation condition.
#[derive(Clone, Debug)]
pub struct OptimalPoint {
    pub params: SuccessiveSymmetric,
    /// Values of the two free parameters, in declaration order.
    pub coords: (f64, f64),
    /// `|R|` at the root.
    pub residual: f64,
    pub report: OptimalityReport,
}

fn in_range(x: f64, (lo, hi): (f64, f64)) -> bool {
    x >= lo && x <= hi
}

/// Finds the points inside the declared box where the symmetric
/// protocol's distillation condition `R = 0` holds.
///
/// A coarse `grid × grid` scan of `|R|` seeds damped Newton iterations
/// (central finite differences); converged roots are kept only when they
/// lie inside the box and pass both admissibility constraints, since at an
/// inadmissible root the rest of the spectrum touches the unit circle and
/// nothing is distilled. Distinct roots are deduplicated, ordered
/// lexicographically by coordinates, and truncated to `max_roots`. The
/// whole search is deterministic. Returns [`Error::NoSolutionInRange`]
/// when no admissible root exists in the box.
pub fn solve_optimal_condition(
    search: &OptimalSearch,
    tol: &Tolerances,
) -> Result<Vec<OptimalPoint>, Error> {
    let (fa, fb) = search.free;
    if fa == fb {
        return Err(Error::InvalidParams("free parameters must be distinct"));
    }
    if search.grid < 2 || search.max_roots == 0 {
        return Err(Error::InvalidParams(
            "search needs grid >= 2 and max_roots >= 1",
        ));
    }
    for (lo, hi) in [search.ranges.0, search.ranges.1] {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParams("search ranges must be finite, lo < hi"));
        }
    }
    search.base.params().validate()?;

    let residual_at = |x: f64, y: f64| {
        let mut sym = search.base;
        fa.set(&mut sym, x);
        fb.set(&mut sym, y);
        (optimal_residual(&sym), sym)
    };

    // Coarse scan.
    let mut seeds: Vec<(f64, f64, f64)> = Vec::with_capacity(search.grid * search.grid);
    for i in 0..search.grid {
        for j in 0..search.grid {
            let fx = (i as f64) / ((search.grid - 1) as f64);
            let fy = (j as f64) / ((search.grid - 1) as f64);
            let x = search.ranges.0 .0 + (search.ranges.0 .1 - search.ranges.0 .0) * fx;
            let y = search.ranges.1 .0 + (search.ranges.1 .1 - search.ranges.1 .0) * fy;
            seeds.push((residual_at(x, y).0.norm(), x, y));
        }
    }
    seeds.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
    });
    // Keep the 20 best seeds subject to a minimum spacing of a few grid
    // cells, so several basins get a Newton start instead of one basin
    // soaking up the whole budget.
    let sep_x = 3.0 * (search.ranges.0 .1 - search.ranges.0 .0) / (search.grid as f64);
    let sep_y = 3.0 * (search.ranges.1 .1 - search.ranges.1 .0) / (search.grid as f64);
    let mut starts: Vec<(f64, f64)> = Vec::new();
    for &(_, x, y) in &seeds {
        if starts.len() == 20 {
            break;
        }
        if starts
            .iter()
            .any(|&(cx, cy)| (cx - x).abs() < sep_x && (cy - y).abs() < sep_y)
        {
            continue;
        }
        starts.push((x, y));
    }

    let mut roots: Vec<(f64, f64)> = Vec::new();
    for &(x0, y0) in &starts {
        let (mut x, mut y) = (x0, y0);
        let mut r = residual_at(x, y).0;
        let mut converged = false;
        for _ in 0..80 {
            if r.norm() < tol.newton_residual {
                converged = true;
                break;
            }
            let hx = tol.newton_fd_step * x.abs().max(1.0);
            let hy = tol.newton_fd_step * y.abs().max(1.0);
            let dx = (residual_at(x + hx, y).0 - residual_at(x - hx, y).0) / (2.0 * hx);
            let dy = (residual_at(x, y + hy).0 - residual_at(x, y - hy).0) / (2.0 * hy);
            // Newton on (Re R, Im R) with the real 2x2 Jacobian.
            let det = dx.re * dy.im - dy.re * dx.im;
            if det.abs() < 1e-300 {
                break;
            }
            let step_x = (dy.im * r.re - dy.re * r.im) / det;
            let step_y = (dx.re * r.im - dx.im * r.re) / det;
            // Damping: halve the step until the residual stops growing.
            let mut scale = 1.0;
            let mut accepted = false;
            for _ in 0..10 {
                let (xn, yn) = (x - scale * step_x, y - scale * step_y);
                let rn = residual_at(xn, yn).0;
                if rn.norm() < r.norm() {
                    x = xn;
                    y = yn;
                    r = rn;
                    accepted = true;
                    break;
                }
                scale *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if !(converged || r.norm() < tol.newton_residual) {
            continue;
        }
        if !(in_range(x, search.ranges.0) && in_range(y, search.ranges.1)) {
            continue;
        }
        if roots
            .iter()
            .any(|&(rx, ry)| ((rx - x).powi(2) + (ry - y).powi(2)).sqrt() < tol.dedupe_distance)
        {
            continue;
        }
        roots.push((x, y));
    }

    roots.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let mut out = Vec::new();
    for (x, y) in roots {
        let (r, sym) = residual_at(x, y);
        let report = successive_symmetric_check(&sym, tol)?;
        if !(report.interaction_admissible && report.phase_admissible) {
            continue;
        }
        out.push(OptimalPoint {
            params: sym,
            coords: (x, y),
            residual: r.norm(),
            report,
        });
        if out.len() == search.max_roots {
            break;
        }
    }
    if out.is_empty() {
        return Err(Error::NoSolutionInRange);
    }
    Ok(out)
}
