//! Numeric thresholds, centralized.
//!
//! Every comparison constant used by the crate lives in one record so that
//! library code and tests agree on a single set of numbers. Operations that
//! take tolerances accept a [`Tolerances`] reference; the `Default` values
//! below are the ones the public convenience wrappers use.

/// Comparison thresholds for the whole crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Largest elementwise |m - m†| accepted by Hermitian-only routines.
    pub hermitian_input: f64,
    /// Elementwise Hermiticity required of a density matrix.
    pub density_hermitian: f64,
    /// |Tr ρ - 1| accepted when constructing a density matrix.
    pub density_trace: f64,
    /// Most negative eigenvalue a density matrix may carry.
    pub density_eigen_floor: f64,
    /// Unit-norm slack for state vectors and projector amplitudes.
    pub unit_norm: f64,
    /// Residual target ‖m·u - λu‖ for accepted eigenpairs.
    pub eig_residual: f64,
    /// Eigenvalues are grouped as degenerate when both the magnitude gap
    /// and the complex distance fall below this.
    pub eig_grouping: f64,
    /// Ceiling on ‖P‖_F‖P⁻¹‖_F for the right-eigenvector matrix.
    pub max_condition: f64,
    /// |c| below which the closed-form eigenvector direction is degenerate.
    pub degenerate_direction: f64,
    /// Margin |λ₀| - |λ₁| at or below which the leading eigenvalue is
    /// reported degenerate.
    pub leading_margin: f64,
    /// Cumulative-yield floor; iteration truncates below it.
    pub yield_floor: f64,
    /// Coordinate-descent step below which refinement stops.
    pub refine_step: f64,
    /// Refinement pass budget.
    pub refine_max_iters: usize,
    /// Relative finite-difference step for the root-search Jacobian.
    pub newton_fd_step: f64,
    /// Residual magnitude accepted as a root of the optimality condition.
    pub newton_residual: f64,
    /// Parameter-space distance below which two roots are duplicates.
    pub dedupe_distance: f64,
    /// Margin for the admissibility constraints attached to optimal points.
    pub constraint_margin: f64,
    /// Residual allowed between closed-form and numeric routes.
    pub duality: f64,
}

impl Tolerances {
    /// The defaults, usable in `const` contexts.
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian_input: 1e-10,
        density_hermitian: 1e-10,
        density_trace: 1e-10,
        density_eigen_floor: -1e-9,
        unit_norm: 1e-12,
        eig_residual: 1e-9,
        eig_grouping: 1e-9,
        max_condition: 1e12,
        degenerate_direction: 1e-12,
        leading_margin: 1e-9,
        yield_floor: 1e-300,
        refine_step: 1e-10,
        refine_max_iters: 500,
        newton_fd_step: 1e-6,
        newton_residual: 1e-12,
        dedupe_distance: 1e-6,
        constraint_margin: 1e-6,
        duality: 1e-9,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
