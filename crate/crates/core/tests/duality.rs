//! The dual-route comparison has to fail when a closed form is wrong,
//! otherwise a green run proves nothing. This file runs the comparison
//! once straight and once with a deliberately corrupted closed form.

use purify_core::models::{run_duality, FaultInjection, Family};

#[test]
fn all_families_agree_at_moderate_depth() {
    let rows = run_duality(32, 2024, None).expect("comparison runs");
    assert_eq!(rows.len(), Family::all().len());
    for row in &rows {
        assert!(
            row.pass,
            "{} residual {:.3e} over tolerance {:.1e}",
            row.family.name(),
            row.max_residual,
            row.tolerance
        );
    }
}

#[test]
fn comparison_is_seed_deterministic() {
    let a = run_duality(8, 99, None).expect("first run");
    let b = run_duality(8, 99, None).expect("second run");
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.family, y.family);
        assert_eq!(x.max_residual.to_bits(), y.max_residual.to_bits());
    }
}

#[test]
fn corrupted_closed_form_is_caught() {
    let rows = run_duality(8, 2024, Some(FaultInjection::FlipC2Sign)).expect("comparison runs");
    for row in &rows {
        if row.family == Family::C2 {
            assert!(!row.pass, "sign flip in c2 went unnoticed");
        } else {
            assert!(row.pass, "{} should be untouched by the fault", row.family.name());
        }
    }
}
