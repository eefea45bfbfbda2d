//! Shared assertions for unit tests.

/// Asserts |a − b| ≤ atol + rtol·|b|, reporting both values on failure.
pub fn assert_close(a: f64, b: f64, atol: f64, rtol: f64) {
    let tol = atol + rtol * b.abs();
    assert!(
        (a - b).abs() <= tol,
        "values differ: {a:.17e} vs {b:.17e} (|diff| = {:.3e}, tol = {:.3e})",
        (a - b).abs(),
        tol
    );
}
