//! The numerical check suite must pass end to end.

#[test]
fn numerical_suite_is_green() {
    for c in qgal_wavesim::checks::verify_suite() {
        assert!(c.passed, "{}: {}", c.key, c.detail);
    }
}
