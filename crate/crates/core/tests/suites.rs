//! Every verification suite must come back green on the shipped algebras.

#[test]
fn classical_suite() {
    let report = qgal_core::classical::verify_suite();
    for c in &report.checks {
        assert!(c.passed, "{c}");
    }
}

#[test]
fn hopf_suite_at_degrees_three_and_four() {
    for degree in [3, 4] {
        let report = qgal_core::hopf::verify_suite(degree);
        for c in &report.checks {
            assert!(c.passed, "degree {degree}: {c}");
        }
    }
}

#[test]
fn realization_suite() {
    let report = qgal_core::reps::verify_suite(8);
    for c in &report.checks {
        assert!(c.passed, "{c}");
    }
}

#[test]
fn dynamical_and_adjoint_suites() {
    for report in [qgal_core::qrf::verify_suite(), qgal_core::qrf::verify_adjoint_suite()] {
        for c in &report.checks {
            assert!(c.passed, "{c}");
        }
    }
}

#[test]
fn limit_checks() {
    let mut report = qgal_core::report::Report::new();
    qgal_core::specs::zero_deformation_table_checks(&mut report);
    for c in &report.checks {
        assert!(c.passed, "{c}");
    }
}
