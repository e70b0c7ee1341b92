//! Acceptance suite: one test per acceptance criterion, each printing a
//! pass/fail line and enforcing its time budget.

use qgal_core::report::Report;
use std::time::{Duration, Instant};

fn assert_keys(report: &Report, keys: &[&str]) -> Result<(), String> {
    for key in keys {
        let check = report
            .checks
            .iter()
            .find(|c| c.key == *key)
            .unwrap_or_else(|| panic!("missing check `{key}`"));
        if !check.passed {
            return Err(format!("{check}"));
        }
    }
    Ok(())
}

fn conclude(criterion: &str, elapsed: Duration, budget: Duration, outcome: Result<(), String>) {
    let status = if outcome.is_ok() && elapsed <= budget { "PASS" } else { "FAIL" };
    println!(
        "criterion {criterion}: {status} ({:.2}s of {:.0}s budget)",
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    if let Err(msg) = outcome {
        panic!("criterion {criterion}: {msg}");
    }
    assert!(elapsed <= budget, "criterion {criterion} exceeded its {budget:?} budget: {elapsed:?}");
}

#[test]
fn criterion_1_group_law_and_central_phase() {
    let start = Instant::now();
    let report = qgal_core::classical::verify_suite();
    let outcome = assert_keys(
        &report,
        &["group-law-associativity", "group-law-identity-inverse", "central-phase-composition"],
    );
    conclude("1 (group law & central phase)", start.elapsed(), Duration::from_secs(1), outcome);
}

#[test]
fn criterion_2_bracket_compatibility() {
    let start = Instant::now();
    let report = qgal_core::classical::verify_suite();
    let outcome = assert_keys(
        &report,
        &[
            "bracket-group-law-compatibility",
            "bracket-jacobi",
            "casimir-leaf-functions",
            "symplectic-realization",
        ],
    );
    conclude("2 (bracket/group-law compatibility)", start.elapsed(), Duration::from_secs(5), outcome);
}

#[test]
fn criterion_3_duality() {
    let start = Instant::now();
    let report = qgal_core::hopf::verify_suite(4);
    let outcome = assert_keys(
        &report,
        &[
            "pairing-coproduct-axiom",
            "pairing-product-axiom",
            "pairing-mixed-instances",
            "coproduct-tensor-boundaries",
            "dual-commutator-M-P0",
            "dual-commutator-M-P1",
            "dual-commutator-M-K",
            "dual-commutator-P0-P1",
            "dual-commutator-P0-K",
            "dual-commutator-P1-K",
            "dual-basis-identification",
            "unit-upper-ladder-displays",
            "dual-coproduct-M",
            "dual-coproduct-P0",
            "dual-coproduct-P1",
            "dual-coproduct-K",
            "coproduct-homomorphism-coordinates",
            "coproduct-homomorphism-generators",
            "coassociativity-coordinates",
            "coassociativity-generators",
            "dual-form-exponential-factorization",
            "group-law-undeformed",
        ],
    );
    conclude("3 (duality tensors & pairing)", start.elapsed(), Duration::from_secs(60), outcome);
}

#[test]
fn criterion_4_realizations() {
    let start = Instant::now();
    let report = qgal_core::reps::verify_suite(8);
    let outcome = assert_keys(
        &report,
        &[
            "coordinate-relations-exact",
            "coordinate-relations-series",
            "generator-relations-exact",
            "generator-relations-series",
            "coordinate-casimirs",
            "generator-casimirs",
        ],
    );
    conclude("4 (phase-space realizations)", start.elapsed(), Duration::from_secs(30), outcome);
}

#[test]
fn criterion_5_dynamical_algebra() {
    let start = Instant::now();
    let report = qgal_core::qrf::verify_suite();
    let outcome = assert_keys(
        &report,
        &[
            "dynamical-table",
            "dynamical-jacobi",
            "closure-dimension-seven",
            "linear-combination-identities",
            "first-order-exponents-match-displayed-forms",
        ],
    );
    conclude("5 (seven-element dynamical algebra)", start.elapsed(), Duration::from_secs(60), outcome);
}

#[test]
fn criterion_6_adjoint_tables() {
    let start = Instant::now();
    let report = qgal_core::qrf::verify_adjoint_suite();
    let outcome = assert_keys(&report, &["adjoint-table", "adjoint-round-trips"]);
    conclude("6 (adjoint-action tables)", start.elapsed(), Duration::from_secs(30), outcome);
}

#[test]
fn criterion_7_limits() {
    let start = Instant::now();
    let mut report = Report::new();
    qgal_core::reps::classical_limit_checks(&mut report);
    qgal_core::qrf::classical_frame_limit_checks(&mut report);
    qgal_core::specs::zero_deformation_table_checks(&mut report);
    let outcome = assert_keys(
        &report,
        &[
            "classical-limit-coordinate-brackets",
            "classical-limit-realization-form",
            "zero-deformation-generator-images",
            "zero-deformation-coordinate-images",
            "classical-frame-limit-ops",
            "classical-frame-limit-first-order",
            "zero-deformation-abstract-table",
            "zero-deformation-physical-table",
        ],
    );
    conclude("7 (classical and zero-deformation limits)", start.elapsed(), Duration::from_secs(10), outcome);
}

#[test]
fn criterion_8_wavepacket_checks() {
    let start = Instant::now();
    let checks = qgal_wavesim::checks::verify_suite();
    let mut outcome = Ok(());
    for c in &checks {
        if !c.passed {
            outcome = Err(format!("{}: {}", c.key, c.detail));
            break;
        }
    }
    for key in [
        "unitarity-drift",
        "semiclassical-fidelity",
        "semiclassical-fidelity-convergence",
        "superposition-residual",
        "superposition-residual-monotone",
        "composition-phase-classical",
        "composition-phase-conditional",
        "grid-refinement-stability",
    ] {
        assert!(checks.iter().any(|c| c.key == key), "missing numerical check `{key}`");
    }
    conclude("8 (wavepacket simulator)", start.elapsed(), Duration::from_secs(120), outcome);
}
