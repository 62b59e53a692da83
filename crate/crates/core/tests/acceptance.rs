//! Acceptance gate: one test per criterion, each printing its pass/fail
//! line. `tdl check` runs the same code outside the test harness.

use tdl_core::budget::Budget;
use tdl_core::verify;

fn run(criterion: impl Fn(&Budget) -> verify::Outcome) {
    let budget = Budget::from_env();
    let outcome = criterion(&budget);
    println!("{}", outcome.line());
    assert!(outcome.passed, "{}", outcome.line());
}

#[test]
fn criterion_1_weighted_extremal_exactness() {
    run(verify::criterion_1);
}

#[test]
fn criterion_2_census_goldens_and_dual_enumerators() {
    run(verify::criterion_2);
}

#[test]
fn criterion_3_blow_up_containment_transfer() {
    run(verify::criterion_3);
}

#[test]
fn criterion_4_stability_finite_shadow() {
    run(verify::criterion_4);
}

#[test]
fn criterion_5_sampler_uniformity() {
    run(verify::criterion_5);
}

#[test]
fn criterion_6_pattern_quantities() {
    run(verify::criterion_6);
}

#[test]
fn criterion_7_property_suites() {
    run(verify::criterion_7);
}
