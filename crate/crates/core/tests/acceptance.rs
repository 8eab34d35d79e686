//! The acceptance checklist: one test per numbered check, each printing a
//! pass/fail summary line. `cargo test --test acceptance -- --nocapture`
//! shows the lines; any failure carries a reproducer in the panic message.

use bniso::checks::{self, CheckReport, DEFAULT_SEED};

fn assert_green(report: CheckReport) {
    println!("{}", report.summary_line());
    assert!(
        report.passed,
        "{}\nreproducer: {}",
        report.summary_line(),
        report.reproducer.unwrap_or_default()
    );
}

#[test]
fn check_1_two_component_catalog() {
    assert_green(checks::check_catalog(DEFAULT_SEED));
}

#[test]
fn check_2_complete_witness_on_random_networks() {
    assert_green(checks::check_complete_witness(DEFAULT_SEED));
}

#[test]
fn check_3_route_specific_witnesses() {
    assert_green(checks::check_route_witnesses(DEFAULT_SEED));
}

#[test]
fn check_4_disjoint_flip_cover_sets() {
    assert_green(checks::check_x_sets(DEFAULT_SEED));
}

#[test]
fn check_5_nice_sets_and_missing_arcs() {
    assert_green(checks::check_nice_sets(DEFAULT_SEED));
}

#[test]
fn check_6_families_never_reduce_to_complete() {
    assert_green(checks::check_not_only_complete(DEFAULT_SEED));
}

#[test]
fn check_7_sparse_family_arc_bound() {
    assert_green(checks::check_sparse_family(DEFAULT_SEED));
}

#[test]
fn check_8_hypercube_isoperimetry() {
    assert_green(checks::check_isoperimetry(DEFAULT_SEED));
}

#[test]
fn check_9_three_component_complete_graph() {
    assert_green(checks::check_three_component_complete(DEFAULT_SEED));
}
