//! End-to-end acceptance gates: one test per criterion, each asserting the
//! relevant rows of a verification suite at default budgets.
//!
//! Suites are computed once and shared across criteria, so the full run costs
//! one `verify all` plus assertions.  Every test prints a single
//! `criterion N (name): PASS|FAIL` line (visible with `--nocapture`).

use std::sync::OnceLock;

use hobody::harness::{run_suite, CheckRow, SuiteConfig, SuiteReport, SUITE_NAMES};

fn suite(name: &str) -> &'static SuiteReport {
    static CELLS: [OnceLock<SuiteReport>; 12] = [const { OnceLock::new() }; 12];
    let idx = SUITE_NAMES
        .iter()
        .position(|n| *n == name)
        .expect("known suite");
    CELLS[idx].get_or_init(|| {
        run_suite(name, &SuiteConfig::default()).unwrap_or_else(|e| panic!("suite {name}: {e}"))
    })
}

fn gate(number: usize, name: &str, rows: &[&CheckRow], expect_at_least: usize) {
    let pass = rows.len() >= expect_at_least && rows.iter().all(|r| r.pass);
    println!(
        "criterion {number} ({name}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
    for r in rows.iter().filter(|r| !r.pass) {
        println!(
            "  failed row: {} / {} (n={}, m={}) value {} vs reference {} (sigma {})",
            r.suite, r.body, r.n, r.m, r.value, r.reference, r.std_error
        );
    }
    assert!(
        pass,
        "criterion {number} ({name}): {} rows, {} failed (expected at least {expect_at_least} rows)",
        rows.len(),
        rows.iter().filter(|r| !r.pass).count()
    );
}

#[test]
fn c01_rogers_shephard_equality() {
    let rows: Vec<&CheckRow> = suite("rogers-shephard")
        .rows
        .iter()
        .filter(|r| r.body.starts_with("simplex"))
        .collect();
    gate(1, "rogers-shephard equality", &rows, 4);
}

#[test]
fn c02_rogers_shephard_direction() {
    let rows: Vec<&CheckRow> = suite("rogers-shephard")
        .rows
        .iter()
        .filter(|r| !r.body.starts_with("simplex"))
        .collect();
    // cube + cross + 10 random seeds on the four-cell grid.
    gate(2, "rogers-shephard direction", &rows, 48);
}

#[test]
fn c03_zhang_projection_inequality() {
    let rows: Vec<&CheckRow> = suite("zhang").rows.iter().collect();
    gate(3, "zhang equality and lower bound", &rows, 24);
}

#[test]
fn c04_petty_maximality() {
    let rows: Vec<&CheckRow> = suite("petty").rows.iter().collect();
    gate(4, "petty maximality and anchors", &rows, 27);
}

#[test]
fn c05_variational_formula() {
    let rows: Vec<&CheckRow> = suite("variational").rows.iter().collect();
    gate(5, "variational formula", &rows, 6);
}

#[test]
fn c06_berwald_chain() {
    let rows: Vec<&CheckRow> = suite("chain").rows.iter().collect();
    gate(6, "berwald chain monotonicity", &rows, 22);
}

#[test]
fn c07_radial_mean_body_volume() {
    let rows: Vec<&CheckRow> = suite("rmb-volume").rows.iter().collect();
    gate(7, "radial mean body volume identity", &rows, 14);
}

#[test]
fn c08_duality_identity() {
    let rows: Vec<&CheckRow> = suite("duality").rows.iter().collect();
    assert_eq!(rows.len(), 6, "six (K, L) pairs");
    gate(8, "duality identity", &rows, 6);
}

#[test]
fn c09_ball_centroid_constant() {
    let rows: Vec<&CheckRow> = suite("busemann-petty")
        .rows
        .iter()
        .filter(|r| r.body.starts_with("max-rel-dev") || r.body.starts_with("anchor"))
        .collect();
    // Three grid cells of direction sweeps plus the (2, 1) anchor.
    gate(9, "ball centroid constant", &rows, 4);
}

#[test]
fn c10_busemann_petty_minimality() {
    let rows: Vec<&CheckRow> = suite("busemann-petty")
        .rows
        .iter()
        .filter(|r| !r.body.starts_with("max-rel-dev") && !r.body.starts_with("anchor"))
        .collect();
    // Reference plus five competitors for each of m = 1, 2.
    gate(10, "busemann-petty minimality", &rows, 12);
}

#[test]
fn c11_random_simplex() {
    let rows: Vec<&CheckRow> = suite("random-simplex").rows.iter().collect();
    gate(11, "random-simplex identity and anchor", &rows, 8);
}

#[test]
fn c12_steiner_suite() {
    let rows: Vec<&CheckRow> = suite("steiner").rows.iter().collect();
    gate(12, "steiner symmetrization", &rows, 19);
}

#[test]
fn c13_isoperimetric_suite() {
    let rows: Vec<&CheckRow> = suite("petty-isoperimetric").rows.iter().collect();
    gate(13, "petty isoperimetric bound", &rows, 31);
}

#[test]
fn c14_invariance_suite() {
    let rows: Vec<&CheckRow> = suite("invariance").rows.iter().collect();
    gate(14, "invariance and equivariance", &rows, 8);
}
