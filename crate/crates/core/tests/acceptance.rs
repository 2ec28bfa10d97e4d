//! Acceptance suite: the reference counts and tables the library must
//! reproduce, one test per criterion, each printing a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Everything is exact integer arithmetic; no tolerances anywhere.

use psl2_lifts::prepared::{FreshSymbols, MemoProvider, SymbolProvider};
use psl2_lifts::verify::run_fixture;
use std::sync::OnceLock;

static FRESH: FreshSymbols = FreshSymbols;
static PROVIDER: OnceLock<MemoProvider<'static>> = OnceLock::new();

fn provider() -> &'static dyn SymbolProvider {
    PROVIDER.get_or_init(|| MemoProvider::new(&FRESH))
}

fn check(name: &str) {
    let results = run_fixture(name, provider()).unwrap_or_else(|e| panic!("{name}: {e}"));
    for r in &results {
        println!(
            "{} {}: {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
    }
    assert!(
        results.iter().all(|r| r.passed),
        "criterion {name} failed: {}",
        results
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.detail.clone())
            .collect::<Vec<_>>()
            .join(" | ")
    );
}

/// Criterion 1: n(N) congruence-lift counts for N = 1..6 are 1,5,3,9,3,9.
#[test]
fn criterion_01_gamma_counts() {
    check("thm-gamma");
}

/// Criterion 2: the Gamma_1(4) example (levels, regularity grid, dims).
#[test]
fn criterion_02_gamma1_4() {
    check("ex-gamma1-4");
}

/// Criterion 3: the Gamma_1(6) example, including the V_6 and V_12 spans.
#[test]
fn criterion_03_gamma1_6() {
    check("ex-gamma1-6");
}

/// Criterion 4: Gamma_0(8): all lifts congruence, V_16 = {0}.
#[test]
fn criterion_04_gamma0_8() {
    check("ex-gamma0-8");
}

/// Criterion 5: Gamma_0(16): 4 + 4 congruence of 32, dim V_16 = 3, dim V_32 = 2.
#[test]
fn criterion_05_gamma0_16() {
    check("ex-gamma0-16");
}

/// Criterion 6: Gamma_0(20): 4 + 4 congruence of 128, 120 noncongruence.
#[test]
fn criterion_06_gamma0_20() {
    check("ex-gamma0-20");
}

/// Criterion 7: Gamma_0(p^r), p = 3 mod 4: the three congruence lifts are
/// the preimage, G1 and G2.
#[test]
fn criterion_07_gamma0_prime_powers() {
    check("thm-gamma0");
}

/// Criterion 8: noncongruence counts for Gamma_0(p), p in {11, 19, 23},
/// and the p = 7 formula/computation comparison.
#[test]
fn criterion_08_prime_counts() {
    check("lemma-7-6");
}

/// Criterion 9: Gamma(2)^2 = Gamma(4) identities and generator expressions.
#[test]
fn criterion_09_gamma2_squared() {
    check("gamma2-squared");
}

/// Criterion 10: Gamma(4) lift classification and dim V_8 = 2.
#[test]
fn criterion_10_gamma4_lifts() {
    check("gamma4-lifts");
}

/// Criterion 11: property suites (level restriction, 2N conjugates, lift
/// counts, word round trips, independent membership verification).
#[test]
fn criterion_11_properties() {
    check("properties");
}
