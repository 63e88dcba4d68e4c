//! Shared helpers for the integration suites.
//!
//! Each suite compiles this module separately and uses a different subset
//! of the helpers, so unused-code warnings are suppressed here.
#![allow(dead_code)]

use srsolver_core::decomp::{nicify, NiceTreeDecomposition, TreeDecomposition};
use srsolver_core::dp;
use srsolver_core::model::{Graph, SigmaRhoSpec};
use srsolver_core::oracle;

/// A broad battery of membership specifications: classic problems plus
/// finite/cofinite mixes, including one with `0 ∈ ρ` (the empty selection
/// violates nothing) and one where both sides are finite and gappy.
pub fn spec_battery() -> Vec<(&'static str, SigmaRhoSpec)> {
    [
        ("dominating-set", "cofinite:0", "cofinite:1"),
        ("total-dominating-set", "cofinite:1", "cofinite:1"),
        ("independent-dominating-set", "finite:{0}", "cofinite:1"),
        ("perfect-code", "finite:{0}", "finite:{1}"),
        ("two-dominating-set", "cofinite:0", "cofinite:2"),
        ("zero-in-rho", "finite:{0,1}", "finite:{0}"),
        ("induced-matching-ish", "finite:{1}", "cofinite:0"),
        ("gappy-both-sides", "finite:{0,2}", "finite:{1,2}"),
    ]
    .into_iter()
    .map(|(name, s, r)| (name, SigmaRhoSpec::parse(s, r).unwrap()))
    .collect()
}

/// Nicifies `td` and solves, panicking with context on any failure.
pub fn solve_via(g: &Graph, spec: &SigmaRhoSpec, td: &TreeDecomposition) -> dp::FeasibilityResult {
    let ntd = nicify(td, g).unwrap();
    dp::solve(g, spec, &ntd).unwrap()
}

/// Asserts the solver and the subset-enumeration oracle agree on the whole
/// `(k, ℓ)` grid.
pub fn assert_matches_oracle(
    context: &str,
    g: &Graph,
    spec: &SigmaRhoSpec,
    td: &TreeDecomposition,
) {
    let got = solve_via(g, spec, td);
    let want = oracle::brute_force_table(g, spec).unwrap();
    if let Some(diff) = got.first_difference(&want) {
        panic!(
            "{context}: solver disagrees with oracle at k={}, l={}: solver={}, oracle={}",
            diff.k, diff.l, diff.left, diff.right
        );
    }
}

/// Nicified form of the single-bag decomposition.
pub fn nice_trivial(g: &Graph) -> NiceTreeDecomposition {
    nicify(&TreeDecomposition::trivial(g), g).unwrap()
}
