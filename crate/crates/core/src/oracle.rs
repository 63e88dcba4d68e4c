//! Brute-force ground truth by exhaustive subset enumeration.
//!
//! This module is deliberately dumb: it walks all `2^n` selections and
//! evaluates the satisfied/violated definition directly through membership
//! tests. It shares no machinery with the dynamic program beyond the core
//! vocabulary types, so agreement between the two is meaningful evidence.
//!
//! The walk follows a Gray code, flipping one vertex per step and patching
//! the affected neighbor counts, which keeps each step `O(degree)` and the
//! default cap of `n ≤ 20` comfortably fast.

use thiserror::Error;

use crate::dp::FeasibilityResult;
use crate::model::{Graph, SigmaRhoSpec};

/// Largest vertex count the oracle enumerates by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    /// Enumeration would take `2^n` steps; refuse instead of hanging.
    #[error("graph has {n} vertices, above the enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    /// `min_violations` was asked about a selection size larger than `n`.
    #[error("no selection of size {k} exists in a graph on {n} vertices")]
    SizeOutOfRange { k: usize, n: usize },
}

/// Exhaustively computes the exact `(k, ℓ)` feasibility table, refusing
/// graphs above [`DEFAULT_ENUMERATION_CAP`] vertices.
pub fn brute_force_table(g: &Graph, spec: &SigmaRhoSpec) -> Result<FeasibilityResult, OracleError> {
    brute_force_table_with_cap(g, spec, DEFAULT_ENUMERATION_CAP)
}

/// [`brute_force_table`] with an explicit cap (still refuses `n ≥ 63`,
/// where the subset counter itself would overflow).
pub fn brute_force_table_with_cap(
    g: &Graph,
    spec: &SigmaRhoSpec,
    cap: usize,
) -> Result<FeasibilityResult, OracleError> {
    let n = g.vertex_count();
    if n > cap || n >= 63 {
        return Err(OracleError::CapExceeded { n, cap: cap.min(62) });
    }
    let w = n + 1;
    let mut exact = vec![false; w * w];
    if n == 0 {
        exact[0] = true;
        return Ok(FeasibilityResult::from_exact(0, exact));
    }

    let mut selected = vec![false; n];
    let mut sel_nbrs = vec![0usize; n];
    let mut violated = vec![false; n];
    let mut num_violated = 0usize;
    let mut num_selected = 0usize;
    // Subsets seen per selection size; checked against binomials at the end
    // as a guard on enumeration completeness.
    let mut per_size = vec![0u64; w];

    let status = |is_selected: bool, count: usize, spec: &SigmaRhoSpec| -> bool {
        // Returns "violated?".
        let set = if is_selected { &spec.sigma } else { &spec.rho };
        !set.contains(count)
    };

    for flag in &mut violated {
        *flag = status(false, 0, spec);
        if *flag {
            num_violated += 1;
        }
    }
    exact[num_selected * w + num_violated] = true;
    per_size[0] += 1;

    for step in 1u64..(1u64 << n) {
        let v = step.trailing_zeros() as usize;
        let now_selected = !selected[v];
        selected[v] = now_selected;
        if now_selected {
            num_selected += 1;
        } else {
            num_selected -= 1;
        }
        for &u in g.neighbors(v) {
            if violated[u] {
                num_violated -= 1;
            }
            if now_selected {
                sel_nbrs[u] += 1;
            } else {
                sel_nbrs[u] -= 1;
            }
            violated[u] = status(selected[u], sel_nbrs[u], spec);
            if violated[u] {
                num_violated += 1;
            }
        }
        if violated[v] {
            num_violated -= 1;
        }
        violated[v] = status(now_selected, sel_nbrs[v], spec);
        if violated[v] {
            num_violated += 1;
        }
        exact[num_selected * w + num_violated] = true;
        per_size[num_selected] += 1;
    }

    debug_assert_eq!(per_size, binomials(n), "Gray walk missed subsets");
    Ok(FeasibilityResult::from_exact(n, exact))
}

/// Smallest number of violations achievable with a selection of size
/// exactly ≤ `k` — i.e. the least `ℓ` with `at_most[k][ℓ]`.
pub fn min_violations(g: &Graph, spec: &SigmaRhoSpec, k: usize) -> Result<usize, OracleError> {
    let n = g.vertex_count();
    if k > n {
        return Err(OracleError::SizeOutOfRange { k, n });
    }
    let table = brute_force_table(g, spec)?;
    Ok((0..=n)
        .find(|&l| table.at_most(k, l))
        .expect("every selection violates at most n vertices"))
}

fn binomials(n: usize) -> Vec<u64> {
    let mut row = vec![0u64; n + 1];
    row[0] = 1;
    for _ in 0..n {
        for j in (1..=n).rev() {
            row[j] += row[j - 1];
        }
    }
    row
}
