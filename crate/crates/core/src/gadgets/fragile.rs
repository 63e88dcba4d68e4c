//! Fragile attractors: gadgets with a free interface set `U` whose clean
//! selections all spend exactly `gamma` outside `U`.
//!
//! A fragile attractor with interface `U` and budget `gamma` satisfies:
//!
//! 1. every selection with no violated vertex in `V - U` has
//!    `|S - U| >= gamma`;
//! 2. for every nonempty `U' <= U` some selection has `S and U = U'`, no
//!    violated vertex in `V - U`, avoids `N(U)` entirely, and spends
//!    exactly `gamma` outside `U`;
//! 3. any selection that ignores the interface (`S and U` empty) or
//!    touches `N(U)` either violates a vertex of `V - U` or spends more
//!    than `gamma` outside `U`;
//! 4. `U` is an independent set.
//!
//! The "fragile" part is property 3: the attractor only tolerates
//! selections that commit to the interface and stay out of its
//! neighbourhood.

use std::collections::BTreeMap;

use crate::decomp::TreeDecomposition;
use crate::model::{Graph, SigmaRhoSpec};

use super::{
    ensure_enumerable, is_violated, mask_to_selected, mask_to_vertices, require_constant,
    GadgetError, GadgetInstance, Verdict,
};

/// Counterexamples to the fragile-attractor properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FragileViolation {
    /// Two interface vertices are adjacent.
    InterfaceEdge {
        /// One endpoint.
        a: usize,
        /// The other endpoint.
        b: usize,
    },
    /// A selection with no violation outside the interface spends less
    /// than `gamma` outside it.
    CheapCleanSelection {
        /// The offending selection, as a sorted vertex list.
        selection: Vec<usize>,
        /// What it spends outside the interface.
        spent: usize,
    },
    /// Some nonempty interface subset has no clean selection that picks
    /// exactly it, avoids the interface neighbourhood, and spends exactly
    /// `gamma` outside the interface.
    MissingCleanSelection {
        /// The interface subset with no witness, as a sorted vertex list.
        interface_subset: Vec<usize>,
    },
    /// A selection that ignores the interface or touches its
    /// neighbourhood is nevertheless clean and cheap.
    UnforcedSelection {
        /// The offending selection, as a sorted vertex list.
        selection: Vec<usize>,
    },
}

/// Exhaustively verifies the fragile-attractor properties.
///
/// Expects `instance.distinguished` to list the interface `U` and a
/// `gamma` constant.  Returns a counterexample if any property fails, or
/// [`GadgetError::CapExceeded`] when the graph is too large to enumerate.
pub fn check_fragile(
    instance: &GadgetInstance,
    spec: &SigmaRhoSpec,
) -> Result<Verdict<FragileViolation>, GadgetError> {
    let n = instance.graph.vertex_count();
    ensure_enumerable(n)?;
    let graph = &instance.graph;
    let interface = &instance.distinguished;
    if interface.is_empty() || interface.iter().any(|&u| u >= n) {
        return Err(GadgetError::MalformedInstance {
            reason: "interface must be a nonempty list of in-range vertices".to_owned(),
        });
    }
    let gamma = require_constant(instance, "gamma")?;

    let mut in_interface = vec![false; n];
    for &u in interface {
        in_interface[u] = true;
    }
    for &u in interface {
        for &x in graph.neighbors(u) {
            if in_interface[x] {
                return Ok(Verdict::Refuted(FragileViolation::InterfaceEdge {
                    a: u.min(x),
                    b: u.max(x),
                }));
            }
        }
    }
    let mut in_boundary = vec![false; n];
    for &u in interface {
        for &x in graph.neighbors(u) {
            if !in_interface[x] {
                in_boundary[x] = true;
            }
        }
    }

    let d = interface.len();
    let mut subset_witnessed = vec![false; 1 << d];
    for mask in 0u64..1 << n {
        let selected = mask_to_selected(mask, n);
        let clean_outside = (0..n)
            .filter(|&x| !in_interface[x])
            .all(|x| !is_violated(graph, spec, &selected, x));
        let spent = (0..n)
            .filter(|&x| !in_interface[x] && selected[x])
            .count();
        let picked: usize = interface
            .iter()
            .enumerate()
            .filter(|&(_, &u)| selected[u])
            .map(|(i, _)| 1 << i)
            .sum();
        let touches_boundary = (0..n).any(|x| in_boundary[x] && selected[x]);

        if clean_outside && spent < gamma {
            return Ok(Verdict::Refuted(FragileViolation::CheapCleanSelection {
                selection: mask_to_vertices(mask, n),
                spent,
            }));
        }
        if (picked == 0 || touches_boundary) && clean_outside && spent <= gamma {
            return Ok(Verdict::Refuted(FragileViolation::UnforcedSelection {
                selection: mask_to_vertices(mask, n),
            }));
        }
        if picked != 0 && clean_outside && !touches_boundary && spent == gamma {
            subset_witnessed[picked] = true;
        }
    }
    for (picked, &witnessed) in subset_witnessed.iter().enumerate().skip(1) {
        if !witnessed {
            let interface_subset = (0..d)
                .filter(|i| picked >> i & 1 == 1)
                .map(|i| interface[i])
                .collect();
            return Ok(Verdict::Refuted(FragileViolation::MissingCleanSelection {
                interface_subset,
            }));
        }
    }
    Ok(Verdict::Holds)
}

/// Builds a fragile attractor with interface arity `d`.
///
/// Requires `rho` to be cofinite with `0 not in rho` (so unselected
/// vertices demand at least `min rho` selected neighbours and large counts
/// always satisfy them) and `d >= 1`.  The gadget is a hub `v` adjacent to
/// all of `U` and to one vertex in each of `min rho - 1` cliques of size
/// `min sigma + 1`; the budget is `gamma = (min rho - 1) * (min sigma + 1)`.
pub fn generate_fragile(spec: &SigmaRhoSpec, d: usize) -> Result<GadgetInstance, GadgetError> {
    if spec.rho.is_finite() {
        return Err(GadgetError::UnsupportedSpec {
            reason: "fragile attractors need a cofinite rho".to_owned(),
        });
    }
    if spec.rho.contains(0) {
        return Err(GadgetError::UnsupportedSpec {
            reason: "fragile attractors need 0 outside rho".to_owned(),
        });
    }
    if d == 0 {
        return Err(GadgetError::UnsupportedParameter {
            reason: "interface arity must be at least 1".to_owned(),
        });
    }
    let sigma_min = spec.sigma.min_element();
    let rho_min = spec.rho.min_element();

    let cliques = rho_min - 1;
    let clique_size = sigma_min + 1;
    let hub = d + cliques * clique_size;
    let mut graph = Graph::new(hub + 1);
    for c in 0..cliques {
        let base = d + c * clique_size;
        for a in 0..clique_size {
            for b in a + 1..clique_size {
                graph.add_edge(base + a, base + b).expect("fresh clique edge");
            }
        }
        graph.add_edge(hub, base).expect("fresh hub edge");
    }
    for u in 0..d {
        graph.add_edge(hub, u).expect("fresh interface edge");
    }

    let mut constants = BTreeMap::new();
    constants.insert("gamma".to_owned(), cliques * clique_size);
    constants.insert("d".to_owned(), d);

    // One bag per clique, all holding the interface and the hub; with no
    // cliques a single bag carries everything.
    let mut bags: Vec<Vec<usize>> = Vec::new();
    let common: Vec<usize> = (0..d).chain([hub]).collect();
    if cliques == 0 {
        bags.push(common);
    } else {
        for c in 0..cliques {
            let base = d + c * clique_size;
            let mut bag = common.clone();
            bag.extend(base..base + clique_size);
            bags.push(bag);
        }
    }
    let edges = (1..bags.len()).map(|i| (i - 1, i)).collect();
    let path_decomposition = Some(TreeDecomposition::new(bags, edges));

    Ok(GadgetInstance {
        graph,
        distinguished: (0..d).collect(),
        constants,
        path_decomposition,
        robust_layout: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MembershipSet;

    fn checked(spec: &SigmaRhoSpec, d: usize) -> GadgetInstance {
        let instance = generate_fragile(spec, d).expect("supported spec");
        if let Some(pd) = &instance.path_decomposition {
            pd.validate(&instance.graph).expect("valid decomposition");
        }
        let verdict = check_fragile(&instance, spec).expect("checkable");
        assert_eq!(verdict, Verdict::Holds, "generated gadget must verify");
        instance
    }

    #[test]
    fn rho_minimum_one_needs_no_cliques() {
        let spec = SigmaRhoSpec::new(
            MembershipSet::cofinite_at_least(0),
            MembershipSet::cofinite_at_least(1),
        );
        let instance = checked(&spec, 3);
        assert_eq!(instance.graph.vertex_count(), 4);
        assert_eq!(instance.graph.edge_count(), 3);
        assert_eq!(instance.constant("gamma"), Some(0));
    }

    #[test]
    fn rho_minimum_two_with_singleton_sigma_uses_one_single_vertex_clique() {
        let spec = SigmaRhoSpec::new(
            MembershipSet::finite([0]).unwrap(),
            MembershipSet::cofinite_at_least(2),
        );
        let instance = checked(&spec, 2);
        assert_eq!(instance.graph.vertex_count(), 4);
        assert_eq!(instance.constant("gamma"), Some(1));
    }

    #[test]
    fn rho_minimum_three_with_sigma_minimum_one_uses_two_edges() {
        let spec = SigmaRhoSpec::new(
            MembershipSet::cofinite_at_least(1),
            MembershipSet::cofinite_at_least(3),
        );
        let instance = checked(&spec, 2);
        assert_eq!(instance.graph.vertex_count(), 7);
        assert_eq!(instance.constant("gamma"), Some(4));
    }

    #[test]
    fn sweep_of_small_minima_and_arities_verifies() {
        let sigmas = [
            MembershipSet::cofinite_at_least(0),
            MembershipSet::cofinite_at_least(1),
            MembershipSet::cofinite_at_least(2),
            MembershipSet::finite([0]).unwrap(),
            MembershipSet::finite([1, 2]).unwrap(),
            MembershipSet::finite([2]).unwrap(),
        ];
        for sigma in &sigmas {
            for rho_min in 1..=3 {
                for d in 1..=3 {
                    let spec = SigmaRhoSpec::new(
                        sigma.clone(),
                        MembershipSet::cofinite_at_least(rho_min),
                    );
                    let instance = generate_fragile(&spec, d).expect("supported spec");
                    let verdict = check_fragile(&instance, &spec).expect("checkable");
                    assert_eq!(
                        verdict,
                        Verdict::Holds,
                        "gadget for sigma={sigma} rho_min={rho_min} d={d} must verify"
                    );
                }
            }
        }
    }

    #[test]
    fn finite_rho_is_rejected() {
        let spec = SigmaRhoSpec::new(
            MembershipSet::cofinite_at_least(0),
            MembershipSet::finite([1]).unwrap(),
        );
        assert!(matches!(
            generate_fragile(&spec, 2),
            Err(GadgetError::UnsupportedSpec { .. })
        ));
    }

    #[test]
    fn zero_arity_is_rejected() {
        let spec = SigmaRhoSpec::new(
            MembershipSet::cofinite_at_least(0),
            MembershipSet::cofinite_at_least(1),
        );
        assert!(matches!(
            generate_fragile(&spec, 0),
            Err(GadgetError::UnsupportedParameter { .. })
        ));
    }

    #[test]
    fn interface_edge_is_caught() {
        let spec = SigmaRhoSpec::new(
            MembershipSet::cofinite_at_least(0),
            MembershipSet::cofinite_at_least(2),
        );
        let mut instance = generate_fragile(&spec, 2).expect("supported spec");
        instance.graph.add_edge(0, 1).expect("fresh edge");
        let verdict = check_fragile(&instance, &spec).expect("checkable");
        assert_eq!(
            verdict,
            Verdict::Refuted(FragileViolation::InterfaceEdge { a: 0, b: 1 })
        );
    }

    #[test]
    fn understated_budget_is_caught() {
        let spec = SigmaRhoSpec::new(
            MembershipSet::cofinite_at_least(1),
            MembershipSet::cofinite_at_least(3),
        );
        let mut instance = generate_fragile(&spec, 2).expect("supported spec");
        let gamma = instance.constant("gamma").expect("generated constant");
        instance.constants.insert("gamma".to_owned(), gamma - 1);
        let verdict = check_fragile(&instance, &spec).expect("checkable");
        assert!(
            matches!(
                verdict,
                Verdict::Refuted(FragileViolation::MissingCleanSelection { .. })
            ),
            "understated budget must be refuted, got {verdict:?}"
        );
    }
}
