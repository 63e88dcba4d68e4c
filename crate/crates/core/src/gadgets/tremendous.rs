//! Portal gadgets: small graphs that force their portal into any clean
//! cheap selection, with slack against a one-count shift.
//!
//! A portal gadget for a specification is a graph `H` with a portal vertex
//! `u` and a cost constant `c_t` such that **every** selection `S` of `V(H)`
//! satisfies at least one of:
//!
//! 1. `u` is selected and `|S| >= c_t`;
//! 2. some vertex of `V(H) - u` is violated;
//! 3. `u` is violated, and stays violated even when both membership sets
//!    are shifted down by one (so an extra selected neighbour from outside
//!    the gadget cannot repair it).
//!
//! In addition some selection of size exactly `c_t` violates no vertex of
//! `H` at all.  Together these let a larger construction attach the gadget
//! through its portal and charge `c_t` for every clean use.

use std::collections::BTreeMap;

use crate::model::{Graph, SigmaRhoSpec};

use super::{
    ensure_enumerable, is_violated, is_violated_shifted, mask_to_selected, mask_to_vertices,
    require_constant, GadgetError, GadgetInstance, Verdict,
};

/// Counterexamples to the portal-gadget properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TremendousViolation {
    /// A selection that defeats all three arms of the case split: the
    /// portal is unselected or the selection is smaller than `c_t`, no
    /// non-portal vertex is violated, and the portal is clean under the
    /// plain or the shifted membership sets.
    EscapingSelection {
        /// The offending selection, as a sorted vertex list.
        selection: Vec<usize>,
    },
    /// No selection of size exactly `c_t` leaves every vertex satisfied.
    NoCleanSelection {
        /// The advertised cost that no clean selection achieves.
        c_t: usize,
    },
}

/// Exhaustively verifies the portal-gadget properties.
///
/// Expects `instance.distinguished == [portal]` and a `c_t` constant.
/// Returns a counterexample selection if any property fails, or
/// [`GadgetError::CapExceeded`] when the graph is too large to enumerate.
pub fn check_tremendous(
    instance: &GadgetInstance,
    spec: &SigmaRhoSpec,
) -> Result<Verdict<TremendousViolation>, GadgetError> {
    let n = instance.graph.vertex_count();
    ensure_enumerable(n)?;
    if instance.distinguished.len() != 1 {
        return Err(GadgetError::MalformedInstance {
            reason: format!(
                "portal gadget needs exactly one distinguished vertex, got {}",
                instance.distinguished.len()
            ),
        });
    }
    let portal = instance.distinguished[0];
    if portal >= n {
        return Err(GadgetError::MalformedInstance {
            reason: format!("portal {portal} out of range for {n} vertices"),
        });
    }
    let c_t = require_constant(instance, "c_t")?;
    let graph = &instance.graph;

    let mut clean_at_cost = false;
    for mask in 0u64..1 << n {
        let selected = mask_to_selected(mask, n);
        let size = mask.count_ones() as usize;

        let arm_pay = selected[portal] && size >= c_t;
        let arm_other = (0..n)
            .filter(|&v| v != portal)
            .any(|v| is_violated(graph, spec, &selected, v));
        let arm_portal = is_violated(graph, spec, &selected, portal)
            && is_violated_shifted(graph, spec, &selected, portal);

        if !(arm_pay || arm_other || arm_portal) {
            return Ok(Verdict::Refuted(TremendousViolation::EscapingSelection {
                selection: mask_to_vertices(mask, n),
            }));
        }
        if size == c_t && (0..n).all(|v| !is_violated(graph, spec, &selected, v)) {
            clean_at_cost = true;
        }
    }
    if !clean_at_cost {
        return Ok(Verdict::Refuted(TremendousViolation::NoCleanSelection {
            c_t,
        }));
    }
    Ok(Verdict::Holds)
}

/// Builds a portal gadget for the specification.
///
/// Requires `rho` to be finite with `0 not in rho`.  The shape depends on
/// the minima of the two sets:
///
/// * `min sigma = 0, min rho = 1`: a star with `max rho + 1` leaves, portal
///   at the centre, cost 1;
/// * `min sigma = 0, min rho >= 2`: a single vertex, cost 1;
/// * `min sigma = 1, min rho = 1`: a path on four vertices with the portal
///   second, cost 2;
/// * `min sigma = 1, min rho >= 2`: a single edge, cost 2;
/// * `min sigma >= 2`: a clique on `min sigma + 1` vertices, cost
///   `min sigma + 1`.
pub fn generate_tremendous(spec: &SigmaRhoSpec) -> Result<GadgetInstance, GadgetError> {
    let rho_max = match spec.rho.max_element() {
        Some(m) => m,
        None => {
            return Err(GadgetError::UnsupportedSpec {
                reason: "portal gadgets need a finite rho".to_owned(),
            })
        }
    };
    if spec.rho.contains(0) {
        return Err(GadgetError::UnsupportedSpec {
            reason: "portal gadgets need 0 outside rho".to_owned(),
        });
    }
    let sigma_min = spec.sigma.min_element();
    let rho_min = spec.rho.min_element();

    let (graph, portal, c_t) = match (sigma_min, rho_min) {
        (0, 1) => {
            // Portal centre with rho_max + 1 leaves: the centre must be
            // selected, else its leaves see at most one selected neighbour
            // short of their demands.
            let leaves = rho_max + 1;
            let mut graph = Graph::new(1 + leaves);
            for leaf in 1..=leaves {
                graph.add_edge(0, leaf).expect("fresh star edge");
            }
            (graph, 0, 1)
        }
        (0, _) => (Graph::new(1), 0, 1),
        (1, 1) => {
            let mut graph = Graph::new(4);
            for v in 0..3 {
                graph.add_edge(v, v + 1).expect("fresh path edge");
            }
            (graph, 1, 2)
        }
        (1, _) => {
            let mut graph = Graph::new(2);
            graph.add_edge(0, 1).expect("fresh edge");
            (graph, 0, 2)
        }
        (s, _) => {
            let size = s + 1;
            let mut graph = Graph::new(size);
            for a in 0..size {
                for b in a + 1..size {
                    graph.add_edge(a, b).expect("fresh clique edge");
                }
            }
            (graph, 0, s + 1)
        }
    };

    let mut constants = BTreeMap::new();
    constants.insert("c_t".to_owned(), c_t);
    let path_decomposition = Some(crate::decomp::TreeDecomposition::trivial(&graph));
    Ok(GadgetInstance {
        graph,
        distinguished: vec![portal],
        constants,
        path_decomposition,
        robust_layout: None,
    })
}
