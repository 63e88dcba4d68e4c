//! Certifies the solver's internal tables node by node: a bit is set if
//! and only if some selection of the node's subtree vertices realizes that
//! state vector, forgotten-selection size, and forgotten violation count.
//! This pins the table semantics themselves, not just the root answer.

mod common;

use common::spec_battery;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use srsolver_core::conv::StateAlphabet;
use srsolver_core::decomp::{nicify, NiceTreeDecomposition};
use srsolver_core::dp::{SolveOptions, WitnessSolver};
use srsolver_core::instances;
use srsolver_core::model::{Graph, Side, SigmaRhoSpec, State};

/// Recomputes one node's table by enumerating every subset of its subtree
/// vertices and projecting onto (state vector, k, ℓ).
fn expected_bits(
    g: &Graph,
    spec: &SigmaRhoSpec,
    ntd: &NiceTreeDecomposition,
    node: usize,
    subtree: &[usize],
) -> Vec<(usize, usize, usize)> {
    let alphabet = StateAlphabet::partial(spec);
    let bag = &ntd.nodes[node].bag;
    let mut bits = Vec::new();
    for mask in 0u64..(1 << subtree.len()) {
        let selected: Vec<usize> = subtree
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        let in_sel = |v: usize| selected.binary_search(&v).is_ok();
        let in_bag = |v: usize| bag.binary_search(&v).is_ok();
        let k = selected.iter().filter(|&&v| !in_bag(v)).count();
        // Violations among forgotten (subtree minus bag) vertices; their
        // full neighborhoods lie inside the subtree, so this is exact.
        let l = subtree
            .iter()
            .filter(|&&v| !in_bag(v))
            .filter(|&&v| {
                let count = g.neighbors(v).iter().filter(|&&w| in_sel(w)).count();
                let set = if in_sel(v) { &spec.sigma } else { &spec.rho };
                !set.contains(count)
            })
            .count();
        let mut code = 0usize;
        let mut place = 1usize;
        for &v in bag.iter() {
            let forgotten_selected = g
                .neighbors(v)
                .iter()
                .filter(|&&w| in_sel(w) && !in_bag(w))
                .count();
            let side = if in_sel(v) { Side::Selected } else { Side::Unselected };
            let count = forgotten_selected.min(alphabet.cap(side));
            code += alphabet.index_of(State { side, count }) * place;
            place *= alphabet.size();
        }
        bits.push((code, k, l));
    }
    bits.sort_unstable();
    bits.dedup();
    bits
}

#[test]
fn every_node_table_matches_the_defining_predicate() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut graphs: Vec<(String, Graph)> = vec![
        ("path-5".into(), instances::path(5)),
        ("cycle-5".into(), instances::cycle(5)),
        ("star-6".into(), instances::star(6)),
    ];
    for round in 0..4 {
        graphs.push((format!("gnp-7-{round}"), instances::gnp(7, 0.35, &mut rng)));
    }

    for (gname, g) in &graphs {
        let td = instances::sweep_path_decomposition(g);
        let ntd = nicify(&td, g).unwrap();
        let subtrees = ntd.subtree_vertices();
        for (sname, spec) in spec_battery() {
            if spec.alphabet_size_partial > 5 {
                continue;
            }
            let solver = WitnessSolver::new(g, &spec, &ntd, &SolveOptions::default()).unwrap();
            for (node, subtree) in subtrees.iter().enumerate() {
                let table = solver.node_table(node);
                let shape = table.shape();
                let want = expected_bits(g, &spec, &ntd, node, subtree);
                let mut got = Vec::new();
                for code in 0..shape.num_codes() {
                    for k in 0..=shape.n_cap {
                        for l in 0..=shape.n_cap {
                            if table.get(code, k, l) {
                                got.push((code, k, l));
                            }
                        }
                    }
                }
                assert_eq!(
                    got, want,
                    "{sname} on {gname}: node {node} table deviates from its predicate"
                );
            }
        }
    }
}
