//! Deterministic graph and decomposition generators for tests and
//! benchmarks. Every randomized generator takes the RNG by argument, so a
//! fixed seed reproduces the instance exactly.

use rand::Rng;

use crate::decomp::TreeDecomposition;
use crate::model::Graph;

/// Path `0 - 1 - … - (n-1)`.
pub fn path(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for v in 1..n {
        g.add_edge(v - 1, v).unwrap();
    }
    g
}

/// Cycle on `n ≥ 3` vertices.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least three vertices");
    let mut g = path(n);
    g.add_edge(n - 1, 0).unwrap();
    g
}

/// Star with center `0` and `n - 1` leaves.
pub fn star(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for v in 1..n {
        g.add_edge(0, v).unwrap();
    }
    g
}

/// Complete graph on `n` vertices.
pub fn clique(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

/// Erdős–Rényi graph: each edge present independently with probability `p`.
pub fn gnp(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// The left-to-right sweep path decomposition: bag `i` holds `i` plus every
/// smaller vertex with a neighbor at or beyond `i`. Always valid; tight on
/// paths (width 1) and near-tight on cycles (width 2).
pub fn sweep_path_decomposition(g: &Graph) -> TreeDecomposition {
    let n = g.vertex_count();
    let bags: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let mut bag: Vec<usize> = (0..i)
                .filter(|&u| g.neighbors(u).iter().any(|&w| w >= i))
                .collect();
            bag.push(i);
            bag
        })
        .collect();
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    TreeDecomposition::new(bags, edges)
}

/// A random connected graph of decomposition width exactly `w` (for
/// `n > w`), returned with a witnessing decomposition: bags grow k-tree
/// style, and each candidate edge into the new vertex is kept with
/// probability `edge_keep`. One kept edge per new vertex is forced so the
/// width of the returned decomposition is genuinely needed by tests that
/// stress join-heavy shapes.
pub fn random_partial_ktree(
    n: usize,
    w: usize,
    edge_keep: f64,
    rng: &mut impl Rng,
) -> (Graph, TreeDecomposition) {
    assert!(n > w, "need more vertices than the width");
    let mut g = Graph::new(n);
    let base: Vec<usize> = (0..=w).collect();
    for i in 0..=w {
        for j in i + 1..=w {
            if rng.random_bool(edge_keep) || j == i + 1 {
                g.add_edge(base[i], base[j]).unwrap();
            }
        }
    }
    let mut bags: Vec<Vec<usize>> = vec![base];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in w + 1..n {
        let parent = rng.random_range(0..bags.len());
        let mut support = bags[parent].clone();
        if w > 0 {
            support.remove(rng.random_range(0..support.len()));
        } else {
            support.clear();
        }
        let forced = if support.is_empty() { None } else { Some(rng.random_range(0..support.len())) };
        for (i, &u) in support.iter().enumerate() {
            if Some(i) == forced || rng.random_bool(edge_keep) {
                g.add_edge(u, v).unwrap();
            }
        }
        support.push(v);
        bags.push(support);
        edges.push((parent, bags.len() - 1));
    }
    (g, TreeDecomposition::new(bags, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn family_shapes() {
        assert_eq!(path(5).edge_count(), 4);
        assert_eq!(cycle(5).edge_count(), 5);
        let s = star(5);
        assert_eq!(s.degree(0), 4);
        assert!((1..5).all(|v| s.degree(v) == 1));
        assert_eq!(clique(5).edge_count(), 10);
    }

    #[test]
    fn sweep_decomposition_is_valid_and_tight_on_paths() {
        for n in [1usize, 2, 6, 11] {
            let g = path(n);
            let td = sweep_path_decomposition(&g);
            td.validate(&g).unwrap();
            if n >= 2 {
                assert_eq!(td.width(), 1);
            }
        }
        let c = cycle(7);
        let td = sweep_path_decomposition(&c);
        td.validate(&c).unwrap();
        assert_eq!(td.width(), 2);
    }

    #[test]
    fn sweep_decomposition_covers_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let g = gnp(9, 0.3, &mut rng);
            sweep_path_decomposition(&g).validate(&g).unwrap();
        }
    }

    #[test]
    fn partial_ktree_width_and_validity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for w in [1usize, 3, 5] {
            let (g, td) = random_partial_ktree(13, w, 0.5, &mut rng);
            td.validate(&g).unwrap();
            assert_eq!(td.width(), w as isize);
        }
    }

    #[test]
    fn generators_are_seed_deterministic() {
        let a = gnp(10, 0.4, &mut ChaCha8Rng::seed_from_u64(3));
        let b = gnp(10, 0.4, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a.edges(), b.edges());
        let (g1, t1) = random_partial_ktree(12, 3, 0.6, &mut ChaCha8Rng::seed_from_u64(5));
        let (g2, t2) = random_partial_ktree(12, 3, 0.6, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(g1.edges(), g2.edges());
        assert_eq!(t1, t2);
    }
}
