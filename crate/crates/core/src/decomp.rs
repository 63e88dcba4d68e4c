//! Tree decompositions: validation against a graph, the trivial one-bag
//! fallback, and conversion into the rooted *nice* form (leaf / introduce /
//! forget / join) the dynamic program walks.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::model::Graph;

/// A tree decomposition: bags of vertices plus tree edges between bag ids.
///
/// Bags are stored sorted and duplicate-free; edges are normalized to
/// `(min, max)` and sorted, so structurally equal decompositions compare
/// equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        let mut bags = bags;
        for bag in &mut bags {
            bag.sort_unstable();
            bag.dedup();
        }
        let mut edges: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        edges.sort_unstable();
        TreeDecomposition { bags, edges }
    }

    /// The fallback decomposition: a single bag holding every vertex (no
    /// bags at all for the empty graph).
    pub fn trivial(g: &Graph) -> Self {
        let n = g.vertex_count();
        if n == 0 {
            TreeDecomposition::new(vec![], vec![])
        } else {
            TreeDecomposition::new(vec![(0..n).collect()], vec![])
        }
    }

    pub fn bag_count(&self) -> usize {
        self.bags.len()
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Max bag size minus one; `-1` for a decomposition with no bags.
    pub fn width(&self) -> isize {
        self.max_bag_size() as isize - 1
    }

    /// Checks the three decomposition properties against `g`, reporting
    /// every violation with a witness.
    pub fn validate(&self, g: &Graph) -> Result<(), InvalidDecomposition> {
        let mut violations = Vec::new();
        let n = g.vertex_count();
        let b = self.bag_count();

        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    violations.push(TdViolation::BagVertexOutOfRange { bag: i, vertex: v });
                }
            }
        }
        for &(x, y) in &self.edges {
            if x >= b || y >= b {
                violations.push(TdViolation::TreeEdgeOutOfRange { edge: (x, y) });
            } else if x == y {
                violations.push(TdViolation::TreeEdgeLoop { bag: x });
            }
        }
        if !violations.is_empty() {
            // Id-level problems make the structural checks meaningless.
            return Err(InvalidDecomposition { violations });
        }

        // The bag graph must be a tree: |E| = |B| − 1 and connected.
        let adjacency = self.bag_adjacency();
        if b > 0 {
            let reached = bfs_count(&adjacency, 0, |_| true);
            if self.edges.len() != b - 1 || reached != b {
                violations.push(TdViolation::NotATree {
                    bags: b,
                    edges: self.edges.len(),
                    reachable_from_first: reached,
                });
            }
        }

        // Property 1: every vertex occurs in some bag.
        let mut occurrence_count = vec![0usize; n];
        for bag in &self.bags {
            for &v in bag {
                occurrence_count[v] += 1;
            }
        }
        for (v, &count) in occurrence_count.iter().enumerate() {
            if count == 0 {
                violations.push(TdViolation::VertexNotCovered { vertex: v });
            }
        }

        // Property 2: every edge is inside some bag.
        for (u, v) in g.edges() {
            let covered = self
                .bags
                .iter()
                .any(|bag| bag.binary_search(&u).is_ok() && bag.binary_search(&v).is_ok());
            if !covered {
                violations.push(TdViolation::EdgeNotCovered { edge: (u, v) });
            }
        }

        // Property 3: the bags containing a vertex form a connected subtree.
        if b > 0 {
            for (v, &count) in occurrence_count.iter().enumerate() {
                if count == 0 {
                    continue;
                }
                let contains =
                    |bag: usize| self.bags[bag].binary_search(&v).is_ok();
                let start = (0..b).find(|&i| contains(i)).unwrap();
                let reached = bfs_count(&adjacency, start, contains);
                if reached != count {
                    violations.push(TdViolation::DisconnectedOccurrence { vertex: v });
                }
            }
        }

        if violations.is_empty() {
            Ok(())
        } else {
            Err(InvalidDecomposition { violations })
        }
    }

    fn bag_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adjacency = vec![Vec::new(); self.bag_count()];
        for &(a, b) in &self.edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        adjacency
    }
}

fn bfs_count(adjacency: &[Vec<usize>], start: usize, allowed: impl Fn(usize) -> bool) -> usize {
    let mut seen = vec![false; adjacency.len()];
    let mut queue = VecDeque::new();
    if !allowed(start) {
        return 0;
    }
    seen[start] = true;
    queue.push_back(start);
    let mut count = 1;
    while let Some(x) = queue.pop_front() {
        for &y in &adjacency[x] {
            if !seen[y] && allowed(y) {
                seen[y] = true;
                count += 1;
                queue.push_back(y);
            }
        }
    }
    count
}

/// One failed decomposition property, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdViolation {
    BagVertexOutOfRange { bag: usize, vertex: usize },
    TreeEdgeOutOfRange { edge: (usize, usize) },
    TreeEdgeLoop { bag: usize },
    NotATree { bags: usize, edges: usize, reachable_from_first: usize },
    VertexNotCovered { vertex: usize },
    EdgeNotCovered { edge: (usize, usize) },
    DisconnectedOccurrence { vertex: usize },
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdViolation::BagVertexOutOfRange { bag, vertex } => {
                write!(f, "bag {bag} contains out-of-range vertex {vertex}")
            }
            TdViolation::TreeEdgeOutOfRange { edge } => {
                write!(f, "tree edge {}-{} references a missing bag", edge.0, edge.1)
            }
            TdViolation::TreeEdgeLoop { bag } => write!(f, "tree edge loops on bag {bag}"),
            TdViolation::NotATree { bags, edges, reachable_from_first } => write!(
                f,
                "bag graph is not a tree ({bags} bags, {edges} edges, \
                 {reachable_from_first} reachable from the first)"
            ),
            TdViolation::VertexNotCovered { vertex } => {
                write!(f, "vertex {vertex} appears in no bag")
            }
            TdViolation::EdgeNotCovered { edge } => {
                write!(f, "edge {}-{} is contained in no bag", edge.0, edge.1)
            }
            TdViolation::DisconnectedOccurrence { vertex } => {
                write!(f, "bags containing vertex {vertex} are not connected")
            }
        }
    }
}

/// Validation failure carrying every detected violation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct InvalidDecomposition {
    pub violations: Vec<TdViolation>,
}

impl fmt::Display for InvalidDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid tree decomposition:")?;
        for v in &self.violations {
            write!(f, "\n  - {v}")?;
        }
        Ok(())
    }
}

/// Node type in a nice decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

/// One node: its type, its bag (sorted), and its children ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// A rooted nice tree decomposition with an empty root bag. Leaf bags are
/// empty; an introduce node adds exactly one vertex to its child's bag; a
/// forget node removes exactly one; a join has two children with identical
/// bags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceTreeDecomposition {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn max_bag_size(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0)
    }

    pub fn width(&self) -> isize {
        self.max_bag_size() as isize - 1
    }

    /// Node ids with every child preceding its parent; ends at the root.
    pub fn post_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((node, expanded)) = stack.pop() {
            if expanded {
                order.push(node);
            } else {
                stack.push((node, true));
                for &c in &self.nodes[node].children {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    /// For each node, the sorted set of vertices appearing in any bag at
    /// or below it.
    pub fn subtree_vertices(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for t in self.post_order() {
            let mut acc: Vec<usize> = self.nodes[t].bag.clone();
            for &c in &self.nodes[t].children {
                acc.extend_from_slice(&out[c]);
            }
            acc.sort_unstable();
            acc.dedup();
            out[t] = acc;
        }
        out
    }

    /// Flattens back into a plain decomposition (bags + parent-child
    /// edges), e.g. for writing to a `.td` file.
    pub fn as_tree_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        let mut edges = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                edges.push((i, c));
            }
        }
        TreeDecomposition::new(bags, edges)
    }

    /// Checks both the per-node shape rules and the underlying
    /// decomposition properties.
    pub fn validate(&self, g: &Graph) -> Result<(), InvalidNiceDecomposition> {
        for (i, node) in self.nodes.iter().enumerate() {
            let fail = |reason: String| {
                Err(InvalidNiceDecomposition::BadNode { node: i, reason })
            };
            if !node.bag.windows(2).all(|w| w[0] < w[1]) {
                return fail("bag is not sorted".into());
            }
            match node.kind {
                NodeKind::Leaf => {
                    if !node.bag.is_empty() || !node.children.is_empty() {
                        return fail("leaf must have an empty bag and no children".into());
                    }
                }
                NodeKind::Introduce(v) => {
                    let [c] = node.children[..] else {
                        return fail("introduce must have one child".into());
                    };
                    let child = &self.nodes[c];
                    let mut expected = child.bag.clone();
                    if child.bag.binary_search(&v).is_ok() {
                        return fail(format!("introduced vertex {v} already in child bag"));
                    }
                    expected.insert(expected.binary_search(&v).unwrap_err(), v);
                    if node.bag != expected {
                        return fail(format!("bag is not child's bag plus {v}"));
                    }
                }
                NodeKind::Forget(v) => {
                    let [c] = node.children[..] else {
                        return fail("forget must have one child".into());
                    };
                    let child = &self.nodes[c];
                    let Ok(pos) = child.bag.binary_search(&v) else {
                        return fail(format!("forgotten vertex {v} missing from child bag"));
                    };
                    let mut expected = child.bag.clone();
                    expected.remove(pos);
                    if node.bag != expected {
                        return fail(format!("bag is not child's bag minus {v}"));
                    }
                }
                NodeKind::Join => {
                    let [a, b] = node.children[..] else {
                        return fail("join must have two children".into());
                    };
                    if self.nodes[a].bag != node.bag || self.nodes[b].bag != node.bag {
                        return fail("join children bags must equal the join bag".into());
                    }
                }
            }
        }
        if !self.nodes[self.root].bag.is_empty() {
            return Err(InvalidNiceDecomposition::RootNotEmpty);
        }
        // Reachability: the node list must be exactly the root's tree.
        let order = self.post_order();
        if order.len() != self.nodes.len() {
            return Err(InvalidNiceDecomposition::UnreachableNodes {
                reachable: order.len(),
                total: self.nodes.len(),
            });
        }
        self.as_tree_decomposition()
            .validate(g)
            .map_err(InvalidNiceDecomposition::Decomposition)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalidNiceDecomposition {
    #[error("node {node}: {reason}")]
    BadNode { node: usize, reason: String },
    #[error("root bag is not empty")]
    RootNotEmpty,
    #[error("{reachable} of {total} nodes reachable from the root")]
    UnreachableNodes { reachable: usize, total: usize },
    #[error(transparent)]
    Decomposition(InvalidDecomposition),
}

/// Converts a valid decomposition into nice form.
///
/// Adjacent bags in subset relation are contracted first (bounding the bag
/// count by the vertex count), the surviving bag with the lowest id becomes
/// the root, every tree edge becomes a forget-then-introduce chain, fan-out
/// is binarized with join nodes (children in ascending bag-id order), and
/// the root is topped with forgets down to the empty bag. Width is
/// preserved exactly and the node count stays `O(width · n)`.
pub fn nicify(
    td: &TreeDecomposition,
    g: &Graph,
) -> Result<NiceTreeDecomposition, InvalidDecomposition> {
    td.validate(g)?;

    let mut nodes: Vec<NiceNode> = Vec::new();
    let mut push = |kind: NodeKind, bag: Vec<usize>, children: Vec<usize>| -> usize {
        nodes.push(NiceNode { kind, bag, children });
        nodes.len() - 1
    };

    if g.vertex_count() == 0 {
        let root = push(NodeKind::Leaf, vec![], vec![]);
        return Ok(NiceTreeDecomposition { nodes, root });
    }

    // Contract any bag into an adjacent superset until none remains.
    let mut bags: Vec<Option<Vec<usize>>> = td.bags.iter().cloned().map(Some).collect();
    let mut adjacency: Vec<Vec<usize>> = td.bag_adjacency();
    loop {
        let mut contracted = false;
        'scan: for a in 0..bags.len() {
            let Some(bag_a) = bags[a].clone() else { continue };
            for idx in 0..adjacency[a].len() {
                let b = adjacency[a][idx];
                let bag_b = bags[b].as_ref().unwrap();
                let (removed, kept) = if is_subset(&bag_a, bag_b) {
                    (a, b)
                } else if is_subset(bag_b, &bag_a) {
                    (b, a)
                } else {
                    continue;
                };
                // Splice the removed bag's other neighbors onto the kept one.
                let removed_adj = std::mem::take(&mut adjacency[removed]);
                for &x in &removed_adj {
                    if x != kept {
                        adjacency[kept].push(x);
                    }
                }
                for x in removed_adj {
                    if x != kept {
                        for y in adjacency[x].iter_mut() {
                            if *y == removed {
                                *y = kept;
                            }
                        }
                    }
                }
                adjacency[kept].retain(|&x| x != removed);
                bags[removed] = None;
                contracted = true;
                break 'scan;
            }
        }
        if !contracted {
            break;
        }
    }

    let root_bag = bags.iter().position(Option::is_some).expect("some bag survives");

    // Root the contracted tree and lay out children before parents.
    let mut parent: Vec<Option<usize>> = vec![None; bags.len()];
    let mut bfs_order = vec![root_bag];
    let mut seen = vec![false; bags.len()];
    seen[root_bag] = true;
    let mut head = 0;
    while head < bfs_order.len() {
        let x = bfs_order[head];
        head += 1;
        let mut next: Vec<usize> = adjacency[x].iter().copied().filter(|&y| !seen[y]).collect();
        next.sort_unstable();
        for y in next {
            seen[y] = true;
            parent[y] = Some(x);
            bfs_order.push(y);
        }
    }

    // children[x] ascending, matching the deterministic join order.
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); bags.len()];
    for &x in &bfs_order {
        if let Some(p) = parent[x] {
            children[p].push(x);
        }
    }
    for c in &mut children {
        c.sort_unstable();
    }

    // Build bottom-up: every bag's subtree top carries exactly that bag.
    let mut top: Vec<Option<usize>> = vec![None; bags.len()];
    for &bag_id in bfs_order.iter().rev() {
        let bag = bags[bag_id].as_ref().unwrap().clone();
        let mut sub_tops = Vec::new();
        for &c in &children[bag_id] {
            let child_bag = bags[c].as_ref().unwrap().clone();
            let mut node = top[c].take().expect("children built first");
            let mut current = child_bag;
            // Shed vertices absent from the parent bag, then pick up the new ones.
            for &v in bags[c].as_ref().unwrap() {
                if bag.binary_search(&v).is_err() {
                    let pos = current.binary_search(&v).unwrap();
                    current.remove(pos);
                    node = push(NodeKind::Forget(v), current.clone(), vec![node]);
                }
            }
            for &v in &bag {
                if current.binary_search(&v).is_err() {
                    let pos = current.binary_search(&v).unwrap_err();
                    current.insert(pos, v);
                    node = push(NodeKind::Introduce(v), current.clone(), vec![node]);
                }
            }
            debug_assert_eq!(current, bag);
            sub_tops.push(node);
        }
        let built = if sub_tops.is_empty() {
            // A leaf bag grows from the empty leaf by introductions.
            let mut node = push(NodeKind::Leaf, vec![], vec![]);
            let mut current = Vec::new();
            for &v in &bag {
                current.push(v);
                node = push(NodeKind::Introduce(v), current.clone(), vec![node]);
            }
            node
        } else {
            let mut acc = sub_tops[0];
            for &other in &sub_tops[1..] {
                acc = push(NodeKind::Join, bag.clone(), vec![acc, other]);
            }
            acc
        };
        top[bag_id] = Some(built);
    }

    // Forget the root bag down to empty.
    let mut root_node = top[root_bag].take().unwrap();
    let full = bags[root_bag].as_ref().unwrap().clone();
    let mut current = full.clone();
    for &v in &full {
        let pos = current.binary_search(&v).unwrap();
        current.remove(pos);
        root_node = push(NodeKind::Forget(v), current.clone(), vec![root_node]);
    }

    Ok(NiceTreeDecomposition { nodes, root: root_node })
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.len() <= b.len() && a.iter().all(|v| b.binary_search(v).is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn k3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn textbook_path_decomposition_validates() {
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        assert!(td.validate(&p3()).is_ok());
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn uncovered_edge_is_reported() {
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let err = td.validate(&k3()).unwrap_err();
        assert!(err
            .violations
            .contains(&TdViolation::EdgeNotCovered { edge: (0, 2) }));
    }

    #[test]
    fn disconnected_occurrence_is_reported() {
        // Path of three bags {a},{b},{a}: a's bags are not adjacent.
        let g = Graph::new(2);
        let td = TreeDecomposition::new(
            vec![vec![0], vec![1], vec![0]],
            vec![(0, 1), (1, 2)],
        );
        let err = td.validate(&g).unwrap_err();
        assert!(err
            .violations
            .contains(&TdViolation::DisconnectedOccurrence { vertex: 0 }));
    }

    #[test]
    fn missing_vertex_and_broken_tree_are_reported() {
        let g = Graph::new(3);
        let td = TreeDecomposition::new(vec![vec![0], vec![1]], vec![]);
        let err = td.validate(&g).unwrap_err();
        assert!(err
            .violations
            .contains(&TdViolation::VertexNotCovered { vertex: 2 }));
        assert!(err
            .violations
            .iter()
            .any(|v| matches!(v, TdViolation::NotATree { .. })));
    }

    #[test]
    fn trivial_decomposition_shapes() {
        let td = TreeDecomposition::trivial(&k3());
        assert_eq!(td.bags, vec![vec![0, 1, 2]]);
        assert_eq!(td.width(), 2);
        assert!(td.validate(&k3()).is_ok());

        let empty = TreeDecomposition::trivial(&Graph::new(0));
        assert_eq!(empty.bag_count(), 0);
        assert!(empty.validate(&Graph::new(0)).is_ok());

        let p3_td = TreeDecomposition::trivial(&p3());
        assert_eq!(p3_td.max_bag_size(), 3);
    }

    #[test]
    fn nicify_single_bag_is_a_chain() {
        let g = k3();
        let td = TreeDecomposition::trivial(&g);
        let nice = nicify(&td, &g).unwrap();
        nice.validate(&g).unwrap();
        assert_eq!(nice.width(), 2);
        // Leaf, three introduces, three forgets.
        assert_eq!(nice.node_count(), 7);
        let kinds: Vec<_> = nice.post_order().iter().map(|&i| nice.nodes[i].kind).collect();
        assert_eq!(
            kinds,
            vec![
                NodeKind::Leaf,
                NodeKind::Introduce(0),
                NodeKind::Introduce(1),
                NodeKind::Introduce(2),
                NodeKind::Forget(0),
                NodeKind::Forget(1),
                NodeKind::Forget(2),
            ]
        );
    }

    #[test]
    fn nicify_two_bag_path() {
        let g = p3();
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let nice = nicify(&td, &g).unwrap();
        nice.validate(&g).unwrap();
        assert_eq!(nice.width(), 1);
        assert!(nice
            .nodes
            .iter()
            .any(|n| matches!(n.kind, NodeKind::Forget(2))));
        assert!(nice
            .nodes
            .iter()
            .any(|n| matches!(n.kind, NodeKind::Introduce(0))));
    }

    #[test]
    fn nicify_rejects_invalid_input() {
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        assert!(nicify(&td, &k3()).is_err());
    }

    #[test]
    fn nicify_branching_decomposition_has_joins() {
        // A star of bags around a center bag forces binarized joins. The
        // center bag holds a private vertex so no subset contraction fires.
        let g = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let td = TreeDecomposition::new(
            vec![vec![0, 4], vec![0, 1], vec![0, 2], vec![0, 3]],
            vec![(0, 1), (0, 2), (0, 3)],
        );
        let nice = nicify(&td, &g).unwrap();
        nice.validate(&g).unwrap();
        assert_eq!(nice.width(), 1);
        let joins = nice
            .nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Join))
            .count();
        assert_eq!(joins, 2);
    }

    #[test]
    fn nicify_fully_contracts_a_subset_star() {
        // Center {0} is a subset of every leaf bag; contraction must leave
        // a three-bag tree and exactly one join.
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let td = TreeDecomposition::new(
            vec![vec![0], vec![0, 1], vec![0, 2], vec![0, 3]],
            vec![(0, 1), (0, 2), (0, 3)],
        );
        let nice = nicify(&td, &g).unwrap();
        nice.validate(&g).unwrap();
        assert_eq!(nice.width(), 1);
    }

    #[test]
    fn nicify_contracts_subset_bags() {
        // Bag {1} ⊆ {0,1}: the chain collapses to at most n bags before
        // the nice expansion, keeping the node count linear.
        let g = p3();
        let td = TreeDecomposition::new(
            vec![vec![0, 1], vec![1], vec![1, 2]],
            vec![(0, 1), (1, 2)],
        );
        let nice = nicify(&td, &g).unwrap();
        nice.validate(&g).unwrap();
        assert_eq!(nice.width(), 1);
    }

    #[test]
    fn renicifying_preserves_width_and_validity() {
        let g = p3();
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let nice = nicify(&td, &g).unwrap();
        let again = nicify(&nice.as_tree_decomposition(), &g).unwrap();
        again.validate(&g).unwrap();
        assert_eq!(again.width(), nice.width());
    }

    #[test]
    fn empty_graph_nicifies_to_single_leaf() {
        let g = Graph::new(0);
        let nice = nicify(&TreeDecomposition::trivial(&g), &g).unwrap();
        assert_eq!(nice.node_count(), 1);
        assert_eq!(nice.nodes[nice.root].kind, NodeKind::Leaf);
        nice.validate(&g).unwrap();
    }

    #[test]
    fn node_count_stays_linear_in_width_times_n() {
        // Path graphs with their natural width-1 decompositions.
        for n in [2usize, 5, 9, 14] {
            let mut g = Graph::new(n);
            for v in 0..n - 1 {
                g.add_edge(v, v + 1).unwrap();
            }
            let bags: Vec<Vec<usize>> = (0..n - 1).map(|v| vec![v, v + 1]).collect();
            let edges: Vec<(usize, usize)> = (0..n.saturating_sub(2)).map(|i| (i, i + 1)).collect();
            let td = TreeDecomposition::new(bags, edges);
            let nice = nicify(&td, &g).unwrap();
            nice.validate(&g).unwrap();
            assert_eq!(nice.width(), 1);
            assert!(nice.node_count() <= 10 * 2 * (n + 1));
        }
    }
}
