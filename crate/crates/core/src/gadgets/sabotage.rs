//! Deliberately broken gadget variants.
//!
//! Every checker in this module's siblings promises to reject instances
//! whose graph or constants do not actually support the advertised
//! properties.  The constructors here produce such instances by mutating a
//! valid one in a controlled way — removing a vertex, deleting a whole
//! portal-gadget copy, wiring the interface together, or misreporting a
//! constant — so tests can pin down that each mutation is caught with a
//! concrete counterexample rather than silently accepted.

use crate::model::Graph;

use super::{GadgetInstance, RobustCopy, RobustLayout};

/// Rebuilds the instance without the given vertex, relabelling the
/// remaining vertices downwards.  The vertex must not be distinguished.
///
/// The path decomposition is dropped (it described the original graph);
/// constants are kept verbatim, which is the point: the shrunken graph no
/// longer backs them up.
pub fn remove_vertex(instance: &GadgetInstance, victim: usize) -> GadgetInstance {
    assert!(
        !instance.distinguished.contains(&victim),
        "refusing to remove a distinguished vertex"
    );
    let remap = removal_map(instance.graph.vertex_count(), &[victim]);
    GadgetInstance {
        graph: rebuild_graph(&instance.graph, &remap),
        distinguished: instance
            .distinguished
            .iter()
            .map(|&v| remap[v].expect("distinguished vertices survive"))
            .collect(),
        constants: instance.constants.clone(),
        path_decomposition: None,
        robust_layout: instance
            .robust_layout
            .as_ref()
            .map(|layout| remap_layout(layout, &remap)),
    }
}

/// Rebuilds the instance without one portal-gadget copy: its vertices are
/// removed from the graph and the copy disappears from the role map, while
/// the constants keep promising the original spend.
pub fn remove_copy(instance: &GadgetInstance, copy_index: usize) -> GadgetInstance {
    let layout = instance
        .robust_layout
        .as_ref()
        .expect("copy removal needs a structural role map");
    let victims = layout.copies[copy_index].vertices.clone();
    let remap = removal_map(instance.graph.vertex_count(), &victims);
    let mut thinned = layout.clone();
    thinned.copies.remove(copy_index);
    let layout = remap_layout(&thinned, &remap);
    GadgetInstance {
        graph: rebuild_graph(&instance.graph, &remap),
        distinguished: instance
            .distinguished
            .iter()
            .map(|&v| remap[v].expect("distinguished vertices survive"))
            .collect(),
        constants: instance.constants.clone(),
        path_decomposition: None,
        robust_layout: Some(layout),
    }
}

/// Removes one edge from the graph, keeping everything else.
pub fn remove_edge(instance: &GadgetInstance, a: usize, b: usize) -> GadgetInstance {
    let mut graph = Graph::new(instance.graph.vertex_count());
    for (x, y) in instance.graph.edges() {
        if (x, y) != (a.min(b), a.max(b)) {
            graph.add_edge(x, y).expect("rebuilt edges are fresh");
        }
    }
    assert!(
        graph.edge_count() + 1 == instance.graph.edge_count(),
        "edge ({a}, {b}) must exist"
    );
    GadgetInstance {
        graph,
        distinguished: instance.distinguished.clone(),
        constants: instance.constants.clone(),
        path_decomposition: None,
        robust_layout: instance.robust_layout.clone(),
    }
}

/// Adds an edge between the first two distinguished vertices.
pub fn wire_interface(instance: &GadgetInstance) -> GadgetInstance {
    assert!(
        instance.distinguished.len() >= 2,
        "wiring the interface needs at least two distinguished vertices"
    );
    let mut mutated = instance.clone();
    mutated
        .graph
        .add_edge(instance.distinguished[0], instance.distinguished[1])
        .expect("interface vertices are nonadjacent in valid gadgets");
    mutated
}

/// Replaces one advertised constant.
pub fn misreport_constant(instance: &GadgetInstance, name: &str, value: usize) -> GadgetInstance {
    let mut mutated = instance.clone();
    mutated.constants.insert(name.to_owned(), value);
    mutated
}

fn removal_map(n: usize, victims: &[usize]) -> Vec<Option<usize>> {
    let mut doomed = vec![false; n];
    for &v in victims {
        doomed[v] = true;
    }
    let mut remap = vec![None; n];
    let mut next = 0usize;
    for (v, slot) in remap.iter_mut().enumerate() {
        if !doomed[v] {
            *slot = Some(next);
            next += 1;
        }
    }
    remap
}

fn rebuild_graph(graph: &Graph, remap: &[Option<usize>]) -> Graph {
    let survivors = remap.iter().filter(|slot| slot.is_some()).count();
    let mut out = Graph::new(survivors);
    for (a, b) in graph.edges() {
        if let (Some(na), Some(nb)) = (remap[a], remap[b]) {
            out.add_edge(na, nb).expect("rebuilt edges are fresh");
        }
    }
    out
}

fn remap_layout(layout: &RobustLayout, remap: &[Option<usize>]) -> RobustLayout {
    let keep = |v: usize| remap[v].expect("role vertices survive the removal");
    RobustLayout {
        hubs: [keep(layout.hubs[0]), keep(layout.hubs[1])],
        guards: [
            layout.guards[0].iter().map(|&g| keep(g)).collect(),
            layout.guards[1].iter().map(|&g| keep(g)).collect(),
        ],
        copies: layout
            .copies
            .iter()
            .map(|copy| RobustCopy {
                owner: keep(copy.owner),
                vertices: copy.vertices.iter().map(|&v| keep(v)).collect(),
                portal: keep(copy.portal),
            })
            .collect(),
    }
}
