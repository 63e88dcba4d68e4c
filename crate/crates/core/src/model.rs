//! Problem vocabulary: membership sets, `(σ,ρ)` specifications with their
//! derived state caps, per-vertex states, graphs, and the
//! satisfied/violated semantics that everything else consumes.

use std::fmt;

use thiserror::Error;

/// Error raised when constructing or parsing a membership set.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    /// A finite membership set must contain at least one element.
    #[error("finite membership set must be nonempty")]
    EmptyFiniteSet,
    /// The textual form did not match `finite:{c1,c2,...}` or `cofinite:c`.
    #[error("cannot parse membership set {input:?}: {reason}")]
    BadSyntax { input: String, reason: String },
}

/// A set of admissible selected-neighbor counts: either a nonempty finite
/// set of non-negative integers, or a simple cofinite set `{x : x ≥ c}`.
///
/// These are the only two shapes the solver supports; they are closed under
/// everything the dynamic program needs and cover the classic domination
/// variants (e.g. Dominating Set is `σ = cofinite:0`, `ρ = cofinite:1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MembershipSet {
    /// A nonempty, sorted, duplicate-free list of admissible counts.
    Finite(Vec<usize>),
    /// All counts greater than or equal to the threshold.
    CofiniteAtLeast(usize),
}

impl MembershipSet {
    /// Builds a finite set from arbitrary elements, sorting and
    /// deduplicating. Fails on an empty collection.
    pub fn finite<I: IntoIterator<Item = usize>>(elements: I) -> Result<Self, SpecError> {
        let mut v: Vec<usize> = elements.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            return Err(SpecError::EmptyFiniteSet);
        }
        Ok(MembershipSet::Finite(v))
    }

    /// The set `{x : x ≥ threshold}`.
    pub fn cofinite_at_least(threshold: usize) -> Self {
        MembershipSet::CofiniteAtLeast(threshold)
    }

    /// Membership test.
    pub fn contains(&self, x: usize) -> bool {
        match self {
            MembershipSet::Finite(v) => v.binary_search(&x).is_ok(),
            MembershipSet::CofiniteAtLeast(c) => x >= *c,
        }
    }

    /// Membership of `x` in the shifted-down set `{t − 1 : t ∈ τ} ∩ Z≥0`,
    /// i.e. `x ∈ τ−1 ⟺ x+1 ∈ τ`. Used by gadget checkers that reason about
    /// a vertex gaining one additional selected neighbor later; a negative
    /// shifted element is dropped because no neighbor count can realize it.
    pub fn contains_shifted_down(&self, x: usize) -> bool {
        self.contains(x + 1)
    }

    /// Smallest element (the threshold for cofinite sets).
    pub fn min_element(&self) -> usize {
        match self {
            MembershipSet::Finite(v) => v[0],
            MembershipSet::CofiniteAtLeast(c) => *c,
        }
    }

    /// Largest element, or `None` for cofinite sets.
    pub fn max_element(&self) -> Option<usize> {
        match self {
            MembershipSet::Finite(v) => Some(*v.last().unwrap()),
            MembershipSet::CofiniteAtLeast(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, MembershipSet::Finite(_))
    }

    /// State cap for the partial problem: `max + 1` for finite sets, the
    /// threshold for cofinite sets. Counting selected neighbors beyond this
    /// value never changes membership.
    pub fn partial_cap(&self) -> usize {
        match self {
            MembershipSet::Finite(v) => v.last().unwrap() + 1,
            MembershipSet::CofiniteAtLeast(c) => *c,
        }
    }

    /// State cap for the nonpartial problem: `max` for finite sets, the
    /// threshold for cofinite sets.
    pub fn nonpartial_cap(&self) -> usize {
        match self {
            MembershipSet::Finite(v) => *v.last().unwrap(),
            MembershipSet::CofiniteAtLeast(c) => *c,
        }
    }

    /// Parses the whitespace-free textual grammar used by the CLI and file
    /// headers: `finite:{c1,c2,...}` or `cofinite:c`.
    pub fn parse(input: &str) -> Result<Self, SpecError> {
        let bad = |reason: &str| SpecError::BadSyntax {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        if let Some(rest) = input.strip_prefix("finite:") {
            let inner = rest
                .strip_prefix('{')
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(|| bad("expected braces, as in finite:{0,1}"))?;
            if inner.is_empty() {
                return Err(SpecError::EmptyFiniteSet);
            }
            let mut elements = Vec::new();
            for part in inner.split(',') {
                let x: usize = part
                    .parse()
                    .map_err(|_| bad(&format!("bad element {part:?}")))?;
                elements.push(x);
            }
            MembershipSet::finite(elements)
        } else if let Some(rest) = input.strip_prefix("cofinite:") {
            let c: usize = rest
                .parse()
                .map_err(|_| bad(&format!("bad threshold {rest:?}")))?;
            Ok(MembershipSet::CofiniteAtLeast(c))
        } else {
            Err(bad("expected a finite: or cofinite: prefix"))
        }
    }
}

impl fmt::Display for MembershipSet {
    /// Emits the same grammar `parse` accepts, so that `parse ∘ to_string`
    /// is the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipSet::Finite(v) => {
                write!(f, "finite:{{")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "}}")
            }
            MembershipSet::CofiniteAtLeast(c) => write!(f, "cofinite:{c}"),
        }
    }
}

/// A `(σ,ρ)` pair with every derived constant the solver needs.
///
/// The caps bound how far selected-neighbor counts must be tracked:
/// * `s_sigma` / `s_rho` — nonpartial caps (`max τ` for finite, `min τ` for
///   cofinite);
/// * `s_sigma_p` / `s_rho_p` — partial caps (`max τ + 1` for finite sets:
///   one extra state to remember that a finite constraint is irrecoverably
///   overshot);
/// * `alphabet_size_partial = s_sigma_p + s_rho_p + 2`, the number of
///   distinct per-vertex states the partial dynamic program distinguishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaRhoSpec {
    pub sigma: MembershipSet,
    pub rho: MembershipSet,
    pub s_sigma: usize,
    pub s_rho: usize,
    pub s_sigma_p: usize,
    pub s_rho_p: usize,
    /// `max(s_sigma_p, s_rho_p)`.
    pub s_max_p: usize,
    pub alphabet_size_partial: usize,
    pub alphabet_size_nonpartial: usize,
}

impl SigmaRhoSpec {
    /// Derives all constants from the two membership sets. Infallible: the
    /// only invalid input (an empty finite set) is unrepresentable.
    pub fn new(sigma: MembershipSet, rho: MembershipSet) -> Self {
        let s_sigma = sigma.nonpartial_cap();
        let s_rho = rho.nonpartial_cap();
        let s_sigma_p = sigma.partial_cap();
        let s_rho_p = rho.partial_cap();
        SigmaRhoSpec {
            s_sigma,
            s_rho,
            s_sigma_p,
            s_rho_p,
            s_max_p: s_sigma_p.max(s_rho_p),
            alphabet_size_partial: s_sigma_p + s_rho_p + 2,
            alphabet_size_nonpartial: s_sigma + s_rho + 2,
            sigma,
            rho,
        }
    }

    /// Parses both sets from their textual grammar.
    pub fn parse(sigma: &str, rho: &str) -> Result<Self, SpecError> {
        Ok(SigmaRhoSpec::new(
            MembershipSet::parse(sigma)?,
            MembershipSet::parse(rho)?,
        ))
    }

    /// The membership set governing one side.
    pub fn set(&self, side: Side) -> &MembershipSet {
        match side {
            Side::Selected => &self.sigma,
            Side::Unselected => &self.rho,
        }
    }

    /// The partial state cap of one side's chain.
    pub fn partial_cap(&self, side: Side) -> usize {
        match side {
            Side::Selected => self.s_sigma_p,
            Side::Unselected => self.s_rho_p,
        }
    }
}

/// Whether a vertex is in the selection (`σ`-side) or out of it (`ρ`-side).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Selected,
    Unselected,
}

/// A per-vertex DP state: the vertex's side plus the capped number of
/// selected neighbors accounted for so far.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct State {
    pub side: Side,
    pub count: usize,
}

/// Error from combining two states of different sides; the capped addition
/// is only defined within one side's chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("cannot join a selected-side state with an unselected-side state")]
pub struct MixedSidesError;

impl State {
    /// A `σ`-state: the vertex is selected, with `count` accounted
    /// selected neighbors.
    pub fn sigma(count: usize) -> Self {
        State { side: Side::Selected, count }
    }

    /// A `ρ`-state: the vertex is unselected.
    pub fn rho(count: usize) -> Self {
        State { side: Side::Unselected, count }
    }

    /// True when this state is the capped top of a *finite* set's chain:
    /// the constraint is overshot and no future neighbors can repair it.
    pub fn is_overflow(&self, spec: &SigmaRhoSpec) -> bool {
        spec.set(self.side).is_finite() && self.count == spec.partial_cap(self.side)
    }

    /// Capped addition of two same-side states:
    /// `τ_x ⊕ τ_y = τ_{min(x+y, cap)}`. Commutative and associative within a
    /// side, with `τ_0` as identity; mixed sides are an error.
    pub fn join(self, other: State, spec: &SigmaRhoSpec) -> Result<State, MixedSidesError> {
        if self.side != other.side {
            return Err(MixedSidesError);
        }
        let cap = spec.partial_cap(self.side);
        Ok(State {
            side: self.side,
            count: (self.count + other.count).min(cap),
        })
    }
}

/// Error raised while building a graph.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
}

/// A simple undirected graph over contiguous vertex ids `0..n`.
///
/// Adjacency lists are kept sorted, so neighbor iteration is deterministic
/// and edge queries are logarithmic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// An edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    /// Builds a graph from an edge list, rejecting loops and duplicates.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    /// Inserts the undirected edge `{u, v}`.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.vertex_count();
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::VertexOutOfRange { v: w, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => return Err(GraphError::DuplicateEdge(u, v)),
            Err(pos) => self.adj[u].insert(pos, v),
        }
        let pos = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos, u);
        Ok(())
    }

    /// Neighbors of `v`, ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges as `(u, v)` pairs with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.vertex_count() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

/// Verdict of a single vertex under a selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexStatus {
    Satisfied,
    Violated,
}

/// Evaluates one vertex: satisfied iff its selected-neighbor count lies in
/// `σ` (selected vertex) or `ρ` (unselected vertex).
///
/// `selected` must have one entry per vertex.
pub fn violation_status(
    g: &Graph,
    selected: &[bool],
    v: usize,
    spec: &SigmaRhoSpec,
) -> VertexStatus {
    assert_eq!(selected.len(), g.vertex_count(), "selection/graph size mismatch");
    let count = g.neighbors(v).iter().filter(|&&u| selected[u]).count();
    let set = if selected[v] { &spec.sigma } else { &spec.rho };
    if set.contains(count) {
        VertexStatus::Satisfied
    } else {
        VertexStatus::Violated
    }
}

/// Number of violated vertices under a selection.
pub fn count_violations(g: &Graph, selected: &[bool], spec: &SigmaRhoSpec) -> usize {
    (0..g.vertex_count())
        .filter(|&v| violation_status(g, selected, v, spec) == VertexStatus::Violated)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dom_set() -> SigmaRhoSpec {
        SigmaRhoSpec::new(
            MembershipSet::cofinite_at_least(0),
            MembershipSet::cofinite_at_least(1),
        )
    }

    #[test]
    fn membership_basics() {
        let f1 = MembershipSet::finite([1]).unwrap();
        assert!(f1.contains(1));
        assert!(!f1.contains(0));
        let c2 = MembershipSet::cofinite_at_least(2);
        assert!(!c2.contains(1));
        assert!(c2.contains(2));
        assert!(MembershipSet::cofinite_at_least(0).contains(10));
    }

    #[test]
    fn finite_sets_are_normalized_and_nonempty() {
        let s = MembershipSet::finite([3, 1, 3, 0]).unwrap();
        assert_eq!(s, MembershipSet::Finite(vec![0, 1, 3]));
        assert_eq!(MembershipSet::finite([]), Err(SpecError::EmptyFiniteSet));
    }

    #[test]
    fn shifted_down_membership() {
        // τ = {1}: τ−1 = {0}.
        let s = MembershipSet::finite([1]).unwrap();
        assert!(s.contains_shifted_down(0));
        assert!(!s.contains_shifted_down(1));
        // τ = {0}: τ−1 = {−1} ∩ Z≥0 = ∅.
        let z = MembershipSet::finite([0]).unwrap();
        assert!(!z.contains_shifted_down(0));
        // Cofinite shifts its threshold down.
        let c = MembershipSet::cofinite_at_least(2);
        assert!(c.contains_shifted_down(1));
        assert!(!c.contains_shifted_down(0));
    }

    #[test]
    fn parse_and_display_round_trip() {
        for text in ["finite:{0,1}", "finite:{2}", "cofinite:0", "cofinite:3"] {
            let set = MembershipSet::parse(text).unwrap();
            assert_eq!(set.to_string(), text);
            assert_eq!(MembershipSet::parse(&set.to_string()).unwrap(), set);
        }
        assert!(MembershipSet::parse("finite:{}").is_err());
        assert!(MembershipSet::parse("finite:0").is_err());
        assert!(MembershipSet::parse("cofinite:x").is_err());
        assert!(MembershipSet::parse("all").is_err());
        assert!(MembershipSet::parse("finite:{1,}").is_err());
    }

    #[test]
    fn derived_constants_for_classic_problems() {
        // Dominating Set: σ = Z≥0, ρ = Z≥1.
        assert_eq!(dom_set().alphabet_size_partial, 3);
        // Perfect Code: σ = {0}, ρ = {1}.
        let pc = SigmaRhoSpec::parse("finite:{0}", "finite:{1}").unwrap();
        assert_eq!(pc.alphabet_size_partial, 5);
        // Total Perfect Dominating Set: σ = {1}, ρ = {1}.
        let tp = SigmaRhoSpec::parse("finite:{1}", "finite:{1}").unwrap();
        assert_eq!(tp.alphabet_size_partial, 6);
        assert_eq!(tp.alphabet_size_nonpartial, 4);
        assert_eq!((tp.s_sigma, tp.s_rho), (1, 1));
        // Independent Dominating Set: σ = {0}, ρ = Z≥1.
        let ids = SigmaRhoSpec::parse("finite:{0}", "cofinite:1").unwrap();
        assert_eq!(ids.alphabet_size_partial, 4);
    }

    #[test]
    fn state_join_follows_capped_addition() {
        // ρ = {1} gives s_rho_p = 2.
        let spec = SigmaRhoSpec::parse("cofinite:0", "finite:{1}").unwrap();
        assert_eq!(spec.s_rho_p, 2);
        let joined = State::rho(1).join(State::rho(1), &spec).unwrap();
        assert_eq!(joined, State::rho(2));
        let id = State::sigma(0).join(State::sigma(0), &spec).unwrap();
        assert_eq!(id, State::sigma(0));
        assert_eq!(
            State::rho(1).join(State::sigma(0), &spec),
            Err(MixedSidesError)
        );
    }

    #[test]
    fn state_join_is_commutative_associative_with_identity() {
        let spec = SigmaRhoSpec::parse("finite:{0,2}", "finite:{1,3}").unwrap();
        for side in [Side::Selected, Side::Unselected] {
            let cap = spec.partial_cap(side);
            for x in 0..=cap {
                let sx = State { side, count: x };
                assert_eq!(sx.join(State { side, count: 0 }, &spec).unwrap(), sx);
                for y in 0..=cap {
                    let sy = State { side, count: y };
                    assert_eq!(
                        sx.join(sy, &spec).unwrap(),
                        sy.join(sx, &spec).unwrap()
                    );
                    for z in 0..=cap {
                        let sz = State { side, count: z };
                        let left = sx.join(sy, &spec).unwrap().join(sz, &spec).unwrap();
                        let right = sx.join(sy.join(sz, &spec).unwrap(), &spec).unwrap();
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }

    #[test]
    fn overflow_only_on_finite_chains() {
        let spec = SigmaRhoSpec::parse("finite:{1}", "cofinite:2").unwrap();
        // σ finite with cap 2: the top σ-state is an overflow.
        assert!(State::sigma(2).is_overflow(&spec));
        assert!(!State::sigma(1).is_overflow(&spec));
        // ρ cofinite: its top state just means "enough", never overflow.
        assert!(!State::rho(2).is_overflow(&spec));
    }

    #[test]
    fn graph_construction_rejects_non_simple_input() {
        let mut g = Graph::new(3);
        g.add_edge(0, 1).unwrap();
        assert_eq!(g.add_edge(1, 0), Err(GraphError::DuplicateEdge(1, 0)));
        assert_eq!(g.add_edge(2, 2), Err(GraphError::SelfLoop(2)));
        assert_eq!(
            g.add_edge(0, 3),
            Err(GraphError::VertexOutOfRange { v: 3, n: 3 })
        );
        assert_eq!(g.edges(), vec![(0, 1)]);
        assert_eq!(g.degree(0), 1);
        assert!(g.has_edge(1, 0));
    }

    #[test]
    fn violation_status_matches_definition() {
        let spec = dom_set();
        // P2: u−w, S = {u}: w has one selected neighbor, 1 ∈ Z≥1.
        let p2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(
            violation_status(&p2, &[true, false], 1, &spec),
            VertexStatus::Satisfied
        );
        // Isolated vertex, S = ∅: zero selected neighbors, 0 ∉ Z≥1.
        let single = Graph::new(1);
        assert_eq!(
            violation_status(&single, &[false], 0, &spec),
            VertexStatus::Violated
        );
    }

    #[test]
    fn star_center_selection_is_perfect_code() {
        // K_{1,3} with σ = {0}, ρ = {1} and the center selected: the center
        // has zero selected neighbors, every leaf exactly one.
        let spec = SigmaRhoSpec::parse("finite:{0}", "finite:{1}").unwrap();
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let selected = [true, false, false, false];
        for v in 0..4 {
            assert_eq!(
                violation_status(&star, &selected, v, &spec),
                VertexStatus::Satisfied
            );
        }
        assert_eq!(count_violations(&star, &selected, &spec), 0);
    }

    #[test]
    fn zero_in_rho_makes_empty_selection_clean() {
        let spec = SigmaRhoSpec::parse("finite:{1}", "cofinite:0").unwrap();
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(count_violations(&g, &[false; 5], &spec), 0);
    }

    #[test]
    fn overflowed_vertex_stays_violated_on_growing_stars() {
        // On K_{1,m} select every leaf: once the center's count passes a
        // finite σ's maximum it can never be satisfied again.
        let spec = SigmaRhoSpec::parse("finite:{1,2}", "cofinite:0").unwrap();
        for m in 3..8 {
            let mut g = Graph::new(m + 1);
            for leaf in 1..=m {
                g.add_edge(0, leaf).unwrap();
            }
            let selected = vec![true; m + 1];
            assert_eq!(
                violation_status(&g, &selected, 0, &spec),
                VertexStatus::Violated
            );
        }
    }
}
