//! Robust attractors: large gadgets with interface `U` whose spend
//! requirement degrades gracefully under tolerated violations.
//!
//! A robust attractor with interface `U`, budget `gamma`, degradation rate
//! `beta` and slack `delta` satisfies:
//!
//! 1. for every `u` in `U` some selection picks exactly `u` from `U`,
//!    avoids `N(U)` entirely, violates nothing in `V - U`, and spends
//!    exactly `gamma` outside `U`;
//! 2. every selection with at most `ell` violated vertices in `V - U`
//!    (for each `ell` up to the checker's budget) spends at least
//!    `gamma - ell * beta` outside `U`;
//! 3. every selection picking zero or several interface vertices either
//!    violates something in `V - U` or spends more than `gamma`;
//! 4. every selection touching `N(U)` either violates more than `delta`
//!    vertices of `V - U` or spends more than `gamma + delta`;
//! 5. `U` is an independent set.
//!
//! # Checking strategy
//!
//! The definitional checker [`check_robust_naive`] enumerates all `2^n`
//! selections and is only usable on small instances.  Real attractors are
//! too large for that, but their structure is narrow: every vertex outside
//! a small *frame* (the two hubs, the interface, and the guards) lives in
//! a portal-gadget copy whose only external edge is portal-to-owner.
//! [`check_robust`] exploits this: it enumerates frame selections
//! exhaustively and, for each, aggregates optimal copy completions with
//! small dynamic programs.  Every quantity is still exact — the
//! factorisation is lossless because copies interact with the rest of the
//! graph only through their portal's selection bit — so the two checkers
//! accept and reject exactly the same instances.  The structural
//! assumptions (vertex partition and edge locality) are audited against
//! the graph before any property is evaluated.

use std::collections::BTreeMap;

use crate::decomp::TreeDecomposition;
use crate::model::{Graph, SigmaRhoSpec};

use super::{
    ensure_enumerable, is_violated, mask_to_selected, mask_to_vertices, require_constant,
    tremendous::generate_tremendous, GadgetError, GadgetInstance, Verdict,
};

/// One portal-gadget copy inside a robust attractor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustCopy {
    /// The frame vertex the copy hangs off (a hub or a guard).
    pub owner: usize,
    /// The copy's vertices, in the portal gadget's construction order.
    pub vertices: Vec<usize>,
    /// The copy's portal vertex (an element of `vertices`).
    pub portal: usize,
}

/// Structural role map of a robust attractor.
///
/// The frame is `hubs + interface + guards`; every other vertex belongs to
/// exactly one copy, and the only edges leaving a copy go from its portal
/// to its owner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustLayout {
    /// The two hub vertices; the interface is adjacent to exactly these.
    pub hubs: [usize; 2],
    /// Guard vertices per hub: `guards[i]` are the guards adjacent to
    /// `hubs[i]`.
    pub guards: [Vec<usize>; 2],
    /// All portal-gadget copies.
    pub copies: Vec<RobustCopy>,
}

/// Counterexamples to the robust-attractor properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RobustViolation {
    /// Two interface vertices are adjacent.
    InterfaceEdge {
        /// One endpoint.
        a: usize,
        /// The other endpoint.
        b: usize,
    },
    /// A selection with few violations outside the interface spends less
    /// than the degraded budget requires.
    DegradedSpendTooLow {
        /// The offending selection, as a sorted vertex list.
        selection: Vec<usize>,
        /// How many vertices outside the interface it violates.
        violations: usize,
        /// What it spends outside the interface.
        spent: usize,
        /// The degraded lower bound it beats.
        required: usize,
    },
    /// Some interface vertex has no clean selection that picks exactly it,
    /// avoids the interface neighbourhood, and spends exactly the budget.
    MissingExactSelection {
        /// The interface vertex with no witness.
        interface_vertex: usize,
    },
    /// A selection picking zero or several interface vertices is
    /// nevertheless clean and within budget.
    UncommittedSelection {
        /// The offending selection, as a sorted vertex list.
        selection: Vec<usize>,
        /// What it spends outside the interface.
        spent: usize,
    },
    /// A selection touching the interface neighbourhood stays within the
    /// slack allowance on both violations and spend.
    BoundaryTouchingSelection {
        /// The offending selection, as a sorted vertex list.
        selection: Vec<usize>,
        /// How many vertices outside the interface it violates.
        violations: usize,
        /// What it spends outside the interface.
        spent: usize,
    },
}

/// Constants the robust checkers read from an instance.
struct RobustConstants {
    gamma: usize,
    beta: usize,
    delta: usize,
}

fn read_constants(instance: &GadgetInstance) -> Result<RobustConstants, GadgetError> {
    Ok(RobustConstants {
        gamma: require_constant(instance, "gamma")?,
        beta: require_constant(instance, "beta")?,
        delta: require_constant(instance, "delta")?,
    })
}

fn interface_independent(instance: &GadgetInstance) -> Option<RobustViolation> {
    let graph = &instance.graph;
    for &u in &instance.distinguished {
        for &x in graph.neighbors(u) {
            if instance.distinguished.contains(&x) {
                return Some(RobustViolation::InterfaceEdge {
                    a: u.min(x),
                    b: u.max(x),
                });
            }
        }
    }
    None
}

/// Verifies the robust-attractor properties by enumerating every selection.
///
/// Exact but exponential in the whole vertex count; intended for small
/// handcrafted instances and as a cross-check for [`check_robust`].
pub fn check_robust_naive(
    instance: &GadgetInstance,
    spec: &SigmaRhoSpec,
    ell_max: usize,
) -> Result<Verdict<RobustViolation>, GadgetError> {
    let n = instance.graph.vertex_count();
    ensure_enumerable(n)?;
    let graph = &instance.graph;
    let interface = &instance.distinguished;
    if interface.is_empty() || interface.iter().any(|&u| u >= n) {
        return Err(GadgetError::MalformedInstance {
            reason: "interface must be a nonempty list of in-range vertices".to_owned(),
        });
    }
    let consts = read_constants(instance)?;

    if let Some(violation) = interface_independent(instance) {
        return Ok(Verdict::Refuted(violation));
    }

    let mut in_interface = vec![false; n];
    for &u in interface {
        in_interface[u] = true;
    }
    let mut in_boundary = vec![false; n];
    for &u in interface {
        for &x in graph.neighbors(u) {
            if !in_interface[x] {
                in_boundary[x] = true;
            }
        }
    }

    let mut degraded: Option<RobustViolation> = None;
    let mut exact_found = vec![false; interface.len()];
    let mut uncommitted: Option<RobustViolation> = None;
    let mut boundary: Option<RobustViolation> = None;

    for mask in 0u64..1 << n {
        let selected = mask_to_selected(mask, n);
        let violations = (0..n)
            .filter(|&x| !in_interface[x] && is_violated(graph, spec, &selected, x))
            .count();
        let spent = (0..n)
            .filter(|&x| !in_interface[x] && selected[x])
            .count();
        let picked: Vec<usize> = interface
            .iter()
            .enumerate()
            .filter(|&(_, &u)| selected[u])
            .map(|(i, _)| i)
            .collect();
        let touches_boundary = (0..n).any(|x| in_boundary[x] && selected[x]);

        if degraded.is_none() && violations <= ell_max {
            let required = consts.gamma.saturating_sub(violations * consts.beta);
            if spent < required {
                degraded = Some(RobustViolation::DegradedSpendTooLow {
                    selection: mask_to_vertices(mask, n),
                    violations,
                    spent,
                    required,
                });
            }
        }
        if picked.len() == 1
            && !touches_boundary
            && violations == 0
            && spent == consts.gamma
        {
            exact_found[picked[0]] = true;
        }
        if uncommitted.is_none() && picked.len() != 1 && violations == 0 && spent <= consts.gamma {
            uncommitted = Some(RobustViolation::UncommittedSelection {
                selection: mask_to_vertices(mask, n),
                spent,
            });
        }
        if boundary.is_none()
            && touches_boundary
            && violations <= consts.delta
            && spent <= consts.gamma + consts.delta
        {
            boundary = Some(RobustViolation::BoundaryTouchingSelection {
                selection: mask_to_vertices(mask, n),
                violations,
                spent,
            });
        }
    }

    if let Some(v) = degraded {
        return Ok(Verdict::Refuted(v));
    }
    if let Some(i) = (0..interface.len()).find(|&i| !exact_found[i]) {
        return Ok(Verdict::Refuted(RobustViolation::MissingExactSelection {
            interface_vertex: interface[i],
        }));
    }
    if let Some(v) = uncommitted {
        return Ok(Verdict::Refuted(v));
    }
    if let Some(v) = boundary {
        return Ok(Verdict::Refuted(v));
    }
    Ok(Verdict::Holds)
}

/// Set of achievable sizes, as a bitset over `0..=capacity`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct SizeSet {
    words: Vec<u64>,
    capacity: usize,
}

impl SizeSet {
    fn empty(capacity: usize) -> Self {
        SizeSet {
            words: vec![0; capacity / 64 + 1],
            capacity,
        }
    }

    fn insert(&mut self, size: usize) {
        debug_assert!(size <= self.capacity);
        self.words[size / 64] |= 1 << (size % 64);
    }

    fn contains(&self, size: usize) -> bool {
        size <= self.capacity && self.words[size / 64] >> (size % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn union(&mut self, other: &SizeSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Adds `{a + b : a in self, b in other}` into `out`.
    fn sum_into(&self, other: &SizeSet, out: &mut SizeSet) {
        for b in 0..=other.capacity {
            if !other.contains(b) {
                continue;
            }
            for a in 0..=self.capacity {
                if self.contains(a) && a + b <= out.capacity {
                    out.insert(a + b);
                }
            }
        }
    }
}

/// Lossless frame-factorised evaluation engine for robust attractors.
struct FrameMachine<'a> {
    graph: &'a Graph,
    spec: &'a SigmaRhoSpec,
    /// Frame vertices in fixed order: hubs, interface, guards.
    frame: Vec<usize>,
    /// Bit over the frame order: vertex is in the interface.
    interface_bits: u64,
    /// Bit over the frame order: vertex is in `N(U)`.
    boundary_bits: u64,
    /// Frame-internal adjacency, as bitmasks over the frame order.
    adj_bits: Vec<u64>,
    /// Per frame vertex, the dynamic-programming model of its copies.
    owners: Vec<OwnerModel>,
    x_cap: usize,
    n: usize,
}

/// Per-copy optimal-completion tables.
#[derive(Clone)]
struct CopyTables {
    /// Local vertex labels (graph ids) in enumeration order.
    vertices: Vec<usize>,
    /// Portal position within `vertices`.
    portal_pos: usize,
    /// Whether the portal-owner edge is actually present.
    linked: bool,
    /// `best[owner_sel][portal_sel][x]`: minimum selected size over copy
    /// selections with at most `x` violated copy vertices.
    best: [[Vec<Option<usize>>; 2]; 2],
    /// `zero[owner_sel][portal_sel]`: achievable selected sizes with zero
    /// violated copy vertices.
    zero: [[SizeSet; 2]; 2],
}

/// Per-owner aggregation over its copies.
struct OwnerModel {
    /// The owner's copy tables, in aggregation order.
    tables: Vec<CopyTables>,
    /// `layers[owner_sel][i][q][x]`: minimum total size over the first `i`
    /// copies with `q` linked portals selected and at most `x` violations.
    layers: [Vec<Vec<Vec<Option<usize>>>>; 2],
    /// `zero[owner_sel][q]`: achievable total sizes at zero violations.
    zero: [Vec<SizeSet>; 2],
}

fn min_plus(f: &[Option<usize>], g: &[Option<usize>]) -> Vec<Option<usize>> {
    let len = f.len();
    let mut out = vec![None; len];
    for (x, slot) in out.iter_mut().enumerate() {
        let mut best = None;
        for a in 0..=x {
            if let (Some(fa), Some(gb)) = (f[a], g[x - a]) {
                let total = fa + gb;
                if best.is_none_or(|b| total < b) {
                    best = Some(total);
                }
            }
        }
        *slot = best;
    }
    out
}

impl<'a> FrameMachine<'a> {
    fn build(
        instance: &'a GadgetInstance,
        spec: &'a SigmaRhoSpec,
        x_cap: usize,
    ) -> Result<Self, GadgetError> {
        let graph = &instance.graph;
        let n = graph.vertex_count();
        let layout = instance.robust_layout.as_ref().ok_or_else(|| {
            GadgetError::MalformedInstance {
                reason: "frame-factorised checking needs the structural role map".to_owned(),
            }
        })?;
        let interface = &instance.distinguished;
        if interface.is_empty() {
            return Err(GadgetError::MalformedInstance {
                reason: "interface must be nonempty".to_owned(),
            });
        }

        // Frame order: hubs, interface, guards of hub 0, guards of hub 1.
        let mut frame = Vec::new();
        frame.extend_from_slice(&layout.hubs);
        frame.extend_from_slice(interface);
        frame.extend_from_slice(&layout.guards[0]);
        frame.extend_from_slice(&layout.guards[1]);
        ensure_enumerable(frame.len())?;

        // Classify every vertex: frame position or copy membership.
        const UNASSIGNED: usize = usize::MAX;
        let mut frame_pos = vec![UNASSIGNED; n];
        for (i, &v) in frame.iter().enumerate() {
            if v >= n {
                return Err(GadgetError::MalformedInstance {
                    reason: format!("frame vertex {v} out of range"),
                });
            }
            if frame_pos[v] != UNASSIGNED {
                return Err(GadgetError::MalformedInstance {
                    reason: format!("vertex {v} has two frame roles"),
                });
            }
            frame_pos[v] = i;
        }
        let mut copy_of = vec![UNASSIGNED; n];
        for (c, copy) in layout.copies.iter().enumerate() {
            if copy.vertices.is_empty() {
                return Err(GadgetError::MalformedInstance {
                    reason: format!("copy {c} has no vertices"),
                });
            }
            if !copy.vertices.contains(&copy.portal) {
                return Err(GadgetError::MalformedInstance {
                    reason: format!("copy {c} portal is not one of its vertices"),
                });
            }
            if copy.owner >= n || frame_pos[copy.owner] == UNASSIGNED {
                return Err(GadgetError::MalformedInstance {
                    reason: format!("copy {c} owner {} is not a frame vertex", copy.owner),
                });
            }
            if interface.contains(&copy.owner) {
                return Err(GadgetError::MalformedInstance {
                    reason: format!("copy {c} is owned by an interface vertex"),
                });
            }
            for &v in &copy.vertices {
                if v >= n {
                    return Err(GadgetError::MalformedInstance {
                        reason: format!("copy {c} vertex {v} out of range"),
                    });
                }
                if frame_pos[v] != UNASSIGNED || copy_of[v] != UNASSIGNED {
                    return Err(GadgetError::MalformedInstance {
                        reason: format!("vertex {v} has two roles"),
                    });
                }
                copy_of[v] = c;
            }
        }
        if let Some(v) = (0..n).find(|&v| frame_pos[v] == UNASSIGNED && copy_of[v] == UNASSIGNED) {
            return Err(GadgetError::MalformedInstance {
                reason: format!("vertex {v} has no role in the layout"),
            });
        }

        // Edge locality: frame-frame, copy-internal, or portal-owner.
        for (a, b) in graph.edges() {
            let fa = frame_pos[a] != UNASSIGNED;
            let fb = frame_pos[b] != UNASSIGNED;
            if fa && fb {
                continue;
            }
            if !fa && !fb {
                if copy_of[a] == copy_of[b] {
                    continue;
                }
                return Err(GadgetError::MalformedInstance {
                    reason: format!("edge ({a}, {b}) joins two different copies"),
                });
            }
            let (inside, outside) = if fa { (b, a) } else { (a, b) };
            let copy = &layout.copies[copy_of[inside]];
            if inside == copy.portal && outside == copy.owner {
                continue;
            }
            return Err(GadgetError::MalformedInstance {
                reason: format!(
                    "edge ({a}, {b}) leaves a copy other than portal-to-owner"
                ),
            });
        }

        // Frame-internal adjacency and role masks.
        let mut adj_bits = vec![0u64; frame.len()];
        for (i, &v) in frame.iter().enumerate() {
            for &x in graph.neighbors(v) {
                if frame_pos[x] != UNASSIGNED {
                    adj_bits[i] |= 1 << frame_pos[x];
                }
            }
        }
        let mut interface_bits = 0u64;
        for &u in interface {
            interface_bits |= 1 << frame_pos[u];
        }
        let mut boundary_bits = 0u64;
        for &u in interface {
            for &x in graph.neighbors(u) {
                let pos = frame_pos[x];
                if pos != UNASSIGNED && interface_bits >> pos & 1 == 0 {
                    boundary_bits |= 1 << pos;
                }
            }
        }

        // Per-copy tables.
        let mut copy_tables = Vec::with_capacity(layout.copies.len());
        for copy in &layout.copies {
            copy_tables.push(CopyTables::build(graph, spec, copy, x_cap, n)?);
        }

        // Per-owner aggregation.
        let mut owners = Vec::with_capacity(frame.len());
        for &v in &frame {
            let copy_ids: Vec<usize> = layout
                .copies
                .iter()
                .enumerate()
                .filter(|(_, c)| c.owner == v)
                .map(|(c, _)| c)
                .collect();
            owners.push(OwnerModel::build(&copy_ids, &copy_tables, x_cap, n));
        }

        Ok(FrameMachine {
            graph,
            spec,
            frame,
            interface_bits,
            boundary_bits,
            adj_bits,
            owners,
            x_cap,
            n,
        })
    }

    fn frame_count(&self) -> u64 {
        1 << self.frame.len()
    }

    /// Spend on selected non-interface frame vertices.
    fn frame_spend(&self, frame_mask: u64) -> usize {
        (frame_mask & !self.interface_bits).count_ones() as usize
    }

    /// Whether frame vertex `i` is violated given its selection, its
    /// selected frame neighbours, and `q` selected linked portals.
    fn frame_violated(&self, frame_mask: u64, i: usize, q: usize) -> bool {
        let count = (self.adj_bits[i] & frame_mask).count_ones() as usize + q;
        let selected = frame_mask >> i & 1 == 1;
        let set = if selected { &self.spec.sigma } else { &self.spec.rho };
        !set.contains(count)
    }

    /// Minimum copy spend per violation budget for one frame vertex:
    /// `h[x]` = min total copy size with at most `x` violations among the
    /// vertex's copies plus the vertex itself (interface vertices never
    /// count as violations).
    fn owner_profile(&self, frame_mask: u64, i: usize) -> Vec<Option<usize>> {
        let owner_sel = (frame_mask >> i & 1) as usize;
        let in_interface = self.interface_bits >> i & 1 == 1;
        let table = self.owners[i].final_layer(owner_sel);
        let mut h = vec![None; self.x_cap + 1];
        for (q, per_x) in table.iter().enumerate() {
            let own_violation = if in_interface {
                0
            } else {
                usize::from(self.frame_violated(frame_mask, i, q))
            };
            for x in own_violation..=self.x_cap {
                if let Some(size) = per_x[x - own_violation] {
                    if h[x].is_none_or(|b| size < b) {
                        h[x] = Some(size);
                    }
                }
            }
        }
        h
    }

    /// Achievable copy sizes at zero violations for one frame vertex.
    fn owner_zero_sizes(&self, frame_mask: u64, i: usize) -> SizeSet {
        let owner_sel = (frame_mask >> i & 1) as usize;
        let in_interface = self.interface_bits >> i & 1 == 1;
        let mut sizes = SizeSet::empty(self.n);
        for (q, set) in self.owners[i].zero[owner_sel].iter().enumerate() {
            let clean = in_interface || !self.frame_violated(frame_mask, i, q);
            if clean {
                sizes.union(set);
            }
        }
        sizes
    }

    /// Prefix min-plus combination of owner profiles for one frame.
    fn frame_prefixes(&self, frame_mask: u64) -> Vec<Vec<Option<usize>>> {
        let mut prefixes: Vec<Vec<Option<usize>>> = Vec::with_capacity(self.frame.len());
        for i in 0..self.frame.len() {
            let h = self.owner_profile(frame_mask, i);
            let combined = match prefixes.last() {
                None => h,
                Some(prev) => min_plus(prev, &h),
            };
            prefixes.push(combined);
        }
        prefixes
    }

    /// `profile[x]` = minimum spend outside the interface over selections
    /// with at most `x` violations outside the interface.
    #[cfg(test)]
    fn global_profile(&self) -> Vec<Option<usize>> {
        let mut profile = vec![None; self.x_cap + 1];
        for frame_mask in 0..self.frame_count() {
            let fso = self.frame_spend(frame_mask);
            let combined = self
                .frame_prefixes(frame_mask)
                .pop()
                .expect("frame is nonempty");
            for (x, slot) in profile.iter_mut().enumerate() {
                if let Some(size) = combined[x] {
                    let total = fso + size;
                    if slot.is_none_or(|b| total < b) {
                        *slot = Some(total);
                    }
                }
            }
        }
        profile
    }

    /// True when a selection exists that picks exactly the given interface
    /// frame position, avoids `N(U)`, violates nothing outside the
    /// interface, and spends exactly `target` outside it.
    fn clean_exact_exists(&self, interface_pos: usize, target: usize) -> bool {
        for frame_mask in 0..self.frame_count() {
            if frame_mask & self.interface_bits != 1 << interface_pos {
                continue;
            }
            if frame_mask & self.boundary_bits != 0 {
                continue;
            }
            let fso = self.frame_spend(frame_mask);
            if fso > target {
                continue;
            }
            let mut sizes = SizeSet::empty(self.n);
            sizes.insert(0);
            let mut dead = false;
            for i in 0..self.frame.len() {
                let owner_sizes = self.owner_zero_sizes(frame_mask, i);
                if owner_sizes.is_empty() {
                    dead = true;
                    break;
                }
                let mut next = SizeSet::empty(self.n);
                sizes.sum_into(&owner_sizes, &mut next);
                sizes = next;
            }
            if !dead && sizes.contains(target - fso) {
                return true;
            }
        }
        false
    }

    /// Reconstructs a concrete selection achieving `combined[budget]` for
    /// the given frame, and returns it with its actual violation count and
    /// spend outside the interface.
    fn reconstruct(&self, frame_mask: u64, budget: usize) -> (Vec<usize>, usize, usize) {
        let prefixes = self.frame_prefixes(frame_mask);
        let total = prefixes
            .last()
            .expect("frame is nonempty")[budget]
            .expect("reconstruction target must be feasible");

        let mut selected = vec![false; self.n];
        for (i, &v) in self.frame.iter().enumerate() {
            if frame_mask >> i & 1 == 1 {
                selected[v] = true;
            }
        }

        // Split the budget and size owner by owner, from the last one back.
        let mut remaining_x = budget;
        let mut remaining_size = total;
        for i in (0..self.frame.len()).rev() {
            let h = self.owner_profile(frame_mask, i);
            let (alloc_x, alloc_size) = if i == 0 {
                debug_assert_eq!(h[remaining_x].expect("feasible"), remaining_size);
                (remaining_x, remaining_size)
            } else {
                let prev = &prefixes[i - 1];
                let mut found = None;
                'split: for xo in 0..=remaining_x {
                    if let (Some(po), Some(ho)) = (prev[remaining_x - xo], h[xo]) {
                        if po + ho == remaining_size {
                            found = Some((xo, ho));
                            break 'split;
                        }
                    }
                }
                found.expect("prefix tables admit a split")
            };
            self.reconstruct_owner(frame_mask, i, alloc_x, alloc_size, &mut selected);
            remaining_x -= alloc_x;
            remaining_size -= alloc_size;
        }

        let selection: Vec<usize> = (0..self.n).filter(|&v| selected[v]).collect();
        let (violations, spent) = self.account(&selected);
        (selection, violations, spent)
    }

    /// Fills `selected` with an optimal completion for one frame vertex's
    /// copies, spending `size` with at most `x` violations charged to it.
    fn reconstruct_owner(
        &self,
        frame_mask: u64,
        i: usize,
        x: usize,
        size: usize,
        selected: &mut [bool],
    ) {
        let owner_sel = (frame_mask >> i & 1) as usize;
        let in_interface = self.interface_bits >> i & 1 == 1;
        let owner = &self.owners[i];
        let final_layer = owner.final_layer(owner_sel);

        // Find a portal count whose own-violation surcharge fits.
        let mut chosen = None;
        'q: for (q, per_x) in final_layer.iter().enumerate() {
            let own = if in_interface {
                0
            } else {
                usize::from(self.frame_violated(frame_mask, i, q))
            };
            if own > x {
                continue;
            }
            if per_x[x - own] == Some(size) {
                chosen = Some((q, x - own));
                break 'q;
            }
        }
        let (mut q, mut xr) = chosen.expect("owner profile admits the allocation");
        let mut sr = size;

        for step in (0..owner.tables.len()).rev() {
            let tables = &owner.tables[step];
            let prev = &owner.layers[owner_sel][step];
            let mut choice = None;
            'choice: for portal_sel in 0..2usize {
                let cq = usize::from(portal_sel == 1 && tables.linked);
                if cq > q {
                    continue;
                }
                for xc in 0..=xr {
                    let Some(copy_size) = tables.best[owner_sel][portal_sel][xc] else {
                        continue;
                    };
                    if copy_size > sr {
                        continue;
                    }
                    if prev[q - cq][xr - xc] == Some(sr - copy_size) {
                        choice = Some((portal_sel, cq, xc, copy_size));
                        break 'choice;
                    }
                }
            }
            let (portal_sel, cq, xc, copy_size) =
                choice.expect("copy layer admits a split");
            tables.fill_selection(
                self.graph,
                self.spec,
                owner_sel == 1,
                portal_sel == 1,
                xc,
                copy_size,
                selected,
            );
            q -= cq;
            xr -= xc;
            sr -= copy_size;
        }
        debug_assert_eq!(sr, 0, "all size must be accounted to copies");
    }

    /// Recounts violations outside the interface and spend outside the
    /// interface directly from the graph.
    fn account(&self, selected: &[bool]) -> (usize, usize) {
        let mut in_interface = vec![false; self.n];
        for pos in 0..self.frame.len() {
            if self.interface_bits >> pos & 1 == 1 {
                in_interface[self.frame[pos]] = true;
            }
        }
        let violations = (0..self.n)
            .filter(|&v| !in_interface[v] && is_violated(self.graph, self.spec, selected, v))
            .count();
        let spent = (0..self.n)
            .filter(|&v| !in_interface[v] && selected[v])
            .count();
        (violations, spent)
    }
}

impl CopyTables {
    fn build(
        graph: &Graph,
        spec: &SigmaRhoSpec,
        copy: &RobustCopy,
        x_cap: usize,
        n: usize,
    ) -> Result<Self, GadgetError> {
        let m = copy.vertices.len();
        ensure_enumerable(m)?;
        let portal_pos = copy
            .vertices
            .iter()
            .position(|&v| v == copy.portal)
            .expect("portal membership checked by the audit");
        let linked = graph.has_edge(copy.portal, copy.owner);

        let mut local_pos = vec![usize::MAX; n];
        for (i, &v) in copy.vertices.iter().enumerate() {
            local_pos[v] = i;
        }
        let mut adj_local = vec![0u64; m];
        for (i, &v) in copy.vertices.iter().enumerate() {
            for &x in graph.neighbors(v) {
                if x < n && local_pos[x] != usize::MAX {
                    adj_local[i] |= 1 << local_pos[x];
                }
            }
        }

        let mut best: [[Vec<Option<usize>>; 2]; 2] = [
            [vec![None; x_cap + 1], vec![None; x_cap + 1]],
            [vec![None; x_cap + 1], vec![None; x_cap + 1]],
        ];
        let mut zero: [[SizeSet; 2]; 2] = [
            [SizeSet::empty(n), SizeSet::empty(n)],
            [SizeSet::empty(n), SizeSet::empty(n)],
        ];
        for owner_sel in 0..2usize {
            for mask in 0u64..1 << m {
                let mut violations = 0usize;
                for (i, &adj) in adj_local.iter().enumerate() {
                    let mut count = (adj & mask).count_ones() as usize;
                    if i == portal_pos && owner_sel == 1 && linked {
                        count += 1;
                    }
                    let set = if mask >> i & 1 == 1 {
                        &spec.sigma
                    } else {
                        &spec.rho
                    };
                    if !set.contains(count) {
                        violations += 1;
                    }
                }
                let size = mask.count_ones() as usize;
                let portal_sel = (mask >> portal_pos & 1) as usize;
                if violations <= x_cap {
                    let slot = &mut best[owner_sel][portal_sel];
                    for entry in &mut slot[violations..=x_cap] {
                        if entry.is_none_or(|b| size < b) {
                            *entry = Some(size);
                        }
                    }
                }
                if violations == 0 {
                    zero[owner_sel][portal_sel].insert(size);
                }
            }
        }
        Ok(CopyTables {
            vertices: copy.vertices.clone(),
            portal_pos,
            linked,
            best,
            zero,
        })
    }

    /// Writes into `selected` the first copy selection matching the given
    /// portal bit, violation allowance and exact size.
    #[allow(clippy::too_many_arguments)]
    fn fill_selection(
        &self,
        graph: &Graph,
        spec: &SigmaRhoSpec,
        owner_sel: bool,
        portal_sel: bool,
        x: usize,
        size: usize,
        selected: &mut [bool],
    ) {
        let m = self.vertices.len();
        let n = selected.len();
        let mut local_pos = vec![usize::MAX; n];
        for (i, &v) in self.vertices.iter().enumerate() {
            local_pos[v] = i;
        }
        for mask in 0u64..1 << m {
            if mask.count_ones() as usize != size {
                continue;
            }
            if (mask >> self.portal_pos & 1 == 1) != portal_sel {
                continue;
            }
            let mut violations = 0usize;
            for (i, &v) in self.vertices.iter().enumerate() {
                let mut count = graph
                    .neighbors(v)
                    .iter()
                    .filter(|&&u| local_pos[u] != usize::MAX && mask >> local_pos[u] & 1 == 1)
                    .count();
                if i == self.portal_pos && owner_sel && self.linked {
                    count += 1;
                }
                let set = if mask >> i & 1 == 1 {
                    &spec.sigma
                } else {
                    &spec.rho
                };
                if !set.contains(count) {
                    violations += 1;
                }
            }
            if violations <= x {
                for (i, &v) in self.vertices.iter().enumerate() {
                    selected[v] = mask >> i & 1 == 1;
                }
                return;
            }
        }
        panic!("copy table promised an achievable selection");
    }
}

impl OwnerModel {
    fn build(copy_ids: &[usize], all_tables: &[CopyTables], x_cap: usize, n: usize) -> OwnerModel {
        let mut layers: [Vec<Vec<Vec<Option<usize>>>>; 2] = [Vec::new(), Vec::new()];
        let mut zero: [Vec<SizeSet>; 2] = [Vec::new(), Vec::new()];
        let tables: Vec<&CopyTables> = copy_ids.iter().map(|&c| &all_tables[c]).collect();
        for owner_sel in 0..2usize {
            let mut dp: Vec<Vec<Option<usize>>> = vec![vec![Some(0); x_cap + 1]];
            let mut zp: Vec<SizeSet> = vec![{
                let mut s = SizeSet::empty(n);
                s.insert(0);
                s
            }];
            let mut steps = vec![dp.clone()];
            for t in &tables {
                let q_max = dp.len();
                let mut next: Vec<Vec<Option<usize>>> = vec![vec![None; x_cap + 1]; q_max + 1];
                for portal_sel in 0..2usize {
                    let cq = usize::from(portal_sel == 1 && t.linked);
                    for q in 0..q_max {
                        for x in 0..=x_cap {
                            let Some(base) = dp[q][x] else { continue };
                            for xc in 0..=x_cap - x {
                                let Some(extra) = t.best[owner_sel][portal_sel][xc] else {
                                    continue;
                                };
                                let slot = &mut next[q + cq][x + xc];
                                if slot.is_none_or(|b| base + extra < b) {
                                    *slot = Some(base + extra);
                                }
                            }
                        }
                    }
                }
                let mut next_zero: Vec<SizeSet> = vec![SizeSet::empty(n); q_max + 1];
                for portal_sel in 0..2usize {
                    let cq = usize::from(portal_sel == 1 && t.linked);
                    let copy_zero = &t.zero[owner_sel][portal_sel];
                    if copy_zero.is_empty() {
                        continue;
                    }
                    for q in 0..q_max {
                        if zp[q].is_empty() {
                            continue;
                        }
                        let mut acc = SizeSet::empty(n);
                        zp[q].sum_into(copy_zero, &mut acc);
                        next_zero[q + cq].union(&acc);
                    }
                }
                dp = next;
                zp = next_zero;
                steps.push(dp.clone());
            }
            layers[owner_sel] = steps;
            zero[owner_sel] = zp;
        }
        OwnerModel {
            tables: tables.into_iter().cloned().collect(),
            layers,
            zero,
        }
    }

    fn final_layer(&self, owner_sel: usize) -> &Vec<Vec<Option<usize>>> {
        self.layers[owner_sel].last().expect("base layer exists")
    }
}

/// Verifies the robust-attractor properties with the frame-factorised
/// engine.  Exact: agrees with [`check_robust_naive`] on every instance
/// whose layout passes the structural audit.
pub fn check_robust(
    instance: &GadgetInstance,
    spec: &SigmaRhoSpec,
    ell_max: usize,
) -> Result<Verdict<RobustViolation>, GadgetError> {
    let consts = read_constants(instance)?;
    let n = instance.graph.vertex_count();
    let interface = &instance.distinguished;
    if interface.is_empty() || interface.iter().any(|&u| u >= n) {
        return Err(GadgetError::MalformedInstance {
            reason: "interface must be a nonempty list of in-range vertices".to_owned(),
        });
    }

    if let Some(violation) = interface_independent(instance) {
        return Ok(Verdict::Refuted(violation));
    }

    let x_cap = ell_max.max(consts.delta);
    let machine = FrameMachine::build(instance, spec, x_cap)?;

    let mut degraded: Option<RobustViolation> = None;
    let mut uncommitted: Option<RobustViolation> = None;
    let mut boundary: Option<RobustViolation> = None;

    for frame_mask in 0..machine.frame_count() {
        let fso = machine.frame_spend(frame_mask);
        let combined = machine
            .frame_prefixes(frame_mask)
            .pop()
            .expect("frame is nonempty");

        if degraded.is_none() {
            for (ell, &entry) in combined.iter().enumerate().take(ell_max + 1) {
                let required = consts.gamma.saturating_sub(ell * consts.beta);
                if let Some(size) = entry {
                    if fso + size < required {
                        let (selection, violations, spent) =
                            machine.reconstruct(frame_mask, ell);
                        assert!(
                            violations <= ell && spent < required,
                            "reconstructed witness must refute the degraded bound"
                        );
                        degraded = Some(RobustViolation::DegradedSpendTooLow {
                            selection,
                            violations,
                            spent,
                            required: consts.gamma.saturating_sub(violations * consts.beta),
                        });
                        break;
                    }
                }
            }
        }
        let picked = (frame_mask & machine.interface_bits).count_ones();
        if uncommitted.is_none() && picked != 1 {
            if let Some(size) = combined[0] {
                if fso + size <= consts.gamma {
                    let (selection, violations, spent) = machine.reconstruct(frame_mask, 0);
                    assert!(
                        violations == 0 && spent <= consts.gamma,
                        "reconstructed witness must be clean and within budget"
                    );
                    uncommitted = Some(RobustViolation::UncommittedSelection { selection, spent });
                }
            }
        }
        if boundary.is_none() && frame_mask & machine.boundary_bits != 0 {
            if let Some(size) = combined[consts.delta] {
                if fso + size <= consts.gamma + consts.delta {
                    let (selection, violations, spent) =
                        machine.reconstruct(frame_mask, consts.delta);
                    assert!(
                        violations <= consts.delta && spent <= consts.gamma + consts.delta,
                        "reconstructed witness must stay within the slack allowance"
                    );
                    boundary = Some(RobustViolation::BoundaryTouchingSelection {
                        selection,
                        violations,
                        spent,
                    });
                }
            }
        }
    }

    if let Some(v) = degraded {
        return Ok(Verdict::Refuted(v));
    }
    for &u in interface {
        let pos = machine
            .frame
            .iter()
            .position(|&v| v == u)
            .expect("interface vertices are frame vertices");
        if !machine.clean_exact_exists(pos, consts.gamma) {
            return Ok(Verdict::Refuted(RobustViolation::MissingExactSelection {
                interface_vertex: u,
            }));
        }
    }
    if let Some(v) = uncommitted {
        return Ok(Verdict::Refuted(v));
    }
    if let Some(v) = boundary {
        return Ok(Verdict::Refuted(v));
    }
    Ok(Verdict::Holds)
}

/// Builds a robust attractor with interface arity `d` and slack `delta`,
/// with the guard count derived from the portal gadget's cost.
///
/// Requires the portal-gadget preconditions (`rho` finite, `0 not in
/// rho`), `d >= 1` and `delta >= 1`.
pub fn generate_robust(
    spec: &SigmaRhoSpec,
    d: usize,
    delta: usize,
) -> Result<GadgetInstance, GadgetError> {
    let proto = generate_tremendous(spec)?;
    let c_t = proto.constant("c_t").expect("portal gadgets carry a cost");
    let t = delta * c_t + 2 * delta + 1;
    generate_robust_with_guards(spec, d, delta, t)
}

/// Builds a robust attractor with an explicit guard count per hub.
///
/// The canonical guard count (used by [`generate_robust`]) is the smallest
/// that makes all properties hold; smaller counts are useful in tests for
/// cross-checking the two checkers on instances with refutable properties.
pub(crate) fn generate_robust_with_guards(
    spec: &SigmaRhoSpec,
    d: usize,
    delta: usize,
    t: usize,
) -> Result<GadgetInstance, GadgetError> {
    if d == 0 {
        return Err(GadgetError::UnsupportedParameter {
            reason: "interface arity must be at least 1".to_owned(),
        });
    }
    if delta == 0 {
        return Err(GadgetError::UnsupportedParameter {
            reason: "slack must be at least 1".to_owned(),
        });
    }
    let proto = generate_tremendous(spec)?;
    let c_t = proto.constant("c_t").expect("portal gadgets carry a cost");
    let proto_size = proto.graph.vertex_count();
    let rho_min = spec.rho.min_element();
    let rho_max = spec.rho.max_element().expect("finite rho checked above");

    let hub_a = 0usize;
    let hub_b = 1usize;
    let interface: Vec<usize> = (2..2 + d).collect();
    let guards_a: Vec<usize> = (2 + d..2 + d + t).collect();
    let guards_b: Vec<usize> = (2 + d + t..2 + d + 2 * t).collect();

    // Copy plan: owners in construction order.
    let mut owners_plan: Vec<usize> = Vec::new();
    owners_plan.extend(std::iter::repeat_n(hub_a, rho_min - 1));
    for &g in &guards_a {
        owners_plan.extend(std::iter::repeat_n(g, rho_max));
    }
    owners_plan.extend(std::iter::repeat_n(hub_b, rho_max - 1));
    for &g in &guards_b {
        owners_plan.extend(std::iter::repeat_n(g, rho_max));
    }

    let frame_size = 2 + d + 2 * t;
    let n = frame_size + owners_plan.len() * proto_size;
    let mut graph = Graph::new(n);
    for &u in &interface {
        graph.add_edge(hub_a, u).expect("fresh interface edge");
        graph.add_edge(hub_b, u).expect("fresh interface edge");
    }
    for &g in &guards_a {
        graph.add_edge(hub_a, g).expect("fresh guard edge");
    }
    for &g in &guards_b {
        graph.add_edge(hub_b, g).expect("fresh guard edge");
    }

    let proto_portal = proto.distinguished[0];
    let mut copies = Vec::with_capacity(owners_plan.len());
    for (c, &owner) in owners_plan.iter().enumerate() {
        let base = frame_size + c * proto_size;
        for (a, b) in proto.graph.edges() {
            graph.add_edge(base + a, base + b).expect("fresh copy edge");
        }
        let portal = base + proto_portal;
        graph.add_edge(portal, owner).expect("fresh portal edge");
        copies.push(RobustCopy {
            owner,
            vertices: (base..base + proto_size).collect(),
            portal,
        });
    }

    let gamma = owners_plan.len() * c_t;
    let mut constants = BTreeMap::new();
    constants.insert("c_t".to_owned(), c_t);
    constants.insert("t".to_owned(), t);
    constants.insert("gamma".to_owned(), gamma);
    constants.insert("beta".to_owned(), c_t);
    constants.insert("delta".to_owned(), delta);
    constants.insert("d".to_owned(), d);

    // Path decomposition: the hubs, the interface and the hubs' own copies
    // ride along in every bag; each guard-owned copy gets one bag that
    // additionally holds its guard, ordered so a guard's bags are
    // consecutive.
    let mut common: Vec<usize> = vec![hub_a, hub_b];
    common.extend(&interface);
    let mut guard_bags: Vec<(usize, usize)> = Vec::new();
    for (c, copy) in copies.iter().enumerate() {
        if copy.owner == hub_a || copy.owner == hub_b {
            common.extend(&copy.vertices);
        } else {
            guard_bags.push((copy.owner, c));
        }
    }
    let mut bags: Vec<Vec<usize>> = Vec::new();
    if guard_bags.is_empty() {
        bags.push(common.clone());
    } else {
        for &(owner, c) in &guard_bags {
            let mut bag = common.clone();
            bag.push(owner);
            bag.extend(&copies[c].vertices);
            bags.push(bag);
        }
    }
    let edges = (1..bags.len()).map(|i| (i - 1, i)).collect();
    let path_decomposition = Some(TreeDecomposition::new(bags, edges));

    Ok(GadgetInstance {
        graph,
        distinguished: interface,
        constants,
        path_decomposition,
        robust_layout: Some(RobustLayout {
            hubs: [hub_a, hub_b],
            guards: [guards_a, guards_b],
            copies,
        }),
    })
}

/// Minimum spend outside the interface per violation budget, computed with
/// the frame-factorised engine.
#[cfg(test)]
fn spend_profile_factorised(
    instance: &GadgetInstance,
    spec: &SigmaRhoSpec,
    x_cap: usize,
) -> Result<Vec<Option<usize>>, GadgetError> {
    Ok(FrameMachine::build(instance, spec, x_cap)?.global_profile())
}

/// Minimum spend outside the interface per violation budget, computed by
/// enumerating every selection.
#[cfg(test)]
fn spend_profile_naive(
    instance: &GadgetInstance,
    spec: &SigmaRhoSpec,
    x_cap: usize,
) -> Result<Vec<Option<usize>>, GadgetError> {
    let n = instance.graph.vertex_count();
    ensure_enumerable(n)?;
    let graph = &instance.graph;
    let mut in_interface = vec![false; n];
    for &u in &instance.distinguished {
        in_interface[u] = true;
    }
    let mut profile = vec![None; x_cap + 1];
    for mask in 0u64..1 << n {
        let selected = mask_to_selected(mask, n);
        let violations = (0..n)
            .filter(|&x| !in_interface[x] && is_violated(graph, spec, &selected, x))
            .count();
        if violations > x_cap {
            continue;
        }
        let spent = (0..n)
            .filter(|&x| !in_interface[x] && selected[x])
            .count();
        for slot in profile.iter_mut().skip(violations) {
            if slot.is_none_or(|b| spent < b) {
                *slot = Some(spent);
            }
        }
    }
    Ok(profile)
}
