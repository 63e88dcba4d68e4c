//! The table dynamic program over a nice tree decomposition, and the
//! feasibility summary it produces.
//!
//! Per node the solver keeps, for every violation count `ℓ`, an indicator
//! table over (state vector, selected-and-forgotten count `k`): the bit is
//! set when some selection of the subtree's forgotten vertices realizes
//! that state vector with exactly that size and violation count among the
//! forgotten vertices. Leaves start the tables, introduce nodes spawn a
//! fresh digit, forget nodes resolve a vertex's satisfaction (branching on
//! selected/violated and bumping bag neighbors of a selected vertex), and
//! join nodes combine children with the state-vector convolution. The root
//! has an empty bag, so its table is exactly the `(k, ℓ)` feasibility grid.

use rayon::prelude::*;
use thiserror::Error;

use crate::conv::{self, IndicatorTable, StateAlphabet, TableShape};
use crate::decomp::{InvalidNiceDecomposition, NiceTreeDecomposition, NodeKind};
use crate::model::{count_violations, Graph, Side, SigmaRhoSpec, State};

/// The full answer for one graph and one `(σ,ρ)` specification.
///
/// `exact[k][ℓ]` says whether some selection of size exactly `k` violates
/// exactly `ℓ` vertices; `at_most` is its two-dimensional prefix-OR
/// (`∃ k' ≤ k, ℓ' ≤ ℓ` with `exact[k'][ℓ']`). Both grids run over
/// `(k, ℓ) ∈ [0, n]²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityResult {
    n: usize,
    exact: Vec<bool>,
    at_most: Vec<bool>,
}

/// First cell where two results disagree, for diff-style reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeasibilityDiff {
    pub k: usize,
    pub l: usize,
    pub left: bool,
    pub right: bool,
}

impl FeasibilityResult {
    /// Wraps a row-major `(n+1)×(n+1)` exact grid (`k` outer, `ℓ` inner)
    /// and derives the prefix-OR.
    pub fn from_exact(n: usize, exact: Vec<bool>) -> Self {
        let w = n + 1;
        assert_eq!(exact.len(), w * w, "exact grid must be (n+1)^2");
        let mut at_most = vec![false; w * w];
        for k in 0..w {
            for l in 0..w {
                let mut v = exact[k * w + l];
                if k > 0 {
                    v |= at_most[(k - 1) * w + l];
                }
                if l > 0 {
                    v |= at_most[k * w + l - 1];
                }
                at_most[k * w + l] = v;
            }
        }
        FeasibilityResult { n, exact, at_most }
    }

    /// Number of graph vertices; both table axes run `0..=n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Is some selection of size exactly `k` violating exactly `ℓ` vertices?
    pub fn exact(&self, k: usize, l: usize) -> bool {
        assert!(k <= self.n && l <= self.n, "table index out of range");
        self.exact[k * (self.n + 1) + l]
    }

    /// Is some selection of size ≤ `k` violating ≤ `ℓ` vertices?
    pub fn at_most(&self, k: usize, l: usize) -> bool {
        assert!(k <= self.n && l <= self.n, "table index out of range");
        self.at_most[k * (self.n + 1) + l]
    }

    /// Smallest `k` whose `at_most[k][budget]` holds, if any.
    pub fn min_k_for_violation_budget(&self, budget: usize) -> Option<usize> {
        (0..=self.n).find(|&k| self.at_most(k, budget.min(self.n)))
    }

    /// First cell (scanning `k` outer, `ℓ` inner) where the exact grids of
    /// `self` and `other` differ.
    pub fn first_difference(&self, other: &FeasibilityResult) -> Option<FeasibilityDiff> {
        assert_eq!(self.n, other.n, "comparing tables of different sizes");
        for k in 0..=self.n {
            for l in 0..=self.n {
                let (a, b) = (self.exact(k, l), other.exact(k, l));
                if a != b {
                    return Some(FeasibilityDiff { k, l, left: a, right: b });
                }
            }
        }
        None
    }
}

/// Default ceiling on estimated peak table memory (1 GiB).
pub const DEFAULT_MEMORY_LIMIT_BYTES: u64 = 1 << 30;

/// Knobs for [`solve_with`].
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Worker threads for join-node convolutions; `1` keeps everything on
    /// the calling thread (and keeps [`conv::op_count`] meaningful).
    pub threads: usize,
    /// Estimated-peak-memory ceiling in bytes; exceeding it aborts the
    /// solve before any table is allocated.
    pub memory_limit_bytes: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { threads: 1, memory_limit_bytes: DEFAULT_MEMORY_LIMIT_BYTES }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DpError {
    #[error(transparent)]
    InvalidDecomposition(#[from] InvalidNiceDecomposition),
    #[error(
        "dynamic-programming tables need about {required_bytes} bytes, \
         over the {limit_bytes}-byte limit"
    )]
    TableTooLarge { required_bytes: u128, limit_bytes: u64 },
}

/// One node's table: a bit per (state vector, size `k`, violations `ℓ`).
///
/// Layout groups by `ℓ` first so each `ℓ`-slice is exactly the bit layout
/// of a [`conv::IndicatorTable`] over (code, `k`).
#[derive(Debug, Clone)]
pub struct NodeTable {
    shape: TableShape,
    bits: Vec<bool>,
}

impl NodeTable {
    fn new(shape: TableShape) -> Self {
        let len = shape
            .cells()
            .checked_mul(shape.n_cap + 1)
            .expect("table bit space exceeds the address space");
        NodeTable { shape, bits: vec![false; len] }
    }

    pub fn shape(&self) -> TableShape {
        self.shape
    }

    pub fn get(&self, code: usize, k: usize, l: usize) -> bool {
        self.bits[self.index(code, k, l)]
    }

    fn set(&mut self, code: usize, k: usize, l: usize) {
        let i = self.index(code, k, l);
        self.bits[i] = true;
    }

    fn index(&self, code: usize, k: usize, l: usize) -> usize {
        debug_assert!(k <= self.shape.n_cap && l <= self.shape.n_cap);
        (l * self.shape.num_codes() + code) * (self.shape.n_cap + 1) + k
    }

    fn l_slice(&self, l: usize) -> &[bool] {
        let cells = self.shape.cells();
        &self.bits[l * cells..(l + 1) * cells]
    }

    fn l_slice_mut(&mut self, l: usize) -> &mut [bool] {
        let cells = self.shape.cells();
        &mut self.bits[l * cells..(l + 1) * cells]
    }

    fn is_l_empty(&self, l: usize) -> bool {
        !self.l_slice(l).iter().any(|&b| b)
    }
}

/// The leaf table: only the empty vector with `k = ℓ = 0`.
pub fn leaf_table(alphabet: StateAlphabet, n: usize) -> NodeTable {
    let mut t = NodeTable::new(TableShape::new(alphabet, 0, n));
    t.set(0, 0, 0);
    t
}

/// Introduce `v`: every child vector spawns two copies with a count-zero
/// digit (selected and unselected) at `v`'s position; `k` and `ℓ` are
/// untouched because `v` has no forgotten neighbors yet and is itself not
/// forgotten.
pub fn introduce_table(child: &NodeTable, child_bag: &[usize], v: usize) -> NodeTable {
    let shape = child.shape;
    debug_assert_eq!(shape.arity, child_bag.len());
    let alphabet = shape.alphabet;
    let m = alphabet.size();
    let n = shape.n_cap;
    let row = n + 1;
    let p = child_bag.partition_point(|&w| w < v);
    debug_assert!(child_bag.binary_search(&v).is_err());
    let place = m.pow(p as u32);
    let digit_sigma0 = alphabet.index_of(State::sigma(0));
    let digit_rho0 = alphabet.index_of(State::rho(0));

    let mut out = NodeTable::new(TableShape::new(alphabet, shape.arity + 1, n));
    for l in 0..=n {
        if child.is_l_empty(l) {
            continue;
        }
        let src_slice = child.l_slice(l);
        let dst_slice = out.l_slice_mut(l);
        for code in 0..shape.num_codes() {
            let src = &src_slice[code * row..(code + 1) * row];
            if !src.iter().any(|&b| b) {
                continue;
            }
            let low = code % place;
            let high = code / place;
            for digit in [digit_sigma0, digit_rho0] {
                let target = low + (digit + high * m) * place;
                dst_slice[target * row..(target + 1) * row].copy_from_slice(src);
            }
        }
    }
    out
}

/// Forget `v`: branch on selected/unselected (from `v`'s digit side) and
/// satisfied/violated (membership of `v`'s capped forgotten-neighbor count
/// plus its selected bag neighbors), bump `k` on selection and `ℓ` on
/// violation, and — when `v` is selected — bump every bag neighbor's digit
/// by one, capped on its own side.
pub fn forget_table(
    child: &NodeTable,
    child_bag: &[usize],
    v: usize,
    g: &Graph,
    spec: &SigmaRhoSpec,
) -> NodeTable {
    let shape = child.shape;
    debug_assert_eq!(shape.arity, child_bag.len());
    let alphabet = shape.alphabet;
    let m = alphabet.size();
    let n = shape.n_cap;
    let row = n + 1;
    let p = child_bag.binary_search(&v).expect("forgotten vertex must be in the child bag");
    let neighbor_positions: Vec<usize> = child_bag
        .iter()
        .enumerate()
        .filter(|&(_, &w)| w != v && g.has_edge(v, w))
        .map(|(i, _)| i)
        .collect();
    let place = m.pow(p as u32);

    let out_shape = TableShape::new(alphabet, shape.arity - 1, n);
    let mut out = NodeTable::new(out_shape);
    for code in 0..shape.num_codes() {
        let own = alphabet.state(shape.digit(code, p));
        let selected = own.side == Side::Selected;
        let h = neighbor_positions
            .iter()
            .filter(|&&w| alphabet.state(shape.digit(code, w)).side == Side::Selected)
            .count();
        // The capped count keeps this membership test exact: a finite-side
        // overflow can never re-enter the set, and a cofinite-side cap is
        // already at its threshold.
        let satisfied = spec.set(own.side).contains(own.count + h);

        let mut target = (code % place) + (code / (place * m)) * place;
        if selected {
            for &w in &neighbor_positions {
                let wp = if w > p { w - 1 } else { w };
                let st = alphabet.state(out_shape.digit(target, wp));
                let bumped = State {
                    side: st.side,
                    count: (st.count + 1).min(alphabet.cap(st.side)),
                };
                target = out_shape.with_digit(target, wp, alphabet.index_of(bumped));
            }
        }

        let dk = selected as usize;
        let dl = !satisfied as usize;
        if dk > n || dl > n {
            continue;
        }
        for l in 0..=(n - dl) {
            let src = &child.l_slice(l)[code * row..(code + 1) * row];
            if !src.iter().any(|&b| b) {
                continue;
            }
            let dst = &mut out.l_slice_mut(l + dl)[target * row..(target + 1) * row];
            for k in 0..row - dk {
                dst[k + dk] |= src[k];
            }
        }
    }
    out
}

/// Join two children with identical bags: for every split `ℓ1 + ℓ2` the
/// state-vector convolution pairs compatible vectors and adds sizes; a
/// positive count sets the parent bit at `ℓ1 + ℓ2`.
pub fn join_table(left: &NodeTable, right: &NodeTable, parallel: bool) -> NodeTable {
    let shape = left.shape;
    assert_eq!(shape, right.shape, "join children must share a shape");
    let n = shape.n_cap;
    let mut out = NodeTable::new(shape);

    let left_nonempty: Vec<bool> = (0..=n).map(|l| !left.is_l_empty(l)).collect();
    let right_nonempty: Vec<bool> = (0..=n).map(|l| !right.is_l_empty(l)).collect();
    let pairs: Vec<(usize, usize)> = (0..=n)
        .flat_map(|l1| (0..=n - l1).map(move |l2| (l1, l2)))
        .filter(|&(l1, l2)| left_nonempty[l1] && right_nonempty[l2])
        .collect();

    let convolve = |&(l1, l2): &(usize, usize)| {
        let f = IndicatorTable::from_bits(shape, left.l_slice(l1).to_vec());
        let g = IndicatorTable::from_bits(shape, right.l_slice(l2).to_vec());
        (l1 + l2, conv::convolve_fast(&f, &g).expect("slices share one shape"))
    };
    let results: Vec<_> = if parallel {
        pairs.par_iter().map(convolve).collect()
    } else {
        pairs.iter().map(convolve).collect()
    };
    for (l, counts) in results {
        let dst = out.l_slice_mut(l);
        for (bit, &count) in dst.iter_mut().zip(counts.as_slice()) {
            *bit |= count > 0;
        }
    }
    out
}

fn pow_saturating(base: u128, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base))
}

/// Estimated peak bytes for the walk: live tables plus the transient join
/// buffers, maximized over the post-order; `retain` keeps every table live.
fn estimate_peak_bytes(ntd: &NiceTreeDecomposition, alphabet_size: usize, n: usize, retain: bool) -> u128 {
    let table_bytes: Vec<u128> = ntd
        .nodes
        .iter()
        .map(|node| {
            let codes = pow_saturating(alphabet_size as u128, node.bag.len());
            codes
                .saturating_mul(((n + 1) * (n + 1)) as u128)
        })
        .collect();
    let mut live: u128 = 0;
    let mut peak: u128 = 0;
    for t in ntd.post_order() {
        live = live.saturating_add(table_bytes[t]);
        let transient = if matches!(ntd.nodes[t].kind, NodeKind::Join) {
            // Two indicator copies plus the u64 count table per in-flight
            // convolution.
            let codes = pow_saturating(alphabet_size as u128, ntd.nodes[t].bag.len());
            codes.saturating_mul((n + 1) as u128).saturating_mul(10)
        } else {
            0
        };
        peak = peak.max(live.saturating_add(transient));
        if !retain {
            for &c in &ntd.nodes[t].children {
                live -= table_bytes[c];
            }
        }
    }
    peak
}

fn run(
    g: &Graph,
    spec: &SigmaRhoSpec,
    ntd: &NiceTreeDecomposition,
    options: &SolveOptions,
    retain: bool,
) -> Result<(FeasibilityResult, Vec<Option<NodeTable>>), DpError> {
    ntd.validate(g)?;
    let n = g.vertex_count();
    let alphabet = StateAlphabet::partial(spec);

    let peak = estimate_peak_bytes(ntd, alphabet.size(), n, retain);
    if peak > options.memory_limit_bytes as u128 {
        return Err(DpError::TableTooLarge {
            required_bytes: peak,
            limit_bytes: options.memory_limit_bytes,
        });
    }

    let walk = || -> Vec<Option<NodeTable>> {
        let parallel = options.threads > 1;
        let mut tables: Vec<Option<NodeTable>> = (0..ntd.nodes.len()).map(|_| None).collect();
        for t in ntd.post_order() {
            let node = &ntd.nodes[t];
            let built = match node.kind {
                NodeKind::Leaf => leaf_table(alphabet, n),
                NodeKind::Introduce(v) => {
                    let c = node.children[0];
                    introduce_table(tables[c].as_ref().unwrap(), &ntd.nodes[c].bag, v)
                }
                NodeKind::Forget(v) => {
                    let c = node.children[0];
                    forget_table(tables[c].as_ref().unwrap(), &ntd.nodes[c].bag, v, g, spec)
                }
                NodeKind::Join => join_table(
                    tables[node.children[0]].as_ref().unwrap(),
                    tables[node.children[1]].as_ref().unwrap(),
                    parallel,
                ),
            };
            if !retain {
                for &c in &node.children {
                    tables[c] = None;
                }
            }
            tables[t] = Some(built);
        }
        tables
    };
    let tables = if options.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.threads)
            .build()
            .expect("building a worker pool cannot fail with these settings");
        pool.install(walk)
    } else {
        walk()
    };

    let root = tables[ntd.root].as_ref().unwrap();
    debug_assert_eq!(root.shape().arity, 0);
    let mut exact = vec![false; (n + 1) * (n + 1)];
    for k in 0..=n {
        for l in 0..=n {
            exact[k * (n + 1) + l] = root.get(0, k, l);
        }
    }
    Ok((FeasibilityResult::from_exact(n, exact), tables))
}

/// Solves with default options (single thread, 1 GiB table budget).
pub fn solve(
    g: &Graph,
    spec: &SigmaRhoSpec,
    ntd: &NiceTreeDecomposition,
) -> Result<FeasibilityResult, DpError> {
    solve_with(g, spec, ntd, &SolveOptions::default())
}

/// Solves the full `(k, ℓ)` grid, freeing each table once consumed.
pub fn solve_with(
    g: &Graph,
    spec: &SigmaRhoSpec,
    ntd: &NiceTreeDecomposition,
    options: &SolveOptions,
) -> Result<FeasibilityResult, DpError> {
    run(g, spec, ntd, options, false).map(|(result, _)| result)
}

/// A solve that retains every node table, so feasible cells can be traced
/// back to an explicit selection.
pub struct WitnessSolver<'a> {
    g: &'a Graph,
    spec: &'a SigmaRhoSpec,
    ntd: &'a NiceTreeDecomposition,
    result: FeasibilityResult,
    tables: Vec<NodeTable>,
}

impl<'a> WitnessSolver<'a> {
    pub fn new(
        g: &'a Graph,
        spec: &'a SigmaRhoSpec,
        ntd: &'a NiceTreeDecomposition,
        options: &SolveOptions,
    ) -> Result<Self, DpError> {
        let (result, tables) = run(g, spec, ntd, options, true)?;
        let tables = tables.into_iter().map(Option::unwrap).collect();
        Ok(WitnessSolver { g, spec, ntd, result, tables })
    }

    pub fn result(&self) -> &FeasibilityResult {
        &self.result
    }

    /// The retained table of one decomposition node.
    pub fn node_table(&self, node: usize) -> &NodeTable {
        &self.tables[node]
    }

    /// A concrete selection of size `k` violating exactly `ℓ` vertices, or
    /// `None` if that cell is infeasible. The returned vertices are sorted.
    pub fn witness(&self, k: usize, l: usize) -> Option<Vec<usize>> {
        let n = self.g.vertex_count();
        if k > n || l > n || !self.result.exact(k, l) {
            return None;
        }
        let mut chosen = Vec::new();
        let mut stack = vec![(self.ntd.root, 0usize, k, l)];
        while let Some((t, code, k_t, l_t)) = stack.pop() {
            debug_assert!(self.tables[t].get(code, k_t, l_t));
            let node = &self.ntd.nodes[t];
            match node.kind {
                NodeKind::Leaf => {
                    debug_assert!(code == 0 && k_t == 0 && l_t == 0);
                }
                NodeKind::Introduce(v) => {
                    let c = node.children[0];
                    let shape = self.tables[t].shape();
                    let m = shape.alphabet.size();
                    let p = self.ntd.nodes[c].bag.partition_point(|&w| w < v);
                    let place = m.pow(p as u32);
                    debug_assert_eq!(shape.alphabet.state(shape.digit(code, p)).count, 0);
                    let child_code = (code % place) + (code / (place * m)) * place;
                    stack.push((c, child_code, k_t, l_t));
                }
                NodeKind::Forget(v) => {
                    let c = node.children[0];
                    let (child_code, selected, violated) = self
                        .forget_preimage(c, v, code, k_t, l_t)
                        .expect("set parent bit must have a child preimage");
                    if selected {
                        chosen.push(v);
                    }
                    stack.push((
                        c,
                        child_code,
                        k_t - selected as usize,
                        l_t - violated as usize,
                    ));
                }
                NodeKind::Join => {
                    let (left, right) = (node.children[0], node.children[1]);
                    let (a, b) = self
                        .join_split(left, right, code, k_t, l_t)
                        .expect("set join bit must split over its children");
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        chosen.sort_unstable();
        assert_eq!(chosen.len(), k, "traced selection size must match the cell");
        let mut mask = vec![false; n];
        for &v in &chosen {
            mask[v] = true;
        }
        assert_eq!(
            count_violations(self.g, &mask, self.spec),
            l,
            "traced selection must violate exactly the cell's count"
        );
        Some(chosen)
    }

    /// Finds a child cell of a forget node that produces the given parent
    /// cell: tries every digit for the forgotten vertex and, on selected
    /// branches, every preimage of the neighbor bumps.
    fn forget_preimage(
        &self,
        child: usize,
        v: usize,
        code: usize,
        k: usize,
        l: usize,
    ) -> Option<(usize, bool, bool)> {
        let table = &self.tables[child];
        let shape = table.shape();
        let alphabet = shape.alphabet;
        let m = alphabet.size();
        let child_bag = &self.ntd.nodes[child].bag;
        let p = child_bag.binary_search(&v).expect("forgotten vertex in child bag");
        let neighbor_positions: Vec<usize> = child_bag
            .iter()
            .enumerate()
            .filter(|&(_, &w)| w != v && self.g.has_edge(v, w))
            .map(|(i, _)| i)
            .collect();
        let place = m.pow(p as u32);

        for d in 0..m {
            let own = alphabet.state(d);
            let selected = own.side == Side::Selected;
            let base = (code % place) + (d + (code / place) * m) * place;
            let mut candidates = vec![base];
            if selected {
                // Undo the bump: child digit x maps to parent digit with
                // count min(x+1, cap) on the same side.
                for &w in &neighbor_positions {
                    let bumped = alphabet.state(shape.digit(base, w));
                    let cap = alphabet.cap(bumped.side);
                    let preimages: Vec<usize> = (0..=cap)
                        .filter(|&x| (x + 1).min(cap) == bumped.count)
                        .map(|x| alphabet.index_of(State { side: bumped.side, count: x }))
                        .collect();
                    candidates = candidates
                        .into_iter()
                        .flat_map(|c| {
                            preimages.iter().map(move |&d_w| shape.with_digit(c, w, d_w))
                        })
                        .collect();
                    if candidates.is_empty() {
                        break;
                    }
                }
            }
            for cand in candidates {
                let h = neighbor_positions
                    .iter()
                    .filter(|&&w| alphabet.state(shape.digit(cand, w)).side == Side::Selected)
                    .count();
                let satisfied = self.spec.set(own.side).contains(own.count + h);
                let dk = selected as usize;
                let dl = !satisfied as usize;
                if dk > k || dl > l {
                    continue;
                }
                if table.get(cand, k - dk, l - dl) {
                    return Some((cand, selected, !satisfied));
                }
            }
        }
        None
    }

    /// Splits a join cell into one cell per child. The size and violation
    /// splits are found by restricted convolutions; the left code is then
    /// fixed digit by digit (keeping the target count positive) and the
    /// right code located by scanning.
    #[allow(clippy::type_complexity)]
    fn join_split(
        &self,
        left: usize,
        right: usize,
        code: usize,
        k: usize,
        l: usize,
    ) -> Option<((usize, usize, usize, usize), (usize, usize, usize, usize))> {
        let lt = &self.tables[left];
        let rt = &self.tables[right];
        let shape = lt.shape();
        for l1 in 0..=l {
            let l2 = l - l1;
            if lt.is_l_empty(l1) || rt.is_l_empty(l2) {
                continue;
            }
            for k1 in 0..=k {
                let k2 = k - k1;
                let f = IndicatorTable::from_fn(shape, |c, kk| kk == k1 && lt.get(c, kk, l1));
                let g = IndicatorTable::from_fn(shape, |c, kk| kk == k2 && rt.get(c, kk, l2));
                if f.is_empty() || g.is_empty() {
                    continue;
                }
                if conv::convolve_fast(&f, &g).expect("slices share one shape").get(code, k) == 0 {
                    continue;
                }
                let mut kept = f;
                let mut left_code = 0;
                let mut place = 1;
                for pos in 0..shape.arity {
                    let chosen = (0..shape.alphabet.size()).find(|&a| {
                        let trial = IndicatorTable::from_fn(shape, |c, kk| {
                            shape.digit(c, pos) == a && kept.get(c, kk)
                        });
                        if trial.is_empty() {
                            return false;
                        }
                        conv::convolve_fast(&trial, &g).expect("slices share one shape").get(code, k) > 0
                    });
                    let a = chosen.expect("a digit choice must keep the target reachable");
                    kept = IndicatorTable::from_fn(shape, |c, kk| {
                        shape.digit(c, pos) == a && kept.get(c, kk)
                    });
                    left_code += a * place;
                    place *= shape.alphabet.size();
                }
                for right_code in 0..shape.num_codes() {
                    if rt.get(right_code, k2, l2)
                        && shape.join_codes(left_code, right_code) == Some(code)
                    {
                        debug_assert!(lt.get(left_code, k1, l1));
                        return Some((
                            (left, left_code, k1, l1),
                            (right, right_code, k2, l2),
                        ));
                    }
                }
                unreachable!("digit determination preserved a positive count");
            }
        }
        None
    }
}
