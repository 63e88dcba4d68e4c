//! The join kernel: convolution of indicator tables over state vectors
//! under coordinate-wise capped addition, with an exact size index.
//!
//! A table cell is addressed by a *code* — a base-`|A|` encoding of one
//! state per bag position (all `σ`-states by count, then all `ρ`-states by
//! count) — plus a size index `k ≤ n_cap`. The convolution of two indicator
//! tables counts, for every output cell, the pairs of set input cells whose
//! state vectors combine coordinate-wise (same side, counts added and
//! capped) to the output vector and whose size indices sum to the output
//! index. Pairs mixing sides in any coordinate contribute nothing.
//!
//! [`convolve_naive`] is the obviously-correct quadratic reference;
//! [`convolve_fast`] must produce bit-identical counts and is the hot loop
//! of the tree-decomposition DP. Both tally per-thread operation counters
//! so growth laws can be measured.

use std::cell::Cell;

use thiserror::Error;

use crate::model::{Side, SigmaRhoSpec, State};

/// The per-coordinate state alphabet: two capped chains, `σ_0..σ_{cap_σ}`
/// followed by `ρ_0..ρ_{cap_ρ}`, encoded as indices `0..size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateAlphabet {
    cap_sigma: usize,
    cap_rho: usize,
}

impl StateAlphabet {
    /// The partial-problem alphabet of a specification.
    pub fn partial(spec: &SigmaRhoSpec) -> Self {
        StateAlphabet { cap_sigma: spec.s_sigma_p, cap_rho: spec.s_rho_p }
    }

    /// An alphabet from raw chain caps (used by shape-exhaustive tests).
    pub fn from_caps(cap_sigma: usize, cap_rho: usize) -> Self {
        StateAlphabet { cap_sigma, cap_rho }
    }

    /// Number of letters: `cap_σ + cap_ρ + 2`.
    pub fn size(self) -> usize {
        self.cap_sigma + self.cap_rho + 2
    }

    pub fn cap(self, side: Side) -> usize {
        match side {
            Side::Selected => self.cap_sigma,
            Side::Unselected => self.cap_rho,
        }
    }

    /// Decodes a letter index into a state.
    pub fn state(self, index: usize) -> State {
        debug_assert!(index < self.size());
        if index <= self.cap_sigma {
            State::sigma(index)
        } else {
            State::rho(index - self.cap_sigma - 1)
        }
    }

    /// Encodes a state as a letter index.
    pub fn index_of(self, state: State) -> usize {
        debug_assert!(state.count <= self.cap(state.side));
        match state.side {
            Side::Selected => state.count,
            Side::Unselected => self.cap_sigma + 1 + state.count,
        }
    }

    /// Capped addition of two letters; `None` when the sides differ.
    pub fn join(self, a: usize, b: usize) -> Option<usize> {
        let (sa, sb) = (self.state(a), self.state(b));
        if sa.side != sb.side {
            return None;
        }
        let cap = self.cap(sa.side);
        let count = (sa.count + sb.count).min(cap);
        Some(self.index_of(State { side: sa.side, count }))
    }
}

/// Dimensions of one table: alphabet, number of coordinates (the bag
/// size), and the inclusive size-index bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableShape {
    pub alphabet: StateAlphabet,
    pub arity: usize,
    pub n_cap: usize,
}

impl TableShape {
    pub fn new(alphabet: StateAlphabet, arity: usize, n_cap: usize) -> Self {
        TableShape { alphabet, arity, n_cap }
    }

    /// `|A|^arity`, panicking if it cannot be addressed.
    pub fn num_codes(self) -> usize {
        self.alphabet
            .size()
            .checked_pow(self.arity as u32)
            .expect("state-vector code space exceeds the address space")
    }

    /// Total cell count, `num_codes × (n_cap + 1)`.
    pub fn cells(self) -> usize {
        self.num_codes()
            .checked_mul(self.n_cap + 1)
            .expect("table cell space exceeds the address space")
    }

    /// Letter at one coordinate of a code (coordinate 0 is the least
    /// significant digit).
    pub fn digit(self, code: usize, coordinate: usize) -> usize {
        let m = self.alphabet.size();
        (code / m.pow(coordinate as u32)) % m
    }

    /// Replaces one coordinate's letter.
    pub fn with_digit(self, code: usize, coordinate: usize, letter: usize) -> usize {
        let m = self.alphabet.size();
        let place = m.pow(coordinate as u32);
        let old = (code / place) % m;
        code - old * place + letter * place
    }

    /// Coordinate-wise join of two codes: capped addition where every
    /// coordinate pair agrees on the side, `None` otherwise.
    pub fn join_codes(self, a: usize, b: usize) -> Option<usize> {
        let m = self.alphabet.size();
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.arity {
            let joined = self.alphabet.join(a % m, b % m)?;
            out += joined * place;
            place *= m;
            a /= m;
            b /= m;
        }
        Some(out)
    }

    fn cell(self, code: usize, k: usize) -> usize {
        debug_assert!(k <= self.n_cap);
        code * (self.n_cap + 1) + k
    }
}

/// Dense boolean table over `(code, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorTable {
    shape: TableShape,
    bits: Vec<bool>,
}

impl IndicatorTable {
    pub fn new(shape: TableShape) -> Self {
        IndicatorTable { shape, bits: vec![false; shape.cells()] }
    }

    pub fn from_fn(shape: TableShape, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut t = IndicatorTable::new(shape);
        for code in 0..shape.num_codes() {
            for k in 0..=shape.n_cap {
                t.bits[shape.cell(code, k)] = f(code, k);
            }
        }
        t
    }

    /// Wraps a prebuilt bit vector laid out as `code * (n_cap+1) + k`.
    pub fn from_bits(shape: TableShape, bits: Vec<bool>) -> Self {
        assert_eq!(bits.len(), shape.cells(), "bit vector does not match shape");
        IndicatorTable { shape, bits }
    }

    /// True if no cell is set.
    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn shape(&self) -> TableShape {
        self.shape
    }

    pub fn get(&self, code: usize, k: usize) -> bool {
        self.bits[self.shape.cell(code, k)]
    }

    pub fn set(&mut self, code: usize, k: usize, value: bool) {
        let cell = self.shape.cell(code, k);
        self.bits[cell] = value;
    }

    /// Tab-separated dump (`code, states, k` per set cell) for attaching to
    /// test-failure messages.
    pub fn to_tsv(&self) -> String {
        dump_tsv(self.shape, |code, k| u64::from(self.get(code, k)))
    }
}

/// Dense exact-count table over `(code, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    shape: TableShape,
    counts: Vec<u64>,
}

impl CountTable {
    fn new(shape: TableShape) -> Self {
        CountTable { shape, counts: vec![0; shape.cells()] }
    }

    pub fn shape(&self) -> TableShape {
        self.shape
    }

    /// Raw counts laid out as `code * (n_cap+1) + k`.
    pub fn as_slice(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, code: usize, k: usize) -> u64 {
        self.counts[self.shape.cell(code, k)]
    }

    /// The positive-support indicator of the counts.
    pub fn threshold(&self) -> IndicatorTable {
        IndicatorTable {
            shape: self.shape,
            bits: self.counts.iter().map(|&c| c > 0).collect(),
        }
    }

    pub fn to_tsv(&self) -> String {
        dump_tsv(self.shape, |code, k| self.get(code, k))
    }
}

fn dump_tsv(shape: TableShape, value: impl Fn(usize, usize) -> u64) -> String {
    use std::fmt::Write;
    let mut out = String::from("code\tstates\tk\tvalue\n");
    for code in 0..shape.num_codes() {
        for k in 0..=shape.n_cap {
            let v = value(code, k);
            if v == 0 {
                continue;
            }
            let states: Vec<String> = (0..shape.arity)
                .map(|i| {
                    let s = shape.alphabet.state(shape.digit(code, i));
                    match s.side {
                        Side::Selected => format!("s{}", s.count),
                        Side::Unselected => format!("r{}", s.count),
                    }
                })
                .collect();
            writeln!(out, "{code}\t{}\t{k}\t{v}", states.join(",")).unwrap();
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("convolution operands must share alphabet, arity, and size bound")]
pub struct ShapeMismatch;

thread_local! {
    static OP_COUNT: Cell<u64> = const { Cell::new(0) };
}

/// Resets this thread's kernel operation counter.
pub fn reset_op_count() {
    OP_COUNT.with(|c| c.set(0));
}

/// Arithmetic operations (transform adds plus multiply-accumulates)
/// performed by convolutions on this thread since the last reset.
pub fn op_count() -> u64 {
    OP_COUNT.with(|c| c.get())
}

fn add_ops(n: u64) {
    OP_COUNT.with(|c| c.set(c.get() + n));
}

/// Reference convolution: enumerate every pair of set cells. Exact and
/// obviously correct; quadratic in the number of cells.
pub fn convolve_naive(f: &IndicatorTable, g: &IndicatorTable) -> Result<CountTable, ShapeMismatch> {
    if f.shape != g.shape {
        return Err(ShapeMismatch);
    }
    let shape = f.shape;
    let mut out = CountTable::new(shape);
    let f_cells = set_cells(f);
    let g_cells = set_cells(g);
    let mut ops = 0u64;
    for &(cf, kf) in &f_cells {
        for &(cg, kg) in &g_cells {
            ops += 1;
            if kf + kg > shape.n_cap {
                continue;
            }
            if let Some(code) = join_codes(shape, cf, cg) {
                let cell = shape.cell(code, kf + kg);
                out.counts[cell] += 1;
            }
        }
    }
    add_ops(ops);
    Ok(out)
}

fn set_cells(t: &IndicatorTable) -> Vec<(usize, usize)> {
    let shape = t.shape;
    let mut cells = Vec::new();
    for code in 0..shape.num_codes() {
        for k in 0..=shape.n_cap {
            if t.get(code, k) {
                cells.push((code, k));
            }
        }
    }
    cells
}

fn join_codes(shape: TableShape, a: usize, b: usize) -> Option<usize> {
    shape.join_codes(a, b)
}

/// Fast convolution: bit-identical counts to [`convolve_naive`].
///
/// The domain splits by the per-coordinate side vector (the side of every
/// coordinate must agree between the operands and carries over to the
/// output; the subdomain sizes sum to exactly `|A|^arity`). Within one side
/// vector, a coordinate whose chain cap is ≤ 1 has capped addition equal to
/// maximum, so those coordinates are handled by a per-axis cumulative
/// (zeta) transform, a pointwise product — convolving the exact size index
/// schoolbook-style, it is additive, not a maximum — and the inverse
/// (Möbius) differencing. Chains with cap ≥ 2 (they arise only from finite
/// sets with max ≥ 1) escape that identity, so their digit assignments are
/// paired explicitly around the transformed core. With every cap ≤ 1 —
/// e.g. Dominating Set — the kernel is a pure transform with `|A|^arity`
/// cells of work.
pub fn convolve_fast(f: &IndicatorTable, g: &IndicatorTable) -> Result<CountTable, ShapeMismatch> {
    if f.shape != g.shape {
        return Err(ShapeMismatch);
    }
    let shape = f.shape;
    let kw = shape.n_cap + 1;
    let mut out = CountTable::new(shape);
    let mut ops = 0u64;

    // One side vector at a time (2^arity of them).
    for side_mask in 0u64..(1 << shape.arity) {
        let sides: Vec<Side> = (0..shape.arity)
            .map(|i| {
                if side_mask >> i & 1 == 0 {
                    Side::Selected
                } else {
                    Side::Unselected
                }
            })
            .collect();
        let caps: Vec<usize> = sides.iter().map(|&s| shape.alphabet.cap(s)).collect();

        // Coordinates split into the transformed core (cap ≤ 1) and the
        // explicitly paired tall ones (cap ≥ 2).
        let short: Vec<usize> = (0..shape.arity).filter(|&i| caps[i] <= 1).collect();
        let tall: Vec<usize> = (0..shape.arity).filter(|&i| caps[i] >= 2).collect();
        let short_radix: Vec<usize> = short.iter().map(|&i| caps[i] + 1).collect();
        let tall_radix: Vec<usize> = tall.iter().map(|&i| caps[i] + 1).collect();
        let short_size: usize = short_radix.iter().product();
        let tall_size: usize = tall_radix.iter().product();
        let block = short_size * kw;

        // Zeta-transformed slices of f and g, one per tall assignment.
        let zf = extract_zeta_slices(f, &sides, &short, &short_radix, &tall, &tall_radix, &mut ops);
        let zg = if std::ptr::eq(f, g) {
            None // reuse zf for the symmetric case
        } else {
            Some(extract_zeta_slices(g, &sides, &short, &short_radix, &tall, &tall_radix, &mut ops))
        };

        // Pair tall assignments; accumulate into the capped-sum target in
        // the transformed domain.
        let mut acc = vec![0u64; tall_size * block];
        for af in 0..tall_size {
            let fa = &zf[af * block..(af + 1) * block];
            for ag in 0..tall_size {
                let target = join_tall(&tall_radix, &tall, &caps, af, ag);
                let ga = match &zg {
                    Some(z) => &z[ag * block..(ag + 1) * block],
                    None => &zf[ag * block..(ag + 1) * block],
                };
                let dst = &mut acc[target * block..(target + 1) * block];
                for kf in 0..kw {
                    for kg in 0..kw - kf {
                        let k = kf + kg;
                        for sc in 0..short_size {
                            let prod = fa[sc * kw + kf] * ga[sc * kw + kg];
                            dst[sc * kw + k] += prod;
                        }
                        ops += short_size as u64;
                    }
                }
            }
        }

        // Invert the transform and scatter into the output.
        for at in 0..tall_size {
            let slice = &mut acc[at * block..(at + 1) * block];
            moebius_in_place(slice, &short_radix, kw, &mut ops);
            let base = compose_code(shape, &sides, &tall, &tall_radix, at);
            for sc in 0..short_size {
                let code = scatter_short(shape, base, &sides, &short, &short_radix, sc);
                for k in 0..kw {
                    let v = slice[sc * kw + k];
                    if v != 0 {
                        out.counts[shape.cell(code, k)] += v;
                    }
                }
            }
        }
    }
    add_ops(ops);
    Ok(out)
}

/// Reads the subdomain slice for every tall assignment and applies the
/// per-axis cumulative transform over the short coordinates.
#[allow(clippy::too_many_arguments)]
fn extract_zeta_slices(
    t: &IndicatorTable,
    sides: &[Side],
    short: &[usize],
    short_radix: &[usize],
    tall: &[usize],
    tall_radix: &[usize],
    ops: &mut u64,
) -> Vec<u64> {
    let shape = t.shape;
    let kw = shape.n_cap + 1;
    let short_size: usize = short_radix.iter().product();
    let tall_size: usize = tall_radix.iter().product();
    let block = short_size * kw;
    let mut slices = vec![0u64; tall_size * block];

    for at in 0..tall_size {
        let base = compose_code(shape, sides, tall, tall_radix, at);
        let dst = &mut slices[at * block..(at + 1) * block];
        for sc in 0..short_size {
            let code = scatter_short(shape, base, sides, short, short_radix, sc);
            for k in 0..kw {
                dst[sc * kw + k] = u64::from(t.get(code, k));
            }
        }
        zeta_in_place(dst, short_radix, kw, ops);
    }
    slices
}

/// Cumulative sums along every short axis, independently per size index.
fn zeta_in_place(data: &mut [u64], short_radix: &[usize], kw: usize, ops: &mut u64) {
    let mut stride = kw;
    for &r in short_radix {
        if r == 2 {
            let span = stride * 2;
            for start in (0..data.len()).step_by(span) {
                for off in 0..stride {
                    data[start + stride + off] += data[start + off];
                }
            }
            *ops += (data.len() / 2) as u64;
        }
        stride *= r;
    }
}

/// Inverse of [`zeta_in_place`]: differencing along every short axis.
fn moebius_in_place(data: &mut [u64], short_radix: &[usize], kw: usize, ops: &mut u64) {
    let mut stride = kw;
    for &r in short_radix {
        if r == 2 {
            let span = stride * 2;
            for start in (0..data.len()).step_by(span) {
                for off in 0..stride {
                    data[start + stride + off] -= data[start + off];
                }
            }
            *ops += (data.len() / 2) as u64;
        }
        stride *= r;
    }
}

/// Capped addition of two tall assignments, as a tall index.
fn join_tall(tall_radix: &[usize], tall: &[usize], caps: &[usize], a: usize, b: usize) -> usize {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for (slot, &r) in tall_radix.iter().enumerate() {
        let cap = caps[tall[slot]];
        let sum = ((a % r) + (b % r)).min(cap);
        out += sum * place;
        place *= r;
        a /= r;
        b /= r;
    }
    out
}

/// Builds the global code that has the tall assignment's letters at the
/// tall coordinates and each short coordinate at its side's count 0.
fn compose_code(
    shape: TableShape,
    sides: &[Side],
    tall: &[usize],
    tall_radix: &[usize],
    mut tall_index: usize,
) -> usize {
    let mut code = 0;
    // All coordinates start at count 0 of their side.
    for (i, &side) in sides.iter().enumerate() {
        let letter = shape.alphabet.index_of(State { side, count: 0 });
        code = shape.with_digit(code, i, letter);
    }
    for (slot, &coord) in tall.iter().enumerate() {
        let r = tall_radix[slot];
        let count = tall_index % r;
        tall_index /= r;
        let letter = shape.alphabet.index_of(State { side: sides[coord], count });
        code = shape.with_digit(code, coord, letter);
    }
    code
}

/// Overwrites the short coordinates of `base` with a short assignment.
fn scatter_short(
    shape: TableShape,
    base: usize,
    sides: &[Side],
    short: &[usize],
    short_radix: &[usize],
    mut short_index: usize,
) -> usize {
    let mut code = base;
    for (slot, &coord) in short.iter().enumerate() {
        let r = short_radix[slot];
        let count = short_index % r;
        short_index /= r;
        let letter = shape.alphabet.index_of(State { side: sides[coord], count });
        code = shape.with_digit(code, coord, letter);
    }
    code
}
