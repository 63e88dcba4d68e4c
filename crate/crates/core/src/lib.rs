//! Exact solving of partial (σ,ρ)-domination problems on graphs supplied
//! with a tree decomposition.
//!
//! A selection `S ⊆ V(G)` *satisfies* a vertex `v` when the number of
//! selected neighbors of `v` lies in `σ` (if `v ∈ S`) or in `ρ` (if
//! `v ∉ S`); otherwise `v` is *violated*. The partial problem asks, for
//! every pair `(k, ℓ)`, whether some selection of size exactly `k` violates
//! exactly `ℓ` vertices. This crate answers all `(k, ℓ)` at once by dynamic
//! programming over a nice tree decomposition, with a capped-addition
//! convolution kernel powering the join nodes.
//!
//! Module map:
//!
//! * [`model`] — membership sets, derived state caps, per-vertex states,
//!   graphs, and the satisfied/violated semantics.
//! * [`pace`] — `.gr` / `.td` file formats.
//! * [`decomp`] — tree-decomposition validation and conversion to the
//!   rooted nice form (leaf / introduce / forget / join).
//! * [`conv`] — the join kernel: convolution of indicator tables under
//!   coordinate-wise capped state addition.
//! * [`dp`] — the table dynamic program, feasibility extraction, and
//!   witness reconstruction.
//! * [`oracle`] — brute-force ground truth by subset enumeration.
//! * [`gadgets`] — hard-instance generators (tremendous / fragile / robust)
//!   with definitional checkers.
//! * [`instances`] — seeded random graph families and decomposed instances
//!   for tests and benchmarking.
//!
//! # Example
//!
//! Solve the dominating-set variant (`σ = cofinite:0`, `ρ = cofinite:1`)
//! on a path with three vertices:
//!
//! ```
//! use srsolver_core::decomp::{nicify, TreeDecomposition};
//! use srsolver_core::model::{Graph, SigmaRhoSpec};
//! use srsolver_core::dp;
//!
//! let mut g = Graph::new(3);
//! g.add_edge(0, 1)?;
//! g.add_edge(1, 2)?;
//! let spec = SigmaRhoSpec::parse("cofinite:0", "cofinite:1")?;
//!
//! let td = TreeDecomposition::trivial(&g);
//! let nice = nicify(&td, &g)?;
//! let result = dp::solve(&g, &spec, &nice)?;
//!
//! // The middle vertex alone dominates the path ...
//! assert!(result.exact(1, 0));
//! // ... the empty selection leaves all three vertices unsatisfied ...
//! assert!(result.exact(0, 3));
//! assert!(!result.exact(0, 0));
//! // ... and with nothing selected, fewer than three violations is
//! // impossible.
//! assert!(!result.at_most(0, 2));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod conv;
pub mod decomp;
pub mod dp;
pub mod gadgets;
pub mod instances;
pub mod model;
pub mod oracle;
pub mod pace;
