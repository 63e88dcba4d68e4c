//! Verified gadget constructions for hardness-style reductions.
//!
//! A *gadget* is a small graph with distinguished vertices that enforces a
//! combinatorial promise for every selection of its vertices: portal gadgets
//! force their portal into any cheap clean selection, attractor gadgets force
//! a minimum spend on the rest of the graph whenever the interface vertices
//! behave, and so on.  Each family here ships in two halves:
//!
//! * a **generator** that builds the gadget for a given [`SigmaRhoSpec`]
//!   (returning [`GadgetError::UnsupportedSpec`] when the family does not
//!   apply), and
//! * a **checker** that verifies the defining properties *exhaustively*,
//!   returning either [`Verdict::Holds`] or a concrete counterexample
//!   selection.  Checkers never trust the generator; they re-derive
//!   everything from the instance graph.
//!
//! The checkers double as test oracles: any mutation of a generated gadget
//! (a missing edge, an off-by-one constant) is rejected with a witness.
//!
//! Families:
//!
//! * [`tremendous`]: a portal gadget whose portal must be selected by any
//!   selection that avoids violations, even under a one-count slack.
//! * [`fragile`]: an attractor with a free interface set `U` whose clean
//!   selections all cost exactly `gamma` outside `U`.
//! * [`robust`]: a larger attractor whose spend degrades gracefully (by at
//!   most `beta` per tolerated violation) and which penalises touching the
//!   interface neighbourhood.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::decomp::TreeDecomposition;
use crate::model::{Graph, SigmaRhoSpec};

pub mod fragile;
pub mod robust;
pub mod sabotage;
pub mod tremendous;

pub use fragile::{check_fragile, generate_fragile, FragileViolation};
pub use robust::{
    check_robust, check_robust_naive, generate_robust, RobustCopy, RobustLayout, RobustViolation,
};
pub use tremendous::{check_tremendous, generate_tremendous, TremendousViolation};

/// Hard ceiling on `2^n` subset enumeration performed by the checkers.
pub const ENUMERATION_CAP: usize = 24;

/// A generated gadget: the graph, its distinguished vertices, the constants
/// the construction promises, and (when the family provides one) a
/// path-shaped tree decomposition of bounded width.
#[derive(Debug, Clone)]
pub struct GadgetInstance {
    /// The gadget graph, with deterministic construction-order labels.
    pub graph: Graph,
    /// Distinguished vertices: the portal for portal gadgets (length 1) or
    /// the interface set `U` for attractor gadgets (length `d`).
    pub distinguished: Vec<usize>,
    /// Named constants promised by the construction, e.g. `c_t`, `gamma`,
    /// `beta`, `t`, `delta`, `d`.  Checkers read the constants they need
    /// from here and verify them against the graph.
    pub constants: BTreeMap<String, usize>,
    /// A path-shaped tree decomposition of the gadget, when the family
    /// provides one with bounded width.
    pub path_decomposition: Option<TreeDecomposition>,
    /// Structural role map for the large attractor family; `None` for the
    /// other families.
    pub robust_layout: Option<RobustLayout>,
}

impl GadgetInstance {
    /// Looks up a required constant, with a clear panic message for tests
    /// and a typed error for checkers via [`require_constant`].
    pub fn constant(&self, name: &str) -> Option<usize> {
        self.constants.get(name).copied()
    }
}

/// Reasons a gadget cannot be generated or checked.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    /// The (sigma, rho) specification is outside the family's domain.
    #[error("unsupported specification for this gadget family: {reason}")]
    UnsupportedSpec {
        /// Which precondition failed.
        reason: String,
    },
    /// The requested arity or slack parameter is outside the family's domain.
    #[error("unsupported parameter: {reason}")]
    UnsupportedParameter {
        /// Which parameter constraint failed.
        reason: String,
    },
    /// Exhaustive checking would need to enumerate more than `2^cap` cases.
    #[error("exhaustive check over 2^{required} cases exceeds cap 2^{cap}")]
    CapExceeded {
        /// Base-two logarithm of the required enumeration size.
        required: usize,
        /// The configured ceiling.
        cap: usize,
    },
    /// A required constant is missing from the instance.
    #[error("instance is missing required constant `{name}`")]
    MissingConstant {
        /// Name of the absent constant.
        name: String,
    },
    /// A distinguished-vertex list has the wrong shape for the family.
    #[error("malformed distinguished vertex list: {reason}")]
    MalformedInstance {
        /// What is wrong with the instance.
        reason: String,
    },
}

/// Outcome of a definitional check: either every property holds, or a
/// concrete counterexample refutes one of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<V> {
    /// All defining properties hold.
    Holds,
    /// A property fails; the payload names it and carries a witness.
    Refuted(V),
}

impl<V> Verdict<V> {
    /// True when the check passed.
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

pub(crate) fn require_constant(instance: &GadgetInstance, name: &str) -> Result<usize, GadgetError> {
    instance
        .constant(name)
        .ok_or_else(|| GadgetError::MissingConstant {
            name: name.to_owned(),
        })
}

pub(crate) fn ensure_enumerable(bits: usize) -> Result<(), GadgetError> {
    if bits > ENUMERATION_CAP {
        Err(GadgetError::CapExceeded {
            required: bits,
            cap: ENUMERATION_CAP,
        })
    } else {
        Ok(())
    }
}

/// Number of selected neighbours of `v` under the selection mask.
pub(crate) fn selected_neighbors(graph: &Graph, selected: &[bool], v: usize) -> usize {
    graph.neighbors(v).iter().filter(|&&u| selected[u]).count()
}

/// True when `v` is violated under the selection: a selected vertex needs
/// its selected-neighbour count in sigma, an unselected one needs it in rho.
pub(crate) fn is_violated(
    graph: &Graph,
    spec: &SigmaRhoSpec,
    selected: &[bool],
    v: usize,
) -> bool {
    let count = selected_neighbors(graph, selected, v);
    let set = if selected[v] { &spec.sigma } else { &spec.rho };
    !set.contains(count)
}

/// True when `v` is violated under the selection with both membership sets
/// shifted down by one (the "one extra selected neighbour is already
/// guaranteed" reading used by portal-gadget checks).
pub(crate) fn is_violated_shifted(
    graph: &Graph,
    spec: &SigmaRhoSpec,
    selected: &[bool],
    v: usize,
) -> bool {
    let count = selected_neighbors(graph, selected, v);
    let set = if selected[v] { &spec.sigma } else { &spec.rho };
    !set.contains_shifted_down(count)
}

pub(crate) fn mask_to_vertices(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

pub(crate) fn mask_to_selected(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|v| mask >> v & 1 == 1).collect()
}
