//! The preorder on complexity terms: normal forms that read the step rules
//! as equations, a small-step rewriter, and a bounded search for derivations
//! of `E0 ≤ E1`.

mod cost;
mod leq;
mod nbe;
mod rewrite;

pub use cost::canonical_costs;
pub use leq::{leq, leq_with_depth, list_axioms, AxiomSet, LeqResult, ListAxioms, LEQ_DEPTH};
pub use nbe::{cost_literal, normalize, normalize_with_fuel, NORMALIZE_FUEL};
pub use rewrite::{rewrite_normalize, root_step, step, step_with, Positions, RewriteStep, Rule};
