//! Empirical checking of the bounding relation between operational costs and
//! interpreted bounds.

mod bound;
mod canon;
pub mod corpus;
mod exec;
mod gen;
mod suite;
mod terms;

pub use bound::{check_bound, check_defs, BoundReport, CaseRecord, Potential};
pub use canon::{canonical_functions, list_shaped, nat_shaped};
pub use exec::{Exec, STACK_SIZE};
pub use gen::{gen_values, within, GenConfig, ValueGen};
pub use suite::{model_suite, suite_config, SUITES};
pub use terms::{TermGen, TERM_SIGNATURE};
