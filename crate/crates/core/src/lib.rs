//! Recurrence extraction for a higher-order functional language with
//! inductive datatypes.
//!
//! Programs are typechecked and evaluated under a step-counting cost
//! semantics ([`source`], [`eval`]), translated into a cost-explicit
//! complexity language ([`complexity`], [`translate`]), and interpreted under
//! programmer-selected size models ([`size`], [`interp`]). The [`preorder`]
//! module normalizes complexity terms and checks inequalities between them;
//! [`harness`] checks empirically that denoted costs bound operational costs.

pub mod complexity;
pub mod error;
pub mod eval;
pub mod harness;
pub mod ident;
pub mod interp;
pub mod lexer;
pub mod preorder;
pub mod sig;
pub mod size;
pub mod source;
pub mod translate;

pub use error::Error;
pub use ident::Ident;
