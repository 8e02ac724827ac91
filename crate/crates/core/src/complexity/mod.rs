//! The complexity language: a cost type `cost` with 0, 1 and +, products
//! eliminated by projections, functions, and the same datatypes and recursor
//! as the source language.

mod alpha;
mod cmap;
mod parse;
mod print;
mod subst;
mod typecheck;

use std::sync::Arc;

use crate::ident::Ident;
use crate::sig;

pub use alpha::alpha_eq;
pub use cmap::cmap_expand;
pub use parse::{parse_cexpr, parse_ctype};
pub use subst::{csubst, free_cvars};
pub use typecheck::{ctypecheck, CTypeChecker};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CType {
    Cost,
    Unit,
    Prod(Box<CType>, Box<CType>),
    Arrow(Box<CType>, Box<CType>),
    Data(Ident),
}

impl CType {
    pub fn prod(a: CType, b: CType) -> CType {
        CType::Prod(Box::new(a), Box::new(b))
    }
    pub fn arrow(a: CType, b: CType) -> CType {
        CType::Arrow(Box::new(a), Box::new(b))
    }
    /// C × t, the type of complexities with potential `t`.
    pub fn complexity(t: CType) -> CType {
        CType::prod(CType::Cost, t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CFunctor {
    SelfRef,
    Const(CType),
    Prod(Box<CFunctor>, Box<CFunctor>),
    Arrow(CType, Box<CFunctor>),
}

impl CFunctor {
    pub fn apply(&self, t: &CType) -> CType {
        match self {
            CFunctor::SelfRef => t.clone(),
            CFunctor::Const(c) => c.clone(),
            CFunctor::Prod(a, b) => CType::prod(a.apply(t), b.apply(t)),
            CFunctor::Arrow(d, b) => CType::arrow(d.clone(), b.apply(t)),
        }
    }

    pub fn has_self(&self) -> bool {
        match self {
            CFunctor::SelfRef => true,
            CFunctor::Const(_) => false,
            CFunctor::Prod(a, b) => a.has_self() || b.has_self(),
            CFunctor::Arrow(_, b) => b.has_self(),
        }
    }
}

pub type CSignature = sig::Signature<CFunctor>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CBranch {
    pub ctor: Ident,
    pub var: Ident,
    pub body: Arc<CExpr>,
}

/// Complexity expressions. Terms are shared DAGs: the translation duplicates
/// subterms by reference, never by copying.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CExpr {
    Var(Ident),
    Zero,
    One,
    /// The numeral n, an abbreviation for 1 + ... + 1.
    Num(u64),
    Plus(Arc<CExpr>, Arc<CExpr>),
    Unit,
    Pair(Arc<CExpr>, Arc<CExpr>),
    Fst(Arc<CExpr>),
    Snd(Arc<CExpr>),
    Lam { var: Ident, ann: Option<CType>, body: Arc<CExpr> },
    App(Arc<CExpr>, Arc<CExpr>),
    Con(Ident, Arc<CExpr>),
    Rec { scrut: Arc<CExpr>, branches: Arc<[CBranch]>, ann: Option<CType> },
}

impl CExpr {
    pub fn var(x: &Ident) -> Arc<CExpr> {
        Arc::new(CExpr::Var(x.clone()))
    }
    pub fn zero() -> Arc<CExpr> {
        Arc::new(CExpr::Zero)
    }
    pub fn one() -> Arc<CExpr> {
        Arc::new(CExpr::One)
    }
    /// The canonical spelling of a numeral.
    pub fn num(n: u64) -> Arc<CExpr> {
        Arc::new(match n {
            0 => CExpr::Zero,
            1 => CExpr::One,
            n => CExpr::Num(n),
        })
    }
    pub fn plus(a: Arc<CExpr>, b: Arc<CExpr>) -> Arc<CExpr> {
        Arc::new(CExpr::Plus(a, b))
    }
    pub fn unit() -> Arc<CExpr> {
        Arc::new(CExpr::Unit)
    }
    pub fn pair(a: Arc<CExpr>, b: Arc<CExpr>) -> Arc<CExpr> {
        Arc::new(CExpr::Pair(a, b))
    }
    pub fn fst(a: Arc<CExpr>) -> Arc<CExpr> {
        Arc::new(CExpr::Fst(a))
    }
    pub fn snd(a: Arc<CExpr>) -> Arc<CExpr> {
        Arc::new(CExpr::Snd(a))
    }
    pub fn app(a: Arc<CExpr>, b: Arc<CExpr>) -> Arc<CExpr> {
        Arc::new(CExpr::App(a, b))
    }
    pub fn lam(var: Ident, ann: Option<CType>, body: Arc<CExpr>) -> Arc<CExpr> {
        Arc::new(CExpr::Lam { var, ann, body })
    }
    pub fn con(c: Ident, a: Arc<CExpr>) -> Arc<CExpr> {
        Arc::new(CExpr::Con(c, a))
    }

    /// The value of a closed numeral term built from 0, 1, numerals and +.
    pub fn as_numeral(&self) -> Option<u64> {
        match self {
            CExpr::Zero => Some(0),
            CExpr::One => Some(1),
            CExpr::Num(n) => Some(*n),
            CExpr::Plus(a, b) => a.as_numeral()?.checked_add(b.as_numeral()?),
            _ => None,
        }
    }

    /// Number of distinct nodes (shared subterms counted once).
    pub fn dag_size(self: &Arc<Self>) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(Arc::as_ptr(&e) as usize) {
                continue;
            }
            match &*e {
                CExpr::Plus(a, b) | CExpr::Pair(a, b) | CExpr::App(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
                CExpr::Fst(a) | CExpr::Snd(a) | CExpr::Con(_, a) => stack.push(a.clone()),
                CExpr::Lam { body, .. } => stack.push(body.clone()),
                CExpr::Rec { scrut, branches, .. } => {
                    stack.push(scrut.clone());
                    stack.extend(branches.iter().map(|b| b.body.clone()));
                }
                _ => {}
            }
        }
        seen.len()
    }
}
