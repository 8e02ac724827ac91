//! The source language: a call-by-value language with products, functions,
//! suspensions and inductive datatypes, eliminated by a primitive recursor.

mod parse;
mod print;
mod subst;
mod typecheck;
mod wf;

use std::sync::Arc;

use crate::ident::Ident;
use crate::sig;

pub use parse::{parse_expr, parse_functor, parse_program, parse_type};
pub use subst::{free_vars, subst, subst_value};
pub use typecheck::{check_program, CheckedDef, CheckedProgram, TypeChecker};
pub use wf::{wf_signature, Violation};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Unit,
    Prod(Box<Type>, Box<Type>),
    Arrow(Box<Type>, Box<Type>),
    Susp(Box<Type>),
    Data(Ident),
}

impl Type {
    pub fn prod(a: Type, b: Type) -> Type {
        Type::Prod(Box::new(a), Box::new(b))
    }
    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Arrow(Box::new(a), Box::new(b))
    }
    pub fn susp(a: Type) -> Type {
        Type::Susp(Box::new(a))
    }
    pub fn data(n: &str) -> Type {
        Type::Data(Ident::new(n))
    }

    /// Datatype names mentioned anywhere in the type.
    pub fn datatypes(&self, out: &mut Vec<Ident>) {
        match self {
            Type::Unit => {}
            Type::Prod(a, b) | Type::Arrow(a, b) => {
                a.datatypes(out);
                b.datatypes(out);
            }
            Type::Susp(a) => a.datatypes(out),
            Type::Data(d) => out.push(d.clone()),
        }
    }
}

/// Constructor-argument shapes. `SelfRef` marks the recursive position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Functor {
    SelfRef,
    Const(Type),
    Prod(Box<Functor>, Box<Functor>),
    Arrow(Type, Box<Functor>),
}

impl Functor {
    /// φ[τ]: the functor with the recursive position filled by `t`.
    pub fn apply(&self, t: &Type) -> Type {
        match self {
            Functor::SelfRef => t.clone(),
            Functor::Const(c) => c.clone(),
            Functor::Prod(a, b) => Type::prod(a.apply(t), b.apply(t)),
            Functor::Arrow(d, b) => Type::arrow(d.clone(), b.apply(t)),
        }
    }

    pub fn has_self(&self) -> bool {
        match self {
            Functor::SelfRef => true,
            Functor::Const(_) => false,
            Functor::Prod(a, b) => a.has_self() || b.has_self(),
            Functor::Arrow(_, b) => b.has_self(),
        }
    }

    /// Number of recursive positions (arrow positions count once).
    pub fn self_count(&self) -> usize {
        match self {
            Functor::SelfRef => 1,
            Functor::Const(_) => 0,
            Functor::Prod(a, b) => a.self_count() + b.self_count(),
            Functor::Arrow(_, b) => b.self_count(),
        }
    }

    /// Collapses self-free subfunctors into `Const`, so that structurally
    /// different spellings of the same shape compare equal.
    pub fn canonical(self) -> Functor {
        match self {
            Functor::Prod(a, b) => {
                let (a, b) = (a.canonical(), b.canonical());
                match (a, b) {
                    (Functor::Const(x), Functor::Const(y)) => Functor::Const(Type::prod(x, y)),
                    (a, b) => Functor::Prod(Box::new(a), Box::new(b)),
                }
            }
            Functor::Arrow(d, b) => match b.canonical() {
                Functor::Const(c) => Functor::Const(Type::arrow(d, c)),
                b => Functor::Arrow(d, Box::new(b)),
            },
            f => f,
        }
    }
}

pub type Signature = sig::Signature<Functor>;
pub type DataDecl = sig::DataDecl<Functor>;
pub type CtorDecl = sig::CtorDecl<Functor>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub ctor: Ident,
    pub var: Ident,
    pub body: Arc<Expr>,
}

/// Source expressions. Annotations (`ann`) are optional in the surface syntax
/// and filled in by the typechecker's elaboration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var(Ident),
    Unit,
    Pair(Arc<Expr>, Arc<Expr>),
    Split { scrut: Arc<Expr>, left: Ident, right: Ident, body: Arc<Expr> },
    Lam { var: Ident, ann: Option<Type>, body: Arc<Expr> },
    App(Arc<Expr>, Arc<Expr>),
    Delay(Arc<Expr>),
    Force(Arc<Expr>),
    Con(Ident, Arc<Expr>),
    Rec { scrut: Arc<Expr>, branches: Arc<[Branch]>, ann: Option<Type> },
    Map { functor: Functor, var: Ident, ann: Option<Type>, body: Arc<Expr>, target: Arc<Expr> },
    Let { bound: Arc<Expr>, var: Ident, body: Arc<Expr> },
}

impl Expr {
    pub fn var(n: &str) -> Arc<Expr> {
        Arc::new(Expr::Var(Ident::new(n)))
    }
    pub fn unit() -> Arc<Expr> {
        Arc::new(Expr::Unit)
    }
    pub fn pair(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
        Arc::new(Expr::Pair(a, b))
    }
    pub fn app(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
        Arc::new(Expr::App(a, b))
    }
    pub fn lam(v: &str, ann: Option<Type>, body: Arc<Expr>) -> Arc<Expr> {
        Arc::new(Expr::Lam { var: Ident::new(v), ann, body })
    }
    pub fn con(c: &str, a: Arc<Expr>) -> Arc<Expr> {
        Arc::new(Expr::Con(Ident::new(c), a))
    }

    /// Syntactic values and variables: the forms allowed as map operands.
    pub fn is_value_form(&self) -> bool {
        match self {
            Expr::Var(_) | Expr::Unit | Expr::Lam { .. } | Expr::Delay(_) => true,
            Expr::Pair(a, b) => a.is_value_form() && b.is_value_form(),
            Expr::Con(_, a) => a.is_value_form(),
            _ => false,
        }
    }

    /// Converts a closed syntactic value into a `Value`.
    pub fn as_value(&self) -> Option<Value> {
        Some(match self {
            Expr::Unit => Value::Unit,
            Expr::Pair(a, b) => Value::Pair(Arc::new(a.as_value()?), Arc::new(b.as_value()?)),
            Expr::Lam { var, ann, body } => Value::Lam { var: var.clone(), ann: ann.clone(), body: body.clone() },
            Expr::Delay(e) => Value::Delay(e.clone()),
            Expr::Con(c, a) => Value::Con(c.clone(), Arc::new(a.as_value()?)),
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Unit,
    Pair(Arc<Value>, Arc<Value>),
    Lam { var: Ident, ann: Option<Type>, body: Arc<Expr> },
    Delay(Arc<Expr>),
    Con(Ident, Arc<Value>),
}

impl Value {
    pub fn con(c: &str, v: Value) -> Value {
        Value::Con(Ident::new(c), Arc::new(v))
    }
    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Arc::new(a), Arc::new(b))
    }

    pub fn to_expr(&self) -> Arc<Expr> {
        Arc::new(match self {
            Value::Unit => Expr::Unit,
            Value::Pair(a, b) => Expr::Pair(a.to_expr(), b.to_expr()),
            Value::Lam { var, ann, body } => Expr::Lam { var: var.clone(), ann: ann.clone(), body: body.clone() },
            Value::Delay(e) => Expr::Delay(e.clone()),
            Value::Con(c, a) => Expr::Con(c.clone(), a.to_expr()),
        })
    }

    /// Number of constructor nodes, including those in labels.
    pub fn ctor_count(&self) -> usize {
        match self {
            Value::Unit | Value::Lam { .. } | Value::Delay(_) => 0,
            Value::Pair(a, b) => a.ctor_count() + b.ctor_count(),
            Value::Con(_, a) => 1 + a.ctor_count(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Def {
    pub name: Ident,
    pub ann: Option<Type>,
    pub body: Arc<Expr>,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct Program {
    pub signature: Signature,
    pub defs: Vec<Def>,
}
