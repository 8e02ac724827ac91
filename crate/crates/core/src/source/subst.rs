use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::{Branch, Expr, Value};
use crate::ident::Ident;

/// Free variables of `e`.
pub fn free_vars(e: &Expr) -> HashSet<Ident> {
    let mut out = HashSet::new();
    let mut bound = Vec::new();
    fv(e, &mut bound, &mut out);
    out
}

fn fv(e: &Expr, bound: &mut Vec<Ident>, out: &mut HashSet<Ident>) {
    let under = |x: &Ident, body: &Expr, bound: &mut Vec<Ident>, out: &mut HashSet<Ident>| {
        bound.push(x.clone());
        fv(body, bound, out);
        bound.pop();
    };
    match e {
        Expr::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Expr::Unit => {}
        Expr::Pair(a, b) | Expr::App(a, b) => {
            fv(a, bound, out);
            fv(b, bound, out);
        }
        Expr::Split { scrut, left, right, body } => {
            fv(scrut, bound, out);
            bound.push(left.clone());
            under(right, body, bound, out);
            bound.pop();
        }
        Expr::Lam { var, body, .. } => under(var, body, bound, out),
        Expr::Delay(a) | Expr::Force(a) | Expr::Con(_, a) => fv(a, bound, out),
        Expr::Rec { scrut, branches, .. } => {
            fv(scrut, bound, out);
            for b in branches.iter() {
                under(&b.var, &b.body, bound, out);
            }
        }
        Expr::Map { var, body, target, .. } => {
            under(var, body, bound, out);
            fv(target, bound, out);
        }
        Expr::Let { bound: e0, var, body } => {
            fv(e0, bound, out);
            under(var, body, bound, out);
        }
    }
}

/// Simultaneous substitution of closed terms for variables. Because the
/// replacements are closed, no binder can capture them.
pub fn subst(e: &Arc<Expr>, pairs: &[(Ident, Arc<Expr>)]) -> Arc<Expr> {
    debug_assert!(pairs.iter().all(|(_, r)| free_vars(r).is_empty()), "substituted terms must be closed");
    let mut s = Subst { pairs, memo: HashMap::new() };
    s.go(e, (1u64 << pairs.len()) - 1)
}

pub fn subst_value(e: &Arc<Expr>, x: &Ident, v: &Value) -> Arc<Expr> {
    subst(e, &[(x.clone(), v.to_expr())])
}

struct Subst<'a> {
    pairs: &'a [(Ident, Arc<Expr>)],
    memo: HashMap<(usize, u64), Arc<Expr>>,
}

impl Subst<'_> {
    fn without(&self, mask: u64, x: &Ident) -> u64 {
        let mut m = mask;
        for (i, (y, _)) in self.pairs.iter().enumerate() {
            if y == x {
                m &= !(1 << i);
            }
        }
        m
    }

    fn go(&mut self, e: &Arc<Expr>, mask: u64) -> Arc<Expr> {
        if mask == 0 {
            return e.clone();
        }
        let key = (Arc::as_ptr(e) as usize, mask);
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let r = self.step(e, mask);
        self.memo.insert(key, r.clone());
        r
    }

    fn step(&mut self, e: &Arc<Expr>, mask: u64) -> Arc<Expr> {
        let same = |a: &Arc<Expr>, b: &Arc<Expr>| Arc::ptr_eq(a, b);
        match &**e {
            Expr::Var(x) => {
                // Later pairs win, mirroring a right-to-left binding order.
                for (i, (y, r)) in self.pairs.iter().enumerate().rev() {
                    if mask & (1 << i) != 0 && y == x {
                        return r.clone();
                    }
                }
                e.clone()
            }
            Expr::Unit => e.clone(),
            Expr::Pair(a, b) | Expr::App(a, b) => {
                let (a2, b2) = (self.go(a, mask), self.go(b, mask));
                if same(a, &a2) && same(b, &b2) {
                    return e.clone();
                }
                Arc::new(match &**e {
                    Expr::Pair(..) => Expr::Pair(a2, b2),
                    _ => Expr::App(a2, b2),
                })
            }
            Expr::Split { scrut, left, right, body } => {
                let s2 = self.go(scrut, mask);
                let m = self.without(self.without(mask, left), right);
                let b2 = self.go(body, m);
                if same(scrut, &s2) && same(body, &b2) {
                    return e.clone();
                }
                Arc::new(Expr::Split { scrut: s2, left: left.clone(), right: right.clone(), body: b2 })
            }
            Expr::Lam { var, ann, body } => {
                let b2 = self.go(body, self.without(mask, var));
                if same(body, &b2) {
                    return e.clone();
                }
                Arc::new(Expr::Lam { var: var.clone(), ann: ann.clone(), body: b2 })
            }
            Expr::Delay(a) | Expr::Force(a) | Expr::Con(_, a) => {
                let a2 = self.go(a, mask);
                if same(a, &a2) {
                    return e.clone();
                }
                Arc::new(match &**e {
                    Expr::Delay(_) => Expr::Delay(a2),
                    Expr::Force(_) => Expr::Force(a2),
                    Expr::Con(c, _) => Expr::Con(c.clone(), a2),
                    _ => unreachable!(),
                })
            }
            Expr::Rec { scrut, branches, ann } => {
                let s2 = self.go(scrut, mask);
                let mut changed = !same(scrut, &s2);
                let mut bs = Vec::with_capacity(branches.len());
                for b in branches.iter() {
                    let body = self.go(&b.body, self.without(mask, &b.var));
                    changed |= !same(&b.body, &body);
                    bs.push(Branch { ctor: b.ctor.clone(), var: b.var.clone(), body });
                }
                if !changed {
                    return e.clone();
                }
                Arc::new(Expr::Rec { scrut: s2, branches: bs.into(), ann: ann.clone() })
            }
            Expr::Map { functor, var, ann, body, target } => {
                let b2 = self.go(body, self.without(mask, var));
                let t2 = self.go(target, mask);
                if same(body, &b2) && same(target, &t2) {
                    return e.clone();
                }
                Arc::new(Expr::Map { functor: functor.clone(), var: var.clone(), ann: ann.clone(), body: b2, target: t2 })
            }
            Expr::Let { bound, var, body } => {
                let e0 = self.go(bound, mask);
                let b2 = self.go(body, self.without(mask, var));
                if same(bound, &e0) && same(body, &b2) {
                    return e.clone();
                }
                Arc::new(Expr::Let { bound: e0, var: var.clone(), body: b2 })
            }
        }
    }
}
