//! Random well-typed source terms, values and `map` instances, built type
//! first so that every generated term has a known type.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ident::Ident;
use crate::source::{Branch, Expr, Functor, Signature, Type};

/// The signature the generators work over by default: first-order
/// datatypes, a tree, and a constructor with a function argument.
pub const TERM_SIGNATURE: &str = "
    datatype bool = True of unit | False of unit;
    datatype nat = Zero of unit | Succ of self;
    datatype list = Nil of unit | Cons of nat * self;
    datatype tree = Emp of unit | Node of nat * self * self;
    datatype fan = Tip of unit | Fan of bool -> self;
";

pub struct TermGen<'s> {
    sig: &'s Signature,
    rng: ChaCha8Rng,
    next: usize,
    datas: Vec<Ident>,
}

type Ctx = Vec<(Ident, Type)>;

impl<'s> TermGen<'s> {
    /// Datatypes without a constructor free of `self` are never generated.
    pub fn new(sig: &'s Signature, seed: u64) -> Self {
        let datas = sig.decls().iter().filter(|d| d.ctors.iter().any(|c| !c.arg.has_self())).map(|d| d.name.clone()).collect();
        TermGen { sig, rng: ChaCha8Rng::seed_from_u64(seed), next: 0, datas }
    }

    fn fresh(&mut self) -> Ident {
        self.next += 1;
        Ident::from(format!("x{}", self.next))
    }

    pub fn ty(&mut self, depth: usize) -> Type {
        let leaf = depth == 0 || self.rng.gen_bool(0.4);
        if leaf {
            if self.rng.gen_bool(0.2) || self.datas.is_empty() {
                Type::Unit
            } else {
                Type::Data(self.datas.choose(&mut self.rng).unwrap().clone())
            }
        } else {
            match self.rng.gen_range(0..3) {
                0 => Type::prod(self.ty(depth - 1), self.ty(depth - 1)),
                1 => Type::arrow(self.ty(depth - 1), self.ty(depth - 1)),
                _ => Type::susp(self.ty(depth - 1)),
            }
        }
    }

    /// A closed term of type `t`.
    pub fn closed(&mut self, t: &Type, depth: usize) -> Arc<Expr> {
        self.term(&mut Vec::new(), t, depth)
    }

    pub fn term(&mut self, ctx: &mut Ctx, t: &Type, depth: usize) -> Arc<Expr> {
        if depth == 0 {
            return self.small(ctx, t);
        }
        match self.rng.gen_range(0..10) {
            0 | 1 => self.intro(ctx, t, depth),
            2 => self.small(ctx, t),
            3 => {
                let s = self.ty(1);
                let f = self.term(ctx, &Type::arrow(s.clone(), t.clone()), depth - 1);
                let a = self.term(ctx, &s, depth - 1);
                Expr::app(f, a)
            }
            4 => Arc::new(Expr::Force(self.term(ctx, &Type::susp(t.clone()), depth - 1))),
            5 => {
                let (a, b) = (self.ty(1), self.ty(1));
                let scrut = self.term(ctx, &Type::prod(a.clone(), b.clone()), depth - 1);
                let (l, r) = (self.fresh(), self.fresh());
                ctx.push((l.clone(), a));
                ctx.push((r.clone(), b));
                let body = self.term(ctx, t, depth - 1);
                ctx.truncate(ctx.len() - 2);
                Arc::new(Expr::Split { scrut, left: l, right: r, body })
            }
            6 => {
                let s = self.ty(1);
                let bound = self.term(ctx, &s, depth - 1);
                let x = self.fresh();
                ctx.push((x.clone(), s));
                let body = self.term(ctx, t, depth - 1);
                ctx.pop();
                Arc::new(Expr::Let { bound, var: x, body })
            }
            7 | 8 if !self.datas.is_empty() => self.rec(ctx, t, depth),
            _ => match self.map(ctx, t, depth) {
                Some(e) => e,
                None => self.intro(ctx, t, depth),
            },
        }
    }

    fn rec(&mut self, ctx: &mut Ctx, t: &Type, depth: usize) -> Arc<Expr> {
        let d = self.datas.choose(&mut self.rng).unwrap().clone();
        let dt = Type::Data(d.clone());
        let scrut = self.term(ctx, &dt, depth - 1);
        let decl = self.sig.datatype(d.as_str()).expect("generated datatype").clone();
        let arg = Type::prod(dt, Type::susp(t.clone()));
        let mut branches = Vec::new();
        for c in &decl.ctors {
            let x = self.fresh();
            ctx.push((x.clone(), c.arg.apply(&arg)));
            let body = self.term(ctx, t, depth - 1);
            ctx.pop();
            branches.push(Branch { ctor: c.name.clone(), var: x, body });
        }
        Arc::new(Expr::Rec { scrut, branches: branches.into(), ann: Some(t.clone()) })
    }

    /// `map[φ](x. v; w)` at type `t` = φ[τ], for a functor split off `t`.
    fn map(&mut self, ctx: &mut Ctx, t: &Type, depth: usize) -> Option<Arc<Expr>> {
        let (functor, to) = self.split_functor(t)?;
        let from = if functor.has_self() { self.ty(1) } else { Type::Unit };
        let target = self.value_form(ctx, &functor.apply(&from), depth - 1);
        let x = self.fresh();
        ctx.push((x.clone(), from.clone()));
        let body = self.value_form(ctx, &to, depth - 1);
        ctx.pop();
        Some(Arc::new(Expr::Map { functor, var: x, ann: Some(from), body, target }))
    }

    /// Some φ and τ with φ[τ] = t.
    fn split_functor(&mut self, t: &Type) -> Option<(Functor, Type)> {
        let choice = self.rng.gen_range(0..4);
        Some(match (choice, t) {
            (0, Type::Prod(a, b)) => {
                // The right side stays constant so that both sides agree on τ.
                let (fa, ta) = self.split_functor(a)?;
                (Functor::Prod(Box::new(fa), Box::new(Functor::Const((**b).clone()))), ta)
            }
            (1, Type::Arrow(d, c)) => {
                let (fc, tc) = self.split_functor(c)?;
                (Functor::Arrow((**d).clone(), Box::new(fc)), tc)
            }
            (2, t) => (Functor::Const(t.clone()), Type::Unit),
            (_, t) => (Functor::SelfRef, t.clone()),
        })
    }

    /// A syntactic value or a variable of type `t`.
    pub fn value_form(&mut self, ctx: &mut Ctx, t: &Type, depth: usize) -> Arc<Expr> {
        if let Some(x) = self.var_of(ctx, t) {
            if self.rng.gen_bool(0.5) {
                return Expr::var(x.as_str());
            }
        }
        match t {
            Type::Unit => Expr::unit(),
            Type::Prod(a, b) => Expr::pair(self.value_form(ctx, a, depth), self.value_form(ctx, b, depth)),
            Type::Arrow(a, b) => self.lam(ctx, a, b, depth),
            Type::Susp(a) => Arc::new(Expr::Delay(self.term(ctx, a, depth))),
            Type::Data(d) => {
                let (c, f) = self.ctor(d, depth);
                let arg = self.value_form(ctx, &f.apply(t), depth.saturating_sub(1));
                Arc::new(Expr::Con(c, arg))
            }
        }
    }

    fn lam(&mut self, ctx: &mut Ctx, a: &Type, b: &Type, depth: usize) -> Arc<Expr> {
        let x = self.fresh();
        ctx.push((x.clone(), a.clone()));
        let body = self.term(ctx, b, depth.saturating_sub(1));
        ctx.pop();
        Arc::new(Expr::Lam { var: x, ann: Some(a.clone()), body })
    }

    /// A constructor of `d`; only constructors without `self` when `depth` is 0.
    fn ctor(&mut self, d: &Ident, depth: usize) -> (Ident, Functor) {
        let decl = self.sig.datatype(d.as_str()).expect("generated datatype");
        let cs: Vec<_> = decl.ctors.iter().filter(|c| depth > 0 || !c.arg.has_self()).collect();
        let c = cs.choose(&mut self.rng).expect("a base constructor");
        (c.name.clone(), c.arg.clone())
    }

    fn var_of(&mut self, ctx: &Ctx, t: &Type) -> Option<Ident> {
        // Binders are always fresh, so nothing is shadowed.
        let xs: Vec<&Ident> = ctx.iter().filter(|(_, u)| u == t).map(|(x, _)| x).collect();
        xs.choose(&mut self.rng).map(|x| (*x).clone())
    }

    fn intro(&mut self, ctx: &mut Ctx, t: &Type, depth: usize) -> Arc<Expr> {
        match t {
            Type::Unit => Expr::unit(),
            Type::Prod(a, b) => Expr::pair(self.term(ctx, a, depth - 1), self.term(ctx, b, depth - 1)),
            Type::Arrow(a, b) => self.lam(ctx, a, b, depth),
            Type::Susp(a) => Arc::new(Expr::Delay(self.term(ctx, a, depth - 1))),
            Type::Data(d) => {
                let (c, f) = self.ctor(d, depth);
                let arg = self.term(ctx, &f.apply(t), depth - 1);
                Arc::new(Expr::Con(c, arg))
            }
        }
    }

    fn small(&mut self, ctx: &mut Ctx, t: &Type) -> Arc<Expr> {
        self.value_form(ctx, t, 0)
    }

    /// A closed value of type `t`.
    pub fn value(&mut self, t: &Type, depth: usize) -> Arc<Expr> {
        self.value_form(&mut Vec::new(), t, depth)
    }

    /// A closed `map` instance: a functor, a binder body and a target.
    pub fn map_instance(&mut self, depth: usize) -> Arc<Expr> {
        loop {
            let t = self.ty(2);
            if let Some(e) = self.map(&mut Vec::new(), &t, depth.max(1)) {
                return e;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::{check_program, parse_program};

    #[test]
    fn generated_terms_typecheck() {
        let p = check_program(&parse_program(TERM_SIGNATURE).unwrap()).unwrap();
        let mut g = TermGen::new(&p.signature, 11);
        for _ in 0..200 {
            let t = g.ty(2);
            let e = g.closed(&t, 3);
            p.elaborate_checked(&e, &t).unwrap_or_else(|err| panic!("{e} : {t}: {err}"));
        }
    }

    #[test]
    fn map_instances_typecheck() {
        let p = check_program(&parse_program(TERM_SIGNATURE).unwrap()).unwrap();
        let mut g = TermGen::new(&p.signature, 5);
        for _ in 0..100 {
            let e = g.map_instance(2);
            p.elaborate(&e).unwrap_or_else(|err| panic!("{e}: {err}"));
        }
    }
}
