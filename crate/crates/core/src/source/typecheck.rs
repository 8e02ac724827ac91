use std::collections::HashSet;
use std::sync::Arc;

use super::wf::type_ok;
use super::{free_vars, parse_expr, subst, wf_signature, Branch, Expr, Functor, Program, Signature, Type};
use crate::error::{Error, TypeError};
use crate::ident::Ident;

pub type Ctx = Vec<(Ident, Type)>;

fn short(e: &Expr) -> String {
    let s = e.to_string();
    if s.chars().count() > 100 {
        let t: String = s.chars().take(97).collect();
        format!("{t}...")
    } else {
        s
    }
}

fn mismatch(expected: impl ToString, actual: impl ToString, e: &Expr) -> TypeError {
    TypeError::Mismatch { expected: expected.to_string(), actual: actual.to_string(), term: short(e) }
}

/// Bidirectional typechecker. Both modes return an elaborated copy of the
/// term with every lambda, recursor and map binder annotated.
pub struct TypeChecker<'s> {
    sig: &'s Signature,
}

impl<'s> TypeChecker<'s> {
    pub fn new(sig: &'s Signature) -> Self {
        TypeChecker { sig }
    }

    /// The type of `e`, if it can be synthesized.
    pub fn typecheck(&self, ctx: &Ctx, e: &Arc<Expr>) -> Result<Type, TypeError> {
        let mut ctx = ctx.clone();
        self.synth(&mut ctx, e).map(|(_, t)| t)
    }

    fn lookup(ctx: &Ctx, x: &Ident) -> Result<Type, TypeError> {
        ctx.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t.clone()).ok_or_else(|| TypeError::UnknownVar(x.to_string()))
    }

    fn wf_type(&self, t: &Type) -> Result<(), TypeError> {
        type_ok(self.sig, t).map_err(|d| TypeError::UnknownDatatype(d.to_string()))
    }

    fn under<T>(ctx: &mut Ctx, x: &Ident, t: Type, f: impl FnOnce(&mut Ctx) -> T) -> T {
        ctx.push((x.clone(), t));
        let r = f(ctx);
        ctx.pop();
        r
    }

    pub fn synth(&self, ctx: &mut Ctx, e: &Arc<Expr>) -> Result<(Arc<Expr>, Type), TypeError> {
        match &**e {
            Expr::Var(x) => Ok((e.clone(), Self::lookup(ctx, x)?)),
            Expr::Unit => Ok((e.clone(), Type::Unit)),
            Expr::Pair(a, b) => {
                let (a2, ta) = self.synth(ctx, a)?;
                let (b2, tb) = self.synth(ctx, b)?;
                Ok((Expr::pair(a2, b2), Type::prod(ta, tb)))
            }
            Expr::Split { scrut, left, right, body } => {
                let (s2, ts) = self.synth(ctx, scrut)?;
                let Type::Prod(ta, tb) = ts else { return Err(mismatch("a product", ts, scrut)) };
                ctx.push((left.clone(), *ta));
                let r = Self::under(ctx, right, *tb, |ctx| self.synth(ctx, body));
                ctx.pop();
                let (b2, t) = r?;
                Ok((Arc::new(Expr::Split { scrut: s2, left: left.clone(), right: right.clone(), body: b2 }), t))
            }
            Expr::Lam { var, ann: Some(d), body } => {
                self.wf_type(d)?;
                let (b2, tb) = Self::under(ctx, var, d.clone(), |ctx| self.synth(ctx, body))?;
                Ok((Arc::new(Expr::Lam { var: var.clone(), ann: Some(d.clone()), body: b2 }), Type::arrow(d.clone(), tb)))
            }
            Expr::Lam { ann: None, .. } => Err(TypeError::NeedsAnnotation(short(e))),
            Expr::App(f, a) => {
                if let Expr::Lam { var, ann: None, body } = &**f {
                    let (a2, ta) = self.synth(ctx, a)?;
                    let (b2, tb) = Self::under(ctx, var, ta.clone(), |ctx| self.synth(ctx, body))?;
                    let f2 = Arc::new(Expr::Lam { var: var.clone(), ann: Some(ta), body: b2 });
                    return Ok((Expr::app(f2, a2), tb));
                }
                let (f2, tf) = self.synth(ctx, f)?;
                let Type::Arrow(d, c) = tf else { return Err(mismatch("a function", tf, f)) };
                let a2 = self.check(ctx, a, &d)?;
                Ok((Expr::app(f2, a2), *c))
            }
            Expr::Delay(a) => {
                let (a2, t) = self.synth(ctx, a)?;
                Ok((Arc::new(Expr::Delay(a2)), Type::susp(t)))
            }
            Expr::Force(a) => {
                let (a2, t) = self.synth(ctx, a)?;
                let Type::Susp(t) = t else { return Err(mismatch("a suspension", t, a)) };
                Ok((Arc::new(Expr::Force(a2)), *t))
            }
            Expr::Con(c, a) => {
                let info = self.sig.ctor(c.as_str()).ok_or_else(|| TypeError::UnknownCtor(c.to_string()))?;
                let dt = Type::Data(info.datatype.clone());
                let a2 = self.check(ctx, a, &info.arg.apply(&dt))?;
                Ok((Arc::new(Expr::Con(c.clone(), a2)), dt))
            }
            Expr::Rec { scrut, branches, ann } => {
                let (s2, ts) = self.synth(ctx, scrut)?;
                let result = match ann {
                    Some(t) => t.clone(),
                    None => self.rec_result(ctx, e, &ts, branches)?,
                };
                let bs = self.check_branches(ctx, e, &ts, branches, &result)?;
                Ok((Arc::new(Expr::Rec { scrut: s2, branches: bs.into(), ann: Some(result.clone()) }), result))
            }
            Expr::Map { functor, var, ann, body, target } => self.map(ctx, e, functor, var, ann, body, target, None),
            Expr::Let { bound, var, body } => {
                let (e0, t0) = self.synth(ctx, bound)?;
                let (b2, t) = Self::under(ctx, var, t0, |ctx| self.synth(ctx, body))?;
                Ok((Arc::new(Expr::Let { bound: e0, var: var.clone(), body: b2 }), t))
            }
        }
    }

    pub fn check(&self, ctx: &mut Ctx, e: &Arc<Expr>, t: &Type) -> Result<Arc<Expr>, TypeError> {
        match (&**e, t) {
            (Expr::Lam { var, ann, body }, Type::Arrow(d, c)) => {
                if let Some(a) = ann {
                    if a != &**d {
                        return Err(mismatch(t, Type::arrow(a.clone(), (**c).clone()), e));
                    }
                }
                let b2 = Self::under(ctx, var, (**d).clone(), |ctx| self.check(ctx, body, c))?;
                Ok(Arc::new(Expr::Lam { var: var.clone(), ann: Some((**d).clone()), body: b2 }))
            }
            (Expr::Lam { .. }, _) => Err(mismatch(t, "a function", e)),
            (Expr::Pair(a, b), Type::Prod(ta, tb)) => Ok(Expr::pair(self.check(ctx, a, ta)?, self.check(ctx, b, tb)?)),
            (Expr::Delay(a), Type::Susp(ta)) => Ok(Arc::new(Expr::Delay(self.check(ctx, a, ta)?))),
            (Expr::Split { scrut, left, right, body }, _) => {
                let (s2, ts) = self.synth(ctx, scrut)?;
                let Type::Prod(ta, tb) = ts else { return Err(mismatch("a product", ts, scrut)) };
                ctx.push((left.clone(), *ta));
                let r = Self::under(ctx, right, *tb, |ctx| self.check(ctx, body, t));
                ctx.pop();
                Ok(Arc::new(Expr::Split { scrut: s2, left: left.clone(), right: right.clone(), body: r? }))
            }
            (Expr::Let { bound, var, body }, _) => {
                let (e0, t0) = self.synth(ctx, bound)?;
                let b2 = Self::under(ctx, var, t0, |ctx| self.check(ctx, body, t))?;
                Ok(Arc::new(Expr::Let { bound: e0, var: var.clone(), body: b2 }))
            }
            (Expr::Rec { scrut, branches, ann }, _) => {
                if let Some(a) = ann {
                    if a != t {
                        return Err(mismatch(t, a, e));
                    }
                }
                let (s2, ts) = self.synth(ctx, scrut)?;
                let bs = self.check_branches(ctx, e, &ts, branches, t)?;
                Ok(Arc::new(Expr::Rec { scrut: s2, branches: bs.into(), ann: Some(t.clone()) }))
            }
            (Expr::Map { functor, var, ann, body, target }, _) => {
                let (e2, _) = self.map(ctx, e, functor, var, ann, body, target, Some(t))?;
                Ok(e2)
            }
            _ => {
                let (e2, actual) = self.synth(ctx, e)?;
                if &actual != t {
                    return Err(mismatch(t, actual, e));
                }
                Ok(e2)
            }
        }
    }

    fn data_of<'a>(&self, ts: &'a Type, scrut: &Expr) -> Result<&'a Ident, TypeError> {
        match ts {
            Type::Data(d) => Ok(d),
            t => Err(mismatch("a datatype", t, scrut)),
        }
    }

    /// Infers a recursor's result type from a branch whose variable type does
    /// not depend on it (a branch with no recursive positions).
    fn rec_result(&self, ctx: &mut Ctx, e: &Expr, ts: &Type, branches: &[Branch]) -> Result<Type, TypeError> {
        let Expr::Rec { scrut, .. } = e else { unreachable!() };
        let d = self.data_of(ts, scrut)?;
        for b in branches {
            let info = self.sig.ctor(b.ctor.as_str()).ok_or_else(|| TypeError::UnknownCtor(b.ctor.to_string()))?;
            if info.datatype != d || info.arg.has_self() {
                continue;
            }
            let xt = info.arg.apply(&Type::Unit);
            if let Ok((_, t)) = Self::under(ctx, &b.var, xt, |ctx| self.synth(ctx, &b.body)) {
                return Ok(t);
            }
        }
        Err(TypeError::NeedsAnnotation(short(e)))
    }

    fn check_branches(&self, ctx: &mut Ctx, e: &Expr, ts: &Type, branches: &[Branch], result: &Type) -> Result<Vec<Branch>, TypeError> {
        let Expr::Rec { scrut, .. } = e else { unreachable!() };
        let d = self.data_of(ts, scrut)?;
        let decl = self.sig.datatype(d.as_str()).ok_or_else(|| TypeError::UnknownDatatype(d.to_string()))?;
        let malformed = |reason: String| TypeError::Malformed { term: short(e), reason };
        for b in branches {
            if !decl.ctors.iter().any(|c| c.name == b.ctor) {
                return Err(malformed(format!("`{}` is not a constructor of `{d}`", b.ctor)));
            }
        }
        for c in &decl.ctors {
            match branches.iter().filter(|b| b.ctor == c.name).count() {
                1 => {}
                0 => return Err(malformed(format!("missing branch for `{}`", c.name))),
                _ => return Err(malformed(format!("duplicate branch for `{}`", c.name))),
            }
        }
        let inner = Type::prod(ts.clone(), Type::susp(result.clone()));
        branches
            .iter()
            .map(|b| {
                let c = decl.ctors.iter().find(|c| c.name == b.ctor).expect("checked above");
                let body = Self::under(ctx, &b.var, c.arg.apply(&inner), |ctx| self.check(ctx, &b.body, result))?;
                Ok(Branch { ctor: b.ctor.clone(), var: b.var.clone(), body })
            })
            .collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn map(
        &self,
        ctx: &mut Ctx,
        e: &Expr,
        functor: &Functor,
        var: &Ident,
        ann: &Option<Type>,
        body: &Arc<Expr>,
        target: &Arc<Expr>,
        expected: Option<&Type>,
    ) -> Result<(Arc<Expr>, Type), TypeError> {
        let malformed = |reason: &str| TypeError::Malformed { term: short(e), reason: reason.into() };
        if !body.is_value_form() || !target.is_value_form() {
            return Err(malformed("map operands must be syntactic values or variables"));
        }
        let (t2, tt) = self.synth(ctx, target)?;
        let from = match (ann, match_functor(functor, &tt)) {
            (_, None) => return Err(mismatch(format!("an instance of [{functor}]"), &tt, target)),
            (Some(a), Some(Some(m))) if *a != m => return Err(mismatch(&m, a, e)),
            (Some(a), _) => a.clone(),
            (None, Some(Some(m))) => m,
            (None, Some(None)) => Type::Unit,
        };
        let to = expected.and_then(|t| match_functor(functor, t)).flatten();
        let (b2, tb) = Self::under(ctx, var, from.clone(), |ctx| match &to {
            Some(to) => self.check(ctx, body, to).map(|b| (b, to.clone())),
            None => self.synth(ctx, body),
        })?;
        let result = functor.apply(&tb);
        if let Some(t) = expected {
            if *t != result {
                return Err(mismatch(t, &result, e));
            }
        }
        let node = Expr::Map { functor: functor.clone(), var: var.clone(), ann: Some(from), body: b2, target: t2 };
        Ok((Arc::new(node), result))
    }
}

/// Finds τ with φ[τ] = t. `Some(None)` means any τ works (φ has no `self`).
pub fn match_functor(f: &Functor, t: &Type) -> Option<Option<Type>> {
    match (f, t) {
        (Functor::SelfRef, t) => Some(Some(t.clone())),
        (Functor::Const(c), t) => (c == t).then_some(None),
        (Functor::Prod(a, b), Type::Prod(ta, tb)) => merge(match_functor(a, ta)?, match_functor(b, tb)?),
        (Functor::Arrow(d, b), Type::Arrow(td, tb)) if d == &**td => match_functor(b, tb),
        _ => None,
    }
}

fn merge(a: Option<Type>, b: Option<Type>) -> Option<Option<Type>> {
    match (a, b) {
        (Some(x), Some(y)) => (x == y).then_some(Some(x)),
        (x, None) | (None, x) => Some(x),
    }
}

#[derive(Clone, Debug)]
pub struct CheckedDef {
    pub name: Ident,
    pub ty: Type,
    /// Elaborated body; may mention earlier definitions by name.
    pub body: Arc<Expr>,
    /// Elaborated body with all earlier definitions inlined; closed.
    pub closed: Arc<Expr>,
}

/// A program whose signature is well formed and whose definitions typecheck.
#[derive(Clone, Debug)]
pub struct CheckedProgram {
    pub signature: Signature,
    pub defs: Vec<CheckedDef>,
}

pub fn check_program(p: &Program) -> Result<CheckedProgram, Error> {
    wf_signature(&p.signature).map_err(|vs| Error::Signature(vs.iter().map(|v| v.to_string()).collect()))?;
    let mut out = CheckedProgram { signature: p.signature.clone(), defs: Vec::new() };
    for d in &p.defs {
        let in_def = |inner: TypeError| TypeError::InDef { def: d.name.to_string(), inner: Box::new(inner) };
        let (body, ty) = match &d.ann {
            Some(t) => {
                TypeChecker::new(&out.signature).wf_type(t).map_err(in_def)?;
                (out.elaborate_against(&d.body, t).map_err(in_def)?, t.clone())
            }
            None => out.elaborate_open(&d.body).map_err(in_def)?,
        };
        let closed = out.inline(&body);
        out.defs.push(CheckedDef { name: d.name.clone(), ty, body, closed });
    }
    Ok(out)
}

impl CheckedProgram {
    pub fn def(&self, name: &str) -> Option<&CheckedDef> {
        self.defs.iter().rev().find(|d| d.name.as_str() == name)
    }

    fn ctx(&self) -> Ctx {
        self.defs.iter().map(|d| (d.name.clone(), d.ty.clone())).collect()
    }

    fn elaborate_open(&self, e: &Arc<Expr>) -> Result<(Arc<Expr>, Type), TypeError> {
        TypeChecker::new(&self.signature).synth(&mut self.ctx(), e)
    }

    fn elaborate_against(&self, e: &Arc<Expr>, t: &Type) -> Result<Arc<Expr>, TypeError> {
        TypeChecker::new(&self.signature).check(&mut self.ctx(), e, t)
    }

    /// Replaces references to definitions by their closed bodies.
    pub fn inline(&self, e: &Arc<Expr>) -> Arc<Expr> {
        let fv = free_vars(e);
        let mut seen = HashSet::new();
        let mut out = e.clone();
        for d in self.defs.iter().rev() {
            if fv.contains(&d.name) && seen.insert(d.name.clone()) {
                out = subst(&out, &[(d.name.clone(), d.closed.clone())]);
            }
        }
        out
    }

    /// Typechecks `e` with the definitions in scope and returns the closed,
    /// elaborated term together with its type.
    pub fn elaborate(&self, e: &Arc<Expr>) -> Result<(Arc<Expr>, Type), TypeError> {
        let (e2, t) = self.elaborate_open(e)?;
        Ok((self.inline(&e2), t))
    }

    pub fn elaborate_checked(&self, e: &Arc<Expr>, t: &Type) -> Result<Arc<Expr>, TypeError> {
        let e2 = self.elaborate_against(e, t)?;
        Ok(self.inline(&e2))
    }

    pub fn expr(&self, text: &str) -> Result<(Arc<Expr>, Type), Error> {
        let e = parse_expr(text)?;
        Ok(self.elaborate(&e)?)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_program, parse_type};
    use super::*;

    const NAT: &str = "datatype nat = Zero of unit | Succ of self;";

    fn sig(s: &str) -> Signature {
        parse_program(s).unwrap().signature
    }

    #[test]
    fn identity_needs_annotation() {
        let s = Signature::default();
        let tc = TypeChecker::new(&s);
        let id = parse_expr("fn x. x").unwrap();
        assert!(matches!(tc.typecheck(&vec![], &id), Err(TypeError::NeedsAnnotation(_))));
        let t = parse_type("unit -> unit").unwrap();
        let e = tc.check(&mut vec![], &id, &t).unwrap();
        assert_eq!(e.to_string(), "fn x : unit. x");
    }

    #[test]
    fn force_delay() {
        let s = Signature::default();
        let t = TypeChecker::new(&s).typecheck(&vec![], &parse_expr("force (delay ())").unwrap()).unwrap();
        assert_eq!(t, Type::Unit);
    }

    #[test]
    fn rec_branch_variable_type() {
        let s = sig(NAT);
        let tc = TypeChecker::new(&s);
        // p : nat * susp nat in the Succ branch.
        let e = parse_expr("rec(Zero(); Zero -> u. Zero() | Succ -> p. split p as (a, r) in force r)").unwrap();
        assert_eq!(tc.typecheck(&vec![], &e).unwrap(), Type::data("nat"));
        let bad = parse_expr("rec(Zero(); Zero -> u. Zero() | Succ -> p. p)").unwrap();
        assert!(tc.typecheck(&vec![], &bad).is_err());
    }

    #[test]
    fn branch_coverage() {
        let s = sig(NAT);
        let tc = TypeChecker::new(&s);
        let e = parse_expr("rec(Zero(); Zero -> u. ())").unwrap();
        assert!(matches!(tc.typecheck(&vec![], &e), Err(TypeError::Malformed { .. })));
    }

    #[test]
    fn program_defs_inline() {
        let p = parse_program(&format!("{NAT} def succ : nat -> nat = fn n. Succ(n); def two = succ (succ Zero());")).unwrap();
        let c = check_program(&p).unwrap();
        assert_eq!(c.def("two").unwrap().ty, Type::data("nat"));
        assert!(free_vars(&c.def("two").unwrap().closed).is_empty());
    }

    #[test]
    fn mem_type() {
        let src = "datatype bool = True of unit | False of unit; import int;
            datatype tree = Emp of unit | Node of int * self * self;
            def orelse : bool -> susp bool -> bool = fn a. fn b. rec(a; True -> u. True() | False -> u. force b);
            def mem : tree -> int -> bool = fn t. rec(t;
                Emp -> u. fn x. False()
              | Node -> (y, (t0, r0), (t1, r1)). fn x.
                  orelse (inteq (x, y)) (delay (orelse (force r0 x) (delay (force r1 x)))));";
        let c = check_program(&parse_program(src).unwrap()).unwrap();
        assert_eq!(c.def("mem").unwrap().ty.to_string(), "tree -> int -> bool");
    }

    #[test]
    fn map_elaborates() {
        let s = sig(NAT);
        let tc = TypeChecker::new(&s);
        let e = parse_expr("map[self * unit](x. Succ(x); (Zero(), ()))").unwrap();
        assert_eq!(tc.typecheck(&vec![], &e).unwrap().to_string(), "nat * unit");
        let bad = parse_expr("map[self](x. Succ(x); let y = Zero() in y)").unwrap();
        assert!(tc.typecheck(&vec![], &bad).is_err());
    }
}
