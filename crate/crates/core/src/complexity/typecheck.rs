use std::collections::{HashMap, HashSet};
use std::rc::Rc;
use std::sync::Arc;

use super::print::tree_size;
use super::{CBranch, CExpr, CSignature, CType};
use crate::error::TypeError;
use crate::ident::Ident;

pub(crate) fn short(e: &Arc<CExpr>) -> String {
    if tree_size(e) > 400 {
        return format!("<term with {} shared nodes>", e.dag_size());
    }
    let s = e.to_string();
    if s.chars().count() > 100 {
        format!("{}...", s.chars().take(97).collect::<String>())
    } else {
        s
    }
}

fn mismatch(expected: impl ToString, actual: impl ToString, e: &Arc<CExpr>) -> TypeError {
    TypeError::Mismatch { expected: expected.to_string(), actual: actual.to_string(), term: short(e) }
}

struct Node {
    name: Ident,
    ty: CType,
    next: Ctx,
}

type Ctx = Option<Rc<Node>>;

fn ptr(c: &Ctx) -> usize {
    c.as_ref().map_or(0, |n| Rc::as_ptr(n) as usize)
}

/// Typechecks `e` in context `ctx` (later entries shadow earlier ones).
pub fn ctypecheck(csig: &CSignature, ctx: &[(Ident, CType)], e: &Arc<CExpr>) -> Result<CType, TypeError> {
    let mut tc = CTypeChecker::new(csig);
    let c = tc.context(ctx);
    tc.synth(&c, e)
}

/// A typechecker with memo tables; reuse it across calls on terms that share structure.
pub struct CTypeChecker<'s> {
    csig: &'s CSignature,
    synth_memo: HashMap<(usize, usize), CType>,
    check_memo: HashSet<(usize, usize, CType)>,
    keep: Vec<(Arc<CExpr>, Ctx)>,
}

impl<'s> CTypeChecker<'s> {
    pub fn new(csig: &'s CSignature) -> Self {
        CTypeChecker { csig, synth_memo: HashMap::new(), check_memo: HashSet::new(), keep: Vec::new() }
    }

    fn context(&self, ctx: &[(Ident, CType)]) -> Ctx {
        ctx.iter().fold(None, |next, (n, t)| Some(Rc::new(Node { name: n.clone(), ty: t.clone(), next })))
    }

    pub fn check_closed(&mut self, e: &Arc<CExpr>, t: &CType) -> Result<(), TypeError> {
        self.check(&None, e, t)
    }

    fn lookup(ctx: &Ctx, x: &Ident) -> Result<CType, TypeError> {
        let mut c = ctx;
        while let Some(n) = c {
            if &n.name == x {
                return Ok(n.ty.clone());
            }
            c = &n.next;
        }
        Err(TypeError::UnknownVar(x.to_string()))
    }

    fn extend(ctx: &Ctx, x: &Ident, t: CType) -> Ctx {
        Some(Rc::new(Node { name: x.clone(), ty: t, next: ctx.clone() }))
    }

    fn synth(&mut self, ctx: &Ctx, e: &Arc<CExpr>) -> Result<CType, TypeError> {
        let key = (Arc::as_ptr(e) as usize, ptr(ctx));
        if let Some(t) = self.synth_memo.get(&key) {
            return Ok(t.clone());
        }
        let t = self.synth_raw(ctx, e)?;
        self.keep.push((e.clone(), ctx.clone()));
        self.synth_memo.insert(key, t.clone());
        Ok(t)
    }

    fn synth_raw(&mut self, ctx: &Ctx, e: &Arc<CExpr>) -> Result<CType, TypeError> {
        match &**e {
            CExpr::Var(x) => Self::lookup(ctx, x),
            CExpr::Zero | CExpr::One | CExpr::Num(_) => Ok(CType::Cost),
            CExpr::Plus(a, b) => {
                self.check(ctx, a, &CType::Cost)?;
                self.check(ctx, b, &CType::Cost)?;
                Ok(CType::Cost)
            }
            CExpr::Unit => Ok(CType::Unit),
            CExpr::Pair(a, b) => Ok(CType::prod(self.synth(ctx, a)?, self.synth(ctx, b)?)),
            CExpr::Fst(a) | CExpr::Snd(a) => match self.synth(ctx, a)? {
                CType::Prod(x, y) => Ok(if matches!(**e, CExpr::Fst(_)) { *x } else { *y }),
                t => Err(mismatch("a product", t, a)),
            },
            CExpr::Lam { var, ann: Some(d), body } => {
                let c = Self::extend(ctx, var, d.clone());
                Ok(CType::arrow(d.clone(), self.synth(&c, body)?))
            }
            CExpr::Lam { ann: None, .. } => Err(TypeError::NeedsAnnotation(short(e))),
            CExpr::App(f, a) => match self.synth(ctx, f)? {
                CType::Arrow(d, c) => {
                    self.check(ctx, a, &d)?;
                    Ok(*c)
                }
                t => Err(mismatch("a function", t, f)),
            },
            CExpr::Con(c, a) => {
                let info = self.csig.ctor(c.as_str()).ok_or_else(|| TypeError::UnknownCtor(c.to_string()))?;
                let dt = CType::Data(info.datatype.clone());
                self.check(ctx, a, &info.arg.apply(&dt))?;
                Ok(dt)
            }
            CExpr::Rec { scrut, branches, ann } => {
                let dt = self.synth(ctx, scrut)?;
                let result = match ann {
                    Some(t) => t.clone(),
                    None => self.rec_result(ctx, e, &dt, branches)?,
                };
                self.branches(ctx, e, &dt, branches, &result)?;
                Ok(result)
            }
        }
    }

    fn check(&mut self, ctx: &Ctx, e: &Arc<CExpr>, t: &CType) -> Result<(), TypeError> {
        let key = (Arc::as_ptr(e) as usize, ptr(ctx), t.clone());
        if self.check_memo.contains(&key) {
            return Ok(());
        }
        match (&**e, t) {
            (CExpr::Lam { var, ann, body }, CType::Arrow(d, c)) => {
                if ann.as_ref().is_some_and(|a| a != &**d) {
                    return Err(mismatch(t, ann.as_ref().unwrap(), e));
                }
                let cx = Self::extend(ctx, var, (**d).clone());
                self.check(&cx, body, c)?;
            }
            (CExpr::Pair(a, b), CType::Prod(ta, tb)) => {
                self.check(ctx, a, ta)?;
                self.check(ctx, b, tb)?;
            }
            (CExpr::Rec { scrut, branches, ann }, _) => {
                if ann.as_ref().is_some_and(|a| a != t) {
                    return Err(mismatch(t, ann.as_ref().unwrap(), e));
                }
                let dt = self.synth(ctx, scrut)?;
                self.branches(ctx, e, &dt, branches, t)?;
            }
            _ => {
                let actual = self.synth(ctx, e)?;
                if &actual != t {
                    return Err(mismatch(t, actual, e));
                }
            }
        }
        self.keep.push((e.clone(), ctx.clone()));
        self.check_memo.insert(key);
        Ok(())
    }

    fn rec_result(&mut self, ctx: &Ctx, e: &Arc<CExpr>, dt: &CType, branches: &[CBranch]) -> Result<CType, TypeError> {
        let CType::Data(d) = dt else { return Err(mismatch("a datatype", dt, e)) };
        for b in branches {
            let Some(info) = self.csig.ctor(b.ctor.as_str()) else { continue };
            if info.datatype != d || info.arg.has_self() {
                continue;
            }
            let c = Self::extend(ctx, &b.var, info.arg.apply(&CType::Unit));
            if let Ok(t) = self.synth(&c, &b.body) {
                return Ok(t);
            }
        }
        Err(TypeError::NeedsAnnotation(short(e)))
    }

    fn branches(&mut self, ctx: &Ctx, e: &Arc<CExpr>, dt: &CType, branches: &[CBranch], result: &CType) -> Result<(), TypeError> {
        let CType::Data(d) = dt else { return Err(mismatch("a datatype", dt, e)) };
        let decl = self.csig.datatype(d.as_str()).ok_or_else(|| TypeError::UnknownDatatype(d.to_string()))?;
        let malformed = |reason: String| TypeError::Malformed { term: short(e), reason };
        if branches.len() != decl.ctors.len() {
            return Err(malformed(format!("expected {} branches, found {}", decl.ctors.len(), branches.len())));
        }
        let inner = CType::prod(dt.clone(), result.clone());
        for c in &decl.ctors {
            let mut it = branches.iter().filter(|b| b.ctor == c.name);
            let (Some(b), None) = (it.next(), it.next()) else {
                return Err(malformed(format!("need exactly one branch for `{}`", c.name)));
            };
            let cx = Self::extend(ctx, &b.var, c.arg.apply(&inner));
            self.check(&cx, &b.body, result)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_cexpr, CFunctor};
    use super::*;
    use crate::sig::{CtorDecl, DataDecl};

    fn nat() -> CSignature {
        CSignature::new(vec![DataDecl {
            name: Ident::new("nat"),
            ctors: vec![
                CtorDecl { name: Ident::new("Zero"), arg: CFunctor::Const(CType::Unit) },
                CtorDecl { name: Ident::new("Succ"), arg: CFunctor::SelfRef },
            ],
        }])
    }

    fn ty(s: &str) -> Result<CType, TypeError> {
        let x = (Ident::new("x"), CType::Unit);
        ctypecheck(&nat(), &[x], &parse_cexpr(s).unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(ty("0 + 1").unwrap(), CType::Cost);
        assert_eq!(ty("(0, ())").unwrap().to_string(), "cost * unit");
        assert_eq!(ty("fst (1, x)").unwrap(), CType::Cost);
        assert!(ty("1 + ()").is_err());
        assert!(ty("y").is_err());
    }

    #[test]
    fn rec_variable_type() {
        // The Succ branch sees p : nat * cost.
        assert_eq!(ty("rec(Succ(Zero()); Zero -> u. 0 | Succ -> p. 1 + snd p)").unwrap(), CType::Cost);
        assert!(ty("rec(Zero(); Zero -> u. 0)").is_err());
        assert_eq!(ty("rec[cost](Zero(); Zero -> u. 0 | Succ -> p. snd p)").unwrap(), CType::Cost);
    }
}
