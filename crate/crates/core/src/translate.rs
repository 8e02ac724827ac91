//! The cost-explicit translation from source to complexity language. Every
//! source expression becomes a (cost, potential) pair.

use std::collections::HashMap;
use std::sync::Arc;

use crate::complexity::{cmap_expand, csubst, CBranch, CExpr, CFunctor, CSignature, CType};
use crate::source::{Expr, Functor, Signature, Type};

/// ⟨⟨τ⟩⟩, the potential type of `t`.
pub fn potential_type(t: &Type) -> CType {
    match t {
        Type::Unit => CType::Unit,
        Type::Prod(a, b) => CType::prod(potential_type(a), potential_type(b)),
        Type::Arrow(a, b) => CType::arrow(potential_type(a), complexity_type(b)),
        Type::Susp(a) => complexity_type(a),
        Type::Data(d) => CType::Data(d.clone()),
    }
}

/// ‖τ‖ = C × ⟨⟨τ⟩⟩.
pub fn complexity_type(t: &Type) -> CType {
    CType::complexity(potential_type(t))
}

/// Both translations of a type: (complexity, potential).
pub fn translate_type(t: &Type) -> (CType, CType) {
    (complexity_type(t), potential_type(t))
}

pub fn translate_functor(f: &Functor) -> CFunctor {
    match f {
        Functor::SelfRef => CFunctor::SelfRef,
        Functor::Const(t) => CFunctor::Const(potential_type(t)),
        Functor::Prod(a, b) => CFunctor::Prod(Box::new(translate_functor(a)), Box::new(translate_functor(b))),
        Functor::Arrow(d, b) => CFunctor::Arrow(
            potential_type(d),
            Box::new(CFunctor::Prod(Box::new(CFunctor::Const(CType::Cost)), Box::new(translate_functor(b)))),
        ),
    }
}

pub fn translate_sig(sig: &Signature) -> CSignature {
    sig.map(translate_functor)
}

#[derive(Clone, Debug)]
pub struct TranslationOutput {
    pub cexpr: Arc<CExpr>,
    pub ctype: CType,
}

/// Translates an elaborated expression of type `t`.
pub fn translate_typed(e: &Arc<Expr>, t: &Type) -> TranslationOutput {
    TranslationOutput { cexpr: translate_expr(e), ctype: complexity_type(t) }
}

/// ⟦e⟧. The input should be elaborated so that binders carry annotations.
pub fn translate_expr(e: &Arc<Expr>) -> Arc<CExpr> {
    Translator::default().go(e)
}

/// E1 +_c E2 = (E1 + π0 E2, π1 E2).
pub fn plus_c(c: Arc<CExpr>, e: &Arc<CExpr>) -> Arc<CExpr> {
    CExpr::pair(CExpr::plus(c, CExpr::fst(e.clone())), CExpr::snd(e.clone()))
}

/// A translator whose memo table can be reused across calls; the
/// translations of shared source nodes are then shared too.
#[derive(Default)]
pub struct Translator {
    memo: HashMap<usize, (Arc<Expr>, Arc<CExpr>)>,
}

impl Translator {
    pub fn go(&mut self, e: &Arc<Expr>) -> Arc<CExpr> {
        let k = Arc::as_ptr(e) as usize;
        if let Some((_, t)) = self.memo.get(&k) {
            return t.clone();
        }
        let t = self.step(e);
        self.memo.insert(k, (e.clone(), t.clone()));
        t
    }

    fn step(&mut self, e: &Arc<Expr>) -> Arc<CExpr> {
        let cost = |t: &Arc<CExpr>| CExpr::fst(t.clone());
        let pot = |t: &Arc<CExpr>| CExpr::snd(t.clone());
        match &**e {
            Expr::Var(x) => CExpr::pair(CExpr::zero(), CExpr::var(x)),
            Expr::Unit => CExpr::pair(CExpr::zero(), CExpr::unit()),
            Expr::Pair(a, b) => {
                let (ta, tb) = (self.go(a), self.go(b));
                CExpr::pair(CExpr::plus(cost(&ta), cost(&tb)), CExpr::pair(pot(&ta), pot(&tb)))
            }
            Expr::Split { scrut, left, right, body } => {
                let t0 = self.go(scrut);
                let t1 = self.go(body);
                let p0 = pot(&t0);
                let pairs = if left == right {
                    vec![(right.clone(), CExpr::snd(p0))]
                } else {
                    vec![(left.clone(), CExpr::fst(p0.clone())), (right.clone(), CExpr::snd(p0))]
                };
                plus_c(cost(&t0), &csubst(&t1, &pairs))
            }
            Expr::Lam { var, ann, body } => {
                let tb = self.go(body);
                CExpr::pair(CExpr::zero(), CExpr::lam(var.clone(), ann.as_ref().map(potential_type), tb))
            }
            Expr::App(f, a) => {
                let (tf, ta) = (self.go(f), self.go(a));
                let c = CExpr::plus(CExpr::plus(CExpr::one(), cost(&tf)), cost(&ta));
                plus_c(c, &CExpr::app(pot(&tf), pot(&ta)))
            }
            Expr::Delay(a) => CExpr::pair(CExpr::zero(), self.go(a)),
            Expr::Force(a) => {
                let t = self.go(a);
                plus_c(cost(&t), &pot(&t))
            }
            Expr::Con(c, a) => {
                let t = self.go(a);
                CExpr::pair(cost(&t), CExpr::con(c.clone(), pot(&t)))
            }
            Expr::Rec { scrut, branches, ann } => {
                let t = self.go(scrut);
                let bs: Vec<CBranch> = branches
                    .iter()
                    .map(|b| CBranch { ctor: b.ctor.clone(), var: b.var.clone(), body: plus_c(CExpr::one(), &self.go(&b.body)) })
                    .collect();
                let rec = Arc::new(CExpr::Rec { scrut: pot(&t), branches: bs.into(), ann: ann.as_ref().map(complexity_type) });
                plus_c(cost(&t), &rec)
            }
            Expr::Map { functor, var, body, target, .. } => {
                let (tb, tt) = (self.go(body), self.go(target));
                CExpr::pair(CExpr::zero(), cmap_expand(&translate_functor(functor), var, &pot(&tb), &pot(&tt)))
            }
            Expr::Let { bound, var, body } => {
                let t0 = self.go(bound);
                let t1 = self.go(body);
                plus_c(cost(&t0), &csubst(&t1, &[(var.clone(), pot(&t0))]))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::{ctypecheck, parse_ctype};
    use crate::source::{check_program, parse_expr, parse_program, parse_type};

    #[test]
    fn types() {
        assert_eq!(translate_type(&Type::Unit), (parse_ctype("cost * unit").unwrap(), CType::Unit));
        assert_eq!(potential_type(&parse_type("a -> b").unwrap()).to_string(), "a -> cost * b");
        assert_eq!(potential_type(&parse_type("susp a").unwrap()).to_string(), "cost * a");
    }

    #[test]
    fn signatures() {
        let p = parse_program(
            "datatype nat = Zero of unit | Succ of self; datatype list = Nil of unit | Cons of nat * self;
             datatype strm = Cons2 of unit -> nat * self;",
        )
        .unwrap();
        let cs = translate_sig(&p.signature);
        assert_eq!(cs.ctor("Succ").unwrap().arg, &CFunctor::SelfRef);
        assert_eq!(cs.ctor("Cons").unwrap().arg.to_string(), "nat * self");
        assert_eq!(cs.ctor("Cons2").unwrap().arg.to_string(), "unit -> cost * nat * self");
    }

    #[test]
    fn rows() {
        assert_eq!(translate_expr(&parse_expr("x").unwrap()).to_string(), "(0, x)");
        assert_eq!(translate_expr(&parse_expr("delay x").unwrap()).to_string(), "(0, 0, x)");
        assert_eq!(translate_expr(&parse_expr("force x").unwrap()).to_string(), "(fst (0, x) + fst snd (0, x), snd snd (0, x))");
        assert_eq!(translate_expr(&parse_expr("C(x)").unwrap()).to_string(), "(fst (0, x), C(snd (0, x)))");
    }

    #[test]
    fn preserves_types() {
        let src = "datatype nat = Zero of unit | Succ of self;
            def dbl : nat -> nat = fn n. rec(n; Zero -> u. Zero() | Succ -> (m, r). Succ(Succ(force r)));
            def main = split (dbl Succ(Zero()), ()) as (a, b) in let c = a in (c, map[self * unit](x. Succ(x); (a, b)));";
        let p = check_program(&parse_program(src).unwrap()).unwrap();
        let cs = translate_sig(&p.signature);
        for d in &p.defs {
            let out = translate_typed(&d.closed, &d.ty);
            assert_eq!(ctypecheck(&cs, &[], &out.cexpr).unwrap(), out.ctype, "{}", d.name);
        }
    }
}
