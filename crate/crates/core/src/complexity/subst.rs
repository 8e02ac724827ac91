use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::{CBranch, CExpr};
use crate::ident::{fresh_name, Ident};

/// Free-variable sets, memoized per shared node.
#[derive(Default)]
pub(crate) struct FvCache {
    memo: HashMap<usize, (Arc<CExpr>, Arc<HashSet<Ident>>)>,
}

impl FvCache {
    pub(crate) fn get(&mut self, e: &Arc<CExpr>) -> Arc<HashSet<Ident>> {
        let k = Arc::as_ptr(e) as usize;
        if let Some((_, s)) = self.memo.get(&k) {
            return s.clone();
        }
        let mut s = HashSet::new();
        match &**e {
            CExpr::Var(x) => {
                s.insert(x.clone());
            }
            CExpr::Plus(a, b) | CExpr::Pair(a, b) | CExpr::App(a, b) => {
                s.extend(self.get(a).iter().cloned());
                s.extend(self.get(b).iter().cloned());
            }
            CExpr::Fst(a) | CExpr::Snd(a) | CExpr::Con(_, a) => s.extend(self.get(a).iter().cloned()),
            CExpr::Lam { var, body, .. } => {
                s.extend(self.get(body).iter().filter(|v| *v != var).cloned());
            }
            CExpr::Rec { scrut, branches, .. } => {
                s.extend(self.get(scrut).iter().cloned());
                for b in branches.iter() {
                    s.extend(self.get(&b.body).iter().filter(|v| **v != b.var).cloned());
                }
            }
            CExpr::Zero | CExpr::One | CExpr::Num(_) | CExpr::Unit => {}
        }
        let s = Arc::new(s);
        self.memo.insert(k, (e.clone(), s.clone()));
        s
    }
}

pub fn free_cvars(e: &Arc<CExpr>) -> HashSet<Ident> {
    (*FvCache::default().get(e)).clone()
}

/// Capture-avoiding simultaneous substitution. Unchanged subterms are
/// returned by reference, so sharing in the input survives.
pub fn csubst(e: &Arc<CExpr>, pairs: &[(Ident, Arc<CExpr>)]) -> Arc<CExpr> {
    let mut fv = FvCache::default();
    subst_with(e, pairs, &mut fv)
}

pub(crate) fn subst_with(e: &Arc<CExpr>, pairs: &[(Ident, Arc<CExpr>)], fv: &mut FvCache) -> Arc<CExpr> {
    assert!(pairs.len() < 64, "too many simultaneous substitutions");
    if pairs.is_empty() {
        return e.clone();
    }
    let repl_fv = pairs.iter().map(|(_, r)| fv.get(r)).collect();
    let mut s = Subst { pairs, repl_fv, memo: HashMap::new() };
    s.go(e, (1u64 << pairs.len()) - 1, fv)
}

struct Subst<'a> {
    pairs: &'a [(Ident, Arc<CExpr>)],
    repl_fv: Vec<Arc<HashSet<Ident>>>,
    // Keys hold the node alive so its address cannot be reused.
    memo: HashMap<(usize, u64), (Arc<CExpr>, Arc<CExpr>)>,
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

    /// Drops pairs whose variable does not occur free in `e`.
    fn relevant(&self, mask: u64, e: &Arc<CExpr>, fv: &mut FvCache) -> u64 {
        let f = fv.get(e);
        let mut m = mask;
        for (i, (y, _)) in self.pairs.iter().enumerate() {
            if m & (1 << i) != 0 && !f.contains(y) {
                m &= !(1 << i);
            }
        }
        m
    }

    fn captures(&self, mask: u64, x: &Ident) -> bool {
        (0..self.pairs.len()).any(|i| mask & (1 << i) != 0 && self.repl_fv[i].contains(x))
    }

    /// Renames binder `x` in `body` if it would capture a replacement.
    fn binder(&mut self, x: &Ident, body: &Arc<CExpr>, mask: u64, fv: &mut FvCache) -> (Ident, Arc<CExpr>, u64) {
        let m = self.relevant(self.without(mask, x), body, fv);
        if m == 0 || !self.captures(m, x) {
            return (x.clone(), body.clone(), m);
        }
        let body_fv = fv.get(body);
        let z = fresh_name(x.as_str().trim_start_matches('_'), |n| {
            body_fv.iter().any(|v| v.as_str() == n)
                || (0..self.pairs.len()).any(|i| m & (1 << i) != 0 && (self.repl_fv[i].iter().any(|v| v.as_str() == n) || self.pairs[i].0.as_str() == n))
        });
        let renamed = subst_with(body, &[(x.clone(), CExpr::var(&z))], fv);
        (z, renamed, m)
    }

    fn go(&mut self, e: &Arc<CExpr>, mask: u64, fv: &mut FvCache) -> Arc<CExpr> {
        let mask = self.relevant(mask, e, fv);
        if mask == 0 {
            return e.clone();
        }
        let key = (Arc::as_ptr(e) as usize, mask);
        if let Some((_, r)) = self.memo.get(&key) {
            return r.clone();
        }
        let r = match &**e {
            CExpr::Var(x) => {
                let i = (0..self.pairs.len()).rev().find(|&i| mask & (1 << i) != 0 && &self.pairs[i].0 == x);
                i.map(|i| self.pairs[i].1.clone()).unwrap_or_else(|| e.clone())
            }
            CExpr::Plus(a, b) => CExpr::plus(self.go(a, mask, fv), self.go(b, mask, fv)),
            CExpr::Pair(a, b) => CExpr::pair(self.go(a, mask, fv), self.go(b, mask, fv)),
            CExpr::App(a, b) => CExpr::app(self.go(a, mask, fv), self.go(b, mask, fv)),
            CExpr::Fst(a) => CExpr::fst(self.go(a, mask, fv)),
            CExpr::Snd(a) => CExpr::snd(self.go(a, mask, fv)),
            CExpr::Con(c, a) => CExpr::con(c.clone(), self.go(a, mask, fv)),
            CExpr::Lam { var, ann, body } => {
                let (z, body, m) = self.binder(var, body, mask, fv);
                CExpr::lam(z, ann.clone(), self.go(&body, m, fv))
            }
            CExpr::Rec { scrut, branches, ann } => {
                let scrut = self.go(scrut, mask, fv);
                let branches: Vec<CBranch> = branches
                    .iter()
                    .map(|b| {
                        let (z, body, m) = self.binder(&b.var, &b.body, mask, fv);
                        CBranch { ctor: b.ctor.clone(), var: z, body: self.go(&body, m, fv) }
                    })
                    .collect();
                Arc::new(CExpr::Rec { scrut, branches: branches.into(), ann: ann.clone() })
            }
            CExpr::Zero | CExpr::One | CExpr::Num(_) | CExpr::Unit => e.clone(),
        };
        self.memo.insert(key, (e.clone(), r.clone()));
        r
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_cexpr;
    use super::*;

    fn sub(e: &str, x: &str, r: &str) -> String {
        csubst(&parse_cexpr(e).unwrap(), &[(Ident::new(x), parse_cexpr(r).unwrap())]).to_string()
    }

    #[test]
    fn avoids_capture() {
        assert_eq!(sub("fn y. (x, y)", "x", "y"), "fn y1. (y, y1)");
        assert_eq!(sub("fn x. x", "x", "1"), "fn x. x");
        assert_eq!(sub("rec(n; Z -> y. x + y)", "x", "fst y"), "rec(n; Z -> y1. fst y + y1)");
    }

    #[test]
    fn simultaneous() {
        let e = parse_cexpr("(a, b)").unwrap();
        let r = csubst(&e, &[(Ident::new("a"), parse_cexpr("b").unwrap()), (Ident::new("b"), parse_cexpr("a").unwrap())]);
        assert_eq!(r.to_string(), "(b, a)");
    }

    #[test]
    fn shares_untouched() {
        let e = parse_cexpr("(fn y. y, x)").unwrap();
        let r = csubst(&e, &[(Ident::new("x"), CExpr::unit())]);
        let (CExpr::Pair(a, _), CExpr::Pair(b, _)) = (&*e, &*r) else { panic!() };
        assert!(Arc::ptr_eq(a, b));
        assert_eq!(free_cvars(&r).len(), 0);
    }
}
