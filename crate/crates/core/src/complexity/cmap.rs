use std::sync::Arc;

use super::{csubst, free_cvars, CExpr, CFunctor};
use crate::ident::{fresh_name, Ident};

/// The functorial action of Φ as a macro: applies `x. body` at the recursive
/// positions of `target`.
pub fn cmap_expand(functor: &CFunctor, x: &Ident, body: &Arc<CExpr>, target: &Arc<CExpr>) -> Arc<CExpr> {
    match functor {
        CFunctor::SelfRef => csubst(body, &[(x.clone(), target.clone())]),
        CFunctor::Const(_) => target.clone(),
        CFunctor::Prod(a, b) => CExpr::pair(
            cmap_expand(a, x, body, &CExpr::fst(target.clone())),
            cmap_expand(b, x, body, &CExpr::snd(target.clone())),
        ),
        CFunctor::Arrow(dom, cod) => {
            let mut avoid = free_cvars(body);
            avoid.remove(x);
            avoid.extend(free_cvars(target));
            let y = fresh_name("y", |n| avoid.iter().any(|v| v.as_str() == n));
            let inner = cmap_expand(cod, x, body, &CExpr::app(target.clone(), CExpr::var(&y)));
            CExpr::lam(y, Some(dom.clone()), inner)
        }
    }
}
