use std::fmt;
use std::sync::Arc;

use super::cost::{flatten, rebuild, Item};
use super::rewrite::{step_with, Positions};
use crate::complexity::{alpha_eq, CExpr, CFunctor, CSignature, CType};
use crate::error::ModelError;
use crate::ident::Ident;
use crate::size::ModelTable;

/// Default bound on rule applications along one derivation.
pub const LEQ_DEPTH: usize = 64;

/// Bound on the number of goals visited by one search.
const VISIT_LIMIT: usize = 200_000;

/// The length-quotient axioms for one list-shaped datatype:
/// `E ≤ Cons(_, E)` and the equation `Cons(E1, E) = Cons(E2, E)`, with
/// `Cons(x, 𝒞)` added to the congruence contexts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListAxioms {
    pub datatype: Ident,
    pub nil: Ident,
    pub cons: Ident,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomSet {
    pub lists: Vec<ListAxioms>,
}

impl AxiomSet {
    pub fn none() -> AxiomSet {
        AxiomSet::default()
    }

    /// The length-quotient axioms for every datatype the model table declares them for.
    pub fn from_models(models: &ModelTable) -> Result<AxiomSet, ModelError> {
        let mut out = AxiomSet::default();
        for d in &models.length_quotient {
            out.lists.push(list_axioms(models.csig(), d)?);
        }
        Ok(out)
    }

    fn cons(&self, c: &Ident) -> Option<&ListAxioms> {
        self.lists.iter().find(|l| &l.cons == c)
    }

    fn for_datatype_of(&self, csig: &CSignature, c: &Ident) -> Option<&ListAxioms> {
        let d = csig.ctor(c.as_str())?.datatype;
        self.lists.iter().find(|l| &l.datatype == d)
    }
}

/// Checks that `d` has a nullary constructor and one of the form `T * self`.
pub fn list_axioms(csig: &CSignature, d: &Ident) -> Result<ListAxioms, ModelError> {
    let unsupported = |reason: &str| ModelError::Unsupported { datatype: d.to_string(), model: "length-quotient".into(), reason: reason.into() };
    let decl = csig.datatype(d.as_str()).ok_or_else(|| ModelError::UnknownDatatype(d.to_string()))?;
    if decl.ctors.len() != 2 {
        return Err(unsupported("needs exactly two constructors"));
    }
    let mut nil = None;
    let mut cons = None;
    for c in &decl.ctors {
        match &c.arg {
            CFunctor::Const(CType::Unit) => nil = Some(c.name.clone()),
            CFunctor::Prod(a, b) if matches!(**a, CFunctor::Const(_)) && **b == CFunctor::SelfRef => cons = Some(c.name.clone()),
            _ => {}
        }
    }
    match (nil, cons) {
        (Some(nil), Some(cons)) => Ok(ListAxioms { datatype: d.clone(), nil, cons }),
        _ => Err(unsupported("expected constructors of the forms `unit` and `T * self`")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeqResult {
    Derivable,
    /// The search gave up; this is not a refutation.
    NotDerived,
}

impl fmt::Display for LeqResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LeqResult::Derivable => "derivable",
            LeqResult::NotDerived => "not-derived",
        })
    }
}

/// Searches for a derivation of `e0 ≤ e1` with the default depth.
pub fn leq(csig: &CSignature, axioms: &AxiomSet, e0: &Arc<CExpr>, e1: &Arc<CExpr>) -> LeqResult {
    leq_with_depth(csig, axioms, e0, e1, LEQ_DEPTH)
}

pub fn leq_with_depth(csig: &CSignature, axioms: &AxiomSet, e0: &Arc<CExpr>, e1: &Arc<CExpr>, depth: usize) -> LeqResult {
    let mut s = Search { csig, axioms, visits: 0 };
    if s.derive(e0, e1, depth) {
        LeqResult::Derivable
    } else {
        LeqResult::NotDerived
    }
}

struct Search<'a> {
    csig: &'a CSignature,
    axioms: &'a AxiomSet,
    visits: usize,
}

/// Rewrites the top-level `+` chain using only the unit and associativity laws.
fn monoid(e: &Arc<CExpr>) -> Arc<CExpr> {
    match &**e {
        CExpr::Plus(..) => {
            let mut items = Vec::new();
            flatten(e, &mut items);
            rebuild(items, false)
        }
        _ => e.clone(),
    }
}

fn summands(e: &Arc<CExpr>) -> Vec<Arc<CExpr>> {
    let mut items = Vec::new();
    flatten(e, &mut items);
    let mut merged = Vec::new();
    for it in items {
        match (merged.last_mut(), it) {
            (_, Item::Num(0)) => {}
            (Some(Item::Num(m)), Item::Num(k)) => *m += k,
            (_, it) => merged.push(it),
        }
    }
    merged
        .into_iter()
        .map(|it| match it {
            Item::Num(n) => CExpr::num(n),
            Item::Atom(a) => a,
        })
        .collect()
}

impl<'a> Search<'a> {
    fn derive(&mut self, e0: &Arc<CExpr>, e1: &Arc<CExpr>, depth: usize) -> bool {
        self.visits += 1;
        if self.visits > VISIT_LIMIT {
            return false;
        }
        let e0 = monoid(e0);
        let e1 = monoid(e1);
        // Reflexivity.
        if alpha_eq(&e0, &e1) {
            return true;
        }
        if depth == 0 {
            return false;
        }
        let d = depth - 1;
        if self.congruence(&e0, &e1, d) {
            return true;
        }
        if let CExpr::Con(c, arg) = &*e1 {
            if self.axioms.cons(c).is_some() {
                if let CExpr::Pair(_, tail) = &**arg {
                    // E ≤ Cons(_, E), then transitivity.
                    if self.derive(&e0, tail, d) {
                        return true;
                    }
                }
            }
        }
        if let CExpr::Rec { scrut, branches, ann } = &*e1 {
            // rec(S', ...) ≤ rec(S, ...) by congruence when S' ≤ S.
            for s2 in self.smaller_scrutinees(scrut) {
                if self.derive(&s2, scrut, d) {
                    let r2 = Arc::new(CExpr::Rec { scrut: s2, branches: branches.clone(), ann: ann.clone() });
                    if self.derive(&e0, &r2, d) {
                        return true;
                    }
                }
            }
        }
        // A step rule at a congruence position of the right side: its reduct is smaller.
        if let Some((e1r, _)) = step_with(self.csig, &e1, Positions::Congruence, false) {
            return self.derive(&e0, &e1r, d);
        }
        false
    }

    fn congruence(&mut self, e0: &Arc<CExpr>, e1: &Arc<CExpr>, d: usize) -> bool {
        match (&**e0, &**e1) {
            (CExpr::Fst(a), CExpr::Fst(b)) | (CExpr::Snd(a), CExpr::Snd(b)) => self.derive(a, b, d),
            (CExpr::App(f, a), CExpr::App(g, b)) => alpha_eq(a, b) && self.derive(f, g, d),
            (CExpr::Rec { scrut: s, branches: bs, .. }, CExpr::Rec { scrut: t, branches: cs, .. }) => {
                bs.len() == cs.len()
                    && bs.iter().zip(cs.iter()).all(|(x, y)| {
                        x.ctor == y.ctor
                            && alpha_eq(
                                &CExpr::lam(x.var.clone(), None, x.body.clone()),
                                &CExpr::lam(y.var.clone(), None, y.body.clone()),
                            )
                    })
                    && self.derive(s, t, d)
            }
            (CExpr::Plus(..), CExpr::Plus(..)) => {
                let xs = summands(e0);
                let ys = summands(e1);
                xs.len() == ys.len() && xs.iter().zip(&ys).all(|(x, y)| self.derive(x, y, d))
            }
            (CExpr::Con(c, a), CExpr::Con(c2, b)) if c == c2 && self.axioms.cons(c).is_some() => {
                // Cons(E1, E) = Cons(E2, E) and the context Cons(x, 𝒞).
                match (&**a, &**b) {
                    (CExpr::Pair(_, x), CExpr::Pair(_, y)) => self.derive(x, y, d),
                    _ => false,
                }
            }
            _ => false,
        }
    }

    /// Scrutinees below `s` under the list axioms: the empty list and every
    /// proper tail of a syntactic list.
    fn smaller_scrutinees(&self, s: &Arc<CExpr>) -> Vec<Arc<CExpr>> {
        let CExpr::Con(c, _) = &**s else { return Vec::new() };
        let Some(ax) = self.axioms.for_datatype_of(self.csig, c) else { return Vec::new() };
        let mut out = vec![CExpr::con(ax.nil.clone(), CExpr::unit())];
        let mut cur = s.clone();
        while let CExpr::Con(c, arg) = &*cur.clone() {
            if c != &ax.cons {
                break;
            }
            let CExpr::Pair(_, tail) = &**arg else { break };
            out.push(tail.clone());
            cur = tail.clone();
        }
        out.retain(|t| !alpha_eq(t, s));
        out
    }
}
