use std::collections::HashMap;
use std::sync::Arc;

use crate::complexity::CExpr;

#[derive(Clone, Debug)]
pub(crate) enum Item {
    Num(u64),
    Atom(Arc<CExpr>),
}

/// The summands of a `+` chain, left to right.
pub(crate) fn flatten(e: &Arc<CExpr>, out: &mut Vec<Item>) {
    match &**e {
        CExpr::Plus(a, b) => {
            flatten(a, out);
            flatten(b, out);
        }
        _ => match e.as_numeral() {
            Some(n) => out.push(Item::Num(n)),
            None => out.push(Item::Atom(e.clone())),
        },
    }
}

/// Rebuilds a sum. Adjacent numerals merge and zeros disappear, which uses
/// only the unit and associativity laws; `commutative` also gathers every
/// numeral into a leading one and sorts the remaining summands.
pub(crate) fn rebuild(items: Vec<Item>, commutative: bool) -> Arc<CExpr> {
    let mut out: Vec<Item> = Vec::new();
    if commutative {
        let mut n = 0u64;
        let mut atoms = Vec::new();
        for it in items {
            match it {
                Item::Num(k) => n = n.saturating_add(k),
                Item::Atom(a) => atoms.push((a.to_string(), a)),
            }
        }
        atoms.sort_by(|a, b| a.0.cmp(&b.0));
        if n > 0 {
            out.push(Item::Num(n));
        }
        out.extend(atoms.into_iter().map(|(_, a)| Item::Atom(a)));
    } else {
        for it in items {
            match (out.last_mut(), it) {
                (_, Item::Num(0)) => {}
                (Some(Item::Num(m)), Item::Num(k)) => *m = m.saturating_add(k),
                (_, it) => out.push(it),
            }
        }
    }
    let mut acc: Option<Arc<CExpr>> = None;
    for it in out {
        let t = match it {
            Item::Num(n) => CExpr::num(n),
            Item::Atom(a) => a,
        };
        acc = Some(match acc {
            None => t,
            Some(a) => CExpr::plus(a, t),
        });
    }
    acc.unwrap_or_else(CExpr::zero)
}

/// Puts every `+` chain of `e` into its canonical form.
pub fn canonical_costs(e: &Arc<CExpr>, commutative: bool) -> Arc<CExpr> {
    Canon { commutative, memo: HashMap::new() }.go(e)
}

struct Canon {
    commutative: bool,
    memo: HashMap<usize, (Arc<CExpr>, Arc<CExpr>)>,
}

impl Canon {
    fn go(&mut self, e: &Arc<CExpr>) -> Arc<CExpr> {
        let k = Arc::as_ptr(e) as usize;
        if let Some((_, r)) = self.memo.get(&k) {
            return r.clone();
        }
        let r = match &**e {
            CExpr::Plus(..) => {
                let mut items = Vec::new();
                flatten(e, &mut items);
                let items = items
                    .into_iter()
                    .map(|it| match it {
                        Item::Atom(a) => Item::Atom(self.go(&a)),
                        n => n,
                    })
                    .collect();
                rebuild(items, self.commutative)
            }
            CExpr::Num(n) => CExpr::num(*n),
            CExpr::Pair(a, b) => CExpr::pair(self.go(a), self.go(b)),
            CExpr::App(a, b) => CExpr::app(self.go(a), self.go(b)),
            CExpr::Fst(a) => CExpr::fst(self.go(a)),
            CExpr::Snd(a) => CExpr::snd(self.go(a)),
            CExpr::Con(c, a) => CExpr::con(c.clone(), self.go(a)),
            CExpr::Lam { var, ann, body } => CExpr::lam(var.clone(), ann.clone(), self.go(body)),
            CExpr::Rec { scrut, branches, ann } => {
                let bs: Vec<_> = branches
                    .iter()
                    .map(|b| crate::complexity::CBranch { ctor: b.ctor.clone(), var: b.var.clone(), body: self.go(&b.body) })
                    .collect();
                Arc::new(CExpr::Rec { scrut: self.go(scrut), branches: bs.into(), ann: ann.clone() })
            }
            _ => e.clone(),
        };
        self.memo.insert(k, (e.clone(), r.clone()));
        r
    }
}
