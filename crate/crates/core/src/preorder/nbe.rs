use std::collections::{HashMap, HashSet};
use std::rc::Rc;
use std::sync::Arc;

use super::cost::{rebuild, Item};
use crate::complexity::{cmap_expand, free_cvars, CBranch, CExpr, CSignature, CType};
use crate::error::NormalizeError;
use crate::ident::{fresh_name, Ident};

/// Default evaluation budget of [`normalize`].
pub const NORMALIZE_FUEL: u64 = 20_000_000;

#[derive(Clone)]
enum NV {
    /// A stuck term, already in normal form.
    Neu(Arc<CExpr>),
    Cost(u64, Vec<Arc<CExpr>>),
    Unit,
    Pair(Rc<NV>, Rc<NV>),
    Lam(Ident, Option<CType>, Arc<CExpr>, Env),
    Con(Ident, Rc<NV>),
}

struct EnvNode {
    name: Ident,
    val: NV,
    next: Env,
}

#[derive(Clone, Default)]
struct Env(Option<Rc<EnvNode>>);

impl Env {
    fn bind(&self, name: Ident, val: NV) -> Env {
        Env(Some(Rc::new(EnvNode { name, val, next: self.clone() })))
    }

    fn lookup(&self, x: &Ident) -> Option<&NV> {
        let mut cur = &self.0;
        while let Some(n) = cur {
            if &n.name == x {
                return Some(&n.val);
            }
            cur = &n.next.0;
        }
        None
    }

    fn ptr(&self) -> usize {
        self.0.as_ref().map_or(0, |n| Rc::as_ptr(n) as usize)
    }
}

/// Reduces `e` to normal form: β for functions and pairs, recursor
/// unrolling on constructor-headed scrutinees, and the monoid laws, reading
/// the step rules as equations. Sums are put in the form `n + a + b + ...`.
pub fn normalize(csig: &CSignature, e: &Arc<CExpr>) -> Result<Arc<CExpr>, NormalizeError> {
    normalize_with_fuel(csig, e, NORMALIZE_FUEL)
}

pub fn normalize_with_fuel(csig: &CSignature, e: &Arc<CExpr>, fuel: u64) -> Result<Arc<CExpr>, NormalizeError> {
    let mut n = Nbe { csig, fuel, spent: 0, memo: HashMap::new(), unroll: HashMap::new(), taken: free_cvars(e) };
    let v = n.eval(&Env::default(), e)?;
    n.readback(&v)
}

/// The numeral in the cost component of a normal form, if there is one.
pub fn cost_literal(nf: &Arc<CExpr>) -> Option<u64> {
    match &**nf {
        CExpr::Pair(c, _) => c.as_numeral(),
        _ => None,
    }
}

/// The names `m` and `y` and, per constructor, the unrolled body.
type Unroll = (Arc<CExpr>, Ident, Vec<Arc<CExpr>>);

struct Nbe<'s> {
    csig: &'s CSignature,
    fuel: u64,
    spent: u64,
    memo: HashMap<(usize, usize), (Arc<CExpr>, Env, NV)>,
    /// Per `rec` node: the names `m` and `y` and the term
    /// map^Φ_C(y. (y, rec(y; branches)), m) for each constructor.
    unroll: HashMap<usize, Unroll>,
    taken: HashSet<Ident>,
}

fn ill(msg: impl Into<String>) -> NormalizeError {
    NormalizeError::IllTyped(msg.into())
}

impl<'s> Nbe<'s> {
    fn eval(&mut self, env: &Env, e: &Arc<CExpr>) -> Result<NV, NormalizeError> {
        let key = (Arc::as_ptr(e) as usize, env.ptr());
        if let Some((_, _, v)) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        self.spent += 1;
        if self.spent > self.fuel {
            return Err(NormalizeError::FuelExhausted(self.fuel));
        }
        let v = self.eval_uncached(env, e)?;
        self.memo.insert(key, (e.clone(), env.clone(), v.clone()));
        Ok(v)
    }

    fn eval_uncached(&mut self, env: &Env, e: &Arc<CExpr>) -> Result<NV, NormalizeError> {
        Ok(match &**e {
            CExpr::Var(x) => env.lookup(x).cloned().unwrap_or_else(|| NV::Neu(e.clone())),
            CExpr::Zero | CExpr::One | CExpr::Num(_) => NV::Cost(e.as_numeral().unwrap_or(0), Vec::new()),
            CExpr::Plus(a, b) => {
                let a = self.eval(env, a)?;
                let (n, mut xs) = self.as_cost(a)?;
                let b = self.eval(env, b)?;
                let (m, ys) = self.as_cost(b)?;
                xs.extend(ys);
                NV::Cost(n.saturating_add(m), xs)
            }
            CExpr::Unit => NV::Unit,
            CExpr::Pair(a, b) => NV::Pair(Rc::new(self.eval(env, a)?), Rc::new(self.eval(env, b)?)),
            CExpr::Fst(a) => {
                let v = self.eval(env, a)?;
                self.proj(v, 0)?
            }
            CExpr::Snd(a) => {
                let v = self.eval(env, a)?;
                self.proj(v, 1)?
            }
            CExpr::Lam { var, ann, body } => NV::Lam(var.clone(), ann.clone(), body.clone(), env.clone()),
            CExpr::App(f, a) => {
                let f = self.eval(env, f)?;
                let a = self.eval(env, a)?;
                self.apply(f, a)?
            }
            CExpr::Con(c, a) => NV::Con(c.clone(), Rc::new(self.eval(env, a)?)),
            CExpr::Rec { scrut, branches, ann } => match self.eval(env, scrut)? {
                NV::Con(c, v0) => {
                    let (m, mapped) = self.unroll_terms(e, branches)?;
                    let i = branches.iter().position(|b| b.ctor == c).ok_or_else(|| ill(format!("no branch for {c}")))?;
                    let arg = self.eval(&env.bind(m, (*v0).clone()), &mapped[i])?;
                    self.eval(&env.bind(branches[i].var.clone(), arg), &branches[i].body)?
                }
                NV::Neu(s) => {
                    let mut bs = Vec::new();
                    for b in branches.iter() {
                        let z = self.fresh(&b.var);
                        let body = self.eval(&env.bind(b.var.clone(), NV::Neu(CExpr::var(&z))), &b.body)?;
                        bs.push(CBranch { ctor: b.ctor.clone(), var: z, body: self.readback(&body)? });
                    }
                    NV::Neu(Arc::new(CExpr::Rec { scrut: s, branches: bs.into(), ann: ann.clone() }))
                }
                _ => return Err(ill("rec scrutinee is not of datatype")),
            },
        })
    }

    fn unroll_terms(&mut self, node: &Arc<CExpr>, branches: &Arc<[CBranch]>) -> Result<(Ident, Vec<Arc<CExpr>>), NormalizeError> {
        let k = Arc::as_ptr(node) as usize;
        if let Some((_, m, ts)) = self.unroll.get(&k) {
            return Ok((m.clone(), ts.clone()));
        }
        let CExpr::Rec { ann, .. } = &**node else { unreachable!() };
        let fv = free_cvars(node);
        let y = fresh_name("_y", |n| fv.iter().any(|v| v.as_str() == n));
        let m = fresh_name("_m", |n| fv.iter().any(|v| v.as_str() == n) || n == y.as_str());
        let rec_y = Arc::new(CExpr::Rec { scrut: CExpr::var(&y), branches: branches.clone(), ann: ann.clone() });
        let body = CExpr::pair(CExpr::var(&y), rec_y);
        let mut ts = Vec::new();
        for b in branches.iter() {
            let c = self.csig.ctor(b.ctor.as_str()).ok_or_else(|| ill(format!("unknown constructor {}", b.ctor)))?;
            ts.push(cmap_expand(c.arg, &y, &body, &CExpr::var(&m)));
        }
        self.unroll.insert(k, (node.clone(), m.clone(), ts.clone()));
        Ok((m, ts))
    }

    fn as_cost(&mut self, v: NV) -> Result<(u64, Vec<Arc<CExpr>>), NormalizeError> {
        match v {
            NV::Cost(n, xs) => Ok((n, xs)),
            NV::Neu(t) => Ok((0, vec![t])),
            _ => Err(ill("expected a cost")),
        }
    }

    fn proj(&mut self, v: NV, i: usize) -> Result<NV, NormalizeError> {
        match v {
            NV::Pair(a, b) => Ok(if i == 0 { (*a).clone() } else { (*b).clone() }),
            NV::Neu(t) => Ok(NV::Neu(if i == 0 { CExpr::fst(t) } else { CExpr::snd(t) })),
            _ => Err(ill("projection from a non-pair")),
        }
    }

    fn apply(&mut self, f: NV, a: NV) -> Result<NV, NormalizeError> {
        match f {
            NV::Lam(x, _, body, env) => self.eval(&env.bind(x, a), &body),
            NV::Neu(t) => Ok(NV::Neu(CExpr::app(t, self.readback(&a)?))),
            _ => Err(ill("application of a non-function")),
        }
    }

    fn fresh(&mut self, base: &Ident) -> Ident {
        let base = base.as_str().trim_start_matches('_');
        let base = if base.is_empty() { "x" } else { base };
        let taken = &self.taken;
        let z = fresh_name(base, |n| taken.iter().any(|v| v.as_str() == n));
        self.taken.insert(z.clone());
        z
    }

    fn readback(&mut self, v: &NV) -> Result<Arc<CExpr>, NormalizeError> {
        Ok(match v {
            NV::Neu(t) => t.clone(),
            NV::Cost(n, xs) => {
                let mut items = vec![Item::Num(*n)];
                items.extend(xs.iter().cloned().map(Item::Atom));
                rebuild(items, true)
            }
            NV::Unit => CExpr::unit(),
            NV::Pair(a, b) => CExpr::pair(self.readback(a)?, self.readback(b)?),
            NV::Con(c, a) => CExpr::con(c.clone(), self.readback(a)?),
            NV::Lam(x, ann, body, env) => {
                let z = self.fresh(x);
                let b = self.eval(&env.bind(x.clone(), NV::Neu(CExpr::var(&z))), body)?;
                CExpr::lam(z, ann.clone(), self.readback(&b)?)
            }
        })
    }
}
