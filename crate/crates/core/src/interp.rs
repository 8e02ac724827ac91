//! The size-based denotational semantics of the complexity language.
//!
//! Costs are ∞-naturals, datatypes are interpreted by their size models, and
//! `rec` is the join of its branches over every unfolding whose size lies
//! below the scrutinee's.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use crate::complexity::{CBranch, CExpr, CFunctor, CType};
use crate::error::{Error, InterpError, ModelError};
use crate::ident::Ident;
use crate::size::{AbsArg, AbstractUnfolding, Carrier, Elem, ModelTable, NInf};
use crate::source::{CheckedProgram, Expr, Type};
use crate::translate::Translator;

/// A semantic value.
#[derive(Clone)]
pub enum SemVal {
    Cost(NInf),
    Unit,
    Pair(Rc<SemVal>, Rc<SemVal>),
    Elem(Elem),
    Fun(Rc<Fun>),
    /// The greatest element, at whatever type it is used.
    Top,
    /// The least element, at whatever type it is used.
    Bot,
    /// A recursive result, computed when first inspected.
    Lazy(Rc<Thunk>),
}

pub enum Fun {
    Closure { var: Ident, body: Arc<CExpr>, env: Env },
    Join(Vec<Rc<Fun>>),
    Const(SemVal),
}

pub struct Thunk {
    inst: Rc<RecInstance>,
    bound: Elem,
    value: RefCell<Option<SemVal>>,
}

/// A `rec` node together with the environment it was reached in.
pub struct RecInstance {
    node: Arc<CExpr>,
    branches: Arc<[CBranch]>,
    env: Env,
    datatype: Ident,
}

struct EnvNode {
    name: Ident,
    val: SemVal,
    next: Env,
}

/// An environment; later bindings shadow earlier ones.
#[derive(Clone, Default)]
pub struct Env(Option<Rc<EnvNode>>);

impl Env {
    pub fn new() -> Env {
        Env(None)
    }

    pub fn bind(&self, name: Ident, val: SemVal) -> Env {
        Env(Some(Rc::new(EnvNode { name, val, next: self.clone() })))
    }

    pub fn lookup(&self, x: &str) -> Option<&SemVal> {
        let mut cur = &self.0;
        while let Some(n) = cur {
            if n.name.as_str() == x {
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

impl SemVal {
    pub fn cost(n: u64) -> SemVal {
        SemVal::Cost(NInf::Fin(n))
    }

    pub fn pair(a: SemVal, b: SemVal) -> SemVal {
        SemVal::Pair(Rc::new(a), Rc::new(b))
    }

    /// The cost component of a complexity.
    pub fn cost_part(&self, it: &mut Interp) -> Result<NInf, InterpError> {
        match it.force(self)? {
            SemVal::Pair(c, _) => it.as_cost(&c),
            SemVal::Top => Ok(NInf::Inf),
            SemVal::Bot => Ok(NInf::ZERO),
            v => Err(InterpError::IllTyped(format!("expected a complexity, found {}", v.render()))),
        }
    }

    /// Renders a value without forcing pending recursive results.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SemVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemVal::Cost(n) => write!(f, "{n}"),
            SemVal::Unit => f.write_str("()"),
            SemVal::Pair(a, b) => write!(f, "({a}, {b})"),
            SemVal::Elem(e) => write!(f, "{e}"),
            SemVal::Fun(_) => f.write_str("<fn>"),
            SemVal::Top => f.write_str("top"),
            SemVal::Bot => f.write_str("bot"),
            SemVal::Lazy(t) => match &*t.value.borrow() {
                Some(v) => write!(f, "{v}"),
                None => f.write_str("<rec>"),
            },
        }
    }
}

impl fmt::Debug for SemVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

enum RecState {
    InProgress,
    Done(SemVal),
}

/// Interpretation state for one top-level call. The memo tables hold on to
/// the terms and environments they are keyed by.
pub struct Interp<'m> {
    models: &'m ModelTable,
    memo: HashMap<(usize, usize), (Arc<CExpr>, Env, SemVal)>,
    recs: HashMap<(usize, usize, Elem), (Rc<RecInstance>, RecState)>,
    /// Keyed by function identity and argument; holds both alive.
    apps: HashMap<(usize, String), (Rc<Fun>, SemVal, RecState)>,
}

impl<'m> Interp<'m> {
    pub fn new(models: &'m ModelTable) -> Self {
        Interp { models, memo: HashMap::new(), recs: HashMap::new(), apps: HashMap::new() }
    }

    pub fn models(&self) -> &'m ModelTable {
        self.models
    }

    pub fn eval(&mut self, env: &Env, e: &Arc<CExpr>) -> Result<SemVal, InterpError> {
        let key = (Arc::as_ptr(e) as usize, env.ptr());
        if let Some((_, _, v)) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let v = self.eval_uncached(env, e)?;
        self.memo.insert(key, (e.clone(), env.clone(), v.clone()));
        Ok(v)
    }

    fn eval_uncached(&mut self, env: &Env, e: &Arc<CExpr>) -> Result<SemVal, InterpError> {
        Ok(match &**e {
            CExpr::Var(x) => env.lookup(x.as_str()).cloned().ok_or_else(|| InterpError::Unbound(x.to_string()))?,
            CExpr::Zero => SemVal::cost(0),
            CExpr::One => SemVal::cost(1),
            CExpr::Num(n) => SemVal::cost(*n),
            CExpr::Plus(a, b) => {
                let a = self.eval(env, a)?;
                let a = self.as_cost(&a)?;
                let b = self.eval(env, b)?;
                SemVal::Cost(a + self.as_cost(&b)?)
            }
            CExpr::Unit => SemVal::Unit,
            CExpr::Pair(a, b) => SemVal::pair(self.eval(env, a)?, self.eval(env, b)?),
            CExpr::Fst(a) => {
                let v = self.eval(env, a)?;
                self.proj(&v, 0)?
            }
            CExpr::Snd(a) => {
                let v = self.eval(env, a)?;
                self.proj(&v, 1)?
            }
            CExpr::Lam { var, body, .. } => SemVal::Fun(Rc::new(Fun::Closure { var: var.clone(), body: body.clone(), env: env.clone() })),
            CExpr::App(f, a) => {
                let f = self.eval(env, f)?;
                let a = self.eval(env, a)?;
                self.apply(&f, a)?
            }
            CExpr::Con(c, a) => {
                let v = self.eval(env, a)?;
                self.construct(c, &v)?
            }
            CExpr::Rec { scrut, branches, .. } => {
                let s = self.eval(env, scrut)?;
                let d = self.rec_datatype(branches)?;
                let bound = match self.force(&s)? {
                    SemVal::Elem(b) => b,
                    SemVal::Top => return Ok(SemVal::Top),
                    SemVal::Bot => return Ok(SemVal::Bot),
                    v => return Err(InterpError::IllTyped(format!("rec scrutinee denotes {v}"))),
                };
                let inst = Rc::new(RecInstance { node: e.clone(), branches: branches.clone(), env: env.clone(), datatype: d });
                self.rec_at(&inst, &bound)?
            }
        })
    }

    fn rec_datatype(&self, branches: &[CBranch]) -> Result<Ident, InterpError> {
        let b = branches.first().ok_or_else(|| InterpError::IllTyped("rec without branches".into()))?;
        let c = self.models.csig().ctor(b.ctor.as_str()).ok_or_else(|| InterpError::IllTyped(format!("unknown constructor {}", b.ctor)))?;
        Ok(c.datatype.clone())
    }

    /// Resolves pending recursive results at the head of `v`.
    pub fn force(&mut self, v: &SemVal) -> Result<SemVal, InterpError> {
        let mut v = v.clone();
        while let SemVal::Lazy(t) = &v {
            let cached = t.value.borrow().clone();
            let r = match cached {
                Some(r) => r,
                None => {
                    let r = self.rec_at(&t.inst, &t.bound)?;
                    *t.value.borrow_mut() = Some(r.clone());
                    r
                }
            };
            v = r;
        }
        Ok(v)
    }

    pub fn as_cost(&mut self, v: &SemVal) -> Result<NInf, InterpError> {
        match self.force(v)? {
            SemVal::Cost(n) => Ok(n),
            SemVal::Top => Ok(NInf::Inf),
            SemVal::Bot => Ok(NInf::ZERO),
            v => Err(InterpError::IllTyped(format!("expected a cost, found {v}"))),
        }
    }

    pub fn proj(&mut self, v: &SemVal, i: usize) -> Result<SemVal, InterpError> {
        match self.force(v)? {
            SemVal::Pair(a, b) => Ok(if i == 0 { (*a).clone() } else { (*b).clone() }),
            SemVal::Top => Ok(SemVal::Top),
            SemVal::Bot => Ok(SemVal::Bot),
            v => Err(InterpError::IllTyped(format!("projection from {v}"))),
        }
    }

    pub fn apply(&mut self, f: &SemVal, a: SemVal) -> Result<SemVal, InterpError> {
        match self.force(f)? {
            SemVal::Fun(fun) => self.apply_rc(&fun, a),
            SemVal::Top => Ok(SemVal::Top),
            SemVal::Bot => Ok(SemVal::Bot),
            v => Err(InterpError::IllTyped(format!("application of {v}"))),
        }
    }

    /// Applications are memoized; re-entering an application that is still
    /// being computed means the recursion does not descend, and gives top.
    fn apply_rc(&mut self, f: &Rc<Fun>, a: SemVal) -> Result<SemVal, InterpError> {
        if let Fun::Const(v) = &**f {
            return Ok(v.clone());
        }
        let Some(k) = self.arg_key(&a)? else {
            return self.apply_fun(f, a);
        };
        let key = (Rc::as_ptr(f) as usize, k);
        match self.apps.get(&key) {
            Some((_, _, RecState::Done(v))) => return Ok(v.clone()),
            Some((_, _, RecState::InProgress)) => return Ok(SemVal::Top),
            None => {}
        }
        self.apps.insert(key.clone(), (f.clone(), a.clone(), RecState::InProgress));
        let r = self.apply_fun(f, a.clone());
        match &r {
            Ok(v) => self.apps.insert(key, (f.clone(), a, RecState::Done(v.clone()))),
            Err(_) => self.apps.remove(&key),
        };
        r
    }

    /// A structural key for first-order arguments; functions are keyed by identity.
    fn arg_key(&mut self, v: &SemVal) -> Result<Option<String>, InterpError> {
        Ok(Some(match self.force(v)? {
            SemVal::Cost(n) => format!("c{n}"),
            SemVal::Unit => "u".into(),
            SemVal::Elem(e) => format!("e{e}"),
            SemVal::Top => "T".into(),
            SemVal::Bot => "B".into(),
            SemVal::Fun(f) => format!("f{:x}", Rc::as_ptr(&f) as *const () as usize),
            SemVal::Pair(a, b) => match (self.arg_key(&a)?, self.arg_key(&b)?) {
                (Some(x), Some(y)) => format!("({x},{y})"),
                _ => return Ok(None),
            },
            SemVal::Lazy(_) => return Ok(None),
        }))
    }

    fn apply_fun(&mut self, f: &Fun, a: SemVal) -> Result<SemVal, InterpError> {
        match f {
            Fun::Closure { var, body, env } => {
                let env = env.bind(var.clone(), a);
                self.eval(&env, body)
            }
            Fun::Const(v) => Ok(v.clone()),
            Fun::Join(fs) => {
                let mut acc = SemVal::Bot;
                for g in fs {
                    let r = self.apply_rc(g, a.clone())?;
                    acc = self.join(&acc, &r)?;
                }
                Ok(acc)
            }
        }
    }

    /// Least upper bound. Joins of functions are taken pointwise, on demand.
    pub fn join(&mut self, a: &SemVal, b: &SemVal) -> Result<SemVal, InterpError> {
        let a = self.force(a)?;
        let b = self.force(b)?;
        Ok(match (a, b) {
            (SemVal::Bot, x) | (x, SemVal::Bot) => x,
            (SemVal::Top, _) | (_, SemVal::Top) => SemVal::Top,
            (SemVal::Cost(x), SemVal::Cost(y)) => SemVal::Cost(x.max(y)),
            (SemVal::Unit, SemVal::Unit) => SemVal::Unit,
            (SemVal::Elem(x), SemVal::Elem(y)) => SemVal::Elem(x.join(&y)),
            (SemVal::Pair(a0, a1), SemVal::Pair(b0, b1)) => SemVal::pair(self.join(&a0, &b0)?, self.join(&a1, &b1)?),
            (SemVal::Fun(f), SemVal::Fun(g)) => {
                let mut fs = Vec::new();
                for h in [f, g] {
                    match &*h {
                        Fun::Join(hs) => fs.extend(hs.iter().cloned()),
                        _ => fs.push(h),
                    }
                }
                SemVal::Fun(Rc::new(Fun::Join(fs)))
            }
            (a, b) => return Err(InterpError::IllTyped(format!("join of {a} and {b}"))),
        })
    }

    /// C(v) denotes the size of the unfolding `v` abstracts to.
    fn construct(&mut self, c: &Ident, v: &SemVal) -> Result<SemVal, InterpError> {
        let csig = self.models.csig();
        let cref = csig.ctor(c.as_str()).ok_or_else(|| InterpError::IllTyped(format!("unknown constructor {c}")))?;
        let d = cref.datatype.clone();
        let carrier = self.models.carrier(d.as_str());
        let arg = self.abstract_arg(&carrier, cref.arg, v)?;
        Ok(SemVal::Elem(self.models.size_of_arg(d.as_str(), &arg)?))
    }

    fn abstract_arg(&mut self, own: &Carrier, f: &CFunctor, v: &SemVal) -> Result<AbsArg, InterpError> {
        let v = self.force(v)?;
        Ok(match f {
            CFunctor::SelfRef => AbsArg::Rec(match v {
                SemVal::Elem(e) => e,
                SemVal::Top => own.top(),
                SemVal::Bot => own.bottom(),
                v => return Err(InterpError::IllTyped(format!("recursive argument {v}"))),
            }),
            CFunctor::Const(t) => self.abstract_const(t, &v)?,
            CFunctor::Prod(a, b) => {
                let x = self.proj(&v, 0)?;
                let y = self.proj(&v, 1)?;
                AbsArg::pair(self.abstract_arg(own, a, &x)?, self.abstract_arg(own, b, &y)?)
            }
            CFunctor::Arrow(dom, body) => {
                let Some(pt) = self.point(dom) else {
                    return Err(ModelError::InfiniteEnumeration {
                        datatype: "?".into(),
                        ctor: "?".into(),
                        reason: format!("constructor argument is a function over `{dom}`"),
                    }
                    .into());
                };
                let r = self.apply(&v, pt)?;
                AbsArg::Fun(Box::new(self.abstract_arg(own, body, &r)?))
            }
        })
    }

    fn abstract_const(&mut self, t: &CType, v: &SemVal) -> Result<AbsArg, InterpError> {
        Ok(match t {
            CType::Data(l) => AbsArg::Label(
                l.clone(),
                match self.force(v)? {
                    SemVal::Elem(e) => e,
                    SemVal::Top => self.models.carrier(l.as_str()).top(),
                    SemVal::Bot => self.models.carrier(l.as_str()).bottom(),
                    v => return Err(InterpError::IllTyped(format!("label {v}"))),
                },
            ),
            CType::Prod(a, b) => {
                let x = self.proj(v, 0)?;
                let y = self.proj(v, 1)?;
                AbsArg::pair(self.abstract_const(a, &x)?, self.abstract_const(b, &y)?)
            }
            t => AbsArg::Opaque(t.clone()),
        })
    }

    /// The only potential of a one-point type.
    fn point(&self, t: &CType) -> Option<SemVal> {
        match t {
            CType::Unit => Some(SemVal::Unit),
            CType::Prod(a, b) => Some(SemVal::pair(self.point(a)?, self.point(b)?)),
            CType::Data(d) if self.models.carrier(d.as_str()) == Carrier::OnePoint => Some(SemVal::Elem(Elem::Point)),
            _ => None,
        }
    }

    /// The greatest potential of type `t`.
    fn top_of(&self, t: &CType) -> SemVal {
        match t {
            CType::Unit => SemVal::Unit,
            CType::Data(d) => SemVal::Elem(self.models.carrier(d.as_str()).top()),
            _ => SemVal::Top,
        }
    }

    /// The recursor at a given bound: the join, over every unfolding of size
    /// at most `bound`, of the matching branch.
    fn rec_at(&mut self, inst: &Rc<RecInstance>, bound: &Elem) -> Result<SemVal, InterpError> {
        let key = (Arc::as_ptr(&inst.node) as usize, inst.env.ptr(), bound.clone());
        match self.recs.get(&key) {
            Some((_, RecState::Done(v))) => return Ok(v.clone()),
            // A recursive call at the same bound: the model is not well founded here.
            Some((_, RecState::InProgress)) => return Ok(SemVal::Top),
            None => {}
        }
        if bound.has_inf() {
            return Ok(SemVal::Top);
        }
        self.recs.insert(key.clone(), (inst.clone(), RecState::InProgress));
        let r = self.rec_body(inst, bound);
        match &r {
            Ok(v) => {
                self.recs.insert(key, (inst.clone(), RecState::Done(v.clone())));
            }
            Err(_) => {
                self.recs.remove(&key);
            }
        }
        r
    }

    fn rec_body(&mut self, inst: &Rc<RecInstance>, bound: &Elem) -> Result<SemVal, InterpError> {
        let d = inst.datatype.as_str();
        let model = self.models.get(d).ok_or_else(|| ModelError::UnknownDatatype(d.to_string()))?;
        let mut zs = self.models.unfoldings(d, bound)?;
        if model.semrec {
            zs = self.semrec_unfoldings(d, zs, bound)?;
        }
        let mut acc = SemVal::Bot;
        for z in zs {
            let v = self.branch_value(inst, &z)?;
            acc = self.join(&acc, &v)?;
            if matches!(acc, SemVal::Top) {
                break;
            }
        }
        Ok(acc)
    }

    /// Keeps the base unfoldings and those whose recursive component is
    /// exactly one below the bound: semrec(n+1) = a ∨ f(n, semrec(n)).
    fn semrec_unfoldings(&self, d: &str, zs: Vec<AbstractUnfolding>, bound: &Elem) -> Result<Vec<AbstractUnfolding>, InterpError> {
        let shape_err = |reason: &str| InterpError::SemrecShape { datatype: d.to_string(), reason: reason.to_string() };
        let model = self.models.get(d).expect("model");
        if model.measure != crate::size::Measure::Length {
            return Err(shape_err("the datatype must be measured by `length`"));
        }
        let decl = self.models.csig().datatype(d).expect("declared");
        let counts: Vec<usize> = decl.ctors.iter().map(|c| self_positions(&c.arg)).collect();
        let mut sorted = counts.clone();
        sorted.sort_unstable();
        if sorted != [0, 1] {
            return Err(shape_err("expected one constructor without and one with a single recursive position"));
        }
        let Elem::N(NInf::Fin(n)) = bound else {
            return Err(shape_err("the bound is not a natural number"));
        };
        Ok(zs
            .into_iter()
            .filter(|z| {
                let recs = z.arg.recs();
                recs.is_empty() || (*n > 0 && recs == [Elem::n(n - 1)])
            })
            .collect())
    }

    /// Interprets the branch for `z`, with each recursive position paired with
    /// the recursor's result at that size.
    fn branch_value(&mut self, inst: &Rc<RecInstance>, z: &AbstractUnfolding) -> Result<SemVal, InterpError> {
        let b = inst
            .branches
            .iter()
            .find(|b| b.ctor == z.ctor)
            .ok_or_else(|| InterpError::IllTyped(format!("no branch for {}", z.ctor)))?;
        let x = self.branch_arg(inst, &z.arg);
        let env = inst.env.bind(b.var.clone(), x);
        self.eval(&env, &b.body)
    }

    fn branch_arg(&self, inst: &Rc<RecInstance>, a: &AbsArg) -> SemVal {
        match a {
            AbsArg::Rec(s) => SemVal::pair(
                SemVal::Elem(s.clone()),
                SemVal::Lazy(Rc::new(Thunk { inst: inst.clone(), bound: s.clone(), value: RefCell::new(None) })),
            ),
            AbsArg::Label(_, e) => SemVal::Elem(e.clone()),
            AbsArg::Untracked(l) => SemVal::Elem(self.models.get(l.as_str()).map_or(Elem::Point, |m| m.sup.clone())),
            AbsArg::Opaque(t) => self.top_of(t),
            AbsArg::Pair(x, y) => SemVal::pair(self.branch_arg(inst, x), self.branch_arg(inst, y)),
            AbsArg::Fun(r) => SemVal::Fun(Rc::new(Fun::Const(self.branch_arg(inst, r)))),
        }
    }

    /// Compares two first-order values; `None` when functions are involved.
    pub fn leq(&mut self, a: &SemVal, b: &SemVal) -> Result<Option<bool>, InterpError> {
        let a = self.force(a)?;
        let b = self.force(b)?;
        Ok(match (&a, &b) {
            (SemVal::Bot, _) | (_, SemVal::Top) => Some(true),
            (SemVal::Top, SemVal::Cost(n)) => Some(n.is_inf()),
            (SemVal::Top, SemVal::Elem(e)) => Some(e.has_inf() || *e == Elem::Point),
            (SemVal::Top, SemVal::Unit) => Some(true),
            (SemVal::Top, _) => Some(false),
            (SemVal::Cost(_), SemVal::Bot) => Some(matches!(a, SemVal::Cost(NInf::Fin(0)))),
            (_, SemVal::Bot) => Some(false),
            (SemVal::Cost(x), SemVal::Cost(y)) => Some(x <= y),
            (SemVal::Unit, SemVal::Unit) => Some(true),
            (SemVal::Elem(x), SemVal::Elem(y)) => Some(x.leq(y)),
            (SemVal::Pair(a0, a1), SemVal::Pair(b0, b1)) => match (self.leq(a0, b0)?, self.leq(a1, b1)?) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            (SemVal::Fun(_), SemVal::Fun(_)) => None,
            _ => return Err(InterpError::IllTyped(format!("comparison of {a} and {b}"))),
        })
    }

    /// Forces every pending recursive result reachable without applying functions.
    pub fn deep_force(&mut self, v: &SemVal) -> Result<SemVal, InterpError> {
        Ok(match self.force(v)? {
            SemVal::Pair(a, b) => SemVal::pair(self.deep_force(&a)?, self.deep_force(&b)?),
            v => v,
        })
    }
}

fn self_positions(f: &CFunctor) -> usize {
    match f {
        CFunctor::SelfRef => 1,
        CFunctor::Const(_) => 0,
        CFunctor::Prod(a, b) => self_positions(a) + self_positions(b),
        CFunctor::Arrow(_, b) => self_positions(b),
    }
}

/// Interprets a closed complexity term.
pub fn interp(models: &ModelTable, e: &Arc<CExpr>) -> Result<SemVal, InterpError> {
    let mut it = Interp::new(models);
    let v = it.eval(&Env::new(), e)?;
    it.deep_force(&v)
}

/// Interprets `e` in an environment.
pub fn interp_in(models: &ModelTable, env: &Env, e: &Arc<CExpr>) -> Result<SemVal, InterpError> {
    let mut it = Interp::new(models);
    let v = it.eval(env, e)?;
    it.deep_force(&v)
}

/// One row of a tabulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub size: Elem,
    pub cost: NInf,
    pub potential: String,
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "size={} cost={} potential={}", self.size, self.cost, self.potential)
    }
}

/// Applies the potential of definition `name` to each size in `sizes` and
/// reports the resulting cost and potential.
pub fn tabulate(prog: &CheckedProgram, name: &str, models: &ModelTable, sizes: &[Elem]) -> Result<Vec<Row>, Error> {
    let def = prog.def(name).ok_or_else(|| Error::Other(format!("no definition named `{name}`")))?;
    tabulate_expr(&def.closed, &def.ty, models, sizes).map_err(|e| match e {
        Error::Other(m) => Error::Other(format!("`{name}`: {m}")),
        e => e,
    })
}

/// Like [`tabulate`], for a closed elaborated function `e` of type `t`.
pub fn tabulate_expr(e: &Arc<Expr>, t: &Type, models: &ModelTable, sizes: &[Elem]) -> Result<Vec<Row>, Error> {
    let Type::Arrow(dom, _) = t else {
        return Err(Error::Other(format!("type {t} is not a function type")));
    };
    let Type::Data(_) = &**dom else {
        return Err(Error::Other(format!("cannot tabulate over argument type {dom}")));
    };
    let ce = Translator::default().go(e);
    let mut it = Interp::new(models);
    let whole = it.eval(&Env::new(), &ce)?;
    let pot = it.proj(&whole, 1)?;
    let mut rows = Vec::new();
    for s in sizes {
        let r = it.apply(&pot, SemVal::Elem(s.clone()))?;
        let r = it.deep_force(&r)?;
        let c = it.proj(&r, 0)?;
        let cost = it.as_cost(&c)?;
        let p = it.proj(&r, 1)?;
        rows.push(Row { size: s.clone(), cost, potential: p.render() });
    }
    Ok(rows)
}

/// The size grid `lo..=hi` over the carrier of the argument of `name`.
pub fn tabulation_grid(prog: &CheckedProgram, name: &str, models: &ModelTable, lo: u64, hi: u64) -> Result<Vec<Elem>, Error> {
    let def = prog.def(name).ok_or_else(|| Error::Other(format!("no definition named `{name}`")))?;
    match &def.ty {
        Type::Arrow(dom, _) => match &**dom {
            Type::Data(d) => Ok(models.carrier(d.as_str()).grid(lo, hi)),
            t => Err(Error::Other(format!("cannot tabulate over argument type {t}"))),
        },
        t => Err(Error::Other(format!("`{name}` has type {t}, not a function type"))),
    }
}
