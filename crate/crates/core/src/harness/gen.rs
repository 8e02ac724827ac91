//! Input generation: exhaustive enumeration of small values, topped up with
//! seeded random values, all filtered by their size under the active models.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::canon::canonical_functions;
use crate::error::{Error, GenError};
use crate::size::{Elem, ModelTable, NInf};
use crate::source::{CheckedProgram, Functor, Type, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    /// Bound on every numeric component of an input's size.
    pub max_size: u64,
    /// Inputs kept per argument type, and argument tuples kept per definition.
    pub samples: usize,
    pub seed: u64,
    /// Arguments sampled when checking a function-typed result.
    pub fn_samples: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { max_size: 5, samples: 24, seed: 0, fn_samples: 3 }
    }
}

/// Values enumerated exhaustively per type before switching to sampling.
const ENUM_LIMIT: usize = 4000;
const MAX_CTORS: usize = 40;

/// Whether every numeric component of `e` is at most `k`.
pub fn within(e: &Elem, k: u64) -> bool {
    match e {
        Elem::N(NInf::Fin(n)) => *n <= k,
        Elem::N(NInf::Inf) => false,
        Elem::Point => true,
        Elem::Tuple(xs) => xs.iter().all(|x| within(x, k)),
    }
}

/// Deterministic inputs of type `t`: every constructor and every size up to
/// `cfg.max_size` is represented when such values exist, up to `cfg.samples`
/// values in total. Function types draw from the canonical library.
pub fn gen_values(prog: &CheckedProgram, models: &ModelTable, t: &Type, cfg: &GenConfig) -> Result<Vec<Value>, Error> {
    ValueGen::new(prog, models, cfg).values(t)
}

pub struct ValueGen<'a> {
    prog: &'a CheckedProgram,
    models: &'a ModelTable,
    cfg: &'a GenConfig,
    rng: ChaCha8Rng,
    exact: HashMap<(Type, usize), Vec<Value>>,
}

impl<'a> ValueGen<'a> {
    pub fn new(prog: &'a CheckedProgram, models: &'a ModelTable, cfg: &'a GenConfig) -> Self {
        ValueGen { prog, models, cfg, rng: ChaCha8Rng::seed_from_u64(cfg.seed), exact: HashMap::new() }
    }

    pub fn values(&mut self, t: &Type) -> Result<Vec<Value>, Error> {
        match t {
            Type::Arrow(a, b) => {
                self.first_order(a)?;
                self.first_order(b)?;
                let consts = self.values(b)?;
                Ok(canonical_functions(self.prog, a, b, &consts)?.into_iter().map(|(_, v)| v).collect())
            }
            t => {
                self.first_order(t)?;
                self.sampled(t)
            }
        }
    }

    fn first_order(&self, t: &Type) -> Result<(), GenError> {
        let no = |why: &str| GenError::NotGenerable(t.to_string(), why.into());
        match t {
            Type::Unit => Ok(()),
            Type::Prod(a, b) => {
                self.first_order(a)?;
                self.first_order(b)
            }
            Type::Susp(a) => self.first_order(a),
            Type::Arrow(..) => Err(no("function inside a generated value")),
            Type::Data(d) => {
                let decl = self.prog.signature.datatype(d.as_str()).ok_or_else(|| no("unknown datatype"))?;
                if decl.ctors.iter().any(|c| has_arrow(&c.arg)) {
                    return Err(no("constructor argument with a function type"));
                }
                if decl.ctors.iter().all(|c| c.arg.has_self()) {
                    return Err(no("no finite values"));
                }
                for c in &decl.ctors {
                    let mut ds = Vec::new();
                    c.arg.apply(&Type::Unit).datatypes(&mut ds);
                    for l in ds {
                        self.first_order(&Type::Data(l))?;
                    }
                }
                Ok(())
            }
        }
    }

    fn size_ok(&self, t: &Type, v: &Value) -> Result<bool, Error> {
        Ok(match (t, v) {
            (Type::Data(_), v) => within(&self.models.value_size(&self.prog.signature, v)?, self.cfg.max_size),
            (Type::Prod(a, b), Value::Pair(x, y)) => self.size_ok(a, x)? && self.size_ok(b, y)?,
            (Type::Susp(a), Value::Delay(e)) => match e.as_value() {
                Some(v) => self.size_ok(a, &v)?,
                None => true,
            },
            _ => true,
        })
    }

    fn key(&self, t: &Type, v: &Value) -> Result<String, Error> {
        Ok(match (t, v) {
            (Type::Data(_), Value::Con(c, _)) => format!("{c}:{}", self.models.value_size(&self.prog.signature, v)?),
            (Type::Prod(a, b), Value::Pair(x, y)) => format!("{}|{}", self.key(a, x)?, self.key(b, y)?),
            (Type::Susp(a), Value::Delay(e)) => match e.as_value() {
                Some(v) => self.key(a, &v)?,
                None => String::new(),
            },
            _ => String::new(),
        })
    }

    fn sampled(&mut self, t: &Type) -> Result<Vec<Value>, Error> {
        let mut pool = Vec::new();
        let mut seen = HashSet::new();
        let mut total = 0;
        for k in 0..=MAX_CTORS {
            let vs = self.exact(t, k);
            total += vs.len();
            for v in vs {
                if self.size_ok(t, &v)? && seen.insert(v.to_string()) {
                    pool.push(v);
                }
            }
            if total > ENUM_LIMIT {
                break;
            }
        }
        for _ in 0..self.cfg.samples * 8 {
            let v = self.random(t, self.cfg.max_size as usize);
            if self.size_ok(t, &v)? && seen.insert(v.to_string()) {
                pool.push(v);
            }
        }
        if pool.is_empty() {
            return Err(GenError::NotGenerable(t.to_string(), format!("no values of size at most {}", self.cfg.max_size)).into());
        }
        if pool.len() <= self.cfg.samples {
            return Ok(pool);
        }
        // One value per (constructor, size) class first, then random others.
        let mut keys = HashSet::new();
        let mut chosen = Vec::new();
        let mut rest = Vec::new();
        for v in pool {
            if keys.insert(self.key(t, &v)?) {
                chosen.push(v);
            } else {
                rest.push(v);
            }
        }
        rest.shuffle(&mut self.rng);
        let room = self.cfg.samples.saturating_sub(chosen.len());
        chosen.extend(rest.into_iter().take(room));
        chosen.sort_by_cached_key(|v| (v.ctor_count(), v.to_string()));
        Ok(chosen)
    }

    /// All values of `t` with exactly `k` constructors, truncated at the limit.
    fn exact(&mut self, t: &Type, k: usize) -> Vec<Value> {
        if let Some(vs) = self.exact.get(&(t.clone(), k)) {
            return vs.clone();
        }
        let out = match t {
            Type::Unit if k == 0 => vec![Value::Unit],
            Type::Unit | Type::Arrow(..) => Vec::new(),
            Type::Prod(a, b) => {
                let mut out = Vec::new();
                'outer: for i in 0..=k {
                    let xs = self.exact(a, i);
                    if xs.is_empty() {
                        continue;
                    }
                    let ys = self.exact(b, k - i);
                    for x in &xs {
                        for y in &ys {
                            out.push(Value::pair(x.clone(), y.clone()));
                            if out.len() >= ENUM_LIMIT {
                                break 'outer;
                            }
                        }
                    }
                }
                out
            }
            Type::Susp(a) => self.exact(a, k).into_iter().map(|v| Value::Delay(v.to_expr())).collect(),
            Type::Data(d) if k > 0 => {
                let decl = self.prog.signature.datatype(d.as_str()).cloned();
                let mut out = Vec::new();
                for c in decl.iter().flat_map(|d| d.ctors.iter()) {
                    let arg = c.arg.apply(t);
                    for v in self.exact(&arg, k - 1) {
                        out.push(Value::Con(c.name.clone(), v.into()));
                    }
                    if out.len() >= ENUM_LIMIT {
                        out.truncate(ENUM_LIMIT);
                        break;
                    }
                }
                out
            }
            Type::Data(_) => Vec::new(),
        };
        self.exact.insert((t.clone(), k), out.clone());
        out
    }

    /// A random value with at most `budget` recursive constructors per datatype layer.
    fn random(&mut self, t: &Type, budget: usize) -> Value {
        match t {
            Type::Unit | Type::Arrow(..) => Value::Unit,
            Type::Prod(a, b) => Value::pair(self.random(a, budget), self.random(b, budget)),
            Type::Susp(a) => Value::Delay(self.random(a, budget).to_expr()),
            Type::Data(_) => {
                let n = self.rng.gen_range(0..=budget);
                self.random_data(t, n, budget)
            }
        }
    }

    fn random_data(&mut self, t: &Type, n: usize, budget: usize) -> Value {
        let Type::Data(d) = t else { unreachable!() };
        let decl = self.prog.signature.datatype(d.as_str()).expect("checked datatype").clone();
        let base: Vec<_> = decl.ctors.iter().filter(|c| !c.arg.has_self()).collect();
        let step: Vec<_> = decl.ctors.iter().filter(|c| c.arg.has_self()).collect();
        let c = if n == 0 || step.is_empty() { *base.choose(&mut self.rng).expect("base constructor") } else { *step.choose(&mut self.rng).unwrap() };
        // Split the remaining nodes among the recursive positions.
        let slots = c.arg.self_count();
        let mut parts = vec![0; slots];
        for _ in 0..n.saturating_sub(1) {
            if slots > 0 {
                let i = self.rng.gen_range(0..slots);
                parts[i] += 1;
            }
        }
        let arg = self.fill(&c.arg, t, &mut parts.into_iter(), budget);
        Value::Con(c.name.clone(), arg.into())
    }

    fn fill(&mut self, f: &Functor, t: &Type, parts: &mut impl Iterator<Item = usize>, budget: usize) -> Value {
        match f {
            Functor::SelfRef => {
                let n = parts.next().unwrap_or(0);
                self.random_data(t, n, budget)
            }
            Functor::Const(c) => self.random(c, budget),
            Functor::Prod(a, b) => {
                let x = self.fill(a, t, parts, budget);
                let y = self.fill(b, t, parts, budget);
                Value::pair(x, y)
            }
            Functor::Arrow(..) => Value::Unit,
        }
    }
}

fn has_arrow(f: &Functor) -> bool {
    match f {
        Functor::SelfRef => false,
        Functor::Const(t) => type_has_arrow(t),
        Functor::Prod(a, b) => has_arrow(a) || has_arrow(b),
        Functor::Arrow(..) => true,
    }
}

fn type_has_arrow(t: &Type) -> bool {
    match t {
        Type::Unit | Type::Data(_) => false,
        Type::Prod(a, b) => type_has_arrow(a) || type_has_arrow(b),
        Type::Susp(a) => type_has_arrow(a),
        Type::Arrow(..) => true,
    }
}
