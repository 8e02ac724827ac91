//! The bounding relation, checked on generated inputs: operational cost
//! against interpreted cost, and result values against potentials.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::exec::Exec;
use super::gen::{GenConfig, ValueGen};
use crate::error::{Error, InterpError};
use crate::eval;
use crate::interp::{Env, Interp, SemVal};
use crate::size::{ModelTable, NInf};
use crate::source::{CheckedProgram, Expr, Type, Value};
use crate::translate::translate_expr;

/// Outcome of the value half of the bounding relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Potential {
    Holds,
    /// Holds on the sampled arguments of a function-typed result.
    Sampled,
    Violated(String),
    /// The case could not be run.
    Error(String),
}

impl Potential {
    fn and(self, o: Potential) -> Potential {
        match (self, o) {
            (p @ (Potential::Error(_) | Potential::Violated(_)), _) | (_, p @ (Potential::Error(_) | Potential::Violated(_))) => p,
            (Potential::Sampled, _) | (_, Potential::Sampled) => Potential::Sampled,
            _ => Potential::Holds,
        }
    }

    pub fn ok(&self) -> bool {
        matches!(self, Potential::Holds | Potential::Sampled)
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Holds => f.write_str("holds"),
            Potential::Sampled => f.write_str("sampled"),
            Potential::Violated(d) => write!(f, "violated detail={d:?}"),
            Potential::Error(d) => write!(f, "error detail={d:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseRecord {
    pub index: usize,
    pub def: String,
    pub input: String,
    /// Operational cost.
    pub cost: u64,
    /// Interpreted cost.
    pub bound: NInf,
    pub potential: Potential,
}

impl CaseRecord {
    pub fn cost_ok(&self) -> bool {
        NInf::Fin(self.cost) <= self.bound
    }

    pub fn pass(&self) -> bool {
        self.cost_ok() && self.potential.ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub program: String,
    pub model: String,
    pub seed: u64,
    pub cases: Vec<CaseRecord>,
}

impl BoundReport {
    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.pass()).count()
    }

    pub fn failed(&self) -> usize {
        self.cases.len() - self.passed()
    }

    /// Cases whose operational cost exceeds the interpreted cost.
    pub fn cost_violations(&self) -> usize {
        self.cases.iter().filter(|c| !c.cost_ok()).count()
    }

    pub fn potential_violations(&self) -> usize {
        self.cases.iter().filter(|c| !c.potential.ok()).count()
    }

    pub fn all_pass(&self) -> bool {
        self.failed() == 0
    }

    pub fn summary(&self) -> String {
        format!(
            "program={} model={:?} seed={} cases={} passed={} failed={}",
            self.program,
            self.model,
            self.seed,
            self.cases.len(),
            self.passed(),
            self.failed()
        )
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            write!(f, "case={} def={} input={:?} n={} c={} potential={} result={}", c.index, c.def, c.input, c.cost, c.bound, c.potential, if c.pass() { "pass" } else { "fail" })?;
            if !c.pass() {
                write!(f, " seed={}", self.seed)?;
            }
            writeln!(f)?;
        }
        writeln!(f, "{}", self.summary())
    }
}

struct Case {
    def: String,
    term: Arc<Expr>,
    args: Vec<Value>,
    result: Type,
}

/// Checks definition `name` on generated inputs.
pub fn check_bound(prog: &CheckedProgram, name: &str, models: &ModelTable, cfg: &GenConfig) -> Result<BoundReport, Error> {
    check_defs(prog, name, &[name], models, cfg, Exec::default())
}

/// Checks every named definition, or all of them when `names` is empty.
pub fn check_defs(prog: &CheckedProgram, program: &str, names: &[&str], models: &ModelTable, cfg: &GenConfig, exec: Exec) -> Result<BoundReport, Error> {
    let defs: Vec<&str> = if names.is_empty() { prog.defs.iter().map(|d| d.name.as_str()).collect() } else { names.to_vec() };
    let mut gen = ValueGen::new(prog, models, cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let mut cases = Vec::new();
    let mut pools: HashMap<Type, Vec<Value>> = HashMap::new();
    for name in defs {
        let def = prog.def(name).ok_or_else(|| Error::Other(format!("no definition named `{name}`")))?;
        let (doms, result) = peel(&def.ty);
        let mut pool = |t: &Type, gen: &mut ValueGen| -> Result<Vec<Value>, Error> {
            if let Some(vs) = pools.get(t) {
                return Ok(vs.clone());
            }
            let vs = gen.values(t)?;
            pools.insert(t.clone(), vs.clone());
            Ok(vs)
        };
        let mut tuples: Vec<Vec<Value>> = vec![Vec::new()];
        for d in &doms {
            let vs = pool(d, &mut gen)?;
            tuples = tuples.into_iter().flat_map(|t| vs.iter().map(move |v| [t.clone(), vec![v.clone()]].concat())).collect();
            if tuples.len() > cfg.samples * 8 {
                tuples.shuffle(&mut rng);
                tuples.truncate(cfg.samples * 8);
            }
        }
        if tuples.len() > cfg.samples {
            tuples.shuffle(&mut rng);
            tuples.truncate(cfg.samples);
        }
        let mut result_args = Vec::new();
        arrow_domains(&result, &mut result_args);
        for t in result_args {
            pool(&t, &mut gen)?;
        }
        for args in tuples {
            cases.push(Case { def: name.to_string(), term: def.closed.clone(), args, result: result.clone() });
        }
    }
    let checker = Checker { prog, models, cfg, pools: &pools };
    let records = exec.map(&cases, |c| checker.run(c));
    let cases = records.into_iter().enumerate().map(|(i, r)| CaseRecord { index: i, ..r }).collect();
    Ok(BoundReport { program: program.to_string(), model: models.describe(), seed: cfg.seed, cases })
}

/// Splits off leading arguments that can be generated as inputs.
fn peel(t: &Type) -> (Vec<Type>, Type) {
    let mut doms = Vec::new();
    let mut cur = t.clone();
    while let Type::Arrow(a, b) = &cur {
        if !generable(a) {
            break;
        }
        doms.push((**a).clone());
        cur = (**b).clone();
    }
    (doms, cur)
}

/// First-order types, and functions between them.
fn generable(t: &Type) -> bool {
    fn first(t: &Type) -> bool {
        match t {
            Type::Unit | Type::Data(_) => true,
            Type::Prod(a, b) => first(a) && first(b),
            Type::Susp(a) => first(a),
            Type::Arrow(..) => false,
        }
    }
    match t {
        Type::Arrow(a, b) => first(a) && first(b),
        t => first(t),
    }
}

fn arrow_domains(t: &Type, out: &mut Vec<Type>) {
    match t {
        Type::Arrow(a, b) => {
            out.push((**a).clone());
            arrow_domains(b, out);
        }
        Type::Prod(a, b) => {
            arrow_domains(a, out);
            arrow_domains(b, out);
        }
        Type::Susp(a) => arrow_domains(a, out),
        _ => {}
    }
}

struct Checker<'a> {
    prog: &'a CheckedProgram,
    models: &'a ModelTable,
    cfg: &'a GenConfig,
    pools: &'a HashMap<Type, Vec<Value>>,
}

fn err(e: impl fmt::Display) -> Error {
    Error::Other(e.to_string())
}

impl<'a> Checker<'a> {
    fn run(&self, c: &Case) -> CaseRecord {
        let input = if c.args.is_empty() { "()".to_string() } else { c.args.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ") };
        let mut rec = CaseRecord { index: 0, def: c.def.clone(), input, cost: 0, bound: NInf::Inf, potential: Potential::Holds };
        match self.run_inner(c) {
            Ok((n, b, p)) => {
                rec.cost = n;
                rec.bound = b;
                rec.potential = p;
            }
            Err(e) => rec.potential = Potential::Error(e.to_string()),
        }
        rec
    }

    fn run_inner(&self, c: &Case) -> Result<(u64, NInf, Potential), Error> {
        let term = c.args.iter().fold(c.term.clone(), |f, a| Expr::app(f, a.to_expr()));
        let (v, n) = eval::run(&self.prog.signature, &term)?;
        let mut it = Interp::new(self.models);
        let whole = it.eval(&Env::new(), &translate_expr(&term))?;
        let bound = whole.cost_part(&mut it)?;
        let pot = it.proj(&whole, 1)?;
        let p = self.value_bounded(&mut it, &c.result, &v, &pot)?;
        Ok((n, bound, p))
    }

    /// v ⊑ p at type `t`.
    fn value_bounded(&self, it: &mut Interp, t: &Type, v: &Value, p: &SemVal) -> Result<Potential, Error> {
        Ok(match (t, v) {
            (Type::Unit, _) => Potential::Holds,
            (Type::Data(_), v) => {
                let s = self.models.value_size(&self.prog.signature, v)?;
                match it.leq(&SemVal::Elem(s.clone()), p)? {
                    Some(true) => Potential::Holds,
                    _ => Potential::Violated(format!("size {s} of {v} exceeds potential {}", it.deep_force(p)?)),
                }
            }
            (Type::Prod(a, b), Value::Pair(x, y)) => {
                let p0 = it.proj(p, 0)?;
                let p1 = it.proj(p, 1)?;
                self.value_bounded(it, a, x, &p0)?.and(self.value_bounded(it, b, y, &p1)?)
            }
            (Type::Susp(a), Value::Delay(e)) => {
                let (w, n) = eval::run(&self.prog.signature, e)?;
                self.complexity_bounded(it, a, n, &w, p, "forced")?
            }
            (Type::Arrow(a, b), f) => {
                let args = self.pools.get(&**a).cloned().unwrap_or_default();
                let mut acc = Potential::Sampled;
                for w in args.iter().take(self.cfg.fn_samples.max(1)) {
                    let (r, n) = eval::run(&self.prog.signature, &Expr::app(f.to_expr(), w.to_expr()))?;
                    let wc = it.eval(&Env::new(), &translate_expr(&w.to_expr()))?;
                    let wp = it.proj(&wc, 1)?;
                    let q = it.apply(p, wp)?;
                    acc = acc.and(self.complexity_bounded(it, b, n, &r, &q, &format!("applied to {w}"))?);
                }
                acc.and(Potential::Sampled)
            }
            (t, v) => return Err(err(format!("value {v} does not have type {t}"))),
        })
    }

    fn complexity_bounded(&self, it: &mut Interp, t: &Type, n: u64, v: &Value, q: &SemVal, what: &str) -> Result<Potential, InterpError> {
        let c = q.cost_part(it)?;
        if NInf::Fin(n) > c {
            return Ok(Potential::Violated(format!("{what}: cost {n} exceeds {c}")));
        }
        let qp = it.proj(q, 1)?;
        self.value_bounded(it, t, v, &qp).map_err(|e| InterpError::IllTyped(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::corpus;
    use crate::size::load_models;
    use crate::translate::translate_sig;

    fn models(prog: &CheckedProgram, cfg: &str) -> ModelTable {
        load_models(cfg, &translate_sig(&prog.signature)).unwrap()
    }

    #[test]
    fn mem_small_trees() {
        let p = corpus::load("mem").unwrap();
        let m = models(&p, "model bool = unitsize\nmodel int = unitsize\nmodel tree = nodes");
        let cfg = GenConfig { max_size: 3, samples: 30, ..GenConfig::default() };
        let r = check_bound(&p, "mem", &m, &cfg).unwrap();
        assert!(r.cases.len() >= 20);
        assert!(r.all_pass(), "{r}");
    }

    #[test]
    fn idnat_unitsize_passes_with_infinite_bounds() {
        let p = corpus::load("idnat").unwrap();
        let m = models(&p, "model nat = unitsize");
        let r = check_bound(&p, "id", &m, &GenConfig::default()).unwrap();
        assert!(r.all_pass(), "{r}");
        assert!(r.cases.iter().all(|c| c.bound == NInf::Inf));
    }

    #[test]
    fn reports_are_deterministic_and_order_independent() {
        let p = corpus::load("treemap").unwrap();
        let m = models(&p, "model tree = pair(nodes, labelmax nat)");
        let cfg = GenConfig { samples: 12, seed: 3, ..GenConfig::default() };
        let a = check_defs(&p, "treemap", &[], &m, &cfg, Exec::Sequential).unwrap();
        let b = check_defs(&p, "treemap", &[], &m, &cfg, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.all_pass(), "{a}");
    }

    #[test]
    fn a_wrong_bound_is_reported() {
        // A record whose bound is below the observed cost.
        let p = corpus::load("idnat").unwrap();
        let m = models(&p, "");
        let r = check_bound(&p, "id", &m, &GenConfig::default()).unwrap();
        let mut bad = r.clone();
        bad.cases[1].bound = NInf::ZERO;
        assert!(!bad.all_pass());
        assert!(bad.to_string().contains("result=fail seed=0"));
    }
}
