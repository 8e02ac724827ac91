//! Big-step, substitution-based evaluation with step counting. Applications
//! and recursor unfoldings cost one step each; every other rule is free.

use std::sync::Arc;

use crate::error::EvalError;
use crate::ident::{fresh_name, Ident};
use crate::source::{subst, Expr, Functor, Signature, Type, Value};

pub const DEFAULT_FUEL: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub rule: &'static str,
    pub delta: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalResult {
    pub value: Value,
    pub cost: u64,
    pub trace: Option<Vec<TraceEntry>>,
}

#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    pub fuel: u64,
    pub trace: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { fuel: DEFAULT_FUEL, trace: false }
    }
}

pub fn evaluate(sig: &Signature, e: &Arc<Expr>, opts: EvalOptions) -> Result<EvalResult, EvalError> {
    let mut ev = Evaluator { sig, fuel: opts.fuel, used: 0, trace: opts.trace.then(Vec::new) };
    let (value, cost) = ev.eval(e)?;
    Ok(EvalResult { value, cost, trace: ev.trace })
}

/// Shorthand for `evaluate` with default options, returning value and cost.
pub fn run(sig: &Signature, e: &Arc<Expr>) -> Result<(Value, u64), EvalError> {
    evaluate(sig, e, EvalOptions::default()).map(|r| (r.value, r.cost))
}

/// The map rules on a value target. `ann` is the binder's type, carried into
/// the let+map wrapper built for arrow positions.
pub fn eval_map(sig: &Signature, functor: &Functor, var: &Ident, ann: &Option<Type>, body: &Arc<Expr>, target: &Value) -> Result<Value, EvalError> {
    let mut ev = Evaluator { sig, fuel: DEFAULT_FUEL, used: 0, trace: None };
    ev.map(functor, var, ann, body, target)
}

struct Evaluator<'s> {
    sig: &'s Signature,
    fuel: u64,
    used: u64,
    trace: Option<Vec<TraceEntry>>,
}

fn stuck<T>(e: &Expr, reason: &str) -> Result<T, EvalError> {
    let mut term = e.to_string();
    if term.len() > 120 {
        term.truncate(117);
        term.push_str("...");
    }
    Err(EvalError::Stuck { term, reason: reason.to_string() })
}

impl Evaluator<'_> {
    fn tick(&mut self, rule: &'static str, delta: u64) -> Result<(), EvalError> {
        self.used += 1;
        if self.used > self.fuel {
            return Err(EvalError::FuelExhausted(self.fuel));
        }
        if let Some(t) = &mut self.trace {
            t.push(TraceEntry { rule, delta });
        }
        Ok(())
    }

    fn eval(&mut self, e: &Arc<Expr>) -> Result<(Value, u64), EvalError> {
        match &**e {
            Expr::Var(_) => stuck(e, "free variable"),
            Expr::Unit => {
                self.tick("unit", 0)?;
                Ok((Value::Unit, 0))
            }
            Expr::Pair(a, b) => {
                self.tick("pair", 0)?;
                let (va, na) = self.eval(a)?;
                let (vb, nb) = self.eval(b)?;
                Ok((Value::pair(va, vb), na + nb))
            }
            Expr::Split { scrut, left, right, body } => {
                self.tick("split", 0)?;
                let (v, n0) = self.eval(scrut)?;
                let Value::Pair(v0, v1) = v else { return stuck(e, "split of a non-pair") };
                let body = if left == right {
                    subst(body, &[(right.clone(), v1.to_expr())])
                } else {
                    subst(body, &[(left.clone(), v0.to_expr()), (right.clone(), v1.to_expr())])
                };
                let (v, n1) = self.eval(&body)?;
                Ok((v, n0 + n1))
            }
            Expr::Lam { var, ann, body } => {
                self.tick("lam", 0)?;
                Ok((Value::Lam { var: var.clone(), ann: ann.clone(), body: body.clone() }, 0))
            }
            Expr::App(f, a) => {
                self.tick("app", 1)?;
                let (vf, n0) = self.eval(f)?;
                let Value::Lam { var, body, .. } = vf else { return stuck(e, "application of a non-function") };
                let (va, n1) = self.eval(a)?;
                let (v, n) = self.eval(&subst(&body, &[(var, va.to_expr())]))?;
                Ok((v, 1 + n0 + n1 + n))
            }
            Expr::Delay(a) => {
                self.tick("delay", 0)?;
                Ok((Value::Delay(a.clone()), 0))
            }
            Expr::Force(a) => {
                self.tick("force", 0)?;
                let (v, n0) = self.eval(a)?;
                let Value::Delay(body) = v else { return stuck(e, "force of a non-suspension") };
                let (v, n1) = self.eval(&body)?;
                Ok((v, n0 + n1))
            }
            Expr::Con(c, a) => {
                self.tick("con", 0)?;
                let (v, n) = self.eval(a)?;
                Ok((Value::Con(c.clone(), Arc::new(v)), n))
            }
            Expr::Rec { scrut, branches, ann } => {
                self.tick("rec", 1)?;
                let (v, n0) = self.eval(scrut)?;
                let Value::Con(c, v0) = v else { return stuck(e, "recursion on a non-constructor") };
                let Some(info) = self.sig.ctor(c.as_str()) else { return stuck(e, "unknown constructor") };
                let Some(br) = branches.iter().find(|b| b.ctor == c) else { return stuck(e, "no matching branch") };
                // map^{φ_C}(y. (y, delay(rec(y; branches))), v0)
                // The term is closed, so `y` cannot capture anything in the branches.
                let y = Ident::new("y");
                let yv = Arc::new(Expr::Var(y.clone()));
                let rec_y = Arc::new(Expr::Rec { scrut: yv.clone(), branches: branches.clone(), ann: ann.clone() });
                let mbody = Expr::pair(yv, Arc::new(Expr::Delay(rec_y)));
                let dt = Some(Type::Data(info.datatype.clone()));
                let arg = info.arg.clone();
                let v1 = self.map(&arg, &y, &dt, &mbody, &v0)?;
                let (v, n2) = self.eval(&subst(&br.body, &[(br.var.clone(), v1.to_expr())]))?;
                Ok((v, 1 + n0 + n2))
            }
            Expr::Map { functor, var, ann, body, target } => {
                self.tick("map", 0)?;
                let (t, n) = self.eval(target)?;
                debug_assert_eq!(n, 0, "map targets are values");
                let v = self.map(functor, var, ann, body, &t)?;
                Ok((v, n))
            }
            Expr::Let { bound, var, body } => {
                self.tick("let", 0)?;
                let (v0, n0) = self.eval(bound)?;
                let (v, n1) = self.eval(&subst(body, &[(var.clone(), v0.to_expr())]))?;
                Ok((v, n0 + n1))
            }
        }
    }

    fn map(&mut self, functor: &Functor, var: &Ident, ann: &Option<Type>, body: &Arc<Expr>, target: &Value) -> Result<Value, EvalError> {
        match functor {
            Functor::SelfRef => {
                self.tick("map-self", 0)?;
                let (v, n) = self.eval(&subst(body, &[(var.clone(), target.to_expr())]))?;
                debug_assert_eq!(n, 0, "map bodies are values");
                Ok(v)
            }
            Functor::Const(_) => {
                self.tick("map-const", 0)?;
                Ok(target.clone())
            }
            Functor::Prod(a, b) => {
                self.tick("map-prod", 0)?;
                let Value::Pair(v0, v1) = target else { return stuck(&target.to_expr(), "map over a product needs a pair") };
                Ok(Value::pair(self.map(a, var, ann, body, v0)?, self.map(b, var, ann, body, v1)?))
            }
            Functor::Arrow(_, cod) => {
                self.tick("map-arrow", 0)?;
                let Value::Lam { var: y, ann: yann, body: e } = target else {
                    return stuck(&target.to_expr(), "map over an arrow needs a function")
                };
                // λy. let(e, z. map^φ(x.v, z))
                // Closed evaluation: the map body's only free variable is `var`.
                let z = fresh_name("z", |n| n == var.as_str());
                let inner = Arc::new(Expr::Map {
                    functor: (**cod).clone(),
                    var: var.clone(),
                    ann: ann.clone(),
                    body: body.clone(),
                    target: Arc::new(Expr::Var(z.clone())),
                });
                let wrapped = Arc::new(Expr::Let { bound: e.clone(), var: z, body: inner });
                Ok(Value::Lam { var: y.clone(), ann: yann.clone(), body: wrapped })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::{check_program, parse_expr, parse_functor, parse_program};

    fn prog(s: &str) -> crate::source::CheckedProgram {
        check_program(&parse_program(s).unwrap()).unwrap()
    }

    const NAT: &str = "datatype nat = Zero of unit | Succ of self;";

    fn run_in(p: &crate::source::CheckedProgram, s: &str) -> (Value, u64) {
        let (e, _) = p.expr(s).unwrap();
        run(&p.signature, &e).unwrap()
    }

    #[test]
    fn identity_application_costs_one() {
        let p = prog("");
        assert_eq!(run_in(&p, "(fn x. x) ()"), (Value::Unit, 1));
    }

    #[test]
    fn delay_is_free() {
        let p = prog("");
        let (v, n) = run_in(&p, "delay ((fn x. x) ())");
        assert!(matches!(v, Value::Delay(_)));
        assert_eq!(n, 0);
    }

    #[test]
    fn rec_unfold_costs_one() {
        let p = prog(NAT);
        assert_eq!(run_in(&p, "rec(Zero(); Zero -> _. () | Succ -> p. ())"), (Value::Unit, 1));
    }

    #[test]
    fn trace_sums_to_cost() {
        let p = prog(&format!("{NAT} def dbl : nat -> nat = fn n. rec(n; Zero -> u. Zero() | Succ -> (m, r). Succ(Succ(force r)));"));
        let (e, _) = p.expr("dbl (Succ(Succ(Zero())))").unwrap();
        let r = evaluate(&p.signature, &e, EvalOptions { trace: true, ..Default::default() }).unwrap();
        let t = r.trace.unwrap();
        assert_eq!(r.cost, t.iter().map(|x| x.delta).sum::<u64>());
        let charged = t.iter().filter(|x| x.rule == "app" || x.rule == "rec").count() as u64;
        assert_eq!(r.cost, charged);
        assert_eq!(r.cost, 4);
        assert_eq!(r.value.to_string(), "Succ(Succ(Succ(Succ(Zero()))))");
    }

    #[test]
    fn map_rules() {
        let p = prog(NAT);
        let sig = &p.signature;
        let x = Ident::new("x");
        let body = Expr::pair(Expr::var("x"), parse_expr("delay r").unwrap());
        let v = Value::con("Zero", Value::Unit);
        let out = eval_map(sig, &Functor::SelfRef, &x, &None, &body, &v).unwrap();
        assert_eq!(out.to_string(), "(Zero(), delay r)");
        let out = eval_map(sig, &Functor::Const(Type::Unit), &x, &None, &body, &Value::Unit).unwrap();
        assert_eq!(out, Value::Unit);
        let f = parse_functor("self * unit").unwrap();
        let out = eval_map(sig, &f, &x, &None, &Expr::var("x"), &Value::pair(v.clone(), Value::Unit)).unwrap();
        assert_eq!(out, Value::pair(v, Value::Unit));
        let f = parse_functor("unit -> self").unwrap();
        let lam = parse_expr("fn u. Zero()").unwrap().as_value().unwrap();
        let out = eval_map(sig, &f, &x, &None, &body, &lam).unwrap();
        assert_eq!(out.to_string(), "fn u. let z = Zero() in map[self](x. (x, delay r); z)");
    }

    #[test]
    fn stuck_and_fuel() {
        let p = prog(NAT);
        let e = parse_expr("() ()").unwrap();
        assert!(matches!(run(&p.signature, &e), Err(EvalError::Stuck { .. })));
        let (e, _) = p.expr("(fn x. x) ((fn y. y) ())").unwrap();
        let r = evaluate(&p.signature, &e, EvalOptions { fuel: 3, trace: false });
        assert_eq!(r.unwrap_err(), EvalError::FuelExhausted(3));
    }
}
