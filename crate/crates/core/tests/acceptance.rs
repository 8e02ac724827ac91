//! End-to-end acceptance checks. Prints one line per criterion and exits
//! nonzero if any of them fails or runs over its time limit.

use std::fmt::Display;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use costrec::complexity::{ctypecheck, parse_cexpr};
use costrec::eval::{self, evaluate, EvalOptions};
use costrec::harness::{
    canonical_functions, check_defs, corpus, gen_values, model_suite, Exec, GenConfig, TermGen, ValueGen, TERM_SIGNATURE,
};
use costrec::interp::{tabulate, tabulate_expr, tabulation_grid, Env, Interp, SemVal};
use costrec::preorder::{cost_literal, leq, list_axioms, normalize, AxiomSet, LeqResult};
use costrec::size::{load_models, Elem, ModelTable, NInf};
use costrec::source::{check_program, parse_program, Branch, CheckedProgram, Expr, Type, Value};
use costrec::translate::{complexity_type, translate_expr, translate_sig};
use costrec::Ident;

type Outcome = Result<String, String>;

/// (function, m, s, cost at (m, s), cost of f at s)
type GridPoint = (String, u64, u64, NInf, NInf);

type Criterion = (&'static str, &'static str, u64, fn() -> Outcome);

fn s<E: Display>(e: E) -> String {
    e.to_string()
}

fn term_program() -> CheckedProgram {
    check_program(&parse_program(TERM_SIGNATURE).unwrap()).unwrap()
}

fn models(p: &CheckedProgram, cfg: &str) -> Result<ModelTable, String> {
    load_models(cfg, &translate_sig(&p.signature)).map_err(s)
}

/// Wraps `e` in `k` applications of the identity at `t`.
fn pad(e: Arc<Expr>, t: &Type, k: usize) -> Arc<Expr> {
    (0..k).fold(e, |e, _| Expr::app(Expr::lam("y", Some(t.clone()), Expr::var("y")), e))
}

fn conditional_law() -> Outcome {
    let p = term_program();
    let m = models(&p, "model bool = unitsize")?;
    let mut g = TermGen::new(&p.signature, 101);
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let bool_t = Type::data("bool");
    let types = [Type::Unit, bool_t.clone(), Type::data("nat"), Type::prod(Type::data("nat"), bool_t.clone()), Type::data("list")];
    for i in 0..20 {
        let t = types.choose(&mut rng).unwrap().clone();
        let b = pad(g.closed(&bool_t, 2), &bool_t, rng.gen_range(0..3));
        let e0 = pad(g.closed(&t, 2), &t, rng.gen_range(0..4));
        let e1 = pad(g.closed(&t, 2), &t, rng.gen_range(0..4));
        let branches: Vec<Branch> = vec![
            Branch { ctor: Ident::new("True"), var: Ident::new("u0"), body: e0.clone() },
            Branch { ctor: Ident::new("False"), var: Ident::new("u1"), body: e1.clone() },
        ];
        let case = Arc::new(Expr::Rec { scrut: b.clone(), branches: branches.into(), ann: Some(t.clone()) });
        let elab = |e: &Arc<Expr>, t: &Type| p.elaborate_checked(e, t).map_err(|err| format!("pair {i}: {e}: {err}"));
        let (case, b, e0, e1) = (elab(&case, &t)?, elab(&b, &bool_t)?, elab(&e0, &t)?, elab(&e1, &t)?);

        let mut it = Interp::new(&m);
        let env = Env::new();
        let mut complexity = |e: &Arc<Expr>| -> Result<SemVal, String> { it.eval(&env, &translate_expr(e)).map_err(s) };
        let (whole, vb, v0, v1) = (complexity(&case)?, complexity(&b)?, complexity(&e0)?, complexity(&e1)?);
        let mut it = Interp::new(&m);
        let cost = |it: &mut Interp, v: &SemVal| -> Result<NInf, String> {
            let c = it.proj(v, 0).map_err(s)?;
            it.as_cost(&c).map_err(s)
        };
        let pot = |it: &mut Interp, v: &SemVal| -> Result<String, String> {
            let q = it.proj(v, 1).map_err(s)?;
            Ok(it.deep_force(&q).map_err(s)?.render())
        };
        let joined = it.join(&v0, &v1).map_err(s)?;
        let want_cost = NInf::Fin(1) + cost(&mut it, &vb)? + cost(&mut it, &joined)?;
        let got_cost = cost(&mut it, &whole)?;
        let (want_pot, got_pot) = (pot(&mut it, &joined)?, pot(&mut it, &whole)?);
        if got_cost != want_cost || got_pot != want_pot {
            return Err(format!("pair {i} at {t}: got ({got_cost}, {got_pot}), want ({want_cost}, {want_pot})"));
        }
    }
    Ok("pairs=20".into())
}

fn mem_recurrence() -> Outcome {
    let p = corpus::load("mem").map_err(s)?;
    let m = models(&p, "model bool = unitsize\nmodel int = unitsize\nmodel tree = nodes")?;
    let ce = translate_expr(&p.def("mem").unwrap().closed);
    let mut it = Interp::new(&m);
    let whole = it.eval(&Env::new(), &ce).map_err(s)?;
    let pot = it.proj(&whole, 1).map_err(s)?;
    let mut want = vec![1u64];
    for n in 1..=6usize {
        let best = (0..n).map(|n0| 6 + want[n0] + want[n - 1 - n0]).max().unwrap();
        want.push(best);
    }
    for (n, w) in want.iter().enumerate() {
        let r = it.apply(&pot, SemVal::Elem(Elem::n(n as u64))).map_err(s)?;
        let f = it.proj(&r, 1).map_err(s)?;
        let r = it.apply(&f, SemVal::Elem(Elem::Point)).map_err(s)?;
        let g = r.cost_part(&mut it).map_err(s)?;
        if g != NInf::Fin(*w) {
            return Err(format!("g({n}) = {g}, want {w}"));
        }
    }
    Ok(format!("g={want:?}"))
}

/// Cost of the potential of `treemap f` at each (m, s) in 0..=5, with the
/// cost of the potential of `f` at `s`, for every canonical `f`.
fn treemap_grid() -> Result<Vec<GridPoint>, String> {
    let p = corpus::load("treemap").map_err(s)?;
    let m = models(&p, "model nat = nodes\nmodel tree = pair(nodes, labelmax nat)")?;
    let nat = Type::data("nat");
    let consts = gen_values(&p, &m, &nat, &GenConfig::default()).map_err(s)?;
    let treemap = p.def("treemap").unwrap();
    let sizes: Vec<Elem> = (0..=5u64).flat_map(|a| (0..=5u64).map(move |b| Elem::Tuple(vec![Elem::n(a), Elem::n(b)]))).collect();
    let mut out = Vec::new();
    for (name, f) in canonical_functions(&p, &nat, &nat, &consts).map_err(s)? {
        let fc = tabulate_expr(&f.to_expr(), &Type::arrow(nat.clone(), nat.clone()), &m, &(0..=5).map(Elem::n).collect::<Vec<_>>()).map_err(s)?;
        let e = Expr::app(treemap.closed.clone(), f.to_expr());
        let tree = Type::data("tree");
        let rows = tabulate_expr(&e, &Type::arrow(tree.clone(), tree), &m, &sizes).map_err(s)?;
        for r in rows {
            let (a, b) = (r.size.component(0).as_ninf().finite().unwrap(), r.size.component(1).as_ninf().finite().unwrap());
            out.push((name.clone(), a, b, r.cost, fc[b as usize].cost));
        }
    }
    Ok(out)
}

fn times(m: u64, x: NInf) -> NInf {
    (0..m).map(|_| x).sum()
}

fn treemap_bound() -> Outcome {
    let grid = treemap_grid()?;
    let mut failures = Vec::new();
    for (f, m, sz, c, fc) in &grid {
        let bound = times(*m, NInf::Fin(1) + *fc) + NInf::Fin(1);
        if *c > bound {
            failures.push(format!("{f}@({m},{sz}): {c} > {bound}"));
        }
    }
    if failures.is_empty() {
        Ok(format!("points={}", grid.len()))
    } else {
        Err(format!("{} of {} points exceed m*(1+f_c(s))+1, first: {}", failures.len(), grid.len(), failures[0]))
    }
}

fn treemap_exact() -> Outcome {
    let grid = treemap_grid()?;
    for (f, m, sz, c, fc) in &grid {
        let exact = NInf::Fin(1) + times(*m, NInf::Fin(3) + *fc);
        if *c != exact {
            return Err(format!("{f}@({m},{sz}): {c} != {exact}"));
        }
    }
    Ok(format!("points={}", grid.len()))
}

fn bounding() -> Outcome {
    let cfg = GenConfig { max_size: 5, samples: 12, seed: 1, fn_samples: 3 };
    let (mut cases, mut cost_v, mut pot_v, mut programs) = (0, 0, 0, 0);
    for name in corpus::VERIFIABLE {
        let p = corpus::load(name).map_err(s)?;
        programs += 1;
        for (suite, m) in model_suite(&translate_sig(&p.signature)).map_err(s)? {
            let r = check_defs(&p, name, &[], &m, &cfg, Exec::default()).map_err(|e| format!("{name} under {suite}: {e}"))?;
            cases += r.cases.len();
            cost_v += r.cost_violations();
            pot_v += r.potential_violations();
        }
    }
    let detail = format!("programs={programs} cases={cases} cost_violations={cost_v} potential_violations={pot_v}");
    if programs >= 7 && cases >= 200 && cost_v == 0 && pot_v == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn exact_costs() -> Outcome {
    let cfg = GenConfig { max_size: 3, samples: 4, seed: 7, fn_samples: 2 };
    let mut instances = 0;
    for name in corpus::VERIFIABLE {
        let p = corpus::load(name).map_err(s)?;
        let cs = translate_sig(&p.signature);
        let m = ModelTable::defaults(&cs);
        let mut closed: Vec<Arc<Expr>> = Vec::new();
        for d in &p.defs {
            let mut args = Vec::new();
            let mut t = d.ty.clone();
            while let Type::Arrow(a, b) = t {
                args.push(*a);
                t = *b;
            }
            if args.is_empty() {
                closed.push(d.closed.clone());
                continue;
            }
            let mut vg = ValueGen::new(&p, &m, &cfg);
            let Ok(pools) = args.iter().map(|a| vg.values(a)).collect::<Result<Vec<Vec<Value>>, _>>() else { continue };
            for k in 0..cfg.samples {
                let e = pools.iter().fold(d.closed.clone(), |e, pool| Expr::app(e, pool[(k * 7 + 3) % pool.len()].to_expr()));
                closed.push(e);
            }
        }
        for e in closed {
            let (_, n) = eval::run(&p.signature, &e).map_err(|err| format!("{name}: {e}: {err}"))?;
            let nf = normalize(&cs, &translate_expr(&e)).map_err(|err| format!("{name}: {err}"))?;
            match cost_literal(&nf) {
                Some(c) if c == n => instances += 1,
                c => return Err(format!("{name}: {e}: normal form cost {c:?}, evaluation cost {n}")),
            }
        }
    }
    if instances >= 30 {
        Ok(format!("instances={instances}"))
    } else {
        Err(format!("only {instances} instances"))
    }
}

fn infinite_costs() -> Outcome {
    let p = corpus::load("idnat").map_err(s)?;
    let unit = models(&p, "model nat = unitsize")?;
    let rows = tabulate(&p, "id", &unit, &tabulation_grid(&p, "id", &unit, 0, 5).map_err(s)?).map_err(s)?;
    if rows.is_empty() || rows.iter().any(|r| r.cost != NInf::Inf) {
        return Err(format!("unitsize costs: {:?}", rows.iter().map(|r| r.cost.to_string()).collect::<Vec<_>>()));
    }
    let ctors = models(&p, "")?;
    let rows = tabulate(&p, "id", &ctors, &tabulation_grid(&p, "id", &ctors, 0, 5).map_err(s)?).map_err(s)?;
    let costs: Vec<NInf> = rows.iter().map(|r| r.cost).collect();
    if costs.iter().any(|c| c.is_inf()) || costs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("ctors costs: {costs:?}"));
    }
    Ok(format!("ctors={:?}", costs.iter().map(|c| c.to_string()).collect::<Vec<_>>()))
}

fn type_preservation() -> Outcome {
    let p = term_program();
    let cs = translate_sig(&p.signature);
    let mut g = TermGen::new(&p.signature, 7);
    for i in 0..500 {
        let t = g.ty(2);
        let e = g.closed(&t, 3);
        let e = p.elaborate_checked(&e, &t).map_err(|err| format!("term {i} does not elaborate: {err}"))?;
        let ct = ctypecheck(&cs, &[], &translate_expr(&e)).map_err(|err| format!("term {i}: {e}: {err}"))?;
        if ct != complexity_type(&t) {
            return Err(format!("term {i}: {e}: type {ct}, want {}", complexity_type(&t)));
        }
    }
    Ok("terms=500".into())
}

fn lemmas() -> Outcome {
    let p = term_program();
    let mut g = TermGen::new(&p.signature, 13);
    for i in 0..500 {
        let t = g.ty(2);
        let e = p.elaborate_checked(&g.value(&t, 3), &t).map_err(|err| format!("value {i}: {err}"))?;
        let v = e.as_value().ok_or_else(|| format!("value {i}: {e} is not a value"))?;
        let r = evaluate(&p.signature, &e, EvalOptions::default()).map_err(|err| format!("value {i}: {err}"))?;
        if r.value != v || r.cost != 0 {
            return Err(format!("value {i}: {e} evaluates to {} at cost {}", r.value, r.cost));
        }
    }
    for i in 0..100 {
        let (e, _) = p.elaborate(&g.map_instance(2)).map_err(|err| format!("map {i}: {err}"))?;
        let r = evaluate(&p.signature, &e, EvalOptions::default()).map_err(|err| format!("map {i}: {e}: {err}"))?;
        if r.cost != 0 {
            return Err(format!("map {i}: {e} costs {}", r.cost));
        }
    }
    Ok("values=500 maps=100".into())
}

fn preorder_lists() -> Outcome {
    let p = check_program(&parse_program("datatype nat = Zero of unit | Succ of self;\ndatatype list = Nil of unit | Cons of nat * self;").unwrap()).unwrap();
    let cs = translate_sig(&p.signature);
    let ax = AxiomSet { lists: vec![list_axioms(&cs, &Ident::new("list")).map_err(s)?] };
    let elems = ["x", "y", "Zero()", "Succ(Zero())", "Succ(x)", "fst q"];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let rec = |l: &str| format!("rec[cost]({l}; Nil -> u. 0 | Cons -> p. 1 + snd (snd p))");
    let mut checked = 0;
    for len in 0..=5 {
        for _ in 0..8 {
            let l = (0..len).fold("Nil()".to_string(), |tl, _| format!("Cons({}, {tl})", elems.choose(&mut rng).unwrap()));
            let parse = |t: &str| parse_cexpr(t).map_err(|e| format!("{t}: {e}"));
            if leq(&cs, &ax, &parse("Nil()")?, &parse(&l)?) != LeqResult::Derivable {
                return Err(format!("Nil() <= {l} not derived"));
            }
            if leq(&cs, &ax, &parse(&rec("Nil()"))?, &parse(&rec(&l))?) != LeqResult::Derivable {
                return Err(format!("{} <= {} not derived", rec("Nil()"), rec(&l)));
            }
            checked += 2;
        }
    }
    Ok(format!("judgements={checked}"))
}

fn semrec() -> Outcome {
    let mut cases = 0;
    for name in ["listmap", "foldsum"] {
        let p = corpus::load(name).map_err(s)?;
        let m = models(&p, "model nat = length\nmodel list = length\nsemrec list")?;
        let cfg = GenConfig { max_size: 5, samples: 12, seed: 1, fn_samples: 3 };
        let r = check_defs(&p, name, &[], &m, &cfg, Exec::default()).map_err(s)?;
        if !r.all_pass() {
            return Err(format!("{name}: {}", r.summary()));
        }
        cases += r.cases.len();
    }
    Ok(format!("cases={cases}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("1", "conditional-law", 5, conditional_law),
        ("2", "mem-recurrence", 10, mem_recurrence),
        ("3", "treemap-bound", 30, treemap_bound),
        ("3x", "treemap-exact-cost", 30, treemap_exact),
        ("4", "bounding", 120, bounding),
        ("5", "exact-cost-model", 60, exact_costs),
        ("6", "infinite-costs", 5, infinite_costs),
        ("7", "type-preservation", 30, type_preservation),
        ("8", "value-and-map-lemmas", 30, lemmas),
        ("9", "list-preorder", 10, preorder_lists),
        ("10", "semrec-lists", 30, semrec),
    ];
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = std::thread::Builder::new()
            .stack_size(costrec::harness::STACK_SIZE)
            .spawn(check)
            .unwrap()
            .join()
            .unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= Duration::from_secs(limit) => (true, d),
            Ok(d) => (false, format!("{d} over time limit")),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion={id} name={name} result={} time={:.2}s limit={limit}s detail={detail:?}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
