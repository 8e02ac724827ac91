use std::sync::Arc;

use costrec::complexity::{alpha_eq, parse_cexpr, CExpr, CSignature};
use costrec::eval;
use costrec::harness::corpus;
use costrec::preorder::{
    canonical_costs, cost_literal, leq, normalize, rewrite_normalize, AxiomSet, LeqResult, ListAxioms, Positions, Rule,
};
use costrec::source::{check_program, parse_program};
use costrec::translate::{translate_expr, translate_sig};
use costrec::Ident;

const LISTS: &str = "
    datatype nat = Zero of unit | Succ of self;
    datatype list = Nil of unit | Cons of nat * self;
";

fn csig() -> CSignature {
    translate_sig(&check_program(&parse_program(LISTS).unwrap()).unwrap().signature)
}

fn c(s: &str) -> Arc<CExpr> {
    parse_cexpr(s).unwrap()
}

fn list_axioms() -> AxiomSet {
    AxiomSet { lists: vec![ListAxioms { datatype: Ident::new("list"), nil: Ident::new("Nil"), cons: Ident::new("Cons") }] }
}

#[test]
fn normalize_examples() {
    let cs = csig();
    assert_eq!(normalize(&cs, &c("0 + (1 + 0)")).unwrap().to_string(), "1");
    assert_eq!(normalize(&cs, &c("fst (1, x)")).unwrap().to_string(), "1");
    let p = check_program(&parse_program(LISTS).unwrap()).unwrap();
    let (e, _) = p.expr("(fn x. x) ()").unwrap();
    assert_eq!(normalize(&cs, &translate_expr(&e)).unwrap().to_string(), "(1, ())");
}

#[test]
fn normal_forms_of_open_terms() {
    let cs = csig();
    assert_eq!(normalize(&cs, &c("fn x : cost. (fn y : cost. y + 1) x + 0 + 2")).unwrap().to_string(), "fn x : cost. 3 + x");
    let e = c("rec[cost](l; Nil -> u. 0 | Cons -> p. 1 + snd (snd p))");
    let nf = normalize(&cs, &e).unwrap();
    assert!(matches!(&*nf, CExpr::Rec { .. }), "{nf}");
    let e = c("rec[cost](Cons(Zero(), Cons(Zero(), l)); Nil -> u. 0 | Cons -> p. 1 + snd (snd p))");
    // Unrolls twice, then stops at the variable.
    let nf = normalize(&cs, &e).unwrap().to_string();
    assert!(nf.starts_with("2 + rec"), "{nf}");
}

#[test]
fn corpus_costs_are_exact() {
    let mut count = 0;
    for name in corpus::VERIFIABLE {
        let p = corpus::load(name).unwrap();
        let main = p.def("main").unwrap();
        let (_, n) = eval::run(&p.signature, &main.closed).unwrap();
        let cs = translate_sig(&p.signature);
        let nf = normalize(&cs, &translate_expr(&main.closed)).unwrap();
        assert_eq!(cost_literal(&nf), Some(n), "{name}: {nf}");
        count += 1;
    }
    assert_eq!(count, 8);
}

#[test]
fn normalize_is_idempotent_and_matches_rewriting() {
    for name in ["idnat", "listmap", "conditional", "foldsum"] {
        let p = corpus::load(name).unwrap();
        let cs = translate_sig(&p.signature);
        let t = translate_expr(&p.def("main").unwrap().closed);
        let nf = normalize(&cs, &t).unwrap();
        assert!(alpha_eq(&normalize(&cs, &nf).unwrap(), &nf), "{name}");
        let (rw, steps) = rewrite_normalize(&cs, &t, Positions::Everywhere, 1_000_000).unwrap();
        assert!(alpha_eq(&canonical_costs(&rw, true), &nf), "{name}: {rw} vs {nf}");
        assert!(steps.iter().any(|s| s.rule == Rule::RecUnroll) || name == "conditional");
    }
}

#[test]
fn unrolling_matches_the_rule() {
    let cs = csig();
    let e = c("rec[cost](Cons(Zero(), Nil()); Nil -> u. 0 | Cons -> p. 1 + snd (snd p))");
    let (r, steps) = rewrite_normalize(&cs, &e, Positions::Everywhere, 1000).unwrap();
    assert_eq!(steps[0].rule, Rule::RecUnroll);
    assert!(steps[0].position.is_empty());
    assert_eq!(canonical_costs(&r, true).to_string(), "1");
    assert_eq!(normalize(&cs, &e).unwrap().to_string(), "1");
}

#[test]
fn leq_examples() {
    let cs = csig();
    let none = AxiomSet::none();
    let ax = list_axioms();
    let e = c("(fn x : cost. x) 1");
    assert_eq!(leq(&cs, &none, &e, &e), LeqResult::Derivable);
    assert_eq!(leq(&cs, &none, &c("1"), &e), LeqResult::Derivable);
    // Step rules only shrink: a reduct is below its redex, not conversely.
    assert_eq!(leq(&cs, &none, &e, &c("1")), LeqResult::NotDerived);
    assert_eq!(leq(&cs, &none, &c("Nil()"), &c("Cons(x, Nil())")), LeqResult::NotDerived);
    assert_eq!(leq(&cs, &ax, &c("Nil()"), &c("Cons(x, Nil())")), LeqResult::Derivable);
    assert_eq!(leq(&cs, &ax, &c("Cons(Zero(), Nil())"), &c("Cons(Succ(Zero()), Cons(x, Nil()))")), LeqResult::Derivable);
    let r = |s: &str| c(&format!("rec[cost]({s}; Nil -> u. 0 | Cons -> p. 1 + snd (snd p))"));
    assert_eq!(leq(&cs, &ax, &r("Nil()"), &r("Cons(x, Cons(y, Nil()))")), LeqResult::Derivable);
    assert_eq!(leq(&cs, &ax, &c("0"), &r("Cons(x, Cons(y, Nil()))")), LeqResult::Derivable);
    // Nothing relates the empty list to an unknown one.
    assert_eq!(leq(&cs, &ax, &c("Nil()"), &c("Cons(x, xs)")), LeqResult::NotDerived);
}

#[test]
fn congruence_contexts() {
    let cs = csig();
    let none = AxiomSet::none();
    assert_eq!(leq(&cs, &none, &c("f 1 + 2"), &c("(fn x : cost. f x) 1 + 2")), LeqResult::Derivable);
    // Arguments are not congruence contexts.
    assert_eq!(leq(&cs, &none, &c("g 1 + 2"), &c("g ((fn x : cost. x) 1) + 2")), LeqResult::NotDerived);
    assert_eq!(leq(&cs, &none, &c("fst p + 1"), &c("fst (fst (p, q)) + 1")), LeqResult::Derivable);
    assert_eq!(leq(&cs, &none, &c("(fst p) x"), &c("(fst (fst (p, q))) x")), LeqResult::Derivable);
    // Pairs are not congruence contexts.
    assert_eq!(leq(&cs, &none, &c("(1, 1)"), &c("(1, (fn x : cost. x) 1)")), LeqResult::NotDerived);
}

