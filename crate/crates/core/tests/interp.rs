use costrec::harness::corpus;
use costrec::interp::{tabulate, tabulation_grid, Env, Interp, SemVal};
use costrec::size::{load_models, Elem, NInf};
use costrec::translate::{translate_expr, translate_sig};

fn mem_costs(cfg: &str, max: u64) -> Vec<NInf> {
    let p = corpus::load("mem").unwrap();
    let m = load_models(cfg, &translate_sig(&p.signature)).unwrap();
    let ce = translate_expr(&p.def("mem").unwrap().closed);
    let mut it = Interp::new(&m);
    let whole = it.eval(&Env::new(), &ce).unwrap();
    let pot = it.proj(&whole, 1).unwrap();
    (0..=max)
        .map(|n| {
            let r = it.apply(&pot, SemVal::Elem(Elem::n(n))).unwrap();
            let f = it.proj(&r, 1).unwrap();
            let r = it.apply(&f, SemVal::Elem(Elem::Point)).unwrap();
            r.cost_part(&mut it).unwrap()
        })
        .collect()
}

/// g(n) = max over 1 + n0 + n1 = n of 6 + g(n0) + g(n1), joined with g(n - 1).
fn mem_recurrence(max: usize) -> Vec<u64> {
    let mut g = vec![1u64];
    for n in 1..=max {
        let mut best = g[n - 1];
        for n0 in 0..n {
            best = best.max(6 + g[n0] + g[n - 1 - n0]);
        }
        g.push(best);
    }
    g
}

#[test]
fn mem_under_nodes_follows_the_recurrence() {
    let got = mem_costs("model bool = unitsize\nmodel int = unitsize\nmodel tree = nodes", 6);
    let want: Vec<NInf> = mem_recurrence(6).into_iter().map(NInf::Fin).collect();
    assert_eq!(&got[..3], &[NInf::Fin(1), NInf::Fin(8), NInf::Fin(15)]);
    assert_eq!(got, want);
}

#[test]
fn mem_at_a_fixed_key() {
    let p = corpus::load("mem").unwrap();
    let m = load_models("model bool = unitsize\nmodel int = unitsize\nmodel tree = nodes", &translate_sig(&p.signature)).unwrap();
    let rows = tabulate(&p, "mem3", &m, &tabulation_grid(&p, "mem3", &m, 0, 2).unwrap()).unwrap();
    let costs: Vec<String> = rows.iter().map(|r| r.cost.to_string()).collect();
    assert_eq!(costs, ["3", "10", "17"]);
    assert_eq!(rows[0].to_string(), "size=0 cost=3 potential=*");
}

#[test]
fn identity_on_naturals() {
    let p = corpus::load("idnat").unwrap();
    let cs = translate_sig(&p.signature);
    let ctors = load_models("", &cs).unwrap();
    let rows = tabulate(&p, "id", &ctors, &tabulation_grid(&p, "id", &ctors, 0, 3).unwrap()).unwrap();
    let costs: Vec<NInf> = rows.iter().map(|r| r.cost).collect();
    assert_eq!(costs, [NInf::Fin(0), NInf::Fin(1), NInf::Fin(2), NInf::Fin(3)]);
    let unit = load_models("model nat = unitsize", &cs).unwrap();
    assert!(unit.warnings.iter().any(|w| w.contains("nat")));
    let rows = tabulate(&p, "id", &unit, &tabulation_grid(&p, "id", &unit, 0, 3).unwrap()).unwrap();
    assert!(!rows.is_empty() && rows.iter().all(|r| r.cost == NInf::Inf));
}
