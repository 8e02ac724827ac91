use costrec::harness::{check_bound, check_defs, corpus, model_suite, Exec, GenConfig};
use costrec::size::{load_models, NInf};
use costrec::translate::translate_sig;

#[test]
fn corpus_is_bounded_under_every_suite() {
    let cfg = GenConfig { max_size: 5, samples: 12, seed: 1, fn_samples: 3 };
    let mut total = 0;
    for name in corpus::VERIFIABLE {
        let p = corpus::load(name).unwrap();
        for (suite, models) in model_suite(&translate_sig(&p.signature)).unwrap() {
            let r = check_defs(&p, name, &[], &models, &cfg, Exec::default()).unwrap();
            assert!(r.all_pass(), "{name} under {suite}:\n{r}");
            total += r.cases.len();
        }
    }
    assert!(total >= 200, "{total}");
}

#[test]
fn semrec_lists_are_bounded() {
    for name in ["listmap", "foldsum", "append"] {
        let p = corpus::load(name).unwrap();
        let m = load_models("model nat = length\nmodel list = length\nsemrec list", &translate_sig(&p.signature)).unwrap();
        let r = check_defs(&p, name, &[], &m, &GenConfig::default(), Exec::default()).unwrap();
        assert!(r.all_pass(), "{r}");
        assert!(r.cases.iter().any(|c| c.bound != NInf::Inf));
    }
}

#[test]
fn treemap_with_canonical_functions() {
    let p = corpus::load("treemap").unwrap();
    let m = load_models("model tree = pair(nodes, labelmax nat)", &translate_sig(&p.signature)).unwrap();
    let r = check_bound(&p, "treemap", &m, &GenConfig { samples: 40, ..GenConfig::default() }).unwrap();
    assert!(r.all_pass(), "{r}");
    assert!(r.cases.iter().any(|c| c.input.starts_with("fn")));
}
