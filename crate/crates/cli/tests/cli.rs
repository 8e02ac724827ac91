use std::process::{Command, Output};

const CORPUS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/corpus");

fn costrec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_costrec")).args(args).output().expect("run costrec")
}

fn file(name: &str) -> String {
    format!("{CORPUS}/{name}")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_lists_definitions() {
    let o = costrec(&["check", &file("idnat.src")]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("ok datatypes=1 defs=2\n"), "{out}");
    assert!(out.contains("def=id type=nat -> nat"), "{out}");
}

#[test]
fn eval_prints_value_and_cost() {
    let o = costrec(&["eval", &file("mem.src"), "-e", "main"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "value=False() cost=24\n");
}

#[test]
fn eval_trace_sums_to_cost() {
    let o = costrec(&["eval", &file("idnat.src"), "-e", "main", "--trace"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let total: u64 = out
        .lines()
        .filter_map(|l| l.split(" delta=").nth(1))
        .map(|d| d.parse::<u64>().unwrap())
        .sum();
    let last = out.lines().last().unwrap();
    assert_eq!(last, format!("value=Succ(Succ(Succ(Zero()))) cost={total}"));
}

#[test]
fn translate_and_normalize() {
    let o = costrec(&["translate", &file("idnat.src"), "-e", "Zero()"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "term=(fst (0, ()), Zero(snd (0, ())))\ntype=cost * nat\n");
    let o = costrec(&["normalize", &file("idnat.src"), "-e", "main"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let eval = stdout(&costrec(&["eval", &file("idnat.src"), "-e", "main"]));
    let cost = eval.trim().rsplit("cost=").next().unwrap();
    assert!(out.ends_with(&format!("cost={cost}\n")), "{out}");
}

#[test]
fn tabulate_under_unitsize_is_unbounded() {
    let o = costrec(&["tabulate", &file("idnat.src"), "-f", "id", "--model", "model nat = unitsize", "--range", "0..2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(!out.is_empty());
    assert!(out.lines().all(|l| l.contains("cost=inf")), "{out}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning:"));
}

#[test]
fn tabulate_under_length_is_linear() {
    let o = costrec(&["tabulate", &file("idnat.src"), "-f", "id", "--model", "model nat = length", "--range", "0..3"]);
    assert!(o.status.success());
    let costs: Vec<String> = stdout(&o)
        .lines()
        .map(|l| l.split_whitespace().find(|w| w.starts_with("cost=")).unwrap().to_string())
        .collect();
    assert_eq!(costs.len(), 4);
    assert!(costs.windows(2).all(|w| w[0] != w[1]), "{costs:?}");
}

#[test]
fn verify_passes_with_a_model_file() {
    let o = costrec(&[
        "verify", &file("mem.src"), "--model", &file("models/mem-nodes.cfg"), "--max-size", "3", "--samples", "6", "--seed", "2",
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.lines().last().unwrap().contains("failed=0"), "{out}");
}

#[test]
fn verify_sequential_matches_parallel() {
    let args = ["verify", &file("treemap.src"), "-f", "treemap", "--model", "model nat = nodes; model tree = nodes", "--max-size", "3", "--samples", "6"];
    let par = costrec(&args);
    let mut seq_args = args.to_vec();
    seq_args.push("--sequential");
    let seq = costrec(&seq_args);
    assert!(par.status.success());
    assert_eq!(stdout(&par), stdout(&seq));
}

#[test]
fn leq_exit_codes() {
    let f = file("listmap.src");
    let yes = costrec(&["leq", &f, "-l", "Nil()", "-r", "Cons(x, Nil())", "--axioms"]);
    assert!(yes.status.success());
    assert_eq!(stdout(&yes), "result=derivable\n");
    let no = costrec(&["leq", &f, "-l", "Nil()", "-r", "Cons(x, Nil())"]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(stdout(&no), "result=not-derived\n");
}

#[test]
fn errors_and_usage() {
    assert_eq!(costrec(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(costrec(&["eval", &file("mem.src")]).status.code(), Some(2));
    let o = costrec(&["eval", &file("mem.src"), "-e", "nosuchname"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    let o = costrec(&["check", "/nonexistent.src"]);
    assert_eq!(o.status.code(), Some(1));
}
