use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use costrec::complexity::{ctypecheck, parse_cexpr};
use costrec::eval::{evaluate, EvalOptions};
use costrec::harness::{check_defs, Exec, GenConfig, STACK_SIZE};
use costrec::interp::{interp, tabulate, tabulation_grid};
use costrec::preorder::{cost_literal, leq, list_axioms, normalize, rewrite_normalize, AxiomSet, LeqResult, Positions, NORMALIZE_FUEL};
use costrec::size::{load_models, ModelTable};
use costrec::source::{check_program, parse_program, CheckedProgram};
use costrec::translate::{complexity_type, translate_expr, translate_sig};

#[derive(Parser)]
#[command(name = "costrec", version, about = "Extract and check cost bounds for a small functional language")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Typecheck a program and its signature.
    Check { file: PathBuf },
    /// Evaluate an expression and count its cost.
    Eval {
        file: PathBuf,
        #[arg(short = 'e', long = "expr")]
        expr: String,
        /// Print every charged and free rule use.
        #[arg(long)]
        trace: bool,
    },
    /// Print the complexity translation of an expression.
    Translate {
        file: PathBuf,
        #[arg(short = 'e', long = "expr")]
        expr: String,
    },
    /// Normalize the translation of an expression.
    Normalize {
        file: PathBuf,
        #[arg(short = 'e', long = "expr")]
        expr: String,
        /// Rewrite one step at a time and print the steps.
        #[arg(long)]
        steps: bool,
    },
    /// Interpret the translation of an expression under size models.
    Interp {
        file: PathBuf,
        #[arg(short = 'e', long = "expr")]
        expr: String,
        /// Model configuration: a file, or inline directives separated by `;`.
        #[arg(long, default_value = "")]
        model: String,
    },
    /// Tabulate the cost of a definition over argument sizes.
    Tabulate {
        file: PathBuf,
        #[arg(short = 'f', long = "function")]
        function: String,
        #[arg(long, default_value = "")]
        model: String,
        /// Sizes as LO..HI, inclusive.
        #[arg(long, default_value = "0..5")]
        range: String,
    },
    /// Check operational costs against interpreted bounds on generated inputs.
    Verify {
        file: PathBuf,
        /// Definitions to check; all of them by default.
        #[arg(short = 'f', long = "function")]
        function: Vec<String>,
        #[arg(long, default_value = "")]
        model: String,
        #[arg(long, default_value_t = 5)]
        max_size: u64,
        #[arg(long, default_value_t = 24)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        fn_samples: usize,
        /// Run cases one at a time.
        #[arg(long)]
        sequential: bool,
    },
    /// Search for a derivation of E0 ≤ E1 between complexity terms.
    Leq {
        file: PathBuf,
        #[arg(short = 'l', long = "left")]
        left: String,
        #[arg(short = 'r', long = "right")]
        right: String,
        /// Enable the length-quotient axioms: for the datatypes a model
        /// configuration declares them for, or for every list-shaped datatype.
        #[arg(long, num_args = 0..=1, default_missing_value = "")]
        axioms: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let worker = std::thread::Builder::new().stack_size(STACK_SIZE).spawn(move || run(cli));
    match worker.map(|h| h.join()) {
        Ok(Ok(Ok(code))) => ExitCode::from(code),
        Ok(Ok(Err(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        _ => {
            eprintln!("error: internal failure");
            ExitCode::from(1)
        }
    }
}

fn load(file: &Path) -> Result<CheckedProgram, String> {
    let text = std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    let p = parse_program(&text).map_err(|e| format!("{}: parse error at {e}", file.display()))?;
    check_program(&p).map_err(|e| format!("{}: {e}", file.display()))
}

fn models(prog: &CheckedProgram, spec: &str) -> Result<ModelTable, String> {
    let text = if !spec.is_empty() && Path::new(spec).is_file() {
        std::fs::read_to_string(spec).map_err(|e| format!("{spec}: {e}"))?
    } else {
        spec.replace(';', "\n")
    };
    let m = load_models(&text, &translate_sig(&prog.signature)).map_err(|e| e.to_string())?;
    for w in &m.warnings {
        eprintln!("warning: {w}");
    }
    Ok(m)
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let bad = || format!("bad range `{s}`, expected LO..HI");
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.cmd {
        Cmd::Check { file } => {
            let p = load(&file)?;
            println!("ok datatypes={} defs={}", p.signature.decls().len(), p.defs.len());
            for d in &p.defs {
                println!("def={} type={}", d.name, d.ty);
            }
            Ok(0)
        }
        Cmd::Eval { file, expr, trace } => {
            let p = load(&file)?;
            let (e, _) = p.expr(&expr).map_err(|e| e.to_string())?;
            let r = evaluate(&p.signature, &e, EvalOptions { trace, ..EvalOptions::default() }).map_err(|e| e.to_string())?;
            for (i, t) in r.trace.iter().flatten().enumerate() {
                println!("step={i} rule={} delta={}", t.rule, t.delta);
            }
            println!("value={} cost={}", r.value, r.cost);
            Ok(0)
        }
        Cmd::Translate { file, expr } => {
            let p = load(&file)?;
            let (e, t) = p.expr(&expr).map_err(|e| e.to_string())?;
            let ce = translate_expr(&e);
            let ct = ctypecheck(&translate_sig(&p.signature), &[], &ce).map_err(|e| format!("translation does not typecheck: {e}"))?;
            println!("term={ce}");
            println!("type={ct}");
            if ct != complexity_type(&t) {
                return Err(format!("translation has type {ct}, expected {}", complexity_type(&t)));
            }
            Ok(0)
        }
        Cmd::Normalize { file, expr, steps } => {
            let p = load(&file)?;
            let (e, _) = p.expr(&expr).map_err(|e| e.to_string())?;
            let cs = translate_sig(&p.signature);
            let ce = translate_expr(&e);
            let nf = if steps {
                let (nf, ss) = rewrite_normalize(&cs, &ce, Positions::Everywhere, NORMALIZE_FUEL).map_err(|e| e.to_string())?;
                for (i, s) in ss.iter().enumerate() {
                    println!("step={i} {s}");
                }
                costrec::preorder::canonical_costs(&nf, true)
            } else {
                normalize(&cs, &ce).map_err(|e| e.to_string())?
            };
            println!("nf={nf}");
            if let Some(n) = cost_literal(&nf) {
                println!("cost={n}");
            }
            Ok(0)
        }
        Cmd::Interp { file, expr, model } => {
            let p = load(&file)?;
            let m = models(&p, &model)?;
            let (e, _) = p.expr(&expr).map_err(|e| e.to_string())?;
            let v = interp(&m, &translate_expr(&e)).map_err(|e| e.to_string())?;
            match &v {
                costrec::interp::SemVal::Pair(c, pot) => println!("cost={c} potential={pot}"),
                v => println!("value={v}"),
            }
            Ok(0)
        }
        Cmd::Tabulate { file, function, model, range } => {
            let p = load(&file)?;
            let m = models(&p, &model)?;
            let (lo, hi) = parse_range(&range)?;
            let grid = tabulation_grid(&p, &function, &m, lo, hi).map_err(|e| e.to_string())?;
            for row in tabulate(&p, &function, &m, &grid).map_err(|e| e.to_string())? {
                println!("{row}");
            }
            Ok(0)
        }
        Cmd::Verify { file, function, model, max_size, samples, seed, fn_samples, sequential } => {
            let p = load(&file)?;
            let m = models(&p, &model)?;
            let cfg = GenConfig { max_size, samples, seed, fn_samples };
            let exec = if sequential { Exec::Sequential } else { Exec::default() };
            let names: Vec<&str> = function.iter().map(String::as_str).collect();
            let id = file.file_stem().map_or_else(|| file.display().to_string(), |s| s.to_string_lossy().into_owned());
            let report = check_defs(&p, &id, &names, &m, &cfg, exec).map_err(|e| e.to_string())?;
            print!("{report}");
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Cmd::Leq { file, left, right, axioms } => {
            let p = load(&file)?;
            let cs = translate_sig(&p.signature);
            let ax = match axioms {
                None => AxiomSet::none(),
                Some(spec) if spec.is_empty() => AxiomSet {
                    lists: cs.decls().iter().filter_map(|d| list_axioms(&cs, &d.name).ok()).collect(),
                },
                Some(spec) => AxiomSet::from_models(&models(&p, &spec)?).map_err(|e| e.to_string())?,
            };
            let l = parse_cexpr(&left).map_err(|e| format!("left side: {e}"))?;
            let r = parse_cexpr(&right).map_err(|e| format!("right side: {e}"))?;
            let res = leq(&cs, &ax, &l, &r);
            println!("result={res}");
            Ok(if res == LeqResult::Derivable { 0 } else { 1 })
        }
    }
}
