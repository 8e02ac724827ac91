//! The model suites used for verification: one builtin measure applied to
//! every datatype it fits, with `ctors` as the fallback.

use crate::complexity::{CFunctor, CSignature};
use crate::error::ModelError;
use crate::size::{load_models, Carrier, ModelTable};

pub const SUITES: &[&str] = &["ctors", "length", "nodes", "height", "pair", "unitsize"];

/// The configuration text of suite `name` for the datatypes of `csig`.
pub fn suite_config(csig: &CSignature, name: &str) -> Result<String, ModelError> {
    let mut lines: Vec<String> = Vec::new();
    for decl in csig.decls() {
        let d = decl.name.as_str();
        let recursive = decl.ctors.iter().any(|c| c.arg.has_self());
        let mut candidates: Vec<String> = match name {
            "ctors" => vec![],
            "length" | "nodes" | "height" if recursive => vec![name.to_string()],
            "pair" if recursive => {
                let table = load_models(&lines.join("\n"), csig)?;
                let mut out = Vec::new();
                for l in labels(decl.ctors.iter().map(|c| &c.arg)) {
                    if table.carrier(&l) == Carrier::NInf {
                        out.push(format!("pair(nodes, labelmax {l})"));
                        out.push(format!("pair(length, labelmax {l})"));
                    }
                }
                out.push("nodes".into());
                out
            }
            "unitsize" => vec!["unitsize".into()],
            "length" | "nodes" | "height" | "pair" => vec![],
            other => return Err(ModelError::Config { line: 0, msg: format!("unknown model suite `{other}`") }),
        };
        candidates.push("ctors".into());
        let mut chosen = None;
        for m in candidates {
            let line = format!("model {d} = {m}");
            let trial = [lines.clone(), vec![line.clone()]].concat().join("\n");
            if load_models(&trial, csig).is_ok() {
                chosen = Some(line);
                break;
            }
        }
        lines.push(chosen.expect("ctors always loads"));
    }
    Ok(lines.join("\n"))
}

/// Every suite, loaded.
pub fn model_suite(csig: &CSignature) -> Result<Vec<(String, ModelTable)>, ModelError> {
    SUITES
        .iter()
        .map(|s| {
            let text = suite_config(csig, s)?;
            Ok((s.to_string(), load_models(&text, csig)?))
        })
        .collect()
}

fn labels<'a>(fs: impl Iterator<Item = &'a CFunctor>) -> Vec<String> {
    fn go(f: &CFunctor, out: &mut Vec<String>) {
        match f {
            CFunctor::Const(crate::complexity::CType::Data(d)) => {
                if !out.contains(&d.to_string()) {
                    out.push(d.to_string())
                }
            }
            CFunctor::Prod(a, b) => {
                go(a, out);
                go(b, out);
            }
            CFunctor::Arrow(_, b) => go(b, out),
            _ => {}
        }
    }
    let mut out = Vec::new();
    for f in fs {
        go(f, &mut out);
    }
    out
}
