//! A small library of first-order functions used as arguments to
//! higher-order definitions: constant-cost, size-growing and size-shrinking.

use std::sync::Arc;

use crate::error::Error;
use crate::source::{parse_expr, CheckedProgram, Expr, Functor, Type, Value};

/// Named closed functions of type `dom -> cod`. `consts` supplies values of
/// `cod` for the constant functions; its first and last entries are used.
pub fn canonical_functions(prog: &CheckedProgram, dom: &Type, cod: &Type, consts: &[Value]) -> Result<Vec<(String, Value)>, Error> {
    let mut out: Vec<(String, Arc<Expr>)> = Vec::new();
    if dom == cod {
        out.push(("id".into(), parse_expr("fn x. x")?));
        out.push(("id1".into(), parse_expr("fn x. (fn y. y) x")?));
        if let Type::Data(d) = dom {
            if let Some((z, s)) = nat_shaped(prog, d.as_str()) {
                out.push(("succ".into(), parse_expr(&format!("fn x. {s}(x)"))?));
                out.push(("pred".into(), parse_expr(&format!("fn x. rec(x; {z} -> u. {z}() | {s} -> (p, r). p)"))?));
                out.push(("double".into(), parse_expr(&format!("fn x. rec(x; {z} -> u. {z}() | {s} -> (p, r). {s}({s}(force r)))"))?));
            }
            if let Some((nil, cons)) = list_shaped(prog, d.as_str()) {
                out.push(("tail".into(), parse_expr(&format!("fn x. rec(x; {nil} -> u. {nil}() | {cons} -> (h, (t, r)). t)"))?));
                out.push(("copy".into(), parse_expr(&format!("fn x. rec(x; {nil} -> u. {nil}() | {cons} -> (h, (t, r)). {cons}(h, force r))"))?));
            }
        }
    }
    if let Some(v) = consts.first() {
        out.push(("const-min".into(), Expr::lam("x", None, v.to_expr())));
    }
    if consts.len() > 1 {
        out.push(("const-max".into(), Expr::lam("x", None, consts[consts.len() - 1].to_expr())));
    }
    let t = Type::arrow(dom.clone(), cod.clone());
    out.into_iter()
        .map(|(n, e)| {
            let e = prog.elaborate_checked(&e, &t)?;
            let v = e.as_value().ok_or_else(|| Error::Other(format!("canonical function {n} is not a value")))?;
            Ok((n, v))
        })
        .collect()
}

/// The constructors of a datatype shaped like `Z of unit | S of self`.
pub fn nat_shaped(prog: &CheckedProgram, d: &str) -> Option<(String, String)> {
    let decl = prog.signature.datatype(d)?;
    if decl.ctors.len() != 2 {
        return None;
    }
    let z = decl.ctors.iter().find(|c| c.arg == Functor::Const(Type::Unit))?;
    let s = decl.ctors.iter().find(|c| c.arg == Functor::SelfRef)?;
    Some((z.name.to_string(), s.name.to_string()))
}

/// The constructors of a datatype shaped like `Nil of unit | Cons of T * self`.
pub fn list_shaped(prog: &CheckedProgram, d: &str) -> Option<(String, String)> {
    let decl = prog.signature.datatype(d)?;
    if decl.ctors.len() != 2 {
        return None;
    }
    let nil = decl.ctors.iter().find(|c| c.arg == Functor::Const(Type::Unit))?;
    let cons = decl.ctors.iter().find(|c| matches!(&c.arg, Functor::Prod(a, b) if matches!(**a, Functor::Const(_)) && **b == Functor::SelfRef))?;
    Some((nil.name.to_string(), cons.name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval;
    use crate::source::{check_program, parse_program};

    #[test]
    fn library_on_nat() {
        let p = check_program(&parse_program("datatype nat = Zero of unit | Succ of self;").unwrap()).unwrap();
        let nat = Type::data("nat");
        let two = Value::con("Succ", Value::con("Succ", Value::con("Zero", Value::Unit)));
        let fs = canonical_functions(&p, &nat, &nat, &[Value::con("Zero", Value::Unit), two.clone()]).unwrap();
        let names: Vec<&str> = fs.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["id", "id1", "succ", "pred", "double", "const-min", "const-max"]);
        let run = |f: &Value| eval::run(&p.signature, &Expr::app(f.to_expr(), two.to_expr())).unwrap();
        let out: Vec<(String, u64)> = fs.iter().map(|(_, f)| run(f)).map(|(v, n)| (v.to_string(), n)).collect();
        assert_eq!(out[0], ("Succ(Succ(Zero()))".into(), 1));
        assert_eq!(out[1], ("Succ(Succ(Zero()))".into(), 2));
        assert_eq!(out[2].0, "Succ(Succ(Succ(Zero())))");
        assert_eq!(out[3], ("Succ(Zero())".into(), 2));
        assert_eq!(out[4], ("Succ(Succ(Succ(Succ(Zero()))))".into(), 4));
        assert_eq!(out[5], ("Zero()".into(), 1));
    }
}
