use std::collections::HashMap;
use std::fmt::{self, Display, Formatter, Write};
use std::sync::Arc;

use super::{CExpr, CFunctor, CType};

fn paren(yes: bool, f: &mut Formatter<'_>, body: impl FnOnce(&mut Formatter<'_>) -> fmt::Result) -> fmt::Result {
    if yes {
        f.write_char('(')?;
    }
    body(f)?;
    if yes {
        f.write_char(')')?;
    }
    Ok(())
}

fn ty(t: &CType, prec: u8, f: &mut Formatter<'_>) -> fmt::Result {
    match t {
        CType::Cost => f.write_str("cost"),
        CType::Unit => f.write_str("unit"),
        CType::Data(d) => write!(f, "{d}"),
        CType::Prod(a, b) => paren(prec > 1, f, |f| {
            ty(a, 2, f)?;
            f.write_str(" * ")?;
            ty(b, 1, f)
        }),
        CType::Arrow(a, b) => paren(prec > 0, f, |f| {
            ty(a, 1, f)?;
            f.write_str(" -> ")?;
            ty(b, 0, f)
        }),
    }
}

fn functor(x: &CFunctor, prec: u8, f: &mut Formatter<'_>) -> fmt::Result {
    match x {
        CFunctor::SelfRef => f.write_str("self"),
        CFunctor::Const(t) => ty(t, prec, f),
        CFunctor::Prod(a, b) => paren(prec > 1, f, |f| {
            functor(a, 2, f)?;
            f.write_str(" * ")?;
            functor(b, 1, f)
        }),
        CFunctor::Arrow(a, b) => paren(prec > 0, f, |f| {
            ty(a, 1, f)?;
            f.write_str(" -> ")?;
            functor(b, 0, f)
        }),
    }
}

// Precedences: 0 binder, 1 sum, 2 application, 3 argument.
fn expr(e: &CExpr, prec: u8, f: &mut Formatter<'_>) -> fmt::Result {
    match e {
        CExpr::Var(x) => write!(f, "{x}"),
        CExpr::Zero => f.write_char('0'),
        CExpr::One => f.write_char('1'),
        CExpr::Num(n) => write!(f, "{n}"),
        CExpr::Unit => f.write_str("()"),
        CExpr::Plus(a, b) => paren(prec > 1, f, |f| {
            expr(a, 1, f)?;
            f.write_str(" + ")?;
            expr(b, 2, f)
        }),
        CExpr::Pair(..) => {
            f.write_char('(')?;
            tuple(e, f)?;
            f.write_char(')')
        }
        CExpr::Con(c, a) => {
            write!(f, "{c}(")?;
            if !matches!(**a, CExpr::Unit) {
                tuple(a, f)?;
            }
            f.write_char(')')
        }
        CExpr::Fst(a) | CExpr::Snd(a) => paren(prec > 2, f, |f| {
            f.write_str(if matches!(e, CExpr::Fst(_)) { "fst " } else { "snd " })?;
            // Chains of projections need no parentheses.
            let inner = if matches!(**a, CExpr::Fst(_) | CExpr::Snd(_)) { 2 } else { 3 };
            expr(a, inner, f)
        }),
        CExpr::Lam { var, ann, body } => paren(prec > 0, f, |f| {
            write!(f, "fn {var}")?;
            if let Some(t) = ann {
                f.write_str(" : ")?;
                ty(t, 0, f)?;
            }
            f.write_str(". ")?;
            expr(body, 0, f)
        }),
        CExpr::App(a, b) => paren(prec > 2, f, |f| {
            expr(a, 2, f)?;
            f.write_char(' ')?;
            expr(b, 3, f)
        }),
        CExpr::Rec { scrut, branches, ann } => {
            f.write_str("rec")?;
            if let Some(t) = ann {
                f.write_char('[')?;
                ty(t, 0, f)?;
                f.write_char(']')?;
            }
            f.write_char('(')?;
            expr(scrut, 0, f)?;
            f.write_str("; ")?;
            for (i, b) in branches.iter().enumerate() {
                if i > 0 {
                    f.write_str(" | ")?;
                }
                write!(f, "{} -> {}. ", b.ctor, b.var)?;
                expr(&b.body, 0, f)?;
            }
            f.write_char(')')
        }
    }
}

fn tuple(e: &CExpr, f: &mut Formatter<'_>) -> fmt::Result {
    match e {
        CExpr::Pair(a, b) => {
            expr(a, 0, f)?;
            f.write_str(", ")?;
            tuple(b, f)
        }
        e => expr(e, 0, f),
    }
}

impl Display for CType {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        ty(self, 0, f)
    }
}

impl Display for CFunctor {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        functor(self, 0, f)
    }
}

impl Display for CExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        expr(self, 0, f)
    }
}

/// Size of the term once shared subterms are written out, saturating at `u64::MAX`.
pub fn tree_size(e: &Arc<CExpr>) -> u64 {
    fn go(e: &Arc<CExpr>, memo: &mut HashMap<usize, u64>) -> u64 {
        let k = Arc::as_ptr(e) as usize;
        if let Some(&n) = memo.get(&k) {
            return n;
        }
        let n = 1u64.saturating_add(match &**e {
            CExpr::Plus(a, b) | CExpr::Pair(a, b) | CExpr::App(a, b) => go(a, memo).saturating_add(go(b, memo)),
            CExpr::Fst(a) | CExpr::Snd(a) | CExpr::Con(_, a) => go(a, memo),
            CExpr::Lam { body, .. } => go(body, memo),
            CExpr::Rec { scrut, branches, .. } => {
                branches.iter().fold(go(scrut, memo), |acc, b| acc.saturating_add(go(&b.body, memo)))
            }
            _ => 0,
        });
        memo.insert(k, n);
        n
    }
    go(e, &mut HashMap::new())
}

#[cfg(test)]
mod tests {
    use super::super::{parse_cexpr, parse_ctype};
    use super::*;

    #[test]
    fn round_trips() {
        for s in [
            "0 + 1 + 5",
            "0 + (1 + x)",
            "fst (1, x)",
            "(fn x : cost * unit. snd x) (0, ())",
            "rec[cost * nat](n; Zero -> u. (1, Zero()) | Succ -> p. (1 + fst snd snd p, Succ(fst p)))",
            "f (fst x) y + g (fn z. z)",
            "Node(a, b, c)",
        ] {
            let e = parse_cexpr(s).unwrap();
            assert_eq!(e.to_string(), s);
        }
        assert_eq!(parse_ctype("(cost * unit) * nat -> cost").unwrap().to_string(), "(cost * unit) * nat -> cost");
    }

    #[test]
    fn shared_size() {
        let x = parse_cexpr("(1, 1)").unwrap();
        let mut e = x;
        for _ in 0..70 {
            e = CExpr::pair(e.clone(), e);
        }
        assert_eq!(tree_size(&e), u64::MAX);
        assert!(e.dag_size() < 100);
    }
}
