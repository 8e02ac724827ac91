use std::fmt::{self, Display, Formatter, Write};

use super::{Expr, Functor, Type, Value};

fn ty(t: &Type, prec: u8, f: &mut Formatter<'_>) -> fmt::Result {
    match t {
        Type::Unit => f.write_str("unit"),
        Type::Data(d) => write!(f, "{d}"),
        Type::Susp(a) => {
            f.write_str("susp ")?;
            ty(a, 2, f)
        }
        Type::Prod(a, b) => paren(prec > 1, f, |f| {
            ty(a, 2, f)?;
            f.write_str(" * ")?;
            ty(b, 1, f)
        }),
        Type::Arrow(a, b) => paren(prec > 0, f, |f| {
            ty(a, 1, f)?;
            f.write_str(" -> ")?;
            ty(b, 0, f)
        }),
    }
}

fn functor(x: &Functor, prec: u8, f: &mut Formatter<'_>) -> fmt::Result {
    match x {
        Functor::SelfRef => f.write_str("self"),
        Functor::Const(t) => ty(t, prec, f),
        Functor::Prod(a, b) => paren(prec > 1, f, |f| {
            functor(a, 2, f)?;
            f.write_str(" * ")?;
            functor(b, 1, f)
        }),
        Functor::Arrow(a, b) => paren(prec > 0, f, |f| {
            ty(a, 1, f)?;
            f.write_str(" -> ")?;
            functor(b, 0, f)
        }),
    }
}

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

// Precedences: 0 binders, 1 application, 2 argument.
fn expr(e: &Expr, prec: u8, f: &mut Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Var(x) => write!(f, "{x}"),
        Expr::Unit => f.write_str("()"),
        Expr::Pair(..) => {
            f.write_char('(')?;
            tuple(e, f)?;
            f.write_char(')')
        }
        Expr::Con(c, a) => {
            write!(f, "{c}(")?;
            match &**a {
                Expr::Unit => {}
                a => tuple(a, f)?,
            }
            f.write_char(')')
        }
        Expr::Lam { var, ann, body } => paren(prec > 0, f, |f| {
            write!(f, "fn {var}")?;
            if let Some(t) = ann {
                f.write_str(" : ")?;
                ty(t, 0, f)?;
            }
            f.write_str(". ")?;
            expr(body, 0, f)
        }),
        Expr::Let { bound, var, body } => paren(prec > 0, f, |f| {
            write!(f, "let {var} = ")?;
            expr(bound, 0, f)?;
            f.write_str(" in ")?;
            expr(body, 0, f)
        }),
        Expr::Split { scrut, left, right, body } => paren(prec > 0, f, |f| {
            f.write_str("split ")?;
            expr(scrut, 0, f)?;
            write!(f, " as ({left}, {right}) in ")?;
            expr(body, 0, f)
        }),
        Expr::App(a, b) => paren(prec > 1, f, |f| {
            expr(a, 1, f)?;
            f.write_char(' ')?;
            expr(b, 2, f)
        }),
        Expr::Delay(a) => paren(prec > 1, f, |f| {
            f.write_str("delay ")?;
            expr(a, 2, f)
        }),
        Expr::Force(a) => paren(prec > 1, f, |f| {
            f.write_str("force ")?;
            expr(a, 2, f)
        }),
        Expr::Rec { scrut, branches, .. } => {
            f.write_str("rec(")?;
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
        Expr::Map { functor: phi, var, body, target, .. } => {
            f.write_str("map[")?;
            functor(phi, 0, f)?;
            write!(f, "]({var}. ")?;
            expr(body, 0, f)?;
            f.write_str("; ")?;
            expr(target, 0, f)?;
            f.write_char(')')
        }
    }
}

/// Right-nested pairs print as one flat tuple, matching how the parser nests them.
fn tuple(e: &Expr, f: &mut Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Pair(a, b) => {
            expr(a, 0, f)?;
            f.write_str(", ")?;
            tuple(b, f)
        }
        e => expr(e, 0, f),
    }
}

impl Display for Type {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        ty(self, 0, f)
    }
}

impl Display for Functor {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        functor(self, 0, f)
    }
}

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        expr(self, 0, f)
    }
}

impl Display for Value {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        expr(&self.to_expr(), 0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_expr, parse_functor, parse_type};

    #[test]
    fn round_trips() {
        for s in [
            "fn x. x",
            "(fn x : nat -> nat. x) (fn y. y)",
            "Node(I3(), Emp(), Emp())",
            "C((a, b), c)",
            "split p as (a, b) in let z = force a in f z b",
            "rec(t; Emp -> u. False() | Node -> p. delay (f p))",
            "map[unit -> nat * self](x. (x, delay x); v)",
            "f (g x) (delay (force y))",
        ] {
            let e = parse_expr(s).unwrap();
            assert_eq!(e.to_string(), s);
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
        }
        for s in ["(a * b) * c -> susp (d -> e)", "unit"] {
            assert_eq!(parse_type(s).unwrap().to_string(), s);
        }
        for s in ["(nat * nat) * self", "unit -> nat * self", "self * self"] {
            assert_eq!(parse_functor(s).unwrap().to_string(), s);
        }
    }
}
