use std::sync::Arc;

use super::CExpr;
use crate::ident::Ident;

/// Equality up to renaming of bound variables. Numerals compare by value,
/// so `1` and `Num(1)` are equal while `1 + 1` and `2` are not.
pub fn alpha_eq(a: &Arc<CExpr>, b: &Arc<CExpr>) -> bool {
    go(a, b, &mut Vec::new(), &mut Vec::new())
}

fn lookup(stack: &[Ident], x: &Ident) -> Option<usize> {
    stack.iter().rposition(|y| y == x)
}

fn go(a: &Arc<CExpr>, b: &Arc<CExpr>, sa: &mut Vec<Ident>, sb: &mut Vec<Ident>) -> bool {
    if Arc::ptr_eq(a, b) && sa == sb {
        return true;
    }
    match (&**a, &**b) {
        (CExpr::Var(x), CExpr::Var(y)) => match (lookup(sa, x), lookup(sb, y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (CExpr::Zero | CExpr::One | CExpr::Num(_), CExpr::Zero | CExpr::One | CExpr::Num(_)) => a.as_numeral() == b.as_numeral(),
        (CExpr::Unit, CExpr::Unit) => true,
        (CExpr::Plus(a0, a1), CExpr::Plus(b0, b1)) | (CExpr::Pair(a0, a1), CExpr::Pair(b0, b1)) | (CExpr::App(a0, a1), CExpr::App(b0, b1)) => {
            go(a0, b0, sa, sb) && go(a1, b1, sa, sb)
        }
        (CExpr::Fst(x), CExpr::Fst(y)) | (CExpr::Snd(x), CExpr::Snd(y)) => go(x, y, sa, sb),
        (CExpr::Con(c, x), CExpr::Con(d, y)) => c == d && go(x, y, sa, sb),
        (CExpr::Lam { var: x, ann: ta, body: ba }, CExpr::Lam { var: y, ann: tb, body: bb }) => {
            if ta.is_some() && tb.is_some() && ta != tb {
                return false;
            }
            under(x, y, ba, bb, sa, sb)
        }
        (CExpr::Rec { scrut: s0, branches: b0, .. }, CExpr::Rec { scrut: s1, branches: b1, .. }) => {
            b0.len() == b1.len()
                && go(s0, s1, sa, sb)
                && b0.iter().all(|x| b1.iter().find(|y| y.ctor == x.ctor).is_some_and(|y| under(&x.var, &y.var, &x.body, &y.body, sa, sb)))
        }
        _ => false,
    }
}

fn under(x: &Ident, y: &Ident, a: &Arc<CExpr>, b: &Arc<CExpr>, sa: &mut Vec<Ident>, sb: &mut Vec<Ident>) -> bool {
    sa.push(x.clone());
    sb.push(y.clone());
    let r = go(a, b, sa, sb);
    sa.pop();
    sb.pop();
    r
}

#[cfg(test)]
mod tests {
    use super::super::parse_cexpr;
    use super::*;

    fn eq(a: &str, b: &str) -> bool {
        alpha_eq(&parse_cexpr(a).unwrap(), &parse_cexpr(b).unwrap())
    }

    #[test]
    fn renaming() {
        assert!(eq("fn x. fn y. x", "fn a. fn b. a"));
        assert!(!eq("fn x. fn y. x", "fn a. fn b. b"));
        assert!(!eq("fn x. y", "fn y. y"));
        assert!(eq("rec(n; Z -> u. u | S -> p. fst p)", "rec(n; S -> q. fst q | Z -> w. w)"));
        assert!(!eq("1 + 1", "2"));
    }
}
