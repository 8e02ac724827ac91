use std::fmt;
use std::sync::Arc;

use crate::complexity::{cmap_expand, csubst, free_cvars, CBranch, CExpr, CSignature};
use crate::error::NormalizeError;
use crate::ident::fresh_name;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    BetaFn,
    BetaPair0,
    BetaPair1,
    RecUnroll,
    MonoidLeftUnit,
    MonoidRightUnit,
    MonoidAssoc,
    Axiom(String),
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::BetaFn => f.write_str("beta-fn"),
            Rule::BetaPair0 => f.write_str("beta-pair-0"),
            Rule::BetaPair1 => f.write_str("beta-pair-1"),
            Rule::RecUnroll => f.write_str("rec-unroll"),
            Rule::MonoidLeftUnit => f.write_str("monoid-left-unit"),
            Rule::MonoidRightUnit => f.write_str("monoid-right-unit"),
            Rule::MonoidAssoc => f.write_str("monoid-assoc"),
            Rule::Axiom(n) => write!(f, "axiom({n})"),
        }
    }
}

/// One rule instance; `position` lists child indices from the root.
///
/// Children are numbered left to right: both operands of `+`, pairs and
/// application; the operand of projections and constructors; a lambda's body;
/// a recursor's scrutinee followed by its branch bodies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: Rule,
    pub position: Vec<usize>,
}

impl fmt::Display for RewriteStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.position.iter().map(|i| i.to_string()).collect();
        write!(f, "{} at [{}]", self.rule, p.join("."))
    }
}

/// Where rules may fire.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Positions {
    /// Anywhere, including under binders.
    Everywhere,
    /// Only inside congruence contexts: projections, the function of an
    /// application, a recursor's scrutinee, and either side of `+`.
    Congruence,
}

/// The redex at the root of `e`, reduced.
pub fn root_step(csig: &CSignature, e: &Arc<CExpr>) -> Option<(Arc<CExpr>, Rule)> {
    root_step_with(csig, e, true)
}

fn root_step_with(csig: &CSignature, e: &Arc<CExpr>, monoid: bool) -> Option<(Arc<CExpr>, Rule)> {
    match &**e {
        CExpr::App(f, a) => match &**f {
            CExpr::Lam { var, body, .. } => Some((csubst(body, &[(var.clone(), a.clone())]), Rule::BetaFn)),
            _ => None,
        },
        CExpr::Fst(p) => match &**p {
            CExpr::Pair(a, _) => Some((a.clone(), Rule::BetaPair0)),
            _ => None,
        },
        CExpr::Snd(p) => match &**p {
            CExpr::Pair(_, b) => Some((b.clone(), Rule::BetaPair1)),
            _ => None,
        },
        CExpr::Rec { scrut, branches, ann } => match &**scrut {
            CExpr::Con(c, e0) => {
                let b = branches.iter().find(|b| &b.ctor == c)?;
                let cref = csig.ctor(c.as_str())?;
                let mut avoid = free_cvars(e);
                avoid.extend(free_cvars(e0));
                let y = fresh_name("y", |n| avoid.iter().any(|v| v.as_str() == n));
                let rec_y = Arc::new(CExpr::Rec { scrut: CExpr::var(&y), branches: branches.clone(), ann: ann.clone() });
                let mapped = cmap_expand(cref.arg, &y, &CExpr::pair(CExpr::var(&y), rec_y), e0);
                Some((csubst(&b.body, &[(b.var.clone(), mapped)]), Rule::RecUnroll))
            }
            _ => None,
        },
        CExpr::Plus(a, b) if monoid => {
            if a.as_numeral() == Some(0) {
                Some((b.clone(), Rule::MonoidLeftUnit))
            } else if b.as_numeral() == Some(0) {
                Some((a.clone(), Rule::MonoidRightUnit))
            } else if let CExpr::Plus(a0, a1) = &**a {
                Some((CExpr::plus(a0.clone(), CExpr::plus(a1.clone(), b.clone())), Rule::MonoidAssoc))
            } else {
                None
            }
        }
        _ => None,
    }
}

/// The leftmost-outermost step allowed at `positions`.
pub fn step(csig: &CSignature, e: &Arc<CExpr>, positions: Positions) -> Option<(Arc<CExpr>, RewriteStep)> {
    step_with(csig, e, positions, true)
}

/// Like [`step`], optionally leaving the monoid laws out.
pub fn step_with(csig: &CSignature, e: &Arc<CExpr>, positions: Positions, monoid: bool) -> Option<(Arc<CExpr>, RewriteStep)> {
    let mut path = Vec::new();
    let r = step_at(csig, e, positions, monoid, &mut path)?;
    Some((r.0, RewriteStep { rule: r.1, position: path }))
}

fn step_at(csig: &CSignature, e: &Arc<CExpr>, pos: Positions, monoid: bool, path: &mut Vec<usize>) -> Option<(Arc<CExpr>, Rule)> {
    if let Some(r) = root_step_with(csig, e, monoid) {
        return Some(r);
    }
    let every = pos == Positions::Everywhere;
    let child = |i: usize, c: &Arc<CExpr>, path: &mut Vec<usize>| {
        path.push(i);
        let r = step_at(csig, c, pos, monoid, path);
        if r.is_none() {
            path.pop();
        }
        r
    };
    match &**e {
        CExpr::Plus(a, b) => {
            if let Some((a2, r)) = child(0, a, path) {
                return Some((CExpr::plus(a2, b.clone()), r));
            }
            child(1, b, path).map(|(b2, r)| (CExpr::plus(a.clone(), b2), r))
        }
        CExpr::Fst(a) => child(0, a, path).map(|(a2, r)| (CExpr::fst(a2), r)),
        CExpr::Snd(a) => child(0, a, path).map(|(a2, r)| (CExpr::snd(a2), r)),
        CExpr::App(f, a) => {
            if let Some((f2, r)) = child(0, f, path) {
                return Some((CExpr::app(f2, a.clone()), r));
            }
            if !every {
                return None;
            }
            child(1, a, path).map(|(a2, r)| (CExpr::app(f.clone(), a2), r))
        }
        CExpr::Rec { scrut, branches, ann } => {
            if let Some((s2, r)) = child(0, scrut, path) {
                return Some((Arc::new(CExpr::Rec { scrut: s2, branches: branches.clone(), ann: ann.clone() }), r));
            }
            if !every {
                return None;
            }
            for (i, b) in branches.iter().enumerate() {
                if let Some((body, r)) = child(i + 1, &b.body, path) {
                    let mut bs: Vec<CBranch> = branches.to_vec();
                    bs[i] = CBranch { body, ..b.clone() };
                    return Some((Arc::new(CExpr::Rec { scrut: scrut.clone(), branches: bs.into(), ann: ann.clone() }), r));
                }
            }
            None
        }
        _ if !every => None,
        CExpr::Pair(a, b) => {
            if let Some((a2, r)) = child(0, a, path) {
                return Some((CExpr::pair(a2, b.clone()), r));
            }
            child(1, b, path).map(|(b2, r)| (CExpr::pair(a.clone(), b2), r))
        }
        CExpr::Con(c, a) => child(0, a, path).map(|(a2, r)| (CExpr::con(c.clone(), a2), r)),
        CExpr::Lam { var, ann, body } => child(0, body, path).map(|(b2, r)| (CExpr::lam(var.clone(), ann.clone(), b2), r)),
        _ => None,
    }
}

/// Rewrites until no rule applies, recording every step.
pub fn rewrite_normalize(
    csig: &CSignature,
    e: &Arc<CExpr>,
    positions: Positions,
    fuel: u64,
) -> Result<(Arc<CExpr>, Vec<RewriteStep>), NormalizeError> {
    let mut cur = e.clone();
    let mut steps = Vec::new();
    while let Some((next, s)) = step(csig, &cur, positions) {
        if steps.len() as u64 >= fuel {
            return Err(NormalizeError::FuelExhausted(fuel));
        }
        steps.push(s);
        cur = next;
    }
    Ok((cur, steps))
}
