use std::collections::HashMap;
use std::fmt;

use super::unfold::AbsArg;
use super::{Carrier, Elem, NInf};
use crate::complexity::{CFunctor, CSignature, CType};
use crate::error::{InterpError, ModelError};
use crate::ident::Ident;
use crate::lexer::{describe, Cursor, Tok};

/// Builtin size functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Measure {
    /// Total number of constructors, counting labels measured in ∞-naturals.
    Ctors,
    /// Number of recursive constructors along the single recursive chain.
    Length,
    /// Number of constructors with at least one recursive position.
    Nodes,
    /// One more than the largest recursive component.
    Height,
    /// Every value has the same size.
    UnitSize,
    /// Largest label of the given datatype or recursive component.
    LabelMax(Ident),
    Pair(Box<Measure>, Box<Measure>),
    /// Recognized but not interpretable.
    Ordinal,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Ctors => f.write_str("ctors"),
            Measure::Length => f.write_str("length"),
            Measure::Nodes => f.write_str("nodes"),
            Measure::Height => f.write_str("height"),
            Measure::UnitSize => f.write_str("unitsize"),
            Measure::LabelMax(d) => write!(f, "labelmax {d}"),
            Measure::Pair(a, b) => write!(f, "pair({a}, {b})"),
            Measure::Ordinal => f.write_str("ordinal"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Descent {
    Strict,
    Weak,
    None,
}

impl Measure {
    pub fn carrier(&self) -> Carrier {
        match self {
            Measure::UnitSize => Carrier::OnePoint,
            Measure::Pair(a, b) => Carrier::Tuple(vec![a.carrier(), b.carrier()]),
            _ => Carrier::NInf,
        }
    }

    /// The size of one unfolding given its recursive components and labels.
    pub fn size_of(&self, recs: &[Elem], labels: &[(Ident, Elem)]) -> Result<Elem, InterpError> {
        let sum = |xs: &[Elem]| xs.iter().map(Elem::as_ninf).sum::<NInf>();
        Ok(match self {
            Measure::Ctors => {
                let ls: NInf = labels.iter().filter(|(_, e)| matches!(e, Elem::N(_))).map(|(_, e)| e.as_ninf()).sum();
                Elem::N(NInf::Fin(1) + sum(recs) + ls)
            }
            Measure::Length => match recs.first() {
                None => Elem::n(0),
                Some(r) => Elem::N(NInf::Fin(1) + r.as_ninf()),
            },
            Measure::Nodes => {
                if recs.is_empty() {
                    Elem::n(0)
                } else {
                    Elem::N(NInf::Fin(1) + sum(recs))
                }
            }
            Measure::Height => Elem::N(NInf::Fin(1) + recs.iter().map(Elem::as_ninf).max().unwrap_or(NInf::ZERO)),
            Measure::UnitSize => Elem::Point,
            Measure::LabelMax(d) => {
                let ls = labels.iter().filter(|(l, _)| l == d).map(|(_, e)| e.as_ninf());
                Elem::N(ls.chain(recs.iter().map(Elem::as_ninf)).max().unwrap_or(NInf::ZERO))
            }
            Measure::Pair(a, b) => {
                let ra: Vec<Elem> = recs.iter().map(|r| r.component(0)).collect();
                let rb: Vec<Elem> = recs.iter().map(|r| r.component(1)).collect();
                Elem::Tuple(vec![a.size_of(&ra, labels)?, b.size_of(&rb, labels)?])
            }
            Measure::Ordinal => return Err(InterpError::Ordinal(String::new())),
        })
    }

    /// Whether every recursive component of an unfolding lies strictly below
    /// its size, judged from the definition of the measure.
    fn descent(&self, rec_positions: usize) -> Descent {
        if rec_positions == 0 {
            return Descent::Strict;
        }
        match self {
            Measure::Ctors | Measure::Length | Measure::Nodes | Measure::Height | Measure::Ordinal => Descent::Strict,
            Measure::UnitSize => Descent::None,
            Measure::LabelMax(_) => Descent::Weak,
            Measure::Pair(a, b) => match (a.descent(rec_positions), b.descent(rec_positions)) {
                (Descent::None, _) | (_, Descent::None) => Descent::None,
                (Descent::Strict, _) | (_, Descent::Strict) => Descent::Strict,
                _ => Descent::Weak,
            },
        }
    }

    /// The bound on labels of datatype `label` that this measure makes size-relevant.
    pub(crate) fn label_bound(&self, bound: &Elem, label: &Ident, table: &ModelTable) -> Option<Elem> {
        match self {
            Measure::Ctors => (table.get(label.as_str())?.carrier == Carrier::NInf).then(|| bound.clone()),
            Measure::LabelMax(d) if d == label => Some(bound.clone()),
            Measure::Pair(a, b) => match (a.label_bound(&bound.component(0), label, table), b.label_bound(&bound.component(1), label, table)) {
                (Some(x), Some(y)) => Some(x.meet(&y)),
                (x, None) | (None, x) => x,
            },
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SizeModel {
    pub datatype: Ident,
    pub measure: Measure,
    pub carrier: Carrier,
    /// Every recursive component lies strictly below the size of its unfolding.
    pub strict_descent: bool,
    /// Interpret recursion with the primitive-recursion operator instead of the big join.
    pub semrec: bool,
    /// Join of the sizes of all values; the top element for recursive datatypes.
    pub sup: Elem,
}

/// Size models for every datatype of a complexity signature.
#[derive(Clone, Debug)]
pub struct ModelTable {
    pub(crate) csig: CSignature,
    models: Vec<SizeModel>,
    index: HashMap<Ident, usize>,
    /// Datatypes declared with the length-quotient axioms.
    pub length_quotient: Vec<Ident>,
    pub warnings: Vec<String>,
}

impl ModelTable {
    /// Every datatype measured by `ctors`.
    pub fn defaults(csig: &CSignature) -> ModelTable {
        load_models("", csig).expect("the default models always load")
    }

    pub fn csig(&self) -> &CSignature {
        &self.csig
    }

    pub fn get(&self, d: &str) -> Option<&SizeModel> {
        self.index.get(d).map(|&i| &self.models[i])
    }

    pub fn models(&self) -> &[SizeModel] {
        &self.models
    }

    pub fn carrier(&self, d: &str) -> Carrier {
        self.get(d).map_or(Carrier::NInf, |m| m.carrier.clone())
    }

    /// A one-line summary listing the non-default choices.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .models
            .iter()
            .filter(|m| m.measure != Measure::Ctors || m.semrec)
            .map(|m| format!("{}={}{}", m.datatype, m.measure, if m.semrec { "+semrec" } else { "" }))
            .collect();
        if parts.is_empty() {
            "ctors".to_string()
        } else {
            parts.join(",")
        }
    }

    pub fn size_of_arg(&self, d: &str, arg: &AbsArg) -> Result<Elem, InterpError> {
        let m = self.get(d).ok_or_else(|| ModelError::UnknownDatatype(d.to_string()))?;
        if m.measure == Measure::Ordinal {
            return Err(InterpError::Ordinal(d.to_string()));
        }
        let (mut recs, mut labels) = (Vec::new(), Vec::new());
        arg.flatten(&mut recs, &mut labels);
        m.measure.size_of(&recs, &labels)
    }

    fn push(&mut self, m: SizeModel) {
        self.index.insert(m.datatype.clone(), self.models.len());
        self.models.push(m);
    }
}

fn self_count(f: &CFunctor) -> usize {
    match f {
        CFunctor::SelfRef => 1,
        CFunctor::Const(_) => 0,
        CFunctor::Prod(a, b) => self_count(a) + self_count(b),
        CFunctor::Arrow(_, b) => self_count(b),
    }
}

fn labels_of(f: &CFunctor, out: &mut Vec<Ident>) {
    fn ty(t: &CType, out: &mut Vec<Ident>) {
        match t {
            CType::Data(d) => out.push(d.clone()),
            CType::Prod(a, b) => {
                ty(a, out);
                ty(b, out);
            }
            _ => {}
        }
    }
    match f {
        CFunctor::SelfRef => {}
        CFunctor::Const(t) => ty(t, out),
        CFunctor::Prod(a, b) => {
            labels_of(a, out);
            labels_of(b, out);
        }
        CFunctor::Arrow(_, b) => labels_of(b, out),
    }
}

/// Parses a model configuration:
///
/// ```text
/// model tree = pair(nodes, labelmax nat)
/// semrec list
/// axiom list = length-quotient
/// ```
///
/// Datatypes without a `model` line are measured by `ctors`.
pub fn load_models(text: &str, csig: &CSignature) -> Result<ModelTable, ModelError> {
    let mut chosen: HashMap<Ident, Measure> = HashMap::new();
    let mut semrec = Vec::new();
    let mut axioms = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let bad = |msg: String| ModelError::Config { line: ln, msg };
        let mut c = Cursor::new(line).map_err(|e| bad(e.msg))?;
        if c.at_eof() {
            continue;
        }
        let known = |d: &str| -> Result<Ident, ModelError> {
            csig.datatype(d).map(|_| Ident::new(d)).ok_or_else(|| ModelError::UnknownDatatype(d.to_string()))
        };
        let word = |c: &mut Cursor| -> Result<String, ModelError> {
            match c.bump() {
                Tok::Lower(s) => Ok(s),
                t => Err(bad(format!("expected a name, found {}", describe(&t)))),
            }
        };
        let head = word(&mut c)?;
        match head.as_str() {
            "model" => {
                let d = known(&word(&mut c)?)?;
                if !c.eat_sym("=") {
                    return Err(bad("expected '='".into()));
                }
                let m = parse_measure(&mut c).map_err(bad)?;
                chosen.insert(d, m);
            }
            "semrec" => semrec.push(known(&word(&mut c)?)?),
            "axiom" => {
                let d = known(&word(&mut c)?)?;
                if !c.eat_sym("=") {
                    return Err(bad("expected '='".into()));
                }
                let a = word(&mut c)?;
                if a != "length-quotient" {
                    return Err(bad(format!("unknown axiom set `{a}`")));
                }
                axioms.push(d);
            }
            other => return Err(bad(format!("unknown directive `{other}`"))),
        }
        if !c.at_eof() {
            return Err(bad(format!("unexpected {}", describe(c.peek()))));
        }
    }

    let mut table =
        ModelTable { csig: csig.clone(), models: Vec::new(), index: HashMap::new(), length_quotient: axioms, warnings: Vec::new() };
    for decl in csig.decls() {
        let measure = chosen.remove(&decl.name).unwrap_or(Measure::Ctors);
        let unsupported = |reason: String| ModelError::Unsupported { datatype: decl.name.to_string(), model: measure.to_string(), reason };
        validate(&measure, true, &|m, reason| unsupported(format!("{m}: {reason}")), &table)?;
        let mut strict = true;
        for c in &decl.ctors {
            let n = self_count(&c.arg);
            if uses_length(&measure) && n > 1 {
                return Err(unsupported(format!("constructor `{}` has {n} recursive positions", c.name)));
            }
            if measure.descent(n) != Descent::Strict {
                strict = false;
            }
        }
        if !strict {
            table.warnings.push(format!(
                "model `{}` for `{}` does not make recursive components strictly smaller; recursion will be interpreted as unbounded",
                measure, decl.name
            ));
        }
        let carrier = measure.carrier();
        let recursive = decl.ctors.iter().any(|c| self_count(&c.arg) > 0);
        let sup = if recursive || measure == Measure::Ordinal {
            carrier.top()
        } else {
            let mut acc = carrier.bottom();
            for c in &decl.ctors {
                let mut ls = Vec::new();
                labels_of(&c.arg, &mut ls);
                let labels: Vec<(Ident, Elem)> = ls.into_iter().map(|l| (l.clone(), table.get(l.as_str()).map_or(Elem::Point, |m| m.sup.clone()))).collect();
                let s = measure.size_of(&[], &labels).map_err(|e| unsupported(e.to_string()))?;
                acc = acc.join(&s);
            }
            acc
        };
        let is_semrec = semrec.contains(&decl.name);
        table.push(SizeModel { datatype: decl.name.clone(), measure, carrier, strict_descent: strict, semrec: is_semrec, sup });
    }
    Ok(table)
}

fn uses_length(m: &Measure) -> bool {
    match m {
        Measure::Length => true,
        Measure::Pair(a, b) => uses_length(a) || uses_length(b),
        _ => false,
    }
}

fn validate(m: &Measure, top: bool, err: &dyn Fn(&Measure, String) -> ModelError, table: &ModelTable) -> Result<(), ModelError> {
    match m {
        Measure::LabelMax(d) => {
            if top {
                return Err(err(m, "labelmax is only usable inside pair".into()));
            }
            match table.get(d.as_str()) {
                None => Err(err(m, format!("`{d}` must be declared earlier"))),
                Some(lm) if lm.carrier != Carrier::NInf => Err(err(m, format!("`{d}` is not measured in naturals"))),
                Some(_) => Ok(()),
            }
        }
        Measure::Pair(a, b) => {
            validate(a, false, err, table)?;
            validate(b, false, err, table)
        }
        _ => Ok(()),
    }
}

fn parse_measure(c: &mut Cursor) -> Result<Measure, String> {
    let name = match c.bump() {
        Tok::Lower(s) => s,
        t => return Err(format!("expected a model name, found {}", describe(&t))),
    };
    Ok(match name.as_str() {
        "ctors" => Measure::Ctors,
        "length" => Measure::Length,
        "nodes" => Measure::Nodes,
        "height" => Measure::Height,
        "unitsize" => Measure::UnitSize,
        "ordinal" => Measure::Ordinal,
        "labelmax" => {
            let paren = c.eat_sym("(");
            let d = match c.bump() {
                Tok::Lower(s) => Ident::from(s),
                t => return Err(format!("labelmax needs a datatype, found {}", describe(&t))),
            };
            if paren && !c.eat_sym(")") {
                return Err("expected ')'".into());
            }
            Measure::LabelMax(d)
        }
        "pair" => {
            if !c.eat_sym("(") {
                return Err("pair expects two models in parentheses".into());
            }
            let mut args = vec![parse_measure(c)?];
            while c.eat_sym(",") {
                args.push(parse_measure(c)?);
            }
            if !c.eat_sym(")") {
                return Err("expected ')'".into());
            }
            if args.len() != 2 {
                return Err(format!("pair takes 2 models, found {}", args.len()));
            }
            let b = args.pop().unwrap();
            let a = args.pop().unwrap();
            Measure::Pair(Box::new(a), Box::new(b))
        }
        other => return Err(format!("unknown model `{other}`")),
    })
}
