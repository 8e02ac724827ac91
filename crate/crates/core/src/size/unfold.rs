use std::fmt;

use super::model::ModelTable;
use super::{Carrier, Elem};
use crate::complexity::{CFunctor, CType};
use crate::error::{InterpError, ModelError};
use crate::eval;
use crate::ident::Ident;
use crate::source::{Expr, Functor, Signature, Type, Value};

/// One position of an abstracted constructor argument.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AbsArg {
    /// A recursive position, holding an element of the datatype's own carrier.
    Rec(Elem),
    /// A constant datatype position whose size the model tracks.
    Label(Ident, Elem),
    /// A constant datatype position the model ignores; it stands for every value.
    Untracked(Ident),
    /// A non-datatype constant.
    Opaque(CType),
    Pair(Box<AbsArg>, Box<AbsArg>),
    /// An arrow position over a one-point domain, given by its single result.
    Fun(Box<AbsArg>),
}

impl AbsArg {
    pub fn pair(a: AbsArg, b: AbsArg) -> AbsArg {
        AbsArg::Pair(Box::new(a), Box::new(b))
    }

    pub(crate) fn flatten(&self, recs: &mut Vec<Elem>, labels: &mut Vec<(Ident, Elem)>) {
        match self {
            AbsArg::Rec(e) => recs.push(e.clone()),
            AbsArg::Label(d, e) => labels.push((d.clone(), e.clone())),
            AbsArg::Untracked(_) | AbsArg::Opaque(_) => {}
            AbsArg::Pair(a, b) => {
                a.flatten(recs, labels);
                b.flatten(recs, labels);
            }
            AbsArg::Fun(a) => a.flatten(recs, labels),
        }
    }

    /// Recursive components, left to right.
    pub fn recs(&self) -> Vec<Elem> {
        let (mut r, mut l) = (Vec::new(), Vec::new());
        self.flatten(&mut r, &mut l);
        r
    }

    /// Whether `o` is an instance of `self`, reading untracked positions as wildcards.
    pub fn covers(&self, o: &AbsArg) -> bool {
        match (self, o) {
            (AbsArg::Untracked(d), AbsArg::Label(l, _) | AbsArg::Untracked(l)) => d == l,
            (AbsArg::Pair(a, b), AbsArg::Pair(c, d)) => a.covers(c) && b.covers(d),
            (AbsArg::Fun(a), AbsArg::Fun(b)) => a.covers(b),
            (a, b) => a == b,
        }
    }

    fn join(&self, o: &AbsArg) -> AbsArg {
        match (self, o) {
            (AbsArg::Rec(a), AbsArg::Rec(b)) => AbsArg::Rec(a.join(b)),
            (AbsArg::Label(d, a), AbsArg::Label(_, b)) => AbsArg::Label(d.clone(), a.join(b)),
            (AbsArg::Pair(a, b), AbsArg::Pair(c, d)) => AbsArg::pair(a.join(c), b.join(d)),
            (AbsArg::Fun(a), AbsArg::Fun(b)) => AbsArg::Fun(Box::new(a.join(b))),
            _ => self.clone(),
        }
    }

    fn write_flat(&self, out: &mut Vec<String>) {
        match self {
            AbsArg::Rec(e) | AbsArg::Label(_, e) => out.push(e.to_string()),
            AbsArg::Untracked(_) => out.push("•".into()),
            AbsArg::Opaque(CType::Unit) => {}
            AbsArg::Opaque(t) => out.push(format!("<{}>", t)),
            AbsArg::Pair(a, b) => {
                a.write_flat(out);
                b.write_flat(out);
            }
            AbsArg::Fun(a) => {
                let mut inner = Vec::new();
                a.write_flat(&mut inner);
                out.push(format!("fn.({})", inner.join(", ")));
            }
        }
    }
}

/// A constructor applied to an abstracted argument.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbstractUnfolding {
    pub ctor: Ident,
    pub arg: AbsArg,
}

impl fmt::Display for AbstractUnfolding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        self.arg.write_flat(&mut parts);
        if parts.is_empty() {
            write!(f, "{}", self.ctor)
        } else {
            write!(f, "{}({})", self.ctor, parts.join(", "))
        }
    }
}

/// Whether the potentials of type `t` form a one-point set under `models`.
pub fn is_one_point(models: &ModelTable, t: &CType) -> bool {
    match t {
        CType::Unit => true,
        CType::Prod(a, b) => is_one_point(models, a) && is_one_point(models, b),
        CType::Data(d) => models.carrier(d.as_str()) == Carrier::OnePoint,
        CType::Cost | CType::Arrow(..) => false,
    }
}

fn cartesian(xs: Vec<AbsArg>, ys: Vec<AbsArg>) -> Vec<AbsArg> {
    xs.iter().flat_map(|x| ys.iter().map(move |y| AbsArg::pair(x.clone(), y.clone()))).collect()
}

/// Upper bound on the number of source values enumerated for an arrow domain.
const DOMAIN_LIMIT: usize = 4096;

impl ModelTable {
    /// Every unfolding of `d` whose size lies below `bound`.
    pub fn unfoldings(&self, d: &str, bound: &Elem) -> Result<Vec<AbstractUnfolding>, InterpError> {
        let decl = self.csig.datatype(d).ok_or_else(|| ModelError::UnknownDatatype(d.to_string()))?;
        let model = self.get(d).expect("every datatype has a model");
        let mut out = Vec::new();
        for c in &decl.ctors {
            let args = self.enum_functor(d, &c.name, &model.carrier, &c.arg, bound)?;
            for a in args {
                if self.size_of_arg(d, &a)?.leq(bound) {
                    out.push(AbstractUnfolding { ctor: c.name.clone(), arg: a });
                }
            }
        }
        Ok(out)
    }

    pub fn size_of(&self, d: &str, z: &AbstractUnfolding) -> Result<Elem, InterpError> {
        self.size_of_arg(d, &z.arg)
    }

    fn enum_functor(&self, d: &str, ctor: &Ident, own: &Carrier, f: &CFunctor, bound: &Elem) -> Result<Vec<AbsArg>, InterpError> {
        Ok(match f {
            CFunctor::SelfRef => own.enumerate_upto(bound)?.into_iter().map(AbsArg::Rec).collect(),
            CFunctor::Const(t) => self.enum_const(d, t, bound)?,
            CFunctor::Prod(a, b) => cartesian(self.enum_functor(d, ctor, own, a, bound)?, self.enum_functor(d, ctor, own, b, bound)?),
            CFunctor::Arrow(dom, body) => {
                if !is_one_point(self, dom) {
                    return Err(ModelError::InfiniteEnumeration {
                        datatype: d.to_string(),
                        ctor: ctor.to_string(),
                        reason: format!("arrow position over `{dom}`, whose potentials are not a one-point set"),
                    }
                    .into());
                }
                self.enum_functor(d, ctor, own, body, bound)?.into_iter().map(|a| AbsArg::Fun(Box::new(a))).collect()
            }
        })
    }

    fn enum_const(&self, d: &str, t: &CType, bound: &Elem) -> Result<Vec<AbsArg>, InterpError> {
        Ok(match t {
            CType::Data(l) => {
                let measure = &self.get(d).expect("model").measure;
                match measure.label_bound(bound, l, self) {
                    Some(lb) => {
                        let lm = self.get(l.as_str()).ok_or_else(|| ModelError::UnknownDatatype(l.to_string()))?;
                        let lb = lb.meet(&lm.sup);
                        lm.carrier.enumerate_upto(&lb)?.into_iter().map(|e| AbsArg::Label(l.clone(), e)).collect()
                    }
                    None => vec![AbsArg::Untracked(l.clone())],
                }
            }
            CType::Prod(a, b) => cartesian(self.enum_const(d, a, bound)?, self.enum_const(d, b, bound)?),
            t => vec![AbsArg::Opaque(t.clone())],
        })
    }

    /// The least size bounding the closed source value `v`.
    pub fn value_size(&self, sig: &Signature, v: &Value) -> Result<Elem, InterpError> {
        let Value::Con(c, arg) = v else {
            return Err(InterpError::IllTyped(format!("value_size of non-constructor value {v}")));
        };
        let cref = sig.ctor(c.as_str()).ok_or_else(|| InterpError::IllTyped(format!("unknown constructor {c}")))?;
        let d = cref.datatype.clone();
        let a = self.abstract_value(sig, &d, cref.arg, arg)?;
        self.size_of_arg(d.as_str(), &a)
    }

    /// The exact one-step abstraction of `C(arg)`.
    pub fn abstract_unfolding(&self, sig: &Signature, v: &Value) -> Result<AbstractUnfolding, InterpError> {
        let Value::Con(c, arg) = v else {
            return Err(InterpError::IllTyped(format!("expected a constructor value, found {v}")));
        };
        let cref = sig.ctor(c.as_str()).ok_or_else(|| InterpError::IllTyped(format!("unknown constructor {c}")))?;
        let d = cref.datatype.clone();
        Ok(AbstractUnfolding { ctor: c.clone(), arg: self.abstract_value(sig, &d, cref.arg, arg)? })
    }

    fn abstract_value(&self, sig: &Signature, d: &Ident, f: &Functor, v: &Value) -> Result<AbsArg, InterpError> {
        Ok(match (f, v) {
            (Functor::SelfRef, v) => AbsArg::Rec(self.value_size(sig, v)?),
            (Functor::Const(t), v) => self.abstract_const(sig, t, v)?,
            (Functor::Prod(a, b), Value::Pair(x, y)) => AbsArg::pair(self.abstract_value(sig, d, a, x)?, self.abstract_value(sig, d, b, y)?),
            (Functor::Arrow(dom, body), Value::Lam { .. }) => {
                let ws = finite_values(sig, dom, DOMAIN_LIMIT).ok_or_else(|| ModelError::InfiniteEnumeration {
                    datatype: d.to_string(),
                    ctor: "?".into(),
                    reason: format!("arrow position over `{dom}`"),
                })?;
                let mut acc: Option<AbsArg> = None;
                for w in ws {
                    let (r, _) = eval::run(sig, &Expr::app(v.to_expr(), w.to_expr())).map_err(|e| InterpError::IllTyped(e.to_string()))?;
                    let a = self.abstract_value(sig, d, body, &r)?;
                    acc = Some(match acc {
                        None => a,
                        Some(p) => p.join(&a),
                    });
                }
                let inner = acc.unwrap_or_else(|| self.bottom_arg(body));
                AbsArg::Fun(Box::new(AbsArg::pair(AbsArg::Opaque(CType::Cost), inner)))
            }
            (f, v) => return Err(InterpError::IllTyped(format!("value {v} does not match functor {f}"))),
        })
    }

    fn bottom_arg(&self, f: &Functor) -> AbsArg {
        match f {
            Functor::SelfRef => AbsArg::Rec(Elem::n(0)),
            Functor::Const(t) => AbsArg::Opaque(crate::translate::potential_type(t)),
            Functor::Prod(a, b) => AbsArg::pair(self.bottom_arg(a), self.bottom_arg(b)),
            Functor::Arrow(_, b) => AbsArg::Fun(Box::new(AbsArg::pair(AbsArg::Opaque(CType::Cost), self.bottom_arg(b)))),
        }
    }

    fn abstract_const(&self, sig: &Signature, t: &Type, v: &Value) -> Result<AbsArg, InterpError> {
        Ok(match (t, v) {
            (Type::Data(l), v) => AbsArg::Label(l.clone(), self.value_size(sig, v)?),
            (Type::Prod(a, b), Value::Pair(x, y)) => AbsArg::pair(self.abstract_const(sig, a, x)?, self.abstract_const(sig, b, y)?),
            (t, _) => AbsArg::Opaque(crate::translate::potential_type(t)),
        })
    }
}

/// All closed values of `t`, when there are at most `limit` of them.
pub(crate) fn finite_values(sig: &Signature, t: &Type, limit: usize) -> Option<Vec<Value>> {
    let out = match t {
        Type::Unit => vec![Value::Unit],
        Type::Prod(a, b) => {
            let xs = finite_values(sig, a, limit)?;
            let ys = finite_values(sig, b, limit)?;
            if xs.len().saturating_mul(ys.len()) > limit {
                return None;
            }
            xs.iter().flat_map(|x| ys.iter().map(move |y| Value::pair(x.clone(), y.clone()))).collect()
        }
        Type::Data(d) => {
            let decl = sig.datatype(d.as_str())?;
            let mut out = Vec::new();
            for c in &decl.ctors {
                let Functor::Const(a) = &c.arg else {
                    if c.arg.has_self() {
                        return None;
                    }
                    return None;
                };
                for v in finite_values(sig, a, limit)? {
                    out.push(Value::Con(c.name.clone(), v.into()));
                }
                if out.len() > limit {
                    return None;
                }
            }
            out
        }
        Type::Arrow(..) | Type::Susp(_) => return None,
    };
    (out.len() <= limit).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::size::{load_models, NInf};
    use crate::source::{check_program, parse_program};
    use crate::translate::translate_sig;
    use proptest::prelude::*;

    const SRC: &str = "
        datatype nat = Zero of unit | Succ of self;
        datatype list = Nil of unit | Cons of nat * self;
        datatype tree = Emp of unit | Node of nat * self * self;
        datatype bool = True of unit | False of unit;
        datatype strm = SCons of unit -> nat * self;
        datatype inf = Lf of unit | Br of nat -> self;
    ";

    fn setup(cfg: &str) -> (Signature, ModelTable) {
        let p = check_program(&parse_program(SRC).unwrap()).unwrap();
        let m = load_models(cfg, &translate_sig(&p.signature)).unwrap();
        (p.signature, m)
    }

    fn nat(n: usize) -> Value {
        (0..n).fold(Value::con("Zero", Value::Unit), |v, _| Value::con("Succ", v))
    }

    fn show(zs: &[AbstractUnfolding]) -> Vec<String> {
        zs.iter().map(|z| z.to_string()).collect()
    }

    #[test]
    fn tree_nodes_unfoldings() {
        let (_, m) = setup("model tree = nodes");
        assert_eq!(show(&m.unfoldings("tree", &Elem::n(1)).unwrap()), ["Emp", "Node(•, 0, 0)"]);
    }

    #[test]
    fn list_length_unfoldings() {
        let (_, m) = setup("model list = length");
        assert_eq!(show(&m.unfoldings("list", &Elem::n(2)).unwrap()), ["Nil", "Cons(•, 0)", "Cons(•, 1)"]);
    }

    #[test]
    fn one_point_bool_has_both_ctors() {
        let (_, m) = setup("model bool = unitsize");
        assert_eq!(show(&m.unfoldings("bool", &Elem::Point).unwrap()), ["True", "False"]);
    }

    #[test]
    fn ctors_enumerates_labels() {
        let (_, m) = setup("");
        // Every carrier element is a candidate, including sizes no value has.
        assert_eq!(
            show(&m.unfoldings("list", &Elem::n(3)).unwrap()),
            ["Nil", "Cons(0, 0)", "Cons(0, 1)", "Cons(0, 2)", "Cons(1, 0)", "Cons(1, 1)", "Cons(2, 0)"]
        );
    }

    #[test]
    fn model_examples() {
        let (sig, m) = setup("model list = length\nmodel tree = nodes");
        let l = Value::con("Cons", Value::pair(nat(0), Value::con("Cons", Value::pair(nat(0), Value::con("Nil", Value::Unit)))));
        assert_eq!(m.value_size(&sig, &l).unwrap(), Elem::n(2));
        let emp = Value::con("Emp", Value::Unit);
        let t = Value::con("Node", Value::pair(nat(3), Value::pair(emp.clone(), emp)));
        assert_eq!(m.value_size(&sig, &t).unwrap(), Elem::n(1));
        let (sig, m) = setup("model tree = pair(nodes, labelmax nat)");
        let emp = Value::con("Emp", Value::Unit);
        let t = Value::con("Node", Value::pair(nat(5), Value::pair(emp.clone(), emp)));
        assert_eq!(m.value_size(&sig, &t).unwrap(), Elem::Tuple(vec![Elem::n(1), Elem::n(6)]));
        let z = m.abstract_unfolding(&sig, &t).unwrap();
        assert_eq!(z.to_string(), "Node(6, (0, 0), (0, 0))");
    }

    #[test]
    fn ctors_on_nat() {
        let (sig, m) = setup("");
        assert_eq!(m.value_size(&sig, &nat(0)).unwrap(), Elem::n(1));
        assert_eq!(m.value_size(&sig, &nat(3)).unwrap(), Elem::n(4));
        assert_eq!(m.get("bool").unwrap().sup, Elem::n(1));
        assert_eq!(m.get("nat").unwrap().sup, Elem::N(NInf::Inf));
    }

    #[test]
    fn unitsize_warns() {
        let (_, m) = setup("model nat = unitsize");
        let nat = m.get("nat").unwrap();
        assert!(!nat.strict_descent);
        assert_eq!(nat.carrier, Carrier::OnePoint);
        assert!(m.warnings.iter().any(|w| w.contains("nat")));
    }

    #[test]
    fn stream_unfoldings_use_the_point_domain() {
        let (_, m) = setup("model strm = length");
        let zs = m.unfoldings("strm", &Elem::n(1)).unwrap();
        assert_eq!(show(&zs), ["SCons(fn.(<cost>, •, 0))"]);
    }

    #[test]
    fn arrow_over_nat_is_not_enumerable() {
        let (_, m) = setup("");
        let e = m.unfoldings("inf", &Elem::n(2)).unwrap_err();
        assert!(matches!(e, InterpError::Model(ModelError::InfiniteEnumeration { .. })), "{e}");
    }

    #[test]
    fn config_errors() {
        let p = check_program(&parse_program(SRC).unwrap()).unwrap();
        let cs = translate_sig(&p.signature);
        assert!(matches!(load_models("model foo = ctors", &cs), Err(ModelError::UnknownDatatype(_))));
        assert!(matches!(load_models("model nat = size", &cs), Err(ModelError::Config { line: 1, .. })));
        assert!(matches!(load_models("\n model tree = pair(nodes)", &cs), Err(ModelError::Config { line: 2, .. })));
        assert!(matches!(load_models("model tree = length", &cs), Err(ModelError::Unsupported { .. })));
        assert!(matches!(load_models("model tree = labelmax nat", &cs), Err(ModelError::Unsupported { .. })));
        assert!(load_models("# comment\nmodel tree = height # trailing\nsemrec list\naxiom list = length-quotient", &cs).is_ok());
    }

    fn tree(depth: u32) -> BoxedStrategy<Value> {
        let leaf = Just(Value::con("Emp", Value::Unit)).boxed();
        if depth == 0 {
            return leaf;
        }
        prop_oneof![
            leaf,
            (0usize..4, tree(depth - 1), tree(depth - 1))
                .prop_map(|(n, l, r)| Value::con("Node", Value::pair(nat(n), Value::pair(l, r))))
        ]
        .boxed()
    }

    proptest! {
        #[test]
        fn abstraction_commutes_with_unfolding(t in tree(4), cfg in prop::sample::select(vec![
            "", "model tree = nodes", "model tree = height", "model tree = pair(nodes, labelmax nat)", "model tree = pair(height, ctors)",
        ])) {
            let (sig, m) = setup(cfg);
            let z = m.abstract_unfolding(&sig, &t).unwrap();
            prop_assert_eq!(m.size_of("tree", &z).unwrap(), m.value_size(&sig, &t).unwrap());
            // The exact unfolding is one of those enumerated at its own size.
            let s = m.value_size(&sig, &t).unwrap();
            prop_assert!(m.unfoldings("tree", &s).unwrap().iter().any(|u| u.ctor == z.ctor && u.arg.covers(&z.arg)));
        }

        #[test]
        fn enumeration_is_monotone(a in 0u64..5, b in 0u64..5, cfg in prop::sample::select(vec!["", "model tree = nodes", "model tree = height"])) {
            let (_, m) = setup(cfg);
            let (lo, hi) = (a.min(b), a.max(b));
            let small = m.unfoldings("tree", &Elem::n(lo)).unwrap();
            let big = m.unfoldings("tree", &Elem::n(hi)).unwrap();
            prop_assert!(small.iter().all(|z| big.contains(z)));
        }

        #[test]
        fn strict_descent_holds(b in 0u64..5, cfg in prop::sample::select(vec!["", "model tree = nodes", "model tree = height", "model tree = pair(nodes, labelmax nat)"])) {
            let (_, m) = setup(cfg);
            let bound = if cfg.contains("pair") { Elem::Tuple(vec![Elem::n(b), Elem::n(b)]) } else { Elem::n(b) };
            prop_assert!(m.get("tree").unwrap().strict_descent);
            for z in m.unfoldings("tree", &bound).unwrap() {
                let s = m.size_of("tree", &z).unwrap();
                prop_assert!(z.arg.recs().iter().all(|r| r.lt(&s)), "{} at {}", z, s);
            }
        }
    }
}
