//! Size abstractions: ∞-extended naturals, carriers, builtin measures, and
//! the bounded enumeration of one-step unfoldings.

mod model;
mod unfold;

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use crate::error::ModelError;

pub use model::{load_models, Measure, ModelTable, SizeModel};
pub use unfold::{is_one_point, AbsArg, AbstractUnfolding};

/// Naturals extended with an absorbing ∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NInf {
    Fin(u64),
    Inf,
}

impl NInf {
    pub const ZERO: NInf = NInf::Fin(0);

    pub fn is_inf(self) -> bool {
        self == NInf::Inf
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            NInf::Fin(n) => Some(n),
            NInf::Inf => None,
        }
    }
}

impl Add for NInf {
    type Output = NInf;
    fn add(self, o: NInf) -> NInf {
        match (self, o) {
            (NInf::Fin(a), NInf::Fin(b)) => a.checked_add(b).map_or(NInf::Inf, NInf::Fin),
            _ => NInf::Inf,
        }
    }
}

impl std::iter::Sum for NInf {
    fn sum<I: Iterator<Item = NInf>>(it: I) -> NInf {
        it.fold(NInf::ZERO, |a, b| a + b)
    }
}

impl From<u64> for NInf {
    fn from(n: u64) -> Self {
        NInf::Fin(n)
    }
}

impl fmt::Display for NInf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NInf::Fin(n) => write!(f, "{n}"),
            NInf::Inf => f.write_str("inf"),
        }
    }
}

/// The shape of a size domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Carrier {
    NInf,
    OnePoint,
    Tuple(Vec<Carrier>),
}

/// An element of some carrier.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    N(NInf),
    Point,
    Tuple(Vec<Elem>),
}

impl Elem {
    pub fn n(k: u64) -> Elem {
        Elem::N(NInf::Fin(k))
    }

    pub fn has_inf(&self) -> bool {
        match self {
            Elem::N(n) => n.is_inf(),
            Elem::Point => false,
            Elem::Tuple(xs) => xs.iter().any(Elem::has_inf),
        }
    }

    /// The numeric value of an `N` element; other elements count as zero.
    pub fn as_ninf(&self) -> NInf {
        match self {
            Elem::N(n) => *n,
            _ => NInf::ZERO,
        }
    }

    /// Component `i` of a tuple element; non-tuples are returned unchanged.
    pub fn component(&self, i: usize) -> Elem {
        match self {
            Elem::Tuple(xs) => xs.get(i).cloned().unwrap_or(Elem::Point),
            e => e.clone(),
        }
    }

    /// The componentwise partial order; `None` when incomparable or of different shapes.
    pub fn partial_cmp_size(&self, o: &Elem) -> Option<Ordering> {
        match (self, o) {
            (Elem::N(a), Elem::N(b)) => Some(a.cmp(b)),
            (Elem::Point, Elem::Point) => Some(Ordering::Equal),
            (Elem::Tuple(xs), Elem::Tuple(ys)) if xs.len() == ys.len() => {
                let mut acc = Ordering::Equal;
                for (x, y) in xs.iter().zip(ys) {
                    match (acc, x.partial_cmp_size(y)?) {
                        (_, Ordering::Equal) => {}
                        (Ordering::Equal, o) => acc = o,
                        (a, o) if a == o => {}
                        _ => return None,
                    }
                }
                Some(acc)
            }
            _ => None,
        }
    }

    pub fn leq(&self, o: &Elem) -> bool {
        matches!(self.partial_cmp_size(o), Some(Ordering::Less | Ordering::Equal))
    }

    pub fn lt(&self, o: &Elem) -> bool {
        self.partial_cmp_size(o) == Some(Ordering::Less)
    }

    /// Least upper bound of two elements of the same carrier.
    pub fn join(&self, o: &Elem) -> Elem {
        match (self, o) {
            (Elem::N(a), Elem::N(b)) => Elem::N((*a).max(*b)),
            (Elem::Tuple(xs), Elem::Tuple(ys)) => Elem::Tuple(xs.iter().zip(ys).map(|(x, y)| x.join(y)).collect()),
            _ => self.clone(),
        }
    }

    /// Greatest lower bound, used to intersect enumeration bounds.
    pub fn meet(&self, o: &Elem) -> Elem {
        match (self, o) {
            (Elem::N(a), Elem::N(b)) => Elem::N((*a).min(*b)),
            (Elem::Tuple(xs), Elem::Tuple(ys)) => Elem::Tuple(xs.iter().zip(ys).map(|(x, y)| x.meet(y)).collect()),
            _ => self.clone(),
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::N(n) => write!(f, "{n}"),
            Elem::Point => f.write_str("*"),
            Elem::Tuple(xs) => {
                f.write_str("(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl Carrier {
    pub fn bottom(&self) -> Elem {
        match self {
            Carrier::NInf => Elem::N(NInf::ZERO),
            Carrier::OnePoint => Elem::Point,
            Carrier::Tuple(cs) => Elem::Tuple(cs.iter().map(Carrier::bottom).collect()),
        }
    }

    pub fn top(&self) -> Elem {
        match self {
            Carrier::NInf => Elem::N(NInf::Inf),
            Carrier::OnePoint => Elem::Point,
            Carrier::Tuple(cs) => Elem::Tuple(cs.iter().map(Carrier::top).collect()),
        }
    }

    pub fn contains(&self, e: &Elem) -> bool {
        match (self, e) {
            (Carrier::NInf, Elem::N(_)) | (Carrier::OnePoint, Elem::Point) => true,
            (Carrier::Tuple(cs), Elem::Tuple(xs)) => cs.len() == xs.len() && cs.iter().zip(xs).all(|(c, x)| c.contains(x)),
            _ => false,
        }
    }

    pub fn join_all<'a>(&self, it: impl IntoIterator<Item = &'a Elem>) -> Elem {
        it.into_iter().fold(self.bottom(), |acc, x| acc.join(x))
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Carrier::NInf => false,
            Carrier::OnePoint => true,
            Carrier::Tuple(cs) => cs.iter().all(Carrier::is_finite),
        }
    }

    /// All elements below `b`, in lexicographic order.
    pub fn enumerate_upto(&self, b: &Elem) -> Result<Vec<Elem>, ModelError> {
        if b.has_inf() {
            return Err(ModelError::InfiniteBound(b.to_string()));
        }
        Ok(match (self, b) {
            (Carrier::NInf, Elem::N(NInf::Fin(n))) => (0..=*n).map(Elem::n).collect(),
            (Carrier::OnePoint, _) => vec![Elem::Point],
            (Carrier::Tuple(cs), Elem::Tuple(bs)) => {
                let mut out = vec![Vec::new()];
                for (c, bi) in cs.iter().zip(bs) {
                    let xs = c.enumerate_upto(bi)?;
                    out = out.into_iter().flat_map(|pre| xs.iter().map(move |x| [pre.clone(), vec![x.clone()]].concat())).collect();
                }
                out.into_iter().map(Elem::Tuple).collect()
            }
            _ => return Err(ModelError::InfiniteBound(format!("{b} is not an element of this carrier"))),
        })
    }

    /// Grid points with every numeric component in `lo..=hi`.
    pub fn grid(&self, lo: u64, hi: u64) -> Vec<Elem> {
        match self {
            Carrier::NInf => (lo..=hi).map(Elem::n).collect(),
            Carrier::OnePoint => vec![Elem::Point],
            Carrier::Tuple(cs) => {
                let mut out = vec![Vec::new()];
                for c in cs {
                    let xs = c.grid(lo, hi);
                    out = out.into_iter().flat_map(|pre| xs.iter().map(move |x| [pre.clone(), vec![x.clone()]].concat())).collect();
                }
                out.into_iter().map(Elem::Tuple).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn carrier() -> impl Strategy<Value = Carrier> {
        let leaf = prop_oneof![Just(Carrier::NInf), Just(Carrier::OnePoint)];
        leaf.prop_recursive(2, 6, 3, |inner| prop::collection::vec(inner, 1..3).prop_map(Carrier::Tuple))
    }

    fn elem_of(c: &Carrier) -> BoxedStrategy<Elem> {
        match c {
            Carrier::NInf => prop_oneof![4 => (0u64..6).prop_map(Elem::n), 1 => Just(Elem::N(NInf::Inf))].boxed(),
            Carrier::OnePoint => Just(Elem::Point).boxed(),
            Carrier::Tuple(cs) => cs.iter().map(elem_of).collect::<Vec<_>>().prop_map(Elem::Tuple).boxed(),
        }
    }

    fn three() -> impl Strategy<Value = (Carrier, Elem, Elem, Elem)> {
        carrier().prop_flat_map(|c| {
            let s = elem_of(&c);
            (Just(c), s.clone(), s.clone(), s)
        })
    }

    proptest! {
        #[test]
        fn join_laws((c, a, b, d) in three()) {
            prop_assert_eq!(a.join(&a), a.clone());
            prop_assert_eq!(a.join(&b), b.join(&a));
            prop_assert_eq!(a.join(&b).join(&d), a.join(&b.join(&d)));
            prop_assert_eq!(c.bottom().join(&a), a.clone());
            prop_assert_eq!(c.top().join(&a), c.top());
            prop_assert!(a.leq(&a.join(&b)) && b.leq(&a.join(&b)));
        }

        #[test]
        fn enumeration_is_exact((c, b, x) in carrier().prop_flat_map(|c| {
            let s = finite_elem_of(&c);
            (Just(c), s.clone(), s)
        })) {
            let xs = c.enumerate_upto(&b).unwrap();
            prop_assert!(xs.iter().all(|y| y.leq(&b) && c.contains(y)));
            prop_assert_eq!(xs.contains(&x), x.leq(&b));
        }
    }

    fn finite_elem_of(c: &Carrier) -> BoxedStrategy<Elem> {
        match c {
            Carrier::NInf => (0u64..5).prop_map(Elem::n).boxed(),
            Carrier::OnePoint => Just(Elem::Point).boxed(),
            Carrier::Tuple(cs) => cs.iter().map(finite_elem_of).collect::<Vec<_>>().prop_map(Elem::Tuple).boxed(),
        }
    }

    #[test]
    fn ninf_arithmetic() {
        assert_eq!(NInf::Fin(3) + NInf::Inf, NInf::Inf);
        assert_eq!(NInf::Inf + NInf::Fin(3), NInf::Inf);
        assert!(NInf::Fin(u64::MAX) < NInf::Inf);
        assert_eq!(NInf::Fin(2) + NInf::Fin(3), NInf::Fin(5));
        assert_eq!(NInf::Inf.to_string(), "inf");
    }

    #[test]
    fn tuple_order_is_componentwise() {
        let a = Elem::Tuple(vec![Elem::n(1), Elem::n(2)]);
        let b = Elem::Tuple(vec![Elem::n(2), Elem::n(1)]);
        assert!(!a.leq(&b) && !b.leq(&a));
        assert_eq!(a.join(&b), Elem::Tuple(vec![Elem::n(2), Elem::n(2)]));
        assert!(Elem::Tuple(vec![Elem::n(1), Elem::n(1)]).lt(&a));
    }
}
