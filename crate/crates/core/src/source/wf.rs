use std::collections::HashSet;
use std::fmt;

use super::{Functor, Signature, Type};
use crate::ident::Ident;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub datatype: Ident,
    pub ctor: Option<Ident>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.ctor {
            Some(c) => write!(f, "datatype {}, constructor {}: {}", self.datatype, c, self.message),
            None => write!(f, "datatype {}: {}", self.datatype, self.message),
        }
    }
}

/// Checks that datatypes and constructors are uniquely named and that every
/// constructor argument mentions only strictly earlier datatypes.
pub fn wf_signature(sig: &Signature) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let mut seen_data: HashSet<&Ident> = HashSet::new();
    let mut seen_ctor: HashSet<&Ident> = HashSet::new();
    let all: Vec<&Ident> = sig.decls().iter().map(|d| &d.name).collect();
    for (i, d) in sig.decls().iter().enumerate() {
        if !seen_data.insert(&d.name) {
            out.push(Violation { datatype: d.name.clone(), ctor: None, message: "duplicate datatype name".into() });
        }
        if d.ctors.is_empty() {
            out.push(Violation { datatype: d.name.clone(), ctor: None, message: "no constructors".into() });
        }
        let earlier = &all[..i];
        for c in &d.ctors {
            if !seen_ctor.insert(&c.name) {
                out.push(Violation { datatype: d.name.clone(), ctor: Some(c.name.clone()), message: "duplicate constructor name".into() });
            }
            let mut refs = Vec::new();
            functor_refs(&c.arg, &mut refs);
            for r in refs {
                let msg = if r == d.name {
                    Some(format!("refers to its own datatype `{r}` outside `self`"))
                } else if earlier.contains(&&r) {
                    None
                } else if all.contains(&&r) {
                    Some(format!("forward reference to `{r}`"))
                } else {
                    Some(format!("undeclared datatype `{r}`"))
                };
                if let Some(message) = msg {
                    out.push(Violation { datatype: d.name.clone(), ctor: Some(c.name.clone()), message });
                }
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

fn functor_refs(f: &Functor, out: &mut Vec<Ident>) {
    match f {
        Functor::SelfRef => {}
        Functor::Const(t) => t.datatypes(out),
        Functor::Prod(a, b) => {
            functor_refs(a, out);
            functor_refs(b, out);
        }
        Functor::Arrow(t, b) => {
            t.datatypes(out);
            functor_refs(b, out);
        }
    }
}

/// Checks that a type only mentions declared datatypes.
pub(crate) fn type_ok(sig: &Signature, t: &Type) -> Result<(), Ident> {
    let mut refs = Vec::new();
    t.datatypes(&mut refs);
    match refs.into_iter().find(|r| sig.datatype(r.as_str()).is_none()) {
        Some(r) => Err(r),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_program;
    use super::*;

    fn wf(s: &str) -> Result<(), Vec<Violation>> {
        wf_signature(&parse_program(s).unwrap().signature)
    }

    #[test]
    fn nat_ok() {
        assert!(wf("datatype nat = Zero of unit | Succ of self;").is_ok());
    }

    #[test]
    fn forward_reference() {
        let v = wf("datatype a = A of b; datatype b = B of unit;").unwrap_err();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].ctor.as_ref().unwrap().as_str(), "A");
        assert!(v[0].message.contains("forward"));
    }

    #[test]
    fn stream_syntax_ok() {
        assert!(wf("datatype nat = Zero of unit | Succ of self; datatype strm = Cons of unit -> nat * self;").is_ok());
    }

    #[test]
    fn self_by_name_and_duplicates() {
        let v = wf("datatype a = A of a; datatype b = A of unit;").unwrap_err();
        assert_eq!(v.len(), 2);
    }
}
