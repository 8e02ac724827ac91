//! Datatype signatures, shared by the source and complexity languages.

use std::collections::HashMap;

use crate::ident::Ident;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CtorDecl<F> {
    pub name: Ident,
    pub arg: F,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataDecl<F> {
    pub name: Ident,
    pub ctors: Vec<CtorDecl<F>>,
}

#[derive(Clone, Copy, Debug)]
pub struct CtorRef<'a, F> {
    pub datatype: &'a Ident,
    pub decl_index: usize,
    pub index: usize,
    pub name: &'a Ident,
    pub arg: &'a F,
}

#[derive(Clone, Debug)]
pub struct Signature<F> {
    decls: Vec<DataDecl<F>>,
    ctor_index: HashMap<Ident, (usize, usize)>,
    data_index: HashMap<Ident, usize>,
}

impl<F: PartialEq> PartialEq for Signature<F> {
    fn eq(&self, other: &Self) -> bool {
        self.decls == other.decls
    }
}

impl<F> Default for Signature<F> {
    fn default() -> Self {
        Signature { decls: Vec::new(), ctor_index: HashMap::new(), data_index: HashMap::new() }
    }
}

impl<F> Signature<F> {
    /// Builds the lookup tables. The first declaration of a duplicated name wins;
    /// duplicates are reported by the well-formedness check, not here.
    pub fn new(decls: Vec<DataDecl<F>>) -> Self {
        let mut s = Signature { decls: Vec::new(), ctor_index: HashMap::new(), data_index: HashMap::new() };
        for d in decls {
            s.push(d);
        }
        s
    }

    pub fn push(&mut self, d: DataDecl<F>) {
        let i = self.decls.len();
        self.data_index.entry(d.name.clone()).or_insert(i);
        for (j, c) in d.ctors.iter().enumerate() {
            self.ctor_index.entry(c.name.clone()).or_insert((i, j));
        }
        self.decls.push(d);
    }

    pub fn decls(&self) -> &[DataDecl<F>] {
        &self.decls
    }

    pub fn datatype(&self, name: &str) -> Option<&DataDecl<F>> {
        self.data_index.get(name).map(|&i| &self.decls[i])
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.data_index.get(name).copied()
    }

    pub fn ctor(&self, name: &str) -> Option<CtorRef<'_, F>> {
        self.ctor_index.get(name).map(|&(i, j)| {
            let d = &self.decls[i];
            CtorRef { datatype: &d.name, decl_index: i, index: j, name: &d.ctors[j].name, arg: &d.ctors[j].arg }
        })
    }

    pub fn map<G>(&self, mut f: impl FnMut(&F) -> G) -> Signature<G> {
        Signature::new(
            self.decls
                .iter()
                .map(|d| DataDecl {
                    name: d.name.clone(),
                    ctors: d.ctors.iter().map(|c| CtorDecl { name: c.name.clone(), arg: f(&c.arg) }).collect(),
                })
                .collect(),
        )
    }
}
