use std::sync::Arc;

use super::{Branch, CtorDecl, DataDecl, Def, Expr, Functor, Program, Signature, Type};
use crate::error::ParseError;
use crate::ident::Ident;
use crate::lexer::{describe, Cursor, Tok};

const RESERVED: &[&str] = &[
    "datatype", "of", "self", "unit", "susp", "def", "split", "as", "in", "fn", "delay", "force", "rec", "map",
    "let", "import",
];

/// Default number of constructors of the library `int` type.
pub const DEFAULT_INT_WIDTH: usize = 16;

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(text)?;
    let mut decls: Vec<DataDecl> = Vec::new();
    let mut defs = Vec::new();
    while !p.c.at_eof() {
        let (line, _) = p.c.here();
        if p.c.eat_kw("datatype") {
            decls.push(p.datadecl()?);
        } else if p.c.eat_kw("def") {
            let name = Ident::from(p.c.expect_lower(RESERVED)?);
            let ann = if p.c.eat_sym(":") { Some(p.ty()?) } else { None };
            p.c.expect_sym("=")?;
            let body = p.expr()?;
            p.c.expect_sym(";")?;
            defs.push(Def { name, ann, body, line });
        } else if p.c.eat_kw("import") {
            let (l, col) = p.c.here();
            let lib = p.c.expect_lower(&[])?;
            if lib != "int" {
                return Err(ParseError::new(l, col, format!("unknown library `{lib}`")));
            }
            let width = if p.c.eat_sym("(") {
                let n = match p.c.bump() {
                    Tok::Num(n) if n >= 1 => n as usize,
                    t => return Err(ParseError::new(l, col, format!("expected a positive width, found {}", describe(&t)))),
                };
                p.c.expect_sym(")")?;
                n
            } else {
                DEFAULT_INT_WIDTH
            };
            p.c.expect_sym(";")?;
            let has_bool = decls.iter().any(|d| {
                d.name.as_str() == "bool" && d.ctors.iter().any(|c| c.name.as_str() == "True") && d.ctors.iter().any(|c| c.name.as_str() == "False")
            });
            if !has_bool {
                return Err(ParseError::new(l, col, "`import int` needs an earlier `datatype bool = True of unit | False of unit`"));
            }
            let lib = parse_program(&int_library(width))?;
            decls.extend(lib.signature.decls().iter().cloned());
            defs.extend(lib.defs.into_iter().map(|d| Def { line, ..d }));
        } else {
            return p.c.err(format!("expected a declaration, found {}", describe(p.c.peek())));
        }
    }
    Ok(Program { signature: Signature::new(decls), defs })
}

/// Source text of the `int` library: `width` nullary constructors and an
/// equality test costing one application and two recursor unfoldings.
pub fn int_library(width: usize) -> String {
    let ctors: Vec<String> = (0..width).map(|i| format!("I{i} of unit")).collect();
    let mut s = format!("datatype int = {};\n", ctors.join(" | "));
    let outer: Vec<String> = (0..width)
        .map(|i| {
            let inner: Vec<String> = (0..width)
                .map(|j| format!("I{j} -> w. {}()", if i == j { "True" } else { "False" }))
                .collect();
            format!("I{i} -> u. rec(b; {})", inner.join(" | "))
        })
        .collect();
    s.push_str(&format!(
        "def inteq : int * int -> bool = fn p. split p as (a, b) in rec(a; {});\n",
        outer.join(" | ")
    ));
    s
}

pub fn parse_expr(text: &str) -> Result<Arc<Expr>, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.c.expect_eof()?;
    Ok(e)
}

pub fn parse_type(text: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.ty()?;
    p.c.expect_eof()?;
    Ok(t)
}

pub fn parse_functor(text: &str) -> Result<Functor, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.functor()?;
    p.c.expect_eof()?;
    Ok(f)
}

enum Pat {
    Var(Ident),
    Pair(Box<Pat>, Box<Pat>),
}

struct Parser {
    c: Cursor,
    fresh: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { c: Cursor::new(text)?, fresh: 0 })
    }

    fn fresh(&mut self) -> Ident {
        self.fresh += 1;
        Ident::from(format!("_p{}", self.fresh))
    }

    fn binder(&mut self) -> Result<Ident, ParseError> {
        Ok(Ident::from(self.c.expect_lower(RESERVED)?))
    }

    fn datadecl(&mut self) -> Result<DataDecl, ParseError> {
        let name = Ident::from(self.c.expect_lower(RESERVED)?);
        self.c.expect_sym("=")?;
        let mut ctors = Vec::new();
        loop {
            let cname = Ident::from(self.c.expect_upper()?);
            self.c.expect_kw("of")?;
            let arg = self.functor()?;
            ctors.push(CtorDecl { name: cname, arg });
            if !self.c.eat_sym("|") {
                break;
            }
        }
        self.c.expect_sym(";")?;
        Ok(DataDecl { name, ctors })
    }

    fn functor(&mut self) -> Result<Functor, ParseError> {
        let (l, col) = self.c.here();
        let f = self.fprod()?.canonical();
        if self.c.eat_sym("->") {
            let cod = self.functor()?;
            return match f {
                Functor::Const(d) => Ok(Functor::Arrow(d, Box::new(cod)).canonical()),
                _ => Err(ParseError::new(l, col, "the domain of an arrow functor cannot mention `self`")),
            };
        }
        Ok(f)
    }

    fn fprod(&mut self) -> Result<Functor, ParseError> {
        let a = self.fatom()?;
        if self.c.eat_sym("*") {
            let b = self.fprod()?;
            return Ok(Functor::Prod(Box::new(a), Box::new(b)));
        }
        Ok(a)
    }

    fn fatom(&mut self) -> Result<Functor, ParseError> {
        if self.c.eat_kw("self") {
            return Ok(Functor::SelfRef);
        }
        if self.c.eat_sym("(") {
            let f = self.functor()?;
            self.c.expect_sym(")")?;
            return Ok(f);
        }
        Ok(Functor::Const(self.tatom()?))
    }

    fn ty(&mut self) -> Result<Type, ParseError> {
        let a = self.tprod()?;
        if self.c.eat_sym("->") {
            return Ok(Type::arrow(a, self.ty()?));
        }
        Ok(a)
    }

    fn tprod(&mut self) -> Result<Type, ParseError> {
        let a = self.tatom()?;
        if self.c.eat_sym("*") {
            return Ok(Type::prod(a, self.tprod()?));
        }
        Ok(a)
    }

    fn tatom(&mut self) -> Result<Type, ParseError> {
        if self.c.eat_kw("unit") {
            return Ok(Type::Unit);
        }
        if self.c.eat_kw("susp") {
            return Ok(Type::susp(self.tatom()?));
        }
        if self.c.eat_sym("(") {
            let t = self.ty()?;
            self.c.expect_sym(")")?;
            return Ok(t);
        }
        match self.c.peek() {
            Tok::Lower(_) => Ok(Type::Data(Ident::from(self.c.expect_lower(RESERVED)?))),
            t => self.c.err(format!("expected a type, found {}", describe(t))),
        }
    }

    fn expr(&mut self) -> Result<Arc<Expr>, ParseError> {
        if self.c.eat_kw("fn") {
            let var = self.binder()?;
            let ann = if self.c.eat_sym(":") { Some(self.ty()?) } else { None };
            self.c.expect_sym(".")?;
            let body = self.expr()?;
            return Ok(Arc::new(Expr::Lam { var, ann, body }));
        }
        if self.c.eat_kw("let") {
            let var = self.binder()?;
            self.c.expect_sym("=")?;
            let bound = self.expr()?;
            self.c.expect_kw("in")?;
            let body = self.expr()?;
            return Ok(Arc::new(Expr::Let { bound, var, body }));
        }
        if self.c.eat_kw("split") {
            let scrut = self.expr()?;
            self.c.expect_kw("as")?;
            self.c.expect_sym("(")?;
            let left = self.binder()?;
            self.c.expect_sym(",")?;
            let right = self.binder()?;
            self.c.expect_sym(")")?;
            self.c.expect_kw("in")?;
            let body = self.expr()?;
            return Ok(Arc::new(Expr::Split { scrut, left, right, body }));
        }
        let mut e = self.prefix()?;
        while self.starts_atom() {
            let a = self.prefix()?;
            e = Expr::app(e, a);
        }
        Ok(e)
    }

    fn starts_atom(&self) -> bool {
        match self.c.peek() {
            Tok::Lower(s) => !RESERVED.contains(&s.as_str()) || matches!(s.as_str(), "rec" | "map" | "delay" | "force"),
            Tok::Upper(_) => true,
            Tok::Sym("(") => true,
            _ => false,
        }
    }

    fn prefix(&mut self) -> Result<Arc<Expr>, ParseError> {
        if self.c.eat_kw("delay") {
            return Ok(Arc::new(Expr::Delay(self.prefix()?)));
        }
        if self.c.eat_kw("force") {
            return Ok(Arc::new(Expr::Force(self.prefix()?)));
        }
        self.atom()
    }

    fn tuple_tail(&mut self) -> Result<Arc<Expr>, ParseError> {
        let first = self.expr()?;
        let mut items = vec![first];
        while self.c.eat_sym(",") {
            items.push(self.expr()?);
        }
        self.c.expect_sym(")")?;
        Ok(right_nest(items))
    }

    fn atom(&mut self) -> Result<Arc<Expr>, ParseError> {
        if self.c.eat_sym("(") {
            if self.c.eat_sym(")") {
                return Ok(Expr::unit());
            }
            return self.tuple_tail();
        }
        if let Tok::Upper(_) = self.c.peek() {
            let c = Ident::from(self.c.expect_upper()?);
            self.c.expect_sym("(")?;
            let arg = if self.c.eat_sym(")") { Expr::unit() } else { self.tuple_tail()? };
            return Ok(Arc::new(Expr::Con(c, arg)));
        }
        if self.c.eat_kw("rec") {
            self.c.expect_sym("(")?;
            let scrut = self.expr()?;
            self.c.expect_sym(";")?;
            let mut branches = vec![self.branch()?];
            while self.c.eat_sym("|") {
                branches.push(self.branch()?);
            }
            self.c.expect_sym(")")?;
            return Ok(Arc::new(Expr::Rec { scrut, branches: branches.into(), ann: None }));
        }
        if self.c.eat_kw("map") {
            self.c.expect_sym("[")?;
            let functor = self.functor()?;
            self.c.expect_sym("]")?;
            self.c.expect_sym("(")?;
            let var = self.binder()?;
            self.c.expect_sym(".")?;
            let body = self.expr()?;
            self.c.expect_sym(";")?;
            let target = self.expr()?;
            self.c.expect_sym(")")?;
            return Ok(Arc::new(Expr::Map { functor, var, ann: None, body, target }));
        }
        let (l, col) = self.c.here();
        match self.c.peek() {
            Tok::Lower(name) => {
                if self.c.is_sym_next("(") && self.c.next_glued() {
                    return Err(ParseError::new(l, col, format!("constructor names must be uppercase-initial, found '{name}'")));
                }
                let v = self.c.expect_lower(RESERVED)?;
                if v == "_" {
                    return Err(ParseError::new(l, col, "`_` can only bind, not be referenced"));
                }
                Ok(Arc::new(Expr::Var(Ident::from(v))))
            }
            t => self.c.err(format!("expected an expression, found {}", describe(t))),
        }
    }

    fn branch(&mut self) -> Result<Branch, ParseError> {
        let ctor = Ident::from(self.c.expect_upper()?);
        self.c.expect_sym("->")?;
        let pat = self.pat()?;
        self.c.expect_sym(".")?;
        let body = self.expr()?;
        Ok(match pat {
            Pat::Var(var) => Branch { ctor, var, body },
            pat => {
                let var = self.fresh();
                let body = self.desugar(&var, pat, body);
                Branch { ctor, var, body }
            }
        })
    }

    fn pat(&mut self) -> Result<Pat, ParseError> {
        if self.c.eat_sym("(") {
            let mut items = vec![self.pat()?];
            while self.c.eat_sym(",") {
                items.push(self.pat()?);
            }
            self.c.expect_sym(")")?;
            if items.len() == 1 {
                return Ok(items.pop().unwrap());
            }
            let mut it = items.into_iter().rev();
            let mut acc = it.next().unwrap();
            for p in it {
                acc = Pat::Pair(Box::new(p), Box::new(acc));
            }
            return Ok(acc);
        }
        Ok(Pat::Var(self.binder()?))
    }

    /// Tuple patterns become nested splits, outermost first, left before right.
    fn desugar(&mut self, v: &Ident, pat: Pat, body: Arc<Expr>) -> Arc<Expr> {
        let Pat::Pair(a, b) = pat else { unreachable!("variable patterns bind directly") };
        let na = match &*a {
            Pat::Var(x) => x.clone(),
            Pat::Pair(..) => self.fresh(),
        };
        let nb = match &*b {
            Pat::Var(x) => x.clone(),
            Pat::Pair(..) => self.fresh(),
        };
        let mut inner = body;
        if let Pat::Pair(..) = *b {
            inner = self.desugar(&nb, *b, inner);
        }
        if let Pat::Pair(..) = *a {
            inner = self.desugar(&na, *a, inner);
        }
        Arc::new(Expr::Split { scrut: Arc::new(Expr::Var(v.clone())), left: na, right: nb, body: inner })
    }
}

fn right_nest(mut items: Vec<Arc<Expr>>) -> Arc<Expr> {
    let mut acc = items.pop().expect("non-empty");
    while let Some(x) = items.pop() {
        acc = Expr::pair(x, acc);
    }
    acc
}
