use std::sync::Arc;

use super::{CBranch, CExpr, CType};
use crate::error::ParseError;
use crate::ident::Ident;
use crate::lexer::{describe, Cursor, Tok};

const RESERVED: &[&str] = &["fn", "rec", "fst", "snd", "cost", "unit"];

pub fn parse_cexpr(text: &str) -> Result<Arc<CExpr>, ParseError> {
    let mut p = P { c: Cursor::new(text)? };
    let e = p.expr()?;
    p.c.expect_eof()?;
    Ok(e)
}

pub fn parse_ctype(text: &str) -> Result<CType, ParseError> {
    let mut p = P { c: Cursor::new(text)? };
    let t = p.ty()?;
    p.c.expect_eof()?;
    Ok(t)
}

struct P {
    c: Cursor,
}

impl P {
    fn ty(&mut self) -> Result<CType, ParseError> {
        let a = self.tprod()?;
        if self.c.eat_sym("->") {
            return Ok(CType::arrow(a, self.ty()?));
        }
        Ok(a)
    }

    fn tprod(&mut self) -> Result<CType, ParseError> {
        let a = self.tatom()?;
        if self.c.eat_sym("*") {
            return Ok(CType::prod(a, self.tprod()?));
        }
        Ok(a)
    }

    fn tatom(&mut self) -> Result<CType, ParseError> {
        if self.c.eat_kw("cost") {
            return Ok(CType::Cost);
        }
        if self.c.eat_kw("unit") {
            return Ok(CType::Unit);
        }
        if self.c.eat_sym("(") {
            let t = self.ty()?;
            self.c.expect_sym(")")?;
            return Ok(t);
        }
        match self.c.peek() {
            Tok::Lower(_) => Ok(CType::Data(Ident::from(self.c.expect_lower(RESERVED)?))),
            t => self.c.err(format!("expected a type, found {}", describe(t))),
        }
    }

    fn expr(&mut self) -> Result<Arc<CExpr>, ParseError> {
        if self.c.eat_kw("fn") {
            let var = Ident::from(self.c.expect_lower(RESERVED)?);
            let ann = if self.c.eat_sym(":") { Some(self.ty()?) } else { None };
            self.c.expect_sym(".")?;
            let body = self.expr()?;
            return Ok(CExpr::lam(var, ann, body));
        }
        let mut e = self.app()?;
        while self.c.eat_sym("+") {
            let r = self.app()?;
            e = CExpr::plus(e, r);
        }
        Ok(e)
    }

    fn starts_arg(&self) -> bool {
        match self.c.peek() {
            Tok::Lower(s) => !RESERVED.contains(&s.as_str()) || matches!(s.as_str(), "rec" | "fst" | "snd"),
            Tok::Upper(_) | Tok::Num(_) | Tok::Sym("(") => true,
            _ => false,
        }
    }

    fn app(&mut self) -> Result<Arc<CExpr>, ParseError> {
        let mut e = self.prefix()?;
        while self.starts_arg() {
            let a = self.prefix()?;
            e = CExpr::app(e, a);
        }
        Ok(e)
    }

    fn prefix(&mut self) -> Result<Arc<CExpr>, ParseError> {
        if self.c.eat_kw("fst") {
            return Ok(CExpr::fst(self.prefix()?));
        }
        if self.c.eat_kw("snd") {
            return Ok(CExpr::snd(self.prefix()?));
        }
        self.atom()
    }

    fn tuple_tail(&mut self) -> Result<Arc<CExpr>, ParseError> {
        let mut items = vec![self.expr()?];
        while self.c.eat_sym(",") {
            items.push(self.expr()?);
        }
        self.c.expect_sym(")")?;
        let mut acc = items.pop().unwrap();
        while let Some(x) = items.pop() {
            acc = CExpr::pair(x, acc);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Arc<CExpr>, ParseError> {
        if let Tok::Num(n) = *self.c.peek() {
            self.c.bump();
            return Ok(CExpr::num(n));
        }
        if self.c.eat_sym("(") {
            if self.c.eat_sym(")") {
                return Ok(CExpr::unit());
            }
            return self.tuple_tail();
        }
        if let Tok::Upper(_) = self.c.peek() {
            let c = Ident::from(self.c.expect_upper()?);
            self.c.expect_sym("(")?;
            let a = if self.c.eat_sym(")") { CExpr::unit() } else { self.tuple_tail()? };
            return Ok(CExpr::con(c, a));
        }
        if self.c.eat_kw("rec") {
            let ann = if self.c.eat_sym("[") {
                let t = self.ty()?;
                self.c.expect_sym("]")?;
                Some(t)
            } else {
                None
            };
            self.c.expect_sym("(")?;
            let scrut = self.expr()?;
            self.c.expect_sym(";")?;
            let mut branches = vec![self.branch()?];
            while self.c.eat_sym("|") {
                branches.push(self.branch()?);
            }
            self.c.expect_sym(")")?;
            return Ok(Arc::new(CExpr::Rec { scrut, branches: branches.into(), ann }));
        }
        match self.c.peek() {
            Tok::Lower(name) => {
                let (l, col) = self.c.here();
                if self.c.is_sym_next("(") && self.c.next_glued() {
                    return Err(ParseError::new(l, col, format!("constructor names must be uppercase-initial, found '{name}'")));
                }
                let v = self.c.expect_lower(RESERVED)?;
                if v == "_" {
                    return Err(ParseError::new(l, col, "`_` can only bind, not be referenced"));
                }
                Ok(CExpr::var(&Ident::from(v)))
            }
            t => self.c.err(format!("expected an expression, found {}", describe(t))),
        }
    }

    fn branch(&mut self) -> Result<CBranch, ParseError> {
        let ctor = Ident::from(self.c.expect_upper()?);
        self.c.expect_sym("->")?;
        let var = Ident::from(self.c.expect_lower(RESERVED)?);
        self.c.expect_sym(".")?;
        let body = self.expr()?;
        Ok(CBranch { ctor, var, body })
    }
}
