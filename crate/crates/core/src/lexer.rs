use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Lowercase-initial identifier or keyword.
    Lower(String),
    /// Uppercase-initial identifier (constructor).
    Upper(String),
    Num(u64),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    /// True when no whitespace or comment separates this token from the previous one.
    pub glued: bool,
    pub line: usize,
    pub col: usize,
}

const SYMS: &[&str] = &[
    "->", "..", "=", ";", "|", "*", "(", ")", ",", ".", ":", "[", "]", "+",
];

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut last_end = usize::MAX;
    while i < chars.len() {
        let c = chars[i];
        let glued = last_end == i;
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start_col = col;
        if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'' || chars[i] == '-' && is_model_dash(&chars, i))
            {
                i += 1;
            }
            let word: String = chars[s..i].iter().collect();
            col += i - s;
            let tok = if c.is_ascii_uppercase() { Tok::Upper(word) } else { Tok::Lower(word) };
            out.push(Token { tok, glued, line, col: start_col });
            last_end = i;
            continue;
        }
        if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let word: String = chars[s..i].iter().collect();
            col += i - s;
            let n = word.parse::<u64>().map_err(|_| ParseError::new(line, start_col, "numeral too large"))?;
            out.push(Token { tok: Tok::Num(n), glued, line, col: start_col });
            last_end = i;
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                i += s.len();
                col += s.len();
                out.push(Token { tok: Tok::Sym(s), glued, line, col: start_col });
                last_end = i;
            }
            None => return Err(ParseError::new(line, col, format!("unexpected character '{c}'"))),
        }
    }
    out.push(Token { tok: Tok::Eof, glued: false, line, col });
    Ok(out)
}

// `length-quotient` in model configs is one word; elsewhere `-` only starts `->`.
fn is_model_dash(chars: &[char], i: usize) -> bool {
    chars.get(i + 1).is_some_and(|c| c.is_ascii_alphabetic())
}

/// A cursor over a token stream with the small helpers every parser here needs.
pub struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Cursor { toks: lex(src)?, pos: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    /// True if the token after the current one is glued to it.
    pub fn next_glued(&self) -> bool {
        self.toks.get(self.pos + 1).is_some_and(|t| t.glued)
    }

    pub fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (l, c) = self.here();
        Err(ParseError::new(l, c, msg))
    }

    pub fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    pub fn is_sym_next(&self, s: &str) -> bool {
        matches!(self.peek_at(1), Tok::Sym(t) if *t == s)
    }

    pub fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Lower(t) if t == k)
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn eat_kw(&mut self, k: &str) -> bool {
        if self.is_kw(k) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.err(format!("expected '{s}', found {}", describe(self.peek())))
        }
    }

    pub fn expect_kw(&mut self, k: &str) -> Result<(), ParseError> {
        if self.eat_kw(k) {
            Ok(())
        } else {
            self.err(format!("expected '{k}', found {}", describe(self.peek())))
        }
    }

    pub fn expect_upper(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Upper(s) => {
                self.bump();
                Ok(s)
            }
            Tok::Lower(s) => self.err(format!("constructor names must be uppercase-initial, found '{s}'")),
            t => self.err(format!("expected a constructor, found {}", describe(&t))),
        }
    }

    /// A lowercase identifier that is not one of `reserved`.
    pub fn expect_lower(&mut self, reserved: &[&str]) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Lower(s) if reserved.contains(&s.as_str()) => self.err(format!("'{s}' is a keyword")),
            Tok::Lower(s) => {
                if s.starts_with('_') && s.len() > 1 {
                    return self.err(format!("identifiers starting with '_' are reserved: '{s}'"));
                }
                if s.contains('-') {
                    return self.err(format!("unexpected '{s}'"));
                }
                self.bump();
                Ok(s)
            }
            Tok::Upper(s) => self.err(format!("variable names must be lowercase-initial, found '{s}'")),
            t => self.err(format!("expected an identifier, found {}", describe(&t))),
        }
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub fn expect_eof(&self) -> Result<(), ParseError> {
        if self.at_eof() {
            Ok(())
        } else {
            self.err(format!("unexpected {}", describe(self.peek())))
        }
    }
}

pub fn describe(t: &Tok) -> String {
    match t {
        Tok::Lower(s) | Tok::Upper(s) => format!("'{s}'"),
        Tok::Num(n) => format!("'{n}'"),
        Tok::Sym(s) => format!("'{s}'"),
        Tok::Eof => "end of input".to_string(),
    }
}
