use std::borrow::Borrow;
use std::fmt;
use std::sync::Arc;

/// An interned-by-sharing identifier. Cheap to clone and safe to send across threads.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ident(Arc<str>);

impl Ident {
    pub fn new(s: &str) -> Self {
        Ident(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True for names produced by the desugarer or the translation, which
    /// the surface syntax reserves.
    pub fn is_generated(&self) -> bool {
        self.0.starts_with('_') && self.0.len() > 1
    }
}

impl From<&str> for Ident {
    fn from(s: &str) -> Self {
        Ident::new(s)
    }
}

impl From<String> for Ident {
    fn from(s: String) -> Self {
        Ident(Arc::from(s))
    }
}

impl Borrow<str> for Ident {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Picks a name based on `base` that `taken` rejects; appends a counter when needed.
pub fn fresh_name(base: &str, mut taken: impl FnMut(&str) -> bool) -> Ident {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    if !taken(base) {
        return Ident::new(base);
    }
    let mut i = 1u64;
    loop {
        let cand = format!("{stem}{i}");
        if !taken(&cand) {
            return Ident::from(cand);
        }
        i += 1;
    }
}
