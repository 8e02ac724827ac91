//! The example programs shipped with the crate.

use crate::error::Error;
use crate::source::{check_program, parse_program, CheckedProgram};

/// Name and source text of every corpus program.
pub const PROGRAMS: &[(&str, &str)] = &[
    ("mem", include_str!("../../corpus/mem.src")),
    ("treemap", include_str!("../../corpus/treemap.src")),
    ("listmap", include_str!("../../corpus/listmap.src")),
    ("foldsum", include_str!("../../corpus/foldsum.src")),
    ("conditional", include_str!("../../corpus/conditional.src")),
    ("idnat", include_str!("../../corpus/idnat.src")),
    ("append", include_str!("../../corpus/append.src")),
    ("treesum", include_str!("../../corpus/treesum.src")),
    ("strm", include_str!("../../corpus/strm.src")),
];

/// Programs whose inputs can be generated; `strm` is excluded.
pub const VERIFIABLE: &[&str] = &["mem", "treemap", "listmap", "foldsum", "conditional", "idnat", "append", "treesum"];

pub fn source(name: &str) -> Option<&'static str> {
    PROGRAMS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Parses and typechecks a corpus program.
pub fn load(name: &str) -> Result<CheckedProgram, Error> {
    let text = source(name).ok_or_else(|| Error::Other(format!("no corpus program named `{name}`")))?;
    check_program(&parse_program(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_program_checks() {
        for (name, _) in PROGRAMS {
            load(name).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}
