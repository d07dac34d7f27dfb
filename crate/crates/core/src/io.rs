//! The line-based block file format.
//!
//! ```text
//! # comment
//! universe a b c
//! block a b
//! block c
//! ```
//!
//! Tokens are separated by whitespace and `#` starts a comment. The
//! `universe` line comes first and appears once.

use std::collections::HashSet;

use crate::blocks::{valid_atom_label, BlockStructure};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("no universe line")]
    MissingUniverse,
    #[error("block before the universe line")]
    BlockBeforeUniverse,
    #[error("second universe line")]
    DuplicateUniverse,
    #[error("empty universe")]
    EmptyUniverse,
    #[error("universe lists `{0}` twice")]
    DuplicateAtom(String),
    #[error("invalid atom label `{0}`")]
    InvalidLabel(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("empty block")]
    EmptyBlock,
    #[error("block repeats atom `{0}`")]
    RepeatedAtom(String),
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("{0}")]
    Invalid(String),
}

pub fn parse_block_file(text: &str) -> Result<BlockStructure, ParseError> {
    let mut universe: Option<(usize, Vec<String>)> = None;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |kind| ParseError { line, kind };
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = content.split_whitespace();
        let Some(directive) = tokens.next() else {
            continue;
        };
        match directive {
            "universe" => {
                if universe.is_some() {
                    return Err(err(ParseErrorKind::DuplicateUniverse));
                }
                let mut seen = HashSet::new();
                let mut atoms = Vec::new();
                for t in tokens {
                    if !valid_atom_label(t) {
                        return Err(err(ParseErrorKind::InvalidLabel(t.into())));
                    }
                    if !seen.insert(t) {
                        return Err(err(ParseErrorKind::DuplicateAtom(t.into())));
                    }
                    atoms.push(t.to_owned());
                }
                if atoms.is_empty() {
                    return Err(err(ParseErrorKind::EmptyUniverse));
                }
                universe = Some((line, atoms));
            }
            "block" => {
                let Some((_, atoms)) = &universe else {
                    return Err(err(ParseErrorKind::BlockBeforeUniverse));
                };
                let mut block = Vec::new();
                for t in tokens {
                    let a = atoms
                        .iter()
                        .position(|x| x == t)
                        .ok_or_else(|| err(ParseErrorKind::UnknownAtom(t.into())))?;
                    if block.contains(&a) {
                        return Err(err(ParseErrorKind::RepeatedAtom(t.into())));
                    }
                    block.push(a);
                }
                if block.is_empty() {
                    return Err(err(ParseErrorKind::EmptyBlock));
                }
                blocks.push(block);
            }
            other => return Err(err(ParseErrorKind::UnknownDirective(other.into()))),
        }
    }
    let (line, atoms) = universe.ok_or(ParseError {
        line: 0,
        kind: ParseErrorKind::MissingUniverse,
    })?;
    BlockStructure::new(atoms, blocks).map_err(|e| ParseError {
        line,
        kind: ParseErrorKind::Invalid(e.to_string()),
    })
}

/// Serializes without comments; atoms inside a block follow universe order.
pub fn to_block_file(b: &BlockStructure) -> String {
    let mut s = format!("universe {}\n", b.universe().join(" "));
    for block in b.blocks() {
        let names: Vec<&str> = block.iter().map(|&a| b.atom(a)).collect();
        s.push_str(&format!("block {}\n", names.join(" ")));
    }
    s
}
