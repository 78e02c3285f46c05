//! Text and JSON formats.
//!
//! Text grammar, whitespace insensitive:
//!
//! ```text
//! poly    := ['-'] product (('+' | '-') product)*
//! product := factor ('*' factor)*
//! factor  := rational | 'X' ['^' (int | '(' surint ')')] | name | '(' poly ')'
//!          | 'sum' '(' 'n' '<' ('w' | int) ',' [coef '*'] 'X' '^' '(' affine ')' ')'
//!          | 'series' '(' 'X' '^' '(' surint ')' ',' list ',' list ')'
//! coef    := cfactor ('*' cfactor)*
//! cfactor := rational | '(' npoly ')' | '(' rational ')' '^' 'n'
//! surint  := linear combination of 'w', 'w^(ordinal)', 'w^int' and integers
//! affine  := surint plus an integer multiple of 'n', with parentheses
//! ```
//!
//! `w` stands for ω. Printing is canonical and parses back to the same value.

mod json;
mod lexer;
mod parser;
mod printer;

use std::fmt;

pub use json::{from_json, poly_json_value, to_json, trace_to_json};
pub use parser::{parse_ordinal, parse_poly, parse_poly_with, parse_surint, PolyParser};
pub use printer::{print_npoly, print_poly, print_surint};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub offset: usize,
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at {}..{}: expected {}, found {}",
            self.span.offset,
            self.span.offset + self.span.length,
            self.expected,
            self.found
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaError {
    /// JSON path of the offending value, like `$.families[0].ratio`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "schema error at {}: {}", self.path, self.message)
    }
}

impl std::error::Error for SchemaError {}

/// Anything that can go wrong reading a value from text or JSON.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TextError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Schema(#[from] SchemaError),
    #[error("{0}")]
    Engine(#[from] Error),
}
