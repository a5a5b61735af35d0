//! Concrete syntax for the four calculi.
//!
//! ```text
//! pi      P ::= 0 | for(y <- x)P | x!(y) | (new x)P | *P | P | P | (P)
//! yoshida P ::= 0 | m(a,b) | d(a,b,c) | k(a) | fw(a,b) | br(a,b) | bl(a,b)
//!             | s(a,b,c) | (new x)P | *P | P | P | (P)
//! rho     P ::= 0 | for(y <- x)P | x!(P) | x!(y) | *(x) | *x | P | P | (P)
//!         x ::= ident | @0 | @(P)
//! rhocomb P ::= 0 | m(a,P) | d(a,b,c) | ... | *(a) | *a | P | P | (P)
//!         a ::= ident | @0 | @(P)
//! ```
//!
//! In ρ, `x!(y)` with a name payload abbreviates `x!(*y)`.

mod lexer;
mod parser;
mod print;

use std::fmt;

use thiserror::Error;

pub use parser::{parse_pi, parse_rho, parse_rho_name, parse_rhocomb, parse_rhocomb_name, parse_yoshida};
pub use print::{render_elided, Quotable};

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}
