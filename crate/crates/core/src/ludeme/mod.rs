//! The ludeme description language: lexer, tree, parser and printer.
//!
//! A description is a single parenthesized expression. `(head args...)` is a
//! constructor, `{ ... }` a set, and the leaves are symbols, quoted strings
//! and decimal numbers. The parser knows nothing about particular ludemes;
//! any head symbol is accepted and validation happens later.

mod lexer;
mod node;
mod parser;

use std::fmt;

use thiserror::Error;

pub use lexer::{tokenize, Token, TokenKind};
pub use node::{LudemeNode, NodeKind};
pub use parser::{parse, parse_source, print};

/// Byte range of a token or node in the source, with the 1-based line of its
/// first character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize, line: usize) -> Self {
        debug_assert!(start <= end);
        Self { start, end, line }
    }

    /// Smallest span covering both.
    pub fn join(self, other: SourceSpan) -> SourceSpan {
        let (first, _) = if self.start <= other.start { (self, other) } else { (other, self) };
        SourceSpan {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
            line: first.line,
        }
    }

    pub fn slice<'a>(&self, source: &'a str) -> &'a str {
        &source[self.start..self.end]
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {} [{}..{}]", self.line, self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("unterminated string starting at {span}")]
    UnterminatedString { span: SourceSpan },
    #[error("illegal character {ch:?} at {span}")]
    IllegalCharacter { ch: char, span: SourceSpan },
    #[error("unbalanced delimiter {found} at {span}")]
    UnbalancedDelimiter { found: String, span: SourceSpan },
    #[error("empty constructor at {span}")]
    EmptyConstructor { span: SourceSpan },
    #[error("constructor head must be a symbol, found {found} at {span}")]
    BadHead { found: String, span: SourceSpan },
    #[error("unexpected input after the root expression at {span}")]
    TrailingInput { span: SourceSpan },
    #[error("no expression in input")]
    EmptyInput,
}

impl ParseError {
    pub fn span(&self) -> Option<SourceSpan> {
        match self {
            ParseError::UnterminatedString { span }
            | ParseError::IllegalCharacter { span, .. }
            | ParseError::UnbalancedDelimiter { span, .. }
            | ParseError::EmptyConstructor { span }
            | ParseError::BadHead { span, .. }
            | ParseError::TrailingInput { span } => Some(*span),
            ParseError::EmptyInput => None,
        }
    }

    pub fn line(&self) -> Option<usize> {
        self.span().map(|s| s.line)
    }
}
