//! Tokenizer for the parenthesized ludeme language.

use std::fmt;

use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    LParen,
    RParen,
    LBrace,
    RBrace,
    Symbol,
    StringLit,
    NumberLit,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::LParen => "'('",
            TokenKind::RParen => "')'",
            TokenKind::LBrace => "'{'",
            TokenKind::RBrace => "'}'",
            TokenKind::Symbol => "symbol",
            TokenKind::StringLit => "string",
            TokenKind::NumberLit => "number",
        };
        f.write_str(s)
    }
}

/// A lexeme with its location. `text` of a string literal is stored without
/// the surrounding quotes; the span still covers them.
#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: SourceSpan,
}

fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '+' | '*' | '?' | '!' | '<' | '>' | '=' | ':' | '.' | '#' | '\'')
}

fn is_number(word: &str) -> bool {
    let digits = word.strip_prefix(['-', '+']).unwrap_or(word);
    let (int, frac) = match digits.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (digits, None),
    };
    !int.is_empty()
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.is_none_or(|f| !f.is_empty() && f.bytes().all(|b| b.is_ascii_digit()))
}

/// Splits `source` into tokens. Whitespace and `//` line comments are skipped.
pub fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = source.char_indices().peekable();
    let mut line = 1;

    while let Some(&(start, c)) = chars.peek() {
        let single = |kind| Token {
            kind,
            text: c.to_string(),
            span: SourceSpan::new(start, start + 1, line),
        };
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                tokens.push(single(TokenKind::LParen));
                chars.next();
            }
            ')' => {
                tokens.push(single(TokenKind::RParen));
                chars.next();
            }
            '{' => {
                tokens.push(single(TokenKind::LBrace));
                chars.next();
            }
            '}' => {
                tokens.push(single(TokenKind::RBrace));
                chars.next();
            }
            '/' => {
                chars.next();
                match chars.peek() {
                    Some(&(_, '/')) => {
                        while chars.next_if(|&(_, c)| c != '\n').is_some() {}
                    }
                    _ => {
                        return Err(ParseError::IllegalCharacter {
                            ch: '/',
                            span: SourceSpan::new(start, start + 1, line),
                        })
                    }
                }
            }
            '"' => {
                chars.next();
                let body_start = start + 1;
                let mut end = None;
                for (i, c) in chars.by_ref() {
                    match c {
                        '"' => {
                            end = Some(i);
                            break;
                        }
                        '\n' => break,
                        _ => {}
                    }
                }
                let Some(end) = end else {
                    return Err(ParseError::UnterminatedString {
                        span: SourceSpan::new(start, start + 1, line),
                    });
                };
                tokens.push(Token {
                    kind: TokenKind::StringLit,
                    text: source[body_start..end].to_string(),
                    span: SourceSpan::new(start, end + 1, line),
                });
            }
            c if is_symbol_char(c) => {
                let mut end = start;
                while let Some((i, c)) = chars.next_if(|&(_, c)| is_symbol_char(c)) {
                    end = i + c.len_utf8();
                }
                let word = &source[start..end];
                let kind = if is_number(word) {
                    TokenKind::NumberLit
                } else {
                    TokenKind::Symbol
                };
                tokens.push(Token {
                    kind,
                    text: word.to_string(),
                    span: SourceSpan::new(start, end, line),
                });
            }
            other => {
                return Err(ParseError::IllegalCharacter {
                    ch: other,
                    span: SourceSpan::new(start, start + other.len_utf8(), line),
                })
            }
        }
    }
    Ok(tokens)
}
