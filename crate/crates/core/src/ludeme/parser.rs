use std::fmt::Write as _;

use super::lexer::{tokenize, Token, TokenKind};
use super::node::{LudemeNode, NodeKind};
use super::{ParseError, SourceSpan};

/// Parses a token list into exactly one root expression.
pub fn parse(tokens: &[Token]) -> Result<LudemeNode, ParseError> {
    let mut parser = Parser { tokens, pos: 0 };
    let root = parser.expression()?.ok_or(ParseError::EmptyInput)?;
    if let Some(extra) = parser.tokens.get(parser.pos) {
        return Err(match extra.kind {
            TokenKind::RParen | TokenKind::RBrace => ParseError::UnbalancedDelimiter {
                found: extra.text.clone(),
                span: extra.span,
            },
            _ => ParseError::TrailingInput { span: extra.span },
        });
    }
    Ok(root)
}

/// Tokenizes and parses in one step.
pub fn parse_source(source: &str) -> Result<LudemeNode, ParseError> {
    parse(&tokenize(source)?)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl Parser<'_> {
    /// `Ok(None)` at end of input.
    fn expression(&mut self) -> Result<Option<LudemeNode>, ParseError> {
        let Some(tok) = self.tokens.get(self.pos) else {
            return Ok(None);
        };
        self.pos += 1;
        let leaf = |kind| Ok(Some(LudemeNode::new(kind, tok.span)));
        match tok.kind {
            TokenKind::Symbol => leaf(NodeKind::Symbol(tok.text.clone())),
            TokenKind::StringLit => leaf(NodeKind::String(tok.text.clone())),
            TokenKind::NumberLit => {
                let value = tok.text.parse::<f64>().expect("lexer only emits decimal numbers");
                leaf(NodeKind::Number(value))
            }
            TokenKind::RParen | TokenKind::RBrace => Err(ParseError::UnbalancedDelimiter {
                found: tok.text.clone(),
                span: tok.span,
            }),
            TokenKind::LParen => {
                let (children, close) = self.sequence(tok, TokenKind::RParen)?;
                let span = tok.span.join(close);
                let mut children = children.into_iter();
                let head = match children.next() {
                    None => return Err(ParseError::EmptyConstructor { span }),
                    Some(LudemeNode { kind: NodeKind::Symbol(s), .. }) => s,
                    Some(other) => {
                        return Err(ParseError::BadHead {
                            found: describe(&other),
                            span: other.span,
                        })
                    }
                };
                Ok(Some(LudemeNode::new(
                    NodeKind::Constructor { head, children: children.collect() },
                    span,
                )))
            }
            TokenKind::LBrace => {
                let (children, close) = self.sequence(tok, TokenKind::RBrace)?;
                Ok(Some(LudemeNode::new(NodeKind::Set(children), tok.span.join(close))))
            }
        }
    }

    /// Reads expressions until `closer`, returning them and the closer's span.
    fn sequence(
        &mut self,
        open: &Token,
        closer: TokenKind,
    ) -> Result<(Vec<LudemeNode>, SourceSpan), ParseError> {
        let mut items = Vec::new();
        loop {
            match self.tokens.get(self.pos) {
                None => {
                    return Err(ParseError::UnbalancedDelimiter {
                        found: open.text.clone(),
                        span: open.span,
                    })
                }
                Some(t) if t.kind == closer => {
                    self.pos += 1;
                    return Ok((items, t.span));
                }
                Some(t) if matches!(t.kind, TokenKind::RParen | TokenKind::RBrace) => {
                    return Err(ParseError::UnbalancedDelimiter {
                        found: t.text.clone(),
                        span: t.span,
                    })
                }
                Some(_) => items.push(self.expression()?.expect("token available")),
            }
        }
    }
}

fn describe(node: &LudemeNode) -> String {
    match &node.kind {
        NodeKind::Constructor { .. } => "constructor".into(),
        NodeKind::Set(_) => "set".into(),
        NodeKind::Symbol(s) => format!("symbol {s}"),
        NodeKind::String(s) => format!("string {s:?}"),
        NodeKind::Number(n) => format!("number {n}"),
    }
}

const LINE_WIDTH: usize = 80;

/// Renders a tree as source text. Short expressions stay on one line;
/// longer ones put each argument on its own indented line.
pub fn print(node: &LudemeNode) -> String {
    let mut out = String::new();
    print_into(node, 0, &mut out);
    out
}

fn compact(node: &LudemeNode, out: &mut String) {
    match &node.kind {
        NodeKind::Symbol(s) => out.push_str(s),
        NodeKind::String(s) => {
            let _ = write!(out, "\"{s}\"");
        }
        NodeKind::Number(n) => {
            let _ = write!(out, "{n}");
        }
        NodeKind::Constructor { head, children } => {
            out.push('(');
            out.push_str(head);
            for c in children {
                out.push(' ');
                compact(c, out);
            }
            out.push(')');
        }
        NodeKind::Set(children) => {
            out.push('{');
            for (i, c) in children.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                compact(c, out);
            }
            out.push('}');
        }
    }
}

fn print_into(node: &LudemeNode, indent: usize, out: &mut String) {
    let mut flat = String::new();
    compact(node, &mut flat);
    let (open, close, lead, children) = match &node.kind {
        NodeKind::Constructor { head, children } => ('(', ')', Some(head.as_str()), children),
        NodeKind::Set(children) => ('{', '}', None, children),
        _ => {
            out.push_str(&flat);
            return;
        }
    };
    if indent + flat.len() <= LINE_WIDTH || children.is_empty() {
        out.push_str(&flat);
        return;
    }
    out.push(open);
    if let Some(head) = lead {
        out.push_str(head);
    }
    for child in children {
        out.push('\n');
        out.push_str(&" ".repeat(indent + 4));
        print_into(child, indent + 4, out);
    }
    out.push('\n');
    out.push_str(&" ".repeat(indent));
    out.push(close);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_board() {
        let node = parse_source("(hex 8)").unwrap();
        assert_eq!(node.head(), Some("hex"));
        assert_eq!(node.children().len(), 1);
        assert_eq!(node.children()[0].as_number(), Some(8.0));
    }

    #[test]
    fn empty_set() {
        let node = parse_source("{}").unwrap();
        assert!(node.is_set());
        assert!(node.children().is_empty());
    }

    #[test]
    fn unknown_heads_are_accepted() {
        let node = parse_source("(frobnicate Widely {1 \"two\" (three)})").unwrap();
        assert_eq!(node.head(), Some("frobnicate"));
        assert_eq!(node.children()[1].children().len(), 3);
    }

    #[test]
    fn delimiter_errors() {
        assert!(matches!(
            parse_source("(a (b)"),
            Err(ParseError::UnbalancedDelimiter { span, .. }) if span.start == 0
        ));
        assert!(matches!(
            parse_source("(a))"),
            Err(ParseError::UnbalancedDelimiter { span, .. }) if span.start == 3
        ));
        assert!(matches!(
            parse_source("(a }"),
            Err(ParseError::UnbalancedDelimiter { found, .. }) if found == "}"
        ));
        assert!(matches!(parse_source("()"), Err(ParseError::EmptyConstructor { .. })));
        assert!(matches!(parse_source("(a) (b)"), Err(ParseError::TrailingInput { .. })));
        assert!(matches!(parse_source(""), Err(ParseError::EmptyInput)));
        assert!(matches!(parse_source("(\"x\" 1)"), Err(ParseError::BadHead { .. })));
    }

    #[test]
    fn print_literals() {
        assert_eq!(print(&parse_source("2").unwrap()), "2");
        assert_eq!(print(&parse_source("2.5").unwrap()), "2.5");
        assert_eq!(print(&parse_source(r#"{"A4" "D1"}"#).unwrap()), r#"{"A4" "D1"}"#);
    }

    #[test]
    fn long_expressions_wrap_and_round_trip() {
        let src = "(rules (start {(place \"Queen1\" {\"A4\" \"D1\" \"G1\" \"J4\"}) (place \"Queen2\" {\"A7\" \"D10\" \"G10\" \"J7\"})}) (play (move Add (to (sites Empty)))))";
        let tree = parse_source(src).unwrap();
        let printed = print(&tree);
        assert!(printed.contains('\n'));
        assert_eq!(parse_source(&printed).unwrap(), tree);
    }

    #[test]
    fn spans_cover_nodes() {
        let src = "(a (b 1) {c})";
        let tree = parse_source(src).unwrap();
        assert_eq!(tree.span.slice(src), src);
        assert_eq!(tree.children()[0].span.slice(src), "(b 1)");
        assert_eq!(tree.children()[1].span.slice(src), "{c}");
    }
}
