use super::SourceSpan;

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    Constructor { head: String, children: Vec<LudemeNode> },
    Set(Vec<LudemeNode>),
    Symbol(String),
    String(String),
    Number(f64),
}

/// One node of a parsed ludeme tree.
///
/// Equality compares structure only; spans are ignored so that trees parsed
/// from differently formatted sources compare equal.
#[derive(Debug, Clone)]
pub struct LudemeNode {
    pub kind: NodeKind,
    pub span: SourceSpan,
}

impl PartialEq for LudemeNode {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl LudemeNode {
    pub fn new(kind: NodeKind, span: SourceSpan) -> Self {
        Self { kind, span }
    }

    pub fn constructor(head: &str, children: Vec<LudemeNode>) -> Self {
        Self::new(
            NodeKind::Constructor { head: head.to_string(), children },
            SourceSpan::default(),
        )
    }

    pub fn head(&self) -> Option<&str> {
        match &self.kind {
            NodeKind::Constructor { head, .. } => Some(head),
            _ => None,
        }
    }

    pub fn is(&self, head: &str) -> bool {
        self.head() == Some(head)
    }

    /// Children of a constructor or set; empty for literals.
    pub fn children(&self) -> &[LudemeNode] {
        match &self.kind {
            NodeKind::Constructor { children, .. } | NodeKind::Set(children) => children,
            _ => &[],
        }
    }

    pub fn children_mut(&mut self) -> Option<&mut Vec<LudemeNode>> {
        match &mut self.kind {
            NodeKind::Constructor { children, .. } | NodeKind::Set(children) => Some(children),
            _ => None,
        }
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match &self.kind {
            NodeKind::Symbol(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_string(&self) -> Option<&str> {
        match &self.kind {
            NodeKind::String(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_number(&self) -> Option<f64> {
        match self.kind {
            NodeKind::Number(n) => Some(n),
            _ => None,
        }
    }

    /// Number that is a non-negative integer.
    pub fn as_count(&self) -> Option<usize> {
        self.as_number()
            .filter(|n| n.fract() == 0.0 && *n >= 0.0 && *n <= u32::MAX as f64)
            .map(|n| n as usize)
    }

    pub fn is_set(&self) -> bool {
        matches!(self.kind, NodeKind::Set(_))
    }

    /// First symbol argument of a constructor, e.g. `Slide` in `(move Slide ...)`.
    pub fn first_symbol(&self) -> Option<&str> {
        self.children().first().and_then(LudemeNode::as_symbol)
    }

    /// `head` plus the leading symbol argument when there is one, as used to
    /// name ludemes such as `move Slide` or `is Checkmate`.
    pub fn qualified_name(&self) -> Option<String> {
        let head = self.head()?;
        Some(match self.first_symbol() {
            Some(sym) => format!("{head} {sym}"),
            None => head.to_string(),
        })
    }

    /// Direct constructor children with the given head.
    pub fn find_children<'a>(&'a self, head: &'a str) -> impl Iterator<Item = &'a LudemeNode> + 'a {
        self.children().iter().filter(move |c| c.is(head))
    }

    pub fn find_child(&self, head: &str) -> Option<&LudemeNode> {
        self.children().iter().find(|c| c.is(head))
    }

    /// Pre-order traversal including `self`.
    pub fn descendants(&self) -> Descendants<'_> {
        Descendants { stack: vec![self] }
    }

    /// True if any node in this subtree (including `self`) satisfies `pred`.
    pub fn contains(&self, pred: impl Fn(&LudemeNode) -> bool) -> bool {
        self.descendants().any(pred)
    }
}

pub struct Descendants<'a> {
    stack: Vec<&'a LudemeNode>,
}

impl<'a> Iterator for Descendants<'a> {
    type Item = &'a LudemeNode;

    fn next(&mut self) -> Option<Self::Item> {
        let node = self.stack.pop()?;
        self.stack.extend(node.children().iter().rev());
        Some(node)
    }
}
