use serde::{Deserialize, Serialize};

/// The primitive kinds of the language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PrimitiveKind {
    Symbol,
    Lexeme,
    Field,
}

impl PrimitiveKind {
    pub fn keyword(self) -> &'static str {
        match self {
            PrimitiveKind::Symbol => "symbol",
            PrimitiveKind::Lexeme => "lexeme",
            PrimitiveKind::Field => "field",
        }
    }
}

/// Structural composition forms (everything that is not a primitive or a
/// context gate).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureKind {
    Sequence,
    Alternation,
    Optional,
}

/// A semantic regex AST node.
///
/// Canonical-form invariants (established by [`RegexNode::canonicalize`],
/// and by the parser):
///
/// - payloads and context labels are non-empty after trimming surrounding
///   whitespace;
/// - `Sequence` and `Alternation` have at least two children and never
///   directly nest a node of the same variant;
/// - `Optional` never directly wraps another `Optional`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegexNode {
    Symbol(String),
    Lexeme(String),
    Field(String),
    Context { label: String, child: Box<RegexNode> },
    Sequence(Vec<RegexNode>),
    Alternation(Vec<RegexNode>),
    Optional(Box<RegexNode>),
}

impl RegexNode {
    pub fn symbol(payload: impl Into<String>) -> Self {
        RegexNode::Symbol(payload.into())
    }

    pub fn lexeme(payload: impl Into<String>) -> Self {
        RegexNode::Lexeme(payload.into())
    }

    pub fn field(payload: impl Into<String>) -> Self {
        RegexNode::Field(payload.into())
    }

    pub fn context(label: impl Into<String>, child: RegexNode) -> Self {
        RegexNode::Context { label: label.into(), child: Box::new(child) }
    }

    pub fn sequence(children: Vec<RegexNode>) -> Self {
        RegexNode::Sequence(children).canonicalize()
    }

    pub fn alternation(children: Vec<RegexNode>) -> Self {
        RegexNode::Alternation(children).canonicalize()
    }

    pub fn optional(child: RegexNode) -> Self {
        RegexNode::Optional(Box::new(child)).canonicalize()
    }

    /// The primitive kind, if this node is a primitive.
    pub fn primitive_kind(&self) -> Option<PrimitiveKind> {
        match self {
            RegexNode::Symbol(_) => Some(PrimitiveKind::Symbol),
            RegexNode::Lexeme(_) => Some(PrimitiveKind::Lexeme),
            RegexNode::Field(_) => Some(PrimitiveKind::Field),
            _ => None,
        }
    }

    /// Rebuild the node in canonical form: trim payloads, flatten nested
    /// sequences and alternations, collapse single-child compositions, and
    /// merge stacked `?` quantifiers.
    pub fn canonicalize(self) -> Self {
        match self {
            RegexNode::Symbol(p) => RegexNode::Symbol(p.trim().to_string()),
            RegexNode::Lexeme(p) => RegexNode::Lexeme(p.trim().to_string()),
            RegexNode::Field(p) => RegexNode::Field(p.trim().to_string()),
            RegexNode::Context { label, child } => RegexNode::Context {
                label: label.trim().to_string(),
                child: Box::new(child.canonicalize()),
            },
            RegexNode::Sequence(children) => {
                let mut flat = Vec::new();
                for child in children {
                    match child.canonicalize() {
                        RegexNode::Sequence(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                if flat.len() == 1 {
                    flat.pop().unwrap()
                } else {
                    RegexNode::Sequence(flat)
                }
            }
            RegexNode::Alternation(children) => {
                let mut flat = Vec::new();
                for child in children {
                    match child.canonicalize() {
                        RegexNode::Alternation(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                if flat.len() == 1 {
                    flat.pop().unwrap()
                } else {
                    RegexNode::Alternation(flat)
                }
            }
            RegexNode::Optional(child) => match child.canonicalize() {
                RegexNode::Optional(inner) => RegexNode::Optional(inner),
                other => RegexNode::Optional(Box::new(other)),
            },
        }
    }

    /// Visit every node in the tree, parent before children.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a RegexNode)) {
        f(self);
        match self {
            RegexNode::Context { child, .. } | RegexNode::Optional(child) => child.visit(f),
            RegexNode::Sequence(children) | RegexNode::Alternation(children) => {
                for child in children {
                    child.visit(f);
                }
            }
            _ => {}
        }
    }

    /// Tree depth (a lone primitive has depth 1).
    pub fn depth(&self) -> usize {
        match self {
            RegexNode::Symbol(_) | RegexNode::Lexeme(_) | RegexNode::Field(_) => 1,
            RegexNode::Context { child, .. } | RegexNode::Optional(child) => 1 + child.depth(),
            RegexNode::Sequence(children) | RegexNode::Alternation(children) => {
                1 + children.iter().map(RegexNode::depth).max().unwrap_or(0)
            }
        }
    }
}
