//! The semantic regex language: AST, parser, and canonical printer.
//!
//! The concrete syntax has three primitives and three composition forms:
//!
//! ```text
//! [:symbol X:]            exact string X (possibly a subword)
//! [:lexeme X:]            X and its inflectional variants
//! [:field X:]             phrases in the semantic category X
//! @{:context C:}(S)       S, gated on the document-level topic C
//! S1 S2                   sequence (juxtaposition)
//! S1|S2                   alternation
//! S?                      zero or one
//! ```
//!
//! Precedence, loosest to tightest: alternation, sequence, postfix `?`.
//! Parentheses group. Whitespace between terms is insignificant.

mod ast;
mod parse;
mod render;

pub use ast::{PrimitiveKind, RegexNode, StructureKind};
pub use parse::{parse, parse_lenient, ParseDiagnostic, ParseError};
pub use render::render;
