use super::ast::RegexNode;

/// Render a canonical semantic regex string: single space between sequence
/// terms, no space around `|`, parentheses only where precedence demands.
///
/// `parse(render(n))` is structurally equal to `n` for canonical `n`.
pub fn render(node: &RegexNode) -> String {
    let mut out = String::new();
    write_node(node, &mut out);
    out
}

fn write_node(node: &RegexNode, out: &mut String) {
    match node {
        RegexNode::Symbol(p) => {
            out.push_str("[:symbol ");
            out.push_str(p);
            out.push_str(":]");
        }
        RegexNode::Lexeme(p) => {
            out.push_str("[:lexeme ");
            out.push_str(p);
            out.push_str(":]");
        }
        RegexNode::Field(p) => {
            out.push_str("[:field ");
            out.push_str(p);
            out.push_str(":]");
        }
        RegexNode::Context { label, child } => {
            out.push_str("@{:context ");
            out.push_str(label);
            out.push_str(":}(");
            write_node(child, out);
            out.push(')');
        }
        RegexNode::Sequence(children) => {
            for (i, child) in children.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                // Alternation binds looser than sequence.
                write_child(child, matches!(child, RegexNode::Alternation(_)), out);
            }
        }
        RegexNode::Alternation(children) => {
            for (i, child) in children.iter().enumerate() {
                if i > 0 {
                    out.push('|');
                }
                write_node(child, out);
            }
        }
        RegexNode::Optional(child) => {
            let needs_parens =
                matches!(**child, RegexNode::Sequence(_) | RegexNode::Alternation(_));
            write_child(child, needs_parens, out);
            out.push('?');
        }
    }
}

fn write_child(child: &RegexNode, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        write_node(child, out);
        out.push(')');
    } else {
        write_node(child, out);
    }
}
