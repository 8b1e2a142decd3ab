use thiserror::Error;

use super::ast::RegexNode;

/// A parse problem located at a half-open character-offset span of the
/// input. Lenient-mode recoveries are reported as diagnostics; strict-mode
/// failures carry one as the error payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub message: String,
    pub char_span: (usize, usize),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("parse error at {}..{}: {}", .0.char_span.0, .0.char_span.1, .0.message)]
pub struct ParseError(pub ParseDiagnostic);

/// Parse a single semantic regex expression into a canonical AST.
pub fn parse(input: &str) -> Result<RegexNode, ParseError> {
    let (node, _) = Parser::new(input, false).run()?;
    Ok(node)
}

/// Like [`parse`], but auto-closes a primitive at a bare `]` (and a context
/// label at a bare `}`), recording a diagnostic for each recovery.
pub fn parse_lenient(input: &str) -> Result<(RegexNode, Vec<ParseDiagnostic>), ParseError> {
    Parser::new(input, true).run()
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    lenient: bool,
    diagnostics: Vec<ParseDiagnostic>,
}

impl Parser {
    fn new(input: &str, lenient: bool) -> Self {
        Parser { chars: input.chars().collect(), pos: 0, lenient, diagnostics: Vec::new() }
    }

    fn run(mut self) -> Result<(RegexNode, Vec<ParseDiagnostic>), ParseError> {
        self.skip_ws();
        if self.at_end() {
            return Err(self.error("empty input", 0, 0));
        }
        let node = self.alternation()?;
        self.skip_ws();
        if !self.at_end() {
            return Err(self.error("unexpected trailing input", self.pos, self.chars.len()));
        }
        Ok((node.canonicalize(), self.diagnostics))
    }

    fn error(&self, message: &str, start: usize, end: usize) -> ParseError {
        ParseError(ParseDiagnostic { message: message.to_string(), char_span: (start, end) })
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<char> {
        self.chars.get(self.pos + 1).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn alternation(&mut self) -> Result<RegexNode, ParseError> {
        let mut branches = vec![self.branch()?];
        loop {
            self.skip_ws();
            if self.peek() == Some('|') {
                self.pos += 1;
                branches.push(self.branch()?);
            } else {
                break;
            }
        }
        Ok(RegexNode::alternation(branches))
    }

    /// One alternation branch: a non-empty sequence of postfix terms.
    fn branch(&mut self) -> Result<RegexNode, ParseError> {
        let mut terms = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(')') | Some('|') => break,
                Some('?') if terms.is_empty() => {
                    return Err(self.error("dangling `?`", self.pos, self.pos + 1));
                }
                _ => terms.push(self.postfix()?),
            }
        }
        if terms.is_empty() {
            return Err(self.error("empty alternation branch", self.pos, self.pos));
        }
        Ok(RegexNode::sequence(terms))
    }

    fn postfix(&mut self) -> Result<RegexNode, ParseError> {
        let mut node = self.atom()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('?') {
                self.pos += 1;
                node = RegexNode::optional(node);
            } else {
                break;
            }
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<RegexNode, ParseError> {
        match self.peek() {
            Some('(') => {
                let open = self.pos;
                self.pos += 1;
                self.skip_ws();
                if self.peek() == Some(')') {
                    return Err(self.error("empty group", open, self.pos + 1));
                }
                let inner = self.alternation()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("unclosed `(`", open, self.chars.len()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('[') if self.peek2() == Some(':') => self.primitive(),
            Some('@') => self.context(),
            Some(c) => {
                Err(self.error(&format!("unexpected character `{c}`"), self.pos, self.pos + 1))
            }
            None => Err(self.error("unexpected end of input", self.pos, self.pos)),
        }
    }

    fn primitive(&mut self) -> Result<RegexNode, ParseError> {
        let open = self.pos;
        self.pos += 2; // "[:"
        self.skip_ws();
        let kind_start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        let kind: String = self.chars[kind_start..self.pos].iter().collect();
        let make = match kind.as_str() {
            "symbol" => RegexNode::Symbol as fn(String) -> RegexNode,
            "lexeme" => RegexNode::Lexeme,
            "field" => RegexNode::Field,
            _ => {
                return Err(self.error(
                    &format!("unknown primitive kind `{kind}`"),
                    kind_start,
                    self.pos,
                ));
            }
        };
        let payload_start = self.pos;
        let (payload_end, closer_len) = self.find_closer(']', open, "unclosed `[:`")?;
        let payload: String = self.chars[payload_start..payload_end].iter().collect();
        let payload = payload.trim().to_string();
        if payload.is_empty() {
            return Err(self.error("empty payload", payload_start, payload_end));
        }
        self.pos = payload_end + closer_len;
        Ok(make(payload))
    }

    fn context(&mut self) -> Result<RegexNode, ParseError> {
        let open = self.pos;
        if self.chars[self.pos..].iter().collect::<String>().starts_with("@{:") {
            self.pos += 3;
        } else {
            return Err(self.error("malformed context (expected `@{:`)", open, self.pos + 1));
        }
        self.skip_ws();
        let kw_start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        let keyword: String = self.chars[kw_start..self.pos].iter().collect();
        if keyword != "context" {
            return Err(self.error(
                &format!("expected `context` after `@{{:`, found `{keyword}`"),
                kw_start,
                self.pos,
            ));
        }
        let label_start = self.pos;
        let (label_end, closer_len) = self.find_closer('}', open, "unclosed `@{:`")?;
        let label: String = self.chars[label_start..label_end].iter().collect();
        let label = label.trim().to_string();
        if label.is_empty() {
            return Err(self.error("empty context label", label_start, label_end));
        }
        // Parentheses inside labels would be ambiguous with the gated group.
        if label.contains(')') {
            return Err(self.error("context label may not contain `)`", label_start, label_end));
        }
        self.pos = label_end + closer_len;
        self.skip_ws();
        if self.peek() != Some('(') {
            let end = (self.pos + 1).min(self.chars.len());
            return Err(self.error("expected `(` after context label", self.pos.min(end), end));
        }
        let paren = self.pos;
        self.pos += 1;
        let child = self.alternation()?;
        self.skip_ws();
        if self.peek() != Some(')') {
            return Err(self.error("unclosed `(`", paren, self.chars.len()));
        }
        self.pos += 1;
        Ok(RegexNode::context(label, child))
    }

    /// Scan forward for the closing sentinel `:` + `close`. Returns the
    /// char offset where the payload ends and the closer length. In lenient
    /// mode a bare `close` also terminates the payload, with a diagnostic.
    fn find_closer(
        &mut self,
        close: char,
        open: usize,
        unclosed_msg: &str,
    ) -> Result<(usize, usize), ParseError> {
        let mut i = self.pos;
        while i < self.chars.len() {
            if self.chars[i] == close {
                if i > self.pos && self.chars[i - 1] == ':' {
                    return Ok((i - 1, 2));
                }
                if self.lenient {
                    self.diagnostics.push(ParseDiagnostic {
                        message: format!("auto-closed at bare `{close}` (missing `:{close}`)"),
                        char_span: (i, i + 1),
                    });
                    return Ok((i, 1));
                }
            }
            i += 1;
        }
        Err(self.error(unclosed_msg, open, self.chars.len()))
    }
}
