//! Parser for the Turtle subset used by contact-tracing data.
//!
//! Supported: `@prefix`/`PREFIX` directives, prefixed names, absolute IRIs,
//! the `a` keyword, predicate lists (`;`), object lists (`,`), string literals
//! (short and long forms), typed literals, bare numbers and booleans, and `#`
//! comments. N-Triples documents are a subset and parse unchanged.
//!
//! Not supported: blank nodes, collections, language tags and `@base`.

use std::collections::BTreeMap;

use thiserror::Error;

use super::term::{is_decimal_lexical, is_integer_lexical};
use super::{ns, Datatype, Graph, Iri, Literal, Term, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown prefix `{prefix}:` at line {line}, column {column}")]
    UnknownPrefix { prefix: String, line: usize, column: usize },
}

pub fn parse_turtle(text: &str) -> Result<Graph, ParseError> {
    let mut graph = Graph::new();
    parse_into(text, &mut graph)?;
    Ok(graph)
}

/// N-Triples is parsed by the same grammar.
pub fn parse_ntriples(text: &str) -> Result<Graph, ParseError> {
    parse_turtle(text)
}

/// Parses `text` and inserts its triples into `graph`. On error `graph` may hold a prefix of
/// the document; callers needing atomicity parse into a fresh graph first.
pub fn parse_into(text: &str, graph: &mut Graph) -> Result<(), ParseError> {
    let mut parser = Parser::new(text);
    parser.document(graph)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
    prefixes: BTreeMap<String, String>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        let prefixes =
            ns::BUILTIN_PREFIXES.iter().map(|(p, iri)| (p.to_string(), iri.to_string())).collect();
        Parser { src, pos: 0, line: 1, column: 1, prefixes }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { line: self.line, column: self.column, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => self.error(format!("expected `{want}`, found `{c}`")),
            None => self.error(format!("expected `{want}`, found end of input")),
        }
    }

    fn document(&mut self, graph: &mut Graph) -> Result<(), ParseError> {
        loop {
            self.skip_ws();
            let Some(c) = self.peek() else { return Ok(()) };
            if c == '@' {
                self.at_directive()?;
            } else if self.keyword_ahead("PREFIX") {
                self.bump_n(6);
                self.prefix_body()?;
            } else if self.keyword_ahead("BASE") {
                return self.error("BASE directives are not supported");
            } else {
                self.triples(graph)?;
                self.expect('.')?;
            }
        }
    }

    fn bump_n(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    fn keyword_ahead(&self, kw: &str) -> bool {
        let rest = self.rest();
        rest.len() >= kw.len()
            && rest[..kw.len()].eq_ignore_ascii_case(kw)
            && rest[kw.len()..].starts_with(|c: char| c.is_whitespace())
    }

    fn at_directive(&mut self) -> Result<(), ParseError> {
        if self.rest().starts_with("@prefix") {
            self.bump_n(7);
            self.prefix_body()?;
            self.expect('.')
        } else if self.rest().starts_with("@base") {
            self.error("@base directives are not supported")
        } else {
            self.error("unknown directive")
        }
    }

    fn prefix_body(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        let prefix = self.name_chars();
        if self.peek() != Some(':') {
            return self.error("expected `:` after prefix name");
        }
        self.bump();
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.prefixes.insert(prefix, iri.as_str().to_string());
        Ok(())
    }

    fn triples(&mut self, graph: &mut Graph) -> Result<(), ParseError> {
        let subject = match self.term()? {
            Term::Iri(iri) => iri,
            Term::Literal(_) => return self.error("literal in subject position"),
        };
        loop {
            self.skip_ws();
            let predicate = self.verb()?;
            loop {
                self.skip_ws();
                let object = self.term()?;
                graph.insert(Triple::new(subject.clone(), predicate.clone(), object));
                self.skip_ws();
                if self.peek() == Some(',') {
                    self.bump();
                } else {
                    break;
                }
            }
            self.skip_ws();
            if self.peek() == Some(';') {
                // repeated and trailing semicolons are allowed
                while self.peek() == Some(';') {
                    self.bump();
                    self.skip_ws();
                }
                if matches!(self.peek(), Some('.') | None) {
                    return Ok(());
                }
            } else {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Iri, ParseError> {
        if self.peek() == Some('a') && self.peek_at(1).is_none_or(|c| c.is_whitespace() || c == '<') {
            self.bump();
            return Ok(ns::rdf_type());
        }
        match self.term()? {
            Term::Iri(iri) => Ok(iri),
            Term::Literal(_) => self.error("literal in predicate position"),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => self.error("unexpected end of input"),
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('"') | Some('\'') => self.literal(),
            Some('_') if self.peek_at(1) == Some(':') => self.error("blank nodes are not supported"),
            Some('[') | Some('(') => self.error("blank nodes and collections are not supported"),
            Some(c) if c.is_ascii_digit() || matches!(c, '+' | '-' | '.') => self.number(),
            Some(_) => {
                let (line, column) = (self.line, self.column);
                let prefix = self.name_chars();
                if self.peek() != Some(':') {
                    return match prefix.as_str() {
                        "true" | "false" => Ok(Term::Literal(
                            Literal::typed(prefix, Datatype::Other(xsd("boolean"))).expect("boolean"),
                        )),
                        "" => self.error(format!("unexpected character `{}`", self.peek().unwrap_or(' '))),
                        _ => self.error(format!("expected `:` after `{prefix}`")),
                    };
                }
                self.bump();
                let local = self.local_name();
                let Some(ns) = self.prefixes.get(&prefix) else {
                    return Err(ParseError::UnknownPrefix { prefix, line, column });
                };
                let iri = format!("{ns}{local}");
                Iri::new(iri).map(Term::Iri).or_else(|e| self.error(e.to_string()))
            }
        }
    }

    fn name_chars(&mut self) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-') || (c == '.' && !out.is_empty() && self.name_continues_after_dot()) {
                out.push(c);
                self.bump();
            } else {
                break;
            }
        }
        out
    }

    /// A `.` belongs to a name only if another name character follows it.
    /// A dot belongs to a name when a run of dots is followed by another name character.
    fn name_continues_after_dot(&self) -> bool {
        let mut i = 1;
        while self.peek_at(i) == Some('.') {
            i += 1;
        }
        self.peek_at(i).is_some_and(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | ':'))
    }

    fn local_name(&mut self) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | ':') || (c == '.' && self.name_continues_after_dot()) {
                out.push(c);
                self.bump();
            } else if c == '%' {
                out.push(c);
                self.bump();
            } else if c == '\\' {
                self.bump();
                if let Some(e) = self.bump() {
                    out.push(e);
                }
            } else {
                break;
            }
        }
        out
    }

    fn iri_ref(&mut self) -> Result<Iri, ParseError> {
        if self.peek() != Some('<') {
            return self.error("expected `<`");
        }
        self.bump();
        let mut value = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return self.error("unterminated IRI"),
                Some('>') => break,
                Some('\\') => value.push(self.unicode_escape()?),
                Some(c) => value.push(c),
            }
        }
        Iri::new(value).or_else(|e| self.error(e.to_string()))
    }

    fn unicode_escape(&mut self) -> Result<char, ParseError> {
        let width = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return self.error("invalid escape"),
        };
        let mut code = 0u32;
        for _ in 0..width {
            let Some(d) = self.bump().and_then(|c| c.to_digit(16)) else {
                return self.error("invalid unicode escape");
            };
            code = code * 16 + d;
        }
        char::from_u32(code).map_or_else(|| self.error("invalid code point"), Ok)
    }

    fn literal(&mut self) -> Result<Term, ParseError> {
        let quote = self.bump().expect("quote");
        let long = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if long {
            self.bump_n(2);
        }
        let mut value = String::new();
        loop {
            match self.bump() {
                None => return self.error("unterminated string"),
                Some('\n') if !long => return self.error("newline in string"),
                Some(c) if c == quote => {
                    if !long {
                        break;
                    }
                    if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
                        self.bump_n(2);
                        break;
                    }
                    value.push(c);
                }
                Some('\\') => match self.peek() {
                    Some('u') | Some('U') => value.push(self.unicode_escape()?),
                    Some(e) => {
                        self.bump();
                        value.push(match e {
                            'n' => '\n',
                            'r' => '\r',
                            't' => '\t',
                            'b' => '\u{8}',
                            'f' => '\u{c}',
                            '"' | '\'' | '\\' => e,
                            _ => return self.error(format!("invalid escape `\\{e}`")),
                        });
                    }
                    None => return self.error("unterminated string"),
                },
                Some(c) => value.push(c),
            }
        }
        if self.peek() == Some('@') {
            return self.error("language-tagged literals are not supported");
        }
        let datatype = if self.rest().starts_with("^^") {
            self.bump_n(2);
            match self.term()? {
                Term::Iri(iri) => Datatype::from_iri(&iri),
                Term::Literal(_) => return self.error("datatype must be an IRI"),
            }
        } else {
            Datatype::Plain
        };
        Literal::typed(value, datatype).map(Term::Literal).or_else(|e| self.error(e.to_string()))
    }

    fn number(&mut self) -> Result<Term, ParseError> {
        let mut text = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            text.push(c);
            self.bump();
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                text.push(c);
                self.bump();
            } else if c == '.' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) {
                text.push(c);
                self.bump();
            } else if matches!(c, 'e' | 'E') {
                text.push(c);
                self.bump();
                if let Some(s @ ('+' | '-')) = self.peek() {
                    text.push(s);
                    self.bump();
                }
            } else {
                break;
            }
        }
        let datatype = if is_integer_lexical(&text) {
            Datatype::Integer
        } else if is_decimal_lexical(&text) {
            Datatype::Decimal
        } else if text.parse::<f64>().is_ok() && text.contains(['e', 'E']) {
            Datatype::Other(xsd("double"))
        } else {
            return self.error(format!("invalid number `{text}`"));
        };
        Literal::typed(text, datatype).map(Term::Literal).or_else(|e| self.error(e.to_string()))
    }
}

fn xsd(local: &str) -> Iri {
    Iri::new(format!("{}{local}", ns::XSD)).expect("xsd iri")
}
