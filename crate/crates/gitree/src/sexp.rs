//! A minimal s-expression reader shared by the language frontends.
//!
//! Supports symbols, natural-number literals, parenthesised lists and
//! `;` line comments.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Sym(String),
    Nat(u64),
    List(Vec<Sexp>),
}

impl Sexp {
    pub fn as_sym(&self) -> Option<&str> {
        match self {
            Sexp::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(items) => Some(items),
            _ => None,
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Sym(s) => write!(f, "{s}"),
            Sexp::Nat(n) => write!(f, "{n}"),
            Sexp::List(items) => {
                write!(f, "(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> ParseError {
        ParseError {
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error: {}", self.message)
    }
}

impl std::error::Error for ParseError {}

fn tokenize(src: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    let mut chars = src.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            ';' => {
                for d in chars.by_ref() {
                    if d == '\n' {
                        break;
                    }
                }
            }
            '(' | ')' => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
                tokens.push(c.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    tokens
}

fn read(tokens: &[String], pos: &mut usize) -> Result<Sexp, ParseError> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| ParseError::new("unexpected end of input"))?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => return Err(ParseError::new("missing closing paren")),
                    Some(t) if t == ")" => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(read(tokens, pos)?),
                }
            }
        }
        ")" => Err(ParseError::new("unexpected closing paren")),
        t => {
            if t.chars().all(|c| c.is_ascii_digit()) {
                t.parse::<u64>()
                    .map(Sexp::Nat)
                    .map_err(|_| ParseError::new(format!("numeral out of range: {t}")))
            } else {
                Ok(Sexp::Sym(t.to_string()))
            }
        }
    }
}

/// Parses exactly one toplevel form.
pub fn parse(src: &str) -> Result<Sexp, ParseError> {
    let tokens = tokenize(src);
    let mut pos = 0;
    let sexp = read(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(ParseError::new(format!(
            "trailing input after form: {}",
            tokens[pos]
        )));
    }
    Ok(sexp)
}
