//! Concrete syntax for clocked lambda terms.
//!
//! ```text
//! term   := lam | app
//! lam    := "\" ident+ "." term          multi-binder sugar
//! app    := atom+                        left-associative
//! atom   := ident | "(" term ")" | tau
//! tau    := "#" atom | "#^" nat atom | "<" pos ">" atom
//! pos    := ("l" | "L" | "R" | "t")*     "l" = λ, "t" = τ, empty = ε
//! ident  := [a-zA-Z][a-zA-Z0-9_]*
//! ```
//!
//! `--` starts a comment running to end of line.

use std::fmt;

use thiserror::Error;

use crate::term::{app, tau_n, Annotation, PosLetter, Position, Term};

#[derive(Error, Debug, PartialEq, Eq)]
#[error("parse error at {line}:{col}: {message}")]
pub struct ParseError {
    pub message: String,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Backslash,
    Dot,
    LParen,
    RParen,
    Ident(String),
    /// `#` or `#^n`: n nested plain taus.
    Taus(usize),
    /// `<pos>`: one atomic tau.
    AtomicTau(Position),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Backslash => write!(f, "'\\'"),
            Tok::Dot => write!(f, "'.'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::Taus(n) => write!(f, "'#^{n}'"),
            Tok::AtomicTau(p) => write!(f, "'<{p}>'"),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    i: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer { src: src.as_bytes(), i: 0, line: 1, col: 1 }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError { message: message.into(), line: self.line, col: self.col }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.i).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.i += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b'-') if self.src.get(self.i + 1) == Some(&b'-') => {
                    while let Some(c) = self.peek() {
                        if c == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else { break };
            let tok = match c {
                b'\\' => {
                    self.bump();
                    Tok::Backslash
                }
                b'.' => {
                    self.bump();
                    Tok::Dot
                }
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b'#' => {
                    self.bump();
                    if self.peek() == Some(b'^') {
                        self.bump();
                        let mut digits = String::new();
                        while let Some(d) = self.peek() {
                            if d.is_ascii_digit() {
                                digits.push(d as char);
                                self.bump();
                            } else {
                                break;
                            }
                        }
                        if digits.is_empty() {
                            return Err(self.err("expected a number after '#^'"));
                        }
                        let n: usize = digits
                            .parse()
                            .map_err(|_| self.err(format!("tau count '{digits}' out of range")))?;
                        Tok::Taus(n)
                    } else {
                        Tok::Taus(1)
                    }
                }
                b'<' => {
                    self.bump();
                    let mut letters = Vec::new();
                    loop {
                        match self.peek() {
                            Some(b'>') => {
                                self.bump();
                                break;
                            }
                            Some(c) => match PosLetter::from_char(c as char) {
                                Some(l) => {
                                    letters.push(l);
                                    self.bump();
                                }
                                None => {
                                    return Err(self.err(format!(
                                        "invalid position letter '{}' (expected l, L, R or t)",
                                        c as char
                                    )))
                                }
                            },
                            None => return Err(self.err("unterminated position, expected '>'")),
                        }
                    }
                    Tok::AtomicTau(Position(letters))
                }
                c if c.is_ascii_alphabetic() => {
                    let mut name = String::new();
                    while let Some(c) = self.peek() {
                        if c.is_ascii_alphanumeric() || c == b'_' {
                            name.push(c as char);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Ident(name)
                }
                other => {
                    return Err(self.err(format!("unexpected character '{}'", other as char)))
                }
            };
            out.push((tok, line, col));
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    i: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(t, _, _)| t)
    }

    fn pos(&self) -> (usize, usize) {
        self.toks.get(self.i).map(|&(_, l, c)| (l, c)).unwrap_or(self.end)
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.pos();
        ParseError { message: message.into(), line, col }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t == want => {
                self.bump();
                Ok(())
            }
            Some(t) => Err(self.err(format!("expected {want}, found {t}"))),
            None => Err(self.err(format!("expected {want}, found end of input"))),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if self.peek() == Some(&Tok::Backslash) {
            self.bump();
            let mut binders = Vec::new();
            while let Some(Tok::Ident(_)) = self.peek() {
                if let Some(Tok::Ident(name)) = self.bump() {
                    binders.push(name);
                }
            }
            if binders.is_empty() {
                return Err(self.err("expected at least one binder after '\\'"));
            }
            self.expect(&Tok::Dot)?;
            let body = self.term()?;
            return Ok(binders
                .into_iter()
                .rev()
                .fold(body, |b, x| Term::Lam(x, Box::new(b))));
        }
        self.app()
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let mut t = self
            .atom()?
            .ok_or_else(|| self.err("expected a term"))?;
        while let Some(next) = self.atom()? {
            t = app(t, next);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Option<Term>, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                if let Some(Tok::Ident(name)) = self.bump() {
                    Ok(Some(Term::Var(name)))
                } else {
                    unreachable!()
                }
            }
            Some(Tok::LParen) => {
                self.bump();
                let t = self.term()?;
                self.expect(&Tok::RParen)?;
                Ok(Some(t))
            }
            Some(Tok::Taus(_)) => {
                let Some(Tok::Taus(n)) = self.bump() else { unreachable!() };
                let body = self
                    .atom()?
                    .ok_or_else(|| self.err("expected a term after '#'"))?;
                Ok(Some(tau_n(n, body)))
            }
            Some(Tok::AtomicTau(_)) => {
                let Some(Tok::AtomicTau(p)) = self.bump() else { unreachable!() };
                let body = self
                    .atom()?
                    .ok_or_else(|| self.err("expected a term after '<pos>'"))?;
                Ok(Some(Term::Tau(Annotation::Atomic(p), Box::new(body))))
            }
            _ => Ok(None),
        }
    }
}

/// Parse a term from concrete syntax.
pub fn parse(src: &str) -> Result<Term, ParseError> {
    let lexer = Lexer::new(src);
    let end_line = src.lines().count().max(1);
    let end_col = src.lines().last().map(|l| l.len() + 1).unwrap_or(1);
    let toks = lexer.tokens()?;
    let mut p = Parser { toks, i: 0, end: (end_line, end_col) };
    let t = p.term()?;
    if p.peek().is_some() {
        return Err(p.err(format!(
            "unexpected {} after the end of the term",
            p.peek().unwrap()
        )));
    }
    Ok(t)
}

/// Parse and additionally require the term to be closed.
pub fn parse_closed(src: &str) -> Result<Term, ParseError> {
    let t = parse(src)?;
    let mut fv: Vec<String> = t.free_vars().into_iter().collect();
    if !fv.is_empty() {
        fv.sort();
        return Err(ParseError {
            message: format!("unbound variables: {}", fv.join(", ")),
            line: 1,
            col: 1,
        });
    }
    Ok(t)
}
