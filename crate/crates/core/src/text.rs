//! Textual syntax for terms, literals, and clauses.
//!
//! Variables start uppercase, function and predicate symbols lowercase.
//! A clause is a `|`-separated disjunction of literals, negation is `~`,
//! and `false` denotes the empty clause.

use std::fmt;

use crate::kernel::{Atom, Clause, Literal, Signature, SignatureError, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Sym(String),
    Var(String),
    LParen,
    RParen,
    Comma,
    Pipe,
    Tilde,
    Dot,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Lexer { src, pos: 0, line, col: 1 }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.col, msg: msg.into() }
    }

    fn bump(&mut self, c: char) {
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
    }

    fn next_tok(&mut self) -> Result<Option<(Tok, usize, usize)>, ParseError> {
        loop {
            let rest = &self.src[self.pos..];
            let Some(c) = rest.chars().next() else { return Ok(None) };
            if c.is_whitespace() {
                self.bump(c);
                continue;
            }
            if c == '%' {
                for c in rest.chars() {
                    if c == '\n' {
                        break;
                    }
                    self.bump(c);
                }
                continue;
            }
            let (line, col) = (self.line, self.col);
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '|' => Tok::Pipe,
                '~' => Tok::Tilde,
                '.' => Tok::Dot,
                c if c.is_ascii_lowercase() || c.is_ascii_uppercase() || c == '_' => {
                    let mut name = String::new();
                    for c in rest.chars() {
                        if c.is_ascii_alphanumeric() || c == '_' {
                            name.push(c);
                            self.bump(c);
                        } else {
                            break;
                        }
                    }
                    let tok = if name.chars().next().unwrap().is_ascii_uppercase() {
                        Tok::Var(name)
                    } else {
                        Tok::Sym(name)
                    };
                    return Ok(Some((tok, line, col)));
                }
                other => return Err(self.err(format!("unexpected character `{other}`"))),
            };
            self.bump(c);
            return Ok(Some((tok, line, col)));
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    idx: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(src: &str, line: usize) -> Result<Parser, ParseError> {
        let mut lexer = Lexer::new(src, line);
        let mut toks = Vec::new();
        while let Some(t) = lexer.next_tok()? {
            toks.push(t);
        }
        Ok(Parser { toks, idx: 0, end: (lexer.line, lexer.col) })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.idx).map(|&(_, l, c)| (l, c)).unwrap_or(self.end)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, msg: msg.into() }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(t, _, _)| t.clone());
        self.idx += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.idx += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.next() {
            Some(Tok::Var(v)) => Ok(Term::Var(v)),
            Some(Tok::Sym(f)) => Ok(Term::App(f, self.opt_args()?)),
            _ => {
                self.idx = self.idx.saturating_sub(1);
                Err(self.err("expected a term"))
            }
        }
    }

    fn opt_args(&mut self) -> Result<Vec<Term>, ParseError> {
        if self.peek() != Some(&Tok::LParen) {
            return Ok(vec![]);
        }
        self.idx += 1;
        let mut args = vec![self.term()?];
        while self.peek() == Some(&Tok::Comma) {
            self.idx += 1;
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(args)
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        match self.next() {
            Some(Tok::Sym(p)) => Ok(Atom { pred: p, args: self.opt_args()? }),
            _ => {
                self.idx = self.idx.saturating_sub(1);
                Err(self.err("expected an atom"))
            }
        }
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        if self.peek() == Some(&Tok::Tilde) {
            self.idx += 1;
            Ok(Literal::neg(self.atom()?))
        } else {
            Ok(Literal::pos(self.atom()?))
        }
    }

    fn clause(&mut self) -> Result<Clause, ParseError> {
        if self.peek() == Some(&Tok::Sym("false".to_string())) {
            self.idx += 1;
            return Ok(Clause::empty());
        }
        let mut lits = vec![self.literal()?];
        while self.peek() == Some(&Tok::Pipe) {
            self.idx += 1;
            lits.push(self.literal()?);
        }
        Ok(Clause::from_literals(lits))
    }

    fn finish(&mut self, allow_dot: bool) -> Result<(), ParseError> {
        if allow_dot && self.peek() == Some(&Tok::Dot) {
            self.idx += 1;
        }
        if self.idx < self.toks.len() {
            return Err(self.err("trailing input"));
        }
        Ok(())
    }
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src, 1)?;
    let t = p.term()?;
    p.finish(false)?;
    Ok(t)
}

pub fn parse_atom(src: &str) -> Result<Atom, ParseError> {
    let mut p = Parser::new(src, 1)?;
    let a = p.atom()?;
    p.finish(true)?;
    Ok(a)
}

/// Parses a clause, optionally terminated by `.`. `line` seeds error
/// positions when the source is a slice of a larger file.
pub fn parse_clause_at(src: &str, line: usize) -> Result<Clause, ParseError> {
    let mut p = Parser::new(src, line)?;
    let c = p.clause()?;
    p.finish(true)?;
    Ok(c)
}

pub fn parse_clause(src: &str) -> Result<Clause, ParseError> {
    parse_clause_at(src, 1)
}

/// Parses multiple `.`-terminated clauses, `%` comments allowed.
pub fn parse_clauses(src: &str) -> Result<Vec<Clause>, ParseError> {
    let mut p = Parser::new(src, 1)?;
    let mut out = Vec::new();
    while p.peek().is_some() {
        out.push(p.clause()?);
        p.expect(Tok::Dot, "`.` after clause")?;
    }
    Ok(out)
}

fn register_term(t: &Term, sig: &mut Signature) -> Result<(), SignatureError> {
    if let Term::App(f, args) = t {
        sig.declare_function(f, args.len())?;
        for a in args {
            register_term(a, sig)?;
        }
    }
    Ok(())
}

pub fn register_atom(a: &Atom, sig: &mut Signature) -> Result<(), SignatureError> {
    sig.declare_predicate(&a.pred, a.args.len())?;
    for t in &a.args {
        register_term(t, sig)?;
    }
    Ok(())
}

/// Declares every symbol of the clause in left-to-right order, checking
/// arity consistency against earlier declarations.
pub fn register_clause(c: &Clause, sig: &mut Signature) -> Result<(), SignatureError> {
    for l in c.literals() {
        register_atom(&l.atom, sig)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        let c = parse_clause("r(X,Y) | ~r(g(X),g(Y)).").unwrap();
        assert_eq!(c.to_string(), "r(X,Y) | ~r(g(X),g(Y))");
        assert_eq!(parse_clause(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn parse_empty_clause() {
        assert!(parse_clause("false.").unwrap().is_empty());
    }

    #[test]
    fn syntax_error_position() {
        let err = parse_clause("p(X Y).").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.col > 1);
    }

    #[test]
    fn registration_checks_arity() {
        let mut sig = Signature::new();
        let c1 = parse_clause("p(f(a)).").unwrap();
        register_clause(&c1, &mut sig).unwrap();
        let c2 = parse_clause("p(f(a,a)).").unwrap();
        assert!(register_clause(&c2, &mut sig).is_err());
        // declaration order fixes precedence
        assert_eq!(sig.precedence("p"), Some(0));
        assert_eq!(sig.precedence("f"), Some(1));
        assert_eq!(sig.precedence("a"), Some(2));
    }
}
