//! Recursive-descent parser for the concrete formula grammar.
//!
//! Precedence, loosest first: `->` (right assoc), `|`, `&`, then the
//! prefix layer `!`, `O`, `D[...]`, then atoms. `dep[X] t` and
//! `x == y` are atomic formulas. `O` glues to terms (`Ox`) and chains
//! (`OOx`); identifiers may not start with `O`.

use super::{Dialect, Formula, Term, TermSet, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind} at byte {pos}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("lexical error: unexpected character `{0}`")]
    Lexical(char),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("arity mismatch for `{symbol}`: expected {expected}, got {got}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },
    #[error("empty dependence set is not allowed in the non-empty dialect")]
    EmptyDependenceSet,
    #[error("term identity `==` is not in dialect {0}")]
    IdentityNotInDialect(Dialect),
    #[error("function terms are not in dialect {0}")]
    FunctionsNotInDialect(Dialect),
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unexpected end of input, expected {0}")]
    UnexpectedEnd(&'static str),
    #[error("trailing input")]
    TrailingInput,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Next,          // O
    DepMod,        // D
    DepAtom,       // dep
    Bang,
    Amp,
    Pipe,
    Arrow,
    EqEq,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            pos: self.pos,
            kind,
        }
    }

    fn tokens(mut self) -> Result<Vec<(usize, Tok)>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let start = self.pos;
            let c = self.src[self.pos] as char;
            match c {
                ' ' | '\t' | '\r' | '\n' => {
                    self.pos += 1;
                }
                '(' => {
                    self.pos += 1;
                    out.push((start, Tok::LParen));
                }
                ')' => {
                    self.pos += 1;
                    out.push((start, Tok::RParen));
                }
                '[' => {
                    self.pos += 1;
                    out.push((start, Tok::LBracket));
                }
                ']' => {
                    self.pos += 1;
                    out.push((start, Tok::RBracket));
                }
                ',' => {
                    self.pos += 1;
                    out.push((start, Tok::Comma));
                }
                '!' => {
                    self.pos += 1;
                    out.push((start, Tok::Bang));
                }
                '&' => {
                    self.pos += 1;
                    out.push((start, Tok::Amp));
                }
                '|' => {
                    self.pos += 1;
                    out.push((start, Tok::Pipe));
                }
                '-' => {
                    if self.src.get(self.pos + 1) == Some(&b'>') {
                        self.pos += 2;
                        out.push((start, Tok::Arrow));
                    } else {
                        return Err(self.error(ParseErrorKind::Lexical('-')));
                    }
                }
                '=' => {
                    if self.src.get(self.pos + 1) == Some(&b'=') {
                        self.pos += 2;
                        out.push((start, Tok::EqEq));
                    } else {
                        return Err(self.error(ParseErrorKind::Lexical('=')));
                    }
                }
                'O' => {
                    self.pos += 1;
                    out.push((start, Tok::Next));
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut end = self.pos;
                    while end < self.src.len() {
                        let b = self.src[end] as char;
                        if b.is_ascii_alphanumeric() || b == '_' || b == '\'' {
                            end += 1;
                        } else {
                            break;
                        }
                    }
                    let name = std::str::from_utf8(&self.src[self.pos..end])
                        .unwrap()
                        .to_string();
                    self.pos = end;
                    let tok = match name.as_str() {
                        "D" => Tok::DepMod,
                        "dep" => Tok::DepAtom,
                        _ => Tok::Ident(name),
                    };
                    out.push((start, tok));
                }
                other => return Err(self.error(ParseErrorKind::Lexical(other))),
            }
        }
        Ok(out)
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    voc: &'a Vocabulary,
    dialect: Dialect,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &'static str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.err_expected(what))
        }
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            pos: self.here(),
            kind,
        }
    }

    fn err_expected(&self, what: &'static str) -> ParseError {
        if self.pos >= self.toks.len() {
            self.err(ParseErrorKind::UnexpectedEnd(what))
        } else {
            self.err(ParseErrorKind::Expected(what))
        }
    }

    // implies := or ('->' implies)?
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or_level()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            Ok(lhs.implies(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or_level(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and_level()?;
        while self.eat(&Tok::Pipe) {
            let rhs = self.and_level()?;
            acc = acc.or(rhs);
        }
        Ok(acc)
    }

    fn and_level(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            acc = acc.and(rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(self.unary()?.not())
            }
            Some(Tok::Next) => {
                // `O` here can open a term (inside an atom) or a formula;
                // disambiguate by looking at what the `O`-chain hits.
                if self.next_chain_starts_term() {
                    self.atom()
                } else {
                    self.pos += 1;
                    Ok(self.unary()?.next())
                }
            }
            Some(Tok::DepMod) => {
                self.pos += 1;
                let set = self.dep_set()?;
                let body = self.unary()?;
                Ok(Formula::dep_mod(set, body))
            }
            _ => self.atom(),
        }
    }

    /// After one or more `O` tokens, does a term follow (making the
    /// chain a term inside `x == y`)? Terms end the chain at an
    /// identifier that is a variable or function; formulas continue
    /// with `!`, `D`, `dep`, `(` or a predicate name.
    fn next_chain_starts_term(&self) -> bool {
        let mut i = self.pos;
        while matches!(self.toks.get(i).map(|(_, t)| t), Some(Tok::Next)) {
            i += 1;
        }
        match self.toks.get(i).map(|(_, t)| t) {
            Some(Tok::Ident(name)) => {
                if self.voc.lookup_var(name).is_some() || self.voc.lookup_func(name).is_some() {
                    // Predicate applications are formulas; a name that is
                    // both cannot happen (vocabulary symbols are distinct).
                    true
                } else {
                    false
                }
            }
            _ => false,
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::DepAtom) => {
                self.pos += 1;
                let set = self.dep_set()?;
                let t = self.term()?;
                Ok(Formula::DepAtom(set, t))
            }
            Some(Tok::Next) => {
                // A term-leading O: must be `term == term`.
                let x = self.term()?;
                self.ident_tail(x)
            }
            Some(Tok::Ident(name)) => {
                let at = self.here();
                if let Some((p, arity)) = self.voc.lookup_pred(&name) {
                    self.pos += 1;
                    self.expect(Tok::LParen, "`(` after predicate")?;
                    let args = self.term_list(Tok::RParen)?;
                    self.expect(Tok::RParen, "`)`")?;
                    if args.len() != arity {
                        return Err(ParseError {
                            pos: at,
                            kind: ParseErrorKind::ArityMismatch {
                                symbol: name,
                                expected: arity,
                                got: args.len(),
                            },
                        });
                    }
                    Ok(Formula::Pred(p, args))
                } else if self.voc.lookup_var(&name).is_some()
                    || self.voc.lookup_func(&name).is_some()
                {
                    let x = self.term()?;
                    self.ident_tail(x)
                } else {
                    Err(ParseError {
                        pos: at,
                        kind: ParseErrorKind::UnknownSymbol(name),
                    })
                }
            }
            _ => Err(self.err_expected("a formula")),
        }
    }

    fn ident_tail(&mut self, lhs: Term) -> Result<Formula, ParseError> {
        let at = self.here();
        self.expect(Tok::EqEq, "`==`")?;
        if !self.dialect.allows_identity() {
            return Err(ParseError {
                pos: at,
                kind: ParseErrorKind::IdentityNotInDialect(self.dialect),
            });
        }
        let rhs = self.term()?;
        Ok(Formula::Ident(lhs, rhs))
    }

    fn dep_set(&mut self) -> Result<TermSet, ParseError> {
        let at = self.here();
        self.expect(Tok::LBracket, "`[`")?;
        let terms = self.term_list(Tok::RBracket)?;
        self.expect(Tok::RBracket, "`]`")?;
        if terms.is_empty() && !self.dialect.allows_empty_dep_sets() {
            return Err(ParseError {
                pos: at,
                kind: ParseErrorKind::EmptyDependenceSet,
            });
        }
        Ok(TermSet::new(terms))
    }

    fn term_list(&mut self, close: Tok) -> Result<Vec<Term>, ParseError> {
        let mut out = Vec::new();
        if self.peek() == Some(&close) {
            return Ok(out);
        }
        loop {
            out.push(self.term()?);
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.bump() {
            Some(Tok::Next) => Ok(self.term()?.next()),
            Some(Tok::Ident(name)) => {
                let at = self.toks[self.pos - 1].0;
                if let Some(v) = self.voc.lookup_var(&name) {
                    return Ok(Term::Var(v));
                }
                if let Some((f, arity)) = self.voc.lookup_func(&name) {
                    if !self.dialect.allows_functions() {
                        return Err(ParseError {
                            pos: at,
                            kind: ParseErrorKind::FunctionsNotInDialect(self.dialect),
                        });
                    }
                    let args = if self.eat(&Tok::LParen) {
                        let args = self.term_list(Tok::RParen)?;
                        self.expect(Tok::RParen, "`)`")?;
                        args
                    } else if arity == 0 {
                        Vec::new()
                    } else {
                        return Err(self.err_expected("`(` after function symbol"));
                    };
                    if args.len() != arity {
                        return Err(ParseError {
                            pos: at,
                            kind: ParseErrorKind::ArityMismatch {
                                symbol: name,
                                expected: arity,
                                got: args.len(),
                            },
                        });
                    }
                    return Ok(Term::App(f, args));
                }
                Err(ParseError {
                    pos: at,
                    kind: ParseErrorKind::UnknownSymbol(name),
                })
            }
            Some(_) => {
                self.pos -= 1;
                Err(self.err_expected("a term"))
            }
            None => Err(self.err_expected("a term")),
        }
    }
}

fn run<'a, T>(
    text: &str,
    voc: &'a Vocabulary,
    dialect: Dialect,
    f: impl FnOnce(&mut Parser<'a>) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
        voc,
        dialect,
    };
    let value = f(&mut parser)?;
    if parser.pos < parser.toks.len() {
        return Err(parser.err(ParseErrorKind::TrailingInput));
    }
    Ok(value)
}

/// Parses a formula; the result is dialect-checked.
pub fn parse_formula(text: &str, voc: &Vocabulary, dialect: Dialect) -> Result<Formula, ParseError> {
    run(text, voc, dialect, Parser::formula)
}

/// Parses a single term.
pub fn parse_term(text: &str, voc: &Vocabulary, dialect: Dialect) -> Result<Term, ParseError> {
    run(text, voc, dialect, Parser::term)
}

/// Parses a comma-separated term list into a canonical term set.
pub fn parse_term_set(text: &str, voc: &Vocabulary, dialect: Dialect) -> Result<TermSet, ParseError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(TermSet::empty());
    }
    run(trimmed, voc, dialect, |p| {
        let mut terms = vec![p.term()?];
        while p.eat(&Tok::Comma) {
            terms.push(p.term()?);
        }
        Ok(TermSet::new(terms))
    })
}
