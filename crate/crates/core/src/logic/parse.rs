//! Recursive-descent parser for the formula surface syntax.
//!
//! ```text
//! formula  := sum
//! sum      := product (("+" | "-") product)*
//! product  := [rational "*"] atom | "-" atom
//! atom     := rational | "d(" term "," term ")" | NAME "(" term ("," term)* ")"
//!           | ("sup" | "inf") NAME "." atom | "(" formula ")"
//! term     := NAME | NAME "(" term ("," term)* ")"
//! rational := ["-"] digits ["/" digits] | decimal
//! ```
//!
//! A bare name in term position is a variable when it is bound or declared
//! free in the context, otherwise a constant when the signature has one,
//! otherwise an implicitly free variable.

use std::fmt;

use thiserror::Error;

use super::{Condition, ConditionRel, Formula, Quantifier, Signature, SymbolKind, Term, METRIC};
use crate::scalar::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical(char),
    Unexpected { found: String, expected: &'static str },
    UnknownSymbol(String),
    Arity { symbol: String, expected: usize, found: usize },
    Rebound(String),
    BinderIsSymbol(String),
    WrongKind { symbol: String, expected: &'static str },
    BadNumber(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the source text.
    pub position: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pos = self.position;
        match &self.kind {
            ParseErrorKind::Lexical(c) => write!(f, "lexical error at {pos}: unexpected character `{c}`"),
            ParseErrorKind::Unexpected { found, expected } => {
                write!(f, "syntax error at {pos}: expected {expected}, found {found}")
            }
            ParseErrorKind::UnknownSymbol(s) => write!(f, "unknown symbol `{s}` at {pos}"),
            ParseErrorKind::Arity { symbol, expected, found } => {
                write!(f, "arity mismatch at {pos}: `{symbol}` expects {expected} arguments, found {found}")
            }
            ParseErrorKind::Rebound(v) => write!(f, "variable `{v}` rebound inside its own scope at {pos}"),
            ParseErrorKind::BinderIsSymbol(v) => write!(f, "cannot bind declared symbol `{v}` at {pos}"),
            ParseErrorKind::WrongKind { symbol, expected } => {
                write!(f, "`{symbol}` at {pos} is not a {expected}")
            }
            ParseErrorKind::BadNumber(s) => write!(f, "malformed number `{s}` at {pos}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Name(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Plus,
    Minus,
    Star,
    Slash,
    Le,
    Ge,
    Eq,
    Semi,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Name(n) => format!("name `{n}`"),
            Tok::End => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Le => "<=",
            Tok::Ge => ">=",
            Tok::Eq => "=",
            Tok::Semi => ";",
            _ => "",
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '=' => Some(Tok::Eq),
            ';' => Some(Tok::Semi),
            '≤' => Some(Tok::Le),
            '≥' => Some(Tok::Ge),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, pos));
            i += 1;
            continue;
        }
        if c == '<' || c == '>' {
            if chars.get(i + 1).map(|p| p.1) == Some('=') {
                out.push((if c == '<' { Tok::Le } else { Tok::Ge }, pos));
                i += 2;
                continue;
            }
            return Err(ParseError { kind: ParseErrorKind::Lexical(c), position: pos });
        }
        let starts_number = c.is_ascii_digit()
            || (c == '.' && chars.get(i + 1).is_some_and(|p| p.1.is_ascii_digit()));
        if starts_number {
            let mut j = i;
            let mut seen_dot = false;
            while j < chars.len() {
                let d = chars[j].1;
                if d.is_ascii_digit() {
                    j += 1;
                } else if d == '.' && !seen_dot && chars.get(j + 1).is_some_and(|p| p.1.is_ascii_digit()) {
                    seen_dot = true;
                    j += 1;
                } else {
                    break;
                }
            }
            let end = chars.get(j).map_or(text.len(), |p| p.0);
            out.push((Tok::Num(text[pos..end].to_string()), pos));
            i = j;
            continue;
        }
        if c == '.' {
            out.push((Tok::Dot, pos));
            i += 1;
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].1.is_alphanumeric() || chars[j].1 == '_') {
                j += 1;
            }
            let end = chars.get(j).map_or(text.len(), |p| p.0);
            out.push((Tok::Name(text[pos..end].to_string()), pos));
            i = j;
            continue;
        }
        return Err(ParseError { kind: ParseErrorKind::Lexical(c), position: pos });
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    sig: &'a Signature,
    free: &'a [String],
    bound: Vec<String>,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, kind: ParseErrorKind, position: usize) -> PResult<T> {
        Err(ParseError { kind, position })
    }

    fn unexpected<T>(&self, expected: &'static str) -> PResult<T> {
        self.err(ParseErrorKind::Unexpected { found: self.peek().describe(), expected }, self.pos())
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.unexpected(expected)
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.product()?;
                    acc = Formula::add(acc, rhs);
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.product()?;
                    acc = Formula::sub(acc, rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_rational(&self) -> bool {
        matches!(self.peek(), Tok::Num(_)) || (*self.peek() == Tok::Minus && matches!(self.peek_at(1), Tok::Num(_)))
    }

    fn rational(&mut self) -> PResult<Rational> {
        let start = self.pos();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let (tok, pos) = self.bump();
        let Tok::Num(digits) = tok else {
            return self.err(ParseErrorKind::Unexpected { found: tok.describe(), expected: "number" }, pos);
        };
        let mut literal = digits.clone();
        if *self.peek() == Tok::Slash {
            if digits.contains('.') {
                return self.err(ParseErrorKind::BadNumber(format!("{digits}/")), start);
            }
            self.bump();
            let (den, den_pos) = self.bump();
            match den {
                Tok::Num(d) if !d.contains('.') => literal = format!("{digits}/{d}"),
                other => {
                    return self.err(ParseErrorKind::Unexpected { found: other.describe(), expected: "denominator" }, den_pos)
                }
            }
        }
        let value = parse_rational(&literal).ok_or(ParseError { kind: ParseErrorKind::BadNumber(literal), position: start })?;
        Ok(if negative { -value } else { value })
    }

    fn product(&mut self) -> PResult<Formula> {
        if self.starts_rational() {
            let r = self.rational()?;
            if *self.peek() == Tok::Star {
                self.bump();
                let body = self.atom()?;
                return Ok(Formula::scale(r, body));
            }
            return Ok(Formula::constant(r));
        }
        if *self.peek() == Tok::Minus {
            self.bump();
            let body = self.atom()?;
            return Ok(Formula::scale(-crate::scalar::int(1), body));
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Formula> {
        if self.starts_rational() {
            return Ok(Formula::constant(self.rational()?));
        }
        let pos = self.pos();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Name(name) if (name == "sup" || name == "inf") && matches!(self.peek_at(1), Tok::Name(_)) => {
                self.bump();
                let q = if name == "sup" { Quantifier::Sup } else { Quantifier::Inf };
                let (Tok::Name(var), var_pos) = self.bump() else { unreachable!() };
                if self.bound.contains(&var) {
                    return self.err(ParseErrorKind::Rebound(var), var_pos);
                }
                if self.sig.kind(&var).is_some() || var == METRIC || var == "sup" || var == "inf" {
                    return self.err(ParseErrorKind::BinderIsSymbol(var), var_pos);
                }
                self.expect(Tok::Dot, "`.` after bound variable")?;
                self.bound.push(var.clone());
                let body = self.atom();
                self.bound.pop();
                Ok(Formula::Quant(q, var, Box::new(body?)))
            }
            Tok::Name(name) if name == METRIC && *self.peek_at(1) == Tok::LParen => {
                self.bump();
                let args = self.arguments()?;
                if args.len() != 2 {
                    return self.err(
                        ParseErrorKind::Arity { symbol: METRIC.to_string(), expected: 2, found: args.len() },
                        pos,
                    );
                }
                let mut it = args.into_iter();
                Ok(Formula::Dist(it.next().unwrap(), it.next().unwrap()))
            }
            Tok::Name(name) if *self.peek_at(1) == Tok::LParen => {
                self.bump();
                match self.sig.kind(&name) {
                    Some(SymbolKind::Relation) => {}
                    Some(_) => return self.err(ParseErrorKind::WrongKind { symbol: name, expected: "relation" }, pos),
                    None => return self.err(ParseErrorKind::UnknownSymbol(name), pos),
                }
                let args = self.arguments()?;
                let arity = self.sig.relation(&name).map(|r| r.arity).unwrap_or_default();
                if args.len() != arity {
                    return self.err(ParseErrorKind::Arity { symbol: name, expected: arity, found: args.len() }, pos);
                }
                Ok(Formula::Rel(name, args))
            }
            Tok::Name(name) => self.err(ParseErrorKind::WrongKind { symbol: name, expected: "formula" }, pos),
            _ => self.unexpected("formula"),
        }
    }

    fn arguments(&mut self) -> PResult<Vec<Term>> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "`)` or `,`")?;
        Ok(args)
    }

    fn term(&mut self) -> PResult<Term> {
        let (tok, pos) = self.bump();
        let Tok::Name(name) = tok else {
            return self.err(ParseErrorKind::Unexpected { found: tok.describe(), expected: "term" }, pos);
        };
        if *self.peek() == Tok::LParen {
            match self.sig.kind(&name) {
                Some(SymbolKind::Function) => {}
                Some(_) => return self.err(ParseErrorKind::WrongKind { symbol: name, expected: "function" }, pos),
                None => return self.err(ParseErrorKind::UnknownSymbol(name), pos),
            }
            let args = self.arguments()?;
            let arity = self.sig.function(&name).map(|f| f.arity).unwrap_or_default();
            if args.len() != arity {
                return self.err(ParseErrorKind::Arity { symbol: name, expected: arity, found: args.len() }, pos);
            }
            return Ok(Term::Apply(name, args));
        }
        if self.bound.contains(&name) || self.free.contains(&name) {
            return Ok(Term::Var(name));
        }
        match self.sig.kind(&name) {
            Some(SymbolKind::Constant) => Ok(Term::Const(name)),
            Some(SymbolKind::Function) => {
                let arity = self.sig.function(&name).map(|f| f.arity).unwrap_or_default();
                self.err(ParseErrorKind::Arity { symbol: name, expected: arity, found: 0 }, pos)
            }
            Some(SymbolKind::Relation) => self.err(ParseErrorKind::WrongKind { symbol: name, expected: "term" }, pos),
            None if name == METRIC || name == "sup" || name == "inf" => {
                self.err(ParseErrorKind::WrongKind { symbol: name, expected: "term" }, pos)
            }
            None => Ok(Term::Var(name)),
        }
    }

    fn finish(&mut self) -> PResult<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }
}

fn parser<'a>(text: &str, sig: &'a Signature, free: &'a [String]) -> PResult<Parser<'a>> {
    Ok(Parser { toks: lex(text)?, at: 0, sig, free, bound: Vec::new() })
}

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    parse_formula_in(text, sig, &[])
}

/// Parses with `free` declared as variables, so they take precedence over
/// constants of the same name.
pub fn parse_formula_in(text: &str, sig: &Signature, free: &[String]) -> Result<Formula, ParseError> {
    let mut p = parser(text, sig, free)?;
    let phi = p.formula()?;
    p.finish()?;
    Ok(phi)
}

fn condition(p: &mut Parser<'_>) -> PResult<Condition> {
    let left = p.formula()?;
    let rel = match p.peek() {
        Tok::Le => ConditionRel::Le,
        Tok::Eq => ConditionRel::Eq,
        Tok::Ge => {
            p.bump();
            let right = p.formula()?;
            return Ok(Condition::le(right, left));
        }
        _ => return p.unexpected("`<=`, `>=` or `=`"),
    };
    p.bump();
    let right = p.formula()?;
    Ok(Condition { left, relation: rel, right })
}

/// Parses `phi <= psi`, `phi >= psi` or `phi = psi`.
pub fn parse_condition(text: &str, sig: &Signature, free: &[String]) -> Result<Condition, ParseError> {
    let mut p = parser(text, sig, free)?;
    let c = condition(&mut p)?;
    p.finish()?;
    Ok(c)
}

/// Semicolon-separated list of conditions; empty input gives an empty list.
pub fn parse_conditions(text: &str, sig: &Signature, free: &[String]) -> Result<Vec<Condition>, ParseError> {
    let mut p = parser(text, sig, free)?;
    let mut out = Vec::new();
    loop {
        while *p.peek() == Tok::Semi {
            p.bump();
        }
        if *p.peek() == Tok::End {
            return Ok(out);
        }
        out.push(condition(&mut p)?);
        match p.peek() {
            Tok::Semi | Tok::End => {}
            _ => return p.unexpected("`;`"),
        }
    }
}
