//! Line-oriented scenario files.
//!
//! ```text
//! scenario bell.projectors
//! statistics = bose
//! modes = (A,up) (A,dn) (B,up) (B,dn)
//! state = (adag(A,up)*adag(B,dn) + adag(A,dn)*adag(B,up))|vac>
//! partition = modes (A,up) (A,dn) | (B,up) (B,dn)
//! probe P1 = n(A,up)
//! probe P2 = n(B,dn)
//! expect gap(P1,P2) = 0.25
//! expect verdict.V = entangled
//! ```
//!
//! Expressions mix both notations: ladder operators `adag(..)`, `a(..)`,
//! `n(..)` acting on `|vac>`, and first-quantized kets `ket(..)` combined
//! with `(x)` and the projectors `S[..]`, `A[..]`. Scalars are numbers,
//! `i`, `2i`, `sqrt(..)` and `log(..)`. States are normalized on
//! evaluation and the original norm is kept.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::algebra::OperatorExpr;
use crate::classify::{
    is_entangled_iv, is_separable_i, is_separable_ii, is_separable_iii, is_separable_v, qfi_phase, reduced_x1, Definition, ReducedX1, Verdict,
};
use crate::correlations::{factorization_gap, FactorizationReport};
use crate::firstq::FirstQTensor;
use crate::fock::{ModeCatalog, StateVector, Statistics};
use crate::harness::fmt_f64;
use crate::linalg::{basis_vector, CVec, Mat, I, ONE};
use crate::{Error, ParseError, Result, EPS_TOL};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Imag(f64),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Tensor,
    Vac,
    Pipe,
    Equals,
    Dot,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Num(x) => write!(f, "number {x}"),
            Tok::Imag(x) => write!(f, "number {x}i"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Tensor => f.write_str("`(x)`"),
            Tok::Vac => f.write_str("`|vac>`"),
            Tok::Pipe => f.write_str("`|`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::Dot => f.write_str("`.`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '↑' || c == '↓'
}

fn lex(line: &str, line_no: usize, col0: usize) -> std::result::Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out: Vec<Spanned> = Vec::new();
    let mut k = 0;
    let err = |col: usize, message: String| ParseError { line: line_no, column: col0 + col + 1, message };
    while k < chars.len() {
        let c = chars[k];
        let col = k;
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        let rest: String = chars[k..].iter().take(5).collect();
        let tok = if c.is_ascii_digit() || (c == '.' && chars.get(k + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '.') {
                k += 1;
            }
            if k < chars.len() && (chars[k] == 'e' || chars[k] == 'E') {
                let mut j = k + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    k = j;
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                }
            }
            let text: String = chars[start..k].iter().collect();
            let value: f64 = text.parse().map_err(|_| err(col, format!("malformed number `{text}`")))?;
            if k < chars.len() && chars[k] == 'i' && !chars.get(k + 1).is_some_and(|&d| is_ident_char(d)) {
                k += 1;
                Tok::Imag(value)
            } else {
                Tok::Num(value)
            }
        } else if is_ident_char(c) {
            let start = k;
            while k < chars.len() && is_ident_char(chars[k]) {
                k += 1;
            }
            Tok::Ident(chars[start..k].iter().collect())
        } else if c == '"' {
            let start = k + 1;
            k += 1;
            while k < chars.len() && chars[k] != '"' {
                k += 1;
            }
            if k == chars.len() {
                return Err(err(col, "unterminated string".into()));
            }
            k += 1;
            Tok::Str(chars[start..k - 1].iter().collect())
        } else if rest.starts_with("|vac>") {
            k += 5;
            Tok::Vac
        } else if rest.starts_with("(x)") && !matches!(out.last().map(|s| &s.tok), Some(Tok::Ident(_))) {
            k += 3;
            Tok::Tensor
        } else {
            k += 1;
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                '+' => Tok::Plus,
                '-' | '−' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '|' => Tok::Pipe,
                '=' => Tok::Equals,
                '.' => Tok::Dot,
                other => return Err(err(col, format!("unexpected character `{other}`"))),
            }
        };
        out.push(Spanned { tok, col: col0 + col + 1 });
    }
    Ok(out)
}

/// Ladder operators and kets addressed by mode label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    Create,
    Annihilate,
    Number,
    Ket,
}

impl Atom {
    fn name(self) -> &'static str {
        match self {
            Atom::Create => "adag",
            Atom::Annihilate => "a",
            Atom::Number => "n",
            Atom::Ket => "ket",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Tensor,
}

impl BinOp {
    fn prec(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Tensor => 2,
            BinOp::Mul | BinOp::Div => 3,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Tensor => " (x) ",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Log,
}

/// Expression syntax tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Imag(f64),
    Vac,
    Atom(Atom, String),
    Func(Func, Box<Expr>),
    Sym(Box<Expr>),
    Asym(Box<Expr>),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Bin(op, ..) => op.prec(),
            Expr::Neg(_) => 4,
            _ => 5,
        }
    }
}

fn fmt_label(label: &str) -> String {
    label.to_string()
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Imag(x) => write!(f, "{x}i"),
            Expr::Vac => f.write_str("|vac>"),
            Expr::Atom(a, l) => write!(f, "{}({})", a.name(), fmt_label(l)),
            Expr::Func(Func::Sqrt, e) => write!(f, "sqrt({e})"),
            Expr::Func(Func::Log, e) => write!(f, "log({e})"),
            Expr::Sym(e) => write!(f, "S[{e}]"),
            Expr::Asym(e) => write!(f, "A[{e}]"),
            Expr::Neg(e) => {
                if e.prec() < 4 {
                    write!(f, "-({e})")
                } else {
                    write!(f, "-{e}")
                }
            }
            Expr::Bin(op, l, r) => {
                if l.prec() < op.prec() {
                    write!(f, "({l})")?;
                } else {
                    write!(f, "{l}")?;
                }
                f.write_str(op.symbol())?;
                if r.prec() <= op.prec() {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
        }
    }
}

/// How the two sides of the system are specified.
#[derive(Debug, Clone, PartialEq)]
pub enum PartitionDecl {
    Modes(Vec<String>, Vec<String>),
    Subspaces(Vec<Expr>, Vec<Expr>),
    K(Vec<Expr>),
    Particle(Expr, Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExpectValue {
    Word(String),
    Value(Expr),
}

impl fmt::Display for ExpectValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpectValue::Word(w) => f.write_str(w),
            ExpectValue::Value(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expectation {
    pub key: String,
    pub value: ExpectValue,
    pub source: Option<String>,
}

/// A parsed scenario; evaluation happens in [`Scenario::evaluate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub statistics: Statistics,
    pub modes: Vec<String>,
    pub state: Expr,
    pub partition: Option<PartitionDecl>,
    pub probes: Vec<(String, Expr)>,
    pub generator: Option<Expr>,
    pub expects: Vec<Expectation>,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Parser {
    fn new(toks: Vec<Spanned>, line: usize, end_col: usize) -> Self {
        Parser { toks, pos: 0, line, end_col }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|s| s.col).unwrap_or(self.end_col)
    }

    fn error<T>(&self, message: impl Into<String>) -> std::result::Result<T, ParseError> {
        Err(ParseError { line: self.line, column: self.col(), message: message.into() })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: &Tok) -> std::result::Result<(), ParseError> {
        match self.peek() {
            Some(t) if t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => {
                let t = t.clone();
                self.error(format!("expected {want}, found {t}"))
            }
            None => self.error(format!("expected {want}, found end of line")),
        }
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn finish(&self) -> std::result::Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => self.error(format!("unexpected {t}")),
        }
    }

    fn expr(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut lhs = self.tterm()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.tterm()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn tterm(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while self.peek() == Some(&Tok::Tensor) {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Bin(BinOp::Tensor, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    BinOp::Mul
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    BinOp::Div
                }
                // `X|vac>` applies X to the vacuum.
                Some(Tok::Vac) => BinOp::Mul,
                _ => return Ok(lhs),
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> std::result::Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.primary(),
        }
    }

    fn label(&mut self) -> std::result::Result<String, ParseError> {
        self.expect(&Tok::LParen)?;
        let mut parts = Vec::new();
        loop {
            match self.next() {
                Some(Tok::Ident(s)) => parts.push(s),
                Some(Tok::Num(x)) if x.fract() == 0.0 && x >= 0.0 => parts.push(format!("{x}")),
                Some(t) => {
                    self.pos -= 1;
                    return self.error(format!("expected mode label, found {t}"));
                }
                None => return self.error("expected mode label, found end of line"),
            }
            match self.next() {
                Some(Tok::Comma) => continue,
                Some(Tok::RParen) => return Ok(parts.join(",")),
                Some(t) => {
                    self.pos -= 1;
                    return self.error(format!("expected `,` or `)`, found {t}"));
                }
                None => return self.error("expected `)`, found end of line"),
            }
        }
    }

    fn primary(&mut self) -> std::result::Result<Expr, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return self.error("expected expression, found end of line");
        };
        match tok {
            Tok::Num(x) => {
                self.pos += 1;
                Ok(Expr::Num(x))
            }
            Tok::Imag(x) => {
                self.pos += 1;
                Ok(Expr::Imag(x))
            }
            Tok::Vac => {
                self.pos += 1;
                Ok(Expr::Vac)
            }
            Tok::LParen => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.pos += 1;
                let next = self.peek().cloned();
                match (name.as_str(), next) {
                    ("i", _) => Ok(Expr::Imag(1.0)),
                    ("S" | "A", Some(Tok::LBracket)) => {
                        self.pos += 1;
                        let e = self.expr()?;
                        self.expect(&Tok::RBracket)?;
                        Ok(if name == "S" { Expr::Sym(Box::new(e)) } else { Expr::Asym(Box::new(e)) })
                    }
                    ("sqrt" | "log", Some(Tok::LParen)) => {
                        self.pos += 1;
                        let e = self.expr()?;
                        self.expect(&Tok::RParen)?;
                        let f = if name == "sqrt" { Func::Sqrt } else { Func::Log };
                        Ok(Expr::Func(f, Box::new(e)))
                    }
                    ("adag" | "a" | "n" | "ket", Some(Tok::LParen)) => {
                        let atom = match name.as_str() {
                            "adag" => Atom::Create,
                            "a" => Atom::Annihilate,
                            "n" => Atom::Number,
                            _ => Atom::Ket,
                        };
                        Ok(Expr::Atom(atom, self.label()?))
                    }
                    _ => {
                        self.pos -= 1;
                        self.error(format!("unknown name `{name}`"))
                    }
                }
            }
            other => self.error(format!("expected expression, found {other}")),
        }
    }

    /// `(L,up)` or a bare identifier/number.
    fn mode_list(&mut self, stop: Option<&Tok>) -> std::result::Result<Vec<String>, ParseError> {
        let mut out = Vec::new();
        while let Some(t) = self.peek().cloned() {
            if Some(&t) == stop {
                break;
            }
            match t {
                Tok::LParen => out.push(self.label()?),
                Tok::Ident(s) => {
                    self.pos += 1;
                    out.push(s);
                }
                Tok::Num(x) if x.fract() == 0.0 && x >= 0.0 => {
                    self.pos += 1;
                    out.push(format!("{x}"));
                }
                other => return self.error(format!("expected mode label, found {other}")),
            }
        }
        Ok(out)
    }

    fn expr_list(&mut self, stop: Option<&Tok>) -> std::result::Result<Vec<Expr>, ParseError> {
        let mut out = vec![self.expr()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            out.push(self.expr()?);
        }
        match (self.peek(), stop) {
            (None, _) => Ok(out),
            (Some(t), Some(s)) if t == s => Ok(out),
            (Some(t), _) => {
                let t = t.clone();
                self.error(format!("unexpected {t}"))
            }
        }
    }
}

/// Parses one expression.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let toks = lex(text, 1, 0)?;
    let mut p = Parser::new(toks, 1, text.chars().count() + 1);
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

fn mode_text(label: &str) -> String {
    if label.contains(',') {
        format!("({label})")
    } else {
        label.to_string()
    }
}

/// Parses a scenario file.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut id = None;
    let mut statistics = None;
    let mut modes = None;
    let mut state = None;
    let mut partition = None;
    let mut probes: Vec<(String, Expr)> = Vec::new();
    let mut generator = None;
    let mut expects = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = raw.chars().count() - trimmed.chars().count();
        let kw_len = trimmed.find(|c: char| c.is_whitespace() || c == '=').unwrap_or(trimmed.len());
        let keyword = &trimmed[..kw_len];
        let rest = &trimmed[kw_len..];
        let rest_col = indent + keyword.chars().count();
        let perr = |col: usize, message: String| -> Error { ParseError { line: line_no, column: col, message }.into() };
        let end_col = raw.chars().count() + 1;
        let toks = lex(rest, line_no, rest_col)?;
        let mut p = Parser::new(toks, line_no, end_col);
        let dup = |what: &str| perr(indent + 1, format!("duplicate `{what}` line"));
        match keyword {
            "scenario" => {
                let name: String = rest.split('#').next().unwrap_or("").trim().to_string();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(perr(rest_col + 1, "expected a single scenario id".into()));
                }
                if id.replace(name).is_some() {
                    return Err(dup("scenario"));
                }
            }
            "statistics" => {
                p.expect(&Tok::Equals)?;
                let s = match p.next() {
                    Some(Tok::Ident(s)) if s.eq_ignore_ascii_case("bose") => Statistics::Bose,
                    Some(Tok::Ident(s)) if s.eq_ignore_ascii_case("fermi") => Statistics::Fermi,
                    _ => {
                        p.pos = p.pos.saturating_sub(1);
                        return Err(p.error::<()>("expected `bose` or `fermi`").unwrap_err().into());
                    }
                };
                p.finish()?;
                if statistics.replace(s).is_some() {
                    return Err(dup("statistics"));
                }
            }
            "modes" => {
                p.expect(&Tok::Equals)?;
                let list = p.mode_list(None)?;
                if list.is_empty() {
                    return Err(perr(end_col, "expected at least one mode".into()));
                }
                if modes.replace(list).is_some() {
                    return Err(dup("modes"));
                }
            }
            "state" => {
                p.expect(&Tok::Equals)?;
                let e = p.expr()?;
                p.finish()?;
                if state.replace(e).is_some() {
                    return Err(dup("state"));
                }
            }
            "generator" => {
                p.expect(&Tok::Equals)?;
                let e = p.expr()?;
                p.finish()?;
                if generator.replace(e).is_some() {
                    return Err(dup("generator"));
                }
            }
            "partition" => {
                p.expect(&Tok::Equals)?;
                let kind = match p.next() {
                    Some(Tok::Ident(k)) => k,
                    _ => {
                        p.pos = p.pos.saturating_sub(1);
                        return Err(p.error::<()>("expected `modes`, `subspaces`, `K` or `particle`").unwrap_err().into());
                    }
                };
                let decl = match kind.as_str() {
                    "modes" => {
                        let l = p.mode_list(Some(&Tok::Pipe))?;
                        p.expect(&Tok::Pipe)?;
                        let r = p.mode_list(None)?;
                        PartitionDecl::Modes(l, r)
                    }
                    "subspaces" => {
                        let l = p.expr_list(Some(&Tok::Pipe))?;
                        p.expect(&Tok::Pipe)?;
                        let r = p.expr_list(None)?;
                        PartitionDecl::Subspaces(l, r)
                    }
                    "K" => PartitionDecl::K(p.expr_list(None)?),
                    "particle" => {
                        let l = p.expr()?;
                        p.expect(&Tok::Pipe)?;
                        let r = p.expr()?;
                        p.finish()?;
                        PartitionDecl::Particle(l, r)
                    }
                    other => {
                        p.pos -= 1;
                        return Err(p.error::<()>(format!("unknown partition kind `{other}`")).unwrap_err().into());
                    }
                };
                if partition.replace(decl).is_some() {
                    return Err(dup("partition"));
                }
            }
            "probe" => {
                let name = match p.next() {
                    Some(Tok::Ident(n)) => n,
                    _ => {
                        p.pos = p.pos.saturating_sub(1);
                        return Err(p.error::<()>("expected probe name").unwrap_err().into());
                    }
                };
                p.expect(&Tok::Equals)?;
                let e = p.expr()?;
                p.finish()?;
                if probes.iter().any(|(n, _)| *n == name) {
                    return Err(perr(rest_col + 1, format!("duplicate probe `{name}`")));
                }
                probes.push((name, e));
            }
            "expect" => {
                let eq = rest.find('=').ok_or_else(|| perr(end_col, "expected `=`".into()))?;
                let key: String = rest[..eq].chars().filter(|c| !c.is_whitespace()).collect();
                if key.is_empty() {
                    return Err(perr(rest_col + 1, "expected a key".into()));
                }
                let value_text = &rest[eq + 1..];
                let value_col = rest_col + rest[..=eq].chars().count();
                let mut vp = Parser::new(lex(value_text, line_no, value_col)?, line_no, end_col);
                let value = match vp.peek().cloned() {
                    Some(Tok::Ident(w))
                        if matches!(w.as_str(), "separable" | "entangled" | "true" | "false")
                            && !matches!(vp.toks.get(1).map(|s| &s.tok), Some(Tok::LParen | Tok::LBracket)) =>
                    {
                        vp.pos += 1;
                        ExpectValue::Word(w)
                    }
                    _ => ExpectValue::Value(vp.expr()?),
                };
                let source = match vp.next() {
                    None => None,
                    Some(Tok::Ident(f)) if f == "from" => match vp.next() {
                        Some(Tok::Str(s)) => Some(s),
                        _ => {
                            vp.pos = vp.pos.saturating_sub(1);
                            return Err(vp.error::<()>("expected a quoted source after `from`").unwrap_err().into());
                        }
                    },
                    Some(t) => {
                        vp.pos -= 1;
                        return Err(vp.error::<()>(format!("unexpected {t}")).unwrap_err().into());
                    }
                };
                vp.finish()?;
                expects.push(Expectation { key, value, source });
            }
            other => return Err(perr(indent + 1, format!("unknown directive `{other}`"))),
        }
        let _ = p.done();
    }
    let missing = |what: &str| -> Error { ParseError { line: last_line.max(1), column: 1, message: format!("missing `{what}` line") }.into() };
    Ok(Scenario {
        id: id.ok_or_else(|| missing("scenario"))?,
        statistics: statistics.ok_or_else(|| missing("statistics"))?,
        modes: modes.ok_or_else(|| missing("modes"))?,
        state: state.ok_or_else(|| missing("state"))?,
        partition,
        probes,
        generator,
        expects,
    })
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}", self.id)?;
        writeln!(f, "statistics = {}", self.statistics.name())?;
        let modes: Vec<String> = self.modes.iter().map(|m| mode_text(m)).collect();
        writeln!(f, "modes = {}", modes.join(" "))?;
        writeln!(f, "state = {}", self.state)?;
        if let Some(p) = &self.partition {
            let list = |v: &[Expr]| v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ");
            match p {
                PartitionDecl::Modes(l, r) => {
                    let l: Vec<String> = l.iter().map(|m| mode_text(m)).collect();
                    let r: Vec<String> = r.iter().map(|m| mode_text(m)).collect();
                    writeln!(f, "partition = modes {} | {}", l.join(" "), r.join(" "))?;
                }
                PartitionDecl::Subspaces(l, r) => writeln!(f, "partition = subspaces {} | {}", list(l), list(r))?,
                PartitionDecl::K(k) => writeln!(f, "partition = K {}", list(k))?,
                PartitionDecl::Particle(a, b) => writeln!(f, "partition = particle {a} | {b}")?,
            }
        }
        for (name, e) in &self.probes {
            writeln!(f, "probe {name} = {e}")?;
        }
        if let Some(g) = &self.generator {
            writeln!(f, "generator = {g}")?;
        }
        for e in &self.expects {
            write!(f, "expect {} = {}", e.key, e.value)?;
            if let Some(s) = &e.source {
                write!(f, " from \"{s}\"")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Value of an evaluated expression.
#[derive(Debug, Clone)]
pub enum Value {
    Scalar(Complex64),
    Operator(OperatorExpr),
    Fock(StateVector),
    Ket(FirstQTensor),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Operator(_) => "operator",
            Value::Fock(_) => "Fock state",
            Value::Ket(_) => "first-quantized ket",
        }
    }
}

/// Evaluates an expression against a mode catalog.
pub fn eval(expr: &Expr, catalog: &ModeCatalog) -> Result<Value> {
    use Value::*;
    let bad = |what: &str, a: &Value, b: Option<&Value>| -> Error {
        match b {
            Some(b) => Error::Scenario(format!("cannot {what} {} and {}", a.kind(), b.kind())),
            None => Error::Scenario(format!("cannot {what} {}", a.kind())),
        }
    };
    Ok(match expr {
        Expr::Num(x) => Scalar(Complex64::new(*x, 0.0)),
        Expr::Imag(x) => Scalar(I * *x),
        Expr::Vac => Fock(StateVector::vacuum(catalog)),
        Expr::Atom(atom, label) => {
            let m = catalog.index_of(label)?;
            match atom {
                Atom::Create => Operator(OperatorExpr::create(catalog, m)?),
                Atom::Annihilate => Operator(OperatorExpr::annihilate(catalog, m)?),
                Atom::Number => Operator(OperatorExpr::number(catalog, m)?),
                Atom::Ket => Ket(FirstQTensor::single(&basis_vector(catalog.len(), m))?),
            }
        }
        Expr::Func(func, e) => match eval(e, catalog)? {
            Scalar(z) => Scalar(match func {
                Func::Sqrt => z.sqrt(),
                Func::Log => z.ln(),
            }),
            v => return Err(bad("apply a function to", &v, None)),
        },
        Expr::Sym(e) | Expr::Asym(e) => {
            let stats = if matches!(expr, Expr::Sym(_)) { Statistics::Bose } else { Statistics::Fermi };
            match eval(e, catalog)? {
                Ket(t) => Ket(t.symmetrize(stats)),
                v => return Err(bad("symmetrize", &v, None)),
            }
        }
        Expr::Neg(e) => scale(eval(e, catalog)?, -ONE)?,
        Expr::Bin(op, l, r) => {
            let a = eval(l, catalog)?;
            let b = eval(r, catalog)?;
            match op {
                BinOp::Add | BinOp::Sub => {
                    let b = if *op == BinOp::Sub { scale(b, -ONE)? } else { b };
                    match (a, b) {
                        (Scalar(x), Scalar(y)) => Scalar(x + y),
                        (Operator(x), Operator(y)) => Operator(x.try_add(&y)?),
                        (Scalar(x), Operator(y)) | (Operator(y), Scalar(x)) => Operator(y.try_add(&OperatorExpr::scalar(catalog, x))?),
                        (Fock(x), Fock(y)) => Fock(x.try_add(&y)?),
                        (Ket(x), Ket(y)) => Ket(x.try_add(&y)?),
                        (a, b) => return Err(bad("add", &a, Some(&b))),
                    }
                }
                BinOp::Mul => match (a, b) {
                    (Scalar(x), v) | (v, Scalar(x)) => scale(v, x)?,
                    (Operator(x), Operator(y)) => Operator(x.multiply(&y)?),
                    (Operator(x), Fock(s)) => Fock(x.apply(&s)?),
                    (Operator(x), Ket(t)) => Fock(x.apply(&t.to_fock(catalog)?)?),
                    (a, b) => return Err(bad("multiply", &a, Some(&b))),
                },
                BinOp::Div => match b {
                    Scalar(y) if y.norm() > 0.0 => scale(a, ONE / y)?,
                    b => return Err(bad("divide", &a, Some(&b))),
                },
                BinOp::Tensor => match (a, b) {
                    (Ket(x), Ket(y)) => Ket(x.tensor(&y)?),
                    (a, b) => return Err(bad("take the tensor product of", &a, Some(&b))),
                },
            }
        }
    })
}

fn scale(v: Value, z: Complex64) -> Result<Value> {
    Ok(match v {
        Value::Scalar(x) => Value::Scalar(x * z),
        Value::Operator(o) => Value::Operator(o.scale(z)),
        Value::Fock(s) => Value::Fock(s.scale(z)),
        Value::Ket(t) => Value::Ket(t.scale(z)),
    })
}

/// Evaluated partition.
#[derive(Debug, Clone)]
pub enum PartitionSpec {
    ModeBipartition { left: Vec<usize>, right: Vec<usize> },
    Subspaces { v1: Vec<CVec>, v2: Vec<CVec> },
    SubspaceK(Vec<CVec>),
    ParticleLocalPair { o1: Mat, o2: Mat },
}

/// A scenario with every expression evaluated.
#[derive(Debug, Clone)]
pub struct Evaluated {
    pub catalog: ModeCatalog,
    /// Normalized state.
    pub state: StateVector,
    /// Norm of the state as written.
    pub norm: f64,
    pub partition: Option<PartitionSpec>,
    pub probes: BTreeMap<String, OperatorExpr>,
    pub generator: Option<OperatorExpr>,
}

fn single_particle_vector(e: &Expr, catalog: &ModeCatalog) -> Result<CVec> {
    match eval(e, catalog)? {
        Value::Ket(t) if t.particles() == 1 => {
            let v = t.as_vector();
            let n = v.norm();
            if n < crate::EPS_TOL {
                return Err(Error::ZeroState);
            }
            Ok(v / Complex64::new(n, 0.0))
        }
        v => Err(Error::Scenario(format!("expected a single-particle ket, got {}", v.kind()))),
    }
}

fn one_body_matrix(e: &Expr, catalog: &ModeCatalog) -> Result<Mat> {
    let op = match eval(e, catalog)? {
        Value::Operator(o) => o,
        v => return Err(Error::Scenario(format!("expected a one-body operator, got {}", v.kind()))),
    };
    let d = catalog.len();
    let mut m = Mat::zeros(d, d);
    for (mono, c) in op.terms() {
        match (mono.create.as_slice(), mono.annihilate.as_slice()) {
            ([i], [j]) => m[(*i, *j)] += *c,
            _ => return Err(Error::Scenario("particle-local operators must be one-body".into())),
        }
    }
    Ok(m)
}

impl Scenario {
    pub fn catalog(&self) -> Result<ModeCatalog> {
        ModeCatalog::new(self.modes.clone(), self.statistics)
    }

    pub fn evaluate(&self) -> Result<Evaluated> {
        let catalog = self.catalog()?;
        let raw = match eval(&self.state, &catalog)? {
            Value::Fock(s) => s,
            Value::Ket(t) => t.to_fock(&catalog)?,
            v => return Err(Error::Scenario(format!("state evaluates to a {}", v.kind()))),
        };
        let norm = raw.norm();
        let state = raw.normalized()?;
        if (norm - 1.0).abs() > crate::EPS_TOL {
            log::info!("scenario {}: state normalized by factor {}", self.id, 1.0 / norm);
        }
        let partition = match &self.partition {
            None => None,
            Some(PartitionDecl::Modes(l, r)) => {
                let left = l.iter().map(|m| catalog.index_of(m)).collect::<Result<Vec<_>>>()?;
                let right = r.iter().map(|m| catalog.index_of(m)).collect::<Result<Vec<_>>>()?;
                crate::algebra::SubalgebraSpec::mode_bipartition(&catalog, left.clone(), right.clone())?;
                Some(PartitionSpec::ModeBipartition { left, right })
            }
            Some(PartitionDecl::Subspaces(l, r)) => {
                let v1 = l.iter().map(|e| single_particle_vector(e, &catalog)).collect::<Result<Vec<_>>>()?;
                let v2 = r.iter().map(|e| single_particle_vector(e, &catalog)).collect::<Result<Vec<_>>>()?;
                crate::algebra::SubalgebraSpec::sector_local(v1.clone(), v2.clone())?;
                Some(PartitionSpec::Subspaces { v1, v2 })
            }
            Some(PartitionDecl::K(k)) => {
                let k = k.iter().map(|e| single_particle_vector(e, &catalog)).collect::<Result<Vec<_>>>()?;
                Some(PartitionSpec::SubspaceK(k))
            }
            Some(PartitionDecl::Particle(a, b)) => {
                let o1 = one_body_matrix(a, &catalog)?;
                let o2 = one_body_matrix(b, &catalog)?;
                crate::algebra::SubalgebraSpec::particle_local(o1.clone(), o2.clone())?;
                Some(PartitionSpec::ParticleLocalPair { o1, o2 })
            }
        };
        let mut probes = BTreeMap::new();
        for (name, e) in &self.probes {
            match eval(e, &catalog)? {
                Value::Operator(o) => {
                    probes.insert(name.clone(), o);
                }
                Value::Scalar(z) => {
                    probes.insert(name.clone(), OperatorExpr::scalar(&catalog, z));
                }
                v => return Err(Error::Scenario(format!("probe {name} evaluates to a {}", v.kind()))),
            }
        }
        let generator = match &self.generator {
            None => None,
            Some(e) => match eval(e, &catalog)? {
                Value::Operator(o) => Some(o),
                v => return Err(Error::Scenario(format!("generator evaluates to a {}", v.kind()))),
            },
        };
        Ok(Evaluated { catalog, state, norm, partition, probes, generator })
    }
}

impl Evaluated {
    /// The state as a first-quantized tensor.
    pub fn tensor(&self) -> Result<FirstQTensor> {
        FirstQTensor::from_fock(&self.state)
    }

    pub fn probe(&self, name: &str) -> Result<&OperatorExpr> {
        self.probes.get(name).ok_or_else(|| Error::Scenario(format!("no probe named `{name}`")))
    }

    fn mode_vectors(&self, modes: &[usize]) -> Vec<CVec> {
        modes.iter().map(|&m| basis_vector(self.catalog.len(), m)).collect()
    }

    /// `𝒦` for definition IV: the declared subspace, the first subspace
    /// of a splitting, or the left modes of a bipartition.
    pub fn k_basis(&self) -> Result<Vec<CVec>> {
        match &self.partition {
            Some(PartitionSpec::SubspaceK(k)) => Ok(k.clone()),
            Some(PartitionSpec::Subspaces { v1, .. }) => Ok(v1.clone()),
            Some(PartitionSpec::ModeBipartition { left, .. }) => Ok(self.mode_vectors(left)),
            _ => Err(Error::InvalidPartition("definition IV needs `K`, `subspaces` or `modes`".into())),
        }
    }

    pub fn classify(&self, definition: Definition) -> Result<Verdict> {
        match definition {
            Definition::I => is_separable_i(&self.tensor()?),
            Definition::II => is_separable_ii(&self.tensor()?),
            Definition::III => match &self.partition {
                Some(PartitionSpec::Subspaces { v1, v2 }) => is_separable_iii(&self.tensor()?, v1, v2),
                Some(PartitionSpec::ModeBipartition { left, right }) => {
                    is_separable_iii(&self.tensor()?, &self.mode_vectors(left), &self.mode_vectors(right))
                }
                _ => Err(Error::InvalidPartition("definition III needs `subspaces` or `modes`".into())),
            },
            Definition::IV => is_entangled_iv(&self.tensor()?, &self.k_basis()?),
            Definition::V => match &self.partition {
                Some(PartitionSpec::ModeBipartition { left, right }) => is_separable_v(&self.state, left, right),
                _ => Err(Error::InvalidPartition("definition V needs `modes`".into())),
            },
        }
    }

    pub fn gap(&self, a: &str, b: &str) -> Result<FactorizationReport> {
        factorization_gap(&self.state, self.probe(a)?, self.probe(b)?)
    }

    pub fn x1(&self) -> Result<ReducedX1> {
        reduced_x1(&self.tensor()?, &self.k_basis()?)
    }

    pub fn qfi(&self) -> Result<f64> {
        let g = self.generator.as_ref().ok_or_else(|| Error::Scenario("no generator declared".into()))?;
        qfi_phase(&self.state, g)
    }
}

/// Outcome of one expectation.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: impl Into<String>, actual: impl Into<String>, pass: bool) -> Self {
        Check { name: name.into(), expected: expected.into(), actual: actual.into(), pass }
    }

    /// Real value compared within `tol`.
    pub fn value(name: impl Into<String>, expected: f64, actual: f64, tol: f64) -> Self {
        Check::new(name, fmt_f64(expected), fmt_f64(actual), (expected - actual).abs() <= tol)
    }

    pub fn flag(name: impl Into<String>, expected: bool, actual: bool) -> Self {
        Check::new(name, expected.to_string(), actual.to_string(), expected == actual)
    }

    pub fn verdict(name: impl Into<String>, expected_separable: bool, verdict: &Result<Verdict>) -> Self {
        let expected = if expected_separable { "separable" } else { "entangled" };
        match verdict {
            Ok(v) => Check::new(name, expected, v.label(), v.separable == expected_separable),
            Err(e) => Check::new(name, expected, format!("error: {e}"), false),
        }
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im.abs() < 1e-12 {
        fmt_f64(z.re)
    } else {
        format!("{}{:+.6}i", fmt_f64(z.re), z.im)
    }
}

/// Splits `name(a,b)` into `name` and its arguments.
fn split_key(key: &str) -> (&str, Vec<&str>) {
    match key.find('(') {
        Some(i) if key.ends_with(')') => (&key[..i], key[i + 1..key.len() - 1].split(',').collect()),
        _ => (key, Vec::new()),
    }
}

impl Scenario {
    /// Evaluates the scenario and every `expect` line.
    pub fn check(&self) -> Result<Vec<Check>> {
        let ev = self.evaluate()?;
        Ok(self.expects.iter().map(|e| check_one(&ev, e)).collect())
    }
}

fn check_one(ev: &Evaluated, e: &Expectation) -> Check {
    let expected = e.value.to_string();
    let fail = |msg: String| Check::new(e.key.clone(), expected.clone(), msg, false);
    let number = || -> Result<Complex64> {
        match &e.value {
            ExpectValue::Value(x) => match eval(x, &ev.catalog)? {
                Value::Scalar(z) => Ok(z),
                v => Err(Error::Scenario(format!("expected value is a {}", v.kind()))),
            },
            ExpectValue::Word(w) => Err(Error::Scenario(format!("expected a number, got `{w}`"))),
        }
    };
    let word = || match &e.value {
        ExpectValue::Word(w) => Ok(w.clone()),
        _ => Err(Error::Scenario("expected a word".into())),
    };
    let compare = |actual: Result<Complex64>| -> Check {
        match (number(), actual) {
            (Ok(want), Ok(got)) => Check::new(e.key.clone(), fmt_complex(want), fmt_complex(got), (want - got).norm() <= EPS_TOL),
            (Err(err), _) | (_, Err(err)) => fail(format!("error: {err}")),
        }
    };
    let real = |x: Result<f64>| x.map(|v| Complex64::new(v, 0.0));
    let (name, args) = split_key(&e.key);
    match (name, args.as_slice()) {
        (n, []) if n.starts_with("verdict.") => {
            let def: Definition = match n["verdict.".len()..].parse() {
                Ok(d) => d,
                Err(err) => return fail(format!("error: {err}")),
            };
            match word() {
                Ok(w) if w == "separable" || w == "entangled" => Check::verdict(e.key.clone(), w == "separable", &ev.classify(def)),
                _ => fail("error: expected `separable` or `entangled`".into()),
            }
        }
        ("gap", [a, b]) => compare(ev.gap(a, b).map(|r| r.gap)),
        ("lhs", [a, b]) => compare(ev.gap(a, b).map(|r| r.lhs)),
        ("rhs", [a, b]) => compare(ev.gap(a, b).map(|r| r.rhs)),
        ("factorizes", [a, b]) => match (word(), ev.gap(a, b)) {
            (Ok(w), Ok(r)) if w == "true" || w == "false" => Check::flag(e.key.clone(), w == "true", r.factorizes),
            (_, Err(err)) => fail(format!("error: {err}")),
            _ => fail("error: expected `true` or `false`".into()),
        },
        ("mean", [a]) => compare(ev.probe(a).and_then(|p| p.expectation(&ev.state))),
        ("entropy", []) => compare(real(ev.x1().map(|x| x.entropy))),
        ("qfi", []) => compare(real(ev.qfi())),
        ("norm", []) => compare(Ok(Complex64::new(ev.norm, 0.0))),
        _ => fail(format!("error: unknown key `{}`", e.key)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BELL: &str = "\
scenario bell
statistics = bose
modes = (A,up) (A,dn) (B,up) (B,dn)
state = (adag(A,up)*adag(B,dn) + adag(A,dn)*adag(B,up))|vac>
partition = modes (A,up) (A,dn) | (B,up) (B,dn)
probe P1 = n(A,up)
probe P2 = n(B,dn)
expect gap(P1,P2) = 0.25 from \"lack of factorization\"
expect verdict.V = entangled
";

    #[test]
    fn parses_and_round_trips() {
        let s = parse_scenario(BELL).unwrap();
        assert_eq!(s.id, "bell");
        assert_eq!(s.modes[0], "A,up");
        assert_eq!(s.probes.len(), 2);
        let printed = s.to_string();
        assert_eq!(parse_scenario(&printed).unwrap(), s);
    }

    #[test]
    fn expectations_pass() {
        let checks = parse_scenario(BELL).unwrap().check().unwrap();
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
    }

    #[test]
    fn evaluates_fock_expression() {
        let s = parse_scenario(BELL).unwrap();
        let ev = s.evaluate().unwrap();
        assert!((ev.norm - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(ev.state.num_terms(), 2);
    }

    #[test]
    fn creation_product_on_vacuum() {
        let cat = ModeCatalog::new(["L,up", "L,dn", "R,up", "R,dn"], Statistics::Fermi).unwrap();
        let e = parse_expr("adag(L,up)*adag(R,dn)|vac>").unwrap();
        let Value::Fock(s) = eval(&e, &cat).unwrap() else { panic!() };
        let expected = StateVector::vacuum(&cat).apply_create(3).unwrap().apply_create(0).unwrap();
        assert!(s.distance_max(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn first_quantized_expression() {
        let cat = ModeCatalog::new(["L,up", "L,dn", "R,up", "R,dn"], Statistics::Bose).unwrap();
        let e = parse_expr("S[ ket(L,up) (x) ket(L,dn) ]").unwrap();
        let Value::Ket(t) = eval(&e, &cat).unwrap() else { panic!() };
        assert!((t.norm() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn scalars() {
        let cat = ModeCatalog::numbered(1, Statistics::Bose);
        let Value::Scalar(z) = eval(&parse_expr("(1 + 2i)/sqrt(4) - i").unwrap(), &cat).unwrap() else { panic!() };
        assert!((z - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn syntax_error_reports_column() {
        let err = parse_expr("adag(L,up").unwrap_err();
        let Error::Parse(p) = err else { panic!("{err:?}") };
        assert_eq!(p.line, 1);
        assert_eq!(p.column, 10);
        let text = "scenario x\nstatistics = bose\nmodes = 0 1\nstate = adag(0 * adag(1)|vac>\n";
        let Error::Parse(p) = parse_scenario(text).unwrap_err() else { panic!() };
        assert_eq!((p.line, p.column), (4, 16));
    }

    #[test]
    fn unknown_label_and_zero_state() {
        let text = "scenario x\nstatistics = bose\nmodes = 0 1\nstate = adag(7)|vac>\n";
        assert!(matches!(parse_scenario(text).unwrap().evaluate(), Err(Error::UnknownMode(_))));
        let text = "scenario x\nstatistics = fermi\nmodes = 0 1\nstate = adag(0)*adag(0)|vac>\n";
        assert!(matches!(parse_scenario(text).unwrap().evaluate(), Err(Error::ZeroState)));
    }

    #[test]
    fn tensor_token_versus_call() {
        let e = parse_expr("ket(x) (x) ket(y)").unwrap();
        assert!(matches!(e, Expr::Bin(BinOp::Tensor, ..)));
        assert_eq!(e.to_string(), "ket(x) (x) ket(y)");
    }

    #[test]
    fn printer_keeps_structure() {
        for text in ["-(1 + 2)*3", "2*(ket(0) (x) ket(1)) - ket(1) (x) ket(0)", "a(0)*(adag(0) + 1)|vac>", "1 - (2 - 3)", "1/(2*3)"] {
            let e = parse_expr(text).unwrap();
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e, "{text}");
        }
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn leaf() -> impl Strategy<Value = Expr> {
        let label = prop::sample::select(vec!["a", "b", "L,up", "R,dn"]).prop_map(String::from);
        let atom = prop::sample::select(vec![Atom::Create, Atom::Annihilate, Atom::Number, Atom::Ket]);
        prop_oneof![
            (0u32..1000).prop_map(|k| Expr::Num(k as f64 / 8.0)),
            (1u32..50).prop_map(|k| Expr::Imag(k as f64)),
            Just(Expr::Vac),
            (atom, label).prop_map(|(a, l)| Expr::Atom(a, l)),
        ]
    }

    fn expr() -> impl Strategy<Value = Expr> {
        leaf().prop_recursive(4, 24, 2, |inner| {
            let op = prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Tensor]);
            prop_oneof![
                (op, inner.clone(), inner.clone()).prop_map(|(o, l, r)| Expr::Bin(o, Box::new(l), Box::new(r))),
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                inner.clone().prop_map(|e| Expr::Sym(Box::new(e))),
                inner.clone().prop_map(|e| Expr::Asym(Box::new(e))),
                inner.prop_map(|e| Expr::Func(Func::Sqrt, Box::new(e))),
            ]
        })
    }

    proptest! {
        #[test]
        fn printed_expressions_parse_back(e in expr()) {
            let text = e.to_string();
            let back = parse_expr(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
            prop_assert_eq!(back, e, "{}", text);
        }
    }
}
