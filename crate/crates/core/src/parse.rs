//! Text formats: configuration descriptors, Laurent polynomials, tiles,
//! windows, vectors and ranges.
//!
//! ```text
//! desc := periodic lattice{ tuple* } values{ (tuple : int)* }
//!       | coset offset tuple gens{ tuple* } value int
//!       | mechanical weights tuple alpha real
//!       | finite [dim n] { (tuple : int)* }
//!       | sum [dim n] { (sign [k *] desc)* }
//!       | valuemap { (int : int)* [default int|id] } desc
//!       | shift tuple desc
//! real := int | int/int | sqrt(n) | quad(a,b,n,q)
//! ```
//! `#` starts a comment; a line `name ...` in a configuration file is metadata.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::config::{Configuration, ValueDefault, ValueMapping};
use crate::error::{Error, Result};
use crate::laurent::LaurentPolynomial;
use crate::lattice::{IntVector, Lattice};
use crate::quadratic::QuadraticReal;
use crate::tiling::ClusterTile;
use crate::window::Window;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
    DotDot,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            let (l, c) = (li + 1, i + 1);
            let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: l, column: c });
            if ch == '#' {
                break;
            } else if ch.is_whitespace() {
                i += 1;
            } else if ch.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v = s
                    .parse::<u64>()
                    .map_err(|_| syntax(l, c, format!("integer {s} is too large")))?;
                push(&mut out, Tok::Int(v));
            } else if ch.is_alphabetic() || ch == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                push(&mut out, Tok::Ident(chars[start..i].iter().collect()));
            } else if ch == '.' && chars.get(i + 1) == Some(&'.') {
                push(&mut out, Tok::DotDot);
                i += 2;
            } else if ch == '\u{2212}' {
                push(&mut out, Tok::Sym('-'));
                i += 1;
            } else if "(){}[],:*/+-^".contains(ch) {
                push(&mut out, Tok::Sym(ch));
                i += 1;
            } else {
                return Err(syntax(l, c, format!("unexpected character '{ch}'")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn err(&self, message: impl Into<String>) -> Error {
        match self.toks.get(self.pos).or(self.toks.last()) {
            Some(t) if self.pos < self.toks.len() => syntax(t.line, t.column, message),
            Some(t) => syntax(t.line, t.column + 1, format!("{} (at end of input)", message.into())),
            None => syntax(1, 1, format!("{} (empty input)", message.into())),
        }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.is_sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == name)
    }

    fn eat_ident(&mut self, name: &str) -> bool {
        if self.is_ident(name) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<()> {
        if self.eat_ident(name) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{name}'")))
        }
    }

    fn uint(&mut self) -> Result<u64> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err("expected a nonnegative integer")),
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = if self.eat_sym('-') {
            true
        } else {
            self.eat_sym('+');
            false
        };
        let save = self.pos;
        let v = self.uint()?;
        let v = i128::from(v);
        let v = if neg { -v } else { v };
        i64::try_from(v).map_err(|_| {
            self.toks
                .get(save)
                .map(|t| syntax(t.line, t.column, "integer out of range"))
                .expect("token exists")
        })
    }

    fn tuple(&mut self) -> Result<IntVector> {
        self.expect_sym('(')?;
        let mut v = vec![self.int()?];
        while self.eat_sym(',') {
            v.push(self.int()?);
        }
        self.expect_sym(')')?;
        Ok(IntVector(v))
    }

    fn tuples_in_braces(&mut self) -> Result<Vec<IntVector>> {
        self.expect_sym('{')?;
        let mut out = Vec::new();
        while !self.eat_sym('}') {
            out.push(self.tuple()?);
            self.eat_sym(',');
        }
        Ok(out)
    }

    fn same_dim(&self, vs: &[IntVector]) -> Result<usize> {
        let d = vs.first().map(|v| v.dim()).ok_or_else(|| self.err("expected at least one tuple"))?;
        for v in vs {
            Error::check_dim(d, v.dim())?;
        }
        Ok(d)
    }

    fn real(&mut self) -> Result<QuadraticReal> {
        if self.eat_ident("sqrt") {
            self.expect_sym('(')?;
            let n = self.uint()?;
            self.expect_sym(')')?;
            return QuadraticReal::sqrt(n);
        }
        if self.eat_ident("quad") {
            self.expect_sym('(')?;
            let a = self.int()?;
            self.expect_sym(',')?;
            let b = self.int()?;
            self.expect_sym(',')?;
            let n = self.uint()?;
            self.expect_sym(',')?;
            let q = self.int()?;
            self.expect_sym(')')?;
            return QuadraticReal::new(a, b, n, q);
        }
        let p = self.int()?;
        let q = if self.eat_sym('/') { self.int()? } else { 1 };
        QuadraticReal::rational(p, q)
    }

    fn desc(&mut self) -> Result<Configuration> {
        let Some(Tok::Ident(word)) = self.peek().cloned() else {
            return Err(self.err("expected a configuration descriptor"));
        };
        self.pos += 1;
        match word.as_str() {
            "periodic" => {
                self.expect_ident("lattice")?;
                let gens = self.tuples_in_braces()?;
                let dim = self.same_dim(&gens)?;
                let lattice = Lattice::new(dim, gens)?;
                self.expect_ident("values")?;
                self.expect_sym('{')?;
                let mut values = Vec::new();
                while !self.eat_sym('}') {
                    let k = self.tuple()?;
                    self.expect_sym(':')?;
                    values.push((k, self.int()?));
                    self.eat_sym(',');
                }
                Configuration::periodic(lattice, values)
            }
            "coset" => {
                self.expect_ident("offset")?;
                let offset = self.tuple()?;
                self.expect_ident("gens")?;
                let gens = self.tuples_in_braces()?;
                for g in &gens {
                    Error::check_dim(offset.dim(), g.dim())?;
                }
                let lattice = Lattice::span(offset.dim(), gens)?;
                self.expect_ident("value")?;
                let value = self.int()?;
                Configuration::coset(offset, lattice, value)
            }
            "mechanical" => {
                self.expect_ident("weights")?;
                let weights = self.tuple()?;
                self.expect_ident("alpha")?;
                Ok(Configuration::mechanical(weights, self.real()?))
            }
            "finite" => {
                let declared = if self.eat_ident("dim") {
                    Some(self.uint()? as usize)
                } else {
                    None
                };
                self.expect_sym('{')?;
                let mut values = Vec::new();
                while !self.eat_sym('}') {
                    let k = self.tuple()?;
                    self.expect_sym(':')?;
                    values.push((k, self.int()?));
                    self.eat_sym(',');
                }
                let dim = match (declared, values.first()) {
                    (Some(d), _) => d,
                    (None, Some((k, _))) => k.dim(),
                    (None, None) => return Err(self.err("empty finite configuration needs 'dim'")),
                };
                Configuration::finite(dim, values)
            }
            "sum" => {
                let declared = if self.eat_ident("dim") {
                    Some(self.uint()? as usize)
                } else {
                    None
                };
                self.expect_sym('{')?;
                let mut terms = Vec::new();
                while !self.eat_sym('}') {
                    let sign = if self.eat_sym('-') {
                        -1
                    } else if self.eat_sym('+') {
                        1
                    } else {
                        return Err(self.err("expected '+' or '-' before a sum term"));
                    };
                    let k = if matches!(self.peek(), Some(Tok::Int(_))) {
                        let k = self.uint()?;
                        self.expect_sym('*')?;
                        i64::try_from(k).map_err(|_| self.err("coefficient out of range"))?
                    } else {
                        1
                    };
                    terms.push((sign * k, self.desc()?));
                }
                let dim = match (declared, terms.first()) {
                    (Some(d), _) => d,
                    (None, Some((_, t))) => t.dim(),
                    (None, None) => return Err(self.err("empty sum needs 'dim'")),
                };
                Configuration::sum(dim, terms)
            }
            "valuemap" => {
                self.expect_sym('{')?;
                let mut table = Vec::new();
                let mut default = ValueDefault::Identity;
                while !self.eat_sym('}') {
                    if self.eat_ident("default") {
                        default = if self.eat_ident("id") {
                            ValueDefault::Identity
                        } else {
                            ValueDefault::Constant(self.int()?)
                        };
                        continue;
                    }
                    let a = self.int()?;
                    self.expect_sym(':')?;
                    table.push((a, self.int()?));
                    self.eat_sym(',');
                }
                let inner = self.desc()?;
                Ok(Configuration::value_map(inner, ValueMapping::new(table, default)))
            }
            "shift" => {
                let offset = self.tuple()?;
                let inner = self.desc()?;
                Configuration::shift(inner, offset)
            }
            other => {
                self.pos -= 1;
                Err(self.err(format!("unknown descriptor '{other}'")))
            }
        }
    }
}

/// A parsed configuration file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigFile {
    pub name: Option<String>,
    pub config: Configuration,
}

impl ConfigFile {
    pub fn dim(&self) -> usize {
        self.config.dim()
    }
}

pub fn parse_config(text: &str) -> Result<Configuration> {
    Ok(parse_config_file(text)?.config)
}

pub fn parse_config_file(text: &str) -> Result<ConfigFile> {
    let mut name = None;
    let mut body = String::new();
    for line in text.lines() {
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix("name") {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                name = Some(rest.trim().to_string());
                body.push('\n');
                continue;
            }
        }
        body.push_str(line);
        body.push('\n');
    }
    let mut p = Parser::new(&body)?;
    let config = p.desc()?;
    p.finish()?;
    Ok(ConfigFile { name, config })
}

fn write_tuple(out: &mut String, v: &IntVector) {
    let _ = write!(out, "{v}");
}

/// Canonical one-line text of a configuration; `parse_config` inverts it.
pub fn print_config(c: &Configuration) -> String {
    let mut out = String::new();
    print_into(&mut out, c);
    out
}

fn print_into(out: &mut String, c: &Configuration) {
    match c {
        Configuration::Periodic { lattice, values } => {
            out.push_str("periodic lattice{");
            for b in lattice.basis() {
                write_tuple(out, b);
            }
            out.push_str("} values{");
            for (i, (k, v)) in values.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{k}:{v}");
            }
            out.push('}');
        }
        Configuration::CosetIndicator {
            offset,
            lattice,
            value,
        } => {
            let _ = write!(out, "coset offset{offset} gens{{");
            for b in lattice.basis() {
                write_tuple(out, b);
            }
            let _ = write!(out, "}} value {value}");
        }
        Configuration::Mechanical { weights, alpha } => {
            let _ = write!(out, "mechanical weights{weights} alpha {alpha}");
        }
        Configuration::FiniteSupport { dim, values } => {
            let _ = write!(out, "finite dim {dim} {{");
            for (i, (k, v)) in values.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{k}:{v}");
            }
            out.push('}');
        }
        Configuration::Sum { dim, terms } => {
            let _ = write!(out, "sum dim {dim} {{");
            for (k, t) in terms {
                out.push(' ');
                out.push(if *k < 0 { '-' } else { '+' });
                if k.unsigned_abs() != 1 {
                    let _ = write!(out, "{}*", k.unsigned_abs());
                }
                print_into(out, t);
            }
            out.push_str(" }");
        }
        Configuration::ValueMap { inner, map } => {
            out.push_str("valuemap {");
            for (a, b) in &map.table {
                let _ = write!(out, " {a}:{b}");
            }
            match map.default {
                ValueDefault::Identity => out.push_str(" default id }"),
                ValueDefault::Constant(k) => {
                    let _ = write!(out, " default {k} }}");
                }
            }
            out.push(' ');
            print_into(out, inner);
        }
        Configuration::Shift { inner, offset } => {
            let _ = write!(out, "shift {offset} ");
            print_into(out, inner);
        }
    }
}

struct PolyParser {
    p: Parser,
    dim: usize,
}

impl PolyParser {
    fn monomial(&self, e: Vec<i64>) -> LaurentPolynomial {
        LaurentPolynomial::monomial(IntVector(e), BigRational::one())
    }

    fn var(&self, i: usize, k: i64) -> Result<LaurentPolynomial> {
        if i >= self.dim {
            return Err(self.p.err(format!("variable needs dimension {}", i + 1)));
        }
        let mut e = vec![0; self.dim];
        e[i] = k;
        Ok(self.monomial(e))
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.p.eat_sym('(') {
            let k = self.p.int()?;
            self.p.expect_sym(')')?;
            Ok(k)
        } else {
            self.p.int()
        }
    }

    fn atom(&mut self) -> Result<LaurentPolynomial> {
        match self.p.peek().cloned() {
            Some(Tok::Int(_)) => {
                let n = self.p.uint()?;
                let mut q = BigRational::from_integer(BigInt::from(n));
                if self.p.eat_sym('/') {
                    let d = self.p.uint()?;
                    if d == 0 {
                        return Err(self.p.err("zero denominator"));
                    }
                    q /= BigRational::from_integer(BigInt::from(d));
                }
                Ok(LaurentPolynomial::monomial(IntVector::zero(self.dim), q))
            }
            Some(Tok::Sym('(')) => {
                self.p.next();
                let inner = self.sum()?;
                self.p.expect_sym(')')?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                self.p.next();
                let idx = match name.as_str() {
                    "x" => Some(0),
                    "y" => Some(1),
                    "z" => Some(2),
                    "X" => None,
                    other => {
                        self.p.pos -= 1;
                        return Err(self.p.err(format!("unknown variable '{other}'")));
                    }
                };
                match idx {
                    Some(i) => {
                        let k = if self.p.eat_sym('^') { self.exponent()? } else { 1 };
                        self.var(i, k)
                    }
                    None => {
                        self.p.expect_sym('^')?;
                        let e = self.p.tuple()?;
                        Error::check_dim(self.dim, e.dim())?;
                        Ok(self.monomial(e.0))
                    }
                }
            }
            _ => Err(self.p.err("expected a term")),
        }
    }

    fn power(&mut self) -> Result<LaurentPolynomial> {
        let is_group = self.p.is_sym('(');
        let base = self.atom()?;
        if is_group && self.p.eat_sym('^') {
            let k = self.p.uint()?;
            let k = u32::try_from(k).map_err(|_| self.p.err("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn product(&mut self) -> Result<LaurentPolynomial> {
        let mut acc = self.power()?;
        loop {
            if self.p.eat_sym('*') || matches!(self.p.peek(), Some(Tok::Sym('(')) | Some(Tok::Ident(_))) {
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn sum(&mut self) -> Result<LaurentPolynomial> {
        let mut acc = LaurentPolynomial::zero(self.dim);
        let mut first = true;
        loop {
            let neg = self.p.eat_sym('-');
            if !neg && !self.p.eat_sym('+') && !first {
                return Ok(acc);
            }
            first = false;
            let t = self.product()?;
            acc = if neg { &acc - &t } else { &acc + &t };
            if self.p.at_end() || self.p.is_sym(')') {
                return Ok(acc);
            }
        }
    }
}

fn infer_poly_dim(toks: &[Token]) -> Result<usize> {
    let mut dim = 0;
    let mut tuple_dim: Option<usize> = None;
    for (i, t) in toks.iter().enumerate() {
        match &t.tok {
            Tok::Ident(s) if s == "x" => dim = dim.max(1),
            Tok::Ident(s) if s == "y" => dim = dim.max(2),
            Tok::Ident(s) if s == "z" => dim = dim.max(3),
            Tok::Ident(s) if s == "X" => {
                let n = 1 + toks[i..]
                    .iter()
                    .take_while(|t| t.tok != Tok::Sym(')'))
                    .filter(|t| t.tok == Tok::Sym(','))
                    .count();
                match tuple_dim {
                    Some(d) if d != n => return Err(Error::DimensionMismatch { expected: d, found: n }),
                    _ => tuple_dim = Some(n),
                }
            }
            _ => {}
        }
    }
    Ok(match tuple_dim {
        Some(d) => {
            if dim > d {
                return Err(Error::DimensionMismatch { expected: d, found: dim });
            }
            d
        }
        None => dim.max(1),
    })
}

/// Parses a Laurent polynomial such as `x*y - x - y + 1`, `X^(1,-1) - 1` or
/// `(x-1)^2*(3/2 + y^-1)`. With `dim = None` the dimension is inferred.
pub fn parse_polynomial(text: &str, dim: Option<usize>) -> Result<LaurentPolynomial> {
    let p = Parser::new(text)?;
    let inferred = infer_poly_dim(&p.toks)?;
    let dim = match dim {
        Some(d) => {
            if inferred > d {
                return Err(Error::DimensionMismatch { expected: d, found: inferred });
            }
            d
        }
        None => inferred,
    };
    let mut pp = PolyParser { p, dim };
    if pp.p.at_end() {
        return Err(pp.p.err("expected a polynomial"));
    }
    let f = pp.sum()?;
    pp.p.finish()?;
    Ok(f)
}

/// `tile { (0,0) (1,0) (0,1) }`; the `tile` keyword is optional.
pub fn parse_tile(text: &str) -> Result<ClusterTile> {
    let mut p = Parser::new(text)?;
    p.eat_ident("tile");
    let cells = p.tuples_in_braces()?;
    p.finish()?;
    if cells.is_empty() {
        return Err(Error::EmptyTile);
    }
    ClusterTile::new(cells)
}

pub fn parse_vector(text: &str) -> Result<IntVector> {
    let mut p = Parser::new(text)?;
    let v = p.tuple()?;
    p.finish()?;
    Ok(v)
}

/// Tuples separated by whitespace or commas, e.g. `(1,0) (0,1)`.
pub fn parse_vectors(text: &str) -> Result<Vec<IntVector>> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    while !p.at_end() {
        out.push(p.tuple()?);
        p.eat_sym(',');
    }
    Ok(out)
}

/// `MxN[xK]` (origin-anchored box), `S` (cube of side `S`) or `(lo)..(hi)`.
pub fn parse_window(text: &str, dim: usize) -> Result<Window> {
    let t = text.trim();
    if t.starts_with('(') {
        let mut p = Parser::new(t)?;
        let lo = p.tuple()?;
        if p.next() != Some(Tok::DotDot) {
            return Err(syntax(1, 1, "expected '(lo)..(hi)'"));
        }
        let hi = p.tuple()?;
        p.finish()?;
        Error::check_dim(dim, lo.dim())?;
        Error::check_dim(dim, hi.dim())?;
        return Window::new_box(lo, hi);
    }
    let sizes: Vec<u64> = t
        .split(['x', 'X'])
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| syntax(1, 1, format!("bad window '{text}'")))
        })
        .collect::<Result<_>>()?;
    let sizes = if sizes.len() == 1 { vec![sizes[0]; dim] } else { sizes };
    Error::check_dim(dim, sizes.len())?;
    Window::rect(&sizes)
}

/// `a..b` (inclusive) or a single value.
pub fn parse_range(text: &str) -> Result<RangeInclusive<u64>> {
    let bad = || syntax(1, 1, format!("bad range '{text}'"));
    let t = text.trim();
    match t.split_once("..") {
        Some((a, b)) => {
            let a = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            Ok(a..=b)
        }
        None => {
            let a = t.parse().map_err(|_| bad())?;
            Ok(a..=a)
        }
    }
}

/// A signed rational such as `-3/2`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let mut p = Parser::new(text)?;
    let neg = p.eat_sym('-');
    if !neg {
        p.eat_sym('+');
    }
    let n = p.uint()?;
    let d = if p.eat_sym('/') { p.uint()? } else { 1 };
    p.finish()?;
    if d == 0 {
        return Err(syntax(1, 1, "zero denominator"));
    }
    let q = BigRational::new(BigInt::from(n), BigInt::from(d));
    Ok(if neg { -q } else { q })
}
