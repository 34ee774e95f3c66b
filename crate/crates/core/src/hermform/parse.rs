//! Expression front end.
//!
//! ```text
//! input  := matrix | expr
//! matrix := '[' row (',' row)* ']'        row := '[' expr (',' expr)* ']'
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*    (division only by nonzero constants)
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := number | 'i' | variable | '(' expr ')'
//! ```
//!
//! Variables are `z1..zn`, their conjugates `zb1..zbn`, and `x1..x2n` for real
//! symbols. Numbers are integers or finite decimals, read exactly.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{BihermitianForm, HoloPoly, HoloPolyMatrix};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::scalar::{GaussianRational, Rational};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub(crate) enum Var {
    Z(usize),
    Zb(usize),
    X(usize),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum VarKind {
    Z,
    Zb,
    X,
}

impl Var {
    fn kind(self) -> VarKind {
        match self {
            Var::Z(_) => VarKind::Z,
            Var::Zb(_) => VarKind::Zb,
            Var::X(_) => VarKind::X,
        }
    }

    fn index(self) -> usize {
        match self {
            Var::Z(k) | Var::Zb(k) | Var::X(k) => k,
        }
    }
}

pub(crate) type Mono = BTreeMap<Var, u32>;

/// Polynomial in named variables, the parser's intermediate result.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub(crate) struct RawPoly {
    pub terms: BTreeMap<Mono, GaussianRational>,
}

impl RawPoly {
    fn constant(c: GaussianRational) -> Self {
        let mut p = RawPoly::default();
        p.push(Mono::new(), c);
        p
    }

    fn var(v: Var) -> Self {
        let mut m = Mono::new();
        m.insert(v, 1);
        let mut p = RawPoly::default();
        p.push(m, GaussianRational::one());
        p
    }

    fn push(&mut self, m: Mono, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(GaussianRational::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    fn add(mut self, o: RawPoly) -> Self {
        for (m, c) in o.terms {
            self.push(m, c);
        }
        self
    }

    fn neg(self) -> Self {
        RawPoly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }

    fn mul(&self, o: &RawPoly) -> Self {
        let mut out = RawPoly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let mut m = ma.clone();
                for (v, e) in mb {
                    *m.entry(*v).or_insert(0) += e;
                }
                out.push(m, ca * cb);
            }
        }
        out
    }

    fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => self.terms.get(&Mono::new()).cloned(),
            _ => None,
        }
    }

    pub fn max_index(&self, kind: VarKind) -> usize {
        self.terms
            .keys()
            .flat_map(|m| m.keys())
            .filter(|v| v.kind() == kind)
            .map(|v| v.index() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Exponent vector of `kind` variables, padded to length `n`.
    pub fn exponents(m: &Mono, kind: VarKind, n: usize) -> Vec<u32> {
        let mut e = vec![0; n];
        for (v, p) in m {
            if v.kind() == kind {
                e[v.index()] = *p;
            }
        }
        e
    }
}

/// A parsed scalar or bracketed matrix of polynomials.
#[derive(Clone, Debug)]
pub(crate) struct RawMatrix {
    pub rows: Vec<Vec<RawPoly>>,
}

impl RawMatrix {
    fn entries(&self) -> impl Iterator<Item = &RawPoly> {
        self.rows.iter().flatten()
    }

    pub fn max_index(&self, kind: VarKind) -> usize {
        self.entries().map(|p| p.max_index(kind)).max().unwrap_or(0)
    }

    pub fn uses(&self, kind: VarKind) -> bool {
        self.max_index(kind) > 0
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut p = 0;
    while p < bytes.len() {
        let c = bytes[p] as char;
        if c.is_ascii_whitespace() {
            p += 1;
        } else if c.is_ascii_digit() || (c == '.' && bytes.get(p + 1).is_some_and(u8::is_ascii_digit)) {
            let start = p;
            while p < bytes.len() && bytes[p].is_ascii_digit() {
                p += 1;
            }
            let mut frac = "";
            if p < bytes.len() && bytes[p] == b'.' {
                p += 1;
                let fs = p;
                while p < bytes.len() && bytes[p].is_ascii_digit() {
                    p += 1;
                }
                frac = &text[fs..p];
            }
            if p < bytes.len() && (bytes[p] == b'e' || bytes[p] == b'E') {
                let next = bytes.get(p + 1).copied();
                if next.is_some_and(|b| b.is_ascii_digit() || b == b'-' || b == b'+') {
                    let mut q = p + 1;
                    while q < bytes.len() && (bytes[q].is_ascii_alphanumeric() || bytes[q] == b'-' || bytes[q] == b'+') {
                        q += 1;
                    }
                    return Err(Error::NonRationalLiteral {
                        literal: text[start..q].to_string(),
                        position: start,
                    });
                }
            }
            let int_part = text[start..p].split('.').next().unwrap_or("");
            let digits = format!("{int_part}{frac}");
            let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| Error::Parse {
                position: start,
                message: "bad number".into(),
            })?;
            let denom = BigInt::from(10).pow(frac.len() as u32);
            out.push((Tok::Num(Rational::new(numer, denom)), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = p;
            while p < bytes.len() && (bytes[p].is_ascii_alphanumeric() || bytes[p] == b'_') {
                p += 1;
            }
            out.push((Tok::Ident(text[start..p].to_string()), start));
        } else if "+-*/^()[],".contains(c) {
            out.push((Tok::Sym(c), p));
            p += 1;
        } else {
            return Err(Error::Parse {
                position: p,
                message: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    allowed: &'a [VarKind],
    limit: Option<usize>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn error(&self, message: String) -> Error {
        Error::Parse {
            position: self.here(),
            message,
        }
    }

    fn input(&mut self) -> Result<RawMatrix> {
        let out = if self.peek() == Some(&Tok::Sym('[')) {
            self.matrix()?
        } else {
            RawMatrix {
                rows: vec![vec![self.expr()?]],
            }
        };
        if self.pos < self.toks.len() {
            return Err(self.error("unexpected trailing input".into()));
        }
        Ok(out)
    }

    fn matrix(&mut self) -> Result<RawMatrix> {
        self.expect('[')?;
        let mut rows = Vec::new();
        loop {
            let start = self.here();
            self.expect('[')?;
            let mut row = vec![self.expr()?];
            while self.eat(',') {
                row.push(self.expr()?);
            }
            self.expect(']')?;
            if let Some(first) = rows.first() {
                let first: &Vec<RawPoly> = first;
                if first.len() != row.len() {
                    return Err(Error::Parse {
                        position: start,
                        message: format!("row has {} entries, expected {}", row.len(), first.len()),
                    });
                }
            }
            rows.push(row);
            if !self.eat(',') {
                break;
            }
        }
        self.expect(']')?;
        Ok(RawMatrix { rows })
    }

    fn expr(&mut self) -> Result<RawPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(self.term()?);
            } else if self.eat('-') {
                acc = acc.add(self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RawPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let at = self.here();
                self.pos += 1;
                let d = self.unary()?;
                let c = d.as_constant().ok_or(Error::Parse {
                    position: at,
                    message: "division by a non-constant".into(),
                })?;
                let inv = c.inv().ok_or(Error::Parse {
                    position: at,
                    message: "division by zero".into(),
                })?;
                acc = acc.mul(&RawPoly::constant(inv));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RawPoly> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RawPoly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = match self.peek() {
            Some(Tok::Num(q)) if q.is_integer() => {
                let q = q.to_integer();
                u32::try_from(q).map_err(|_| self.error("exponent out of range".into()))?
            }
            _ => return Err(self.error("expected a nonnegative integer exponent".into())),
        };
        self.pos += 1;
        let mut acc = RawPoly::constant(GaussianRational::one());
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<RawPoly> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(RawPoly::constant(GaussianRational::from_real(q)))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "i" {
                    return Ok(RawPoly::constant(GaussianRational::i()));
                }
                let var = classify(&name, at)?;
                let index_ok = self.limit.is_none_or(|l| var.index() < l);
                if !self.allowed.contains(&var.kind()) || !index_ok {
                    return Err(Error::UnknownVariable { name, position: at });
                }
                Ok(RawPoly::var(var))
            }
            Some(t) => Err(self.error(format!("unexpected token {t:?}"))),
            None => Err(self.error("unexpected end of input".into())),
        }
    }
}

fn classify(name: &str, position: usize) -> Result<Var> {
    const TRANSCENDENTAL: [&str; 7] = ["pi", "e", "sqrt", "exp", "log", "inf", "nan"];
    if TRANSCENDENTAL.contains(&name.to_ascii_lowercase().as_str()) {
        return Err(Error::NonRationalLiteral {
            literal: name.to_string(),
            position,
        });
    }
    let indexed = |prefix: &str| -> Option<usize> {
        let rest = name.strip_prefix(prefix)?;
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || rest.starts_with('0') {
            return None;
        }
        rest.parse::<usize>().ok().map(|k| k - 1)
    };
    if let Some(k) = indexed("zb") {
        return Ok(Var::Zb(k));
    }
    if let Some(k) = indexed("z") {
        return Ok(Var::Z(k));
    }
    if let Some(k) = indexed("x") {
        return Ok(Var::X(k));
    }
    Err(Error::UnknownVariable {
        name: name.to_string(),
        position,
    })
}

pub(crate) fn parse_raw(text: &str, allowed: &[VarKind], limit: Option<usize>) -> Result<RawMatrix> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        allowed,
        limit,
    };
    p.input()
}

/// Result of [`parse_expression`].
#[derive(Clone, Debug, PartialEq)]
pub enum Parsed {
    Form(BihermitianForm),
    Holo(HoloPolyMatrix),
}

/// Parses a kernel (when any `zb` variable occurs, or when the input is constant)
/// or a holomorphic matrix (only `z` variables).
pub fn parse_expression(text: &str) -> Result<Parsed> {
    let raw = parse_raw(text, &[VarKind::Z, VarKind::Zb], None)?;
    if !raw.uses(VarKind::Zb) && raw.uses(VarKind::Z) {
        let n = raw.max_index(VarKind::Z).max(1);
        Ok(Parsed::Holo(raw_to_holo(&raw, n)?))
    } else {
        let n = raw.max_index(VarKind::Z).max(raw.max_index(VarKind::Zb)).max(1);
        Ok(Parsed::Form(raw_to_form(&raw, n)?))
    }
}

/// Parses a scalar or square-matrix kernel in `z`, `zb`. With `n` given, variables
/// beyond `n` are rejected; otherwise `n` is the largest index used (at least 1).
pub fn parse_form(text: &str, n: Option<usize>) -> Result<BihermitianForm> {
    let raw = parse_raw(text, &[VarKind::Z, VarKind::Zb], n)?;
    let n = n.unwrap_or_else(|| raw.max_index(VarKind::Z).max(raw.max_index(VarKind::Zb)).max(1));
    raw_to_form(&raw, n)
}

/// Parses a bracketed `s×r` matrix (or a single polynomial) in `z` only.
pub fn parse_holo_matrix(text: &str, n: Option<usize>) -> Result<HoloPolyMatrix> {
    let raw = parse_raw(text, &[VarKind::Z], n)?;
    let n = n.unwrap_or_else(|| raw.max_index(VarKind::Z).max(1));
    raw_to_holo(&raw, n)
}

fn raw_to_form(raw: &RawMatrix, n: usize) -> Result<BihermitianForm> {
    let r = raw.rows.len();
    if raw.rows.iter().any(|row| row.len() != r) {
        return Err(Error::ShapeMismatch(format!(
            "kernel matrix must be square, got {}x{}",
            r,
            raw.rows[0].len()
        )));
    }
    let mut f = BihermitianForm::zero(n, r);
    for (i, row) in raw.rows.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            for (m, c) in &p.terms {
                let alpha = MultiIndex::new(RawPoly::exponents(m, VarKind::Z, n));
                let beta = MultiIndex::new(RawPoly::exponents(m, VarKind::Zb, n));
                f.add_term(i, j, alpha, beta, c.clone());
            }
        }
    }
    Ok(f)
}

fn raw_to_holo(raw: &RawMatrix, n: usize) -> Result<HoloPolyMatrix> {
    let r = raw.rows[0].len();
    let rows = raw
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|p| {
                    let mut h = HoloPoly::zero(n);
                    for (m, c) in &p.terms {
                        h.add_term(MultiIndex::new(RawPoly::exponents(m, VarKind::Z, n)), c.clone());
                    }
                    h
                })
                .collect()
        })
        .collect();
    HoloPolyMatrix::from_rows(n, r, rows)
}

impl HoloPolyMatrix {
    /// Bracketed form `[[..], [..]]`, readable by [`parse_holo_matrix`].
    pub fn to_expression(&self) -> String {
        let rows: Vec<String> = (0..self.s())
            .map(|k| {
                let cells: Vec<String> = self.row(k).iter().map(|p| p.format_with("z")).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}
