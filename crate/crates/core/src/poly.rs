//! Sparse multivariate polynomials over an exact field.
//!
//! Monomials are ordered graded-lexicographically with the variables in
//! declaration order (`x > y > z`). Terms live in a `BTreeMap`, so iteration
//! runs from the smallest monomial to the leading one.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;

/// Exponent vector, one entry per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    /// Appends `extra` zero exponents.
    pub fn extended(&self, extra: usize) -> Monomial {
        let mut e = self.0.clone();
        e.extend(std::iter::repeat(0).take(extra));
        Monomial(e)
    }

    /// All monomials in `nvars` variables of total degree exactly `d`,
    /// ascending in graded-lex order.
    pub fn of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, left: u32, i: usize, n: usize) {
            if i + 1 == n {
                cur.push(left);
                out.push(Monomial(cur.clone()));
                cur.pop();
                return;
            }
            for e in 0..=left {
                cur.push(e);
                rec(out, cur, left - e, i + 1, n);
                cur.pop();
            }
        }
        if nvars == 0 {
            return if d == 0 { vec![Monomial(vec![])] } else { vec![] };
        }
        let mut out = Vec::new();
        rec(&mut out, &mut Vec::with_capacity(nvars), d, 0, nvars);
        out
    }

    /// All monomials of total degree `< bound`, ascending.
    pub fn below_degree(nvars: usize, bound: u32) -> Vec<Monomial> {
        (0..bound).flat_map(|d| Monomial::of_degree(nvars, d)).collect()
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<F: Field> {
    field: F,
    nvars: usize,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars);
        write!(f, "Polynomial({})", self.fmt_with(&names))
    }
}

/// `x, y, z` for up to three variables, `x1..xn` otherwise.
pub fn default_names(nvars: usize) -> Vec<String> {
    if nvars <= 3 {
        ["x", "y", "z"][..nvars].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

impl<F: Field> Polynomial<F> {
    pub fn zero(field: &F, nvars: usize) -> Self {
        Polynomial { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        Self::term(field, Monomial::one(nvars), c)
    }

    pub fn one(field: &F, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    pub fn from_i64(field: &F, nvars: usize, c: i64) -> Self {
        Self::constant(field, nvars, field.from_i64(c))
    }

    pub fn var(field: &F, nvars: usize, i: usize) -> Self {
        Self::term(field, Monomial::var(nvars, i), field.one())
    }

    pub fn term(field: &F, m: Monomial, c: F::Elem) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !field.is_zero(&c) {
            terms.insert(m, c);
        }
        Polynomial { field: field.clone(), nvars, terms }
    }

    pub fn monomial(field: &F, m: Monomial) -> Self {
        Self::term(field, m, field.one())
    }

    /// Sums like terms and drops zeros.
    pub fn from_terms(
        field: &F,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, F::Elem)>,
    ) -> Self {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            p.add_term(m, &c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: &F::Elem) {
        if self.field.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = self.field.add(v, c);
                if self.field.is_zero(v) {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &F::Elem)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    /// Lowest total degree of a term (the order at the origin).
    pub fn ord(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn is_constant(&self) -> bool {
        self.degree().map_or(true, |d| d == 0)
    }

    pub fn as_constant(&self) -> Option<F::Elem> {
        if self.is_constant() {
            Some(self.coeff(&Monomial::one(self.nvars)))
        } else {
            None
        }
    }

    /// `Some(m)` if the polynomial is `1 * m`.
    pub fn as_monomial(&self) -> Option<&Monomial> {
        match self.terms.iter().next() {
            Some((m, c)) if self.terms.len() == 1 && self.field.is_one(c) => Some(m),
            _ => None,
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(&self.field, self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, v)| (m.clone(), self.field.mul(v, c)))
            .collect();
        Polynomial { field: self.field.clone(), nvars: self.nvars, terms }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let terms = self.terms.iter().map(|(t, v)| (t.mul(m), v.clone())).collect();
        Polynomial { field: self.field.clone(), nvars: self.nvars, terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one(&self.field, self.nvars);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Drops every term of degree `>= bound`.
    pub fn truncated(&self, bound: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() < bound)
            .map(|(m, v)| (m.clone(), v.clone()))
            .collect();
        Polynomial { field: self.field.clone(), nvars: self.nvars, terms }
    }

    /// Embeds into a ring with `extra` new trailing variables.
    pub fn extended(&self, extra: usize) -> Self {
        let terms = self.terms.iter().map(|(m, v)| (m.extended(extra), v.clone())).collect();
        Polynomial { field: self.field.clone(), nvars: self.nvars + extra, terms }
    }

    /// Division with remainder by a single polynomial under graded-lex order.
    ///
    /// A single polynomial is a Gröbner basis of the ideal it generates, so
    /// the remainder is a normal form: it is zero iff `divisor | self`, and no
    /// remainder term is divisible by the leading monomial of `divisor`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let (lm, lc) = divisor.leading_term().expect("division by zero polynomial");
        let lm = lm.clone();
        let lc_inv = self.field.inv(lc).expect("nonzero leading coefficient");
        let mut quotient = Self::zero(&self.field, self.nvars);
        let mut remainder = Self::zero(&self.field, self.nvars);
        let mut p = self.clone();
        while let Some((m, c)) = p.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if lm.divides(&m) {
                let q = lm.quotient_of(&m);
                let qc = self.field.mul(&c, &lc_inv);
                let sub = divisor.mul_monomial(&q).scale(&qc);
                p = &p - &sub;
                quotient.add_term(q, &qc);
            } else {
                p.terms.remove(&m);
                remainder.add_term(m, &c);
            }
        }
        (quotient, remainder)
    }

    /// Exact quotient, or `None` when `divisor` does not divide.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut cs = self.field.format(c);
            let negative = cs.starts_with('-');
            if negative {
                cs.remove(0);
            }
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let is_unit = cs == "1";
            if m.degree() == 0 {
                out.push_str(&cs);
            } else if is_unit {
                out.push_str(&m.fmt_with(names));
            } else {
                out.push_str(&cs);
                out.push('*');
                out.push_str(&m.fmt_with(names));
            }
        }
        out
    }

    /// Parses text like `3*x^2*y - z + (z - i*x)^2` over the given variables.
    /// The identifier `i` denotes the field's square root of -1 unless it is
    /// itself a variable name.
    pub fn parse(field: &F, names: &[String], s: &str) -> Result<Self> {
        Parser::new(field, names, s)?.parse_all()
    }

    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| TermJson { exponents: m.exponents().to_vec(), coefficient: self.field.format(c) })
            .collect()
    }

    pub fn from_json_terms(field: &F, nvars: usize, terms: &[TermJson]) -> Result<Self> {
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            if t.exponents.len() != nvars {
                return Err(Error::Parse(format!(
                    "term has {} exponents, ring has {nvars} variables",
                    t.exponents.len()
                )));
            }
            out.push((Monomial::new(t.exponents.clone()), field.parse(&t.coefficient)?));
        }
        Ok(Self::from_terms(field, nvars, out))
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomials over different variable sets");
        debug_assert_eq!(self.field, other.field, "polynomials over different fields");
    }
}

/// JSON encoding of a single term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

impl<F: Field> Add for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: Self) -> Polynomial<F> {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl<F: Field> Sub for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: Self) -> Polynomial<F> {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            let n = self.field.neg(c);
            out.add_term(m.clone(), &n);
        }
        out
    }
}

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), self.field.neg(c))).collect();
        Polynomial { field: self.field.clone(), nvars: self.nvars, terms }
    }
}

impl<F: Field> Mul for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Self) -> Polynomial<F> {
        self.check_compatible(rhs);
        let mut out = Polynomial::zero(&self.field, self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.mul(b), &self.field.mul(ca, cb));
            }
        }
        out
    }
}

macro_rules! forward_owned_ops {
    ($($tr:ident :: $m:ident),*) => {$(
        impl<F: Field> $tr for Polynomial<F> {
            type Output = Polynomial<F>;
            fn $m(self, rhs: Self) -> Polynomial<F> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned_ops!(Add::add, Sub::sub, Mul::mul);

impl<F: Field> Neg for Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        -&self
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

struct Parser<'a, F: Field> {
    field: &'a F,
    names: &'a [String],
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl<'a, F: Field> Parser<'a, F> {
    fn new(field: &'a F, names: &'a [String], src: &'a str) -> Result<Self> {
        let mut toks = Vec::new();
        let chars: Vec<char> = src.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push(Tok::Num(chars[start..i].iter().collect()));
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push(Tok::Ident(chars[start..i].iter().collect()));
            } else if "+-*/^()".contains(c) {
                toks.push(Tok::Op(c));
                i += 1;
            } else {
                return Err(Error::Parse(format!("unexpected `{c}` in `{src}`")));
            }
        }
        Ok(Parser { field, names, toks, pos: 0, src })
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} in `{}`", self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_all(mut self) -> Result<Polynomial<F>> {
        if self.toks.is_empty() {
            return Err(self.err("empty polynomial"));
        }
        let p = self.expr()?;
        if self.pos != self.toks.len() {
            return Err(self.err("trailing input"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Polynomial<F>> {
        let mut acc = if self.eat('-') {
            -self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial<F>> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let d = self.power()?;
                let c = d
                    .as_constant()
                    .and_then(|c| self.field.inv(&c))
                    .ok_or_else(|| self.err("division by a non-constant or zero"))?;
                acc = acc.scale(&c);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial<F>> {
        if self.eat('-') {
            return Ok(-self.power()?);
        }
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.parse().map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected exponent after `^`")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial<F>> {
        let nvars = self.names.len();
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Polynomial::constant(self.field, nvars, self.field.parse(&n)?))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                if let Some(i) = self.names.iter().position(|n| *n == id) {
                    Ok(Polynomial::var(self.field, nvars, i))
                } else if id == "i" {
                    let i = self.field.imaginary_unit().ok_or_else(|| {
                        Error::Config("the field has no square root of -1".to_string())
                    })?;
                    Ok(Polynomial::constant(self.field, nvars, i))
                } else {
                    Err(self.err(&format!("unknown variable `{id}`")))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let p = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("missing `)`"));
                }
                Ok(p)
            }
            _ => Err(self.err("expected a term")),
        }
    }
}
