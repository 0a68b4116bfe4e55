//! Exact coefficient fields: prime fields `F_p` (odd `p`), the rationals and
//! the Gaussian rationals `Q(i)`.
//!
//! Elements are plain values; all arithmetic goes through the field object so
//! that the prime field can carry its modulus at runtime.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A commutative field with exact arithmetic.
pub trait Field: Clone + Debug + PartialEq + Eq + Hash + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// `acc += a * b`, the inner step of every elimination loop.
    fn add_mul_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        *acc = self.add(acc, &self.mul(a, b));
    }

    /// A square root of -1, when the field configuration provides one.
    fn imaginary_unit(&self) -> Option<Self::Elem>;

    /// Text form used by the polynomial printer. Prime-field elements are
    /// printed with their balanced representative.
    fn format(&self, a: &Self::Elem) -> String;

    /// Parses an integer or `a/b` literal.
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    fn config(&self) -> FieldConfig;
}

/// Serializable description of a field, as it appears in ring JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldConfig {
    PrimeField {
        p: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        i: Option<u64>,
    },
    Rationals,
    GaussianRationals,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig::PrimeField { p: 13, i: Some(5) }
    }
}

impl FieldConfig {
    /// Parses the command-line form `fp:13`, `fp:13:5`, `q` or `qi`.
    pub fn parse_flag(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(FieldConfig::Rationals);
        }
        if s.eq_ignore_ascii_case("qi") {
            return Ok(FieldConfig::GaussianRationals);
        }
        let rest = s
            .strip_prefix("fp:")
            .ok_or_else(|| Error::Config(format!("unknown field `{s}` (expected fp:<p>, q or qi)")))?;
        let mut parts = rest.split(':');
        let p: u64 = parts
            .next()
            .unwrap_or("")
            .parse()
            .map_err(|_| Error::Config(format!("bad prime in `{s}`")))?;
        let i = match parts.next() {
            Some(t) => Some(
                t.parse::<u64>()
                    .map_err(|_| Error::Config(format!("bad imaginary unit in `{s}`")))?,
            ),
            None => PrimeField::find_sqrt_minus_one(p),
        };
        let cfg = FieldConfig::PrimeField { p, i };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FieldConfig::PrimeField { p, i } => PrimeField::new(p, i).map(|_| ()),
            FieldConfig::Rationals | FieldConfig::GaussianRationals => Ok(()),
        }
    }

    pub fn has_imaginary_unit(&self) -> bool {
        matches!(self, FieldConfig::PrimeField { i: Some(_), .. } | FieldConfig::GaussianRationals)
    }

    pub fn flag(&self) -> String {
        match self {
            FieldConfig::PrimeField { p, i: Some(i) } => format!("fp:{p}:{i}"),
            FieldConfig::PrimeField { p, i: None } => format!("fp:{p}"),
            FieldConfig::Rationals => "q".to_string(),
            FieldConfig::GaussianRationals => "qi".to_string(),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `F_p` for an odd prime `p < 2^32`, optionally with a chosen `i`, `i^2 = -1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
    i: Option<u64>,
}

impl PrimeField {
    pub fn new(p: u64, i: Option<u64>) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::Config(format!("{p} is not an odd prime")));
        }
        if p >= 1 << 32 {
            return Err(Error::Config(format!("prime {p} exceeds 32 bits")));
        }
        if let Some(i) = i {
            let i = i % p;
            if (i * i + 1) % p != 0 {
                return Err(Error::Config(format!("{i}^2 + 1 is not 0 mod {p}")));
            }
        }
        Ok(PrimeField { p, i: i.map(|i| i % p) })
    }

    /// `F_13` with `i = 5`.
    pub fn f13() -> Self {
        PrimeField { p: 13, i: Some(5) }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Smallest square root of -1 mod `p`, if any.
    pub fn find_sqrt_minus_one(p: u64) -> Option<u64> {
        if p < 3 || p % 4 != 1 {
            return None;
        }
        (2..p).find(|&i| (i * i + 1) % p == 0)
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = r * a % self.p;
            }
            a = a * a % self.p;
            e >>= 1;
        }
        r
    }
}

impl Field for PrimeField {
    type Elem = u64;

    #[inline]
    fn zero(&self) -> u64 {
        0
    }
    #[inline]
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add_mul_assign(&self, acc: &mut u64, a: &u64, b: &u64) {
        *acc = (*acc + a * b) % self.p;
    }
    fn imaginary_unit(&self) -> Option<u64> {
        self.i
    }
    fn format(&self, a: &u64) -> String {
        if *a > self.p / 2 {
            format!("-{}", self.p - a)
        } else {
            a.to_string()
        }
    }
    fn parse(&self, s: &str) -> Result<u64> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad coefficient `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s, None),
        };
        let big: BigInt = num.parse().map_err(|_| bad())?;
        let p = BigInt::from(self.p);
        let reduce = |v: &BigInt| -> u64 {
            let r = ((v % &p) + &p) % &p;
            r.try_into().expect("residue fits in u64")
        };
        let n = reduce(&big);
        match den {
            None => Ok(n),
            Some(d) => {
                let d: BigInt = d.parse().map_err(|_| bad())?;
                let d = self
                    .inv(&reduce(&d))
                    .ok_or_else(|| Error::Parse(format!("division by zero in `{s}`")))?;
                Ok(self.mul(&n, &d))
            }
        }
    }
    fn config(&self) -> FieldConfig {
        FieldConfig::PrimeField { p: self.p, i: self.i }
    }
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn imaginary_unit(&self) -> Option<BigRational> {
        None
    }
    fn format(&self, a: &BigRational) -> String {
        format_rational(a)
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        parse_rational(s)
    }
    fn config(&self) -> FieldConfig {
        FieldConfig::Rationals
    }
}

fn format_rational(a: &BigRational) -> String {
    if a.is_integer() {
        a.numer().to_string()
    } else if a.is_negative() {
        format!("-{}/{}", a.numer().abs(), a.denom())
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad coefficient `{s}`"));
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().map_err(|_| bad())?;
            let d: BigInt = b.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("division by zero in `{s}`")));
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// `Q(i)`; elements are pairs `(re, im)` meaning `re + im*i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussianRationals;

pub type Gaussian = (BigRational, BigRational);

impl Field for GaussianRationals {
    type Elem = Gaussian;

    fn zero(&self) -> Gaussian {
        (BigRational::zero(), BigRational::zero())
    }
    fn one(&self) -> Gaussian {
        (BigRational::one(), BigRational::zero())
    }
    fn from_i64(&self, v: i64) -> Gaussian {
        (BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }
    fn add(&self, a: &Gaussian, b: &Gaussian) -> Gaussian {
        (&a.0 + &b.0, &a.1 + &b.1)
    }
    fn sub(&self, a: &Gaussian, b: &Gaussian) -> Gaussian {
        (&a.0 - &b.0, &a.1 - &b.1)
    }
    fn neg(&self, a: &Gaussian) -> Gaussian {
        (-&a.0, -&a.1)
    }
    fn mul(&self, a: &Gaussian, b: &Gaussian) -> Gaussian {
        (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
    }
    fn inv(&self, a: &Gaussian) -> Option<Gaussian> {
        let norm = &a.0 * &a.0 + &a.1 * &a.1;
        if norm.is_zero() {
            return None;
        }
        Some((&a.0 / &norm, -&a.1 / &norm))
    }
    fn is_zero(&self, a: &Gaussian) -> bool {
        a.0.is_zero() && a.1.is_zero()
    }
    fn imaginary_unit(&self) -> Option<Gaussian> {
        Some((BigRational::zero(), BigRational::one()))
    }
    /// `3/2`, `-i`, `2*i` or `(1 - 2*i)`.
    fn format(&self, a: &Gaussian) -> String {
        let im = match (a.1.is_one(), (-&a.1).is_one()) {
            (true, _) => "i".to_string(),
            (_, true) => "-i".to_string(),
            _ => format!("{}*i", format_rational(&a.1)),
        };
        match (a.0.is_zero(), a.1.is_zero()) {
            (_, true) => format_rational(&a.0),
            (true, false) => im,
            (false, false) => match im.strip_prefix('-') {
                Some(rest) => format!("({} - {rest})", format_rational(&a.0)),
                None => format!("({} + {im})", format_rational(&a.0)),
            },
        }
    }
    fn parse(&self, s: &str) -> Result<Gaussian> {
        let t = s.trim();
        let t = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(t).trim();
        let Some(body) = t.strip_suffix('i') else {
            return Ok((parse_rational(t)?, BigRational::zero()));
        };
        let body = body.trim_end().trim_end_matches('*').trim_end();
        let split = body.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').map(|(p, _)| p).last();
        let (re, im) = match split {
            Some(p) => (parse_rational(&body[..p])?, &body[p..]),
            None => (BigRational::zero(), body),
        };
        let im = im.replace(' ', "");
        let im = match im.as_str() {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other.trim_start_matches('+'))?,
        };
        Ok((re, im))
    }
    fn config(&self) -> FieldConfig {
        FieldConfig::GaussianRationals
    }
}
