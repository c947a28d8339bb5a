//! Exact arithmetic in real quadratic fields `Q(sqrt(D))`.
//!
//! Every dimension and index handled by the crate is an element `p + q*sqrt(D)`
//! with rational `p`, `q`. Odd-vertex weights are degree-four in general, so
//! they are carried as [`RadicalWeight`]s: the positive square root of an
//! element of the field, compared through its square.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Reduced fraction with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed radicands sqrt({0}) and sqrt({1})")]
    MixedRadicand(u64, u64),
    #[error("radicand {0} is not a squarefree integer >= 2")]
    BadRadicand(u64),
    #[error("cannot parse exact value `{0}`")]
    Parse(String),
    #[error("expected a positive value, got {0}")]
    NotPositive(String),
}

/// `p + q*sqrt(d)`.
///
/// When `q == 0` the radicand is irrelevant: rational values compare equal
/// across radicands and adopt the radicand of any irrational operand.
#[derive(Clone, Debug)]
pub struct QuadExt {
    p: Rational,
    q: Rational,
    d: u64,
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Splits `m` into `(k, r)` with `m = k^2 * r` and `r` squarefree.
pub fn squarefree_split(m: u64) -> (u64, u64) {
    let mut k = 1u64;
    let mut r = 1u64;
    let mut rest = m;
    let mut f = 2u64;
    while f * f <= rest {
        let mut e = 0;
        while rest % f == 0 {
            rest /= f;
            e += 1;
        }
        k *= f.pow(e / 2);
        if e % 2 == 1 {
            r *= f;
        }
        f += 1;
    }
    (k, r * rest)
}

fn is_squarefree(d: u64) -> bool {
    d >= 2 && squarefree_split(d).0 == 1
}

impl QuadExt {
    pub fn new(p: Rational, q: Rational, d: u64) -> Result<Self, FieldError> {
        if !is_squarefree(d) {
            return Err(FieldError::BadRadicand(d));
        }
        Ok(QuadExt { p, q, d })
    }

    /// `(a + b*sqrt(d)) / c` from machine integers. Panics on a bad radicand or `c == 0`.
    pub fn from_ints(a: i64, b: i64, c: i64, d: u64) -> Self {
        assert!(c != 0, "zero denominator");
        let den = BigInt::from(c);
        Self::new(
            Rational::new(BigInt::from(a), den.clone()),
            Rational::new(BigInt::from(b), den),
            d,
        )
        .expect("valid radicand")
    }

    pub fn rational(p: Rational, d: u64) -> Self {
        QuadExt {
            p,
            q: Rational::zero(),
            d,
        }
    }

    pub fn integer(n: i64, d: u64) -> Self {
        Self::rational(rat(n), d)
    }

    pub fn zero(d: u64) -> Self {
        Self::integer(0, d)
    }

    pub fn one(d: u64) -> Self {
        Self::integer(1, d)
    }

    /// `sqrt(m)` for a nonnegative integer `m`, reduced to a squarefree radicand.
    /// Returns the value together with its radicand.
    pub fn sqrt_of_int(m: u64) -> Self {
        let (k, r) = squarefree_split(m);
        if r == 1 {
            Self::integer(k as i64, 2)
        } else {
            QuadExt {
                p: Rational::zero(),
                q: rat(k as i64),
                d: r,
            }
        }
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// Re-tags a rational value with radicand `d`; irrational values are unchanged.
    pub fn with_radicand(mut self, d: u64) -> Self {
        if self.q.is_zero() {
            self.d = d;
        }
        self
    }

    fn common_radicand(&self, other: &Self) -> Result<u64, FieldError> {
        match (self.q.is_zero(), other.q.is_zero()) {
            (true, true) => Ok(if self.d == other.d { self.d } else { self.d.max(other.d) }),
            (true, false) => Ok(other.d),
            (false, true) => Ok(self.d),
            (false, false) if self.d == other.d => Ok(self.d),
            _ => Err(FieldError::MixedRadicand(self.d, other.d)),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        let d = self.common_radicand(other)?;
        Ok(QuadExt {
            p: &self.p + &other.p,
            q: &self.q + &other.q,
            d,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        let d = self.common_radicand(other)?;
        Ok(QuadExt {
            p: &self.p - &other.p,
            q: &self.q - &other.q,
            d,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        let d = self.common_radicand(other)?;
        let dd = rat(d as i64);
        Ok(QuadExt {
            p: &self.p * &other.p + &self.q * &other.q * dd,
            q: &self.p * &other.q + &self.q * &other.p,
            d,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        let d = self.common_radicand(other)?;
        let norm = other.norm_with(d);
        if norm.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let conj = QuadExt {
            p: other.p.clone() / &norm,
            q: -other.q.clone() / &norm,
            d,
        };
        self.checked_mul(&conj)
    }

    fn norm_with(&self, d: u64) -> Rational {
        &self.p * &self.p - &self.q * &self.q * rat(d as i64)
    }

    /// Field norm `p^2 - q^2 D`.
    pub fn norm(&self) -> Rational {
        self.norm_with(self.d)
    }

    pub fn conjugate(&self) -> Self {
        QuadExt {
            p: self.p.clone(),
            q: -self.q.clone(),
            d: self.d,
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        QuadExt {
            p: &self.p * rat(k),
            q: &self.q * rat(k),
            d: self.d,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QuadExt::one(self.d);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact sign, by comparing `p^2` with `q^2 D` when the signs of `p` and `q` differ.
    pub fn sign(&self) -> i32 {
        let sp = rational_sign(&self.p);
        let sq = rational_sign(&self.q);
        if sq == 0 {
            return sp;
        }
        if sp == 0 || sp == sq {
            return sq;
        }
        let lhs = &self.p * &self.p;
        let rhs = &self.q * &self.q * rat(self.d as i64);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => 0,
        }
    }

    /// Greatest integer `m` with `m <= self`.
    pub fn floor(&self) -> BigInt {
        // Write self = (a + b sqrt(D)) / c with c > 0, bracket b sqrt(D) by isqrt.
        let c = self.p.denom().lcm(self.q.denom());
        let a = self.p.numer() * (&c / self.p.denom());
        let b = self.q.numer() * (&c / self.q.denom());
        let s = (&b * &b * BigInt::from(self.d)).sqrt();
        let approx = if b.is_negative() { -&s - 1 } else { s };
        let mut m = (a + approx).div_floor(&c);
        while self.cmp_int(&m) == Ordering::Less {
            m -= 1;
        }
        while self.cmp_int(&(&m + 1)) != Ordering::Less {
            m += 1;
        }
        m
    }

    fn cmp_int(&self, m: &BigInt) -> Ordering {
        let diff = QuadExt {
            p: &self.p - Rational::from_integer(m.clone()),
            q: self.q.clone(),
            d: self.d,
        };
        diff.sign().cmp(&0)
    }

    pub fn to_f64(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        p + q * (self.d as f64).sqrt()
    }

    /// Human-oriented rendering such as `(5+√13)/2`.
    pub fn pretty(&self) -> String {
        if self.q.is_zero() {
            return self.p.to_string();
        }
        let c = self.p.denom().lcm(self.q.denom());
        let a = self.p.numer() * (&c / self.p.denom());
        let b = self.q.numer() * (&c / self.q.denom());
        let root = if b.abs().is_one() {
            format!("√{}", self.d)
        } else {
            format!("{}√{}", b.abs(), self.d)
        };
        let body = if a.is_zero() {
            if b.is_negative() {
                format!("-{root}")
            } else {
                root
            }
        } else {
            format!("{}{}{}", a, if b.is_negative() { "-" } else { "+" }, root)
        };
        if c.is_one() {
            body
        } else {
            format!("({body})/{c}")
        }
    }
}

fn rational_sign(r: &Rational) -> i32 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl PartialEq for QuadExt {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.q == other.q && (self.q.is_zero() || self.d == other.d)
    }
}

impl Eq for QuadExt {}

impl Hash for QuadExt {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.q.hash(state);
        if !self.q.is_zero() {
            self.d.hash(state);
        }
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let diff = self.checked_sub(other).ok()?;
        Some(diff.sign().cmp(&0))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a QuadExt> for &'a QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &'a QuadExt) -> QuadExt {
                self.$checked(rhs).expect("quadratic field arithmetic")
            }
        }
        impl $tr for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                (&self).$checked(&rhs).expect("quadratic field arithmetic")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            p: -self.p,
            q: -self.q,
            d: self.d,
        }
    }
}

impl fmt::Display for QuadExt {
    /// Canonical exact syntax: `p`, or `p+q*sqrt(D)` with `p` omitted when zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return write!(f, "{}", self.p);
        }
        if !self.p.is_zero() {
            write!(f, "{}", self.p)?;
            if self.q.is_positive() {
                write!(f, "+")?;
            }
        }
        write!(f, "{}*sqrt({})", self.q, self.d)
    }
}

impl FromStr for QuadExt {
    type Err = FieldError;

    /// Accepts sums of terms `r` and `r*sqrt(D)` (also `sqrt(D)`, `-sqrt(D)`),
    /// optionally wrapped as `(expr)/k`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || FieldError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        if let Some(rest) = compact.strip_prefix('(') {
            let close = rest.rfind(')').ok_or_else(err)?;
            let inner: QuadExt = rest[..close].parse()?;
            let tail = &rest[close + 1..];
            if tail.is_empty() {
                return Ok(inner);
            }
            let den = tail.strip_prefix('/').ok_or_else(err)?;
            let den: Rational = parse_rational(den).ok_or_else(err)?;
            if den.is_zero() {
                return Err(FieldError::DivisionByZero);
            }
            let d = inner.d;
            return inner.checked_div(&QuadExt::rational(den, d));
        }

        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'(' {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);

        let mut p = Rational::zero();
        let mut q = Rational::zero();
        let mut d: Option<u64> = None;
        for term in terms {
            let (neg, body) = match term.as_bytes()[0] {
                b'+' => (false, &term[1..]),
                b'-' => (true, &term[1..]),
                _ => (false, term),
            };
            if let Some(pos) = body.find("sqrt(") {
                let coef = &body[..pos];
                let coef = if coef.is_empty() {
                    Rational::one()
                } else {
                    let c = coef.strip_suffix('*').ok_or_else(err)?;
                    parse_rational(c).ok_or_else(err)?
                };
                let rad = body[pos + 5..].strip_suffix(')').ok_or_else(err)?;
                let rad: u64 = rad.parse().map_err(|_| err())?;
                let (k, r) = squarefree_split(rad);
                let coef = coef * rat(k as i64);
                let coef = if neg { -coef } else { coef };
                if r == 1 {
                    p += coef;
                    continue;
                }
                match d {
                    Some(prev) if prev != r => return Err(FieldError::MixedRadicand(prev, r)),
                    _ => d = Some(r),
                }
                q += coef;
            } else {
                let v = parse_rational(body).ok_or_else(err)?;
                p += if neg { -v } else { v };
            }
        }
        let d = d.unwrap_or(2);
        Ok(QuadExt { p, q, d })
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Positive square root of a positive element of `Q(sqrt(D))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RadicalWeight {
    square: QuadExt,
}

impl RadicalWeight {
    pub fn new(square: QuadExt) -> Result<Self, FieldError> {
        if square.sign() <= 0 {
            return Err(FieldError::NotPositive(square.to_string()));
        }
        Ok(RadicalWeight { square })
    }

    pub fn square(&self) -> &QuadExt {
        &self.square
    }

    pub fn to_f64(&self) -> f64 {
        self.square.to_f64().sqrt()
    }
}

impl PartialOrd for RadicalWeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.square.partial_cmp(&other.square)
    }
}

impl fmt::Display for RadicalWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sqrt[{}]", self.square)
    }
}

/// Whether `s` may be the index of a subfactor: `s >= 4`, or `s = 4cos^2(pi/k)`.
///
/// Below 4 only `1, 2, 3` are rational; the irrational values `4cos^2(pi/k)`
/// occur for `k = 5, 10` (radicand 5), `k = 8` (radicand 2), `k = 12` (radicand 3).
pub fn jones_admissible(s: &QuadExt) -> Result<bool, FieldError> {
    if s.sign() <= 0 {
        return Err(FieldError::NotPositive(s.to_string()));
    }
    if s >= &QuadExt::integer(4, s.radicand()) {
        return Ok(true);
    }
    if s.is_rational() {
        return Ok(s.p().is_integer() && (1..=3).contains(&s.p().to_integer().to_i64().unwrap_or(0)));
    }
    let table: &[(i64, i64, i64)] = match s.radicand() {
        5 => &[(3, 1, 2), (5, 1, 2)],
        2 => &[(2, 1, 1)],
        3 => &[(2, 1, 1)],
        _ => &[],
    };
    Ok(table
        .iter()
        .any(|&(a, b, c)| *s == QuadExt::from_ints(a, b, c, s.radicand())))
}
