//! Exact rationals and Laurent polynomials in one formal parameter `a`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return Ok(Rational(self.recip()?.0.pow(-k as i32)));
        }
        Ok(Rational(self.0.pow(k as i32)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Returns the value as an `i64` when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if !self.0.is_integer() {
            return None;
        }
        i64::try_from(self.0.numer()).ok()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) => t.parse().map_err(D::Error::custom),
            Raw::Int(v) => Ok(Rational::from_int(v)),
        }
    }
}

macro_rules! rational_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
    };
}

rational_binop!(Add, add, +);
rational_binop!(Sub, sub, -);
rational_binop!(Mul, mul, *);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl std::ops::Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(&self.0 / &rhs.0)
    }
}

/// A Laurent polynomial in `a` with rational coefficients.
///
/// Terms are kept in a sorted map from exponent to coefficient; zero
/// coefficients are never stored, so structural equality is equality of
/// polynomials.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentCoeff {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentCoeff {
    pub fn zero() -> Self {
        LaurentCoeff::default()
    }

    pub fn one() -> Self {
        LaurentCoeff::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        LaurentCoeff::monomial(c, 0)
    }

    pub fn from_int(v: i64) -> Self {
        LaurentCoeff::constant(Rational::from_int(v))
    }

    /// `c * a^k`.
    pub fn monomial(c: Rational, k: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        LaurentCoeff { terms }
    }

    /// The parameter `a` itself.
    pub fn a() -> Self {
        LaurentCoeff::monomial(Rational::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(Rational::is_one)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: i64) -> Rational {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    /// The constant value if there is no `a`-dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// `(c, k)` if this is a single nonzero monomial `c * a^k`, which is
    /// exactly when the element is a unit of the Laurent ring.
    pub fn as_unit(&self) -> Option<(Rational, i64)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next()?;
        Some((c.clone(), *k))
    }

    pub fn add_term(&mut self, k: i64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_default();
        *slot = &*slot + c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return LaurentCoeff::zero();
        }
        LaurentCoeff {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiplies by `a^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentCoeff {
            terms: self.terms.iter().map(|(e, v)| (e + k, v.clone())).collect(),
        }
    }

    /// Power with integer exponent. Negative exponents require a unit.
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        let mut acc = LaurentCoeff::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        Ok(acc)
    }

    pub fn inverse(&self) -> Result<Self> {
        let (c, k) = self
            .as_unit()
            .ok_or_else(|| Error::NotUnit(self.to_string()))?;
        Ok(LaurentCoeff::monomial(c.recip()?, -k))
    }

    /// Specializes `a := a0`.
    pub fn eval(&self, a0: &Rational) -> Result<Rational> {
        if a0.is_zero() {
            return Err(Error::ZeroSpecialization);
        }
        let mut acc = Rational::zero();
        for (k, c) in &self.terms {
            acc = acc + c * &a0.pow(*k)?;
        }
        Ok(acc)
    }

    /// Substitutes `a := unit`, where `unit` is a monomial `c * a^k`.
    pub fn substitute_unit(&self, unit: &LaurentCoeff) -> Result<Self> {
        let mut out = LaurentCoeff::zero();
        for (k, c) in &self.terms {
            out = &out + &unit.pow(*k)?.scale(c);
        }
        Ok(out)
    }

    /// The map `a -> a^-1`.
    pub fn invert_parameter(&self) -> Self {
        LaurentCoeff {
            terms: self.terms.iter().map(|(k, c)| (-k, c.clone())).collect(),
        }
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }
}

impl From<Rational> for LaurentCoeff {
    fn from(c: Rational) -> Self {
        LaurentCoeff::constant(c)
    }
}

impl Add<&LaurentCoeff> for &LaurentCoeff {
    type Output = LaurentCoeff;
    fn add(self, rhs: &LaurentCoeff) -> LaurentCoeff {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c);
        }
        out
    }
}

impl Add for LaurentCoeff {
    type Output = LaurentCoeff;
    fn add(self, rhs: LaurentCoeff) -> LaurentCoeff {
        &self + &rhs
    }
}

impl AddAssign<&LaurentCoeff> for LaurentCoeff {
    fn add_assign(&mut self, rhs: &LaurentCoeff) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, c);
        }
    }
}

impl Neg for &LaurentCoeff {
    type Output = LaurentCoeff;
    fn neg(self) -> LaurentCoeff {
        LaurentCoeff {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
}

impl Neg for LaurentCoeff {
    type Output = LaurentCoeff;
    fn neg(self) -> LaurentCoeff {
        -&self
    }
}

impl Sub<&LaurentCoeff> for &LaurentCoeff {
    type Output = LaurentCoeff;
    fn sub(self, rhs: &LaurentCoeff) -> LaurentCoeff {
        self + &(-rhs)
    }
}

impl Sub for LaurentCoeff {
    type Output = LaurentCoeff;
    fn sub(self, rhs: LaurentCoeff) -> LaurentCoeff {
        &self - &rhs
    }
}

impl Mul<&LaurentCoeff> for &LaurentCoeff {
    type Output = LaurentCoeff;
    fn mul(self, rhs: &LaurentCoeff) -> LaurentCoeff {
        let mut out = LaurentCoeff::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                out.add_term(k1 + k2, &(c1 * c2));
            }
        }
        out
    }
}

impl Mul for LaurentCoeff {
    type Output = LaurentCoeff;
    fn mul(self, rhs: LaurentCoeff) -> LaurentCoeff {
        &self * &rhs
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, c: &Rational, k: i64) -> fmt::Result {
    if k == 0 {
        return write!(f, "{c}");
    }
    if c.is_one() {
    } else if (-c.clone()).is_one() {
        write!(f, "-")?;
    } else {
        write!(f, "{c}*")?;
    }
    if k == 1 {
        write!(f, "a")
    } else {
        write!(f, "a^{k}")
    }
}

impl fmt::Display for LaurentCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (k, c)) in self.terms.iter().enumerate() {
            if pos == 0 {
                write_monomial(f, c, *k)?;
            } else if c.is_negative() {
                write!(f, " - ")?;
                write_monomial(f, &c.abs(), *k)?;
            } else {
                write!(f, " + ")?;
                write_monomial(f, c, *k)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

// Text grammar: term (('+'|'-') term)*, term := [rational ['*']] ['a' ['^' int]].
impl FromStr for LaurentCoeff {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let src: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(Error::Parse("empty Laurent polynomial".into()));
        }
        let mut out = LaurentCoeff::zero();
        let mut pos = 0;
        while pos < src.len() {
            let mut sign = Rational::one();
            if src[pos] == '+' || src[pos] == '-' {
                if src[pos] == '-' {
                    sign = -sign;
                }
                pos += 1;
            } else if pos != 0 {
                return Err(Error::Parse(format!("unexpected `{}` in `{s}`", src[pos])));
            }
            let start = pos;
            while pos < src.len() && (src[pos].is_ascii_digit() || src[pos] == '/') {
                pos += 1;
            }
            let mut coeff = Rational::one();
            if pos > start {
                coeff = src[start..pos].iter().collect::<String>().parse()?;
                if pos < src.len() && src[pos] == '*' {
                    pos += 1;
                }
            }
            let mut exp = 0;
            if pos < src.len() && src[pos] == 'a' {
                pos += 1;
                exp = 1;
                if pos < src.len() && src[pos] == '^' {
                    pos += 1;
                    let st = pos;
                    if pos < src.len() && src[pos] == '-' {
                        pos += 1;
                    }
                    while pos < src.len() && src[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    exp = src[st..pos]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{s}`")))?;
                }
            } else if pos == start {
                return Err(Error::Parse(format!("expected a term in `{s}`")));
            }
            out.add_term(exp, &(sign * coeff));
        }
        Ok(out)
    }
}

impl Serialize for LaurentCoeff {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<(i64, String)> = self
            .terms
            .iter()
            .map(|(k, c)| (*k, c.to_string()))
            .collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentCoeff {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<(i64, Rational)> = Vec::deserialize(d)?;
        let mut out = LaurentCoeff::zero();
        for (k, c) in pairs {
            out.add_term(k, &c);
        }
        Ok(out)
    }
}
