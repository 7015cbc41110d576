use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::index::{increasing_tuples, BasisIndex};
use crate::error::{Error, Result};
use crate::laurent::{LaurentCoeff, Rational};

/// A finite linear combination of basis elements ξ of S̃(n,r) with
/// coefficients in ℚ[a, a⁻¹].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    n: i64,
    r: usize,
    terms: BTreeMap<BasisIndex, LaurentCoeff>,
}

impl AlgebraElement {
    pub fn zero(n: i64, r: usize) -> Self {
        AlgebraElement {
            n,
            r,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(x: BasisIndex) -> Self {
        let mut out = AlgebraElement::zero(x.n(), x.r());
        out.terms.insert(x, LaurentCoeff::one());
        out
    }

    pub fn term(x: BasisIndex, c: LaurentCoeff) -> Self {
        let mut out = AlgebraElement::zero(x.n(), x.r());
        out.add_term(x, &c);
        out
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisIndex, &LaurentCoeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, x: &BasisIndex) -> LaurentCoeff {
        self.terms.get(x).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, x: BasisIndex, c: &LaurentCoeff) {
        debug_assert!(x.n() == self.n && x.r() == self.r);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&x) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&x);
                }
            }
            None => {
                self.terms.insert(x, c.clone());
            }
        }
    }

    pub(crate) fn add_int(&mut self, x: BasisIndex, c: &LaurentCoeff, k: i64) {
        if k == 1 {
            self.add_term(x, c);
        } else {
            self.add_term(x, &c.scale(&Rational::from_int(k)));
        }
    }

    pub fn check_context(&self, other: &AlgebraElement) -> Result<()> {
        if self.n != other.n || self.r != other.r {
            return Err(Error::Context(format!(
                "S̃({},{}) vs S̃({},{})",
                self.n, self.r, other.n, other.r
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (x, c) in &other.terms {
            out.add_term(x.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> AlgebraElement {
        self.scale(&LaurentCoeff::from_int(-1))
    }

    pub fn scale(&self, c: &LaurentCoeff) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.n, self.r);
        if c.is_zero() {
            return out;
        }
        for (x, v) in &self.terms {
            out.add_term(x.clone(), &(v * c));
        }
        out
    }

    /// Applies a function to every coefficient.
    pub fn map_coeffs(
        &self,
        mut f: impl FnMut(&LaurentCoeff) -> Result<LaurentCoeff>,
    ) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero(self.n, self.r);
        for (x, v) in &self.terms {
            out.add_term(x.clone(), &f(v)?);
        }
        Ok(out)
    }

    /// Specializes `a := a0` in every coefficient.
    pub fn specialize(&self, a0: &Rational) -> Result<AlgebraElement> {
        self.map_coeffs(|c| Ok(LaurentCoeff::constant(c.eval(a0)?)))
    }

    /// Linear extension of a map on basis indices.
    pub fn map_linear(
        &self,
        n: i64,
        r: usize,
        mut f: impl FnMut(&BasisIndex) -> Result<AlgebraElement>,
    ) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero(n, r);
        for (x, c) in &self.terms {
            let img = f(x)?;
            if img.n != n || img.r != r {
                return Err(Error::Context("image in the wrong algebra".into()));
            }
            for (y, d) in &img.terms {
                out.add_term(y.clone(), &(c * d));
            }
        }
        Ok(out)
    }

    /// True when all indices have zero offsets.
    pub fn is_finite(&self) -> bool {
        self.terms.keys().all(BasisIndex::is_finite)
    }

    pub fn max_abs_offset(&self) -> i64 {
        self.terms
            .keys()
            .map(BasisIndex::max_abs_offset)
            .max()
            .unwrap_or(0)
    }
}

/// The unit Σ ξ_{i,i} over weakly increasing i.
pub fn identity(n: i64, r: usize) -> AlgebraElement {
    let mut out = AlgebraElement::zero(n, r);
    for i in increasing_tuples(n, r) {
        out.add_term(BasisIndex::from_tuples(n, &i, &i), &LaurentCoeff::one());
    }
    out
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (x, c)) in self.terms.iter().enumerate() {
            match c.as_constant() {
                Some(q) => {
                    let neg = q.is_negative();
                    let mag = q.abs();
                    match (pos == 0, neg) {
                        (true, true) => write!(f, "-")?,
                        (true, false) => {}
                        (false, true) => write!(f, " - ")?,
                        (false, false) => write!(f, " + ")?,
                    }
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                }
                None => {
                    if pos > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "({c})*")?;
                }
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S̃({},{}): {self}", self.n, self.r)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: LaurentCoeff,
    pairs: Vec<(i64, i64)>,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    n: i64,
    r: usize,
    terms: Vec<TermJson>,
}

impl Serialize for AlgebraElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementJson {
            n: self.n,
            r: self.r,
            terms: self
                .terms
                .iter()
                .map(|(x, c)| TermJson {
                    coeff: c.clone(),
                    pairs: x.pairs().to_vec(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ElementJson::deserialize(d)?;
        if raw.n < 1 {
            return Err(D::Error::custom("n must be positive"));
        }
        let mut out = AlgebraElement::zero(raw.n, raw.r);
        for t in raw.terms {
            if t.pairs.len() != raw.r {
                return Err(D::Error::custom(format!(
                    "term has {} pairs, expected {}",
                    t.pairs.len(),
                    raw.r
                )));
            }
            out.add_term(BasisIndex::from_pairs(raw.n, &t.pairs), &t.coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xi(s: &str, n: i64) -> AlgebraElement {
        AlgebraElement::basis(BasisIndex::parse_text(s, n).unwrap())
    }

    #[test]
    fn identity_examples() {
        assert_eq!(identity(1, 2), xi("xi[(1,1)|(1,1)]", 1));
        let want = xi("xi[(1,1)|(1,1)]", 2)
            .add(&xi("xi[(1,2)|(1,2)]", 2))
            .unwrap()
            .add(&xi("xi[(2,2)|(2,2)]", 2))
            .unwrap();
        assert_eq!(identity(2, 2), want);
    }

    #[test]
    fn display_and_json() {
        let x = xi("xi[(1,2)|(3,2)]", 2)
            .scale(&"2".parse().unwrap())
            .sub(&xi("xi[(1,1)|(1,1)]", 2))
            .unwrap()
            .add(&xi("xi[(2,2)|(2,2)]", 2).scale(&"1 + a".parse().unwrap()))
            .unwrap();
        assert_eq!(
            x.to_string(),
            "-xi[(1,1)|(1,1)] + 2*xi[(1,2)|(3,2)] + (1 + a)*xi[(2,2)|(2,2)]"
        );
        let js = serde_json::to_string(&x).unwrap();
        let back: AlgebraElement = serde_json::from_str(&js).unwrap();
        assert_eq!(back, x);
        let given = r#"{"n":2,"r":2,"terms":[{"coeff":[[0,"1"]],"pairs":[[1,3],[2,0]]}]}"#;
        let parsed: AlgebraElement = serde_json::from_str(given).unwrap();
        assert_eq!(serde_json::to_string(&parsed).unwrap(), given);
    }

    #[test]
    fn context_mismatch_is_an_error() {
        assert!(identity(1, 2).add(&identity(2, 2)).is_err());
    }
}
