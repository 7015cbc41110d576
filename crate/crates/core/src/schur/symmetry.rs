use std::fmt;

use serde::{Deserialize, Serialize};

use super::element::AlgebraElement;
use super::index::BasisIndex;
use crate::error::{Error, Result};
use crate::laurent::LaurentCoeff;
use crate::weyl::{bar, offset};

/// An element of Σ̂ₙ as a bijection of ℤ with `w(z + n) = w(z) + n`,
/// given by its window `(w(1), …, w(n))`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct WeylSymmetry {
    window: Vec<i64>,
}

impl TryFrom<Vec<i64>> for WeylSymmetry {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        WeylSymmetry::new(v)
    }
}

impl From<WeylSymmetry> for Vec<i64> {
    fn from(w: WeylSymmetry) -> Vec<i64> {
        w.window
    }
}

impl WeylSymmetry {
    pub fn new(window: Vec<i64>) -> Result<Self> {
        let n = window.len() as i64;
        if n == 0 {
            return Err(Error::Invalid("empty window".into()));
        }
        let mut res: Vec<i64> = window.iter().map(|&z| bar(z, n)).collect();
        res.sort_unstable();
        if res != (1..=n).collect::<Vec<_>>() {
            return Err(Error::Invalid(format!(
                "window {window:?} does not hit every residue mod {n}"
            )));
        }
        Ok(WeylSymmetry { window })
    }

    pub fn identity(n: i64) -> Self {
        WeylSymmetry {
            window: (1..=n).collect(),
        }
    }

    /// `ρ(z) = z - 1`.
    pub fn rho(n: i64) -> Self {
        WeylSymmetry {
            window: (0..n).collect(),
        }
    }

    /// The simple reflection swapping the residues of `i` and `i+1`, for
    /// `i ∈ 1..=n`.
    pub fn simple(n: i64, i: i64) -> Result<Self> {
        if !(1..=n).contains(&i) || n < 2 {
            return Err(Error::Invalid(format!("no reflection s_{i} for n={n}")));
        }
        let window = (1..=n)
            .map(|z| {
                if z == i {
                    z + 1
                } else if bar(z, n) == bar(i + 1, n) {
                    z - 1
                } else {
                    z
                }
            })
            .collect();
        WeylSymmetry::new(window)
    }

    pub fn n(&self) -> i64 {
        self.window.len() as i64
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    #[inline]
    pub fn apply(&self, z: i64) -> i64 {
        let n = self.n();
        self.window[(bar(z, n) - 1) as usize] + n * offset(z, n)
    }

    /// `(self ∘ other)(z) = self(other(z))`.
    pub fn compose(&self, other: &WeylSymmetry) -> WeylSymmetry {
        WeylSymmetry {
            window: (1..=self.n()).map(|z| self.apply(other.apply(z))).collect(),
        }
    }

    pub fn inverse(&self) -> WeylSymmetry {
        let n = self.n();
        let mut window = vec![0; n as usize];
        for k in 1..=n {
            let v = self.apply(k);
            window[(bar(v, n) - 1) as usize] = k - n * offset(v, n);
        }
        WeylSymmetry { window }
    }

    pub fn pow(&self, k: i64) -> WeylSymmetry {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = WeylSymmetry::identity(self.n());
        for _ in 0..k.abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    pub fn act_index(&self, x: &BasisIndex) -> BasisIndex {
        let moved: Vec<(i64, i64)> = x
            .pairs()
            .iter()
            .map(|&(t, b)| (self.apply(t), self.apply(b)))
            .collect();
        BasisIndex::from_pairs(x.n(), &moved)
    }
}

impl fmt::Debug for WeylSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{:?}", self.window)
    }
}

/// ξ_{i,j} ↦ ξ_{w(i),w(j)}, extended linearly.
pub fn weyl_act(w: &WeylSymmetry, x: &AlgebraElement) -> Result<AlgebraElement> {
    if w.n() != x.n() {
        return Err(Error::Context(format!(
            "symmetry of Σ̂_{} acting on S̃({},{})",
            w.n(),
            x.n(),
            x.r()
        )));
    }
    x.map_linear(x.n(), x.r(), |y| {
        Ok(AlgebraElement::term(w.act_index(y), LaurentCoeff::one()))
    })
}

/// The anti-automorphism ξ_{i,j} ↦ ξ_{j,i}.
pub fn transpose_antiauto(x: &AlgebraElement) -> AlgebraElement {
    x.map_linear(x.n(), x.r(), |y| Ok(AlgebraElement::basis(y.transposed())))
        .expect("transposition stays in the same algebra")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schur::element::identity;
    use crate::schur::index::window_indices;

    fn xi(s: &str, n: i64) -> AlgebraElement {
        AlgebraElement::basis(BasisIndex::parse_text(s, n).unwrap())
    }

    #[test]
    fn rho_example() {
        let got = weyl_act(&WeylSymmetry::rho(2), &xi("xi[(1,2)|(1,4)]", 2)).unwrap();
        assert_eq!(got, xi("xi[(1,2)|(3,2)]", 2));
        let x = xi("xi[(1,2)|(1,4)]", 2);
        assert_eq!(weyl_act(&WeylSymmetry::identity(2), &x).unwrap(), x);
    }

    #[test]
    fn rho_to_the_n_is_trivial() {
        for n in 1..=3 {
            let rn = WeylSymmetry::rho(n).pow(n);
            for x in window_indices(n, 2, 1) {
                let x = AlgebraElement::basis(x);
                assert_eq!(weyl_act(&rn, &x).unwrap(), x);
            }
        }
    }

    #[test]
    fn reflections() {
        let s2 = WeylSymmetry::simple(2, 2).unwrap();
        assert_eq!(s2.window(), &[0, 3]);
        assert_eq!(s2.compose(&s2), WeylSymmetry::identity(2));
        let s1 = WeylSymmetry::simple(3, 1).unwrap();
        assert_eq!(s1.window(), &[2, 1, 3]);
        assert!(WeylSymmetry::new(vec![1, 3]).is_err());
        let w = WeylSymmetry::new(vec![5, -2, 3]).unwrap();
        assert_eq!(w.compose(&w.inverse()), WeylSymmetry::identity(3));
        assert_eq!(w.inverse().compose(&w), WeylSymmetry::identity(3));
    }

    #[test]
    fn transpose_example() {
        let got = transpose_antiauto(&xi("xi[(1,1)|(1,3)]", 2));
        assert_eq!(got, xi("xi[(1,1)|(-1,1)]", 2));
        assert_eq!(transpose_antiauto(&identity(3, 2)), identity(3, 2));
    }
}
