//! The action of S̃(n,r) on the tensor space with basis `v_i`, i ∈ I(ℤ,r),
//! the commuting right action of Σ̂ᵣ, and products read off from
//! composed operators.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::laurent::LaurentCoeff;
use crate::schur::{multiply_with, push_merged, AlgebraElement, BasisIndex, Product};
use crate::weyl::{all_perms, bar, AffineWeylElement, Entries};

/// A finite linear combination of tensors `v_i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TensorVector {
    n: i64,
    r: usize,
    terms: BTreeMap<Entries, LaurentCoeff>,
}

impl TensorVector {
    pub fn zero(n: i64, r: usize) -> Self {
        TensorVector {
            n,
            r,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(n: i64, t: &[i64]) -> Self {
        let mut v = TensorVector::zero(n, t.len());
        v.add_term(t.iter().copied().collect(), &LaurentCoeff::one());
        v
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

    pub fn terms(&self) -> impl Iterator<Item = (&Entries, &LaurentCoeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, t: &[i64]) -> LaurentCoeff {
        self.terms.get(t).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, t: Entries, c: &LaurentCoeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&t) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&t);
                }
            }
            None => {
                self.terms.insert(t, c.clone());
            }
        }
    }

    pub fn add(&self, other: &TensorVector) -> Result<TensorVector> {
        if self.n != other.n || self.r != other.r {
            return Err(Error::Context("tensor spaces differ".into()));
        }
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &LaurentCoeff) -> TensorVector {
        let mut out = TensorVector::zero(self.n, self.r);
        for (t, v) in &self.terms {
            out.add_term(t.clone(), &(v * c));
        }
        out
    }
}

impl fmt::Display for TensorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (t, c)) in self.terms.iter().enumerate() {
            if pos > 0 {
                write!(f, " + ")?;
            }
            if !c.is_one() {
                match c.as_constant() {
                    Some(q) => write!(f, "{q}*")?,
                    None => write!(f, "({c})*")?,
                }
            }
            write!(f, "v")?;
            crate::weyl::write_tuple(f, t)?;
        }
        Ok(())
    }
}

impl fmt::Debug for TensorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: LaurentCoeff,
    tuple: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct VectorJson {
    n: i64,
    r: usize,
    terms: Vec<TermJson>,
}

impl Serialize for TensorVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VectorJson {
            n: self.n,
            r: self.r,
            terms: self
                .terms
                .iter()
                .map(|(t, c)| TermJson {
                    coeff: c.clone(),
                    tuple: t.to_vec(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TensorVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = VectorJson::deserialize(d)?;
        if raw.n < 1 {
            return Err(D::Error::custom("n must be positive"));
        }
        let mut out = TensorVector::zero(raw.n, raw.r);
        for t in raw.terms {
            if t.tuple.len() != raw.r {
                return Err(D::Error::custom("tuple length differs from r"));
            }
            out.add_term(t.tuple.into_iter().collect(), &t.coeff);
        }
        Ok(out)
    }
}

/// `ξ_x v_l = Σ v_{i·w}` over cosets `Σ̂_{i,j} w` with `j·w = l`, where
/// `x = (i, j)`.
///
/// Two solutions `w, w'` of `j·w = l` lie in the same coset exactly when
/// `i·w = i·w'`, so the cosets are counted by distinct outputs.
pub fn act_basis(x: &BasisIndex, l: &[i64]) -> Vec<Entries> {
    let n = x.n();
    let (i, j) = (x.tops(), x.bottoms());
    let r = i.len();
    let mut out: Vec<Entries> = Vec::new();
    for s in all_perms(r) {
        if (0..r).all(|m| bar(j[s.at(m)], n) == bar(l[m], n)) {
            let p: Entries = (0..r).map(|m| i[s.at(m)] + l[m] - j[s.at(m)]).collect();
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

pub fn act(x: &AlgebraElement, v: &TensorVector) -> Result<TensorVector> {
    if x.n() != v.n || x.r() != v.r {
        return Err(Error::Context(format!(
            "S̃({},{}) acting on a tensor of degree {} over n={}",
            x.n(),
            x.r(),
            v.r,
            v.n
        )));
    }
    let mut out = TensorVector::zero(v.n, v.r);
    for (idx, c) in x.terms() {
        for (l, d) in &v.terms {
            let cd = c * d;
            for p in act_basis(idx, l) {
                out.add_term(p, &cd);
            }
        }
    }
    Ok(out)
}

/// `v_i · w = v_{i·w}`.
pub fn weyl_right_act(v: &TensorVector, w: &AffineWeylElement) -> Result<TensorVector> {
    if w.rank() != v.r {
        return Err(Error::LengthMismatch {
            expected: v.r,
            got: w.rank(),
        });
    }
    let mut out = TensorVector::zero(v.n, v.r);
    for (t, c) in &v.terms {
        out.add_term(w.apply_entries(t, v.n), c);
    }
    Ok(out)
}

/// Reads an element of S̃(n,r) off its action on the single tensor `v_q`.
///
/// Each orbit `C` with second tuple equivalent to `q` contributes
/// `z_C Σ v_p` over the `p` with `(p, q) ∈ C`, each with coefficient one,
/// and different orbits hit disjoint `p`. So `z_C` is the coefficient of
/// any such `v_p`; all of them must agree, and the reconstruction is
/// re-applied to `v_q` as a final check.
pub fn reconstruct_from_image(
    n: i64,
    q: &[i64],
    image: &TensorVector,
) -> Result<AlgebraElement> {
    let r = q.len();
    let mut z = AlgebraElement::zero(n, r);
    let mut seen: BTreeMap<BasisIndex, LaurentCoeff> = BTreeMap::new();
    for (p, c) in image.terms() {
        let orbit = BasisIndex::from_tuples(n, p, q);
        match seen.get(&orbit) {
            Some(prev) if prev != c => {
                return Err(Error::Verification(format!(
                    "inconsistent coefficients for {orbit}: {prev} and {c}"
                )));
            }
            Some(_) => {}
            None => {
                seen.insert(orbit.clone(), c.clone());
                z.add_term(orbit, c);
            }
        }
    }
    let back = act(&z, &TensorVector::basis(n, q))?;
    if back != *image {
        return Err(Error::Verification(format!(
            "reconstruction acts as {back}, expected {image}"
        )));
    }
    Ok(z)
}

/// `ξ_x ξ_y` read off the composite operator.
///
/// Both sides vanish on `v_q` unless `q` is equivalent to the bottom of
/// `y`, and by equivariance it suffices to test one representative `q`
/// of that orbit.
pub fn tensor_basis_product(x: &BasisIndex, y: &BasisIndex) -> Result<Product> {
    let n = x.n();
    let mut q: SmallVec<[i64; 8]> = y.bottoms().iter().map(|&z| bar(z, n)).collect();
    q.sort_unstable();
    let mut image = TensorVector::zero(n, x.r());
    for mid in act_basis(y, &q) {
        for p in act_basis(x, &mid) {
            image.add_term(p, &LaurentCoeff::one());
        }
    }
    let z = reconstruct_from_image(n, &q, &image)?;
    let mut out: Product = Vec::with_capacity(z.len());
    for (idx, c) in z.terms() {
        let k = c
            .as_constant()
            .and_then(|k| k.to_i64())
            .filter(|k| *k > 0)
            .ok_or_else(|| Error::Verification(format!("non-integral coefficient {c}")))?;
        push_merged(&mut out, idx.clone(), k as u64);
    }
    Ok(out)
}

pub fn multiply_via_action(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    multiply_with(x, y, tensor_basis_product)
}
