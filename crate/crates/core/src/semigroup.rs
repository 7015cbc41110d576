//! Periodic matrices 𝔐ₙ ≅ Mₙ ⊗ K[t,t⁻¹], the endomorphisms η_{p,s},
//! det̃, the semigroups GL̃/SL̃, Weyl conjugation and the evaluation map
//! into S̃(n,r).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{LaurentCoeff, Rational};
use crate::schur::{AlgebraElement, BasisIndex, CoordIndex, WeylSymmetry};
use crate::weyl::{all_perms, bar, offset};

/// A ℤ-periodic matrix `m_{i,j} = m_{i+n,j+n}` stored by its rows `1..=n`.
///
/// Entries are Laurent coefficients so that η with a formal parameter
/// stays inside the type; user-supplied matrices have constant entries.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PeriodicMatrix {
    n: i64,
    entries: BTreeMap<(i64, i64), LaurentCoeff>,
}

/// `(i, c) ↦ (bar i, c - (i - bar i))`.
fn normalize(n: i64, i: i64, c: i64) -> (i64, i64) {
    let b = bar(i, n);
    (b, c - (i - b))
}

impl PeriodicMatrix {
    pub fn zero(n: i64) -> Self {
        PeriodicMatrix {
            n,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: i64) -> Self {
        let mut g = PeriodicMatrix::zero(n);
        for i in 1..=n {
            g.add_entry(i, i, &LaurentCoeff::one());
        }
        g
    }

    /// `E_{i,c}`, placed in row `bar i`.
    pub fn elementary(n: i64, i: i64, c: i64) -> Self {
        let mut g = PeriodicMatrix::zero(n);
        g.add_entry(i, c, &LaurentCoeff::one());
        g
    }

    pub fn from_entries<'a>(
        n: i64,
        entries: impl IntoIterator<Item = (i64, i64, &'a LaurentCoeff)>,
    ) -> Self {
        let mut g = PeriodicMatrix::zero(n);
        for (i, c, v) in entries {
            g.add_entry(i, c, v);
        }
        g
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn add_entry(&mut self, i: i64, c: i64, v: &LaurentCoeff) {
        if v.is_zero() {
            return;
        }
        let key = normalize(self.n, i, c);
        let slot = self.entries.entry(key).or_default();
        *slot += v;
        if slot.is_zero() {
            self.entries.remove(&key);
        }
    }

    /// `m_{i,c}` for any integers `i`, `c`.
    pub fn get(&self, i: i64, c: i64) -> LaurentCoeff {
        self.entries
            .get(&normalize(self.n, i, c))
            .cloned()
            .unwrap_or_default()
    }

    /// Nonzero entries in rows `1..=n`.
    pub fn entries(&self) -> impl Iterator<Item = (i64, i64, &LaurentCoeff)> {
        self.entries.iter().map(|(&(i, c), v)| (i, c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.entries.values().all(|v| v.as_constant().is_some())
    }

    pub fn add(&self, other: &PeriodicMatrix) -> Result<PeriodicMatrix> {
        same_n(self, other)?;
        let mut out = self.clone();
        for (i, c, v) in other.entries() {
            out.add_entry(i, c, v);
        }
        Ok(out)
    }

    pub fn scale(&self, k: &LaurentCoeff) -> PeriodicMatrix {
        let mut out = PeriodicMatrix::zero(self.n);
        for (i, c, v) in self.entries() {
            out.add_entry(i, c, &(v * k));
        }
        out
    }

    pub fn to_laurent(&self) -> LaurentMatrix {
        let mut m = LaurentMatrix::zero(self.n);
        for (i, c, v) in self.entries() {
            m.add(i, bar(c, self.n), offset(c, self.n), v);
        }
        m
    }

    pub fn from_laurent(m: &LaurentMatrix) -> PeriodicMatrix {
        let n = m.n;
        let mut g = PeriodicMatrix::zero(n);
        for i in 1..=n {
            for j in 1..=n {
                for (l, v) in m.entry(i, j) {
                    g.add_entry(i, j + l * n, v);
                }
            }
        }
        g
    }
}

fn same_n(g: &PeriodicMatrix, h: &PeriodicMatrix) -> Result<()> {
    if g.n != h.n {
        return Err(Error::Context(format!("periods {} and {} differ", g.n, h.n)));
    }
    Ok(())
}

impl fmt::Display for PeriodicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        for (pos, (i, c, v)) in self.entries().enumerate() {
            if pos > 0 {
                write!(f, " + ")?;
            }
            if !v.is_one() {
                match v.as_constant() {
                    Some(q) => write!(f, "{q}*")?,
                    None => write!(f, "({v})*")?,
                }
            }
            write!(f, "E({i},{c})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PeriodicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: i64,
    entries: Vec<(i64, i64, String)>,
}

impl Serialize for PeriodicMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            n: self.n,
            entries: self.entries().map(|(i, c, v)| (i, c, v.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PeriodicMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = MatrixJson::deserialize(d)?;
        if raw.n < 1 {
            return Err(D::Error::custom("n must be positive"));
        }
        let mut g = PeriodicMatrix::zero(raw.n);
        for (i, c, v) in raw.entries {
            let v: LaurentCoeff = v.parse().map_err(D::Error::custom)?;
            g.add_entry(i, c, &v);
        }
        Ok(g)
    }
}

/// An n×n matrix over Laurent polynomials in `t`, whose coefficients lie
/// in ℚ[a,a⁻¹]. Entry `(i,j)` maps `l` to the coefficient of `t^l`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentMatrix {
    n: i64,
    cells: Vec<BTreeMap<i64, LaurentCoeff>>,
}

impl LaurentMatrix {
    pub fn zero(n: i64) -> Self {
        LaurentMatrix {
            n,
            cells: vec![BTreeMap::new(); (n * n) as usize],
        }
    }

    fn cell(&self, i: i64, j: i64) -> usize {
        ((i - 1) * self.n + (j - 1)) as usize
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn entry(&self, i: i64, j: i64) -> &BTreeMap<i64, LaurentCoeff> {
        &self.cells[self.cell(i, j)]
    }

    /// Adds `v·t^l` to entry `(i, j)`.
    pub fn add(&mut self, i: i64, j: i64, l: i64, v: &LaurentCoeff) {
        let k = self.cell(i, j);
        let slot = self.cells[k].entry(l).or_default();
        *slot += v;
        if slot.is_zero() {
            self.cells[k].remove(&l);
        }
    }

    pub fn mul(&self, other: &LaurentMatrix) -> LaurentMatrix {
        let n = self.n;
        let mut out = LaurentMatrix::zero(n);
        for i in 1..=n {
            for k in 1..=n {
                for (l1, v1) in self.entry(i, k) {
                    for j in 1..=n {
                        for (l2, v2) in other.entry(k, j) {
                            out.add(i, j, l1 + l2, &(v1 * v2));
                        }
                    }
                }
            }
        }
        out
    }

    /// Substitutes `t := p`, giving a matrix over ℚ[a,a⁻¹].
    pub fn at_unit(&self, p: &LaurentCoeff) -> Result<Vec<LaurentCoeff>> {
        self.cells
            .iter()
            .map(|cell| {
                let mut acc = LaurentCoeff::zero();
                for (l, v) in cell {
                    acc += &(v * &p.pow(*l)?);
                }
                Ok(acc)
            })
            .collect()
    }
}

/// Leibniz expansion of an n×n determinant stored row-major.
pub fn determinant(n: usize, m: &[LaurentCoeff]) -> LaurentCoeff {
    let mut out = LaurentCoeff::zero();
    for s in all_perms(n) {
        let mut term = LaurentCoeff::from_int(s.sign());
        for i in 0..n {
            term = &term * &m[i * n + s.at(i)];
            if term.is_zero() {
                break;
            }
        }
        out += &term;
    }
    out
}

/// `gh`, computed in Mₙ ⊗ K[t,t⁻¹].
pub fn matrix_mul(g: &PeriodicMatrix, h: &PeriodicMatrix) -> Result<PeriodicMatrix> {
    same_n(g, h)?;
    Ok(PeriodicMatrix::from_laurent(&g.to_laurent().mul(&h.to_laurent())))
}

/// η_{p,s}: `E_{i,j+ln} ↦ p^l E_{i,j+sln}`, for a unit `p`.
pub fn eta_with(p: &LaurentCoeff, s: i64, g: &PeriodicMatrix) -> Result<PeriodicMatrix> {
    if p.as_unit().is_none() {
        return Err(Error::NotUnit(p.to_string()));
    }
    let n = g.n;
    let mut out = PeriodicMatrix::zero(n);
    for (i, c, v) in g.entries() {
        let (j, l) = (bar(c, n), offset(c, n));
        out.add_entry(i, j + s * l * n, &(v * &p.pow(l)?));
    }
    Ok(out)
}

pub fn eta_as(s: i64, g: &PeriodicMatrix) -> Result<PeriodicMatrix> {
    eta_with(&LaurentCoeff::a(), s, g)
}

/// det̃_p(g) = det η_{p,0}(g).
pub fn det_tilde_with(p: &LaurentCoeff, g: &PeriodicMatrix) -> Result<LaurentCoeff> {
    let m = g.to_laurent().at_unit(p)?;
    Ok(determinant(g.n as usize, &m))
}

pub fn det_tilde(g: &PeriodicMatrix) -> LaurentCoeff {
    det_tilde_with(&LaurentCoeff::a(), g).expect("a is a unit")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Membership {
    /// det̃ ≠ 0 as a Laurent polynomial.
    GlGeneric,
    /// det̃ evaluated at `a0` equals 1.
    SlAt { a0: Rational },
}

pub fn membership(g: &PeriodicMatrix, mode: &Membership) -> Result<bool> {
    let d = det_tilde(g);
    match mode {
        Membership::GlGeneric => Ok(!d.is_zero()),
        Membership::SlAt { a0 } => {
            if a0.is_zero() {
                return Err(Error::ZeroSpecialization);
            }
            Ok(d.eval(a0)?.is_one())
        }
    }
}

/// `g'_{x,y} = g_{w⁻¹(x), w⁻¹(y)}`.
pub fn weyl_conjugate(w: &WeylSymmetry, g: &PeriodicMatrix) -> Result<PeriodicMatrix> {
    if w.n() != g.n {
        return Err(Error::Context(format!(
            "symmetry of period {} on a matrix of period {}",
            w.n(),
            g.n
        )));
    }
    let mut out = PeriodicMatrix::zero(g.n);
    for (i, c, v) in g.entries() {
        out.add_entry(w.apply(i), w.apply(c), v);
    }
    Ok(out)
}

pub fn transpose(g: &PeriodicMatrix) -> PeriodicMatrix {
    let mut out = PeriodicMatrix::zero(g.n);
    for (i, c, v) in g.entries() {
        out.add_entry(c, i, v);
    }
    out
}

/// `c_x(g) = Π g_{t,b}` over the pairs of `x`.
pub fn coordinate_value(x: &CoordIndex, g: &PeriodicMatrix) -> LaurentCoeff {
    let mut out = LaurentCoeff::one();
    for &(t, b) in x.pairs() {
        out = &out * &g.get(t, b);
        if out.is_zero() {
            break;
        }
    }
    out
}

/// ẽ(g) = Σ c_x(g) ξ_x in S̃(n,r).
///
/// The orbits with `c_x(g) ≠ 0` are exactly the multisets of `r` nonzero
/// entries of `g`.
pub fn evaluate(g: &PeriodicMatrix, r: usize) -> AlgebraElement {
    let n = g.n;
    let entries: Vec<(i64, i64, &LaurentCoeff)> = g.entries().collect();
    let mut out = AlgebraElement::zero(n, r);
    let mut pick: Vec<usize> = Vec::with_capacity(r);
    fn rec(
        n: i64,
        r: usize,
        start: usize,
        entries: &[(i64, i64, &LaurentCoeff)],
        pick: &mut Vec<usize>,
        out: &mut AlgebraElement,
    ) {
        if pick.len() == r {
            let pairs: Vec<(i64, i64)> = pick.iter().map(|&k| (entries[k].0, entries[k].1)).collect();
            let mut c = LaurentCoeff::one();
            for &k in pick.iter() {
                c = &c * entries[k].2;
            }
            out.add_term(BasisIndex::from_pairs(n, &pairs), &c);
            return;
        }
        for k in start..entries.len() {
            pick.push(k);
            rec(n, r, k, entries, pick, out);
            pick.pop();
        }
    }
    rec(n, r, 0, &entries, &mut pick, &mut out);
    out
}

/// A matrix on which a coordinate polynomial does not vanish.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub matrix: PeriodicMatrix,
    /// The parameter value at which `det̃ = 1`.
    pub a0: Rational,
    /// `P(g)`.
    pub value: Rational,
}

/// `P(g)` for a polynomial given by its terms `λ_x c_x`.
pub fn evaluate_polynomial(p: &[(CoordIndex, Rational)], g: &PeriodicMatrix) -> Result<Rational> {
    let mut acc = Rational::zero();
    for (x, lam) in p {
        let v = coordinate_value(x, g);
        let v = v
            .as_constant()
            .ok_or_else(|| Error::Invalid(format!("matrix entries of {g} are not constant")))?;
        acc = acc + lam * &v;
    }
    Ok(acc)
}

/// Small rationals in height order: 0, 1, -1, 2, -2, 1/2, -1/2, 3, …
fn small_rationals(count: usize, with_zero: bool) -> Vec<Rational> {
    let mut out = Vec::new();
    if with_zero {
        out.push(Rational::zero());
    }
    let mut h = 1i64;
    while out.len() < count {
        for q in 1..=h {
            let p = h + 1 - q;
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            for v in [Rational::new(p, q), Rational::new(-p, q)] {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        h += 1;
    }
    out.truncate(count);
    out
}

/// Calls `f` on tuples of length `dim` over `0..base`, ordered by their
/// largest digit, until it returns `Some`.
fn search<T>(dim: usize, base: usize, mut f: impl FnMut(&[usize]) -> Option<T>) -> Option<T> {
    if dim == 0 {
        return f(&[]);
    }
    let mut digits = vec![0usize; dim];
    for top in 0..base {
        let span = top + 1;
        digits.iter_mut().for_each(|d| *d = 0);
        loop {
            if digits.contains(&top) {
                if let Some(v) = f(&digits) {
                    return Some(v);
                }
            }
            let mut k = 0;
            while k < dim && digits[k] + 1 == span {
                digits[k] = 0;
                k += 1;
            }
            if k == dim {
                break;
            }
            digits[k] += 1;
        }
    }
    None
}

/// An element of SLₙ(ℚ) as `U·D·L` with unitriangular `U`, `L` and
/// `D = diag(d_1, …, d_{n-1}, 1/(d_1⋯d_{n-1}))`.
fn sl_point(n: usize, off: &[Rational], diag: &[Rational]) -> Vec<Rational> {
    let mut u = vec![Rational::zero(); n * n];
    let mut l = vec![Rational::zero(); n * n];
    let mut k = 0;
    for i in 0..n {
        u[i * n + i] = Rational::one();
        l[i * n + i] = Rational::one();
        for j in i + 1..n {
            u[i * n + j] = off[k].clone();
            l[j * n + i] = off[k + 1].clone();
            k += 2;
        }
    }
    let mut d = diag.to_vec();
    let prod = diag.iter().fold(Rational::one(), |acc, x| acc * x.clone());
    d.push(prod.recip().expect("diagonal entries are nonzero"));
    let mut out = vec![Rational::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Rational::zero();
            for m in 0..n {
                acc = acc + u[i * n + m].clone() * d[m].clone() * l[m * n + j].clone();
            }
            out[i * n + j] = acc;
        }
    }
    out
}

/// A matrix `g` with `P(g) ≠ 0` and `det̃_{a0}(g) = 1`.
///
/// Pick a term `λ c_x` of `P` and let `L` be the set of offsets of `x`.
/// Choose `x_l`, `l ∈ L`, with `Σ a0^l x_l = 1` such that the terms of `P`
/// over the same finite orbit with offsets in `L` do not cancel, then a
/// `g' ∈ SLₙ` with `P(g) ≠ 0` for `g = Σ x_l g'_{ij} E_{i,j+ln}`. Then
/// `η_{a0}(g) = g'`. Both searches run over small rationals, and the
/// result is checked by evaluating `P(g)`.
pub fn nonvanishing_witness(p: &[(CoordIndex, Rational)], a0: &Rational) -> Result<Witness> {
    if a0.is_zero() {
        return Err(Error::ZeroSpecialization);
    }
    let mut terms: BTreeMap<CoordIndex, Rational> = BTreeMap::new();
    for (x, lam) in p {
        let slot = terms.entry(x.clone()).or_insert_with(Rational::zero);
        *slot = slot.clone() + lam.clone();
    }
    terms.retain(|_, v| !v.is_zero());
    let (first, _) = terms
        .iter()
        .next()
        .ok_or_else(|| Error::Precondition("the polynomial is zero".into()))?;
    let n = first.n();
    let r = first.r();
    if terms.keys().any(|x| x.n() != n || x.r() != r) {
        return Err(Error::Context("terms of mixed context".into()));
    }
    let finite_of = |x: &CoordIndex| -> BasisIndex {
        let f: Vec<(i64, i64)> = x.pairs().iter().map(|&(t, b)| (t, bar(b, n))).collect();
        BasisIndex::from_pairs(n, &f)
    };
    let mut levels: Vec<i64> = first.offsets().to_vec();
    levels.sort_unstable();
    levels.dedup();
    let base_orbit = finite_of(first);
    let relevant: Vec<(&CoordIndex, &Rational)> = terms
        .iter()
        .filter(|(x, _)| {
            finite_of(x) == base_orbit && x.offsets().iter().all(|e| levels.contains(e))
        })
        .collect();
    let s = levels.len();
    let slot = |e: i64| levels.iter().position(|&l| l == e).expect("offset in L");
    let powers: Vec<Rational> = levels.iter().map(|&l| a0.pow(l)).collect::<Result<_>>()?;

    let values = small_rationals(9, true);
    let xs = search(s - 1, values.len(), |digits| {
        let mut x: Vec<Rational> = digits.iter().map(|&d| values[d].clone()).collect();
        let mut rest = Rational::one();
        for k in 0..s - 1 {
            rest = rest - powers[k].clone() * x[k].clone();
        }
        x.push(rest * powers[s - 1].recip().expect("a0 ≠ 0"));
        let q = relevant.iter().fold(Rational::zero(), |acc, (y, lam)| {
            let mono = y
                .offsets()
                .iter()
                .fold(Rational::one(), |m, &e| m * x[slot(e)].clone());
            acc + (*lam).clone() * mono
        });
        (!q.is_zero()).then_some(x)
    })
    .ok_or_else(|| Error::Verification("no small solution for the level scalars".into()))?;

    let nu = n as usize;
    let off_vals = small_rationals(7, true);
    let diag_vals = small_rationals(6, false);
    let n_off = nu * (nu - 1);
    let base = off_vals.len().min(diag_vals.len());
    let dim = n_off + nu - 1;
    let p_terms: Vec<(CoordIndex, Rational)> = terms.into_iter().collect();
    search(dim, base, |digits| {
        let off: Vec<Rational> = digits[..n_off].iter().map(|&d| off_vals[d].clone()).collect();
        let diag: Vec<Rational> = digits[n_off..].iter().map(|&d| diag_vals[d].clone()).collect();
        let gp = sl_point(nu, &off, &diag);
        let mut g = PeriodicMatrix::zero(n);
        for (k, &l) in levels.iter().enumerate() {
            for i in 0..nu {
                for j in 0..nu {
                    let v = xs[k].clone() * gp[i * nu + j].clone();
                    g.add_entry(i as i64 + 1, j as i64 + 1 + l * n, &v.into());
                }
            }
        }
        let value = evaluate_polynomial(&p_terms, &g).ok()?;
        let det = det_tilde(&g).eval(a0).ok()?;
        (!value.is_zero() && det.is_one()).then(|| Witness {
            matrix: g,
            a0: a0.clone(),
            value,
        })
    })
    .ok_or_else(|| Error::Verification("no small witness in SLₙ".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::{det_tilde_sharp_with, psi_as};
    use crate::schur::{transpose_antiauto, weyl_act};
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d)
    }

    fn k(v: i64) -> LaurentCoeff {
        LaurentCoeff::from_int(v)
    }

    fn e(n: i64, i: i64, c: i64) -> PeriodicMatrix {
        PeriodicMatrix::elementary(n, i, c)
    }

    /// `2 + 3t` for n = 1.
    fn two_three_t() -> PeriodicMatrix {
        e(1, 1, 1).scale(&k(2)).add(&e(1, 1, 2).scale(&k(3))).unwrap()
    }

    /// `(gh)_{i,c} = Σ_k g_{i,k} h_{k,c}` summed directly over ℤ.
    fn periodic_product(g: &PeriodicMatrix, h: &PeriodicMatrix) -> PeriodicMatrix {
        let mut out = PeriodicMatrix::zero(g.n());
        for (i, kk, v) in g.entries() {
            for (k2, c, w) in h.entries() {
                // h_{kk, c'} is the stored entry shifted by kk - k2 when the
                // rows agree mod n
                if bar(kk, g.n()) == k2 {
                    out.add_entry(i, c + (kk - k2), &(v * w));
                }
            }
        }
        out
    }

    #[test]
    fn products() {
        let got = matrix_mul(&e(2, 1, 2), &e(2, 2, 1)).unwrap();
        assert_eq!(got, e(2, 1, 1));
        let sq = matrix_mul(&two_three_t(), &two_three_t()).unwrap();
        assert_eq!(sq.to_string(), "4*E(1,1) + 12*E(1,2) + 9*E(1,3)");
        let g = e(2, 1, 4).add(&e(2, 2, -1).scale(&k(5))).unwrap();
        assert_eq!(matrix_mul(&g, &PeriodicMatrix::identity(2)).unwrap(), g);
        assert_eq!(e(2, 3, 4), e(2, 1, 2));
    }

    #[test]
    fn eta_examples() {
        let a = LaurentCoeff::a();
        assert_eq!(eta_as(1, &e(2, 1, 3)).unwrap(), e(2, 1, 3).scale(&a));
        let got = eta_as(0, &two_three_t()).unwrap();
        assert_eq!(got, e(1, 1, 1).scale(&"2 + 3*a".parse().unwrap()));
        assert_eq!(eta_as(2, &two_three_t()).unwrap().to_string(), "2*E(1,1) + (3*a)*E(1,3)");
        assert!(eta_with(&k(0), 1, &two_three_t()).is_err());
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(det_tilde(&two_three_t()), "2 + 3*a".parse().unwrap());
        for n in 1..=3 {
            let b = q(3, 2);
            let mut g = PeriodicMatrix::identity(n);
            for i in 1..=n {
                g.add_entry(i, i - n, &LaurentCoeff::constant(-b.clone()));
            }
            let one_minus = LaurentCoeff::one() + LaurentCoeff::monomial(-b.clone(), -1);
            let d = det_tilde(&g);
            assert_eq!(d, one_minus.pow(n).unwrap());
            assert!(d.eval(&b).unwrap().is_zero());
        }
    }

    #[test]
    fn membership_examples() {
        let id = PeriodicMatrix::identity(2);
        let sl = |a0: i64| Membership::SlAt { a0: q(a0, 1) };
        assert!(membership(&id, &Membership::GlGeneric).unwrap());
        assert!(membership(&id, &sl(7)).unwrap());
        let sw = e(2, 1, 2).add(&e(2, 2, 1)).unwrap();
        assert_eq!(det_tilde(&sw), k(-1));
        assert!(membership(&sw, &Membership::GlGeneric).unwrap());
        assert!(!membership(&sw, &sl(1)).unwrap());
        let t = e(1, 1, 2);
        assert_eq!(det_tilde(&t), LaurentCoeff::a());
        assert!(membership(&t, &Membership::GlGeneric).unwrap());
        assert!(membership(&t, &sl(1)).unwrap());
        assert!(!membership(&t, &sl(2)).unwrap());
        assert!(membership(&t, &sl(0)).is_err());
        assert!(!membership(&PeriodicMatrix::zero(2), &Membership::GlGeneric).unwrap());
    }

    #[test]
    fn conjugation_examples() {
        let g = e(2, 1, 2).add(&e(2, 2, 5).scale(&k(3))).unwrap();
        assert_eq!(weyl_conjugate(&WeylSymmetry::identity(2), &g).unwrap(), g);
        let got = weyl_conjugate(&WeylSymmetry::rho(2), &e(2, 1, 2)).unwrap();
        assert_eq!(got, e(2, 0, 1));
        assert_eq!(got, e(2, 2, 3));
    }

    #[test]
    fn evaluation_examples() {
        let got = evaluate(&two_three_t(), 1);
        assert_eq!(got.to_string(), "2*xi[(1)|(1)] + 3*xi[(1)|(2)]");
        let g = two_three_t();
        let lhs = evaluate(&matrix_mul(&g, &g).unwrap(), 1);
        let rhs = evaluate(&g, 1).multiply(&evaluate(&g, 1)).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.to_string(), "4*xi[(1)|(1)] + 12*xi[(1)|(2)] + 9*xi[(1)|(3)]");
        let fin = e(2, 1, 2).add(&e(2, 2, 1)).unwrap().add(&e(2, 2, 2)).unwrap();
        assert!(evaluate(&fin, 3).is_finite());
    }

    #[test]
    fn witness_examples() {
        let p = [(CoordIndex::parse_text("c[(1)|(3)]", 1).unwrap(), q(1, 1))];
        let w = nonvanishing_witness(&p, &Rational::one()).unwrap();
        assert_eq!(w.matrix, e(1, 1, 3));
        assert_eq!(w.value, Rational::one());
        assert_eq!(det_tilde(&w.matrix), LaurentCoeff::monomial(Rational::one(), 2));

        let p = [
            (CoordIndex::parse_text("c[(1)|(1)]", 1).unwrap(), q(1, 1)),
            (CoordIndex::parse_text("c[(1)|(2)]", 1).unwrap(), q(-1, 1)),
        ];
        let w = nonvanishing_witness(&p, &Rational::one()).unwrap();
        assert_ne!(w.matrix.get(1, 1), w.matrix.get(1, 2));
        assert!(nonvanishing_witness(&[], &Rational::one()).is_err());
        let cancel = [
            (CoordIndex::parse_text("c[(1)|(1)]", 1).unwrap(), q(1, 1)),
            (CoordIndex::parse_text("c[(1)|(1)]", 1).unwrap(), q(-1, 1)),
        ];
        assert!(nonvanishing_witness(&cancel, &Rational::one()).is_err());
    }

    #[test]
    fn witness_search_skips_cancelling_levels() {
        // L = {1, 2} and Q = x_1 x_2, which vanishes on the first two
        // solutions of x_1 + x_2 = 1
        let p = [(CoordIndex::parse_text("c[(1,1)|(2,3)]", 1).unwrap(), q(1, 1))];
        let w = nonvanishing_witness(&p, &Rational::one()).unwrap();
        assert_eq!(w.value, q(-2, 1));
        for a0 in [q(2, 1), q(-1, 3)] {
            let w = nonvanishing_witness(&p, &a0).unwrap();
            assert_eq!(evaluate_polynomial(&p, &w.matrix).unwrap(), w.value);
            assert!(!w.value.is_zero());
            assert!(membership(&w.matrix, &Membership::SlAt { a0 }).unwrap());
        }
    }

    #[test]
    fn json_round_trip() {
        let g: PeriodicMatrix =
            serde_json::from_str(r#"{"n":2,"entries":[[1,3,"1"],[2,2,"1/2"]]}"#).unwrap();
        assert_eq!(g.get(1, 3), k(1));
        assert_eq!(g.get(4, 4), LaurentCoeff::constant(q(1, 2)));
        let back: PeriodicMatrix = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }

    pub(crate) fn arb_matrix(n: i64, w: i64) -> impl Strategy<Value = PeriodicMatrix> {
        prop::collection::vec((1..=n, 1..=n, -w..=w, -3i64..=3), 0..5).prop_map(move |es| {
            let mut g = PeriodicMatrix::zero(n);
            for (i, j, l, v) in es {
                g.add_entry(i, j + l * n, &k(v));
            }
            g
        })
    }

    fn arb_symmetry(n: i64) -> impl Strategy<Value = WeylSymmetry> {
        (Just((1..=n).collect::<Vec<i64>>()).prop_shuffle(), prop::collection::vec(-1i64..=1, n as usize))
            .prop_map(move |(p, s)| {
                WeylSymmetry::new(p.iter().zip(&s).map(|(p, s)| p + n * s).collect()).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn product_matches_direct_sum(
            (g, h) in (1i64..=3).prop_flat_map(|n| (arb_matrix(n, 2), arb_matrix(n, 2)))
        ) {
            prop_assert_eq!(matrix_mul(&g, &h).unwrap(), periodic_product(&g, &h));
        }

        #[test]
        fn eta_composition(
            (g, s, s2) in (1i64..=3).prop_flat_map(|n| (arb_matrix(n, 2), -1i64..=2, -1i64..=2))
        ) {
            let pairs = [
                (LaurentCoeff::from(q(2, 1)), LaurentCoeff::from(q(-1, 3))),
                (LaurentCoeff::a(), LaurentCoeff::monomial(Rational::one(), 64)),
            ];
            for (p, p2) in &pairs {
                let lhs = eta_with(p, s, &eta_with(p2, s2, &g).unwrap()).unwrap();
                let rhs = eta_with(&(p2 * &p.pow(s2).unwrap()), s * s2, &g).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn eta_is_multiplicative(
            (g, h, s) in (1i64..=3).prop_flat_map(|n| (arb_matrix(n, 1), arb_matrix(n, 1), -1i64..=2))
        ) {
            let lhs = eta_as(s, &matrix_mul(&g, &h).unwrap()).unwrap();
            let rhs = matrix_mul(&eta_as(s, &g).unwrap(), &eta_as(s, &h).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn eta_shift_is_invertible(g in (1i64..=3).prop_flat_map(|n| arb_matrix(n, 2))) {
            let inv = LaurentCoeff::monomial(Rational::one(), -1);
            let there = eta_as(1, &g).unwrap();
            prop_assert_eq!(eta_with(&inv, 1, &there).unwrap(), g);
        }

        #[test]
        fn eta_and_transpose(
            (g, s) in (1i64..=3).prop_flat_map(|n| (arb_matrix(n, 2), -1i64..=2))
        ) {
            let inv = LaurentCoeff::monomial(Rational::one(), -1);
            let lhs = transpose(&eta_as(s, &g).unwrap());
            let rhs = eta_with(&inv, s, &transpose(&g)).unwrap();
            prop_assert_eq!(lhs, rhs);
            let d = det_tilde_with(&inv, &transpose(&g)).unwrap();
            prop_assert_eq!(d, det_tilde(&g));
        }

        #[test]
        fn det_is_multiplicative(
            (g, h) in (1i64..=3).prop_flat_map(|n| (arb_matrix(n, 2), arb_matrix(n, 2)))
        ) {
            let lhs = det_tilde(&matrix_mul(&g, &h).unwrap());
            prop_assert_eq!(lhs, &det_tilde(&g) * &det_tilde(&h));
        }

        #[test]
        fn evaluation_is_multiplicative(
            (g, h, r) in (1i64..=2).prop_flat_map(|n| (arb_matrix(n, 1), arb_matrix(n, 1), 1usize..=2))
        ) {
            let lhs = evaluate(&matrix_mul(&g, &h).unwrap(), r);
            let rhs = evaluate(&g, r).multiply(&evaluate(&h, r)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn evaluation_intertwines_symmetries(
            (g, w, r) in (1i64..=3).prop_flat_map(|n| (arb_matrix(n, 1), arb_symmetry(n), 1usize..=2))
        ) {
            let lhs = evaluate(&weyl_conjugate(&w, &g).unwrap(), r);
            prop_assert_eq!(lhs, weyl_act(&w, &evaluate(&g, r)).unwrap());
            prop_assert_eq!(evaluate(&transpose(&g), r), transpose_antiauto(&evaluate(&g, r)));
            prop_assert_eq!(det_tilde(&weyl_conjugate(&w, &g).unwrap()), det_tilde(&g));
        }

        #[test]
        fn conjugation_is_an_action(
            (g, w, w2) in (1i64..=3).prop_flat_map(|n| (arb_matrix(n, 2), arb_symmetry(n), arb_symmetry(n)))
        ) {
            let lhs = weyl_conjugate(&w.compose(&w2), &g).unwrap();
            let rhs = weyl_conjugate(&w, &weyl_conjugate(&w2, &g).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn evaluation_intertwines_eta_and_psi(
            (g, s, r) in (1i64..=2).prop_flat_map(|n| (arb_matrix(n, 1), -1i64..=2, 1usize..=3))
        ) {
            let lhs = evaluate(&eta_as(s, &g).unwrap(), r);
            prop_assert_eq!(lhs, psi_as(s, &evaluate(&g, r)).unwrap());
        }

        #[test]
        fn transfer_of_evaluations(
            (p, r, a0) in (1i64..=2, 1usize..=2, prop_oneof![Just(1i64), Just(2), Just(-1)])
                .prop_flat_map(|(n, r, a0)| {
                    let deg = n as usize + r;
                    (prop::collection::vec(crate::schur::strategies::arb_index(n, deg, 1), 1..3), Just(r), Just(a0))
                })
        ) {
            // make a polynomial, find an SL witness and compare both sides
            let poly: Vec<(CoordIndex, Rational)> = p.into_iter().map(|x| (x, Rational::one())).collect();
            let a0 = q(a0, 1);
            let w = nonvanishing_witness(&poly, &a0).unwrap();
            let g = w.matrix;
            let n = g.n();
            let lhs = det_tilde_sharp_with(&a0.clone().into(), &evaluate(&g, n as usize + r)).unwrap();
            prop_assert_eq!(lhs, evaluate(&g, r));
        }
    }
}
