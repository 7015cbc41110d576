//! The representation π̃ of the loop algebra 𝔤𝔩ₙ[t,t⁻¹] on tensor space,
//! the generating sets X and Y of S̃(n,r), and decomposition of basis
//! elements into generators.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{LaurentCoeff, Rational};
use crate::schur::{
    identity, increasing_tuples, transpose_antiauto, weyl_act, window_indices, AlgebraElement,
    BasisIndex, WeylSymmetry,
};
use crate::semigroup::{matrix_mul, PeriodicMatrix};
use crate::weyl::bar;

/// `E_{s,t}` with `s ∈ 1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LoopGenerator {
    pub s: i64,
    pub t: i64,
}

impl LoopGenerator {
    /// Moves `(s, t)` to the row range `1..=n` along the period.
    pub fn new(n: i64, s: i64, t: i64) -> Self {
        let b = bar(s, n);
        LoopGenerator { s: b, t: t - (s - b) }
    }

    pub fn matrix(&self, n: i64) -> PeriodicMatrix {
        PeriodicMatrix::elementary(n, self.s, self.t)
    }
}

impl fmt::Display for LoopGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E({},{})", self.s, self.t)
    }
}

/// π̃(E_{s,t}) in S̃(n,r).
pub fn pi_tilde(n: i64, gen: LoopGenerator, r: usize) -> Result<AlgebraElement> {
    if r == 0 {
        return Err(Error::Invalid("degree must be positive".into()));
    }
    let LoopGenerator { s, t } = LoopGenerator::new(n, gen.s, gen.t);
    let mut out = AlgebraElement::zero(n, r);
    if s != t {
        for i in increasing_tuples(n, r - 1) {
            let mut top = i.to_vec();
            let mut bottom = i.to_vec();
            top.push(s);
            bottom.push(t);
            out.add_term(BasisIndex::from_tuples(n, &top, &bottom), &LaurentCoeff::one());
        }
    } else {
        for i in increasing_tuples(n, r) {
            let k = i.iter().filter(|&&z| z == s).count() as i64;
            out.add_term(BasisIndex::from_tuples(n, &i, &i), &LaurentCoeff::from_int(k));
        }
    }
    Ok(out)
}

/// π̃ extended linearly to a periodic matrix.
pub fn pi_tilde_matrix(g: &PeriodicMatrix, r: usize) -> Result<AlgebraElement> {
    let n = g.n();
    let mut out = AlgebraElement::zero(n, r);
    for (s, t, v) in g.entries() {
        out = out.add(&pi_tilde(n, LoopGenerator { s, t }, r)?.scale(v))?;
    }
    Ok(out)
}

/// `[g, h] = gh - hg` in 𝔐ₙ.
pub fn bracket(g: &PeriodicMatrix, h: &PeriodicMatrix) -> Result<PeriodicMatrix> {
    let gh = matrix_mul(g, h)?;
    let hg = matrix_mul(h, g)?;
    gh.add(&hg.scale(&LaurentCoeff::from_int(-1)))
}

/// Checks `π̃([g1, g2]) = π̃(g1)π̃(g2) - π̃(g2)π̃(g1)` in S̃(n,r).
pub fn lie_bracket_check(n: i64, g1: LoopGenerator, g2: LoopGenerator, r: usize) -> Result<bool> {
    let (m1, m2) = (g1.matrix(n), g2.matrix(n));
    let lhs = pi_tilde_matrix(&bracket(&m1, &m2)?, r)?;
    let (p1, p2) = (pi_tilde(n, g1, r)?, pi_tilde(n, g2, r)?);
    let rhs = p1.multiply(&p2)?.sub(&p2.multiply(&p1)?)?;
    Ok(lhs == rhs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    /// `ξ_{is,it}` for all `s`, `t`; index at most one.
    Y,
    /// `ξ_{is,i(s±1)}`.
    X,
}

/// The generators `ξ_{is,it}`, `i ∈ I(n,r-1)/Σ_{r-1}`. For `Y` the column
/// `t` ranges over offsets in `[-window, window]`; `X` ignores the window.
pub fn generator_set(kind: GeneratorKind, n: i64, r: usize, window: i64) -> Vec<BasisIndex> {
    let mut out = BTreeSet::new();
    if r == 0 {
        return Vec::new();
    }
    let cols = |s: i64| -> Vec<i64> {
        match kind {
            GeneratorKind::X => vec![s + 1, s - 1],
            GeneratorKind::Y => (1..=n)
                .flat_map(|j| (-window..=window).map(move |l| j + l * n))
                .collect(),
        }
    };
    for i in increasing_tuples(n, r - 1) {
        for s in 1..=n {
            for t in cols(s) {
                let mut top = i.to_vec();
                let mut bottom = i.to_vec();
                top.push(s);
                bottom.push(t);
                out.insert(BasisIndex::from_tuples(n, &top, &bottom));
            }
        }
    }
    out.into_iter().collect()
}

/// The first of the two halves of X: `t = s + 1`.
pub fn x_one(n: i64, r: usize) -> Vec<BasisIndex> {
    generator_set(GeneratorKind::X, n, r, 0)
        .into_iter()
        .filter(|x| x.pairs().iter().any(|&(t, b)| b == t + 1))
        .collect()
}

pub fn is_in_x(x: &BasisIndex) -> bool {
    let moved: Vec<i64> = x
        .pairs()
        .iter()
        .filter(|(t, b)| t != b)
        .map(|(t, b)| b - t)
        .collect();
    moved.len() == 1 && moved[0].abs() == 1
}

/// A polynomial expression in generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Expr {
    Gen { index: BasisIndex },
    Scale { by: Rational, expr: Box<Expr> },
    Add { terms: Vec<Expr> },
    Mul { left: Box<Expr>, right: Box<Expr> },
}

impl Expr {
    pub fn gen(x: BasisIndex) -> Expr {
        Expr::Gen { index: x }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul {
            left: Box::new(a),
            right: Box::new(b),
        }
    }

    pub fn scale(by: Rational, e: Expr) -> Expr {
        if by.is_one() {
            return e;
        }
        Expr::Scale {
            by,
            expr: Box::new(e),
        }
    }

    pub fn eval(&self, n: i64, r: usize) -> Result<AlgebraElement> {
        match self {
            Expr::Gen { index } => Ok(AlgebraElement::basis(index.clone())),
            Expr::Scale { by, expr } => Ok(expr.eval(n, r)?.scale(&by.clone().into())),
            Expr::Add { terms } => {
                let mut acc = AlgebraElement::zero(n, r);
                for t in terms {
                    acc = acc.add(&t.eval(n, r)?)?;
                }
                Ok(acc)
            }
            Expr::Mul { left, right } => left.eval(n, r)?.multiply(&right.eval(n, r)?),
        }
    }

    pub fn leaves(&self) -> Vec<&BasisIndex> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a BasisIndex>) {
        match self {
            Expr::Gen { index } => out.push(index),
            Expr::Scale { expr, .. } => expr.collect_leaves(out),
            Expr::Add { terms } => terms.iter().for_each(|t| t.collect_leaves(out)),
            Expr::Mul { left, right } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
        }
    }

    /// Substitutes an expression for every generator.
    pub fn substitute(&self, f: &mut impl FnMut(&BasisIndex) -> Result<Expr>) -> Result<Expr> {
        Ok(match self {
            Expr::Gen { index } => f(index)?,
            Expr::Scale { by, expr } => Expr::scale(by.clone(), expr.substitute(f)?),
            Expr::Add { terms } => Expr::Add {
                terms: terms.iter().map(|t| t.substitute(f)).collect::<Result<_>>()?,
            },
            Expr::Mul { left, right } => Expr::mul(left.substitute(f)?, right.substitute(f)?),
        })
    }

    /// The image under the anti-automorphism ξ_{i,j} ↦ ξ_{j,i}.
    pub fn transposed(&self) -> Expr {
        match self {
            Expr::Gen { index } => Expr::gen(index.transposed()),
            Expr::Scale { by, expr } => Expr::scale(by.clone(), expr.transposed()),
            Expr::Add { terms } => Expr::Add {
                terms: terms.iter().map(Expr::transposed).collect(),
            },
            Expr::Mul { left, right } => Expr::mul(right.transposed(), left.transposed()),
        }
    }
}

/// Writes basis elements as expressions in generators, with every
/// result checked by multiplying it out.
#[derive(Default)]
pub struct Decomposer {
    y_memo: HashMap<BasisIndex, Expr>,
    x_memo: HashMap<BasisIndex, Expr>,
    finite: HashMap<(i64, usize), FiniteSpan>,
}

impl Decomposer {
    pub fn new() -> Self {
        Decomposer::default()
    }

    pub fn decompose(&mut self, x: &BasisIndex, kind: GeneratorKind) -> Result<Expr> {
        let e = match kind {
            GeneratorKind::Y => self.over_y(x)?,
            GeneratorKind::X => self.over_x(x)?,
        };
        let back = e.eval(x.n(), x.r())?;
        if back != AlgebraElement::basis(x.clone()) {
            return Err(Error::Verification(format!(
                "decomposition of {x} multiplies out to {back}"
            )));
        }
        let bad = match kind {
            GeneratorKind::Y => e.leaves().into_iter().find(|l| l.index_count() > 1),
            GeneratorKind::X => e.leaves().into_iter().find(|l| !is_in_x(l)),
        };
        if let Some(l) = bad {
            return Err(Error::Verification(format!("leaf {l} is not a {kind:?} generator")));
        }
        Ok(e)
    }

    /// Induction on the number of moved positions: with `i_1 ≠ j_1` and
    /// `j' = i_1 j_2 … j_r`, `ξ_{i,j'} ξ_{j',j} = a ξ_{i,j} + Σ a_k ξ_{i,k}`
    /// with every other term of lower index.
    fn over_y(&mut self, x: &BasisIndex) -> Result<Expr> {
        if let Some(e) = self.y_memo.get(x) {
            return Ok(e.clone());
        }
        let m = x.index_count();
        if m <= 1 {
            return Ok(Expr::gen(x.clone()));
        }
        let n = x.n();
        let (i, j) = (x.tops(), x.bottoms());
        let p0 = (0..x.r()).find(|&k| i[k] != j[k]).expect("index at least two");
        let mut jp = j.clone();
        jp[p0] = i[p0];
        let left = BasisIndex::from_tuples(n, &i, &jp);
        let right = BasisIndex::from_tuples(n, &jp, &j);
        let prod = AlgebraElement::basis(left.clone()).multiply(&AlgebraElement::basis(right.clone()))?;
        let lead = prod
            .coeff(x)
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::Verification(format!("no leading term of {x} in {prod}")))?;
        let mut terms = vec![Expr::mul(self.over_y(&left)?, Expr::gen(right))];
        for (k, c) in prod.terms() {
            if k == x {
                continue;
            }
            if k.index_count() >= m {
                return Err(Error::Verification(format!(
                    "{k} in the product for {x} has index {}",
                    k.index_count()
                )));
            }
            let c = c
                .as_constant()
                .ok_or_else(|| Error::Verification(format!("coefficient {c} is not rational")))?;
            terms.push(Expr::scale(-c, self.over_y(k)?));
        }
        let e = Expr::scale(lead.recip()?, Expr::Add { terms });
        self.y_memo.insert(x.clone(), e.clone());
        Ok(e)
    }

    /// Requires `r < n`. Decomposes over Y, then writes each member of Y
    /// through X.
    fn over_x(&mut self, x: &BasisIndex) -> Result<Expr> {
        let (n, r) = (x.n(), x.r());
        if r >= n as usize {
            return Err(Error::Precondition(format!(
                "X generates S̃({n},{r}) only when r < n"
            )));
        }
        let e = self.over_y(x)?;
        e.substitute(&mut |y| self.y_over_x(y))
    }

    fn y_over_x(&mut self, y: &BasisIndex) -> Result<Expr> {
        if let Some(e) = self.x_memo.get(y) {
            return Ok(e.clone());
        }
        if is_in_x(y) {
            return Ok(Expr::gen(y.clone()));
        }
        let n = y.n();
        let moved: Vec<(i64, i64)> = y.pairs().iter().copied().filter(|(t, b)| t != b).collect();
        let (s, t) = match moved.as_slice() {
            [] => y.pairs()[0],
            [one] => *one,
            _ => return Err(Error::Precondition(format!("{y} is not in Y"))),
        };
        let e = if t < s {
            // ξ_{is,it} with t < s is the transpose of a Y element with s ≤ t
            self.y_over_x(&y.transposed())?.transposed()
        } else if t < s + n {
            let k = s - 1;
            let down = WeylSymmetry::rho(n).pow(k);
            let up = down.inverse();
            let z = down.act_index(y);
            debug_assert!(z.is_finite());
            let e = self.finite_over_x(&z)?;
            e.substitute(&mut |leaf| Ok(Expr::gen(up.act_index(leaf))))?
        } else {
            // ξ_{is,is'} ξ_{is',it} = ξ_{is,it} for s < s' < s+n avoiding
            // the residues of i
            let rest: Vec<(i64, i64)> = {
                let mut v = y.pairs().to_vec();
                let pos = v.iter().position(|&p| p == (s, t)).expect("moved pair");
                v.remove(pos);
                v
            };
            let used: Vec<i64> = rest.iter().map(|&(a, _)| bar(a, n)).collect();
            let sp = (s + 1..s + n)
                .find(|&z| !used.contains(&bar(z, n)))
                .ok_or_else(|| Error::Precondition(format!("no free residue for {y}")))?;
            let with = |a: i64, b: i64| {
                let mut v = rest.clone();
                v.push((a, b));
                BasisIndex::from_pairs(n, &v)
            };
            let (l, rgt) = (with(s, sp), with(sp, t));
            let l_e = self.y_over_x(&l)?;
            let r_e = self.y_over_x(&rgt)?;
            Expr::mul(l_e, r_e)
        };
        self.x_memo.insert(y.clone(), e.clone());
        Ok(e)
    }

    fn finite_over_x(&mut self, z: &BasisIndex) -> Result<Expr> {
        let key = (z.n(), z.r());
        if let std::collections::hash_map::Entry::Vacant(slot) = self.finite.entry(key) {
            slot.insert(FiniteSpan::build(z.n(), z.r())?);
        }
        self.finite[&key].express(z)
    }
}

/// Words in the generators X ∩ S(n,r), row-reduced until they span S(n,r).
struct FiniteSpan {
    n: i64,
    r: usize,
    gens: Vec<BasisIndex>,
    words: Vec<Vec<usize>>,
    rows: Vec<Row>,
}

struct Row {
    pivot: BasisIndex,
    vec: AlgebraElement,
    /// Coefficients over `words`.
    combo: Vec<Rational>,
}

impl FiniteSpan {
    fn build(n: i64, r: usize) -> Result<FiniteSpan> {
        let gens: Vec<BasisIndex> = generator_set(GeneratorKind::X, n, r, 0)
            .into_iter()
            .filter(BasisIndex::is_finite)
            .collect();
        let dim = window_indices(n, r, 0).len();
        let mut span = FiniteSpan {
            n,
            r,
            gens,
            words: Vec::new(),
            rows: Vec::new(),
        };
        let mut values: Vec<AlgebraElement> = Vec::new();
        for g in 0..span.gens.len() {
            let v = AlgebraElement::basis(span.gens[g].clone());
            if span.insert(vec![g], &v) {
                values.push(v);
            }
        }
        let mut next = 0;
        while span.rows.len() < dim && next < values.len() {
            let base = values[next].clone();
            let word = span.words[next].clone();
            for g in 0..span.gens.len() {
                let v = AlgebraElement::basis(span.gens[g].clone()).multiply(&base)?;
                let mut w = vec![g];
                w.extend(&word);
                if span.insert(w, &v) {
                    values.push(v);
                }
            }
            next += 1;
        }
        if span.rows.len() < dim {
            return Err(Error::Verification(format!(
                "X ∩ S({n},{r}) spans only {} of {dim} dimensions",
                span.rows.len()
            )));
        }
        Ok(span)
    }

    /// Reduces `v` against the rows; returns the residue and the combination
    /// of words subtracted.
    fn reduce(&self, v: &AlgebraElement) -> (AlgebraElement, Vec<Rational>) {
        let mut v = v.clone();
        let mut used = vec![Rational::zero(); self.words.len()];
        for row in &self.rows {
            let c = v.coeff(&row.pivot);
            if c.is_zero() {
                continue;
            }
            let c = c.as_constant().expect("rational entries");
            let f = c * row.vec.coeff(&row.pivot).as_constant().expect("rational").recip().expect("pivot");
            v = v.sub(&row.vec.scale(&f.clone().into())).expect("same context");
            for (k, x) in row.combo.iter().enumerate() {
                used[k] = used[k].clone() + f.clone() * x.clone();
            }
        }
        (v, used)
    }

    fn insert(&mut self, word: Vec<usize>, v: &AlgebraElement) -> bool {
        let (res, used) = self.reduce(v);
        let pivot = match res.terms().next() {
            Some((p, _)) => p.clone(),
            None => return false,
        };
        self.words.push(word);
        for row in &mut self.rows {
            row.combo.push(Rational::zero());
        }
        let mut combo: Vec<Rational> = used.into_iter().map(|x| -x).collect();
        combo.push(Rational::one());
        self.rows.push(Row {
            pivot,
            vec: res,
            combo,
        });
        true
    }

    fn express(&self, z: &BasisIndex) -> Result<Expr> {
        let (res, used) = self.reduce(&AlgebraElement::basis(z.clone()));
        if !res.is_zero() {
            return Err(Error::Verification(format!("{z} is outside the span")));
        }
        let mut terms = Vec::new();
        for (k, c) in used.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut it = self.words[k].iter().map(|&g| Expr::gen(self.gens[g].clone()));
            let first = it.next().expect("nonempty word");
            let word = it.fold(first, Expr::mul);
            terms.push(Expr::scale(c, word));
        }
        debug_assert_eq!(
            Expr::Add { terms: terms.clone() }.eval(self.n, self.r).ok(),
            Some(AlgebraElement::basis(z.clone()))
        );
        Ok(Expr::Add { terms })
    }
}

/// ψₐ∘π̃ and π̃∘ηₐ agree on `E_{s,t}`, `t ≠ s`.
pub fn psi_pi_check(n: i64, gen: LoopGenerator, r: usize) -> Result<bool> {
    let lhs = crate::hom::psi_a(&pi_tilde(n, gen, r)?)?;
    let eta = crate::semigroup::eta_with(&LaurentCoeff::a(), 0, &gen.matrix(n))?;
    Ok(lhs == pi_tilde_matrix(&eta, r)?)
}

/// det̃ₐ^#∘π̃^{n+r} and π̃^r agree on `gen`, for `n ≥ 2` and generators
/// of 𝔰𝔩ₙ[t,t⁻¹].
pub fn det_pi_check(n: i64, gen: LoopGenerator, r: usize) -> Result<bool> {
    if n < 2 {
        return Err(Error::Precondition("the loop algebra needs n ≥ 2".into()));
    }
    let big = pi_tilde(n, gen, n as usize + r)?;
    Ok(crate::hom::det_tilde_sharp(&big)? == pi_tilde(n, gen, r)?)
}

/// Images of the finite generators `E_{s,t}`, `s, t ∈ 1..=n`, sum to the
/// identity on the diagonal.
pub fn diagonal_sum(n: i64, r: usize) -> Result<bool> {
    let mut acc = AlgebraElement::zero(n, r);
    for s in 1..=n {
        acc = acc.add(&pi_tilde(n, LoopGenerator { s, t: s }, r)?)?;
    }
    Ok(acc == identity(n, r).scale(&LaurentCoeff::from_int(r as i64)))
}

/// ρ carries π̃(E_{s,t}) to π̃(E_{s-1,t-1}).
pub fn rho_check(n: i64, gen: LoopGenerator, r: usize) -> Result<bool> {
    let lhs = weyl_act(&WeylSymmetry::rho(n), &pi_tilde(n, gen, r)?)?;
    let rhs = pi_tilde(n, LoopGenerator::new(n, gen.s - 1, gen.t - 1), r)?;
    Ok(lhs == rhs && transpose_antiauto(&lhs) == pi_tilde(n, LoopGenerator::new(n, gen.t - 1, gen.s - 1), r)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{act, weyl_right_act, TensorVector};
    use crate::weyl::{all_perms, AffineWeylElement};
    use proptest::prelude::*;

    fn ix(s: &str, n: i64) -> BasisIndex {
        BasisIndex::parse_text(s, n).unwrap()
    }

    fn g(s: i64, t: i64) -> LoopGenerator {
        LoopGenerator { s, t }
    }

    #[test]
    fn pi_examples() {
        let got = pi_tilde(2, g(1, 2), 2).unwrap();
        assert_eq!(got.to_string(), "xi[(1,1)|(1,2)] + xi[(1,2)|(2,2)]");
        let got = pi_tilde(2, g(1, 1), 2).unwrap();
        assert_eq!(got.to_string(), "2*xi[(1,1)|(1,1)] + xi[(1,2)|(1,2)]");
        let got = pi_tilde(2, g(1, 3), 1).unwrap();
        assert_eq!(got, AlgebraElement::basis(ix("xi[(1)|(3)]", 2)));
        assert!(pi_tilde(2, g(1, 3), 0).is_err());
        assert_eq!(LoopGenerator::new(2, 3, 5), g(1, 3));
    }

    /// `E_{s,t} v_q = Σ_k [q_k ≡ t] v_{q + (s - t) e_k}`.
    fn loop_action(n: i64, gen: LoopGenerator, v: &TensorVector) -> TensorVector {
        let mut out = TensorVector::zero(n, v.r());
        for (q, c) in v.terms() {
            for k in 0..q.len() {
                if bar(q[k], n) == bar(gen.t, n) {
                    let mut p = q.clone();
                    p[k] += gen.s - gen.t;
                    out.add_term(p, c);
                }
            }
        }
        out
    }

    #[test]
    fn pi_matches_the_loop_action() {
        for n in 1..=3i64 {
            for r in 1..=3usize {
                for s in 1..=n {
                    for t in s - 2 * n..=s + 2 * n {
                        let x = pi_tilde(n, g(s, t), r).unwrap();
                        for q in window_indices(n, r, 1).iter().map(|z| z.bottoms()) {
                            let v = TensorVector::basis(n, &q);
                            assert_eq!(act(&x, &v).unwrap(), loop_action(n, g(s, t), &v));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn finite_generators_give_the_finite_images() {
        // on finite tuples, π̃(E_{s,t}) with s,t ∈ 1..n is the gl_n action
        for n in 2..=3i64 {
            for r in 1..=3usize {
                for s in 1..=n {
                    for t in 1..=n {
                        let x = pi_tilde(n, g(s, t), r).unwrap();
                        assert!(x.is_finite());
                        for q in crate::schur::window_indices(n, r, 0).iter().map(|z| z.tops()) {
                            let v = TensorVector::basis(n, &q);
                            assert_eq!(act(&x, &v).unwrap(), loop_action(n, g(s, t), &v));
                        }
                    }
                }
            }
        }
        assert!(diagonal_sum(3, 2).unwrap());
    }

    #[test]
    fn images_commute_with_the_weyl_action() {
        let n = 2;
        let r = 2;
        for s in 1..=n {
            for t in -2..=4 {
                let x = pi_tilde(n, g(s, t), r).unwrap();
                for q in [[1i64, 2], [0, 3], [2, 2]] {
                    let v = TensorVector::basis(n, &q);
                    for p in all_perms(r) {
                        let w = AffineWeylElement::new(p.clone(), &[1, -1]).unwrap();
                        let lhs = weyl_right_act(&act(&x, &v).unwrap(), &w).unwrap();
                        let rhs = act(&x, &weyl_right_act(&v, &w).unwrap()).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn bracket_examples() {
        assert!(lie_bracket_check(2, g(1, 2), g(2, 1), 2).unwrap());
        let two = bracket(&g(1, 2).matrix(2), &g(2, 1).matrix(2)).unwrap();
        assert_eq!(two.to_string(), "E(1,1) + -1*E(2,2)");
        assert!(lie_bracket_check(2, g(1, 2), g(1, 2), 2).unwrap());
        assert!(lie_bracket_check(2, g(1, 4), g(2, 1), 2).unwrap());
    }

    #[test]
    fn generator_sets() {
        let x1 = x_one(3, 1);
        let want: Vec<BasisIndex> = ["xi[(1)|(2)]", "xi[(2)|(3)]", "xi[(3)|(4)]"]
            .iter()
            .map(|s| ix(s, 3))
            .collect();
        assert_eq!(x1, want);
        for (n, r) in [(2i64, 2usize), (3, 2), (3, 3), (4, 2)] {
            let orbits = increasing_tuples(n, r - 1).len();
            assert_eq!(x_one(n, r).len(), n as usize * orbits);
            let x: BTreeSet<BasisIndex> = generator_set(GeneratorKind::X, n, r, 0).into_iter().collect();
            let y: BTreeSet<BasisIndex> = generator_set(GeneratorKind::Y, n, r, 1).into_iter().collect();
            assert!(x.is_subset(&y));
            assert!(y.iter().all(|z| z.index_count() <= 1));
        }
    }

    #[test]
    fn transfer_of_generators() {
        assert!(det_pi_check(1, g(1, 2), 1).is_err());
        for n in 2..=3i64 {
            for r in 1..=3usize {
                for s in 1..=n {
                    for t in [s + 1, s - 1] {
                        assert!(det_pi_check(n, g(s, t), r).unwrap(), "n={n} r={r} E({s},{t})");
                    }
                }
            }
        }
    }

    #[test]
    fn projection_of_generators() {
        for n in 1..=3i64 {
            for r in 1..=2usize {
                for s in 1..=n {
                    for t in s - 2 * n..=s + 2 * n {
                        if t != s {
                            assert!(psi_pi_check(n, g(s, t), n as usize + r).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rotation_of_generators() {
        for s in 1..=3 {
            for t in -3..=6 {
                assert!(rho_check(3, g(s, t), 2).unwrap());
            }
        }
    }

    #[test]
    fn y_decomposition_examples() {
        let mut d = Decomposer::new();
        let e = ix("xi[(1,2)|(1,2)]", 2);
        assert_eq!(d.decompose(&e, GeneratorKind::Y).unwrap(), Expr::gen(e));
        let e = ix("xi[(1,2)|(1,5)]", 2);
        assert_eq!(d.decompose(&e, GeneratorKind::Y).unwrap(), Expr::gen(e));
        let x = ix("xi[(1,1)|(2,2)]", 2);
        let expr = d.decompose(&x, GeneratorKind::Y).unwrap();
        assert!(expr.leaves().len() > 1);
        assert_eq!(expr.eval(2, 2).unwrap(), AlgebraElement::basis(x));
        let js = serde_json::to_value(&expr).unwrap();
        assert_eq!(js["op"], "scale");
        let back: Expr = serde_json::from_value(js).unwrap();
        assert_eq!(back, expr);
    }

    #[test]
    fn y_decomposition_on_windows() {
        let mut d = Decomposer::new();
        for (n, r) in [(1i64, 3usize), (2, 2), (2, 3), (3, 2)] {
            for x in window_indices(n, r, 1) {
                d.decompose(&x, GeneratorKind::Y).unwrap();
            }
        }
    }

    #[test]
    fn x_decomposition() {
        let mut d = Decomposer::new();
        for (n, r) in [(2i64, 1usize), (3, 1), (3, 2)] {
            for x in window_indices(n, r, 1) {
                let e = d.decompose(&x, GeneratorKind::X).unwrap();
                assert!(e.leaves().iter().all(|l| is_in_x(l)));
            }
        }
        let far = ix("xi[(1,2)|(2,9)]", 3);
        d.decompose(&far, GeneratorKind::X).unwrap();
        assert!(d.decompose(&ix("xi[(1,1)|(1,2)]", 2), GeneratorKind::X).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn brackets_are_preserved(
            (n, r, s1, t1, s2, t2) in (1i64..=3, 1usize..=3).prop_flat_map(|(n, r)| {
                (Just(n), Just(r), 1..=n, -2 * n..=3 * n, 1..=n, -2 * n..=3 * n)
            })
        ) {
            prop_assert!(lie_bracket_check(n, g(s1, t1), g(s2, t2), r).unwrap());
        }
    }
}
