//! Maps between affine Schur algebras: ψ_{p,s}, the projection ψ_p onto
//! the finite subalgebra, the transfer det̃_p^# and its finite version det*.
//!
//! The parameter `p` is any unit of ℚ[a,a⁻¹], i.e. `c·a^k`. The usual
//! choice is `p = a`; a rational `p` specializes the parameter.

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::dual::RowFiniteMap;
use crate::error::{Error, Result};
use crate::laurent::LaurentCoeff;
use crate::schur::{window_indices, AlgebraElement, BasisIndex};
use crate::weyl::{all_perms, bar, offset, Perm, StabilizerDescriptor};

fn check_unit(p: &LaurentCoeff) -> Result<()> {
    match p.as_unit() {
        Some(_) => Ok(()),
        None => Err(Error::NotUnit(p.to_string())),
    }
}

/// `[Σ_{i,j} : Σ_{i,j,ε}]` for the split of `x`.
pub fn offset_index(x: &BasisIndex) -> u64 {
    let (i, j, e) = x.split();
    let r = i.len();
    let coarse: SmallVec<[(i64, i64); 8]> = (0..r).map(|m| (i[m], j[m])).collect();
    let fine: SmallVec<[(i64, i64, i64); 8]> = (0..r).map(|m| (i[m], j[m], e[m])).collect();
    StabilizerDescriptor::from_keys(&coarse).order() / StabilizerDescriptor::from_keys(&fine).order()
}

/// `ψ_{p,s}` on one basis element: `ξ_{i,j+nε} ↦ p^{ht ε} ξ_{i,j+nsε}` for
/// `s ≠ 0`, and `p^{ht ε} [Σ_{i,j}:Σ_{i,j,ε}] ξ_{i,j}` for `s = 0`.
pub fn psi_basis(p: &LaurentCoeff, s: i64, x: &BasisIndex) -> Result<(BasisIndex, LaurentCoeff)> {
    check_unit(p)?;
    let n = x.n();
    let c = p.pow(x.height())?;
    if s == 0 {
        let finite: SmallVec<[(i64, i64); 8]> =
            x.pairs().iter().map(|&(t, b)| (t, bar(b, n))).collect();
        let k = offset_index(x) as i64;
        return Ok((BasisIndex::from_pairs(n, &finite), c.scale(&k.into())));
    }
    let moved: SmallVec<[(i64, i64); 8]> = x
        .pairs()
        .iter()
        .map(|&(t, b)| (t, bar(b, n) + n * s * offset(b, n)))
        .collect();
    Ok((BasisIndex::from_pairs(n, &moved), c))
}

pub fn psi_with(p: &LaurentCoeff, s: i64, x: &AlgebraElement) -> Result<AlgebraElement> {
    check_unit(p)?;
    x.map_linear(x.n(), x.r(), |y| {
        let (z, c) = psi_basis(p, s, y)?;
        Ok(AlgebraElement::term(z, c))
    })
}

/// ψ_{a,s}; `s = 0` gives ψ_{a,0}.
pub fn psi_as(s: i64, x: &AlgebraElement) -> Result<AlgebraElement> {
    psi_with(&LaurentCoeff::a(), s, x)
}

/// ψ_a, onto the finite subalgebra.
pub fn psi_a(x: &AlgebraElement) -> Result<AlgebraElement> {
    psi_with(&LaurentCoeff::a(), 0, x)
}

/// ψ_a followed by the inclusion S(n,r) ⊂ S̃(n,r). Elements are stored
/// with the same index type in both, so the inclusion is the identity.
pub fn psi_a0(x: &AlgebraElement) -> Result<AlgebraElement> {
    embed_finite(&psi_a(x)?)
}

pub fn embed_finite(x: &AlgebraElement) -> Result<AlgebraElement> {
    if !x.is_finite() {
        return Err(Error::Precondition(format!("{x} is not in the finite subalgebra")));
    }
    Ok(x.clone())
}

/// Ways to write the orbit `x` of degree `n+r` as `D(σ,ε) ⊎ y`, where
/// `D(σ,ε)` holds the pairs `(m, σ(m) + nε_m)`, `m = 1..n`.
///
/// Returns `(sgn σ, ht ε, y)` per decomposition.
pub fn det_splittings(x: &BasisIndex) -> Vec<(i64, i64, BasisIndex)> {
    let n = x.n();
    let mut values: Vec<((i64, i64), usize)> = Vec::new();
    for &pr in x.pairs() {
        match values.last_mut() {
            Some((v, k)) if *v == pr => *k += 1,
            _ => values.push((pr, 1)),
        }
    }
    if x.r() < n as usize {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut images: Vec<usize> = Vec::with_capacity(n as usize);
    choose(n, 1, &mut values, &mut images, 0, &mut out);
    out
}

fn choose(
    n: i64,
    m: i64,
    values: &mut Vec<((i64, i64), usize)>,
    images: &mut Vec<usize>,
    ht: i64,
    out: &mut Vec<(i64, i64, BasisIndex)>,
) {
    if m > n {
        let rest: Vec<(i64, i64)> = values
            .iter()
            .flat_map(|&(v, k)| std::iter::repeat_n(v, k))
            .collect();
        let sign = Perm::from_images(images).expect("residues form a permutation").sign();
        out.push((sign, ht, BasisIndex::from_pairs(n, &rest)));
        return;
    }
    for k in 0..values.len() {
        let ((t, b), cnt) = values[k];
        if t != m || cnt == 0 {
            continue;
        }
        let res = bar(b, n) as usize;
        if images.contains(&res) {
            continue;
        }
        values[k].1 -= 1;
        images.push(res);
        choose(n, m + 1, values, images, ht + offset(b, n), out);
        images.pop();
        values[k].1 += 1;
    }
}

/// det̃_p^#: S̃(n,n+r) → S̃(n,r), dual to multiplication by det̃_p.
///
/// The coefficient of `ξ_y` in the image of `ξ_x` is
/// `Σ sgn σ · p^{ht ε}` over decompositions `x = D(σ,ε) ⊎ y`.
pub fn det_tilde_sharp_with(p: &LaurentCoeff, x: &AlgebraElement) -> Result<AlgebraElement> {
    check_unit(p)?;
    let n = x.n();
    if x.r() < n as usize {
        return Err(Error::Context(format!(
            "det transfer needs degree at least {n}, got {}",
            x.r()
        )));
    }
    let r = x.r() - n as usize;
    x.map_linear(n, r, |y| {
        let mut out = AlgebraElement::zero(n, r);
        for (sign, ht, z) in det_splittings(y) {
            out.add_term(z, &p.pow(ht)?.scale(&sign.into()));
        }
        Ok(out)
    })
}

pub fn det_tilde_sharp(x: &AlgebraElement) -> Result<AlgebraElement> {
    det_tilde_sharp_with(&LaurentCoeff::a(), x)
}

/// det*: S(n,n+r) → S(n,r), by direct evaluation of the signed pairing
/// over all finite targets.
pub fn det_star(x: &AlgebraElement) -> Result<AlgebraElement> {
    let n = x.n();
    if x.r() < n as usize {
        return Err(Error::Context(format!(
            "det* needs degree at least {n}, got {}",
            x.r()
        )));
    }
    if !x.is_finite() {
        return Err(Error::Precondition(format!("{x} is not in the finite subalgebra")));
    }
    let r = x.r() - n as usize;
    let targets = window_indices(n, r, 0);
    let nu = n as usize;
    x.map_linear(n, r, |xi| {
        let mut out = AlgebraElement::zero(n, r);
        for y in &targets {
            let (p, q) = (y.tops(), y.bottoms());
            let mut total = 0i64;
            for s in all_perms(nu) {
                let top: Vec<i64> = (1..=n).chain(p.iter().copied()).collect();
                let bottom: Vec<i64> = (0..nu)
                    .map(|m| s.at(m) as i64 + 1)
                    .chain(q.iter().copied())
                    .collect();
                if BasisIndex::from_tuples(n, &top, &bottom) == *xi {
                    total += s.sign();
                }
            }
            out.add_term(y.clone(), &LaurentCoeff::from_int(total));
        }
        Ok(out)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HomKind {
    PsiAs { s: i64 },
    PsiA,
    EmbedFinite,
    DetStar,
    DetTildeSharp,
}

/// A map between Schur algebras with its source context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomDescriptor {
    #[serde(flatten)]
    pub kind: HomKind,
    pub n: i64,
    pub r: usize,
}

impl HomDescriptor {
    pub fn new(kind: HomKind, n: i64, r: usize) -> Result<Self> {
        if matches!(kind, HomKind::DetStar | HomKind::DetTildeSharp) && r < n as usize {
            return Err(Error::Context(format!("det maps need r ≥ n, got r={r}, n={n}")));
        }
        Ok(HomDescriptor { kind, n, r })
    }

    /// `(n, r')` of the target.
    pub fn target(&self) -> (i64, usize) {
        match self.kind {
            HomKind::DetStar | HomKind::DetTildeSharp => (self.n, self.r - self.n as usize),
            _ => (self.n, self.r),
        }
    }

    pub fn apply(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        if x.n() != self.n || x.r() != self.r {
            return Err(Error::Context(format!(
                "map from S̃({},{}) applied to an element of S̃({},{})",
                self.n,
                self.r,
                x.n(),
                x.r()
            )));
        }
        match self.kind {
            HomKind::PsiAs { s } => psi_as(s, x),
            HomKind::PsiA => psi_a(x),
            HomKind::EmbedFinite => embed_finite(x),
            HomKind::DetStar => det_star(x),
            HomKind::DetTildeSharp => det_tilde_sharp(x),
        }
    }
}

/// The coalgebra map whose transpose is ψ_{p,s}.
pub struct PsiDual {
    pub p: LaurentCoeff,
    pub s: i64,
}

impl RowFiniteMap for PsiDual {
    fn row(&self, target: &BasisIndex) -> Vec<(BasisIndex, LaurentCoeff)> {
        let (z, c) = psi_basis(&self.p, self.s, target).expect("parameter is a unit");
        vec![(z, c)]
    }

    fn column(&self, source: &BasisIndex, bound: i64) -> Vec<(BasisIndex, LaurentCoeff)> {
        let n = source.n();
        if self.s != 0 {
            let mut back: SmallVec<[(i64, i64); 8]> = SmallVec::new();
            for &(t, b) in source.pairs() {
                let e = offset(b, n);
                if e % self.s != 0 || (e / self.s).abs() > bound {
                    return Vec::new();
                }
                back.push((t, bar(b, n) + n * (e / self.s)));
            }
            let w = BasisIndex::from_pairs(n, &back);
            return self.row(&w).into_iter().map(|(_, c)| (w.clone(), c)).collect();
        }
        if !source.is_finite() {
            return Vec::new();
        }
        let mut out: Vec<(BasisIndex, LaurentCoeff)> = Vec::new();
        let r = source.r();
        let span = (2 * bound + 1) as usize;
        let mut eps = vec![0usize; r];
        loop {
            let moved: Vec<(i64, i64)> = source
                .pairs()
                .iter()
                .zip(&eps)
                .map(|(&(t, b), &e)| (t, b + n * (e as i64 - bound)))
                .collect();
            let w = BasisIndex::from_pairs(n, &moved);
            if !out.iter().any(|(v, _)| *v == w) {
                let c = self.row(&w).remove(0).1;
                out.push((w, c));
            }
            let mut k = 0;
            while k < r && eps[k] + 1 == span {
                eps[k] = 0;
                k += 1;
            }
            if k == r {
                break;
            }
            eps[k] += 1;
        }
        out
    }
}

/// Multiplication by det̃_p, from the coordinate ring of degree `r` to
/// degree `n + r`; its transpose is det̃_p^#.
pub struct DetMultiplication {
    pub p: LaurentCoeff,
}

impl RowFiniteMap for DetMultiplication {
    fn row(&self, target: &BasisIndex) -> Vec<(BasisIndex, LaurentCoeff)> {
        let x = AlgebraElement::basis(target.clone());
        det_tilde_sharp_with(&self.p, &x)
            .expect("parameter is a unit and degree fits")
            .terms()
            .map(|(z, c)| (z.clone(), c.clone()))
            .collect()
    }

    fn column(&self, source: &BasisIndex, bound: i64) -> Vec<(BasisIndex, LaurentCoeff)> {
        let n = source.n();
        let nu = n as usize;
        let mut out: Vec<(BasisIndex, LaurentCoeff)> = Vec::new();
        let span = (2 * bound + 1) as usize;
        for s in all_perms(nu) {
            let mut eps = vec![0usize; nu];
            loop {
                let mut pairs: Vec<(i64, i64)> = source.pairs().to_vec();
                let mut ht = 0;
                for m in 0..nu {
                    let e = eps[m] as i64 - bound;
                    ht += e;
                    pairs.push((m as i64 + 1, s.at(m) as i64 + 1 + n * e));
                }
                let x = BasisIndex::from_pairs(n, &pairs);
                let c = self.p.pow(ht).expect("unit").scale(&s.sign().into());
                match out.iter_mut().find(|(v, _)| *v == x) {
                    Some(slot) => slot.1 += &c,
                    None => out.push((x, c)),
                }
                let mut k = 0;
                while k < nu && eps[k] + 1 == span {
                    eps[k] = 0;
                    k += 1;
                }
                if k == nu {
                    break;
                }
                eps[k] += 1;
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        out
    }
}
