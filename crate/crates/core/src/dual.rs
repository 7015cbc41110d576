//! Pairings between S̃(n,r) and the coordinate coalgebra Ã(n,r), the
//! middle-tuple counting product, and finite-support duals of
//! row-finite maps.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::laurent::LaurentCoeff;
use crate::schur::{
    multiply_with, AlgebraElement, BasisIndex, CoordIndex, Product,
};
use crate::weyl::{all_perms, bar, Entries};

/// `ξ(c)`: 1 when both label the same orbit.
pub fn pair(xi: &BasisIndex, c: &CoordIndex) -> i64 {
    i64::from(xi == c)
}

/// Middle tuples `s` with `(p, s) ~ xi1` for a fixed finite top `p`.
fn middles(xi1: &BasisIndex, p: &[i64]) -> Vec<Entries> {
    let (i, b) = (xi1.tops(), xi1.bottoms());
    let mut out: Vec<Entries> = all_perms(i.len())
        .iter()
        .filter(|s| (0..i.len()).all(|m| i[s.at(m)] == p[m]))
        .map(|s| s.permute(&b))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `#{ s : ξ₁(c_{p,s}) = 1 and ξ₂(c_{s,q}) = 1 }` where `(p, q)` is the
/// representative of `c`.
pub fn delta_pair(xi1: &BasisIndex, xi2: &BasisIndex, c: &CoordIndex) -> i64 {
    let n = c.n();
    let (p, q) = (c.tops(), c.bottoms());
    middles(xi1, &p)
        .iter()
        .filter(|s| BasisIndex::from_tuples(n, s, &q) == *xi2)
        .count() as i64
}

/// Basis product by counting middle tuples.
///
/// The support is generated rather than searched: every orbit `(i, q)` with
/// a nonzero count arises as `q = l·w` where `(i, s) ~ x` and `k·w = s`.
/// Each generated orbit is then scored with [`delta_pair`].
pub fn schur_basis_product(x: &BasisIndex, y: &BasisIndex) -> Product {
    let n = x.n();
    let r = x.r();
    let i = x.tops();
    let (k, l) = (y.tops(), y.bottoms());
    let mut res_j: Entries = x.bottoms().iter().map(|&z| bar(z, n)).collect();
    let mut res_k = k.clone();
    res_j.sort_unstable();
    res_k.sort_unstable();
    if res_j != res_k {
        return Vec::new();
    }
    let mut candidates: BTreeSet<BasisIndex> = BTreeSet::new();
    for s in middles(x, &i) {
        for w in all_perms(r) {
            if (0..r).all(|m| bar(k[w.at(m)], n) == bar(s[m], n)) {
                let q: Entries = (0..r).map(|m| l[w.at(m)] + s[m] - k[w.at(m)]).collect();
                candidates.insert(BasisIndex::from_tuples(n, &i, &q));
            }
        }
    }
    candidates
        .into_iter()
        .filter_map(|c| {
            let z = delta_pair(x, y, &c);
            (z > 0).then_some((c, z as u64))
        })
        .collect()
}

pub fn multiply_schur_oracle(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    multiply_with(x, y, |a, b| Ok(schur_basis_product(a, b)))
}

/// A formal linear map between spaces with bases of orbit labels, given by
/// its matrix `M` with `f(v_i) = Σ_j M_{j,i} w_j`.
///
/// Row finiteness means each target row has finitely many nonzero entries;
/// `row` lists them and is the witness for it. A column may be infinite, so
/// `column` only returns targets whose offsets are at most `bound`.
pub trait RowFiniteMap {
    fn row(&self, target: &BasisIndex) -> Vec<(BasisIndex, LaurentCoeff)>;
    fn column(&self, source: &BasisIndex, bound: i64) -> Vec<(BasisIndex, LaurentCoeff)>;
}

pub type DualVector = BTreeMap<BasisIndex, LaurentCoeff>;

fn accumulate(v: &mut DualVector, x: BasisIndex, c: LaurentCoeff) {
    if c.is_zero() {
        return;
    }
    let slot = v.entry(x.clone()).or_default();
    *slot += &c;
    if slot.is_zero() {
        v.remove(&x);
    }
}

/// `f^#(w*) = Σ_i M_{w,i} v_i*`.
pub fn sharp(f: &dyn RowFiniteMap, w: &BasisIndex) -> DualVector {
    let mut out = DualVector::new();
    for (src, c) in f.row(w) {
        accumulate(&mut out, src, c);
    }
    out
}

/// `f^#` extended linearly to a dual vector.
pub fn sharp_vector(f: &dyn RowFiniteMap, v: &DualVector) -> DualVector {
    let mut out = DualVector::new();
    for (w, c) in v {
        for (src, d) in f.row(w) {
            accumulate(&mut out, src, c * &d);
        }
    }
    out
}

/// Checks `(ḡ∘f)^# = f^#∘g^#` on the dual vectors `u*` for `u` in `window`.
///
/// The right side is evaluated through rows (transposition); the left side
/// entry at a source `v` is read from the forward images `g(f(v))`. Sources
/// tested are those reached through rows plus every index in `sources`, so
/// missing entries on either side are detected.
pub fn sharp_compose_check(
    f: &dyn RowFiniteMap,
    g: &dyn RowFiniteMap,
    window: &[BasisIndex],
    sources: &[BasisIndex],
) -> Result<bool> {
    if window.is_empty() {
        return Err(Error::Invalid("empty window".into()));
    }
    let bound_u = window.iter().map(BasisIndex::max_abs_offset).max().unwrap_or(0);
    for u in window {
        let g_row = sharp(g, u);
        let via_rows = sharp_vector(f, &g_row);
        let bound_w = g_row
            .keys()
            .map(BasisIndex::max_abs_offset)
            .max()
            .unwrap_or(0)
            .max(bound_u);
        let mut tested: BTreeSet<BasisIndex> = via_rows.keys().cloned().collect();
        tested.extend(sources.iter().cloned());
        for v in tested {
            let mut entry = LaurentCoeff::zero();
            for (w, c) in f.column(&v, bound_w) {
                for (u2, d) in g.column(&w, bound_u) {
                    if u2 == *u {
                        entry += &(&c * &d);
                    }
                }
            }
            if entry != via_rows.get(&v).cloned().unwrap_or_default() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A map given by finitely many explicit matrix entries.
#[derive(Clone, Debug, Default)]
pub struct SparseMap {
    entries: BTreeMap<(BasisIndex, BasisIndex), LaurentCoeff>,
}

impl SparseMap {
    pub fn new() -> Self {
        SparseMap::default()
    }

    /// Adds `c` to the entry `M_{target, source}`.
    pub fn insert(&mut self, target: BasisIndex, source: BasisIndex, c: LaurentCoeff) {
        let slot = self.entries.entry((target.clone(), source.clone())).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.entries.remove(&(target, source));
        }
    }

    pub fn identity_on(indices: &[BasisIndex]) -> Self {
        let mut m = SparseMap::new();
        for x in indices {
            m.insert(x.clone(), x.clone(), LaurentCoeff::one());
        }
        m
    }
}

impl RowFiniteMap for SparseMap {
    fn row(&self, target: &BasisIndex) -> Vec<(BasisIndex, LaurentCoeff)> {
        self.entries
            .iter()
            .filter(|((t, _), _)| t == target)
            .map(|((_, s), c)| (s.clone(), c.clone()))
            .collect()
    }

    fn column(&self, source: &BasisIndex, bound: i64) -> Vec<(BasisIndex, LaurentCoeff)> {
        self.entries
            .iter()
            .filter(|((t, s), _)| s == source && t.max_abs_offset() <= bound)
            .map(|((t, _), c)| (t.clone(), c.clone()))
            .collect()
    }
}
