//! Products of basis elements as sums over double cosets of Young
//! subgroups with subgroup-index coefficients.

use smallvec::SmallVec;

use super::element::AlgebraElement;
use super::index::{residue_matching, BasisIndex};
use crate::error::Result;
use crate::weyl::{double_cosets_full, Perm, StabilizerDescriptor};

/// Structure constants of `ξ_x ξ_y`, as (index, multiplicity) pairs.
pub type Product = Vec<(BasisIndex, u64)>;

pub(crate) fn push_merged(out: &mut Product, x: BasisIndex, k: u64) {
    match out.iter_mut().find(|(y, _)| *y == x) {
        Some(slot) => slot.1 += k,
        None => out.push((x, k)),
    }
}

/// `ξ_x ξ_y` through the double coset formula.
///
/// Write `x = (i, j + nε)` and `y = (k, l + nε')`. If `j` and `k` are not
/// rearrangements of each other the product is zero. Otherwise `y` is
/// rewritten as `(j, lσ + nε'σ)` and the product is
/// `Σ_δ [Σ_{i,lδ,ε'δ+ε} : Σ_{i,j,lδ,ε'δ,ε}] ξ_{i, lδ + n(ε'δ+ε)}` over
/// δ ∈ Σ_{j,l,ε'} \ Σ_j / Σ_{i,j,ε}.
pub fn basis_product(x: &BasisIndex, y: &BasisIndex) -> Product {
    let (_, j, _) = x.split();
    match residue_matching(x.n(), &j, &y.tops()) {
        Some(sigma) => product_aligned(x, y, &sigma),
        None => Vec::new(),
    }
}

/// The product with the right factor aligned by a given σ satisfying
/// `k_{σ(m)} = j_m`.
pub(crate) fn product_aligned(x: &BasisIndex, y: &BasisIndex, sigma: &Perm) -> Product {
    let n = x.n();
    let (i, j, e) = x.split();
    let (_, l, e2) = y.split();
    let l1 = sigma.permute(&l);
    let e1 = sigma.permute(&e2);
    let r = i.len();

    let keys3 = |a: &[i64], b: &[i64], c: &[i64]| -> SmallVec<[(i64, i64, i64); 8]> {
        (0..r).map(|m| (a[m], b[m], c[m])).collect()
    };
    let h2 = StabilizerDescriptor::from_keys(&keys3(&j, &l1, &e1));
    let g = StabilizerDescriptor::from_keys(&j);
    let h1 = StabilizerDescriptor::from_keys(&keys3(&i, &j, &e));
    let cosets = double_cosets_full(&h2, &g, &h1).expect("Young subgroups of Σ_j refine it");

    let mut out: Product = Vec::with_capacity(cosets.reps.len());
    for d in &cosets.reps {
        let ld = d.permute(&l1);
        let ed = d.permute(&e1);
        let tot: SmallVec<[i64; 8]> = (0..r).map(|m| ed[m] + e[m]).collect();
        let bottom: SmallVec<[i64; 8]> = (0..r).map(|m| ld[m] + n * tot[m]).collect();
        let big = StabilizerDescriptor::from_keys(&keys3(&i, &ld, &tot));
        let small_keys: SmallVec<[(i64, i64, i64, i64, i64); 8]> =
            (0..r).map(|m| (i[m], j[m], ld[m], ed[m], e[m])).collect();
        let small = StabilizerDescriptor::from_keys(&small_keys);
        let (num, den) = (big.order(), small.order());
        debug_assert_eq!(num % den, 0);
        push_merged(&mut out, BasisIndex::from_tuples(n, &i, &bottom), num / den);
    }
    out
}

/// Bilinear extension of a basis-level product rule.
pub fn multiply_with(
    x: &AlgebraElement,
    y: &AlgebraElement,
    mut rule: impl FnMut(&BasisIndex, &BasisIndex) -> Result<Product>,
) -> Result<AlgebraElement> {
    x.check_context(y)?;
    let mut out = AlgebraElement::zero(x.n(), x.r());
    for (a, ca) in x.terms() {
        for (b, cb) in y.terms() {
            let prod = rule(a, b)?;
            if prod.is_empty() {
                continue;
            }
            let c = ca * cb;
            for (z, k) in prod {
                out.add_int(z, &c, k as i64);
            }
        }
    }
    Ok(out)
}

pub fn multiply(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    multiply_with(x, y, |a, b| Ok(basis_product(a, b)))
}

impl AlgebraElement {
    pub fn multiply(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        multiply(self, other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schur::element::identity;
    use crate::schur::index::window_indices;

    fn ix(s: &str, n: i64) -> BasisIndex {
        BasisIndex::parse_text(s, n).unwrap()
    }

    fn sorted(mut p: Product) -> Product {
        p.sort();
        p
    }

    #[test]
    fn square_in_rank_one_degree_two() {
        let x = ix("xi[(1,1)|(1,2)]", 1);
        let got = sorted(basis_product(&x, &x));
        assert_eq!(
            got,
            vec![(ix("xi[(1,1)|(1,3)]", 1), 1), (ix("xi[(1,1)|(2,2)]", 1), 2)]
        );
    }

    #[test]
    fn finite_product_example() {
        let got = sorted(basis_product(
            &ix("xi[(1,2)|(1,1)]", 2),
            &ix("xi[(1,1)|(1,2)]", 2),
        ));
        assert_eq!(
            got,
            vec![(ix("xi[(1,2)|(1,2)]", 2), 1), (ix("xi[(1,2)|(2,1)]", 2), 1)]
        );
    }

    #[test]
    fn idempotent_on_the_left() {
        for x in window_indices(2, 2, 1) {
            let (i, _, _) = x.split();
            let e = BasisIndex::from_tuples(2, &i, &i);
            assert_eq!(basis_product(&e, &x), vec![(x.clone(), 1)]);
        }
    }

    #[test]
    fn alignment_choice_is_irrelevant() {
        use crate::weyl::all_perms;
        for x in window_indices(2, 3, 1).into_iter().step_by(7) {
            for y in window_indices(2, 3, 1).into_iter().step_by(5) {
                let (_, j, _) = x.split();
                let k = y.tops();
                let mut seen: Option<Product> = None;
                for s in all_perms(3) {
                    if (0..3).all(|m| k[s.at(m)] == j[m]) {
                        let p = sorted(product_aligned(&x, &y, s));
                        match &seen {
                            Some(q) => assert_eq!(&p, q),
                            None => seen = Some(p),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn vanishing_rule() {
        let n = 2;
        for x in window_indices(n, 2, 1) {
            for y in window_indices(n, 2, 0) {
                let mut rj: Vec<i64> = x.split().1.to_vec();
                let mut rk: Vec<i64> = y.tops().to_vec();
                rj.sort();
                rk.sort();
                assert_eq!(basis_product(&x, &y).is_empty(), rj != rk);
            }
        }
    }

    #[test]
    fn identity_is_two_sided() {
        for n in 1..=2 {
            for r in 1..=3 {
                let one = identity(n, r);
                for x in window_indices(n, r, 1) {
                    let x = AlgebraElement::basis(x);
                    assert_eq!(one.multiply(&x).unwrap(), x);
                    assert_eq!(x.multiply(&one).unwrap(), x);
                }
            }
        }
    }
}
