use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::weyl::{bar, offset, AffineWeylElement, Entries, Perm, Tuple};

pub type Pairs = SmallVec<[(i64, i64); 8]>;

/// Canonical representative of a Σ̂ᵣ-orbit on I(ℤ,r) × I(ℤ,r).
///
/// Each coordinate pair `(i_k, j_k)` is shifted so the top lies in `1..=n`
/// and the pairs are sorted; two indices are equal exactly when they label
/// the same orbit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    n: i64,
    pairs: Pairs,
}

/// Coordinate functions `c_{i,j}` share the orbit labels of the basis.
pub type CoordIndex = BasisIndex;

impl BasisIndex {
    /// Canonical form of the orbit of `(tops, bottoms)`. Lengths must agree.
    #[inline]
    pub fn from_tuples(n: i64, tops: &[i64], bottoms: &[i64]) -> Self {
        debug_assert_eq!(tops.len(), bottoms.len());
        let mut pairs: Pairs = tops
            .iter()
            .zip(bottoms)
            .map(|(&t, &b)| {
                let tb = bar(t, n);
                (tb, b + tb - t)
            })
            .collect();
        pairs.sort_unstable();
        BasisIndex { n, pairs }
    }

    /// Canonical form of an arbitrary list of coordinate pairs.
    pub fn from_pairs(n: i64, pairs: &[(i64, i64)]) -> Self {
        let mut out: Pairs = pairs
            .iter()
            .map(|&(t, b)| {
                let tb = bar(t, n);
                (tb, b + tb - t)
            })
            .collect();
        out.sort_unstable();
        BasisIndex { n, pairs: out }
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn r(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(i64, i64)] {
        &self.pairs
    }

    pub fn tops(&self) -> Entries {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn bottoms(&self) -> Entries {
        self.pairs.iter().map(|p| p.1).collect()
    }

    /// Splits the bottom tuple as `j + nε` with `j` in I(n,r).
    pub fn split(&self) -> (Entries, Entries, Entries) {
        let i = self.tops();
        let j = self.pairs.iter().map(|p| bar(p.1, self.n)).collect();
        let e = self.pairs.iter().map(|p| offset(p.1, self.n)).collect();
        (i, j, e)
    }

    /// Offsets ε of the canonical split.
    pub fn offsets(&self) -> Entries {
        self.pairs.iter().map(|p| offset(p.1, self.n)).collect()
    }

    /// `ht(ε) = Σ ε_k`.
    pub fn height(&self) -> i64 {
        self.pairs.iter().map(|p| offset(p.1, self.n)).sum()
    }

    pub fn max_abs_offset(&self) -> i64 {
        self.pairs
            .iter()
            .map(|p| offset(p.1, self.n).abs())
            .max()
            .unwrap_or(0)
    }

    /// True when every bottom also lies in `1..=n` (the finite Schur algebra).
    pub fn is_finite(&self) -> bool {
        self.pairs.iter().all(|p| (1..=self.n).contains(&p.1))
    }

    /// Number of coordinates whose top and bottom differ.
    pub fn index_count(&self) -> usize {
        self.pairs.iter().filter(|p| p.0 != p.1).count()
    }

    /// The orbit of `(j, i)`.
    pub fn transposed(&self) -> BasisIndex {
        BasisIndex::from_tuples(self.n, &self.bottoms(), &self.tops())
    }

    /// Parses `xi[(1,2)|(3,2)]`, `c[...]` or the bare `[(1,2)|(3,2)]`.
    pub fn parse_text(text: &str, n: i64) -> Result<Self> {
        let (tops, bottoms) = parse_tuple_pair(text)?;
        if tops.len() != bottoms.len() {
            return Err(Error::LengthMismatch {
                expected: tops.len(),
                got: bottoms.len(),
            });
        }
        if n < 1 {
            return Err(Error::Invalid(format!("n must be positive, got {n}")));
        }
        Ok(BasisIndex::from_tuples(n, &tops, &bottoms))
    }

    pub fn display_with(&self, head: &'static str) -> impl fmt::Display + '_ {
        struct Show<'a>(&'a BasisIndex, &'static str);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}[", self.1)?;
                crate::weyl::write_tuple(f, &self.0.tops())?;
                write!(f, "|")?;
                crate::weyl::write_tuple(f, &self.0.bottoms())?;
                write!(f, "]")
            }
        }
        Show(self, head)
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("xi"))
    }
}

impl fmt::Debug for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_tuple_pair(text: &str) -> Result<(Vec<i64>, Vec<i64>)> {
    let t = text.trim();
    let t = t
        .strip_prefix("xi")
        .or_else(|| t.strip_prefix('c'))
        .unwrap_or(t)
        .trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected `[(..)|(..)]`, got `{text}`")))?;
    let (a, b) = inner
        .split_once('|')
        .ok_or_else(|| Error::Parse(format!("missing `|` in `{text}`")))?;
    Ok((parse_tuple(a)?, parse_tuple(b)?))
}

pub fn parse_tuple(text: &str) -> Result<Vec<i64>> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("expected a parenthesized tuple, got `{text}`")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer `{}`", s.trim())))
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct IndexJson {
    n: i64,
    pairs: Vec<(i64, i64)>,
}

impl Serialize for BasisIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IndexJson {
            n: self.n,
            pairs: self.pairs.to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BasisIndex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = IndexJson::deserialize(d)?;
        if raw.n < 1 {
            return Err(serde::de::Error::custom("n must be positive"));
        }
        Ok(BasisIndex::from_pairs(raw.n, &raw.pairs))
    }
}

/// Canonical orbit label of `(i, j)`.
pub fn canonicalize(i: &Tuple, j: &Tuple) -> Result<BasisIndex> {
    if i.len() != j.len() {
        return Err(Error::LengthMismatch {
            expected: i.len(),
            got: j.len(),
        });
    }
    if i.n != j.n {
        return Err(Error::Context(format!("moduli {} and {} differ", i.n, j.n)));
    }
    Ok(BasisIndex::from_tuples(i.n, &i.entries, &j.entries))
}

/// Finds a permutation σ with `k_{σ(m)} ≡ j_m (mod n)` for all m, if any.
#[inline]
pub fn residue_matching(n: i64, j: &[i64], k: &[i64]) -> Option<Perm> {
    let r = j.len();
    let mut used: SmallVec<[bool; 8]> = SmallVec::from_elem(false, r);
    let mut sigma: SmallVec<[u8; 8]> = SmallVec::with_capacity(r);
    for &jm in j {
        let target = bar(jm, n);
        let p = (0..r).find(|&p| !used[p] && bar(k[p], n) == target)?;
        used[p] = true;
        sigma.push(p as u8);
    }
    Some(Perm(sigma))
}

/// Some `w` with `j·w = k`, present exactly when the residue multisets
/// of `j` and `k` agree.
pub fn equivalent_middle(j: &Tuple, k: &Tuple) -> Option<AffineWeylElement> {
    if j.len() != k.len() || j.n != k.n {
        return None;
    }
    let n = j.n;
    // place σ so that (jσ)_m ≡ k_m
    let sigma = residue_matching(n, &k.entries, &j.entries)?;
    let eps: Entries = (0..k.len())
        .map(|m| (k.entries[m] - j.entries[sigma.at(m)]) / n)
        .collect();
    Some(AffineWeylElement { sigma, eps })
}

/// All canonical indices of S̃(n,r) whose offsets lie in `[-w, w]`.
///
/// Enumerates sorted multisets of coordinate pairs `(top, bottom)` with
/// `top ∈ 1..=n`, `bottom = j + n·e`, `j ∈ 1..=n`, `|e| ≤ w`.
pub fn window_indices(n: i64, r: usize, w: i64) -> Vec<BasisIndex> {
    let mut kinds: Vec<(i64, i64)> = Vec::new();
    for t in 1..=n {
        for e in -w..=w {
            for j in 1..=n {
                kinds.push((t, j + n * e));
            }
        }
    }
    kinds.sort_unstable();
    let mut out = Vec::new();
    let mut cur: Pairs = SmallVec::new();
    fn rec(
        n: i64,
        r: usize,
        start: usize,
        kinds: &[(i64, i64)],
        cur: &mut Pairs,
        out: &mut Vec<BasisIndex>,
    ) {
        if cur.len() == r {
            out.push(BasisIndex {
                n,
                pairs: cur.clone(),
            });
            return;
        }
        for k in start..kinds.len() {
            cur.push(kinds[k]);
            rec(n, r, k, kinds, cur, out);
            cur.pop();
        }
    }
    rec(n, r, 0, &kinds, &mut cur, &mut out);
    out
}

/// Indices whose offset vector has ℓ¹-norm at most `w`.
pub fn window_indices_l1(n: i64, r: usize, w: i64) -> Vec<BasisIndex> {
    window_indices(n, r, w)
        .into_iter()
        .filter(|x| x.offsets().iter().map(|e| e.abs()).sum::<i64>() <= w)
        .collect()
}

/// Weakly increasing tuples over `1..=n` of length r, i.e. I(n,r)/Σᵣ.
pub fn increasing_tuples(n: i64, r: usize) -> Vec<Entries> {
    let mut out = Vec::new();
    let mut cur: Entries = SmallVec::new();
    fn rec(n: i64, r: usize, lo: i64, cur: &mut Entries, out: &mut Vec<Entries>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n {
            cur.push(v);
            rec(n, r, v, cur, out);
            cur.pop();
        }
    }
    rec(n, r, 1, &mut cur, &mut out);
    out
}
