//! Integer tuples, the extended affine Weyl group Σ̂ᵣ = Σᵣ ⋉ ℤʳ, Young
//! subgroups given by set partitions, and double coset enumeration.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest r for which permutation groups are enumerated.
pub const MAX_DEGREE: usize = 8;

pub type Entries = SmallVec<[i64; 8]>;

/// Least positive remainder of `z` modulo `n`, in `1..=n`.
#[inline]
pub fn bar(z: i64, n: i64) -> i64 {
    (z - 1).rem_euclid(n) + 1
}

/// Residue class offset: `z = bar(z) + n * offset(z)`.
#[inline]
pub fn offset(z: i64, n: i64) -> i64 {
    (z - bar(z, n)) / n
}

/// An element of I(ℤ,r) together with the modulus n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tuple {
    pub n: i64,
    pub entries: Entries,
}

impl Tuple {
    pub fn new(n: i64, entries: &[i64]) -> Self {
        Tuple {
            n,
            entries: entries.iter().copied().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry-wise bar map.
    pub fn bar(&self) -> Tuple {
        Tuple {
            n: self.n,
            entries: self.entries.iter().map(|&z| bar(z, self.n)).collect(),
        }
    }

    /// True when every entry lies in `1..=n`.
    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|&z| (1..=self.n).contains(&z))
    }

    /// Multiset of residues, sorted.
    pub fn residues(&self) -> Entries {
        let mut r: Entries = self.entries.iter().map(|&z| bar(z, self.n)).collect();
        r.sort_unstable();
        r
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.entries)
    }
}

pub(crate) fn write_tuple(f: &mut fmt::Formatter<'_>, entries: &[i64]) -> fmt::Result {
    write!(f, "(")?;
    for (k, v) in entries.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{v}")?;
    }
    write!(f, ")")
}

/// A permutation of `{0..r-1}` stored as its image sequence.
///
/// Products are composition of functions, `(στ)(k) = σ(τ(k))`, which makes
/// the place action `(tσ)_k = t_{σ(k)}` a right action.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub SmallVec<[u8; 8]>);

impl Perm {
    pub fn identity(r: usize) -> Self {
        Perm((0..r as u8).collect())
    }

    /// Builds from a 1-based image sequence such as `[2,1,3]`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let r = images.len();
        let mut seen = vec![false; r];
        for &v in images {
            if v == 0 || v > r || seen[v - 1] {
                return Err(Error::Invalid(format!("{images:?} is not a permutation")));
            }
            seen[v - 1] = true;
        }
        Ok(Perm(images.iter().map(|&v| (v - 1) as u8).collect()))
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&v| v as usize + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn at(&self, k: usize) -> usize {
        self.0[k] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &v)| k == v as usize)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&k| self.0[k as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv: SmallVec<[u8; 8]> = SmallVec::from_elem(0, self.0.len());
        for (k, &v) in self.0.iter().enumerate() {
            inv[v as usize] = k as u8;
        }
        Perm(inv)
    }

    pub fn sign(&self) -> i64 {
        let mut seen = [false; 64];
        let mut sign = 1;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.0[k] as usize;
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// Place action on a sequence: `result_k = seq_{σ(k)}`.
    #[inline]
    pub fn permute<T: Copy>(&self, seq: &[T]) -> SmallVec<[T; 8]> {
        self.0.iter().map(|&k| seq[k as usize]).collect()
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images())
    }
}

impl Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Perm::from_images(&images).map_err(serde::de::Error::custom)
    }
}

fn lex_perms(r: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..r as u8).collect();
    fn rec(k: usize, cur: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Perm>) {
        if k == cur.len() {
            out.push(Perm(cur.iter().copied().collect()));
            return;
        }
        for v in 0..cur.len() {
            if !used[v] {
                used[v] = true;
                cur[k] = v as u8;
                rec(k + 1, cur, used, out);
                used[v] = false;
            }
        }
    }
    let mut used = vec![false; r];
    rec(0, &mut cur, &mut used, &mut out);
    out
}

/// All permutations of degree r in lexicographic order of image sequences.
pub fn all_perms(r: usize) -> &'static [Perm] {
    static TABLE: OnceLock<Vec<OnceLock<Vec<Perm>>>> = OnceLock::new();
    assert!(r <= MAX_DEGREE, "degree {r} exceeds the enumeration cap");
    let table = TABLE.get_or_init(|| (0..=MAX_DEGREE).map(|_| OnceLock::new()).collect());
    table[r].get_or_init(|| lex_perms(r))
}

/// An element (σ, ε) of Σ̂ᵣ acting on the right of I(ℤ,r) by
/// `t·(σ,ε) = tσ + nε`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineWeylElement {
    pub sigma: Perm,
    pub eps: Entries,
}

impl AffineWeylElement {
    pub fn identity(r: usize) -> Self {
        AffineWeylElement {
            sigma: Perm::identity(r),
            eps: SmallVec::from_elem(0, r),
        }
    }

    pub fn new(sigma: Perm, eps: &[i64]) -> Result<Self> {
        if sigma.len() != eps.len() {
            return Err(Error::LengthMismatch {
                expected: sigma.len(),
                got: eps.len(),
            });
        }
        Ok(AffineWeylElement {
            sigma,
            eps: eps.iter().copied().collect(),
        })
    }

    pub fn shift(eps: &[i64]) -> Self {
        AffineWeylElement {
            sigma: Perm::identity(eps.len()),
            eps: eps.iter().copied().collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.eps.len()
    }

    /// Acts on raw entries.
    #[inline]
    pub fn apply_entries(&self, t: &[i64], n: i64) -> Entries {
        self.sigma
            .0
            .iter()
            .zip(&self.eps)
            .map(|(&k, &e)| t[k as usize] + n * e)
            .collect()
    }

    /// `(w1 w2)` with `t·(w1 w2) = (t·w1)·w2`.
    pub fn compose(&self, other: &AffineWeylElement) -> AffineWeylElement {
        let sigma = self.sigma.compose(&other.sigma);
        let eps = other
            .sigma
            .0
            .iter()
            .zip(&other.eps)
            .map(|(&k, &e)| self.eps[k as usize] + e)
            .collect();
        AffineWeylElement { sigma, eps }
    }

    pub fn inverse(&self) -> AffineWeylElement {
        let inv = self.sigma.inverse();
        let eps = inv.permute(&self.eps).into_iter().map(|e| -e).collect();
        AffineWeylElement { sigma: inv, eps }
    }
}

/// `t·w`; errors on a length mismatch.
pub fn weyl_apply(w: &AffineWeylElement, t: &Tuple) -> Result<Tuple> {
    if w.rank() != t.len() {
        return Err(Error::LengthMismatch {
            expected: w.rank(),
            got: t.len(),
        });
    }
    Ok(Tuple {
        n: t.n,
        entries: w.apply_entries(&t.entries, t.n),
    })
}

pub fn weyl_compose(w1: &AffineWeylElement, w2: &AffineWeylElement) -> Result<AffineWeylElement> {
    if w1.rank() != w2.rank() {
        return Err(Error::LengthMismatch {
            expected: w1.rank(),
            got: w2.rank(),
        });
    }
    Ok(w1.compose(w2))
}

/// A set partition of the positions `{0..r-1}`; its subgroup is the set of
/// permutations mapping every block onto itself.
///
/// Stored as a block label per position, labels numbered by first
/// occurrence so equal partitions have equal labels.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StabilizerDescriptor {
    labels: SmallVec<[u8; 8]>,
}

impl StabilizerDescriptor {
    /// Groups positions with equal keys.
    pub fn from_keys<K: PartialEq>(keys: &[K]) -> Self {
        let mut labels: SmallVec<[u8; 8]> = SmallVec::with_capacity(keys.len());
        let mut reps: SmallVec<[usize; 8]> = SmallVec::new();
        for (k, key) in keys.iter().enumerate() {
            match reps.iter().position(|&p| keys[p] == *key) {
                Some(l) => labels.push(l as u8),
                None => {
                    labels.push(reps.len() as u8);
                    reps.push(k);
                }
            }
        }
        StabilizerDescriptor { labels }
    }

    pub fn trivial(r: usize) -> Self {
        StabilizerDescriptor::from_keys(&(0..r).collect::<Vec<_>>())
    }

    pub fn full(r: usize) -> Self {
        StabilizerDescriptor::from_keys(&vec![0u8; r])
    }

    /// Builds from 1-based blocks such as `[[1,2],[3]]`.
    pub fn from_blocks(blocks: &[Vec<usize>]) -> Result<Self> {
        let r: usize = blocks.iter().map(Vec::len).sum();
        let mut keys = vec![usize::MAX; r];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Invalid("empty block".into()));
            }
            for &p in block {
                if p == 0 || p > r || keys[p - 1] != usize::MAX {
                    return Err(Error::Invalid(format!("{blocks:?} is not a set partition")));
                }
                keys[p - 1] = b;
            }
        }
        Ok(StabilizerDescriptor::from_keys(&keys))
    }

    /// Sorted 1-based blocks.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let count = self.labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
        let mut out = vec![Vec::new(); count];
        for (k, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(k + 1);
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn contains(&self, p: &Perm) -> bool {
        p.0.iter()
            .enumerate()
            .all(|(k, &v)| self.labels[k] == self.labels[v as usize])
    }

    /// True when every block of `self` lies inside a block of `other`,
    /// i.e. the subgroup of `self` is contained in that of `other`.
    pub fn refines(&self, other: &StabilizerDescriptor) -> bool {
        self.degree() == other.degree()
            && (0..self.degree()).all(|a| {
                (0..self.degree())
                    .all(|b| self.labels[a] != self.labels[b] || other.labels[a] == other.labels[b])
            })
    }

    pub fn meet(&self, other: &StabilizerDescriptor) -> StabilizerDescriptor {
        let keys: Vec<(u8, u8)> = self
            .labels
            .iter()
            .zip(&other.labels)
            .map(|(&a, &b)| (a, b))
            .collect();
        StabilizerDescriptor::from_keys(&keys)
    }

    /// Subgroup order, the product of block-size factorials.
    pub fn order(&self) -> u64 {
        let mut counts = [0u64; 64];
        for &l in &self.labels {
            counts[l as usize] += 1;
        }
        counts
            .iter()
            .map(|&c| (1..=c).product::<u64>())
            .product()
    }

    /// Image of the partition under relabelling positions by a permutation:
    /// the descriptor of the keys `seq σ` when `self` is the descriptor of `seq`.
    pub fn permuted(&self, p: &Perm) -> StabilizerDescriptor {
        StabilizerDescriptor::from_keys(&p.permute(&self.labels))
    }

    /// Elements of the subgroup in lexicographic order.
    pub fn elements(&self) -> Vec<Perm> {
        all_perms(self.degree())
            .iter()
            .filter(|p| self.contains(p))
            .cloned()
            .collect()
    }
}

impl fmt::Debug for StabilizerDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.blocks())
    }
}

impl Serialize for StabilizerDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks().serialize(s)
    }
}

impl<'de> Deserialize<'de> for StabilizerDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(d)?;
        StabilizerDescriptor::from_blocks(&blocks).map_err(serde::de::Error::custom)
    }
}

/// Partition of positions of a tuple with entries in `1..=n` by value.
pub fn stabilizer(t: &Tuple) -> Result<StabilizerDescriptor> {
    if !t.is_finite() {
        return Err(Error::Invalid(format!(
            "stabilizer needs entries in 1..={}, got {t}",
            t.n
        )));
    }
    Ok(StabilizerDescriptor::from_keys(&t.entries))
}

pub fn common_stabilizer(parts: &[StabilizerDescriptor]) -> Result<StabilizerDescriptor> {
    let first = parts
        .first()
        .ok_or_else(|| Error::Invalid("no partitions given".into()))?;
    let mut acc = first.clone();
    for p in &parts[1..] {
        if p.degree() != acc.degree() {
            return Err(Error::LengthMismatch {
                expected: acc.degree(),
                got: p.degree(),
            });
        }
        acc = acc.meet(p);
    }
    Ok(acc)
}

pub fn young_order(s: &StabilizerDescriptor) -> u64 {
    s.order()
}

/// Double cosets with their sizes.
#[derive(Clone, Debug)]
pub struct DoubleCosets {
    /// Lexicographically least element of each coset, in increasing order.
    pub reps: Vec<Perm>,
    pub sizes: Vec<u64>,
}

type CosetKey = (StabilizerDescriptor, StabilizerDescriptor, StabilizerDescriptor);

fn coset_memo() -> &'static RwLock<HashMap<CosetKey, Arc<DoubleCosets>>> {
    static MEMO: OnceLock<RwLock<HashMap<CosetKey, Arc<DoubleCosets>>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

fn enumerate_double_cosets(
    h2: &StabilizerDescriptor,
    g: &StabilizerDescriptor,
    h1: &StabilizerDescriptor,
) -> DoubleCosets {
    let h2_elems = h2.elements();
    let h1_elems = h1.elements();
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    for d in g.elements() {
        if seen.contains(&d) {
            continue;
        }
        let before = seen.len();
        for a in &h2_elems {
            let ad = a.compose(&d);
            for b in &h1_elems {
                seen.insert(ad.compose(b));
            }
        }
        sizes.push((seen.len() - before) as u64);
        reps.push(d);
    }
    DoubleCosets { reps, sizes }
}

/// Representatives of H₂\G/H₁, memoized. Requires H₁, H₂ ≤ G.
pub fn double_cosets_full(
    h2: &StabilizerDescriptor,
    g: &StabilizerDescriptor,
    h1: &StabilizerDescriptor,
) -> Result<Arc<DoubleCosets>> {
    if g.degree() > MAX_DEGREE {
        return Err(Error::Precondition(format!(
            "degree {} exceeds the cap {MAX_DEGREE}",
            g.degree()
        )));
    }
    if !h1.refines(g) || !h2.refines(g) {
        return Err(Error::Precondition(format!(
            "{h1:?} and {h2:?} must refine {g:?}"
        )));
    }
    let key = (h2.clone(), g.clone(), h1.clone());
    if let Some(hit) = coset_memo().read().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let fresh = Arc::new(enumerate_double_cosets(h2, g, h1));
    coset_memo()
        .write()
        .unwrap()
        .entry(key)
        .or_insert(fresh.clone());
    Ok(fresh)
}

pub fn double_cosets(
    h2: &StabilizerDescriptor,
    g: &StabilizerDescriptor,
    h1: &StabilizerDescriptor,
) -> Result<Vec<Perm>> {
    Ok(double_cosets_full(h2, g, h1)?.reps.clone())
}
