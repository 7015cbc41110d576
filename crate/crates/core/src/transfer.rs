//! Transfer operators `T_{H1,H2}(a) = Σ_{g ∈ H1\H2} a^g` on matrices
//! `Σ λ_{ij} x_{ij}` over a set with a right group action, with the
//! move, transitivity, comparison and Mackey identities.
//!
//! Subgroups are finite element lists. An infinite ambient group is
//! replaced by a finite ball of elements; sums then run over the cosets
//! that meet the ball, and callers compare results on a window after
//! growing the ball.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::weyl::{all_perms, AffineWeylElement, Perm};

pub trait RightAction {
    type Elem: Clone + Ord + Debug;
    type Point: Clone + Ord + Debug;

    fn identity(&self) -> Self::Elem;
    /// `ab`, with `p·(ab) = (p·a)·b`.
    fn compose(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;
    fn act(&self, p: &Self::Point, g: &Self::Elem) -> Self::Point;
}

/// A finite linear combination of the matrix units `x_{ij}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Op<P: Ord> {
    entries: BTreeMap<(P, P), i64>,
}

impl<P: Clone + Ord> Default for Op<P> {
    fn default() -> Self {
        Op {
            entries: BTreeMap::new(),
        }
    }
}

impl<P: Clone + Ord + Debug> Op<P> {
    pub fn zero() -> Self {
        Op::default()
    }

    pub fn unit(i: P, j: P) -> Self {
        let mut a = Op::zero();
        a.add_entry(i, j, 1);
        a
    }

    pub fn entries(&self) -> impl Iterator<Item = (&P, &P, i64)> {
        self.entries.iter().map(|((i, j), &c)| (i, j, c))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_entry(&mut self, i: P, j: P, c: i64) {
        if c == 0 {
            return;
        }
        let key = (i, j);
        let slot = self.entries.entry(key.clone()).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.entries.remove(&key);
        }
    }

    pub fn add(&self, other: &Op<P>) -> Op<P> {
        let mut out = self.clone();
        for (i, j, c) in other.entries() {
            out.add_entry(i.clone(), j.clone(), c);
        }
        out
    }

    /// `x_{ij} x_{kl} = δ_{jk} x_{il}`.
    pub fn mul(&self, other: &Op<P>) -> Op<P> {
        let mut rows: BTreeMap<&P, Vec<(&P, i64)>> = BTreeMap::new();
        for (k, l, c) in other.entries() {
            rows.entry(k).or_default().push((l, c));
        }
        let mut out = Op::zero();
        for (i, j, c) in self.entries() {
            if let Some(row) = rows.get(j) {
                for &(l, d) in row {
                    out.add_entry(i.clone(), l.clone(), c * d);
                }
            }
        }
        out
    }

    /// `a^g = Σ λ_{ij} x_{ig,jg}`.
    pub fn twist<A: RightAction<Point = P>>(&self, action: &A, g: &A::Elem) -> Op<P> {
        let mut out = Op::zero();
        for (i, j, c) in self.entries() {
            out.add_entry(action.act(i, g), action.act(j, g), c);
        }
        out
    }

    pub fn is_invariant<A: RightAction<Point = P>>(&self, action: &A, h: &[A::Elem]) -> bool {
        h.iter().all(|g| self.twist(action, g) == *self)
    }

    pub fn restrict(&self, keep: impl Fn(&P) -> bool) -> Op<P> {
        let mut out = Op::zero();
        for (i, j, c) in self.entries() {
            if keep(i) && keep(j) {
                out.add_entry(i.clone(), j.clone(), c);
            }
        }
        out
    }
}

fn coset_key<A: RightAction>(action: &A, left: &[A::Elem], g: &A::Elem) -> Vec<A::Elem> {
    let mut key: Vec<A::Elem> = left.iter().map(|h| action.compose(h, g)).collect();
    key.sort();
    key.dedup();
    key
}

/// Representatives of the cosets `H1 g` with `g` in `h2`.
pub fn right_cosets<A: RightAction>(action: &A, h1: &[A::Elem], h2: &[A::Elem]) -> Vec<A::Elem> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for g in h2 {
        let key = coset_key(action, h1, g);
        if seen.insert(key.clone()) {
            out.push(key[0].clone());
        }
    }
    out
}

/// Representatives of the double cosets `L m R` with `m` in `mid`.
pub fn double_cosets<A: RightAction>(
    action: &A,
    left: &[A::Elem],
    mid: &[A::Elem],
    right: &[A::Elem],
) -> Vec<A::Elem> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for m in mid {
        let mut key: Vec<A::Elem> = Vec::with_capacity(left.len() * right.len());
        for l in left {
            let lm = action.compose(l, m);
            for r in right {
                key.push(action.compose(&lm, r));
            }
        }
        key.sort();
        key.dedup();
        if seen.insert(key.clone()) {
            out.push(key[0].clone());
        }
    }
    out
}

/// `H^w = w⁻¹ H w`.
pub fn conjugate<A: RightAction>(action: &A, h: &[A::Elem], w: &A::Elem) -> Vec<A::Elem> {
    let wi = action.inverse(w);
    let mut out: Vec<A::Elem> = h
        .iter()
        .map(|g| action.compose(&action.compose(&wi, g), w))
        .collect();
    out.sort();
    out
}

pub fn intersect<E: Clone + Ord>(a: &[E], b: &[E]) -> Vec<E> {
    let bs: BTreeSet<&E> = b.iter().collect();
    a.iter().filter(|x| bs.contains(x)).cloned().collect()
}

/// `T_{H1,H2}(a)`.
pub fn transfer<A: RightAction>(
    action: &A,
    a: &Op<A::Point>,
    h1: &[A::Elem],
    h2: &[A::Elem],
) -> Op<A::Point> {
    let mut out = Op::zero();
    for g in right_cosets(action, h1, h2) {
        out = out.add(&a.twist(action, &g));
    }
    out
}

/// Both sides of Mackey's formula,
/// `T_{H1,H3}(a) T_{H2,H3}(b) = Σ_{w ∈ H2\H3/H1} T_{H1 ∩ H2^w, H3}(a b^w)`.
pub fn mackey_sides<A: RightAction>(
    action: &A,
    a: &Op<A::Point>,
    b: &Op<A::Point>,
    h1: &[A::Elem],
    h2: &[A::Elem],
    h3: &[A::Elem],
) -> (Op<A::Point>, Op<A::Point>) {
    let lhs = transfer(action, a, h1, h3).mul(&transfer(action, b, h2, h3));
    let mut rhs = Op::zero();
    for w in double_cosets(action, h2, h3, h1) {
        let ab = a.mul(&b.twist(action, &w));
        if ab.is_zero() {
            continue;
        }
        let k = intersect(h1, &conjugate(action, h2, &w));
        rhs = rhs.add(&transfer(action, &ab, &k, h3));
    }
    (lhs, rhs)
}

/// Both sides of `T_{H1,H3}(a) = Σ_{w ∈ H1\H3/H2} T_{H1^w ∩ H2, H2}(a^w)`.
pub fn compare_sides<A: RightAction>(
    action: &A,
    a: &Op<A::Point>,
    h1: &[A::Elem],
    h2: &[A::Elem],
    h3: &[A::Elem],
) -> (Op<A::Point>, Op<A::Point>) {
    let lhs = transfer(action, a, h1, h3);
    let mut rhs = Op::zero();
    for w in double_cosets(action, h1, h3, h2) {
        let k = intersect(&conjugate(action, h1, &w), h2);
        rhs = rhs.add(&transfer(action, &a.twist(action, &w), &k, h2));
    }
    (lhs, rhs)
}

/// Subgroups of a finite group given by all of its elements.
pub fn subgroups<A: RightAction>(action: &A, elements: &[A::Elem]) -> Vec<Vec<A::Elem>> {
    let mut found: BTreeSet<Vec<A::Elem>> = BTreeSet::new();
    let close = |gens: &[A::Elem]| -> Vec<A::Elem> {
        let mut set: BTreeSet<A::Elem> = BTreeSet::new();
        set.insert(action.identity());
        let mut frontier: Vec<A::Elem> = vec![action.identity()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = action.compose(&x, g);
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    };
    // every subgroup of a group this small is generated by at most two elements
    for a in elements {
        for b in elements {
            found.insert(close(&[a.clone(), b.clone()]));
        }
    }
    found.into_iter().collect()
}

/// A basis of `A_H` restricted to `points`: the `H`-orbit sums of units.
pub fn invariant_basis<A: RightAction>(
    action: &A,
    points: &[A::Point],
    h: &[A::Elem],
) -> Vec<Op<A::Point>> {
    let mut seen: BTreeSet<(A::Point, A::Point)> = BTreeSet::new();
    let mut out = Vec::new();
    for i in points {
        for j in points {
            if seen.contains(&(i.clone(), j.clone())) {
                continue;
            }
            let mut orbit: BTreeSet<(A::Point, A::Point)> = BTreeSet::new();
            for g in h {
                orbit.insert((action.act(i, g), action.act(j, g)));
            }
            let mut op = Op::zero();
            for (p, q) in orbit {
                seen.insert((p.clone(), q.clone()));
                op.add_entry(p, q, 1);
            }
            out.push(op);
        }
    }
    out
}

/// Σᵣ on the points `1..=r` by `i·g = g⁻¹(i)`.
pub struct SymmetricOnPoints {
    pub r: usize,
}

impl RightAction for SymmetricOnPoints {
    type Elem = Perm;
    type Point = usize;

    fn identity(&self) -> Perm {
        Perm::identity(self.r)
    }

    fn compose(&self, a: &Perm, b: &Perm) -> Perm {
        a.compose(b)
    }

    fn inverse(&self, a: &Perm) -> Perm {
        a.inverse()
    }

    fn act(&self, p: &usize, g: &Perm) -> usize {
        g.inverse().at(p - 1) + 1
    }
}

/// Σᵣ on tuples by place permutation, `(t·σ)_k = t_{σ(k)}`.
pub struct SymmetricOnPlaces {
    pub r: usize,
}

impl RightAction for SymmetricOnPlaces {
    type Elem = Perm;
    type Point = Vec<i64>;

    fn identity(&self) -> Perm {
        Perm::identity(self.r)
    }

    fn compose(&self, a: &Perm, b: &Perm) -> Perm {
        a.compose(b)
    }

    fn inverse(&self, a: &Perm) -> Perm {
        a.inverse()
    }

    fn act(&self, p: &Vec<i64>, g: &Perm) -> Vec<i64> {
        g.permute(p).to_vec()
    }
}

/// Σ̂ᵣ on I(ℤ,r) with period `n`.
pub struct AffineOnTuples {
    pub n: i64,
    pub r: usize,
}

impl AffineOnTuples {
    /// Elements `(σ, ε)` with `|ε_k| ≤ radius`.
    pub fn ball(&self, radius: i64) -> Vec<AffineWeylElement> {
        let span = 2 * radius + 1;
        let total = span.pow(self.r as u32);
        let mut out = Vec::new();
        for s in all_perms(self.r) {
            for code in 0..total {
                let eps: Vec<i64> = (0..self.r)
                    .map(|k| (code / span.pow(k as u32)) % span - radius)
                    .collect();
                out.push(AffineWeylElement::new(s.clone(), &eps).expect("lengths agree"));
            }
        }
        out
    }

    /// The (finite) stabilizer of the given tuples.
    pub fn stabilizer(&self, tuples: &[Vec<i64>]) -> Vec<AffineWeylElement> {
        let spread = tuples
            .iter()
            .flat_map(|t| t.iter().flat_map(move |a| t.iter().map(move |b| (a - b).abs())))
            .max()
            .unwrap_or(0);
        self.ball(spread / self.n + 1)
            .into_iter()
            .filter(|g| tuples.iter().all(|t| self.act(t, g) == *t))
            .collect()
    }
}

impl RightAction for AffineOnTuples {
    type Elem = AffineWeylElement;
    type Point = Vec<i64>;

    fn identity(&self) -> AffineWeylElement {
        AffineWeylElement::identity(self.r)
    }

    fn compose(&self, a: &AffineWeylElement, b: &AffineWeylElement) -> AffineWeylElement {
        a.compose(b)
    }

    fn inverse(&self, a: &AffineWeylElement) -> AffineWeylElement {
        a.inverse()
    }

    fn act(&self, p: &Vec<i64>, g: &AffineWeylElement) -> Vec<i64> {
        g.apply_entries(p, self.n).to_vec()
    }
}

/// All tuples in `I(n,r)`.
pub fn all_tuples(n: i64, r: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|t: Vec<i64>| {
                (1..=n).map(move |v| {
                    let mut u = t.clone();
                    u.push(v);
                    u
                })
            })
            .collect();
    }
    out
}


fn fail<T: Debug>(what: &str, lhs: &T, rhs: &T) -> Error {
    Error::Verification(format!("{what}: {lhs:?} != {rhs:?}"))
}

fn contains<E: Ord>(big: &[E], small: &[E]) -> bool {
    let b: BTreeSet<&E> = big.iter().collect();
    small.iter().all(|x| b.contains(x))
}

/// Checks performed by [`check_finite_identities`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IdentityCounts {
    pub mackey: usize,
    pub compare: usize,
    pub transitivity: usize,
    pub moves: usize,
}

/// Mackey's formula, the comparison formula, transitivity and the move
/// rule for every chain of subgroups of a finite group and every pair of
/// invariant basis matrices on `points`.
pub fn check_finite_identities<A: RightAction>(
    action: &A,
    elements: &[A::Elem],
    points: &[A::Point],
) -> Result<IdentityCounts> {
    let subs = subgroups(action, elements);
    let le: Vec<(usize, usize)> = (0..subs.len())
        .flat_map(|x| (0..subs.len()).map(move |y| (x, y)))
        .filter(|&(x, y)| contains(&subs[y], &subs[x]))
        .collect();
    let bases: Vec<Vec<Op<A::Point>>> = subs.iter().map(|h| invariant_basis(action, points, h)).collect();
    let mut counts = IdentityCounts::default();
    for &(h1, h3) in &le {
        for &(h2, h3b) in &le {
            if h3b != h3 {
                continue;
            }
            for a in &bases[h1] {
                let (l, r) = compare_sides(action, a, &subs[h1], &subs[h2], &subs[h3]);
                if l != r {
                    return Err(fail("comparison formula", &l, &r));
                }
                counts.compare += 1;
                for b in &bases[h2] {
                    let (l, r) = mackey_sides(action, a, b, &subs[h1], &subs[h2], &subs[h3]);
                    if l != r {
                        return Err(fail("Mackey formula", &l, &r));
                    }
                    counts.mackey += 1;
                }
            }
        }
    }
    for &(h1, h2) in &le {
        for a in &bases[h1] {
            let t12 = transfer(action, a, &subs[h1], &subs[h2]);
            for &(h2b, h3) in &le {
                if h2b != h2 {
                    continue;
                }
                let l = transfer(action, &t12, &subs[h2], &subs[h3]);
                let r = transfer(action, a, &subs[h1], &subs[h3]);
                if l != r {
                    return Err(fail("transitivity", &l, &r));
                }
                counts.transitivity += 1;
            }
            // T(ab) = T(a)b and T(ba) = bT(a) for b ∈ B_{H2} whenever the
            // products are H1-invariant
            for b in &bases[h2] {
                for (prod, left) in [(a.mul(b), true), (b.mul(a), false)] {
                    if !prod.is_invariant(action, &subs[h1]) {
                        continue;
                    }
                    let l = transfer(action, &prod, &subs[h1], &subs[h2]);
                    let r = if left { t12.mul(b) } else { b.mul(&t12) };
                    if l != r {
                        return Err(fail("move rule", &l, &r));
                    }
                    counts.moves += 1;
                }
            }
        }
    }
    Ok(counts)
}

/// Σ₃ on `{1,2,3}` and on `I(2,3)`.
pub fn check_symmetric_instances(r: usize) -> Result<IdentityCounts> {
    let elements = all_perms(r).to_vec();
    let points: Vec<usize> = (1..=r).collect();
    let a = check_finite_identities(&SymmetricOnPoints { r }, &elements, &points)?;
    let b = check_finite_identities(&SymmetricOnPlaces { r }, &elements, &all_tuples(2, r))?;
    Ok(IdentityCounts {
        mackey: a.mackey + b.mackey,
        compare: a.compare + b.compare,
        transitivity: a.transitivity + b.transitivity,
        moves: a.moves + b.moves,
    })
}

fn in_window(t: &[i64]) -> bool {
    t.iter().all(|&z| (-1..=4).contains(&z))
}

/// Σ̂₂ on I(ℤ,2) with period 2. Sums over Σ̂₂ run over balls of two
/// radii; both sides of each identity must agree on the window
/// `[-1,4]²` and must not move when the ball grows.
pub fn check_affine_instance() -> Result<usize> {
    let act = AffineOnTuples { n: 2, r: 2 };
    let cases: [([i64; 2], [i64; 2], [i64; 2], [i64; 2]); 5] = [
        ([1, 1], [1, 2], [1, 2], [1, 4]),
        ([1, 2], [2, 1], [1, 2], [3, 0]),
        ([1, 1], [1, 3], [1, 1], [1, 3]),
        ([2, 1], [2, 2], [2, 2], [0, 4]),
        ([1, 3], [2, 4], [2, 4], [1, 3]),
    ];
    let mut checked = 0;
    for (i, j, k, l) in cases {
        let (i, j, k, l) = (i.to_vec(), j.to_vec(), k.to_vec(), l.to_vec());
        let trivial = vec![act.identity()];
        let s1 = act.stabilizer(&[i.clone(), j.clone()]);
        let s2 = act.stabilizer(&[k.clone(), l.clone()]);
        let a = Op::unit(i.clone(), j.clone());
        let b = Op::unit(k.clone(), l.clone());
        for (h1, h2) in [(&s1, &s2), (&trivial, &s2), (&s1, &trivial)] {
            // the invariant elements built from the units
            let a1 = transfer(&act, &a, &trivial, h1);
            let b1 = transfer(&act, &b, &trivial, h2);
            let mut seen = Vec::new();
            for radius in [5, 6] {
                let ball = act.ball(radius);
                let (lhs, rhs) = mackey_sides(&act, &a1, &b1, h1, h2, &ball);
                let (lhs, rhs) = (lhs.restrict(|t| in_window(t)), rhs.restrict(|t| in_window(t)));
                if lhs != rhs {
                    return Err(fail("affine Mackey formula", &lhs, &rhs));
                }
                let t_direct = transfer(&act, &a, &trivial, &ball).restrict(|t| in_window(t));
                let t_chain = transfer(&act, &a1, h1, &ball).restrict(|t| in_window(t));
                if t_direct != t_chain {
                    return Err(fail("affine transitivity", &t_direct, &t_chain));
                }
                seen.push((lhs, t_chain));
            }
            if seen[0] != seen[1] {
                return Err(Error::Verification(format!(
                    "window entries for {i:?},{j:?},{k:?},{l:?} change with the ball"
                )));
            }
            checked += 1;
        }
    }
    Ok(checked)
}
