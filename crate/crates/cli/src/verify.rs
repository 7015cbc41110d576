//! Verification suites. Each returns a report with counts per check and
//! the first few counterexamples.

use std::collections::BTreeMap;

use affine_schur::dual::{schur_basis_product, sharp_compose_check};
use affine_schur::hom::{det_star, det_tilde_sharp, psi_a, psi_with, DetMultiplication, PsiDual};
use affine_schur::lie::{
    det_pi_check, diagonal_sum, lie_bracket_check, psi_pi_check, rho_check, Decomposer, GeneratorKind,
    LoopGenerator,
};
use affine_schur::schur::{
    basis_product, identity, increasing_tuples, transpose_antiauto, weyl_act, window_indices, AlgebraElement,
    BasisIndex, Product, WeylSymmetry,
};
use affine_schur::semigroup::{
    det_tilde, det_tilde_with, eta_as, eta_with, evaluate, matrix_mul, transpose, PeriodicMatrix,
};
use affine_schur::tensor::tensor_basis_product;
use affine_schur::transfer::{check_affine_instance, check_symmetric_instances};
use affine_schur::{LaurentCoeff, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

pub const SUITES: &[&str] = &[
    "oracle-equivalence",
    "ring-axioms",
    "hom-laws",
    "semigroup-laws",
    "mackey",
    "lie",
    "generators",
];

const MAX_FAILURES: usize = 10;

#[derive(Clone, Debug, Serialize)]
pub struct Params {
    pub n: i64,
    pub r: usize,
    pub window: i64,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct Failure {
    pub check: String,
    pub payload: Value,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub params: Params,
    pub passed: bool,
    pub checked: BTreeMap<String, usize>,
    pub failures: Vec<Failure>,
}

impl Report {
    fn new(suite: &str, params: &Params) -> Self {
        Report {
            suite: suite.into(),
            params: params.clone(),
            passed: true,
            checked: BTreeMap::new(),
            failures: Vec::new(),
        }
    }

    fn record(&mut self, check: &str, ok: bool, payload: impl FnOnce() -> Value) {
        *self.checked.entry(check.into()).or_insert(0) += 1;
        if !ok {
            self.passed = false;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(Failure {
                    check: check.into(),
                    payload: payload(),
                });
            }
        }
    }

    fn error(&mut self, check: &str, e: impl std::fmt::Display) {
        let msg = e.to_string();
        self.record(check, false, || json!({ "error": msg }));
    }

    pub fn total(&self) -> usize {
        self.checked.values().sum()
    }
}

pub fn run(suite: &str, p: &Params) -> Result<Report, String> {
    if p.n < 1 {
        return Err(format!("n must be positive, got {}", p.n));
    }
    let mut rep = Report::new(suite, p);
    match suite {
        "oracle-equivalence" => oracle_equivalence(p, &mut rep),
        "ring-axioms" => ring_axioms(p, &mut rep),
        "hom-laws" => hom_laws(p, &mut rep),
        "semigroup-laws" => semigroup_laws(p, &mut rep),
        "mackey" => mackey(p, &mut rep),
        "lie" => lie(p, &mut rep),
        "generators" => generators(p, &mut rep),
        _ => return Err(format!("unknown suite `{suite}`; expected one of {}", SUITES.join(", "))),
    }
    Ok(rep)
}

fn sorted(mut p: Product) -> Product {
    p.sort();
    p
}

fn basis(x: &BasisIndex) -> AlgebraElement {
    AlgebraElement::basis(x.clone())
}

fn show(x: &AlgebraElement) -> Value {
    serde_json::to_value(x).expect("elements serialize")
}

fn oracle_equivalence(p: &Params, rep: &mut Report) {
    let idx = window_indices(p.n, p.r, p.window);
    for x in &idx {
        for y in &idx {
            let g = sorted(basis_product(x, y));
            let s = sorted(schur_basis_product(x, y));
            let t = match tensor_basis_product(x, y) {
                Ok(t) => sorted(t),
                Err(e) => {
                    rep.error("three engines agree", e);
                    continue;
                }
            };
            rep.record("three engines agree", g == s && s == t, || {
                let enc = |p: &Product| -> Value {
                    p.iter().map(|(z, k)| json!([z.pairs(), k])).collect()
                };
                json!({ "left": x.pairs(), "right": y.pairs(), "green": enc(&g), "schur": enc(&s), "tensor": enc(&t) })
            });
        }
    }
}

fn random_element(rng: &mut ChaCha8Rng, idx: &[BasisIndex], n: i64, r: usize) -> AlgebraElement {
    let mut x = AlgebraElement::zero(n, r);
    for _ in 0..rng.gen_range(1..=3) {
        let b = idx.choose(rng).expect("nonempty window").clone();
        let c = LaurentCoeff::monomial(Rational::from_int(rng.gen_range(-3..=3)), rng.gen_range(-1..=1));
        x.add_term(b, &c);
    }
    x
}

fn ring_axioms(p: &Params, rep: &mut Report) {
    let (n, r) = (p.n, p.r);
    let idx = window_indices(n, r, p.window);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    for _ in 0..p.samples {
        let (x, y, z) = if rng.gen_bool(0.5) {
            let pick = |rng: &mut ChaCha8Rng| basis(idx.choose(rng).expect("nonempty window"));
            (pick(&mut rng), pick(&mut rng), pick(&mut rng))
        } else {
            (
                random_element(&mut rng, &idx, n, r),
                random_element(&mut rng, &idx, n, r),
                random_element(&mut rng, &idx, n, r),
            )
        };
        let assoc = (|| -> affine_schur::Result<bool> {
            Ok(x.multiply(&y)?.multiply(&z)? == x.multiply(&y.multiply(&z)?)?)
        })();
        match assoc {
            Ok(ok) => rep.record("associativity", ok, || json!({ "x": show(&x), "y": show(&y), "z": show(&z) })),
            Err(e) => rep.error("associativity", e),
        }
    }
    let one = identity(n, r);
    let idem: Vec<AlgebraElement> = increasing_tuples(n, r)
        .iter()
        .map(|i| basis(&BasisIndex::from_tuples(n, i, i)))
        .collect();
    for a in &idem {
        for b in &idem {
            let prod = a.multiply(b).expect("same context");
            let want = if a == b { a.clone() } else { AlgebraElement::zero(n, r) };
            rep.record("orthogonal idempotents", prod == want, || json!({ "e": show(a), "f": show(b) }));
        }
    }
    for x in &idx {
        let xb = basis(x);
        let ok = one.multiply(&xb).ok() == Some(xb.clone()) && xb.multiply(&one).ok() == Some(xb.clone());
        rep.record("identity laws", ok, || json!({ "x": x.pairs() }));
        // exactly one idempotent fixes x on each side
        let left: Vec<bool> = idem.iter().map(|e| e.multiply(&xb).ok() == Some(xb.clone())).collect();
        let right: Vec<bool> = idem.iter().map(|e| xb.multiply(e).ok() == Some(xb.clone())).collect();
        let zeros = idem
            .iter()
            .filter(|e| e.multiply(&xb).map(|v| v.is_zero()).unwrap_or(false))
            .count();
        let ok = left.iter().filter(|&&b| b).count() == 1
            && right.iter().filter(|&&b| b).count() == 1
            && zeros == idem.len() - 1;
        rep.record("idempotent decomposition", ok, || json!({ "x": x.pairs() }));
    }
}

fn rational_pairs() -> Vec<(LaurentCoeff, LaurentCoeff)> {
    let q = |a, b| LaurentCoeff::constant(Rational::new(a, b));
    vec![
        (q(2, 1), q(3, 1)),
        (q(-1, 2), q(5, 1)),
        (q(3, 7), q(-2, 3)),
        // a' = a^64 keeps the two parameters apart
        (LaurentCoeff::a(), LaurentCoeff::monomial(Rational::one(), 64)),
    ]
}

fn hom_laws(p: &Params, rep: &mut Report) {
    let (n, r) = (p.n, p.r);
    let idx = window_indices(n, r, p.window);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    for x in &idx {
        let xb = basis(x);
        for (a1, a2) in rational_pairs() {
            for s in -2..=2 {
                for s2 in -2..=2 {
                    let res = (|| -> affine_schur::Result<bool> {
                        let lhs = psi_with(&a1, s, &psi_with(&a2, s2, &xb)?)?;
                        let rhs = psi_with(&(&a2 * &a1.pow(s2)?), s * s2, &xb)?;
                        Ok(lhs == rhs)
                    })();
                    match res {
                        Ok(ok) => rep.record("psi composition", ok, || {
                            json!({ "x": x.pairs(), "a": a1.to_string(), "a2": a2.to_string(), "s": s, "s2": s2 })
                        }),
                        Err(e) => rep.error("psi composition", e),
                    }
                }
            }
        }
        let j = transpose_antiauto(&xb);
        rep.record("transpose is an involution", transpose_antiauto(&j) == xb, || json!({ "x": x.pairs() }));
        let rho_n = WeylSymmetry::rho(n).pow(n);
        rep.record(
            "rho^n is the identity",
            weyl_act(&rho_n, &xb).ok() == Some(xb.clone()),
            || json!({ "x": x.pairs() }),
        );
    }
    let mut syms = vec![WeylSymmetry::rho(n)];
    for i in 1..n {
        syms.push(WeylSymmetry::simple(n, i).expect("index in range"));
    }
    for _ in 0..p.samples {
        let x = random_element(&mut rng, &idx, n, r);
        let y = random_element(&mut rng, &idx, n, r);
        let s = rng.gen_range(-2..=2);
        let w = syms.choose(&mut rng).expect("at least rho");
        let res = (|| -> affine_schur::Result<[bool; 3]> {
            let xy = x.multiply(&y)?;
            let unit = LaurentCoeff::a();
            let psi = psi_with(&unit, s, &xy)? == psi_with(&unit, s, &x)?.multiply(&psi_with(&unit, s, &y)?)?;
            let jt = transpose_antiauto(&xy) == transpose_antiauto(&y).multiply(&transpose_antiauto(&x))?;
            let wa = weyl_act(w, &xy)? == weyl_act(w, &x)?.multiply(&weyl_act(w, &y)?)?;
            Ok([psi, jt, wa])
        })();
        match res {
            Ok([psi, jt, wa]) => {
                let pl = || json!({ "x": show(&x), "y": show(&y), "s": s });
                rep.record("psi multiplicativity", psi, pl);
                rep.record("transpose anti-multiplicativity", jt, pl);
                rep.record("weyl automorphism", wa, || json!({ "x": show(&x), "y": show(&y), "w": w.window() }));
            }
            Err(e) => rep.error("multiplicativity", e),
        }
    }
    // the square ψₐ∘det̃ₐ^# = det*∘ψₐ on S̃(n, n+r), and det̃ₐ^# = det* on
    // finite elements
    let big = n as usize + r;
    for x in window_indices(n, big, p.window.min(1)) {
        let xb = basis(&x);
        let res = (|| -> affine_schur::Result<(bool, Option<bool>)> {
            let sq = psi_a(&det_tilde_sharp(&xb)?)? == det_star(&psi_a(&xb)?)?;
            let fin = if x.is_finite() {
                Some(det_tilde_sharp(&xb)? == det_star(&xb)?)
            } else {
                None
            };
            Ok((sq, fin))
        })();
        match res {
            Ok((sq, fin)) => {
                rep.record("det commuting square", sq, || json!({ "x": x.pairs() }));
                if let Some(ok) = fin {
                    rep.record("det sharp on finite elements", ok, || json!({ "x": x.pairs() }));
                }
            }
            Err(e) => rep.error("det commuting square", e),
        }
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, n: i64) -> PeriodicMatrix {
    let mut g = PeriodicMatrix::zero(n);
    for _ in 0..rng.gen_range(1..=2 * n as usize + 1) {
        let i = rng.gen_range(1..=n);
        let j = rng.gen_range(1..=n) + n * rng.gen_range(-1..=1);
        let v = LaurentCoeff::from_int(rng.gen_range(-3..=3));
        g.add_entry(i, j, &v);
    }
    g
}

fn semigroup_laws(p: &Params, rep: &mut Report) {
    let n = p.n;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let inv = LaurentCoeff::monomial(Rational::one(), -1);
    for _ in 0..p.samples {
        let g = random_matrix(&mut rng, n);
        let h = random_matrix(&mut rng, n);
        let s = rng.gen_range(-1..=2);
        let s2 = rng.gen_range(-1..=2);
        let pl = || json!({ "g": g, "h": h, "s": s, "s2": s2 });
        let res = (|| -> affine_schur::Result<Vec<(&'static str, bool)>> {
            let mut out = Vec::new();
            for (a1, a2) in rational_pairs() {
                let lhs = eta_with(&a1, s, &eta_with(&a2, s2, &g)?)?;
                let rhs = eta_with(&(&a2 * &a1.pow(s2)?), s * s2, &g)?;
                out.push(("eta composition", lhs == rhs));
            }
            let tl = transpose(&eta_as(s, &g)?) == eta_with(&inv, s, &transpose(&g))?
                && det_tilde_with(&inv, &transpose(&g))? == det_tilde(&g);
            out.push(("eta and transpose", tl));
            let gh = matrix_mul(&g, &h)?;
            out.push(("det multiplicativity", det_tilde(&gh) == &det_tilde(&g) * &det_tilde(&h)));
            let e = evaluate(&gh, p.r) == evaluate(&g, p.r).multiply(&evaluate(&h, p.r))?;
            out.push(("evaluation multiplicativity", e));
            Ok(out)
        })();
        match res {
            Ok(v) => {
                for (name, ok) in v {
                    rep.record(name, ok, pl);
                }
            }
            Err(e) => rep.error("semigroup laws", e),
        }
    }
}

fn mackey(p: &Params, rep: &mut Report) {
    match check_symmetric_instances(p.r) {
        Ok(c) => {
            *rep.checked.entry("symmetric mackey".into()).or_insert(0) += c.mackey;
            *rep.checked.entry("symmetric comparison".into()).or_insert(0) += c.compare;
            *rep.checked.entry("symmetric transitivity".into()).or_insert(0) += c.transitivity;
            *rep.checked.entry("symmetric move rule".into()).or_insert(0) += c.moves;
        }
        Err(e) => rep.error("symmetric instances", e),
    }
    match check_affine_instance() {
        Ok(k) => *rep.checked.entry("affine window".into()).or_insert(0) += k,
        Err(e) => rep.error("affine window", e),
    }
    // (g∘f)^# = f^#∘g^# on 10-index windows
    let a = LaurentCoeff::a();
    let window: Vec<BasisIndex> = window_indices(2, 3, 1).into_iter().take(10).collect();
    let f = DetMultiplication { p: a.clone() };
    for s in -2..=2 {
        let g = PsiDual { p: a.clone(), s };
        let res = sharp_compose_check(&f, &g, &window, &window_indices(2, 1, 1));
        match res {
            Ok(ok) => rep.record("transposes compose", ok, || json!({ "f": "det", "g": format!("psi_dual(a,{s})") })),
            Err(e) => rep.error("transposes compose", e),
        }
    }
    let window: Vec<BasisIndex> = window_indices(2, 2, 1).into_iter().take(10).collect();
    for (s, s2) in [(1, -1), (2, 0), (-2, 1)] {
        let f = PsiDual { p: a.clone(), s };
        let g = PsiDual {
            p: LaurentCoeff::constant(Rational::from_int(2)),
            s: s2,
        };
        match sharp_compose_check(&f, &g, &window, &window_indices(2, 2, 1)) {
            Ok(ok) => rep.record("transposes compose", ok, || json!({ "s": s, "s2": s2 })),
            Err(e) => rep.error("transposes compose", e),
        }
    }
}

fn loop_generators(n: i64, w: i64) -> Vec<LoopGenerator> {
    let mut out = Vec::new();
    for s in 1..=n {
        for t in 1..=n {
            for l in -w..=w {
                out.push(LoopGenerator::new(n, s, t + l * n));
            }
        }
    }
    out
}

fn lie(p: &Params, rep: &mut Report) {
    let (n, r) = (p.n, p.r);
    let gens = loop_generators(n, p.window);
    for &g1 in &gens {
        for &g2 in &gens {
            match lie_bracket_check(n, g1, g2, r) {
                Ok(ok) => rep.record("bracket", ok, || json!({ "g1": g1, "g2": g2 })),
                Err(e) => rep.error("bracket", e),
            }
        }
        if g1.s != g1.t {
            match psi_pi_check(n, g1, r) {
                Ok(ok) => rep.record("psi and pi", ok, || json!({ "g": g1 })),
                Err(e) => rep.error("psi and pi", e),
            }
        }
        match rho_check(n, g1, r) {
            Ok(ok) => rep.record("rho and pi", ok, || json!({ "g": g1 })),
            Err(e) => rep.error("rho and pi", e),
        }
    }
    match diagonal_sum(n, r) {
        Ok(ok) => rep.record("diagonal sum", ok, || json!({})),
        Err(e) => rep.error("diagonal sum", e),
    }
    if n >= 2 {
        for s in 1..=n {
            for t in [s - 1, s + 1] {
                let g = LoopGenerator::new(n, s, t);
                match det_pi_check(n, g, r) {
                    Ok(ok) => rep.record("det sharp and pi", ok, || json!({ "g": g })),
                    Err(e) => rep.error("det sharp and pi", e),
                }
            }
        }
    }
}

fn generators(p: &Params, rep: &mut Report) {
    let (n, r) = (p.n, p.r);
    let mut dec = Decomposer::new();
    for x in window_indices(n, r, p.window) {
        match dec.decompose(&x, GeneratorKind::Y) {
            Ok(_) => rep.record("Y decomposition", true, || json!({})),
            Err(e) => rep.error("Y decomposition", format!("{x}: {e}")),
        }
        if (r as i64) < n {
            match dec.decompose(&x, GeneratorKind::X) {
                Ok(_) => rep.record("X decomposition", true, || json!({})),
                Err(e) => rep.error("X decomposition", format!("{x}: {e}")),
            }
        }
    }
}
