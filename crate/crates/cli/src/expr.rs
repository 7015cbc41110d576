//! Expressions over one Schur algebra:
//!
//! ```text
//! expr   := ["-"] term (("+"|"-") term)*
//! term   := factor ("*" factor)*
//! factor := scalar | atom | "(" expr ")" | map "(" expr ")"
//! atom   := "xi[" tuple "|" tuple "]"
//! tuple  := "(" int ("," int)* ")"
//! scalar := int ["/" int] | "a" ["^" int]
//! map    := "psi[" int "]" | "psi_a" | "embed" | "det_star" | "det_sharp"
//!         | "w[" tuple "]"
//! ```
//!
//! `w[...]` applies the Weyl symmetry with the given window.

use std::fmt;

use affine_schur::hom::{det_star, det_tilde_sharp, embed_finite, psi_a, psi_as};
use affine_schur::schur::{identity, weyl_act, AlgebraElement, BasisIndex, WeylSymmetry};
use affine_schur::{LaurentCoeff, Rational};

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprError {
    Syntax { pos: Pos, msg: String },
    Context { pos: Pos, msg: String },
    Eval(String),
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::Syntax { pos, msg } => write!(f, "syntax error at {pos}: {msg}"),
            ExprError::Context { pos, msg } => write!(f, "context mismatch at {pos}: {msg}"),
            ExprError::Eval(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for ExprError {}

impl From<affine_schur::Error> for ExprError {
    fn from(e: affine_schur::Error) -> Self {
        ExprError::Eval(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapName {
    PsiAs(i64),
    PsiA,
    Embed,
    DetStar,
    DetSharp,
    Weyl(Vec<i64>),
}

impl MapName {
    fn shifts_rank(&self) -> bool {
        matches!(self, MapName::DetStar | MapName::DetSharp)
    }
}

#[derive(Clone, Debug)]
pub enum Node {
    Atom { tops: Vec<i64>, bottoms: Vec<i64> },
    Number(Rational),
    Param(i64),
    /// Terms with a flag for subtraction.
    Sum(Vec<(bool, Expr)>),
    Product(Vec<Expr>),
    Apply { map: MapName, arg: Box<Expr> },
}

#[derive(Clone, Debug)]
pub struct Expr {
    pub node: Node,
    pub pos: Pos,
}

// positions are ignored
impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        match (&self.node, &other.node) {
            (Node::Atom { tops: a, bottoms: b }, Node::Atom { tops: c, bottoms: d }) => a == c && b == d,
            (Node::Number(a), Node::Number(b)) => a == b,
            (Node::Param(a), Node::Param(b)) => a == b,
            (Node::Sum(a), Node::Sum(b)) => a == b,
            (Node::Product(a), Node::Product(b)) => a == b,
            (Node::Apply { map: m, arg: x }, Node::Apply { map: n, arg: y }) => m == n && x == y,
            _ => false,
        }
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, t: &[i64]) -> fmt::Result {
    write!(f, "(")?;
    for (k, v) in t.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{v}")?;
    }
    write!(f, ")")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            Node::Atom { tops, bottoms } => {
                write!(f, "xi[")?;
                write_tuple(f, tops)?;
                write!(f, "|")?;
                write_tuple(f, bottoms)?;
                write!(f, "]")
            }
            Node::Number(q) => write!(f, "{q}"),
            Node::Param(1) => write!(f, "a"),
            Node::Param(k) => write!(f, "a^{k}"),
            Node::Sum(terms) => {
                for (k, (neg, t)) in terms.iter().enumerate() {
                    match (k, neg) {
                        (0, true) => write!(f, "-")?,
                        (0, false) => {}
                        (_, true) => write!(f, " - ")?,
                        (_, false) => write!(f, " + ")?,
                    }
                    if matches!(t.node, Node::Sum(_)) {
                        write!(f, "({t})")?;
                    } else {
                        write!(f, "{t}")?;
                    }
                }
                Ok(())
            }
            Node::Product(factors) => {
                let scalar = |x: &Expr| matches!(x.node, Node::Number(_) | Node::Param(_));
                for (k, x) in factors.iter().enumerate() {
                    if k > 0 && scalar(&factors[k - 1]) && scalar(x) {
                        write!(f, "*")?;
                    } else if k > 0 {
                        write!(f, " * ")?;
                    }
                    if matches!(x.node, Node::Sum(_) | Node::Product(_)) {
                        write!(f, "({x})")?;
                    } else {
                        write!(f, "{x}")?;
                    }
                }
                Ok(())
            }
            Node::Apply { map, arg } => {
                match map {
                    MapName::PsiAs(s) => write!(f, "psi[{s}]")?,
                    MapName::PsiA => write!(f, "psi_a")?,
                    MapName::Embed => write!(f, "embed")?,
                    MapName::DetStar => write!(f, "det_star")?,
                    MapName::DetSharp => write!(f, "det_sharp")?,
                    MapName::Weyl(w) => {
                        write!(f, "w[")?;
                        write_tuple(f, w)?;
                        write!(f, "]")?;
                    }
                }
                write!(f, "({arg})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, Pos)>,
}

fn lex(text: &str) -> Result<Lexer, ExprError> {
    let mut toks = Vec::new();
    let (mut line, mut col) = (1, 1);
    let chars: Vec<char> = text.chars().collect();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let pos = Pos { line, col };
        if c == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let st = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[st..k].iter().collect();
            let v = s.parse().map_err(|_| ExprError::Syntax {
                pos,
                msg: format!("integer `{s}` out of range"),
            })?;
            col += k - st;
            toks.push((Tok::Int(v), pos));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let st = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            col += k - st;
            toks.push((Tok::Ident(chars[st..k].iter().collect()), pos));
            continue;
        }
        if "()[]|,+-*/^".contains(c) {
            toks.push((Tok::Sym(c), pos));
            col += 1;
            k += 1;
            continue;
        }
        return Err(ExprError::Syntax {
            pos,
            msg: format!("unexpected character `{c}`"),
        });
    }
    toks.push((Tok::End, Pos { line, col }));
    Ok(Lexer { toks })
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        let found = match self.peek() {
            Tok::End => "end of input".to_string(),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(v) => format!("`{v}`"),
            Tok::Sym(c) => format!("`{c}`"),
        };
        Err(ExprError::Syntax {
            pos: self.pos(),
            msg: format!("{}, found {found}", msg.into()),
        })
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected `{c}`"))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn signed_int(&mut self) -> Result<i64, ExprError> {
        let neg = self.eat('-');
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(if neg { -v } else { v })
            }
            _ => self.fail("expected an integer"),
        }
    }

    fn tuple(&mut self) -> Result<Vec<i64>, ExprError> {
        self.expect('(')?;
        let mut out = vec![self.signed_int()?];
        while self.eat(',') {
            out.push(self.signed_int()?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let pos = self.pos();
        let mut terms = Vec::new();
        let mut neg = self.eat('-');
        loop {
            terms.push((neg, self.term()?));
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else {
                break;
            }
        }
        if terms.len() == 1 && !terms[0].0 {
            return Ok(terms.pop().expect("one term").1);
        }
        Ok(Expr {
            node: Node::Sum(terms),
            pos,
        })
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let pos = self.pos();
        let mut factors = vec![self.factor()?];
        while self.eat('*') {
            factors.push(self.factor()?);
        }
        if factors.len() == 1 {
            return Ok(factors.pop().expect("one factor"));
        }
        Ok(Expr {
            node: Node::Product(factors),
            pos,
        })
    }

    fn argument(&mut self, map: MapName, pos: Pos) -> Result<Expr, ExprError> {
        self.expect('(')?;
        let arg = self.expr()?;
        self.expect(')')?;
        Ok(Expr {
            node: Node::Apply {
                map,
                arg: Box::new(arg),
            },
            pos,
        })
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                let mut q = Rational::from_int(v);
                if self.eat('/') {
                    let d = match self.peek().clone() {
                        Tok::Int(0) => return self.fail("zero denominator"),
                        Tok::Int(d) => d,
                        _ => return self.fail("expected a denominator"),
                    };
                    self.bump();
                    q = Rational::new(v, d);
                }
                Ok(Expr {
                    node: Node::Number(q),
                    pos,
                })
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "a" => {
                        let k = if self.eat('^') { self.signed_int()? } else { 1 };
                        Ok(Expr {
                            node: Node::Param(k),
                            pos,
                        })
                    }
                    "xi" => {
                        self.expect('[')?;
                        let tops = self.tuple()?;
                        self.expect('|')?;
                        let bottoms = self.tuple()?;
                        self.expect(']')?;
                        if tops.len() != bottoms.len() {
                            return Err(ExprError::Context {
                                pos,
                                msg: format!(
                                    "top has length {} but bottom has length {}",
                                    tops.len(),
                                    bottoms.len()
                                ),
                            });
                        }
                        Ok(Expr {
                            node: Node::Atom { tops, bottoms },
                            pos,
                        })
                    }
                    "psi" => {
                        self.expect('[')?;
                        let s = self.signed_int()?;
                        self.expect(']')?;
                        self.argument(MapName::PsiAs(s), pos)
                    }
                    "w" => {
                        self.expect('[')?;
                        let w = self.tuple()?;
                        self.expect(']')?;
                        self.argument(MapName::Weyl(w), pos)
                    }
                    "psi_a" => self.argument(MapName::PsiA, pos),
                    "embed" => self.argument(MapName::Embed, pos),
                    "det_star" => self.argument(MapName::DetStar, pos),
                    "det_sharp" => self.argument(MapName::DetSharp, pos),
                    _ => Err(ExprError::Syntax {
                        pos,
                        msg: format!("unknown name `{name}`"),
                    }),
                }
            }
            _ => self.fail("expected a scalar, `xi[...]`, a map or `(`"),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, ExprError> {
    let lexer = lex(text)?;
    let mut p = Parser {
        toks: lexer.toks,
        at: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail("expected an operator or end of input");
    }
    Ok(e)
}

impl Expr {
    /// The rank `r` of the algebra the expression lives in, if any atom
    /// fixes it. Fails when two atoms of one scope disagree.
    pub fn rank(&self, n: i64) -> Result<Option<usize>, ExprError> {
        let mut found: Option<(usize, Pos)> = None;
        self.collect_rank(n, &mut found)?;
        Ok(found.map(|(r, _)| r))
    }

    fn collect_rank(&self, n: i64, found: &mut Option<(usize, Pos)>) -> Result<(), ExprError> {
        let note = |r: usize, pos: Pos, found: &mut Option<(usize, Pos)>| match found {
            Some((r0, p0)) if *r0 != r => Err(ExprError::Context {
                pos,
                msg: format!("rank {r} here but rank {r0} at {p0}"),
            }),
            Some(_) => Ok(()),
            None => {
                *found = Some((r, pos));
                Ok(())
            }
        };
        match &self.node {
            Node::Atom { tops, .. } => note(tops.len(), self.pos, found),
            Node::Number(_) | Node::Param(_) => Ok(()),
            Node::Sum(terms) => terms.iter().try_for_each(|(_, t)| t.collect_rank(n, found)),
            Node::Product(fs) => fs.iter().try_for_each(|x| x.collect_rank(n, found)),
            Node::Apply { map, arg } => {
                if let MapName::Weyl(w) = map {
                    if w.len() as i64 != n {
                        return Err(ExprError::Context {
                            pos: self.pos,
                            msg: format!("Weyl window has length {} but n = {n}", w.len()),
                        });
                    }
                }
                match arg.rank(n)? {
                    Some(r) if map.shifts_rank() => {
                        if r < n as usize {
                            return Err(ExprError::Context {
                                pos: self.pos,
                                msg: format!("{map:?} needs rank at least {n}, got {r}"),
                            });
                        }
                        note(r - n as usize, self.pos, found)
                    }
                    Some(r) => note(r, self.pos, found),
                    None => Ok(()),
                }
            }
        }
    }

    /// Evaluates in `S̃(n, r)` with `mul` as the product.
    pub fn eval(
        &self,
        n: i64,
        r: usize,
        mul: &mut dyn FnMut(&AlgebraElement, &AlgebraElement) -> affine_schur::Result<AlgebraElement>,
    ) -> Result<AlgebraElement, ExprError> {
        match self.eval_value(n, r, mul)? {
            Value::Scalar(c) => Ok(identity(n, r).scale(&c)),
            Value::Element(x) => Ok(x),
        }
    }

    fn eval_value(
        &self,
        n: i64,
        r: usize,
        mul: &mut dyn FnMut(&AlgebraElement, &AlgebraElement) -> affine_schur::Result<AlgebraElement>,
    ) -> Result<Value, ExprError> {
        Ok(match &self.node {
            Node::Atom { tops, bottoms } => {
                if tops.len() != r {
                    return Err(ExprError::Context {
                        pos: self.pos,
                        msg: format!("expected rank {r}, got {}", tops.len()),
                    });
                }
                Value::Element(AlgebraElement::basis(BasisIndex::from_tuples(n, tops, bottoms)))
            }
            Node::Number(q) => Value::Scalar(LaurentCoeff::constant(q.clone())),
            Node::Param(k) => Value::Scalar(LaurentCoeff::monomial(Rational::one(), *k)),
            Node::Sum(terms) => {
                let mut acc = Value::Scalar(LaurentCoeff::zero());
                for (neg, t) in terms {
                    let mut v = t.eval_value(n, r, mul)?;
                    if *neg {
                        v = v.neg();
                    }
                    acc = acc.add(v, n, r)?;
                }
                acc
            }
            Node::Product(fs) => {
                let mut acc = Value::Scalar(LaurentCoeff::one());
                for x in fs {
                    let v = x.eval_value(n, r, mul)?;
                    acc = match (acc, v) {
                        (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(&a * &b),
                        (Value::Scalar(a), Value::Element(y)) | (Value::Element(y), Value::Scalar(a)) => {
                            Value::Element(y.scale(&a))
                        }
                        (Value::Element(x), Value::Element(y)) => Value::Element(mul(&x, &y)?),
                    };
                }
                acc
            }
            Node::Apply { map, arg } => {
                let inner_r = if map.shifts_rank() { r + n as usize } else { r };
                let x = arg.eval(n, inner_r, mul)?;
                Value::Element(match map {
                    MapName::PsiAs(s) => psi_as(*s, &x)?,
                    MapName::PsiA => psi_a(&x)?,
                    MapName::Embed => embed_finite(&x)?,
                    MapName::DetStar => det_star(&x)?,
                    MapName::DetSharp => det_tilde_sharp(&x)?,
                    MapName::Weyl(w) => weyl_act(&WeylSymmetry::new(w.clone())?, &x)?,
                })
            }
        })
    }
}

enum Value {
    Scalar(LaurentCoeff),
    Element(AlgebraElement),
}

impl Value {
    fn neg(self) -> Value {
        match self {
            Value::Scalar(c) => Value::Scalar(-c),
            Value::Element(x) => Value::Element(x.neg()),
        }
    }

    fn add(self, other: Value, n: i64, r: usize) -> Result<Value, ExprError> {
        Ok(match (self, other) {
            (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(a + b),
            (Value::Scalar(a), Value::Element(y)) | (Value::Element(y), Value::Scalar(a)) => {
                Value::Element(y.add(&identity(n, r).scale(&a))?)
            }
            (Value::Element(x), Value::Element(y)) => Value::Element(x.add(&y)?),
        })
    }
}

/// An expression for an algebra element, one term per basis element.
/// Non-constant coefficients are written in `a`.
pub fn element_to_expr(x: &AlgebraElement) -> Expr {
    let pos = Pos::default();
    let mut terms = Vec::new();
    for (b, c) in x.terms() {
        let atom = Expr {
            node: Node::Atom {
                tops: b.tops().to_vec(),
                bottoms: b.bottoms().to_vec(),
            },
            pos,
        };
        for (k, q) in c.terms() {
            let neg = q.is_negative();
            let mag = q.abs();
            let mut factors = Vec::new();
            if !mag.is_one() {
                factors.push(Expr {
                    node: Node::Number(mag),
                    pos,
                });
            }
            if k != 0 {
                factors.push(Expr {
                    node: Node::Param(k),
                    pos,
                });
            }
            factors.push(atom.clone());
            let t = if factors.len() == 1 {
                factors.pop().expect("one factor")
            } else {
                Expr {
                    node: Node::Product(factors),
                    pos,
                }
            };
            terms.push((neg, t));
        }
    }
    match terms.len() {
        0 => Expr {
            node: Node::Number(Rational::zero()),
            pos,
        },
        1 if !terms[0].0 => terms.pop().expect("one term").1,
        _ => Expr {
            node: Node::Sum(terms),
            pos,
        },
    }
}

/// A decomposition into generators as an expression.
pub fn generators_to_expr(e: &affine_schur::lie::Expr) -> Expr {
    use affine_schur::lie::Expr as G;
    let pos = Pos::default();
    match e {
        G::Gen { index } => Expr {
            node: Node::Atom {
                tops: index.tops().to_vec(),
                bottoms: index.bottoms().to_vec(),
            },
            pos,
        },
        G::Scale { by, expr } => {
            let inner = generators_to_expr(expr);
            let neg = by.is_negative();
            let mag = by.abs();
            let body = if mag.is_one() {
                inner
            } else {
                let mut fs = vec![Expr {
                    node: Node::Number(mag),
                    pos,
                }];
                match inner.node {
                    Node::Product(more) => fs.extend(more),
                    _ => fs.push(inner),
                }
                Expr {
                    node: Node::Product(fs),
                    pos,
                }
            };
            if neg {
                Expr {
                    node: Node::Sum(vec![(true, body)]),
                    pos,
                }
            } else {
                body
            }
        }
        G::Add { terms } => {
            let mut out = Vec::new();
            for t in terms {
                match generators_to_expr(t).node {
                    Node::Sum(inner) => out.extend(inner),
                    node => out.push((false, Expr { node, pos })),
                }
            }
            Expr {
                node: Node::Sum(out),
                pos,
            }
        }
        G::Mul { left, right } => {
            let mut fs = Vec::new();
            for side in [left, right] {
                let x = generators_to_expr(side);
                match x.node {
                    Node::Product(more) => fs.extend(more),
                    _ => fs.push(x),
                }
            }
            Expr {
                node: Node::Product(fs),
                pos,
            }
        }
    }
}
