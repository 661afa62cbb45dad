//! Graded quivers and their path algebras with commuting central variables.
//!
//! Paths compose left to right: `p·q` traverses `p` and then `q`, so for an
//! arrow `a: 0 → 1` we have `e0·a = a = a·e1` and `e1·a = 0`. Central
//! variables commute with everything and appear in a term as a monomial
//! alongside the path.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ArithError, Field, Scalar};
use crate::expr::{self, Evaluator, ExprError, Pos};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathAlgebraError {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("arrow `{arrow}` refers to unknown vertex `{vertex}`")]
    UnknownVertex { arrow: String, vertex: String },
    #[error("invalid name `{0}`")]
    InvalidName(String),
    #[error("elements live in different quivers")]
    MixedQuiver,
    #[error("elements have different coefficient domains ({0} vs {1})")]
    MixedField(Field, Field),
    #[error("no central variable named `{0}`")]
    UnknownCentralVar(String),
    #[error("substitution image for `{0}` is not a polynomial in central variables")]
    NotCentral(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub dst: usize,
    pub deg: i64,
}

/// What an identifier in an expression refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symbol {
    Idempotent(usize),
    Arrow(usize),
    Central(usize),
}

#[derive(Clone, Debug)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    central_vars: Vec<String>,
    symbols: HashMap<String, Symbol>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.arrows == other.arrows
            && self.central_vars == other.central_vars
    }
}

impl Eq for Quiver {}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Quiver {
    /// Builds a quiver. Arrows are given as `(name, src, dst, degree)` with
    /// vertex names; the idempotent of vertex `v` is named `e<v>`.
    pub fn new(
        vertices: &[&str],
        arrows: &[(&str, &str, &str, i64)],
        central_vars: &[&str],
    ) -> Result<Arc<Quiver>, PathAlgebraError> {
        let vertices: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let mut symbols = HashMap::new();
        let mut claim = |name: String, sym: Symbol| -> Result<(), PathAlgebraError> {
            if !valid_ident(&name) {
                return Err(PathAlgebraError::InvalidName(name));
            }
            if symbols.insert(name.clone(), sym).is_some() {
                return Err(PathAlgebraError::DuplicateName(name));
            }
            Ok(())
        };
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(PathAlgebraError::DuplicateName(v.clone()));
            }
            claim(format!("e{v}"), Symbol::Idempotent(i))?;
        }
        let vertex_index = |arrow: &str, v: &str| {
            vertices
                .iter()
                .position(|w| w == v)
                .ok_or_else(|| PathAlgebraError::UnknownVertex {
                    arrow: arrow.to_string(),
                    vertex: v.to_string(),
                })
        };
        let mut arrow_list = Vec::new();
        for (i, &(name, s, t, deg)) in arrows.iter().enumerate() {
            arrow_list.push(Arrow {
                name: name.to_string(),
                src: vertex_index(name, s)?,
                dst: vertex_index(name, t)?,
                deg,
            });
            claim(name.to_string(), Symbol::Arrow(i))?;
        }
        for (i, c) in central_vars.iter().enumerate() {
            claim(c.to_string(), Symbol::Central(i))?;
        }
        Ok(Arc::new(Quiver {
            vertices,
            arrows: arrow_list,
            central_vars: central_vars.iter().map(|s| s.to_string()).collect(),
            symbols,
        }))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn central_vars(&self) -> &[String] {
        &self.central_vars
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        match self.symbols.get(name) {
            Some(Symbol::Arrow(i)) => Some(*i),
            _ => None,
        }
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn central_index(&self, name: &str) -> Option<usize> {
        self.central_vars.iter().position(|v| v == name)
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.symbols.get(name).copied()
    }

    pub fn idempotent_name(&self, v: usize) -> String {
        format!("e{}", self.vertices[v])
    }

    /// The subquiver keeping only the arrows accepted by `keep`.
    pub fn restrict(&self, keep: impl Fn(&Arrow) -> bool) -> Arc<Quiver> {
        let vs: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        let arrows: Vec<(&str, &str, &str, i64)> = self
            .arrows
            .iter()
            .filter(|a| keep(a))
            .map(|a| {
                (
                    a.name.as_str(),
                    self.vertices[a.src].as_str(),
                    self.vertices[a.dst].as_str(),
                    a.deg,
                )
            })
            .collect();
        let cs: Vec<&str> = self.central_vars.iter().map(String::as_str).collect();
        Quiver::new(&vs, &arrows, &cs).expect("restriction of a valid quiver")
    }
}

/// Exponent vector over the quiver's central variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Monomial::one(n);
        m.0[i] = 1;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A path `start → ... → end`; the empty path at `v` is the idempotent `e_v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub start: usize,
    pub end: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path {
            start: v,
            end: v,
            arrows: Vec::new(),
        }
    }

    pub fn arrow(q: &Quiver, a: usize) -> Self {
        let ar = q.arrow(a);
        Path {
            start: ar.src,
            end: ar.dst,
            arrows: vec![a],
        }
    }

    /// Builds a path from arrow indices, checking composability.
    pub fn from_arrows(q: &Quiver, arrows: &[usize]) -> Option<Path> {
        let first = q.arrow(*arrows.first()?);
        let mut end = first.src;
        for &a in arrows {
            let ar = q.arrow(a);
            if ar.src != end {
                return None;
            }
            end = ar.dst;
        }
        Some(Path {
            start: first.src,
            end,
            arrows: arrows.to_vec(),
        })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn degree(&self, q: &Quiver) -> i64 {
        self.arrows.iter().map(|&a| q.arrow(a).deg).sum()
    }

    pub fn concat(&self, other: &Path) -> Option<Path> {
        if self.end != other.start {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path {
            start: self.start,
            end: other.end,
            arrows,
        })
    }

    pub fn is_cycle(&self) -> bool {
        self.start == self.end
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.start.cmp(&other.start))
            .then_with(|| self.end.cmp(&other.end))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub type TermKey = (Monomial, Path);

/// A finite linear combination of `monomial · path` terms.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    quiver: Arc<Quiver>,
    field: Field,
    terms: BTreeMap<TermKey, Scalar>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && (Arc::ptr_eq(&self.quiver, &other.quiver) || self.quiver == other.quiver)
            && self.terms == other.terms
    }
}

impl Eq for AlgebraElement {}

impl AlgebraElement {
    pub fn zero(quiver: &Arc<Quiver>, field: Field) -> Self {
        AlgebraElement {
            quiver: quiver.clone(),
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn term(quiver: &Arc<Quiver>, field: Field, c: Scalar, mono: Monomial, path: Path) -> Self {
        let mut e = Self::zero(quiver, field);
        e.add_term(mono, path, c);
        e
    }

    pub fn from_terms(
        quiver: &Arc<Quiver>,
        field: Field,
        terms: impl IntoIterator<Item = (TermKey, Scalar)>,
    ) -> Self {
        let mut e = Self::zero(quiver, field);
        for ((m, p), c) in terms {
            e.add_term(m, p, c);
        }
        e
    }

    pub fn idempotent(quiver: &Arc<Quiver>, field: Field, v: usize) -> Self {
        let n = quiver.central_vars.len();
        Self::term(quiver, field, field.one(), Monomial::one(n), Path::trivial(v))
    }

    /// `c · Σ_v e_v`.
    pub fn scalar(quiver: &Arc<Quiver>, field: Field, c: Scalar) -> Self {
        let n = quiver.central_vars.len();
        Self::from_terms(
            quiver,
            field,
            (0..quiver.num_vertices()).map(|v| ((Monomial::one(n), Path::trivial(v)), c.clone())),
        )
    }

    pub fn one(quiver: &Arc<Quiver>, field: Field) -> Self {
        Self::scalar(quiver, field, field.one())
    }

    pub fn arrow(quiver: &Arc<Quiver>, field: Field, a: usize) -> Self {
        let n = quiver.central_vars.len();
        Self::term(quiver, field, field.one(), Monomial::one(n), Path::arrow(quiver, a))
    }

    /// The central variable `x_i` as `Σ_v x_i e_v`.
    pub fn central(quiver: &Arc<Quiver>, field: Field, i: usize) -> Self {
        let n = quiver.central_vars.len();
        Self::from_terms(
            quiver,
            field,
            (0..quiver.num_vertices()).map(|v| ((Monomial::var(n, i), Path::trivial(v)), field.one())),
        )
    }

    /// Looks up an arrow, idempotent or central variable by name.
    pub fn named(quiver: &Arc<Quiver>, field: Field, name: &str) -> Option<Self> {
        Some(match quiver.symbol(name)? {
            Symbol::Idempotent(v) => Self::idempotent(quiver, field, v),
            Symbol::Arrow(a) => Self::arrow(quiver, field, a),
            Symbol::Central(i) => Self::central(quiver, field, i),
        })
    }

    pub fn parse(quiver: &Arc<Quiver>, field: Field, text: &str) -> Result<Self, PathAlgebraError> {
        Ok(expr::eval_str(text, &ElementEvaluator { quiver, field })?)
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, Scalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<TermKey, Scalar> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mono: Monomial, path: Path, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (mono, path);
        match self.terms.get_mut(&key) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PathAlgebraError> {
        if !Arc::ptr_eq(&self.quiver, &other.quiver) && self.quiver != other.quiver {
            return Err(PathAlgebraError::MixedQuiver);
        }
        if self.field != other.field {
            return Err(PathAlgebraError::MixedField(self.field, other.field));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PathAlgebraError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for ((m, p), c) in &other.terms {
            out.add_term(m.clone(), p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PathAlgebraError> {
        self.check_compatible(other)?;
        let mut out = Self::zero(&self.quiver, self.field);
        for ((m1, p1), c1) in &self.terms {
            for ((m2, p2), c2) in &other.terms {
                if let Some(p) = p1.concat(p2) {
                    out.add_term(m1.mul(m2), p, c1 * c2);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(&self.quiver, self.field);
        for (k, x) in &self.terms {
            out.add_term(k.0.clone(), k.1.clone(), x * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.quiver, self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Degree of each term; `None` for the zero element or mixed degrees.
    pub fn degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|(_, p)| p.degree(&self.quiver));
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    /// Split into homogeneous components by degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<i64, AlgebraElement> {
        let mut out: BTreeMap<i64, AlgebraElement> = BTreeMap::new();
        for ((m, p), c) in &self.terms {
            out.entry(p.degree(&self.quiver))
                .or_insert_with(|| Self::zero(&self.quiver, self.field))
                .add_term(m.clone(), p.clone(), c.clone());
        }
        out
    }

    /// All `(start, end)` pairs among the terms.
    pub fn endpoints(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.terms.keys().map(|(_, p)| (p.start, p.end)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// `e_s · self · e_t`.
    pub fn component(&self, s: usize, t: usize) -> Self {
        Self::from_terms(
            &self.quiver,
            self.field,
            self.terms
                .iter()
                .filter(|((_, p), _)| p.start == s && p.end == t)
                .map(|(k, c)| (k.clone(), c.clone())),
        )
    }

    pub fn max_path_len(&self) -> usize {
        self.terms.keys().map(|(_, p)| p.len()).max().unwrap_or(0)
    }

    /// Total word length: path length plus monomial degree.
    pub fn max_word_len(&self) -> usize {
        self.terms
            .keys()
            .map(|(m, p)| p.len() + m.degree() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Same terms viewed in another quiver with identical vertex, arrow and
    /// central-variable names for everything that occurs.
    pub fn transport(&self, target: &Arc<Quiver>) -> Option<Self> {
        let vmap: Vec<Option<usize>> =
            self.quiver.vertices.iter().map(|v| target.vertex_index(v)).collect();
        let amap: Vec<Option<usize>> =
            self.quiver.arrows.iter().map(|a| target.arrow_index(&a.name)).collect();
        let cmap: Vec<Option<usize>> =
            self.quiver.central_vars.iter().map(|c| target.central_index(c)).collect();
        let nc = target.central_vars.len();
        let mut out = Self::zero(target, self.field);
        for ((m, p), c) in &self.terms {
            let mut mono = Monomial::one(nc);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    mono.0[cmap[i]?] += e;
                }
            }
            let path = if p.is_empty() {
                Path::trivial(vmap[p.start]?)
            } else {
                let arrows: Option<Vec<usize>> = p.arrows.iter().map(|&a| amap[a]).collect();
                Path::from_arrows(target, &arrows?)?
            };
            out.add_term(mono, path, c.clone());
        }
        Some(out)
    }

    /// Polynomial in central variables, if this element is one (the same
    /// polynomial times every idempotent).
    pub fn as_central_poly(&self) -> Option<BTreeMap<Monomial, Scalar>> {
        let mut per_vertex: Vec<BTreeMap<Monomial, Scalar>> =
            vec![BTreeMap::new(); self.quiver.num_vertices()];
        for ((m, p), c) in &self.terms {
            if !p.is_empty() {
                return None;
            }
            per_vertex[p.start].insert(m.clone(), c.clone());
        }
        let first = per_vertex.first().cloned().unwrap_or_default();
        per_vertex.iter().all(|pv| *pv == first).then_some(first)
    }

    /// Replaces central variables by polynomials in the target quiver's
    /// central variables; arrows and vertices are carried over by name.
    pub fn substitute(
        &self,
        target: &Arc<Quiver>,
        map: &BTreeMap<String, AlgebraElement>,
    ) -> Result<Self, PathAlgebraError> {
        let hom = Homomorphism::renaming(&self.quiver, target, self.field, map)?;
        Ok(hom.apply(self))
    }

    pub fn to_expr_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, ((m, p), c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() {
                factors.push(mag.to_string());
            }
            for (v, &e) in self.quiver.central_vars.iter().zip(&m.0) {
                match e {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => factors.push(format!("{v}^{e}")),
                }
            }
            if p.is_empty() {
                factors.push(self.quiver.idempotent_name(p.start));
            } else {
                factors.extend(p.arrows.iter().map(|&a| self.quiver.arrows[a].name.clone()));
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

impl std::ops::Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.checked_add(rhs).expect("incompatible algebra elements")
    }
}

impl std::ops::Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(&-&self.field.one())
    }
}

impl std::ops::Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.checked_mul(rhs).expect("incompatible algebra elements")
    }
}

/// Evaluates expressions into path-algebra elements of one quiver.
pub struct ElementEvaluator<'a> {
    pub quiver: &'a Arc<Quiver>,
    pub field: Field,
}

impl Evaluator for ElementEvaluator<'_> {
    type Value = AlgebraElement;

    fn integer(&self, n: &BigInt, _: Pos) -> Result<AlgebraElement, ExprError> {
        Ok(AlgebraElement::scalar(self.quiver, self.field, self.field.from_bigint(n)))
    }

    fn rational(&self, num: &BigInt, den: &BigInt, pos: Pos) -> Result<AlgebraElement, ExprError> {
        let c = self
            .field
            .from_ratio(num, den)
            .map_err(|e| ExprError::new(pos, e.to_string()))?;
        Ok(AlgebraElement::scalar(self.quiver, self.field, c))
    }

    fn ident(&self, name: &str, pos: Pos) -> Result<AlgebraElement, ExprError> {
        AlgebraElement::named(self.quiver, self.field, name)
            .ok_or_else(|| ExprError::new(pos, format!("unknown identifier `{name}`")))
    }

    fn add(&self, a: AlgebraElement, b: AlgebraElement, _: Pos) -> Result<AlgebraElement, ExprError> {
        Ok(&a + &b)
    }

    fn neg(&self, a: AlgebraElement, _: Pos) -> Result<AlgebraElement, ExprError> {
        Ok(-&a)
    }

    fn mul(&self, a: AlgebraElement, b: AlgebraElement, pos: Pos) -> Result<AlgebraElement, ExprError> {
        let prod = &a * &b;
        if prod.is_zero() && !a.is_zero() && !b.is_zero() {
            return Err(ExprError::new(
                pos,
                format!("non-composable product ({a}) * ({b})"),
            ));
        }
        Ok(prod)
    }

    fn pow(&self, a: AlgebraElement, e: i64, pos: Pos) -> Result<AlgebraElement, ExprError> {
        if e < 0 {
            return Err(ExprError::new(pos, "negative exponents are not supported"));
        }
        Ok(a.pow(e as u32))
    }
}

/// An algebra map between path algebras, determined by images of vertices,
/// arrows and central variables.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    pub source: Arc<Quiver>,
    pub target: Arc<Quiver>,
    pub field: Field,
    pub vertex_map: Vec<usize>,
    pub arrow_images: Vec<AlgebraElement>,
    pub central_images: Vec<AlgebraElement>,
}

impl Homomorphism {
    /// Maps arrows and vertices to the same-named ones in `target`, central
    /// variables through `map` (or to the same-named target variable).
    pub fn renaming(
        source: &Arc<Quiver>,
        target: &Arc<Quiver>,
        field: Field,
        map: &BTreeMap<String, AlgebraElement>,
    ) -> Result<Self, PathAlgebraError> {
        for name in map.keys() {
            if source.central_index(name).is_none() {
                return Err(PathAlgebraError::UnknownCentralVar(name.clone()));
            }
        }
        let vertex_map = source
            .vertices
            .iter()
            .map(|v| {
                target.vertex_index(v).ok_or_else(|| PathAlgebraError::UnknownVertex {
                    arrow: String::new(),
                    vertex: v.clone(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let arrow_images = source
            .arrows
            .iter()
            .map(|a| {
                target
                    .arrow_index(&a.name)
                    .map(|i| AlgebraElement::arrow(target, field, i))
                    .ok_or_else(|| PathAlgebraError::InvalidName(a.name.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let central_images = source
            .central_vars
            .iter()
            .map(|c| match map.get(c) {
                Some(img) => {
                    let img = img
                        .transport(target)
                        .ok_or_else(|| PathAlgebraError::NotCentral(c.clone()))?;
                    if img.as_central_poly().is_none() {
                        return Err(PathAlgebraError::NotCentral(c.clone()));
                    }
                    Ok(img)
                }
                None => target
                    .central_index(c)
                    .map(|i| AlgebraElement::central(target, field, i))
                    .ok_or_else(|| PathAlgebraError::UnknownCentralVar(c.clone())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Homomorphism {
            source: source.clone(),
            target: target.clone(),
            field,
            vertex_map,
            arrow_images,
            central_images,
        })
    }

    pub fn apply(&self, u: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero(&self.target, self.field);
        for ((m, p), c) in u.terms() {
            let mut t = AlgebraElement::idempotent(&self.target, self.field, self.vertex_map[p.start])
                .scale(c);
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = &t * &self.central_images[i];
                }
            }
            for &a in &p.arrows {
                t = &t * &self.arrow_images[a];
            }
            out = &out + &t;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wk_quiver() -> Arc<Quiver> {
        Quiver::new(
            &["0", "1"],
            &[("a", "0", "1", 0), ("b", "1", "0", 0), ("alpha", "0", "0", -1), ("beta", "1", "1", -1)],
            &["x2", "x1"],
        )
        .unwrap()
    }

    fn el(q: &Arc<Quiver>, s: &str) -> AlgebraElement {
        AlgebraElement::parse(q, Field::Rationals, s).unwrap()
    }

    #[test]
    fn idempotents_and_composability() {
        let q = wk_quiver();
        assert_eq!(&el(&q, "e0") * &el(&q, "e0"), el(&q, "e0"));
        assert!((&el(&q, "e1") * &el(&q, "a")).is_zero());
        assert_eq!(&el(&q, "e0") * &el(&q, "a"), el(&q, "a"));
        assert_eq!(&el(&q, "a") * &el(&q, "e1"), el(&q, "a"));
        assert!(AlgebraElement::parse(&q, Field::Rationals, "e1*a").is_err());
    }

    #[test]
    fn central_variables_commute() {
        let q = wk_quiver();
        assert!((&(&el(&q, "x1") * &el(&q, "a")) - &(&el(&q, "a") * &el(&q, "x1"))).is_zero());
    }

    #[test]
    fn parse_relation_and_round_trip() {
        let q = wk_quiver();
        let r = el(&q, "a*b - (x1-1)*e0");
        assert_eq!(r.len(), 3);
        assert_eq!(r.to_expr_string(), "e0 + a*b - x1*e0");
        assert_eq!(el(&q, &r.to_expr_string()), r);
        let h = el(&q, "3/2*x2^2*alpha - 1/3*beta*beta");
        assert_eq!(el(&q, &h.to_expr_string()), h);
        assert_eq!(h.degree(), None);
        assert_eq!(el(&q, "beta*beta").degree(), Some(-2));
    }

    #[test]
    fn parse_errors() {
        let q = wk_quiver();
        let err = AlgebraElement::parse(&q, Field::Rationals, "a * zz").unwrap_err();
        assert!(matches!(err, PathAlgebraError::Expr(ExprError { pos: 4, .. })));
        assert!(AlgebraElement::parse(&q, Field::Rationals, "x1^-1").is_err());
        assert!(AlgebraElement::parse(&q, Field::Prime(3), "1/3*a").is_err());
    }

    #[test]
    fn substitution() {
        let ak = Quiver::new(
            &["0", "1"],
            &[("a", "0", "1", 0), ("b", "1", "0", 0), ("alpha", "0", "0", -1), ("beta", "1", "1", -1)],
            &["y", "x"],
        )
        .unwrap();
        let wk = wk_quiver();
        let f = Field::Rationals;
        let map: BTreeMap<String, AlgebraElement> = [
            ("x".to_string(), el(&wk, "x1 - 1")),
            ("y".to_string(), el(&wk, "x2 + 1")),
        ]
        .into_iter()
        .collect();
        let u = AlgebraElement::parse(&ak, f, "x*e0").unwrap();
        assert_eq!(u.substitute(&wk, &map).unwrap(), el(&wk, "(x1-1)*e0"));
        let u = AlgebraElement::parse(&ak, f, "((x+1)^2+y-1)*e1").unwrap();
        assert_eq!(u.substitute(&wk, &map).unwrap(), el(&wk, "(x1^2+x2)*e1"));
        let id = u.substitute(&ak, &BTreeMap::new()).unwrap();
        assert_eq!(id, u);
        let bad: BTreeMap<String, AlgebraElement> =
            [("x".to_string(), el(&wk, "a*b")), ("y".to_string(), el(&wk, "x2"))]
                .into_iter()
                .collect();
        assert!(matches!(u.substitute(&wk, &bad), Err(PathAlgebraError::NotCentral(_))));
    }

    #[test]
    fn quiver_validation() {
        assert!(Quiver::new(&["0"], &[("a", "0", "2", 0)], &[]).is_err());
        assert!(Quiver::new(&["0"], &[("a", "0", "0", 0)], &["a"]).is_err());
        assert!(Quiver::new(&["0"], &[("e0", "0", "0", 0)], &[]).is_err());
    }
}
