//! Commutative polynomial ideals: Buchberger completion in degree-reverse-lex
//! order, quotient dimensions, Jacobian ideals, Tjurina numbers of the
//! hypersurfaces `uv − xy((x+1)^k + y − 1)` and singular-point tests.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{Field, Scalar};
use crate::expr::{eval_str, Evaluator, ExprError, Pos};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SingularityError {
    #[error("k must be at least 1")]
    InvalidK,
    #[error("coefficients must lie in a field, got {0}")]
    NotAField(Field),
    #[error("expected {expected} coordinates, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("local dimension did not stabilise below power {0}")]
    NotStable(u32),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Exponent vector ordered by degree-reverse-lex, variable 0 largest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn lcm(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    fn quotient(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn times(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn coprime(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial ring `K[v_0, ..., v_{n-1}]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    pub field: Field,
    pub vars: Vec<String>,
}

impl PolyRing {
    pub fn new(field: Field, vars: &[&str]) -> Result<Self, SingularityError> {
        if !field.is_field() {
            return Err(SingularityError::NotAField(field));
        }
        Ok(PolyRing {
            field,
            vars: vars.iter().map(|s| s.to_string()).collect(),
        })
    }

    /// `K[u, v, x, y]` with `u > v > x > y`.
    pub fn uvxy(field: Field) -> Result<Self, SingularityError> {
        PolyRing::new(field, &["u", "v", "x", "y"])
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn zero(&self) -> CommPoly {
        CommPoly {
            field: self.field,
            nvars: self.nvars(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(&self, c: Scalar) -> CommPoly {
        let mut p = self.zero();
        p.add_term(Exponent(vec![0; self.nvars()]), c);
        p
    }

    pub fn var(&self, i: usize) -> CommPoly {
        let mut e = vec![0; self.nvars()];
        e[i] = 1;
        let mut p = self.zero();
        p.add_term(Exponent(e), self.field.one());
        p
    }

    pub fn monomial(&self, e: Exponent) -> CommPoly {
        let mut p = self.zero();
        p.add_term(e, self.field.one());
        p
    }

    pub fn parse(&self, src: &str) -> Result<CommPoly, SingularityError> {
        Ok(eval_str(src, self)?)
    }
}

impl Evaluator for PolyRing {
    type Value = CommPoly;

    fn integer(&self, n: &BigInt, _: Pos) -> Result<CommPoly, ExprError> {
        Ok(self.constant(self.field.from_bigint(n)))
    }

    fn rational(&self, num: &BigInt, den: &BigInt, pos: Pos) -> Result<CommPoly, ExprError> {
        let c = self
            .field
            .from_ratio(num, den)
            .map_err(|e| ExprError::new(pos, e.to_string()))?;
        Ok(self.constant(c))
    }

    fn ident(&self, name: &str, pos: Pos) -> Result<CommPoly, ExprError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .map(|i| self.var(i))
            .ok_or_else(|| ExprError::new(pos, format!("unknown variable `{name}`")))
    }

    fn add(&self, a: CommPoly, b: CommPoly, _: Pos) -> Result<CommPoly, ExprError> {
        Ok(&a + &b)
    }

    fn neg(&self, a: CommPoly, _: Pos) -> Result<CommPoly, ExprError> {
        Ok(a.scale(&-&self.field.one()))
    }

    fn mul(&self, a: CommPoly, b: CommPoly, _: Pos) -> Result<CommPoly, ExprError> {
        Ok(&a * &b)
    }

    fn pow(&self, a: CommPoly, e: i64, pos: Pos) -> Result<CommPoly, ExprError> {
        if e < 0 {
            return Err(ExprError::new(pos, "negative exponents are not supported"));
        }
        Ok(a.pow(e as u32))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Exponent, Scalar>,
}

impl CommPoly {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exponent, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn leading(&self) -> Option<(&Exponent, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Scalar) -> CommPoly {
        let mut out = CommPoly {
            field: self.field,
            nvars: self.nvars,
            terms: BTreeMap::new(),
        };
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect();
        }
        out
    }

    fn shifted(&self, m: &Exponent, c: &Scalar) -> CommPoly {
        CommPoly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.times(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> CommPoly {
        let mut one = CommPoly {
            field: self.field,
            nvars: self.nvars,
            terms: BTreeMap::new(),
        };
        one.add_term(Exponent(vec![0; self.nvars]), self.field.one());
        (0..e).fold(one, |acc, _| &acc * self)
    }

    pub fn monic(&self) -> CommPoly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv().expect("field coefficient")),
            None => self.clone(),
        }
    }

    pub fn derivative(&self, i: usize) -> CommPoly {
        let mut out = CommPoly {
            field: self.field,
            nvars: self.nvars,
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            if e.0[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d.0[i] -= 1;
            out.add_term(d, c * &self.field.from_i64(e.0[i] as i64));
        }
        out
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        let mut total = self.field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(&e.0) {
                t = &t * &x.pow(k);
            }
            total = &total + &t;
        }
        total
    }

    /// Substitutes `images[i]` for variable `i`.
    pub fn compose(&self, images: &[CommPoly]) -> CommPoly {
        let mut out = CommPoly {
            field: self.field,
            nvars: images.first().map_or(self.nvars, |p| p.nvars),
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            let mut t = CommPoly {
                field: self.field,
                nvars: out.nvars,
                terms: BTreeMap::new(),
            };
            t.add_term(Exponent(vec![0; out.nvars]), c.clone());
            for (img, &k) in images.iter().zip(&e.0) {
                t = &t * &img.pow(k);
            }
            out = &out + &t;
        }
        out
    }

    pub fn display(&self, ring: &PolyRing) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .0
                .iter()
                .zip(&ring.vars)
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => out.push_str(&mag.to_string()),
                (false, true) => out.push_str(&mono.join("*")),
                (false, false) => out.push_str(&format!("{mag}*{}", mono.join("*"))),
            }
        }
        out
    }
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("v{i}")).collect();
        let ring = PolyRing {
            field: self.field,
            vars: names,
        };
        f.write_str(&self.display(&ring))
    }
}

impl std::ops::Add for &CommPoly {
    type Output = CommPoly;
    fn add(self, rhs: &CommPoly) -> CommPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &CommPoly {
    type Output = CommPoly;
    fn sub(self, rhs: &CommPoly) -> CommPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl std::ops::Mul for &CommPoly {
    type Output = CommPoly;
    fn mul(self, rhs: &CommPoly) -> CommPoly {
        let mut out = CommPoly {
            field: self.field,
            nvars: self.nvars,
            terms: BTreeMap::new(),
        };
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.times(b), x * y);
            }
        }
        out
    }
}

/// Full reduction of `f` by `basis`.
pub fn reduce(f: &CommPoly, basis: &[CommPoly]) -> CommPoly {
    let mut rem = CommPoly {
        field: f.field,
        nvars: f.nvars,
        terms: BTreeMap::new(),
    };
    let mut p = f.clone();
    while let Some((e, c)) = p.leading().map(|(e, c)| (e.clone(), c.clone())) {
        let divisor = basis
            .iter()
            .find(|g| g.leading().is_some_and(|(lg, _)| lg.divides(&e)));
        match divisor {
            Some(g) => {
                let (lg, lc) = g.leading().expect("nonzero");
                let factor = c.div(lc).expect("field coefficient");
                p = &p - &g.shifted(&e.quotient(lg), &factor);
            }
            None => {
                p.terms.remove(&e);
                rem.add_term(e, c);
            }
        }
    }
    rem
}

fn s_polynomial(f: &CommPoly, g: &CommPoly) -> CommPoly {
    let (lf, cf) = f.leading().expect("nonzero");
    let (lg, cg) = g.leading().expect("nonzero");
    let l = lf.lcm(lg);
    let a = f.shifted(&l.quotient(lf), &cg.clone());
    let b = g.shifted(&l.quotient(lg), &cf.clone());
    &a - &b
}

/// Reduced Gröbner basis, monic and sorted by leading monomial.
pub fn buchberger(gens: &[CommPoly]) -> Vec<CommPoly> {
    let mut basis: Vec<CommPoly> = gens.iter().filter(|g| !g.is_zero()).map(CommPoly::monic).collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (li, _) = basis[i].leading().expect("nonzero");
        let (lj, _) = basis[j].leading().expect("nonzero");
        if li.coprime(lj) {
            continue;
        }
        let lcm = li.lcm(lj);
        // Chain criterion: skip if some third leading monomial divides the lcm
        // and both of its pairs have already been considered.
        let skip = (0..basis.len()).any(|m| {
            m != i
                && m != j
                && basis[m].leading().is_some_and(|(lm, _)| lm.divides(&lcm))
                && !pairs.contains(&(i.min(m), i.max(m)))
                && !pairs.contains(&(j.min(m), j.max(m)))
        });
        if skip {
            continue;
        }
        let r = reduce(&s_polynomial(&basis[i], &basis[j]), &basis);
        if !r.is_zero() {
            let n = basis.len();
            basis.push(r.monic());
            for m in 0..n {
                pairs.insert(0, (m, n));
            }
        }
    }
    interreduce(basis)
}

fn interreduce(mut basis: Vec<CommPoly>) -> Vec<CommPoly> {
    basis.sort_by(|a, b| a.leading().map(|l| l.0).cmp(&b.leading().map(|l| l.0)));
    let mut minimal: Vec<CommPoly> = Vec::new();
    for g in basis {
        let lg = g.leading().expect("nonzero").0.clone();
        if minimal
            .iter()
            .any(|h| h.leading().expect("nonzero").0.divides(&lg))
        {
            continue;
        }
        minimal.push(g);
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<CommPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let (lead, c) = minimal[i].leading().map(|(e, c)| (e.clone(), c.clone())).expect("nonzero");
        let mut tail = minimal[i].clone();
        tail.terms.remove(&lead);
        let mut g = reduce(&tail, &others);
        g.add_term(lead, c);
        out.push(g.monic());
    }
    out.sort_by(|a, b| a.leading().map(|l| l.0).cmp(&b.leading().map(|l| l.0)));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuotientDim {
    Finite(usize),
    Infinite,
}

/// Monomials outside the leading ideal, when there are finitely many.
pub fn standard_monomials(gb: &[CommPoly], nvars: usize) -> Option<Vec<Exponent>> {
    let leads: Vec<Exponent> = gb.iter().filter_map(|g| g.leading().map(|(e, _)| e.clone())).collect();
    let mut bounds = Vec::with_capacity(nvars);
    for i in 0..nvars {
        let pure = leads
            .iter()
            .filter(|e| e.0.iter().enumerate().all(|(j, &k)| j == i || k == 0))
            .map(|e| e.0[i])
            .min()?;
        bounds.push(pure);
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    loop {
        let e = Exponent(cur.clone());
        if !leads.iter().any(|l| l.divides(&e)) {
            out.push(e);
        }
        let mut i = 0;
        loop {
            if i == nvars {
                out.sort();
                return Some(out);
            }
            cur[i] += 1;
            if cur[i] < bounds[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

pub fn quotient_dimension(gb: &[CommPoly], nvars: usize) -> QuotientDim {
    match standard_monomials(gb, nvars) {
        Some(s) => QuotientDim::Finite(s.len()),
        None => QuotientDim::Infinite,
    }
}

pub fn jacobian_ideal(f: &CommPoly) -> Vec<CommPoly> {
    (0..f.nvars).map(|i| f.derivative(i)).collect()
}

/// `uv − xy((x+1)^k + y − 1)` in `K[u, v, x, y]`.
pub fn sigma(k: u32, ring: &PolyRing) -> Result<CommPoly, SingularityError> {
    if k == 0 {
        return Err(SingularityError::InvalidK);
    }
    ring.parse(&format!("u*v - x*y*((x+1)^{k} + y - 1)"))
}

/// Dimension of `K[vars]/((f) + J_f)`.
pub fn tjurina_algebra_dimension(f: &CommPoly) -> QuotientDim {
    let mut gens = vec![f.clone()];
    gens.extend(jacobian_ideal(f));
    quotient_dimension(&buchberger(&gens), f.nvars)
}

pub fn is_singular_point(f: &CommPoly, point: &[Scalar]) -> Result<bool, SingularityError> {
    if point.len() != f.nvars {
        return Err(SingularityError::WrongArity {
            expected: f.nvars,
            got: point.len(),
        });
    }
    Ok(std::iter::once(f.clone())
        .chain(jacobian_ideal(f))
        .all(|g| g.evaluate(point).is_zero()))
}

/// Length of the local algebra of `ideal` at `point`: `dim K[vars]/(I + m^N)`
/// for the first `N` where the value stops changing.
pub fn local_dimension(ideal: &[CommPoly], point: &[Scalar], max_power: u32) -> Result<usize, SingularityError> {
    let Some(first) = ideal.first() else {
        return Err(SingularityError::NotStable(max_power));
    };
    let n = first.nvars;
    if point.len() != n {
        return Err(SingularityError::WrongArity { expected: n, got: point.len() });
    }
    let ring = PolyRing {
        field: first.field,
        vars: (0..n).map(|i| format!("v{i}")).collect(),
    };
    let shift: Vec<CommPoly> = (0..n)
        .map(|i| &ring.var(i) + &ring.constant(point[i].clone()))
        .collect();
    let moved: Vec<CommPoly> = ideal.iter().map(|g| g.compose(&shift)).collect();
    let mut previous = None;
    for power in 1..=max_power {
        let mut gens = moved.clone();
        gens.extend(monomials_of_degree(n, power).into_iter().map(|e| ring.monomial(e)));
        let QuotientDim::Finite(d) = quotient_dimension(&buchberger(&gens), n) else {
            unreachable!("m^N is cofinite");
        };
        if previous == Some(d) {
            return Ok(d);
        }
        previous = Some(d);
    }
    Err(SingularityError::NotStable(max_power))
}

fn monomials_of_degree(n: usize, d: u32) -> Vec<Exponent> {
    if n == 1 {
        return vec![Exponent(vec![d])];
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in monomials_of_degree(n - 1, d - first) {
            rest.0.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TjurinaReport {
    pub k: u32,
    pub field: String,
    /// Dimension of the global Tjurina algebra over the whole affine space.
    pub global: QuotientDim,
    /// Local Tjurina number at the origin.
    pub local_origin: usize,
    /// Local Tjurina number at `(0,0,-2,0)` when that point is singular.
    pub local_minus_two: Option<usize>,
}

pub fn tjurina_number(k: u32, field: Field) -> Result<TjurinaReport, SingularityError> {
    let ring = PolyRing::uvxy(field)?;
    let f = sigma(k, &ring)?;
    let mut ideal = vec![f.clone()];
    ideal.extend(jacobian_ideal(&f));
    let global = quotient_dimension(&buchberger(&ideal), 4);
    let origin = vec![field.zero(); 4];
    let local_origin = local_dimension(&ideal, &origin, 4 * k + 8)?;
    let p = special_point(field);
    let local_minus_two = if is_singular_point(&f, &p)? {
        Some(local_dimension(&ideal, &p, 4 * k + 8)?)
    } else {
        None
    };
    Ok(TjurinaReport {
        k,
        field: field.spec(),
        global,
        local_origin,
        local_minus_two,
    })
}

/// The point `(u, v, x, y) = (0, 0, −2, 0)`.
pub fn special_point(field: Field) -> Vec<Scalar> {
    vec![field.zero(), field.zero(), field.from_i64(-2), field.zero()]
}
