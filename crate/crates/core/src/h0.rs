//! Degree-zero cohomology of non-positively graded dg presentations and
//! finite-dimensional algebra analysis: structure constants, centers,
//! radicals, quotients, inverses, element orders and unit groups.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{Field, Scalar};
use crate::dg::{DgError, DgPresentation};
use crate::linalg::{nullspace, rref, solve};
use crate::path_algebra::{AlgebraElement, Homomorphism, PathAlgebraError, Quiver};
use crate::rewriting::{QuotientVerdict, RewriteError, RewriteSystem, Word};

/// Default cap on `p^dim` for exhaustive unit enumeration.
pub const DEFAULT_UNIT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum H0Error {
    #[error("arrow `{0}` has positive degree")]
    PositiveDegree(String),
    #[error("operation requires a field, got {0}")]
    NotAField(Field),
    #[error("operation requires a prime field, got {0}")]
    NotPrimeField(Field),
    #[error("normal form term `{0}` is not a basis word")]
    NotInBasis(String),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("enumeration needs {needed} elements, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("vector has length {got}, algebra has dimension {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("H0 is not known to be finite-dimensional")]
    Inconclusive,
    #[error(transparent)]
    PathAlgebra(#[from] PathAlgebraError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Dg(#[from] DgError),
}

pub type Vector = Vec<Scalar>;

/// An associative unital algebra given by structure constants on a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDimAlgebra {
    field: Field,
    names: Vec<String>,
    /// `table[i][j]` holds the coordinates of `b_i b_j`.
    table: Vec<Vec<Vector>>,
    one: Vector,
    generators: Vec<(String, Vector)>,
}

impl FiniteDimAlgebra {
    pub fn new(
        field: Field,
        names: Vec<String>,
        table: Vec<Vec<Vector>>,
        one: Vector,
        generators: Vec<(String, Vector)>,
    ) -> Result<Self, H0Error> {
        if !field.is_field() {
            return Err(H0Error::NotAField(field));
        }
        let n = names.len();
        for v in std::iter::once(&one).chain(generators.iter().map(|(_, g)| g)) {
            if v.len() != n {
                return Err(H0Error::LengthMismatch { got: v.len(), expected: n });
            }
        }
        Ok(FiniteDimAlgebra {
            field,
            names,
            table,
            one,
            generators,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> &[(String, Vector)] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&Vector> {
        self.generators.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn structure(&self, i: usize, j: usize) -> &Vector {
        &self.table[i][j]
    }

    pub fn zero(&self) -> Vector {
        vec![self.field.zero(); self.dim()]
    }

    pub fn one(&self) -> Vector {
        self.one.clone()
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        let mut v = self.zero();
        v[i] = self.field.one();
        v
    }

    pub fn add(&self, u: &[Scalar], v: &[Scalar]) -> Vector {
        u.iter().zip(v).map(|(a, b)| a + b).collect()
    }

    pub fn sub(&self, u: &[Scalar], v: &[Scalar]) -> Vector {
        u.iter().zip(v).map(|(a, b)| a - b).collect()
    }

    pub fn scale(&self, c: &Scalar, u: &[Scalar]) -> Vector {
        u.iter().map(|a| c * a).collect()
    }

    pub fn mul(&self, u: &[Scalar], v: &[Scalar]) -> Vector {
        let mut out = self.zero();
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let c = a * b;
                for (k, s) in self.table[i][j].iter().enumerate() {
                    if !s.is_zero() {
                        out[k] = &out[k] + &(&c * s);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, u: &[Scalar], e: u64) -> Vector {
        let mut result = self.one();
        let mut base = u.to_vec();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    pub fn is_zero(&self, u: &[Scalar]) -> bool {
        u.iter().all(Scalar::is_zero)
    }

    /// `(b_i b_j) b_l = b_i (b_j b_l)` on every basis triple.
    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|l| {
                    self.mul(&self.table[i][j], &self.basis_vector(l))
                        == self.mul(&self.basis_vector(i), &self.table[j][l])
                })
            })
        })
    }

    pub fn identity_is_two_sided(&self) -> bool {
        (0..self.dim()).all(|i| {
            let b = self.basis_vector(i);
            self.mul(&self.one, &b) == b && self.mul(&b, &self.one) == b
        })
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// Matrix of `v ↦ u v`, as rows indexed by output coordinate.
    pub fn left_matrix(&self, u: &[Scalar]) -> Vec<Vector> {
        let cols: Vec<Vector> = (0..self.dim()).map(|j| self.mul(u, &self.basis_vector(j))).collect();
        transpose(&cols, self.dim(), self.field)
    }

    /// Basis of the center, from `[z, g] = 0` for every generator `g`.
    pub fn center(&self) -> Vec<Vector> {
        let n = self.dim();
        let mut rows = Vec::new();
        for (_, g) in &self.generators {
            let cols: Vec<Vector> = (0..n)
                .map(|j| {
                    let b = self.basis_vector(j);
                    self.sub(&self.mul(&b, g), &self.mul(g, &b))
                })
                .collect();
            rows.extend(transpose(&cols, n, self.field));
        }
        nullspace(&rows, n, self.field)
    }

    pub fn is_central(&self, u: &[Scalar]) -> bool {
        self.generators
            .iter()
            .all(|(_, g)| self.mul(u, g) == self.mul(g, u))
    }

    /// Basis of the nilradical of the (commutative) center.
    pub fn nilradical_of_center(&self) -> Vec<Vector> {
        let z = self.center();
        let r = z.len();
        if r == 0 {
            return Vec::new();
        }
        let n = self.dim();
        let zmat = transpose(&z, n, self.field);
        let in_z = |v: &Vector| solve(&zmat, v, r, self.field).expect("center is a subalgebra");
        let kernel = match self.field.characteristic() {
            0 => {
                // Trace form of the regular representation of the center.
                let mut mult: Vec<Vec<Vector>> = vec![Vec::new(); r];
                for (i, ci) in z.iter().enumerate() {
                    for cj in &z {
                        mult[i].push(in_z(&self.mul(ci, cj)));
                    }
                }
                let trace_of = |coeffs: &Vector| {
                    let mut t = self.field.zero();
                    for (a, c) in coeffs.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        for l in 0..r {
                            t = &t + &(c * &mult[a][l][l]);
                        }
                    }
                    t
                };
                let form: Vec<Vector> = (0..r)
                    .map(|i| (0..r).map(|j| trace_of(&mult[i][j])).collect())
                    .collect();
                nullspace(&form, r, self.field)
            }
            p => {
                let mut q = p;
                while (q as u128) < r as u128 {
                    q = q.saturating_mul(p);
                }
                let images: Vec<Vector> = z.iter().map(|c| self.pow(c, q)).collect();
                nullspace(&transpose(&images, n, self.field), r, self.field)
            }
        };
        kernel
            .iter()
            .map(|coeffs| {
                let mut v = self.zero();
                for (c, zi) in coeffs.iter().zip(&z) {
                    v = self.add(&v, &self.scale(c, zi));
                }
                v
            })
            .collect()
    }

    /// Row-reduced basis of the two-sided ideal generated by `gens`.
    pub fn ideal(&self, gens: &[Vector]) -> Vec<Vector> {
        let n = self.dim();
        let mut rows = Vec::new();
        for g in gens {
            for i in 0..n {
                let left = self.mul(&self.basis_vector(i), g);
                for j in 0..n {
                    rows.push(self.mul(&left, &self.basis_vector(j)));
                }
            }
        }
        rref(&mut rows, n);
        rows
    }

    /// Quotient by a two-sided ideal given by any spanning set.
    pub fn quotient(&self, ideal: &[Vector]) -> Quotient {
        let n = self.dim();
        let mut rows = ideal.to_vec();
        let pivots = rref(&mut rows, n);
        let keep: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let proj = Projection {
            rows,
            pivots,
            keep: keep.clone(),
        };
        let table = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| proj.apply(&self.table[i][j])).collect())
            .collect();
        let algebra = FiniteDimAlgebra {
            field: self.field,
            names: keep.iter().map(|&i| self.names[i].clone()).collect(),
            table,
            one: proj.apply(&self.one),
            generators: self
                .generators
                .iter()
                .map(|(n, g)| (n.clone(), proj.apply(g)))
                .collect(),
        };
        Quotient { algebra, projection: proj }
    }

    /// Quotient by the ideal generated by the nilradical of the center.
    pub fn center_semisimplification(&self) -> Quotient {
        let nil = self.nilradical_of_center();
        let ideal = self.ideal(&nil);
        self.quotient(&ideal)
    }

    /// Two-sided inverse, if it exists.
    pub fn inverse(&self, u: &[Scalar]) -> Option<Vector> {
        let w = solve(&self.left_matrix(u), &self.one, self.dim(), self.field)?;
        (self.mul(&w, u) == self.one).then_some(w)
    }

    /// Least `n ≤ max_power` with `u^n = 1`.
    pub fn element_order(&self, u: &[Scalar], max_power: u64) -> Result<Option<u64>, H0Error> {
        if self.inverse(u).is_none() {
            return Err(H0Error::NotInvertible);
        }
        let mut p = u.to_vec();
        for n in 1..=max_power {
            if p == self.one {
                return Ok(Some(n));
            }
            p = self.mul(&p, u);
        }
        Ok(None)
    }

    /// Exhaustive count of units over a prime field, with the order of the
    /// cyclic subgroup generated by `gen` when given.
    pub fn unit_group(&self, gen: Option<&[Scalar]>, budget: u64) -> Result<UnitGroupReport, H0Error> {
        let Field::Prime(p) = self.field else {
            return Err(H0Error::NotPrimeField(self.field));
        };
        let n = self.dim();
        let total = (p as u128).checked_pow(n as u32).filter(|&t| t <= budget as u128);
        let Some(total) = total else {
            return Err(H0Error::BudgetExceeded {
                needed: format!("{p}^{n}"),
                budget,
            });
        };
        let to_u64 = |s: &Scalar| match s {
            Scalar::Mod { value, .. } => *value,
            _ => unreachable!("prime field scalars"),
        };
        // table64[i][j][k]
        let table64: Vec<Vec<Vec<u64>>> = self
            .table
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(to_u64).collect()).collect())
            .collect();
        let mut coeffs = vec![0u64; n];
        let mut units = 0u64;
        let mut mat = vec![vec![0u64; n]; n];
        for _ in 0..total {
            // mat[k][j] = coefficient k of u * b_j
            for row in mat.iter_mut() {
                row.iter_mut().for_each(|x| *x = 0);
            }
            for (i, &c) in coeffs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for j in 0..n {
                    for (k, &s) in table64[i][j].iter().enumerate() {
                        if s != 0 {
                            mat[k][j] = (mat[k][j] + c * s) % p;
                        }
                    }
                }
            }
            if full_rank_mod_p(&mut mat, p) {
                units += 1;
            }
            for c in coeffs.iter_mut() {
                *c += 1;
                if *c < p {
                    break;
                }
                *c = 0;
            }
        }
        let (gen_order, gen_inverse) = match gen {
            Some(g) => match self.inverse(g) {
                Some(inv) => (self.element_order(g, units)?, Some(self.format(&inv))),
                None => (None, None),
            },
            None => (None, None),
        };
        Ok(UnitGroupReport {
            field: self.field.spec(),
            dim: n,
            order: units,
            generator_order: gen_order,
            generator_inverse: gen_inverse,
        })
    }

    /// Human-readable linear combination of basis names.
    pub fn format(&self, u: &[Scalar]) -> String {
        let mut out = String::new();
        for (c, name) in u.iter().zip(&self.names) {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag.is_one() {
                out.push_str(name);
            } else {
                let _ = write!(out, "{mag}*{name}");
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn transpose(cols: &[Vector], rows: usize, field: Field) -> Vec<Vector> {
    (0..rows)
        .map(|k| {
            cols.iter()
                .map(|c| c.get(k).cloned().unwrap_or_else(|| field.zero()))
                .collect()
        })
        .collect()
}

fn full_rank_mod_p(m: &mut [Vec<u64>], p: u64) -> bool {
    let n = m.len();
    for c in 0..n {
        let Some(r) = (c..n).find(|&r| m[r][c] != 0) else {
            return false;
        };
        m.swap(c, r);
        let inv = mod_pow(m[c][c], p - 2, p);
        for r in c + 1..n {
            if m[r][c] == 0 {
                continue;
            }
            let f = m[r][c] * inv % p;
            for j in c..n {
                m[r][j] = (m[r][j] + (p - f) * m[c][j]) % p;
            }
        }
    }
    true
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Projection onto the complement of an ideal's pivot coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    rows: Vec<Vector>,
    pivots: Vec<usize>,
    keep: Vec<usize>,
}

impl Projection {
    pub fn apply(&self, v: &[Scalar]) -> Vector {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        self.keep.iter().map(|&k| v[k].clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub algebra: FiniteDimAlgebra,
    pub projection: Projection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitGroupReport {
    pub field: String,
    pub dim: usize,
    pub order: u64,
    pub generator_order: Option<u64>,
    pub generator_inverse: Option<String>,
}

/// `H^0` of a presentation, with the rewrite system that computes it.
#[derive(Clone, Debug)]
pub struct H0Algebra {
    pub name: String,
    /// Degree-zero subquiver.
    pub quiver: Arc<Quiver>,
    /// Generators of the ideal, in the degree-zero path algebra.
    pub ideal_generators: Vec<AlgebraElement>,
    pub rewrite: RewriteSystem,
    pub basis: Vec<Word>,
    pub algebra: FiniteDimAlgebra,
    index: HashMap<Word, usize>,
}

#[derive(Clone, Debug)]
pub enum H0Outcome {
    Finite(Box<H0Algebra>),
    InconclusiveAtBound { found: usize, longest: usize, complete: bool },
}

impl H0Outcome {
    pub fn finite(self) -> Result<H0Algebra, H0Error> {
        match self {
            H0Outcome::Finite(a) => Ok(*a),
            _ => Err(H0Error::Inconclusive),
        }
    }
}

impl H0Algebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn field(&self) -> Field {
        self.algebra.field
    }

    pub fn basis_strings(&self) -> Vec<String> {
        self.algebra.names.clone()
    }

    /// Coordinates of the class of `u` (an element of the degree-zero quiver).
    pub fn coords(&self, u: &AlgebraElement) -> Result<Vector, H0Error> {
        let u = if u.quiver() == &self.quiver {
            u.clone()
        } else {
            u.transport(&self.quiver)
                .ok_or_else(|| H0Error::NotInBasis(u.to_string()))?
        };
        let nf = self.rewrite.normal_poly(&u);
        let mut v = self.algebra.zero();
        for (w, c) in nf {
            let i = *self
                .index
                .get(&w)
                .ok_or_else(|| H0Error::NotInBasis(self.rewrite.alphabet().word_string(&w)))?;
            v[i] = c;
        }
        Ok(v)
    }

    pub fn parse(&self, expr: &str) -> Result<Vector, H0Error> {
        let u = AlgebraElement::parse(&self.quiver, self.field(), expr)?;
        self.coords(&u)
    }

    /// Whether `expr` vanishes in `H^0`.
    pub fn verify_identity(&self, expr: &str) -> Result<bool, H0Error> {
        Ok(self.algebra.is_zero(&self.parse(expr)?))
    }
}

/// Degree-zero subquiver and the generators of the ideal whose quotient is
/// `H^0`: degree-zero relations and differentials of degree −1 generators.
pub fn degree_zero_ideal(p: &DgPresentation) -> Result<(Arc<Quiver>, Vec<AlgebraElement>), H0Error> {
    if let Some(a) = p.quiver.arrows().iter().find(|a| a.deg > 0) {
        return Err(H0Error::PositiveDegree(a.name.clone()));
    }
    let q0 = p.quiver.restrict(|a| a.deg == 0);
    let mut gens = Vec::new();
    for r in &p.relations {
        if let Some(r0) = r.homogeneous_parts().get(&0) {
            gens.push(r0.transport(&q0).expect("degree-zero terms use degree-zero arrows"));
        }
    }
    for (a, ar) in p.quiver.arrows().iter().enumerate() {
        if ar.deg == -1 {
            let d = p.d_of(a);
            if !d.is_zero() {
                gens.push(d.transport(&q0).expect("degree-zero terms use degree-zero arrows"));
            }
        }
    }
    Ok((q0, gens))
}

pub fn h0(p: &DgPresentation, bound: usize) -> Result<H0Outcome, H0Error> {
    let (q0, gens) = degree_zero_ideal(p)?;
    h0_from_generators(&p.name, &q0, p.field, &gens, bound)
}

/// Quotient of the path algebra of `quiver` by the ideal generated by `gens`.
pub fn h0_from_generators(
    name: &str,
    quiver: &Arc<Quiver>,
    field: Field,
    gens: &[AlgebraElement],
    bound: usize,
) -> Result<H0Outcome, H0Error> {
    if !field.is_field() {
        return Err(H0Error::NotAField(field));
    }
    let rs = RewriteSystem::complete(quiver, field, gens, bound)?;
    let words = match rs.quotient_basis() {
        Ok(QuotientVerdict::Finite(words)) => words,
        Ok(QuotientVerdict::InconclusiveAtBound { found, longest }) => {
            return Ok(H0Outcome::InconclusiveAtBound {
                found,
                longest,
                complete: true,
            })
        }
        Err(RewriteError::Incomplete) => {
            return Ok(H0Outcome::InconclusiveAtBound {
                found: 0,
                longest: 0,
                complete: false,
            })
        }
        Err(e) => return Err(e.into()),
    };
    let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let alpha = rs.alphabet();
    let n = words.len();
    let lookup = |p: BTreeMap<Word, Scalar>| -> Result<Vector, H0Error> {
        let mut v = vec![field.zero(); n];
        for (w, c) in p {
            let i = *index
                .get(&w)
                .ok_or_else(|| H0Error::NotInBasis(alpha.word_string(&w)))?;
            v[i] = c;
        }
        Ok(v)
    };
    let elems: Vec<AlgebraElement> = words.iter().map(|w| alpha.word_element(w, field)).collect();
    let mut table = Vec::with_capacity(n);
    for a in &elems {
        let mut row = Vec::with_capacity(n);
        for b in &elems {
            row.push(lookup(rs.normal_poly(&(a * b)))?);
        }
        table.push(row);
    }
    let one = lookup(rs.normal_poly(&AlgebraElement::one(quiver, field)))?;
    let mut generators = Vec::new();
    for v in 0..quiver.num_vertices() {
        let e = AlgebraElement::idempotent(quiver, field, v);
        generators.push((quiver.idempotent_name(v), lookup(rs.normal_poly(&e))?));
    }
    for (i, a) in quiver.arrows().iter().enumerate() {
        let g = AlgebraElement::arrow(quiver, field, i);
        generators.push((a.name.clone(), lookup(rs.normal_poly(&g))?));
    }
    for (i, c) in quiver.central_vars().iter().enumerate() {
        let g = AlgebraElement::central(quiver, field, i);
        generators.push((c.clone(), lookup(rs.normal_poly(&g))?));
    }
    let names = words.iter().map(|w| alpha.word_string(w)).collect();
    let algebra = FiniteDimAlgebra::new(field, names, table, one, generators)?;
    Ok(H0Outcome::Finite(Box::new(H0Algebra {
        name: name.to_string(),
        quiver: quiver.clone(),
        ideal_generators: gens.to_vec(),
        rewrite: rs,
        basis: words,
        algebra,
        index,
    })))
}

/// Algebra map between degree-zero quivers given by images of arrows and
/// central variables as expression strings. Vertices map by name.
pub fn homomorphism_from_strings(
    source: &Arc<Quiver>,
    target: &Arc<Quiver>,
    field: Field,
    images: &BTreeMap<String, String>,
) -> Result<Homomorphism, H0Error> {
    let vertex_map = source
        .vertices()
        .iter()
        .map(|v| {
            target.vertex_index(v).ok_or_else(|| PathAlgebraError::UnknownVertex {
                arrow: String::new(),
                vertex: v.clone(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let image = |name: &str| -> Result<AlgebraElement, H0Error> {
        let text = images.get(name).map(String::as_str).unwrap_or(name);
        Ok(AlgebraElement::parse(target, field, text)?)
    };
    let arrow_images = source
        .arrows()
        .iter()
        .map(|a| image(&a.name))
        .collect::<Result<Vec<_>, _>>()?;
    let central_images = source
        .central_vars()
        .iter()
        .map(|c| image(c))
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

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedMapReport {
    pub source_dim: usize,
    pub target_dim: usize,
    /// Every ideal generator of the source maps to zero.
    pub well_defined: bool,
    pub rank: usize,
    pub bijective: bool,
    pub unital: bool,
    pub multiplicative: bool,
}

impl InducedMapReport {
    pub fn is_isomorphism(&self) -> bool {
        self.well_defined && self.bijective && self.unital && self.multiplicative
    }
}

/// The map `H^0(src) → H^0(dst)` induced by `hom`, checked on bases.
pub fn induced_map(src: &H0Algebra, dst: &H0Algebra, hom: &Homomorphism) -> Result<InducedMapReport, H0Error> {
    let field = dst.field();
    let mut well_defined = true;
    for g in &src.ideal_generators {
        well_defined &= dst.algebra.is_zero(&dst.coords(&hom.apply(g))?);
    }
    let alpha = src.rewrite.alphabet();
    let images: Vec<Vector> = src
        .basis
        .iter()
        .map(|w| dst.coords(&hom.apply(&alpha.word_element(w, field))))
        .collect::<Result<_, _>>()?;
    let m = transpose(&images, dst.dim(), field);
    let rank = crate::linalg::rank(&m, src.dim());
    let apply = |v: &Vector| -> Vector {
        let mut out = dst.algebra.zero();
        for (c, img) in v.iter().zip(&images) {
            if !c.is_zero() {
                out = dst.algebra.add(&out, &dst.algebra.scale(c, img));
            }
        }
        out
    };
    let unital = apply(&src.algebra.one) == dst.algebra.one;
    let n = src.dim();
    let multiplicative = (0..n).all(|i| {
        (0..n).all(|j| apply(&src.algebra.table[i][j]) == dst.algebra.mul(&images[i], &images[j]))
    });
    Ok(InducedMapReport {
        source_dim: n,
        target_dim: dst.dim(),
        well_defined,
        rank,
        bijective: rank == n && n == dst.dim(),
        unital,
        multiplicative,
    })
}

/// The quotient with every vertex identified: the same ideal generators,
/// rewritten on a one-vertex quiver whose arrows are loops, together with
/// `gh = 0` for every pair of arrows that did not compose.
pub fn identify_idempotents(h: &H0Algebra, bound: usize) -> Result<H0Outcome, H0Error> {
    let q = &h.quiver;
    let field = h.field();
    let arrows: Vec<(String, i64)> = q.arrows().iter().map(|a| (a.name.clone(), a.deg)).collect();
    let specs: Vec<(&str, &str, &str, i64)> = arrows.iter().map(|(n, d)| (n.as_str(), "0", "0", *d)).collect();
    let cs: Vec<&str> = q.central_vars().iter().map(String::as_str).collect();
    let single = Quiver::new(&["0"], &specs, &cs)?;
    let hom = Homomorphism {
        source: q.clone(),
        target: single.clone(),
        field,
        vertex_map: vec![0; q.num_vertices()],
        arrow_images: (0..q.arrows().len())
            .map(|i| AlgebraElement::arrow(&single, field, i))
            .collect(),
        central_images: (0..cs.len())
            .map(|i| AlgebraElement::central(&single, field, i))
            .collect(),
    };
    let mut gens: Vec<AlgebraElement> = h.ideal_generators.iter().map(|g| hom.apply(g)).collect();
    for (i, g) in q.arrows().iter().enumerate() {
        for (j, h) in q.arrows().iter().enumerate() {
            if g.dst != h.src {
                let a = AlgebraElement::arrow(&single, field, i);
                let b = AlgebraElement::arrow(&single, field, j);
                gens.push(&a * &b);
            }
        }
    }
    h0_from_generators(&format!("{} (identified)", h.name), &single, field, &gens, bound)
}

/// `K[a,b]/(a², b², ab − ba, (ab+1)^k − 1)` read as a free presentation on
/// one vertex.
pub fn literal_one_vertex_reading(k: u32, field: Field, bound: usize) -> Result<H0Outcome, H0Error> {
    let q = Quiver::new(&["0"], &[("a", "0", "0", 0), ("b", "0", "0", 0)], &[])?;
    let gens = ["a*a", "b*b", "a*b - b*a", &format!("(a*b + e0)^{k} - e0")]
        .iter()
        .map(|s| AlgebraElement::parse(&q, field, s))
        .collect::<Result<Vec<_>, _>>()?;
    h0_from_generators(&format!("literal reading k={k}"), &q, field, &gens, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::{build_ak, build_wk};
    use crate::ginzburg::build_gk_explicit;

    const Q: Field = Field::Rationals;

    fn truncated_poly(field: Field) -> H0Algebra {
        let q = Quiver::new(&["0"], &[("t", "0", "0", 0)], &[]).unwrap();
        let t2 = AlgebraElement::parse(&q, field, "t*t").unwrap();
        h0_from_generators("t2", &q, field, &[t2], 6).unwrap().finite().unwrap()
    }

    #[test]
    fn dual_numbers() {
        let f2 = Field::prime(2).unwrap();
        let h = truncated_poly(f2);
        assert_eq!(h.dim(), 2);
        let a = &h.algebra;
        assert!(a.is_associative() && a.identity_is_two_sided() && a.is_commutative());
        assert_eq!(a.center().len(), 2);
        let u = h.parse("e0 + t").unwrap();
        assert_eq!(a.element_order(&u, 10).unwrap(), Some(2));
        assert_eq!(a.element_order(&a.one(), 10).unwrap(), Some(1));
        let t = h.parse("t").unwrap();
        assert_eq!(a.element_order(&t, 10), Err(H0Error::NotInvertible));
        let units = a.unit_group(Some(&u), DEFAULT_UNIT_BUDGET).unwrap();
        assert_eq!((units.order, units.generator_order), (2, Some(2)));
        assert_eq!(a.nilradical_of_center().len(), 1);
        assert!(matches!(
            a.unit_group(None, 3),
            Err(H0Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn nilradical_over_rationals() {
        let h = truncated_poly(Q);
        let nil = h.algebra.nilradical_of_center();
        assert_eq!(nil.len(), 1);
        assert_eq!(h.algebra.format(&nil[0]).replace("-", ""), "t");
        let q = h.algebra.center_semisimplification();
        assert_eq!(q.algebra.dim(), 1);
    }

    #[test]
    fn group_algebra_of_z2() {
        let f2 = Field::prime(2).unwrap();
        let q = Quiver::new(&["0"], &[("g", "0", "0", 0)], &[]).unwrap();
        let rel = AlgebraElement::parse(&q, f2, "g*g - e0").unwrap();
        let h = h0_from_generators("F2[Z2]", &q, f2, &[rel], 6).unwrap().finite().unwrap();
        let units = h.algebra.unit_group(None, DEFAULT_UNIT_BUDGET).unwrap();
        assert_eq!(units.order, 2);
    }

    #[test]
    fn no_degree_minus_one_generators() {
        let q = Quiver::new(&["0"], &[("t", "0", "0", 0), ("s", "0", "0", -2)], &[]).unwrap();
        let p = DgPresentation::from_strings("p", q, Q, &["t*t*t"], &[]).unwrap();
        let h = h0(&p, 6).unwrap().finite().unwrap();
        assert_eq!(h.basis_strings(), vec!["e0", "t", "t*t"]);
    }

    #[test]
    fn positive_degree_rejected() {
        let q = Quiver::new(&["0"], &[("t", "0", "0", 1)], &[]).unwrap();
        let p = DgPresentation::from_strings("p", q, Q, &[], &[]).unwrap();
        assert!(matches!(h0(&p, 4), Err(H0Error::PositiveDegree(_))));
    }

    #[test]
    fn free_algebra_is_inconclusive() {
        let q = Quiver::new(&["0", "1"], &[("e", "0", "1", 0), ("f", "1", "0", 0)], &[]).unwrap();
        let out = h0_from_generators("free", &q, Q, &[], 6).unwrap();
        assert!(matches!(out, H0Outcome::InconclusiveAtBound { .. }));
    }

    #[test]
    fn h0_w1_structure() {
        let w = build_wk(1, Q).unwrap();
        let h = h0(&w, 12).unwrap().finite().unwrap();
        assert_eq!(h.dim(), 6);
        let a = &h.algebra;
        assert!(a.is_associative() && a.identity_is_two_sided());
        assert!(h.verify_identity("(x1 - e0 - e1)*(x1 - e0 - e1)").unwrap());
        assert!(h.verify_identity("e0 + e1 - e0 - e1").unwrap());
        let e0 = h.parse("e0").unwrap();
        assert!(!a.is_central(&e0));
        assert!(a.is_central(&a.one()));
        assert!(a.is_central(a.generator("x1").unwrap()));
    }

    #[test]
    fn unit_identities_and_orders() {
        for k in 1..=4u32 {
            let w = build_wk(k, Q).unwrap();
            let h = h0(&w, 4 * k as usize + 8).unwrap().finite().unwrap();
            assert_eq!(h.dim(), 4 * k as usize + 2, "k={k}");
            let id = format!("(x1 - e0 - e1)*(x1^{k} - e0 - e1)");
            assert!(h.verify_identity(&id).unwrap(), "k={k}");
            let ss = h.algebra.center_semisimplification();
            let x1 = ss.projection.apply(h.algebra.generator("x1").unwrap());
            assert_eq!(ss.algebra.element_order(&x1, 100).unwrap(), Some(k as u64));
        }
    }

    #[test]
    fn phi_induces_isomorphism() {
        for k in 1..=3u32 {
            let g = h0(&build_gk_explicit(k, Q).unwrap(), 4 * k as usize + 8).unwrap().finite().unwrap();
            let a = h0(&build_ak(k, Q).unwrap(), 4 * k as usize + 8).unwrap().finite().unwrap();
            let images: BTreeMap<String, String> =
                [("e", "a"), ("f", "b")].map(|(s, t)| (s.into(), t.into())).into();
            let hom = homomorphism_from_strings(&g.quiver, &a.quiver, Q, &images).unwrap();
            let rep = induced_map(&g, &a, &hom).unwrap();
            assert!(rep.is_isomorphism(), "k={k}: {rep:?}");
        }
    }

    #[test]
    fn alternative_readings() {
        let lit = literal_one_vertex_reading(2, Q, 12).unwrap().finite().unwrap();
        assert_eq!(lit.dim(), 3);
        let f2 = Field::prime(2).unwrap();
        let lit2 = literal_one_vertex_reading(2, f2, 12).unwrap().finite().unwrap();
        assert_eq!(lit2.dim(), 4);
        let w = h0(&build_wk(2, Q).unwrap(), 16).unwrap().finite().unwrap();
        let ident = identify_idempotents(&w, 16).unwrap().finite().unwrap();
        assert_eq!(ident.dim(), 3);
        assert!(ident.algebra.is_associative());
        let w2 = h0(&build_wk(2, f2).unwrap(), 16).unwrap().finite().unwrap();
        let ident2 = identify_idempotents(&w2, 16).unwrap().finite().unwrap();
        assert_eq!(ident2.dim(), 4);
    }
}
