//! Exact scalars over ℚ, ℤ and prime fields, together with integer matrices
//! and their Smith normal form.
//!
//! Every value carries its domain; mixing domains in one operation is a
//! programming error and panics. Fallible operations (inversion, reduction
//! modulo a prime) return [`ArithError`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator {den} is not invertible modulo {p}")]
    NotInvertibleModP { den: BigInt, p: u64 },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} is too large (must be below 2^31)")]
    ModulusTooLarge(u64),
    #[error("{0} is not invertible in the integers")]
    NotAUnit(BigInt),
    #[error("invalid field spec `{0}` (expected q, z or p:<prime>)")]
    BadFieldSpec(String),
}

/// Coefficient domain: the rationals, the integers, or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    Integers,
    Prime(u64),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, ArithError> {
        if p >= 1 << 31 {
            return Err(ArithError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    /// Parses `q`, `z` or `p:<prime>`.
    pub fn parse_spec(spec: &str) -> Result<Field, ArithError> {
        let s = spec.trim();
        match s {
            "q" | "Q" => Ok(Field::Rationals),
            "z" | "Z" => Ok(Field::Integers),
            _ => {
                let rest = s
                    .strip_prefix("p:")
                    .or_else(|| s.strip_prefix("F"))
                    .ok_or_else(|| ArithError::BadFieldSpec(spec.to_string()))?;
                let p: u64 = rest
                    .parse()
                    .map_err(|_| ArithError::BadFieldSpec(spec.to_string()))?;
                Field::prime(p)
            }
        }
    }

    pub fn spec(&self) -> String {
        match self {
            Field::Rationals => "q".into(),
            Field::Integers => "z".into(),
            Field::Prime(p) => format!("p:{p}"),
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Field::Integers)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Prime(p) => *p,
            _ => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Integers => Scalar::Integer(BigInt::from(n)),
            Field::Prime(p) => Scalar::Mod {
                value: n.rem_euclid(*p as i64) as u64,
                modulus: *p,
            },
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(n.clone())),
            Field::Integers => Scalar::Integer(n.clone()),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Scalar::Mod {
                    value: r.to_u64().expect("reduced residue fits"),
                    modulus: *p,
                }
            }
        }
    }

    /// `num/den` in this domain; fails for non-integral values over ℤ or
    /// denominators divisible by the characteristic.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        match self {
            Field::Rationals => Ok(Scalar::Rational(BigRational::new(num.clone(), den.clone()))),
            Field::Integers => {
                let (q, r) = num.div_rem(den);
                if r.is_zero() {
                    Ok(Scalar::Integer(q))
                } else {
                    Err(ArithError::NotAUnit(den.clone()))
                }
            }
            Field::Prime(_) => {
                let d = self.from_bigint(den);
                let inv = d.inv().map_err(|_| ArithError::NotInvertibleModP {
                    den: den.clone(),
                    p: self.characteristic(),
                })?;
                Ok(&self.from_bigint(num) * &inv)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Integers => write!(f, "Z"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// An exact scalar tagged with its domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Integer(BigInt),
    Mod { value: u64, modulus: u64 },
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("mixed scalar domains: {} and {}", a.field(), b.field())
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Integer(_) => Field::Integers,
            Scalar::Mod { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Integer(n) => n.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Integer(n) => n.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse. Over ℤ only ±1 are invertible.
    pub fn inv(&self) -> Result<Scalar, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        match self {
            Scalar::Rational(r) => Ok(Scalar::Rational(r.recip())),
            Scalar::Integer(n) => {
                if n.abs().is_one() {
                    Ok(Scalar::Integer(n.clone()))
                } else {
                    Err(ArithError::NotAUnit(n.clone()))
                }
            }
            Scalar::Mod { value, modulus } => {
                // Extended Euclid on (value, modulus).
                let (mut r0, mut r1) = (*modulus as i128, *value as i128);
                let (mut t0, mut t1) = (0i128, 1i128);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (t0, t1) = (t1, t0 - q * t1);
                }
                Ok(Scalar::Mod {
                    value: t0.rem_euclid(*modulus as i128) as u64,
                    modulus: *modulus,
                })
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, ArithError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        match self {
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: mod_pow(*value, e as u64, *modulus),
                modulus: *modulus,
            },
            _ => {
                let mut acc = self.field().one();
                for _ in 0..e {
                    acc = &acc * self;
                }
                acc
            }
        }
    }

    /// Image under the unique ring map into 𝔽_p.
    pub fn reduce_mod_p(&self, p: u64) -> Result<Scalar, ArithError> {
        let f = Field::prime(p)?;
        match self {
            Scalar::Integer(n) => Ok(f.from_bigint(n)),
            Scalar::Rational(r) => f.from_ratio(r.numer(), r.denom()),
            Scalar::Mod { value, modulus } => {
                if *modulus == p {
                    Ok(self.clone())
                } else {
                    // 𝔽_q → 𝔽_p is not a ring map for q ≠ p; treat as lifted integer.
                    Ok(f.from_i64(*value as i64))
                }
            }
        }
    }

    /// The value as an integer, when it is one (for ℤ and integral rationals).
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::Integer(n) => Some(n.clone()),
            Scalar::Rational(r) => r.is_integer().then(|| r.to_integer()),
            Scalar::Mod { value, .. } => Some(BigInt::from(*value)),
        }
    }

    /// Embed into another domain (ℤ → ℚ, ℤ → 𝔽_p, integral ℚ → ℤ, ...).
    pub fn convert(&self, target: Field) -> Result<Scalar, ArithError> {
        match (self, target) {
            (_, t) if t == self.field() => Ok(self.clone()),
            (Scalar::Integer(n), t) => Ok(t.from_bigint(n)),
            (Scalar::Rational(r), t) => t.from_ratio(r.numer(), r.denom()),
            (Scalar::Mod { value, .. }, t) => Ok(t.from_i64(*value as i64)),
        }
    }

    /// Small-representative sign used for display: negative if it prints
    /// with a leading minus.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Integer(n) => n.is_negative(),
            Scalar::Mod { .. } => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Integer(n) => write!(f, "{n}"),
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Integer(a), Scalar::Integer(b)) => Scalar::Integer(a + b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Mod {
                    value: (a + b) % p,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Integer(a), Scalar::Integer(b)) => Scalar::Integer(a * b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Mod {
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Integer(a) => Scalar::Integer(-a),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flat_map(|row| row.iter().cloned().map(Into::into)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * f;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * f;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = -&self.data[idx];
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal with a
/// divisibility chain of non-negative entries.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d[i][i]` for `i < min(rows, cols)`, including zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    /// Non-zero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // Smallest non-zero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = d.get(i, j);
                    if !x.is_zero()
                        && best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(d, u, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -(d.get(i, t).div_floor(d.get(t, t)));
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -(d.get(t, j).div_floor(d.get(t, t)));
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold any offending row into the pivot row.
            let piv = d.get(t, t).clone();
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
    }
    finish(d, u, v)
}

fn finish(mut d: IntMatrix, mut u: IntMatrix, v: IntMatrix) -> SmithForm {
    for i in 0..d.rows.min(d.cols) {
        if d.get(i, i).is_negative() {
            d.negate_row(i);
            u.negate_row(i);
        }
    }
    SmithForm { d, u, v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn factors(rows: &[Vec<i64>]) -> Vec<i64> {
        smith_normal_form(&IntMatrix::from_rows(rows))
            .diagonal()
            .iter()
            .map(|x| x.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn identity_snf() {
        let m = IntMatrix::identity(2);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, m);
        assert_eq!(s.u, m);
        assert_eq!(s.v, m);
    }

    #[test]
    fn prism_relation_matrices() {
        // Hand elimination: [[0,2],[2,-2]] -> swap, clear -> diag(2,2).
        assert_eq!(factors(&[vec![0, 2], vec![2, -2]]), vec![2, 2]);
        // [[0,2],[2,-3]]: gcd of entries is 1, |det| = 4 -> diag(1,4).
        assert_eq!(factors(&[vec![0, 2], vec![2, -3]]), vec![1, 4]);
    }

    #[test]
    fn zero_and_rectangular() {
        assert_eq!(factors(&[vec![0, 0, 0]]), vec![0]);
        assert_eq!(factors(&[vec![4, 6], vec![6, 9], vec![2, 3]]), vec![1, 0]);
    }

    #[test]
    fn scalar_basics() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.from_i64(2).inv().unwrap(), f5.from_i64(3));
        for f in [Field::Rationals, f5, Field::prime(2).unwrap()] {
            assert_eq!(f.one().inv().unwrap(), f.one());
        }
        assert_eq!(
            Field::Integers.from_i64(49).reduce_mod_p(2).unwrap(),
            Field::prime(2).unwrap().one()
        );
        assert_eq!(f5.zero().inv(), Err(ArithError::DivisionByZero));
        let half = Field::Rationals
            .from_ratio(&BigInt::from(1), &BigInt::from(2))
            .unwrap();
        assert!(half.reduce_mod_p(2).is_err());
        assert_eq!(half.reduce_mod_p(3).unwrap(), Field::prime(3).unwrap().from_i64(2));
        assert!(Field::Integers.from_i64(2).inv().is_err());
        assert!(Field::prime(6).is_err());
    }

    #[test]
    fn field_specs() {
        assert_eq!(Field::parse_spec("q").unwrap(), Field::Rationals);
        assert_eq!(Field::parse_spec("p:3").unwrap(), Field::Prime(3));
        assert!(Field::parse_spec("p:4").is_err());
        assert!(Field::parse_spec("r").is_err());
    }

    proptest! {
        #[test]
        fn snf_is_unimodular_and_chained(
            rows in 1usize..6, cols in 1usize..6,
            seed in proptest::collection::vec(-20i64..=20, 36)
        ) {
            let data: Vec<Vec<i64>> = (0..rows)
                .map(|i| (0..cols).map(|j| seed[i * 6 + j]).collect())
                .collect();
            let m = IntMatrix::from_rows(&data);
            let s = smith_normal_form(&m);
            prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
            prop_assert!(s.d.is_diagonal());
            prop_assert!(s.u.determinant().abs().is_one());
            prop_assert!(s.v.determinant().abs().is_one());
            let diag = s.diagonal();
            for w in diag.windows(2) {
                if w[0].is_zero() {
                    prop_assert!(w[1].is_zero());
                } else {
                    prop_assert!(w[1].is_multiple_of(&w[0]));
                }
            }
            prop_assert!(diag.iter().all(|x| !x.is_negative()));
        }

        #[test]
        fn reduction_mod_p_is_a_ring_map(a in -1000i64..1000, b in -1000i64..1000, p in prop::sample::select(vec![2u64, 3, 5, 7, 101])) {
            let z = Field::Integers;
            let (x, y) = (z.from_i64(a), z.from_i64(b));
            let r = |s: &Scalar| s.reduce_mod_p(p).unwrap();
            prop_assert_eq!(r(&(&x + &y)), &r(&x) + &r(&y));
            prop_assert_eq!(r(&(&x * &y)), &r(&x) * &r(&y));
        }
    }
}
