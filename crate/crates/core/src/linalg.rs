//! Exact dense and sparse linear algebra over a field.

use std::collections::BTreeMap;

use crate::arith::{Field, Scalar};

/// Reduced row echelon form in place. Returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Scalar>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Scalar>], cols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, cols).len()
}

/// Basis of `{v : M v = 0}` for an `r × cols` matrix `M`.
pub fn nullspace(rows: &[Vec<Scalar>], cols: usize, field: Field) -> Vec<Vec<Scalar>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); cols];
            v[f] = field.one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = -&row[f];
            }
            v
        })
        .collect()
}

/// Some solution of `M x = b`, if one exists.
pub fn solve(rows: &[Vec<Scalar>], b: &[Scalar], cols: usize, field: Field) -> Option<Vec<Scalar>> {
    let mut aug: Vec<Vec<Scalar>> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![field.zero(); cols];
    for (row, &pc) in aug.iter().zip(&pivots) {
        x[pc] = row[cols].clone();
    }
    Some(x)
}

/// Incrementally built echelon basis of sparse vectors, keyed by column.
///
/// Each stored row has a distinct leading (largest) column with coefficient 1.
#[derive(Clone, Debug)]
pub struct SparseEchelon<K: Ord + Clone> {
    field: Field,
    rows: BTreeMap<K, BTreeMap<K, Scalar>>,
}

impl<K: Ord + Clone> SparseEchelon<K> {
    pub fn new(field: Field) -> Self {
        SparseEchelon {
            field,
            rows: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Reduces `v` against the stored rows (leading-term reduction only).
    pub fn reduce(&self, mut v: BTreeMap<K, Scalar>) -> BTreeMap<K, Scalar> {
        let mut done = BTreeMap::new();
        while let Some((k, c)) = v.pop_last() {
            match self.rows.get(&k) {
                Some(row) => {
                    for (kk, rc) in row.iter().rev().skip(1) {
                        let t = &c * rc;
                        let e = v.entry(kk.clone()).or_insert_with(|| self.field.zero());
                        *e = &*e - &t;
                        if e.is_zero() {
                            v.remove(kk);
                        }
                    }
                }
                None => {
                    done.insert(k, c);
                }
            }
        }
        done
    }

    /// Adds `v` to the span. Returns true if it was independent.
    pub fn insert(&mut self, v: BTreeMap<K, Scalar>) -> bool {
        let mut r = self.reduce(v);
        let Some((lead, c)) = r.last_key_value().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = c.inv().expect("nonzero leading coefficient");
        for x in r.values_mut() {
            *x = &*x * &inv;
        }
        self.rows.insert(lead, r);
        true
    }

    pub fn contains(&self, v: BTreeMap<K, Scalar>) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn leading_keys(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Field::Rationals.from_i64(x)).collect())
            .collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m, 3), 2);
        let ns = nullspace(&m, 3, Field::Rationals);
        assert_eq!(ns.len(), 1);
        for row in &m {
            let dot = row
                .iter()
                .zip(&ns[0])
                .fold(Field::Rationals.zero(), |acc, (a, b)| &acc + &(a * b));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f = Field::Rationals;
        let m = q(&[&[1, 1], &[1, -1]]);
        let x = solve(&m, &[f.from_i64(3), f.from_i64(1)], 2, f).unwrap();
        assert_eq!(x, vec![f.from_i64(2), f.from_i64(1)]);
        let m = q(&[&[1, 1], &[2, 2]]);
        assert!(solve(&m, &[f.from_i64(1), f.from_i64(3)], 2, f).is_none());
    }

    #[test]
    fn sparse_echelon_mod_p() {
        let f = Field::Prime(3);
        let mut e = SparseEchelon::new(f);
        let v = |pairs: &[(u32, i64)]| pairs.iter().map(|&(k, c)| (k, f.from_i64(c))).collect();
        assert!(e.insert(v(&[(0, 1), (1, 1)])));
        assert!(e.insert(v(&[(1, 2)])));
        assert!(!e.insert(v(&[(0, 2)])));
        assert!(e.contains(v(&[(0, 5), (1, 1)])));
        assert_eq!(e.len(), 2);
    }
}
