//! Degree-zero cohomology dimensions checked against a truncated
//! linear-algebra count that does not use the rewriting engine.
//!
//! For weights `w(c·p) = deg c + len p`, let `V_m` be the span of terms of
//! weight at most `m` and `I_n` the span of all `c·p·r·q` of weight at most
//! `n` with `r` a relation. `dim (V_m + I_n) / I_n` decreases in `n` towards
//! the dimension of the image of `V_m` in the quotient.

use std::collections::BTreeMap;
use std::sync::Arc;

use dbplumb::dg::{build_ak, build_wk};
use dbplumb::ginzburg::build_gk_explicit;
use dbplumb::h0::h0;
use dbplumb::linalg::SparseEchelon;
use dbplumb::path_algebra::TermKey;
use dbplumb::{AlgebraElement, Field, Monomial, Path, Quiver, Scalar};

type Key = (usize, TermKey);

fn weight(key: &TermKey) -> usize {
    key.0.degree() as usize + key.1.len()
}

fn paths_up_to(q: &Quiver, n: usize) -> Vec<Path> {
    let mut out: Vec<Path> = (0..q.num_vertices()).map(Path::trivial).collect();
    let mut frontier = out.clone();
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &frontier {
            for a in 0..q.arrows().len() {
                if let Some(longer) = p.concat(&Path::arrow(q, a)) {
                    next.push(longer);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn monomials_up_to(nvars: usize, d: usize) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(nvars)];
    let mut frontier = out.clone();
    for _ in 0..d {
        let mut next = Vec::new();
        for m in &frontier {
            for i in 0..nvars {
                let mm = m.mul(&Monomial::var(nvars, i));
                if !next.contains(&mm) {
                    next.push(mm);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn vector(u: &AlgebraElement) -> BTreeMap<Key, Scalar> {
    u.terms().iter().map(|(k, c)| ((weight(k), k.clone()), c.clone())).collect()
}

fn truncated_dim(q: &Arc<Quiver>, field: Field, relations: &[AlgebraElement], m: usize, n: usize) -> usize {
    let nc = q.central_vars().len();
    let paths = paths_up_to(q, n);
    let monos = monomials_up_to(nc, n);
    let mut ideal: SparseEchelon<Key> = SparseEchelon::new(field);
    for r in relations {
        let wr = r.terms().keys().map(weight).max().unwrap_or(0);
        if wr > n {
            continue;
        }
        let room = n - wr;
        for c in monos.iter().filter(|c| c.degree() as usize <= room) {
            for p in paths.iter().filter(|p| c.degree() as usize + p.len() <= room) {
                let left = AlgebraElement::term(q, field, field.one(), c.clone(), p.clone());
                let lr = &left * r;
                if lr.is_zero() {
                    continue;
                }
                for s in paths.iter().filter(|s| c.degree() as usize + p.len() + s.len() <= room) {
                    let right = AlgebraElement::term(q, field, field.one(), Monomial::one(nc), s.clone());
                    let u = &lr * &right;
                    if !u.is_zero() {
                        ideal.insert(vector(&u));
                    }
                }
            }
        }
    }
    let mut count = 0;
    for c in &monos {
        for p in &paths {
            let key: TermKey = (c.clone(), p.clone());
            if weight(&key) <= m && ideal.insert(BTreeMap::from([((weight(&key), key), field.one())])) {
                count += 1;
            }
        }
    }
    count
}

fn two_vertex(arrows: [&str; 2], central: &[&str]) -> Arc<Quiver> {
    Quiver::new(&["0", "1"], &[(arrows[0], "0", "1", 0), (arrows[1], "1", "0", 0)], central).unwrap()
}

fn parse_all(q: &Arc<Quiver>, field: Field, rels: &[String]) -> Vec<AlgebraElement> {
    rels.iter().map(|r| AlgebraElement::parse(q, field, r).unwrap()).collect()
}

fn w_relations(k: u32, field: Field) -> (Arc<Quiver>, Vec<AlgebraElement>) {
    let q = two_vertex(["a", "b"], &["x2", "x1"]);
    let rels = [
        "a*b - (x1 - 1)*e0".to_string(),
        "b*a - (x1 - 1)*e1".to_string(),
        "(x2 + 1)*e0".to_string(),
        format!("(x1^{k} + x2)*e1"),
    ];
    let r = parse_all(&q, field, &rels);
    (q, r)
}

fn a_relations(k: u32, field: Field) -> (Arc<Quiver>, Vec<AlgebraElement>) {
    let q = two_vertex(["a", "b"], &["y", "x"]);
    let rels = [
        "a*b - x*e0".to_string(),
        "b*a - x*e1".to_string(),
        "y*e0".to_string(),
        format!("((x + 1)^{k} + y - 1)*e1"),
    ];
    let r = parse_all(&q, field, &rels);
    (q, r)
}

fn g_relations(k: u32, field: Field) -> (Arc<Quiver>, Vec<AlgebraElement>) {
    let q = two_vertex(["e", "f"], &[]);
    let rels = [format!("((f*e + e1)^{k} - e1)*f"), format!("e*((f*e + e1)^{k} - e1)")];
    let r = parse_all(&q, field, &rels);
    (q, r)
}

/// Oracle dimension, required to be stable in `m` and in `n`.
fn oracle(build: impl Fn() -> (Arc<Quiver>, Vec<AlgebraElement>), field: Field, m: usize, n: usize) -> usize {
    let (q, rels) = build();
    let d = truncated_dim(&q, field, &rels, m, n);
    assert_eq!(d, truncated_dim(&q, field, &rels, m + 1, n + 1), "oracle not stable at m = {m}, n = {n}");
    d
}

fn engine_dim(p: &dbplumb::dg::DgPresentation, k: u32) -> usize {
    h0(p, 4 * k as usize + 8).unwrap().finite().unwrap().dim()
}

#[test]
fn w_dimensions_match_oracle_over_q() {
    let f = Field::Rationals;
    for k in 1..=5u32 {
        let ku = k as usize;
        let d = oracle(|| w_relations(k, f), f, ku + 2, 2 * ku + 6);
        assert_eq!(d, 4 * ku + 2, "oracle, k = {k}");
        assert_eq!(engine_dim(&build_wk(k, f).unwrap(), k), d, "engine, k = {k}");
    }
}

#[test]
fn a_and_g_dimensions_match_oracle() {
    for field in [Field::Rationals, Field::prime(2).unwrap(), Field::prime(3).unwrap()] {
        for k in 1..=3u32 {
            let ku = k as usize;
            let da = oracle(|| a_relations(k, field), field, ku + 2, 2 * ku + 6);
            assert_eq!(engine_dim(&build_ak(k, field).unwrap(), k), da, "A, k = {k}, {field}");
            let dg = oracle(|| g_relations(k, field), field, 2 * ku + 3, 4 * ku + 8);
            assert_eq!(engine_dim(&build_gk_explicit(k, field).unwrap(), k), dg, "G, k = {k}, {field}");
            assert_eq!(da, dg);
        }
    }
}

#[test]
fn w_dimensions_over_small_primes() {
    for field in [Field::prime(2).unwrap(), Field::prime(3).unwrap()] {
        for k in 1..=4u32 {
            let ku = k as usize;
            let d = oracle(|| w_relations(k, field), field, ku + 2, 2 * ku + 6);
            assert_eq!(engine_dim(&build_wk(k, field).unwrap(), k), d, "k = {k}, {field}");
        }
    }
}
