//! Seeded randomized property suites. Each panics on the first failure.

use std::sync::Arc;

use dbplumb::dg::{build_ak, build_wk, DgPresentation};
use dbplumb::ginzburg::build_gk_explicit;
use dbplumb::rewriting::RewriteSystem;
use dbplumb::{smith_normal_form, AlgebraElement, Field, IntMatrix, Monomial, Path, Quiver};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CASES: u64 = 200;
const SEED: u64 = 0x5eed;

fn rng(case: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ (case.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

fn random_field(rng: &mut ChaCha8Rng) -> Field {
    match rng.gen_range(0..4) {
        0 => Field::Rationals,
        1 => Field::prime(2).unwrap(),
        2 => Field::prime(3).unwrap(),
        _ => Field::prime(5).unwrap(),
    }
}

/// A term `c · path` built by a random walk; `max_len` bounds the path.
fn random_term(q: &Arc<Quiver>, field: Field, rng: &mut ChaCha8Rng, max_len: usize, max_central: u32) -> AlgebraElement {
    let mut path = Path::trivial(rng.gen_range(0..q.num_vertices()));
    for _ in 0..rng.gen_range(0..=max_len) {
        let out: Vec<usize> = (0..q.arrows().len()).filter(|&a| q.arrow(a).src == path.end).collect();
        if out.is_empty() {
            break;
        }
        path = path.concat(&Path::arrow(q, out[rng.gen_range(0..out.len())])).unwrap();
    }
    let nc = q.central_vars().len();
    let mut mono = Monomial::one(nc);
    if nc > 0 {
        for _ in 0..rng.gen_range(0..=max_central) {
            mono.0[rng.gen_range(0..nc)] += 1;
        }
    }
    let c = loop {
        let c = field.from_i64(rng.gen_range(-4..=4));
        if !c.is_zero() {
            break c;
        }
    };
    AlgebraElement::term(q, field, c, mono, path)
}

fn random_element(q: &Arc<Quiver>, field: Field, rng: &mut ChaCha8Rng, max_len: usize) -> AlgebraElement {
    let mut u = AlgebraElement::zero(q, field);
    for _ in 0..rng.gen_range(1..=4) {
        u = &u + &random_term(q, field, rng, max_len, 2);
    }
    u
}

fn random_quiver(rng: &mut ChaCha8Rng) -> Arc<Quiver> {
    match rng.gen_range(0..3) {
        0 => Quiver::new(&["0"], &[("x", "0", "0", 0), ("y", "0", "0", 0)], &[]).unwrap(),
        1 => Quiver::new(&["0", "1"], &[("a", "0", "1", 0), ("b", "1", "0", 0), ("c", "0", "0", 0)], &["t"]).unwrap(),
        _ => Quiver::new(&["0"], &[("x", "0", "0", 0), ("y", "0", "0", 0), ("z", "0", "0", 0)], &[]).unwrap(),
    }
}

/// Random relations whose terms share endpoints, so they are genuine
/// elements of `e_s A e_t`.
fn random_relations(q: &Arc<Quiver>, field: Field, rng: &mut ChaCha8Rng) -> Vec<AlgebraElement> {
    let mut out = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let lead = random_term(q, field, rng, 3, 1);
        let (s, t) = lead.endpoints()[0];
        let mut r = lead;
        for _ in 0..rng.gen_range(0..=2) {
            let extra = random_term(q, field, rng, 3, 1).component(s, t);
            r = &r + &extra;
        }
        if !r.is_zero() {
            out.push(r);
        }
    }
    out
}

pub fn rewriting_confluent_below_bound() {
    let mut completed = 0;
    for case in 0..CASES {
        let mut rng = rng(case);
        let field = random_field(&mut rng);
        let q = random_quiver(&mut rng);
        let rels = random_relations(&q, field, &mut rng);
        let bound = 6;
        let rs = RewriteSystem::complete(&q, field, &rels, bound).unwrap();
        for r in &rels {
            assert!(rs.normal_poly(r).is_empty(), "case {case}: generator not reduced to zero");
        }
        if rs.is_confluent() {
            assert!(rs.check_all_overlaps().is_empty(), "case {case}");
        }
        if rs.complete_below_bound() {
            completed += 1;
            for (w, _) in rs.check_all_overlaps() {
                assert!(w.letters.len() > bound, "case {case}: unresolved overlap of length {}", w.letters.len());
            }
            // Normal forms are compatible with multiplication below the bound.
            for _ in 0..4 {
                let a = random_element(&q, field, &mut rng, 2);
                let b = random_element(&q, field, &mut rng, 2);
                let lhs = rs.normal_poly(&(&a * &b));
                let na = rs.alphabet().poly_to_element(&rs.normal_poly(&a), field);
                let nb = rs.alphabet().poly_to_element(&rs.normal_poly(&b), field);
                assert_eq!(lhs, rs.normal_poly(&(&na * &nb)), "case {case}");
            }
        }
    }
    assert!(completed >= CASES as usize / 2, "only {completed} systems completed");
}

pub fn normal_form_idempotent() {
    for case in 0..CASES {
        let mut rng = rng(case + 1000);
        let field = random_field(&mut rng);
        let q = random_quiver(&mut rng);
        let rels = random_relations(&q, field, &mut rng);
        let rs = RewriteSystem::complete(&q, field, &rels, 6).unwrap();
        for _ in 0..3 {
            let u = random_element(&q, field, &mut rng, 4);
            let once = rs.alphabet().poly_to_element(&rs.normal_poly(&u), field);
            let twice = rs.alphabet().poly_to_element(&rs.normal_poly(&once), field);
            assert_eq!(once, twice, "case {case}");
        }
    }
}

pub fn path_algebra_associative_and_distributive() {
    for case in 0..CASES {
        let mut rng = rng(case + 2000);
        let field = random_field(&mut rng);
        let q = random_quiver(&mut rng);
        let (u, v, w) = (
            random_element(&q, field, &mut rng, 3),
            random_element(&q, field, &mut rng, 3),
            random_element(&q, field, &mut rng, 3),
        );
        assert_eq!(&(&u * &v) * &w, &u * &(&v * &w), "case {case}");
        assert_eq!(&u * &(&v + &w), &(&u * &v) + &(&u * &w), "case {case}");
        let one = AlgebraElement::one(&q, field);
        assert_eq!(&one * &u, u);
        assert_eq!(&u * &one, u);
    }
}

fn random_homogeneous(p: &DgPresentation, rng: &mut ChaCha8Rng) -> AlgebraElement {
    loop {
        let u = random_element(&p.quiver, p.field, rng, 4);
        let parts = u.homogeneous_parts();
        let keys: Vec<i64> = parts.keys().copied().collect();
        if let Some(d) = keys.get(rng.gen_range(0..keys.len().max(1))) {
            return parts[d].clone();
        }
    }
}

pub fn leibniz_sign() {
    for case in 0..CASES {
        let mut rng = rng(case + 3000);
        let field = random_field(&mut rng);
        let k = rng.gen_range(1..=4);
        let p = match rng.gen_range(0..3) {
            0 => build_wk(k, field).unwrap(),
            1 => build_ak(k, field).unwrap(),
            _ => build_gk_explicit(k, field).unwrap(),
        };
        let u = random_homogeneous(&p, &mut rng);
        let v = random_homogeneous(&p, &mut rng);
        let deg = u.degree().unwrap_or(0);
        let sign = if deg.rem_euclid(2) == 0 { field.one() } else { field.from_i64(-1) };
        let expected = &(&p.d(&u) * &v) + &(&u * &p.d(&v)).scale(&sign);
        assert_eq!(p.d(&(&u * &v)), expected, "case {case}: |u| = {deg}");
    }
}

fn random_int_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let rows = rng.gen_range(1..=5);
    let cols = rng.gen_range(1..=5);
    let m: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(-12..=12) }).collect())
        .collect();
    IntMatrix::from_rows(&m)
}

pub fn smith_form_unimodular() {
    for case in 0..CASES {
        let mut rng = rng(case + 4000);
        let m = random_int_matrix(&mut rng);
        let s = smith_normal_form(&m);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d, "case {case}");
        assert!(s.u.determinant().abs().is_one(), "case {case}: U not unimodular");
        assert!(s.v.determinant().abs().is_one(), "case {case}: V not unimodular");
        assert!(s.d.is_diagonal());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if a != &BigInt::from(0) {
                assert!((b % a) == BigInt::from(0), "case {case}: {a} does not divide {b}");
            } else {
                assert_eq!(b, &BigInt::from(0), "case {case}");
            }
            assert!(!a.is_negative());
        }
    }
}
