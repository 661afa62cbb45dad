//! Acceptance run: every criterion is evaluated, one result line is printed
//! per criterion, and the target fails if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use dbplumb::dg::{build_ak, build_wk, change_of_variables_ak_to_wk, check_d_squared, check_dg_morphism};
use dbplumb::ginzburg::{build_gk_explicit, cyclic_derivative, discrepancy_report, phi_gk_to_ak, DerivativeMode, Potential};
use dbplumb::groups::{verify_central_unit, FiniteGroup, GroupAlgebra};
use dbplumb::h0::{h0, homomorphism_from_strings, induced_map, H0Algebra};
use dbplumb::singularity::{is_singular_point, sigma, special_point, tjurina_number, PolyRing, QuotientDim};
use dbplumb::{AlgebraElement, Field, Quiver};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fields4() -> Vec<Field> {
    vec![
        Field::Rationals,
        Field::prime(2).unwrap(),
        Field::prime(3).unwrap(),
        Field::prime(5).unwrap(),
    ]
}

fn fields3() -> Vec<Field> {
    fields4().into_iter().take(3).collect()
}

fn bound(k: u32) -> usize {
    4 * k as usize + 8
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn d_squared() -> Outcome {
    let mut checked = 0;
    for field in fields4() {
        for k in 1..=6 {
            for p in [build_wk(k, field), build_ak(k, field)]
                .into_iter()
                .map(|p| p.map_err(|e| e.to_string()))
                .chain([build_gk_explicit(k, field).map_err(|e| e.to_string())])
            {
                let p = p?;
                let rs = p.rewrite_system(bound(k)).map_err(|e| e.to_string())?;
                let o = check_d_squared(&p, &rs);
                ensure(o.passed(), || format!("{} over {field}: {:?}", p.name, o.violations))?;
                checked += o.checked;
            }
        }
    }
    Ok(format!("{checked} generators checked"))
}

fn phi_morphism() -> Outcome {
    for field in fields4() {
        for k in 1..=6 {
            let g = build_gk_explicit(k, field).map_err(|e| e.to_string())?;
            let a = build_ak(k, field).map_err(|e| e.to_string())?;
            let rs = a.rewrite_system(bound(k)).map_err(|e| e.to_string())?;
            let spec = phi_gk_to_ak(&g, &a).map_err(|e| e.to_string())?;
            let o = check_dg_morphism(&spec, &rs).map_err(|e| e.to_string())?;
            ensure(o.passed(), || format!("k = {k} over {field}: {:?}", o.violations))?;
            let phi = spec.homomorphism().map_err(|e| e.to_string())?;
            let estar = AlgebraElement::named(&g.quiver, field, "estar").unwrap();
            let diff = &phi.apply(&g.d(&estar)) - &a.d(&phi.apply(&estar));
            let nf = rs.normal_form(&diff).map_err(|e| e.to_string())?;
            ensure(nf.is_zero(), || format!("k = {k} over {field}: residual {nf}"))?;
        }
    }
    Ok("k = 1..6 over Q, F2, F3, F5".into())
}

fn change_of_variables() -> Outcome {
    let mut compared = 0;
    for k in 1..=10 {
        let m = change_of_variables_ak_to_wk(k, Field::Rationals).map_err(|e| e.to_string())?;
        ensure(m.exact, || format!("k = {k}: {:?}", m.diffs))?;
        compared += m.compared;
    }
    Ok(format!("{compared} items matched term by term"))
}

fn finite(p: &dbplumb::dg::DgPresentation, k: u32) -> Result<H0Algebra, String> {
    h0(p, bound(k))
        .map_err(|e| e.to_string())?
        .finite()
        .map_err(|e| format!("{}: {e}", p.name))
}

fn h0_agreement() -> Outcome {
    for field in fields3() {
        for k in 1..=5u32 {
            let w = finite(&build_wk(k, field).map_err(|e| e.to_string())?, k)?;
            let a = finite(&build_ak(k, field).map_err(|e| e.to_string())?, k)?;
            let g = finite(&build_gk_explicit(k, field).map_err(|e| e.to_string())?, k)?;
            let expected = 4 * k as usize + 2;
            ensure([w.dim(), a.dim(), g.dim()] == [expected; 3], || {
                format!("k = {k} over {field}: dims {} {} {}", w.dim(), a.dim(), g.dim())
            })?;
            let images: BTreeMap<String, String> =
                [("e", "a"), ("f", "b")].map(|(s, t)| (s.to_string(), t.to_string())).into();
            let hom = homomorphism_from_strings(&g.quiver, &a.quiver, field, &images).map_err(|e| e.to_string())?;
            let m = induced_map(&g, &a, &hom).map_err(|e| e.to_string())?;
            ensure(m.is_isomorphism(), || format!("k = {k} over {field}: {m:?}"))?;
        }
    }
    Ok("dim = 4k+2 for W, A, G; phi induces isomorphisms".into())
}

fn unit_identities() -> Outcome {
    let mut orders = Vec::new();
    for field in fields3() {
        for k in 1..=5u32 {
            let w = finite(&build_wk(k, field).map_err(|e| e.to_string())?, k)?;
            let expr = format!("(x1 - e0 - e1)*(x1^{k} - e0 - e1)");
            ensure(w.verify_identity(&expr).map_err(|e| e.to_string())?, || {
                format!("identity fails for k = {k} over {field}")
            })?;
            if field == Field::Rationals && (2..=4).contains(&k) {
                let ss = w.algebra.center_semisimplification();
                let x1 = ss.projection.apply(w.algebra.generator("x1").unwrap());
                let order = ss.algebra.element_order(&x1, 64).map_err(|e| e.to_string())?;
                ensure(order == Some(k as u64), || format!("order of x1 is {order:?} for k = {k}"))?;
                orders.push(format!("k={k}:{}", order.unwrap()));
            }
        }
    }
    Ok(format!("orders {}", orders.join(" ")))
}

fn cyclic_derivatives() -> Outcome {
    let q: Arc<Quiver> =
        Quiver::new(&["0"], &[("g", "0", "0", 0), ("h", "0", "0", 0), ("hp", "0", "0", 0)], &[]).map_err(|e| e.to_string())?;
    let f = Field::Rationals;
    let w = Potential::new(AlgebraElement::parse(&q, f, "g*h*g*hp").unwrap()).map_err(|e| e.to_string())?;
    let expected = AlgebraElement::parse(&q, f, "h*g*hp + hp*g*h").unwrap();
    for mode in [DerivativeMode::Literal, DerivativeMode::CyclicOrbit] {
        let got = cyclic_derivative(&w, "g", mode).map_err(|e| e.to_string())?;
        ensure(got == expected, || format!("{mode:?}: {got}"))?;
    }
    for k in 1..=4 {
        let r = discrepancy_report(k, f).map_err(|e| e.to_string())?;
        ensure(r.modes_differ && r.multiplicity_pattern_holds && r.orbit_matches_explicit, || {
            format!("k = {k}: {r:?}")
        })?;
    }
    Ok("example exact; literal = (j+1) x explicit for k = 1..4".into())
}

fn tjurina() -> Outcome {
    let mut values = Vec::new();
    for k in 1..=4u32 {
        let t = tjurina_number(k, Field::Rationals).map_err(|e| e.to_string())?;
        ensure(t.global == QuotientDim::Finite(k as usize + 3), || format!("k = {k}: {:?}", t.global))?;
        ensure(t.local_origin == 4, || format!("k = {k}: local {}", t.local_origin))?;
        values.push(format!("{}", k + 3));
    }
    let ring = PolyRing::uvxy(Field::Rationals).map_err(|e| e.to_string())?;
    for (k, expected) in [(2, true), (4, true), (6, true), (3, false), (5, false)] {
        let f = sigma(k, &ring).map_err(|e| e.to_string())?;
        let s = is_singular_point(&f, &special_point(Field::Rationals)).map_err(|e| e.to_string())?;
        ensure(s == expected, || format!("k = {k}: singular = {s}"))?;
    }
    Ok(format!("global tau = {} (local at origin 4)", values.join(", ")))
}

fn group_rings() -> Outcome {
    let a5 = Arc::new(FiniteGroup::a5());
    let alg = GroupAlgebra::new(a5.clone(), Field::Integers);
    let u = alg.parse("49 + 26*C1 - 10*C2 - 16*C4").map_err(|e| e.to_string())?;
    let (_, cert) = verify_central_unit(&alg, &u).map_err(|e| e.to_string())?;
    let (alg2, u2) = alg.reduce_mod_p(&u, 2).map_err(|e| e.to_string())?;
    ensure(u2 == alg2.one(), || "u does not reduce to 1 mod 2".into())?;
    let counts: Vec<usize> = ["A4", "S4", "A5"]
        .iter()
        .map(|n| FiniteGroup::by_name(n).unwrap().conjugacy_classes().len())
        .collect();
    ensure(counts == [4, 5, 5], || format!("class counts {counts:?}"))?;
    let a4 = Arc::new(FiniteGroup::a4());
    let f3 = GroupAlgebra::new(a4.clone(), Field::prime(3).unwrap());
    let mut s = f3.one();
    for g in 0..a4.order() {
        s = f3.add(&s, &f3.basis(g));
    }
    verify_central_unit(&f3, &s).map_err(|e| format!("1 + sum g in F3[A4]: {e}"))?;
    Ok(format!("inverse {}", cert.inverse))
}

fn prisms() -> Outcome {
    common::prism_table().map(|n| format!("{n} presentations"))
}

fn gate() -> Outcome {
    let cases = common::gate_cases();
    ensure(cases.len() == 20, || format!("{} cases", cases.len()))?;
    for c in &cases {
        common::run_gate_case(c)?;
    }
    Ok("20 golden traces".into())
}

fn properties() -> Outcome {
    use common::props;
    props::rewriting_confluent_below_bound();
    props::normal_form_idempotent();
    props::path_algebra_associative_and_distributive();
    props::leibniz_sign();
    props::smith_form_unimodular();
    Ok(format!("5 suites x {} cases", props::CASES))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("d-squared", d_squared),
        ("phi-dg-morphism", phi_morphism),
        ("change-of-variables", change_of_variables),
        ("h0-finite-and-agreeing", h0_agreement),
        ("unit-identities", unit_identities),
        ("cyclic-derivative", cyclic_derivatives),
        ("tjurina", tjurina),
        ("group-rings", group_rings),
        ("prism-presentations", prisms),
        ("gate-golden", gate),
        ("property-suites", properties),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({secs:.2}s) {detail}", i + 1),
            Err(why) => {
                println!("criterion {:>2} {name}: FAIL ({secs:.2}s) {why}", i + 1);
                failed.push(name.to_string());
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
