//! Dg presentations: graded quivers with relations and generator-wise
//! differentials, the Leibniz extension, d² checks, dg morphisms, and the
//! built-in families `W_k` and `A_k`.
//!
//! Signs follow `d(uv) = (du)v + (-1)^{|u|} u(dv)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::arith::Field;
use crate::path_algebra::{AlgebraElement, Homomorphism, Monomial, Path, PathAlgebraError, Quiver};
use crate::report::Status;
use crate::rewriting::{RewriteError, RewriteSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DgError {
    #[error("k must be at least 1")]
    InvalidK,
    #[error("differential of `{0}` names no arrow")]
    UnknownGenerator(String),
    #[error("d({gen}) has degree {got:?}, expected {expected}")]
    WrongDegree { gen: String, got: Option<i64>, expected: i64 },
    #[error("d({gen}) has a term with endpoints {got:?}, expected {expected:?}")]
    WrongEndpoints { gen: String, got: (usize, usize), expected: (usize, usize) },
    #[error("degree-0 generator `{0}` must be closed")]
    DegreeZeroNotClosed(String),
    #[error("relation {0} is not homogeneous")]
    InhomogeneousRelation(usize),
    #[error("assignment misses generator `{0}`")]
    MissingAssignment(String),
    #[error("image of `{gen}` has degree {got:?}, expected {expected}")]
    ImageDegree { gen: String, got: Option<i64>, expected: i64 },
    #[error("image of `{gen}` has endpoints {got:?}, expected {expected:?}")]
    ImageEndpoints { gen: String, got: (usize, usize), expected: (usize, usize) },
    #[error("vertex `{0}` has no counterpart in the target")]
    VertexMap(String),
    #[error(transparent)]
    PathAlgebra(#[from] PathAlgebraError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgPresentation {
    pub name: String,
    pub quiver: Arc<Quiver>,
    pub field: Field,
    pub relations: Vec<AlgebraElement>,
    /// Arrow name → differential. Arrows not listed are closed.
    pub differentials: BTreeMap<String, AlgebraElement>,
}

impl DgPresentation {
    /// Parses relations and differentials given as expression strings.
    pub fn from_strings(
        name: &str,
        quiver: Arc<Quiver>,
        field: Field,
        relations: &[&str],
        differentials: &[(&str, &str)],
    ) -> Result<Self, DgError> {
        let relations = relations
            .iter()
            .map(|r| AlgebraElement::parse(&quiver, field, r))
            .collect::<Result<Vec<_>, _>>()?;
        let differentials = differentials
            .iter()
            .map(|(g, d)| Ok((g.to_string(), AlgebraElement::parse(&quiver, field, d)?)))
            .collect::<Result<BTreeMap<_, _>, DgError>>()?;
        let p = DgPresentation {
            name: name.to_string(),
            quiver,
            field,
            relations,
            differentials,
        };
        p.validate()?;
        Ok(p)
    }

    /// Degree, endpoint and closedness invariants.
    pub fn validate(&self) -> Result<(), DgError> {
        for (g, dg) in &self.differentials {
            let a = self
                .quiver
                .arrow_index(g)
                .ok_or_else(|| DgError::UnknownGenerator(g.clone()))?;
            let ar = self.quiver.arrow(a);
            if dg.is_zero() {
                continue;
            }
            if ar.deg == 0 {
                return Err(DgError::DegreeZeroNotClosed(g.clone()));
            }
            for (s, t) in dg.endpoints() {
                if (s, t) != (ar.src, ar.dst) {
                    return Err(DgError::WrongEndpoints {
                        gen: g.clone(),
                        got: (s, t),
                        expected: (ar.src, ar.dst),
                    });
                }
            }
            if dg.degree() != Some(ar.deg + 1) {
                return Err(DgError::WrongDegree {
                    gen: g.clone(),
                    got: dg.degree(),
                    expected: ar.deg + 1,
                });
            }
        }
        for (i, r) in self.relations.iter().enumerate() {
            if !r.is_homogeneous() {
                return Err(DgError::InhomogeneousRelation(i));
            }
        }
        Ok(())
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.quiver.arrows().iter().map(|a| a.name.clone()).collect()
    }

    pub fn d_of(&self, arrow: usize) -> AlgebraElement {
        self.differentials
            .get(&self.quiver.arrow(arrow).name)
            .cloned()
            .unwrap_or_else(|| AlgebraElement::zero(&self.quiver, self.field))
    }

    /// Extends the differential to arbitrary elements by the Leibniz rule.
    pub fn d(&self, u: &AlgebraElement) -> AlgebraElement {
        let q = &self.quiver;
        let nc = q.central_vars().len();
        let dgs: Vec<AlgebraElement> = (0..q.arrows().len()).map(|a| self.d_of(a)).collect();
        let mut out = AlgebraElement::zero(q, self.field);
        for ((m, p), c) in u.terms() {
            let mut sign_deg = 0i64;
            for (i, &g) in p.arrows.iter().enumerate() {
                if !dgs[g].is_zero() {
                    let prefix = if i == 0 {
                        Path::trivial(p.start)
                    } else {
                        Path::from_arrows(q, &p.arrows[..i]).expect("subpath")
                    };
                    let suffix = if i + 1 == p.len() {
                        Path::trivial(q.arrow(g).dst)
                    } else {
                        Path::from_arrows(q, &p.arrows[i + 1..]).expect("subpath")
                    };
                    let coef = if sign_deg.rem_euclid(2) == 1 { -c } else { c.clone() };
                    let left = AlgebraElement::term(q, self.field, coef, m.clone(), prefix);
                    let right =
                        AlgebraElement::term(q, self.field, self.field.one(), Monomial::one(nc), suffix);
                    out = &out + &(&(&left * &dgs[g]) * &right);
                }
                sign_deg += q.arrow(g).deg;
            }
        }
        out
    }

    /// Generators for the relation ideal: the presentation's relations.
    pub fn ideal_generators(&self) -> &[AlgebraElement] {
        &self.relations
    }

    pub fn rewrite_system(&self, bound: usize) -> Result<RewriteSystem, DgError> {
        Ok(RewriteSystem::complete(&self.quiver, self.field, &self.relations, bound)?)
    }

    /// Length of the longest word among relations and differentials.
    pub fn max_generator_len(&self) -> usize {
        self.relations
            .iter()
            .chain(self.differentials.values())
            .map(AlgebraElement::max_word_len)
            .max()
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub subject: String,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub status: Status,
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub inconclusive: Vec<String>,
}

impl CheckOutcome {
    fn new() -> Self {
        CheckOutcome {
            status: Status::Pass,
            checked: 0,
            violations: Vec::new(),
            inconclusive: Vec::new(),
        }
    }

    fn record(&mut self, subject: String, result: Result<AlgebraElement, RewriteError>) {
        self.checked += 1;
        match result {
            Ok(nf) if nf.is_zero() => {}
            Ok(nf) => {
                self.violations.push(Violation {
                    subject,
                    witness: nf.to_string(),
                });
                self.status = self.status.and(Status::Fail);
            }
            Err(e) => {
                self.inconclusive.push(format!("{subject}: {e}"));
                self.status = self.status.and(Status::Inconclusive);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// `d(d g) ≡ 0` for every generator and `d r ≡ 0` for every relation.
pub fn check_d_squared(p: &DgPresentation, rs: &RewriteSystem) -> CheckOutcome {
    let mut out = CheckOutcome::new();
    if let Err(e) = p.validate() {
        out.violations.push(Violation {
            subject: "presentation".into(),
            witness: e.to_string(),
        });
        out.status = Status::Fail;
        return out;
    }
    for (a, arrow) in p.quiver.arrows().iter().enumerate() {
        let dd = p.d(&p.d_of(a));
        out.record(format!("d(d {})", arrow.name), rs.normal_form(&dd));
    }
    for (i, r) in p.relations.iter().enumerate() {
        out.record(format!("d(relation {i}: {r})"), rs.normal_form(&p.d(r)));
    }
    out
}

/// An assignment of target elements to source generators.
#[derive(Clone, Debug)]
pub struct DgMorphismSpec {
    pub source: DgPresentation,
    pub target: DgPresentation,
    /// Source arrow or central-variable name → target element.
    pub assignment: BTreeMap<String, AlgebraElement>,
}

impl DgMorphismSpec {
    pub fn homomorphism(&self) -> Result<Homomorphism, DgError> {
        let src = &self.source.quiver;
        let dst = &self.target.quiver;
        let field = self.target.field;
        let vertex_map = src
            .vertices()
            .iter()
            .map(|v| dst.vertex_index(v).ok_or_else(|| DgError::VertexMap(v.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let mut arrow_images = Vec::new();
        for ar in src.arrows() {
            let img = self
                .assignment
                .get(&ar.name)
                .cloned()
                .ok_or_else(|| DgError::MissingAssignment(ar.name.clone()))?;
            if !img.is_zero() {
                if img.degree() != Some(ar.deg) {
                    return Err(DgError::ImageDegree {
                        gen: ar.name.clone(),
                        got: img.degree(),
                        expected: ar.deg,
                    });
                }
                let expected = (vertex_map[ar.src], vertex_map[ar.dst]);
                for ends in img.endpoints() {
                    if ends != expected {
                        return Err(DgError::ImageEndpoints {
                            gen: ar.name.clone(),
                            got: ends,
                            expected,
                        });
                    }
                }
            }
            arrow_images.push(img);
        }
        let mut central_images = Vec::new();
        for c in src.central_vars() {
            let img = match self.assignment.get(c) {
                Some(img) => img.clone(),
                None => dst
                    .central_index(c)
                    .map(|i| AlgebraElement::central(dst, field, i))
                    .ok_or_else(|| DgError::MissingAssignment(c.clone()))?,
            };
            if img.as_central_poly().is_none() {
                return Err(DgError::PathAlgebra(PathAlgebraError::NotCentral(c.clone())));
            }
            central_images.push(img);
        }
        Ok(Homomorphism {
            source: src.clone(),
            target: dst.clone(),
            field,
            vertex_map,
            arrow_images,
            central_images,
        })
    }
}

/// Relations map into the target ideal and `φ∘d = d∘φ` on generators.
pub fn check_dg_morphism(spec: &DgMorphismSpec, rs_target: &RewriteSystem) -> Result<CheckOutcome, DgError> {
    let phi = spec.homomorphism()?;
    let mut out = CheckOutcome::new();
    for (i, r) in spec.source.relations.iter().enumerate() {
        out.record(format!("phi(relation {i})"), rs_target.normal_form(&phi.apply(r)));
    }
    for (a, ar) in spec.source.quiver.arrows().iter().enumerate() {
        let lhs = phi.apply(&spec.source.d_of(a));
        let rhs = spec.target.d(&phi.arrow_images[a]);
        out.record(
            format!("phi(d {0}) - d(phi {0})", ar.name),
            rs_target.normal_form(&(&lhs - &rhs)),
        );
    }
    Ok(out)
}

/// `W_k`: relations `ab = (x1-1)e0`, `ba = (x1-1)e1`, `α² = β² = 0`, with
/// `dα = (x2+1)e0` and `dβ = (x1^k+x2)e1`.
///
/// Central variables are declared as `[x2, x1]` so that the variable
/// eliminated at vertex 0 ranks lowest in the rewriting order; the other
/// order produces an infinite Gröbner basis.
pub fn build_wk(k: u32, field: Field) -> Result<DgPresentation, DgError> {
    if k == 0 {
        return Err(DgError::InvalidK);
    }
    let q = two_vertex_quiver(&["x2", "x1"]);
    DgPresentation::from_strings(
        &format!("W_{k}"),
        q,
        field,
        &["a*b - (x1-1)*e0", "b*a - (x1-1)*e1", "alpha^2", "beta^2"],
        &[
            ("alpha", "(x2+1)*e0"),
            ("beta", &format!("(x1^{k}+x2)*e1")),
        ],
    )
}

/// `A_k`: relations `ab = x e0`, `ba = x e1`, `α² = β² = 0`, with
/// `dα = y e0` and `dβ = ((x+1)^k+y-1)e1`.
pub fn build_ak(k: u32, field: Field) -> Result<DgPresentation, DgError> {
    if k == 0 {
        return Err(DgError::InvalidK);
    }
    let q = two_vertex_quiver(&["y", "x"]);
    DgPresentation::from_strings(
        &format!("A_{k}"),
        q,
        field,
        &["a*b - x*e0", "b*a - x*e1", "alpha^2", "beta^2"],
        &[("alpha", "y*e0"), ("beta", &format!("((x+1)^{k}+y-1)*e1"))],
    )
}

fn two_vertex_quiver(central: &[&str]) -> Arc<Quiver> {
    Quiver::new(
        &["0", "1"],
        &[
            ("a", "0", "1", 0),
            ("b", "1", "0", 0),
            ("alpha", "0", "0", -1),
            ("beta", "1", "1", -1),
        ],
        central,
    )
    .expect("fixed quiver")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub item: String,
    pub got: String,
    pub expected: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchReport {
    pub exact: bool,
    pub compared: usize,
    pub diffs: Vec<Mismatch>,
}

/// Substitutes central variables of `src` and compares relations (by
/// position) and differentials (by generator) with `dst` term by term.
pub fn compare_substituted(
    src: &DgPresentation,
    dst: &DgPresentation,
    map: &BTreeMap<String, AlgebraElement>,
) -> Result<MatchReport, DgError> {
    let mut diffs = Vec::new();
    let mut compared = 0;
    let n = src.relations.len().max(dst.relations.len());
    for i in 0..n {
        compared += 1;
        let got = src
            .relations
            .get(i)
            .map(|r| r.substitute(&dst.quiver, map))
            .transpose()?;
        let expected = dst.relations.get(i);
        if got.as_ref() != expected {
            diffs.push(Mismatch {
                item: format!("relation {i}"),
                got: got.map_or("-".into(), |g| g.to_string()),
                expected: expected.map_or("-".into(), |e| e.to_string()),
            });
        }
    }
    let mut names: Vec<&String> = src.differentials.keys().chain(dst.differentials.keys()).collect();
    names.sort();
    names.dedup();
    let zero = AlgebraElement::zero(&dst.quiver, dst.field);
    for g in names {
        compared += 1;
        let got = match src.differentials.get(g) {
            Some(d) => d.substitute(&dst.quiver, map)?,
            None => zero.clone(),
        };
        let expected = dst.differentials.get(g).cloned().unwrap_or_else(|| zero.clone());
        if got != expected {
            diffs.push(Mismatch {
                item: format!("d({g})"),
                got: got.to_string(),
                expected: expected.to_string(),
            });
        }
    }
    Ok(MatchReport {
        exact: diffs.is_empty(),
        compared,
        diffs,
    })
}

/// The map `x ↦ x1 - 1`, `y ↦ x2 + 1` from `A_k` to `W_k`.
pub fn ak_to_wk_map(wk: &DgPresentation) -> BTreeMap<String, AlgebraElement> {
    let q = &wk.quiver;
    let f = wk.field;
    [
        ("x".to_string(), AlgebraElement::parse(q, f, "x1 - 1").expect("fixed")),
        ("y".to_string(), AlgebraElement::parse(q, f, "x2 + 1").expect("fixed")),
    ]
    .into_iter()
    .collect()
}

pub fn change_of_variables_ak_to_wk(k: u32, field: Field) -> Result<MatchReport, DgError> {
    let ak = build_ak(k, field)?;
    let wk = build_wk(k, field)?;
    compare_substituted(&ak, &wk, &ak_to_wk_map(&wk))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn el(p: &DgPresentation, s: &str) -> AlgebraElement {
        AlgebraElement::parse(&p.quiver, p.field, s).unwrap()
    }

    #[test]
    fn wk_shape() {
        let w = build_wk(1, q()).unwrap();
        assert_eq!(w.differentials["beta"], el(&w, "(x1+x2)*e1"));
        let degs: Vec<i64> = w.relations.iter().map(|r| r.degree().unwrap()).collect();
        assert_eq!(degs, vec![0, 0, -2, -2]);
        assert!(build_wk(0, q()).is_err());
    }

    #[test]
    fn ak_shape() {
        let a = build_ak(2, q()).unwrap();
        assert_eq!(a.differentials["beta"], el(&a, "(x^2+2*x+y)*e1"));
        for k in 1..4 {
            let a = build_ak(k, q()).unwrap();
            assert_eq!(a.differentials["alpha"], el(&a, "y*e0"));
        }
    }

    #[test]
    fn leibniz_examples() {
        let w = build_wk(3, q()).unwrap();
        assert!(w.d(&el(&w, "e0")).is_zero());
        assert_eq!(w.d(&el(&w, "beta*b")), el(&w, "(x1^3+x2)*b"));
        assert_eq!(w.d(&el(&w, "alpha*a")), el(&w, "(x2+1)*a"));
        // d(α²) = (x2+1)α - α(x2+1), zero in the path algebra already.
        assert!(w.d(&el(&w, "alpha^2")).is_zero());
        assert_eq!(
            w.d(&el(&w, "beta*b*alpha")),
            el(&w, "(x1^3+x2)*b*alpha - (x2+1)*beta*b")
        );
    }

    #[test]
    fn signs_for_two_odd_factors() {
        let w = build_wk(2, q()).unwrap();
        // d(α·a·β·b) = dα·aβb - α·a·dβ·b
        let lhs = w.d(&el(&w, "alpha*a*beta*b"));
        let rhs = el(&w, "(x2+1)*a*beta*b - (x1^2+x2)*alpha*a*b");
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_squared_and_mutations() {
        for k in 1..=3 {
            let w = build_wk(k, q()).unwrap();
            let rs = w.rewrite_system(4 * k as usize + 8).unwrap();
            assert!(check_d_squared(&w, &rs).passed());
        }
        let mut w = build_wk(1, q()).unwrap();
        w.differentials.insert("beta".into(), el(&w, "x1*e0"));
        assert!(matches!(w.validate(), Err(DgError::WrongEndpoints { .. })));
        let rs = build_wk(1, q()).unwrap().rewrite_system(12).unwrap();
        assert_eq!(check_d_squared(&w, &rs).status, Status::Fail);
    }

    #[test]
    fn change_of_variables() {
        for k in 1..=4 {
            assert!(change_of_variables_ak_to_wk(k, q()).unwrap().exact);
        }
        let ak = build_ak(3, q()).unwrap();
        let wk = build_wk(3, q()).unwrap();
        let mut map = ak_to_wk_map(&wk);
        map.insert("y".into(), el(&wk, "x2"));
        let rep = compare_substituted(&ak, &wk, &map).unwrap();
        assert!(!rep.exact);
        assert!(rep.diffs.iter().any(|d| d.item == "d(alpha)"));
        let a2 = build_ak(2, q()).unwrap();
        let w2 = build_wk(2, q()).unwrap();
        assert_eq!(
            a2.differentials["beta"].substitute(&w2.quiver, &ak_to_wk_map(&w2)).unwrap(),
            el(&w2, "(x1^2+x2)*e1")
        );
    }

    #[test]
    fn identity_morphism() {
        let w = build_wk(2, q()).unwrap();
        let assignment = w
            .generator_names()
            .into_iter()
            .map(|g| (g.clone(), el(&w, &g)))
            .collect();
        let spec = DgMorphismSpec {
            source: w.clone(),
            target: w.clone(),
            assignment,
        };
        let rs = w.rewrite_system(16).unwrap();
        assert!(check_dg_morphism(&spec, &rs).unwrap().passed());
    }
}
