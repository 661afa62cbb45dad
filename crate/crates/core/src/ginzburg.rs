//! Quivers with potential, cyclic derivatives and Ginzburg dg algebras.
//!
//! For an arrow `g: v → w` the enhanced quiver adds `g*: w → v` (named
//! `<g>star`) in degree -1 and a loop `h<v>` in degree -2 at every vertex,
//! with `dg = 0`, `dg* = ∂_g W` and `dh_v = Σ_{src g = v} g g* − Σ_{dst g = v} g* g`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::arith::Field;
use crate::dg::{DgError, DgMorphismSpec, DgPresentation};
use crate::path_algebra::{AlgebraElement, Monomial, Path, PathAlgebraError, Quiver};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GinzburgError {
    #[error("k must be at least 1")]
    InvalidK,
    #[error("`{0}` is not an arrow")]
    NotAnArrow(String),
    #[error("potential term `{0}` is not a cycle")]
    NotACycle(String),
    #[error("potential term `{0}` involves central variables")]
    CentralInPotential(String),
    #[error("potential is not of degree 0")]
    NotDegreeZero,
    #[error("quiver has an arrow `{0}` of non-zero degree")]
    NotDegreeZeroQuiver(String),
    #[error("override for `{gen}` is invalid: {reason}")]
    BadOverride { gen: String, reason: String },
    #[error(transparent)]
    PathAlgebra(#[from] PathAlgebraError),
    #[error(transparent)]
    Dg(#[from] DgError),
}

/// A linear combination of cycles in degree-0 arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential {
    element: AlgebraElement,
}

impl Potential {
    pub fn new(element: AlgebraElement) -> Result<Self, GinzburgError> {
        for (m, p) in element.terms().keys() {
            if !m.is_one() {
                return Err(GinzburgError::CentralInPotential(element.to_string()));
            }
            if !p.is_cycle() {
                let t = AlgebraElement::term(element.quiver(), element.field(), element.field().one(), m.clone(), p.clone());
                return Err(GinzburgError::NotACycle(t.to_string()));
            }
        }
        if !element.is_zero() && element.degree() != Some(0) {
            return Err(GinzburgError::NotDegreeZero);
        }
        Ok(Potential { element })
    }

    pub fn element(&self) -> &AlgebraElement {
        &self.element
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeMode {
    /// Every occurrence of the arrow contributes.
    Literal,
    /// Occurrences related by a rotation symmetry of the word count once.
    CyclicOrbit,
}

/// Smallest `d > 0` with the word invariant under rotation by `d`.
fn rotation_period(w: &[usize]) -> usize {
    let n = w.len();
    (1..=n)
        .find(|&d| n.is_multiple_of(d) && (0..n).all(|i| w[i] == w[(i + d) % n]))
        .unwrap_or(n)
}

/// `Σ suffix·prefix` over the occurrences `W = prefix · g · suffix`.
pub fn cyclic_derivative(
    w: &Potential,
    g: &str,
    mode: DerivativeMode,
) -> Result<AlgebraElement, GinzburgError> {
    let el = &w.element;
    let q = el.quiver();
    let ga = q.arrow_index(g).ok_or_else(|| GinzburgError::NotAnArrow(g.to_string()))?;
    let field = el.field();
    let mut out = AlgebraElement::zero(q, field);
    let n_c = q.central_vars().len();
    for ((_, p), c) in el.terms() {
        let word = &p.arrows;
        let limit = match mode {
            DerivativeMode::Literal => word.len(),
            DerivativeMode::CyclicOrbit => rotation_period(word),
        };
        for i in 0..limit {
            if word[i] != ga {
                continue;
            }
            let mut rotated: Vec<usize> = word[i + 1..].to_vec();
            rotated.extend_from_slice(&word[..i]);
            let path = if rotated.is_empty() {
                Path::trivial(q.arrow(ga).dst)
            } else {
                Path::from_arrows(q, &rotated).expect("rotation of a cycle composes")
            };
            out.add_term(Monomial::one(n_c), path, c.clone());
        }
    }
    Ok(out)
}

/// The 2-cycle quiver `e: 0 → 1`, `f: 1 → 0`.
pub fn two_cycle_quiver() -> Arc<Quiver> {
    Quiver::new(&["0", "1"], &[("e", "0", "1", 0), ("f", "1", "0", 0)], &[]).expect("fixed quiver")
}

/// `w_k = efe(1 + (fe+1) + ... + (fe+1)^{k-1})f`, fully expanded.
pub fn build_potential_wk(k: u32, field: Field) -> Result<Potential, GinzburgError> {
    if k == 0 {
        return Err(GinzburgError::InvalidK);
    }
    let q = two_cycle_quiver();
    let el = |s: &str| AlgebraElement::parse(&q, field, s).expect("fixed expression");
    let fe1 = el("f*e + e1");
    let mut sum = AlgebraElement::zero(&q, field);
    let mut power = el("e1");
    for _ in 0..k {
        sum = &sum + &power;
        power = &power * &fe1;
    }
    let w = &(&el("e*f*e") * &sum) * &el("f");
    Potential::new(w)
}

/// The graded quiver with `g`, `g*` and `h_v`.
pub fn enhance_quiver(q: &Quiver) -> Result<Arc<Quiver>, GinzburgError> {
    if let Some(a) = q.arrows().iter().find(|a| a.deg != 0) {
        return Err(GinzburgError::NotDegreeZeroQuiver(a.name.clone()));
    }
    let vs: Vec<&str> = q.vertices().iter().map(String::as_str).collect();
    let mut arrows: Vec<(String, &str, &str, i64)> = Vec::new();
    for a in q.arrows() {
        arrows.push((a.name.clone(), vs[a.src], vs[a.dst], 0));
    }
    for a in q.arrows() {
        arrows.push((format!("{}star", a.name), vs[a.dst], vs[a.src], -1));
    }
    for v in &vs {
        arrows.push((format!("h{v}"), v, v, -2));
    }
    let refs: Vec<(&str, &str, &str, i64)> =
        arrows.iter().map(|(n, s, t, d)| (n.as_str(), *s, *t, *d)).collect();
    let cs: Vec<&str> = q.central_vars().iter().map(String::as_str).collect();
    Ok(Quiver::new(&vs, &refs, &cs)?)
}

/// How the differentials of the starred arrows are chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiffMode {
    CyclicDerivative(DerivativeMode),
    /// Given explicitly, as elements of the base quiver, for each `g*`.
    Explicit(BTreeMap<String, AlgebraElement>),
}

pub fn ginzburg_dga(
    q: &Arc<Quiver>,
    w: &Potential,
    mode: &DiffMode,
    name: &str,
) -> Result<DgPresentation, GinzburgError> {
    let field = w.element.field();
    let enhanced = enhance_quiver(q)?;
    let mut diffs = BTreeMap::new();
    for a in q.arrows() {
        let star = format!("{}star", a.name);
        let base = match mode {
            DiffMode::CyclicDerivative(m) => cyclic_derivative(w, &a.name, *m)?,
            DiffMode::Explicit(over) => {
                let d = over.get(&star).cloned().ok_or_else(|| GinzburgError::BadOverride {
                    gen: star.clone(),
                    reason: "missing".into(),
                })?;
                if !d.is_zero() && d.degree() != Some(0) {
                    return Err(GinzburgError::BadOverride {
                        gen: star,
                        reason: "degree must be 0".into(),
                    });
                }
                if d.endpoints().iter().any(|&e| e != (a.dst, a.src)) {
                    return Err(GinzburgError::BadOverride {
                        gen: star,
                        reason: format!("endpoints must be ({}, {})", a.dst, a.src),
                    });
                }
                d
            }
        };
        let moved = base
            .transport(&enhanced)
            .expect("base quiver embeds in its enhancement");
        diffs.insert(star, moved);
    }
    for (v, vname) in q.vertices().iter().enumerate() {
        let mut dh = AlgebraElement::zero(&enhanced, field);
        for a in q.arrows() {
            let g = AlgebraElement::named(&enhanced, field, &a.name).expect("arrow");
            let gs = AlgebraElement::named(&enhanced, field, &format!("{}star", a.name)).expect("arrow");
            if a.src == v {
                dh = &dh + &(&g * &gs);
            }
            if a.dst == v {
                dh = &dh - &(&gs * &g);
            }
        }
        diffs.insert(format!("h{vname}"), dh);
    }
    let p = DgPresentation {
        name: name.to_string(),
        quiver: enhanced,
        field,
        relations: Vec::new(),
        differentials: diffs,
    };
    p.validate()?;
    Ok(p)
}

/// The explicit differentials `de* = ((fe+1)^k − 1)f`, `df* = e((fe+1)^k − 1)`.
pub fn explicit_gk_overrides(k: u32, field: Field) -> BTreeMap<String, AlgebraElement> {
    let q = two_cycle_quiver();
    let el = |s: &str| AlgebraElement::parse(&q, field, s).expect("fixed expression");
    let fe = &el("f*e + e1").pow(k) - &el("e1");
    [
        ("estar".to_string(), &fe * &el("f")),
        ("fstar".to_string(), &el("e") * &fe),
    ]
    .into_iter()
    .collect()
}

/// `G_k` over the 2-cycle quiver with potential `w_k`.
pub fn build_gk(k: u32, field: Field, mode: &DiffMode) -> Result<DgPresentation, GinzburgError> {
    let w = build_potential_wk(k, field)?;
    ginzburg_dga(&two_cycle_quiver(), &w, mode, &format!("G_{k}"))
}

pub fn build_gk_explicit(k: u32, field: Field) -> Result<DgPresentation, GinzburgError> {
    build_gk(k, field, &DiffMode::Explicit(explicit_gk_overrides(k, field)))
}

/// `φ: G_k → A_k`: `e ↦ a`, `f ↦ b`, `e* ↦ βb − bα`, `f* ↦ aβ − αa`, `h_v ↦ 0`.
pub fn phi_gk_to_ak(gk: &DgPresentation, ak: &DgPresentation) -> Result<DgMorphismSpec, GinzburgError> {
    let q = &ak.quiver;
    let f = ak.field;
    let el = |s: &str| AlgebraElement::parse(q, f, s);
    let assignment: BTreeMap<String, AlgebraElement> = [
        ("e", el("a")?),
        ("f", el("b")?),
        ("estar", el("beta*b - b*alpha")?),
        ("fstar", el("a*beta - alpha*a")?),
        ("h0", el("0")?),
        ("h1", el("0")?),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    Ok(DgMorphismSpec {
        source: gk.clone(),
        target: ak.clone(),
        assignment,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscrepancyTerm {
    pub generator: String,
    pub path: String,
    pub literal: String,
    pub explicit: String,
    /// literal / explicit, when both are non-zero.
    pub ratio: Option<String>,
}

/// Comparison of the literal cyclic derivative of `w_k` with the explicit
/// differentials of `G_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscrepancyReport {
    pub k: u32,
    pub modes_differ: bool,
    /// Every term of `(fe)^j f` (resp. `e(fe)^j`) has ratio `j+1`.
    pub multiplicity_pattern_holds: bool,
    pub orbit_matches_explicit: bool,
    pub terms: Vec<DiscrepancyTerm>,
}

pub fn discrepancy_report(k: u32, field: Field) -> Result<DiscrepancyReport, GinzburgError> {
    let w = build_potential_wk(k, field)?;
    let explicit = explicit_gk_overrides(k, field);
    let mut terms = Vec::new();
    let mut pattern = true;
    let mut differ = false;
    let mut orbit_ok = true;
    for (arrow, star) in [("e", "estar"), ("f", "fstar")] {
        let lit = cyclic_derivative(&w, arrow, DerivativeMode::Literal)?;
        let orb = cyclic_derivative(&w, arrow, DerivativeMode::CyclicOrbit)?;
        let exp = &explicit[star];
        differ |= lit != *exp;
        orbit_ok &= orb == *exp;
        let mut keys: Vec<_> = lit.terms().keys().chain(exp.terms().keys()).cloned().collect();
        keys.sort();
        keys.dedup();
        for key in keys {
            let l = lit.terms().get(&key).cloned().unwrap_or_else(|| field.zero());
            let x = exp.terms().get(&key).cloned().unwrap_or_else(|| field.zero());
            // Path length is 2j+1 for the term with binomial C(k, j).
            let j = (key.1.len() as i64 - 1) / 2;
            let expected = &x * &field.from_i64(j + 1);
            pattern &= l == expected;
            let ratio = (!l.is_zero() && !x.is_zero()).then(|| l.div(&x).map(|r| r.to_string()).unwrap_or_default());
            let path = AlgebraElement::term(lit.quiver(), field, field.one(), key.0.clone(), key.1.clone());
            terms.push(DiscrepancyTerm {
                generator: star.to_string(),
                path: path.to_string(),
                literal: l.to_string(),
                explicit: x.to_string(),
                ratio,
            });
        }
    }
    Ok(DiscrepancyReport {
        k,
        modes_differ: differ,
        multiplicity_pattern_holds: pattern,
        orbit_matches_explicit: orbit_ok,
        terms,
    })
}

/// `Σ_{j=1}^{k} C(k, j) (ef)^{j+1}`, the closed form of `w_k`.
pub fn binomial_form_wk(k: u32, field: Field) -> AlgebraElement {
    let q = two_cycle_quiver();
    let ef = AlgebraElement::parse(&q, field, "e*f").expect("fixed");
    let mut out = AlgebraElement::zero(&q, field);
    let mut binom = BigInt::from(1);
    for j in 1..=k {
        binom = binom * BigInt::from(k - j + 1) / BigInt::from(j);
        out = &out + &ef.pow(j + 1).scale(&field.from_bigint(&binom));
    }
    out
}
