//! The fixed check suite tying together `W_k`, `A_k` and `G_k` and their
//! degree-zero cohomology.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::Field;
use crate::dg::{build_ak, build_wk, change_of_variables_ak_to_wk, check_d_squared, check_dg_morphism, CheckOutcome, DgError, DgPresentation};
use crate::ginzburg::{build_gk_explicit, discrepancy_report, phi_gk_to_ak, GinzburgError};
use crate::h0::{h0, homomorphism_from_strings, induced_map, H0Algebra, H0Error, H0Outcome};
use crate::report::{Report, Status};
use crate::rewriting::{RewriteError, RewriteSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("k must be at least 1")]
    InvalidK,
    #[error("suite needs a field, got {0}")]
    NotAField(Field),
    #[error(transparent)]
    Dg(#[from] DgError),
    #[error(transparent)]
    Ginzburg(#[from] GinzburgError),
    #[error(transparent)]
    H0(#[from] H0Error),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// Check names in the order the suite runs them.
pub const CHECKS: &[&str] = &[
    "build",
    "d2.W",
    "d2.A",
    "d2.G",
    "phi.morphism",
    "change-of-variables",
    "h0.W",
    "h0.A",
    "h0.G",
    "h0.dims-equal",
    "h0.phi-iso",
    "identity.x1",
    "order.x1",
    "cyclic-derivative.discrepancy",
];

pub fn default_bound(k: u32) -> usize {
    4 * k as usize + 8
}

/// Rewrite systems keyed by the canonical listing of their generators and
/// the bound.
#[derive(Default)]
pub struct RewriteCache {
    systems: HashMap<(String, usize), Arc<RewriteSystem>>,
    hits: usize,
}

impl RewriteCache {
    pub fn relations_system(&mut self, p: &DgPresentation, bound: usize) -> Result<Arc<RewriteSystem>, FamilyError> {
        let key = (presentation_key(p), bound);
        if let Some(rs) = self.systems.get(&key) {
            self.hits += 1;
            return Ok(rs.clone());
        }
        let rs = Arc::new(p.rewrite_system(bound)?);
        self.systems.insert(key, rs.clone());
        Ok(rs)
    }

    pub fn hits(&self) -> usize {
        self.hits
    }
}

fn presentation_key(p: &DgPresentation) -> String {
    let q = &p.quiver;
    let arrows: Vec<String> = q
        .arrows()
        .iter()
        .map(|a| format!("{}:{}->{}@{}", a.name, a.src, a.dst, a.deg))
        .collect();
    let rels: Vec<String> = p.relations.iter().map(|r| r.to_string()).collect();
    format!(
        "{}|{}|{}|{}|{}",
        p.field.spec(),
        q.vertices().join(","),
        arrows.join(","),
        q.central_vars().join(","),
        rels.join(";")
    )
}

fn outcome_check(report: &mut Report, name: &str, o: &CheckOutcome) {
    let detail = if o.passed() {
        json!({ "checked": o.checked })
    } else {
        json!({ "checked": o.checked, "violations": o.violations, "inconclusive": o.inconclusive })
    };
    report.check(name, o.status, detail);
}

fn h0_check(report: &mut Report, name: &str, out: &H0Outcome) -> Option<usize> {
    match out {
        H0Outcome::Finite(a) => {
            report.check(name, Status::Pass, json!({ "dim": a.dim() }));
            Some(a.dim())
        }
        H0Outcome::InconclusiveAtBound { found, longest, complete } => {
            report.check(
                name,
                Status::Inconclusive,
                json!({ "found": found, "longest": longest, "complete_below_bound": complete }),
            );
            None
        }
    }
}

/// Runs every check in [`CHECKS`] for one `(k, field)`.
pub fn run_family_suite(k: u32, field: Field, bound: Option<usize>) -> Result<Report, FamilyError> {
    if k == 0 {
        return Err(FamilyError::InvalidK);
    }
    if !field.is_field() {
        return Err(FamilyError::NotAField(field));
    }
    let bound = bound.unwrap_or_else(|| default_bound(k));
    let mut report = Report::new("suite", json!({ "k": k, "field": field.spec(), "bound": bound }));
    let mut cache = RewriteCache::default();

    let w = build_wk(k, field)?;
    let a = build_ak(k, field)?;
    let g = build_gk_explicit(k, field)?;
    report.check(
        "build",
        Status::Pass,
        json!({ "W": w.generator_names(), "A": a.generator_names(), "G": g.generator_names() }),
    );

    for (name, p) in [("d2.W", &w), ("d2.A", &a), ("d2.G", &g)] {
        let rs = cache.relations_system(p, bound)?;
        outcome_check(&mut report, name, &check_d_squared(p, &rs));
    }

    let phi = phi_gk_to_ak(&g, &a)?;
    let rs_a = cache.relations_system(&a, bound)?;
    outcome_check(&mut report, "phi.morphism", &check_dg_morphism(&phi, &rs_a)?);

    let cov = change_of_variables_ak_to_wk(k, field)?;
    report.check(
        "change-of-variables",
        Status::from_bool(cov.exact),
        json!({ "compared": cov.compared, "diffs": cov.diffs }),
    );

    let hw = h0(&w, bound)?;
    let ha = h0(&a, bound)?;
    let hg = h0(&g, bound)?;
    let dw = h0_check(&mut report, "h0.W", &hw);
    let da = h0_check(&mut report, "h0.A", &ha);
    let dg = h0_check(&mut report, "h0.G", &hg);
    report.payload("h0_dims", json!({ "W": dw, "A": da, "G": dg }));

    match (dw, da, dg) {
        (Some(x), Some(y), Some(z)) => {
            report.check("h0.dims-equal", Status::from_bool(x == y && y == z), json!([x, y, z]))
        }
        _ => report.check("h0.dims-equal", Status::Inconclusive, Value::Null),
    }

    let finite = |o: &H0Outcome| -> Option<H0Algebra> {
        match o {
            H0Outcome::Finite(a) => Some((**a).clone()),
            _ => None,
        }
    };
    match (finite(&hg), finite(&ha)) {
        (Some(src), Some(dst)) => {
            let images = [("e", "a"), ("f", "b")]
                .map(|(s, t)| (s.to_string(), t.to_string()))
                .into();
            let hom = homomorphism_from_strings(&src.quiver, &dst.quiver, field, &images)?;
            let m = induced_map(&src, &dst, &hom)?;
            report.check("h0.phi-iso", Status::from_bool(m.is_isomorphism()), serde_json::to_value(&m).expect("serializes"));
        }
        _ => report.check("h0.phi-iso", Status::Inconclusive, Value::Null),
    }

    match finite(&hw) {
        Some(hw) => {
            let expr = format!("(x1 - e0 - e1)*(x1^{k} - e0 - e1)");
            let holds = hw.verify_identity(&expr)?;
            report.check("identity.x1", Status::from_bool(holds), json!(expr));
            if field == Field::Rationals {
                let ss = hw.algebra.center_semisimplification();
                let x1 = ss.projection.apply(hw.algebra.generator("x1").expect("central generator"));
                let order = ss.algebra.element_order(&x1, 4 * k as u64 + 8)?;
                report.payload("order_x1", json!(order));
                report.check(
                    "order.x1",
                    Status::from_bool(order == Some(k as u64)),
                    json!({ "order": order, "quotient_dim": ss.algebra.dim() }),
                );
            }
        }
        None => {
            report.check("identity.x1", Status::Inconclusive, Value::Null);
            if field == Field::Rationals {
                report.check("order.x1", Status::Inconclusive, Value::Null);
            }
        }
    }

    let disc = discrepancy_report(k, field)?;
    // In positive characteristic the `(j+1)` factors can vanish or become 1,
    // so only the pattern and the orbit agreement are required.
    let ok = disc.multiplicity_pattern_holds && disc.orbit_matches_explicit;
    report.check(
        "cyclic-derivative.discrepancy",
        Status::from_bool(ok),
        json!({
            "modes_differ": disc.modes_differ,
            "multiplicity_pattern_holds": disc.multiplicity_pattern_holds,
            "orbit_matches_explicit": disc.orbit_matches_explicit,
        }),
    );
    report.payload("discrepancy", serde_json::to_value(&disc).expect("serializes"));
    report.payload("rewrite_cache_hits", json!(cache.hits()));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_k1_over_q() {
        let r = run_family_suite(1, Field::Rationals, None).unwrap();
        let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, CHECKS);
        assert!(r.checks.iter().all(|c| c.status == Status::Pass), "{}", r.to_text());
        let terms = r.payloads["discrepancy"]["terms"].as_array().unwrap();
        assert!(terms.iter().all(|t| t["ratio"] == "2"));
        assert_eq!(r.payloads["h0_dims"]["W"], 6);
        assert_eq!(r.payloads["discrepancy"]["modes_differ"], true);
        assert!(r.payloads["rewrite_cache_hits"].as_u64().unwrap() >= 1);
    }

    #[test]
    fn suite_k3_over_f3() {
        let f3 = Field::prime(3).unwrap();
        let r = run_family_suite(3, f3, None).unwrap();
        assert!(!r.checks.iter().any(|c| c.name == "order.x1"));
        for c in &r.checks {
            assert_eq!(c.status, Status::Pass, "{}", c.name);
        }
    }

    #[test]
    fn deterministic_and_validated() {
        let a = run_family_suite(2, Field::Rationals, None).unwrap().to_json();
        let b = run_family_suite(2, Field::Rationals, None).unwrap().to_json();
        assert_eq!(a, b);
        assert_eq!(run_family_suite(0, Field::Rationals, None).unwrap_err(), FamilyError::InvalidK);
        assert!(run_family_suite(1, Field::Integers, None).is_err());
    }
}
