//! Rule engine for candidate prime decompositions of exact Lagrangians in the
//! plumbings `W_k` and of integral surgeries on knots.
//!
//! Geometric theorems enter as named axioms with citation tags; the engine
//! only evaluates the case analysis and the homology bookkeeping.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{prime_factors, smith_normal_form, IntMatrix};
use crate::groups::{abelianization, Presentation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GateError {
    #[error("k must be at least 1")]
    InvalidK,
    #[error("malformed summand `{0}`")]
    Malformed(String),
    #[error("invalid summand `{text}`: {reason}")]
    InvalidSummand { text: String, reason: String },
    #[error("candidate decomposition is empty")]
    EmptyCandidate,
    #[error("unknown knot specification `{0}`")]
    UnknownKnots(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Summand {
    Lens { order: u64 },
    Prism { m: u64, n: u64 },
    TypeT { m: u64 },
    TypeO { m: u64 },
    TypeI { m: u64 },
    S1xS2,
    Aspherical,
    Other { name: String },
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Summand::Lens { order } => write!(f, "lens({order})"),
            Summand::Prism { m, n } => write!(f, "prism({m},{n})"),
            Summand::TypeT { m } => write!(f, "typeT({m})"),
            Summand::TypeO { m } => write!(f, "typeO({m})"),
            Summand::TypeI { m } => write!(f, "typeI({m})"),
            Summand::S1xS2 => write!(f, "S1xS2"),
            Summand::Aspherical => write!(f, "aspherical"),
            Summand::Other { name } => write!(f, "other({name})"),
        }
    }
}

impl Summand {
    /// Parses `lens(d)`, `prism(m,n)`, `typeT(m)`, `typeO(m)`, `typeI(m)`,
    /// `S1xS2`, `aspherical` or `other(name)`.
    pub fn parse(text: &str) -> Result<Self, GateError> {
        let t = text.trim();
        let malformed = || GateError::Malformed(t.to_string());
        let invalid = |reason: &str| GateError::InvalidSummand {
            text: t.to_string(),
            reason: reason.to_string(),
        };
        match t {
            "S1xS2" => return Ok(Summand::S1xS2),
            "aspherical" => return Ok(Summand::Aspherical),
            _ => {}
        }
        let (head, args) = t
            .strip_suffix(')')
            .and_then(|s| s.split_once('('))
            .ok_or_else(malformed)?;
        if head == "other" {
            return Ok(Summand::Other {
                name: args.trim().to_string(),
            });
        }
        let nums: Vec<u64> = args
            .split(',')
            .map(|a| a.trim().parse::<u64>().map_err(|_| malformed()))
            .collect::<Result<_, _>>()?;
        let one = |nums: &[u64]| -> Result<u64, GateError> {
            match nums {
                [a] => Ok(*a),
                _ => Err(malformed()),
            }
        };
        let s = match head {
            "lens" => Summand::Lens { order: one(&nums)? },
            "prism" => match nums[..] {
                [m, n] => Summand::Prism { m, n },
                _ => return Err(malformed()),
            },
            "typeT" => Summand::TypeT { m: one(&nums)? },
            "typeO" => Summand::TypeO { m: one(&nums)? },
            "typeI" => Summand::TypeI { m: one(&nums)? },
            _ => return Err(malformed()),
        };
        match &s {
            Summand::Lens { order } if *order < 2 => Err(invalid("lens order must be at least 2")),
            Summand::Prism { m, n } if *m < 1 || *n < 2 || m.gcd(n) != 1 => {
                Err(invalid("prism needs m >= 1, n >= 2 and gcd(m, n) = 1"))
            }
            Summand::TypeT { m } | Summand::TypeO { m } if *m < 1 || m.gcd(&6) != 1 => {
                Err(invalid("type T and O need m >= 1 and gcd(m, 6) = 1"))
            }
            Summand::TypeI { m } if *m < 1 || m.gcd(&30) != 1 => {
                Err(invalid("type I needs m >= 1 and gcd(m, 30) = 1"))
            }
            _ => Ok(s),
        }
    }

    /// Splits on `#` or on commas outside parentheses.
    pub fn parse_list(text: &str) -> Result<Vec<Self>, GateError> {
        let mut parts = Vec::new();
        let mut depth = 0i32;
        let mut cur = String::new();
        for ch in text.chars() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            if (ch == '#' || ch == ',') && depth == 0 {
                parts.push(std::mem::take(&mut cur));
            } else {
                cur.push(ch);
            }
        }
        parts.push(cur);
        if parts.iter().all(|p| p.trim().is_empty()) {
            return Ok(Vec::new());
        }
        parts.iter().map(|p| Summand::parse(p)).collect()
    }

    /// Invariant factors of `H_1`, `0` standing for `Z`. `None` for summands
    /// whose homology the engine does not model.
    pub fn h1(&self) -> Option<Vec<BigInt>> {
        match self {
            Summand::Lens { order } => Some(vec![BigInt::from(*order)]),
            Summand::Prism { m, n } => {
                let p = Presentation::prism(*m, *n).ok()?;
                Some(
                    abelianization(&p)
                        .factors
                        .iter()
                        .map(|f| f.parse().expect("integer factor"))
                        .collect(),
                )
            }
            Summand::S1xS2 => Some(vec![BigInt::zero()]),
            _ => None,
        }
    }
}

/// Invariant factors of a direct sum of cyclic groups; `0` stands for `Z`.
pub fn direct_sum_factors(cyclic: &[BigInt]) -> Vec<BigInt> {
    let n = cyclic.len();
    if n == 0 {
        return Vec::new();
    }
    let mut m = IntMatrix::zeros(n, n);
    for (i, c) in cyclic.iter().enumerate() {
        m.set(i, i, c.clone());
    }
    let snf = smith_normal_form(&m);
    let mut out: Vec<BigInt> = snf
        .diagonal()
        .into_iter()
        .map(|d| if d < BigInt::zero() { -d } else { d })
        .filter(|d| !d.is_one())
        .collect();
    // Torsion factors first, free part last.
    out.sort_by_key(|d| d.is_zero());
    out
}

fn is_z_mod_k(factors: &[BigInt], k: u64) -> bool {
    if k == 1 {
        factors.is_empty()
    } else {
        factors == [BigInt::from(k)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Violated,
    Concluded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub rule: String,
    pub citation: String,
    pub outcome: Outcome,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GateVerdict {
    pub admissible: bool,
    pub trace: Vec<TraceEntry>,
}

impl GateVerdict {
    fn new() -> Self {
        GateVerdict {
            admissible: true,
            trace: Vec::new(),
        }
    }

    fn record(&mut self, rule: Rule, outcome: Outcome, message: String) -> bool {
        if outcome == Outcome::Violated {
            self.admissible = false;
        }
        self.trace.push(TraceEntry {
            rule: rule.id().to_string(),
            citation: rule.citation().to_string(),
            outcome,
            message,
        });
        outcome != Outcome::Violated
    }

    pub fn violated_rules(&self) -> Vec<&str> {
        self.trace
            .iter()
            .filter(|e| e.outcome == Outcome::Violated)
            .map(|e| e.rule.as_str())
            .collect()
    }

    pub fn last_message(&self) -> Option<&str> {
        self.trace.last().map(|e| e.message.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Aspherical,
    Toi,
    LensPrimes,
    PrismEven,
    S1xS2Allowed,
    Catalog,
    BothKnotted,
    HowieCount,
    HowieThree,
    LambdaNoS1xS2,
    LambdaH1,
    PrismAbelianization,
    GordonLuecke,
    FreeProductCenter,
    Kmos,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::Aspherical => "rule.aspherical.no-kpi1",
            Rule::Toi => "rule.toi.excluded",
            Rule::LensPrimes => "rule.lensprism.prime-divides-k",
            Rule::PrismEven => "rule.lensprism.prism-n-even",
            Rule::S1xS2Allowed => "rule.classification.s1xs2-allowed",
            Rule::Catalog => "rule.classification.catalog",
            Rule::BothKnotted => "rule.main.both-knotted",
            Rule::HowieCount => "rule.howie.summand-count",
            Rule::HowieThree => "rule.howie.three-summands",
            Rule::LambdaNoS1xS2 => "rule.lambda.no-s1xs2",
            Rule::LambdaH1 => "rule.lambda.h1-cyclic-order-k",
            Rule::PrismAbelianization => "rule.main.prism-abelianization",
            Rule::GordonLuecke => "rule.gordon-luecke.two-lens",
            Rule::FreeProductCenter => "rule.axiom.free-product-center",
            Rule::Kmos => "rule.kmos.forces-unknot",
        }
    }

    pub fn citation(self) -> &'static str {
        match self {
            Rule::Aspherical => "no aspherical prime summands in W_k",
            Rule::Toi => "no spherical summands of type T, O or I",
            Rule::LensPrimes => "lens summands: prime factors of the order divide k",
            Rule::PrismEven => "prism summands: dihedral quotient D_2n with n even",
            Rule::S1xS2Allowed => "classification of prime summands: S1xS2 allowed",
            Rule::Catalog => "classification of prime summands: catalog",
            Rule::BothKnotted => "both knots nontrivial: incompressible torus (Hedden-Kim-Mark-Park)",
            Rule::HowieCount => "Howie: integral surgery has at most three prime summands",
            Rule::HowieThree => "Howie: three summands force an integral homology sphere",
            Rule::LambdaNoS1xS2 => "surgery homology H^1 = Z_k excludes S1xS2",
            Rule::LambdaH1 => "surgery homology H_1 = Z_k",
            Rule::PrismAbelianization => "prism with n even has non-cyclic abelianization",
            Rule::GordonLuecke => "Gordon-Luecke: reducible integral surgery is a sum of two lens spaces",
            Rule::FreeProductCenter => "axiom: group algebra of Z_a * Z_b has trivial center",
            Rule::Kmos => "Kronheimer-Mrowka-Ozsvath-Szabo: lens space surgery characterizes the unknot",
        }
    }
}

/// Which of the two intersection knots are nontrivial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Knots {
    Kappa0,
    Kappa1,
    Both,
}

impl Knots {
    pub fn parse(s: &str) -> Result<Self, GateError> {
        match s {
            "kappa0" | "k0" => Ok(Knots::Kappa0),
            "kappa1" | "k1" => Ok(Knots::Kappa1),
            "both" => Ok(Knots::Both),
            _ => Err(GateError::UnknownKnots(s.to_string())),
        }
    }
}

/// Per-summand rules of the classification of prime summands. The trace
/// stops at the first violation.
pub fn classify_summand(s: &Summand, k: u64) -> Result<GateVerdict, GateError> {
    if k == 0 {
        return Err(GateError::InvalidK);
    }
    let mut v = GateVerdict::new();
    classify_into(&mut v, s, k);
    Ok(v)
}

fn classify_into(v: &mut GateVerdict, s: &Summand, k: u64) -> bool {
    let aspherical = matches!(s, Summand::Aspherical);
    if !v.record(
        Rule::Aspherical,
        if aspherical { Outcome::Violated } else { Outcome::Pass },
        if aspherical {
            format!("{s} is aspherical")
        } else {
            format!("{s} is not aspherical")
        },
    ) {
        return false;
    }
    let toi = matches!(s, Summand::TypeT { .. } | Summand::TypeO { .. } | Summand::TypeI { .. });
    if !v.record(
        Rule::Toi,
        if toi { Outcome::Violated } else { Outcome::Pass },
        if toi {
            format!("{s} is spherical of type T, O or I")
        } else {
            format!("{s} is not of type T, O or I")
        },
    ) {
        return false;
    }
    match s {
        Summand::Lens { order } => {
            let bad: Vec<u64> = prime_factors(*order).into_iter().filter(|p| !k.is_multiple_of(*p)).collect();
            let msg = if bad.is_empty() {
                format!("every prime factor of {order} divides {k}")
            } else {
                format!(
                    "prime factor(s) {} of {order} do not divide {k}",
                    bad.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
                )
            };
            v.record(
                Rule::LensPrimes,
                if bad.is_empty() { Outcome::Pass } else { Outcome::Violated },
                msg,
            )
        }
        Summand::Prism { n, .. } => {
            let even = n % 2 == 0;
            v.record(
                Rule::PrismEven,
                if even { Outcome::Pass } else { Outcome::Violated },
                format!("dihedral quotient D_{} has n = {n} {}", 2 * n, if even { "even" } else { "odd" }),
            )
        }
        Summand::S1xS2 => v.record(Rule::S1xS2Allowed, Outcome::Pass, "S1xS2 is an allowed summand".into()),
        Summand::Other { name } => v.record(
            Rule::Catalog,
            Outcome::Violated,
            format!("`{name}` is not in the catalog of allowed summands"),
        ),
        _ => true,
    }
}

/// Case analysis for integral surgery with slope `k` on the knotted
/// component(s), applied to a candidate prime decomposition.
pub fn surgery_gate(k: u64, knots: Knots, candidate: &[Summand]) -> Result<GateVerdict, GateError> {
    if k == 0 {
        return Err(GateError::InvalidK);
    }
    if candidate.is_empty() {
        return Err(GateError::EmptyCandidate);
    }
    let mut v = GateVerdict::new();
    let both = knots == Knots::Both;
    if !v.record(
        Rule::BothKnotted,
        if both { Outcome::Violated } else { Outcome::Pass },
        if both {
            "both knots nontrivial: surgery is irreducible with an incompressible torus".into()
        } else {
            "exactly one knot is nontrivial".into()
        },
    ) {
        return Ok(v);
    }
    let count = candidate.len();
    if !v.record(
        Rule::HowieCount,
        if count > 3 { Outcome::Violated } else { Outcome::Pass },
        format!("{count} summand(s)"),
    ) {
        return Ok(v);
    }
    if !v.record(
        Rule::HowieThree,
        if count == 3 { Outcome::Violated } else { Outcome::Pass },
        if count == 3 {
            "three summands require an integral homology sphere summand, excluded by type I exclusion".into()
        } else {
            "fewer than three summands".into()
        },
    ) {
        return Ok(v);
    }
    for s in candidate {
        if !classify_into(&mut v, s, k) {
            return Ok(v);
        }
    }
    let s1s2 = candidate.iter().any(|s| matches!(s, Summand::S1xS2));
    if !v.record(
        Rule::LambdaNoS1xS2,
        if s1s2 { Outcome::Violated } else { Outcome::Pass },
        if s1s2 {
            format!("H^1 = Z_{k} leaves no room for an S1xS2 summand")
        } else {
            "no S1xS2 summand".into()
        },
    ) {
        return Ok(v);
    }
    if let [Summand::Prism { .. }] = candidate {
        let h1 = candidate[0].h1().expect("prism homology");
        let cyclic = h1.len() <= 1;
        if !v.record(
            Rule::PrismAbelianization,
            if cyclic { Outcome::Pass } else { Outcome::Violated },
            format!("abelianization is {}", format_factors(&h1)),
        ) {
            return Ok(v);
        }
    }
    let parts: Vec<BigInt> = candidate
        .iter()
        .flat_map(|s| s.h1().expect("remaining summands have modelled homology"))
        .collect();
    let h1 = direct_sum_factors(&parts);
    if !v.record(
        Rule::LambdaH1,
        if is_z_mod_k(&h1, k) { Outcome::Pass } else { Outcome::Violated },
        format!("H_1 = {}, required Z_{k}", format_factors(&h1)),
    ) {
        return Ok(v);
    }
    if count == 2 {
        let lenses = candidate.iter().all(|s| matches!(s, Summand::Lens { .. }));
        if !v.record(
            Rule::GordonLuecke,
            if lenses { Outcome::Pass } else { Outcome::Violated },
            if lenses {
                "reducible surgery: connected sum of two lens spaces".into()
            } else {
                "a reducible surgery must be a sum of two lens spaces".into()
            },
        ) {
            return Ok(v);
        }
        v.record(
            Rule::FreeProductCenter,
            Outcome::Violated,
            "pi_1 is a free product Z_a * Z_b whose group algebra has trivial center, so it cannot host the central unit".into(),
        );
        return Ok(v);
    }
    v.record(Rule::Kmos, Outcome::Concluded, "forces unknot (KMOS axiom)".into());
    Ok(v)
}

pub fn format_factors(f: &[BigInt]) -> String {
    if f.is_empty() {
        return "0".into();
    }
    f.iter()
        .map(|d| if d.is_zero() { "Z".to_string() } else { format!("Z_{d}") })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lens(d: u64) -> Summand {
        Summand::Lens { order: d }
    }

    #[test]
    fn parsing() {
        assert_eq!(Summand::parse("lens(5)").unwrap(), lens(5));
        assert_eq!(Summand::parse(" prism(1, 2) ").unwrap(), Summand::Prism { m: 1, n: 2 });
        assert_eq!(Summand::parse("S1xS2").unwrap(), Summand::S1xS2);
        assert!(matches!(Summand::parse("lens(1)"), Err(GateError::InvalidSummand { .. })));
        assert!(matches!(Summand::parse("prism(2,4)"), Err(GateError::InvalidSummand { .. })));
        assert!(matches!(Summand::parse("typeT(3)"), Err(GateError::InvalidSummand { .. })));
        assert!(matches!(Summand::parse("typeI(5)"), Err(GateError::InvalidSummand { .. })));
        assert!(matches!(Summand::parse("lens"), Err(GateError::Malformed(_))));
        assert_eq!(Summand::parse_list("lens(2), lens(3)").unwrap(), vec![lens(2), lens(3)]);
        assert_eq!(Summand::parse_list("lens(2) # prism(1,2)").unwrap().len(), 2);
        for s in ["lens(7)", "prism(3,4)", "typeO(5)", "S1xS2", "other(x)"] {
            assert_eq!(Summand::parse(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn classify_examples() {
        assert!(classify_summand(&lens(5), 10).unwrap().admissible);
        let poincare = classify_summand(&Summand::TypeI { m: 1 }, 3).unwrap();
        assert_eq!(poincare.violated_rules(), vec!["rule.toi.excluded"]);
        let p13 = classify_summand(&Summand::Prism { m: 1, n: 3 }, 6).unwrap();
        assert_eq!(p13.violated_rules(), vec!["rule.lensprism.prism-n-even"]);
        assert!(classify_summand(&Summand::S1xS2, 4).unwrap().admissible);
        assert!(classify_summand(&lens(2), 0).is_err());
    }

    #[test]
    fn surgery_examples() {
        let v = surgery_gate(5, Knots::Kappa0, &[lens(5)]).unwrap();
        assert!(v.admissible);
        assert_eq!(v.last_message(), Some("forces unknot (KMOS axiom)"));
        let p = surgery_gate(4, Knots::Kappa0, &[Summand::Prism { m: 1, n: 2 }]).unwrap();
        assert_eq!(p.violated_rules(), vec!["rule.main.prism-abelianization"]);
        let two = surgery_gate(6, Knots::Kappa1, &[lens(2), lens(3)]).unwrap();
        assert_eq!(two.violated_rules(), vec!["rule.axiom.free-product-center"]);
        assert!(two.trace.iter().any(|e| e.rule == "rule.gordon-luecke.two-lens"));
        assert!(surgery_gate(5, Knots::Kappa0, &[]).is_err());
    }

    #[test]
    fn homology_sums() {
        let f = direct_sum_factors(&[BigInt::from(2), BigInt::from(3)]);
        assert_eq!(f, vec![BigInt::from(6)]);
        let g = direct_sum_factors(&[BigInt::from(2), BigInt::from(2)]);
        assert_eq!(g, vec![BigInt::from(2), BigInt::from(2)]);
        assert_eq!(Summand::Prism { m: 1, n: 2 }.h1().unwrap(), vec![BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn lens_monotone_in_k() {
        for d in 2..=30u64 {
            for k in 1..=30u64 {
                if classify_summand(&lens(d), k).unwrap().admissible {
                    for mult in 2..=4 {
                        assert!(classify_summand(&lens(d), k * mult).unwrap().admissible);
                    }
                }
            }
        }
    }
}
