//! Subcommand implementations. Each returns a [`Report`]; errors carry
//! their process exit code.

use std::collections::BTreeMap;
use std::path::Path as FsPath;
use std::sync::Arc;

use dbplumb::arith::{Field, Scalar};
use dbplumb::dg::{build_ak, build_wk, DgPresentation};
use dbplumb::families::run_family_suite;
use dbplumb::gate::{classify_summand, surgery_gate, Knots, Outcome, Summand};
use dbplumb::ginzburg::{build_gk, build_gk_explicit, DerivativeMode, DiffMode};
use dbplumb::groups::{
    abelianization, center_unit_survey, todd_coxeter as enumerate_cosets, verify_central_unit,
    FiniteGroup, GroupAlgebra, GroupError, Presentation,
};
use dbplumb::h0::{h0 as compute_h0, identify_idempotents, H0Error, H0Outcome, DEFAULT_UNIT_BUDGET};
use dbplumb::path_algebra::{AlgebraElement, Monomial, Path, Quiver};
use dbplumb::presentation_file::{PresentationFile, PresentationFileError};
use dbplumb::report::{Report, Status};
use dbplumb::singularity::{is_singular_point, sigma, special_point, tjurina_number, PolyRing, QuotientDim};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::{Family, FamilyArgs, GkMode, GroupInput, Reading};

pub const EX_USAGE: u8 = 64;
pub const EX_DATAERR: u8 = 65;
pub const EX_NOINPUT: u8 = 66;
pub const EX_SOFTWARE: u8 = 70;
pub const DEFAULT_SEED: u64 = 0x5eed;
pub const BUDGET_ENV: &str = "DBP_BUDGET";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    NoInput(String),
    Internal(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::NoInput(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EX_USAGE,
            CliError::Input(_) => EX_DATAERR,
            CliError::NoInput(_) => EX_NOINPUT,
            CliError::Internal(_) => EX_SOFTWARE,
        }
    }
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

pub struct Context {
    pub budget: u64,
    pub seed: u64,
}

pub fn resolve_budget(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{BUDGET_ENV} must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_UNIT_BUDGET),
    }
}

fn field(spec: &str) -> Result<Field, CliError> {
    Field::parse_spec(spec).map_err(usage)
}

fn need_field(spec: &str) -> Result<Field, CliError> {
    let f = field(spec)?;
    if !f.is_field() {
        return Err(usage(format!("`{spec}` is not a field here; use q or p:<prime>")));
    }
    Ok(f)
}

fn need_k(k: Option<u32>) -> Result<u32, CliError> {
    match k {
        Some(0) => Err(usage("k must be at least 1")),
        Some(k) => Ok(k),
        None => Err(usage("--k is required")),
    }
}

fn build_family(args: &FamilyArgs) -> Result<DgPresentation, CliError> {
    let k = need_k(args.k)?;
    let f = need_field(&args.field)?;
    let p = match args.family {
        Family::W => build_wk(k, f).map_err(internal)?,
        Family::A => build_ak(k, f).map_err(internal)?,
        Family::G => match args.mode {
            GkMode::Explicit => build_gk_explicit(k, f).map_err(internal)?,
            GkMode::Literal => build_gk(k, f, &DiffMode::CyclicDerivative(DerivativeMode::Literal)).map_err(internal)?,
            GkMode::Orbit => {
                build_gk(k, f, &DiffMode::CyclicDerivative(DerivativeMode::CyclicOrbit)).map_err(internal)?
            }
        },
    };
    Ok(p)
}

fn read_file(path: &FsPath) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::NoInput(format!("{}: {e}", path.display())))
}

fn load_presentation(path: &FsPath) -> Result<(PresentationFile, DgPresentation), CliError> {
    let text = read_file(path)?;
    let bad = |e: PresentationFileError| CliError::Input(format!("{}: {e}", path.display()));
    let file = PresentationFile::parse(&text).map_err(bad)?;
    let p = file.to_presentation().map_err(bad)?;
    Ok((file, p))
}

fn presentation_source(args: &FamilyArgs, input: Option<&FsPath>) -> Result<(DgPresentation, Value), CliError> {
    match input {
        Some(path) => {
            let (_, p) = load_presentation(path)?;
            Ok((p, json!({ "input": path.display().to_string() })))
        }
        None => {
            let p = build_family(args)?;
            Ok((p, family_inputs(args)))
        }
    }
}

fn family_inputs(args: &FamilyArgs) -> Value {
    let mut v = json!({
        "family": format!("{:?}", args.family),
        "k": args.k,
        "field": args.field,
    });
    if args.family == Family::G {
        v["mode"] = json!(format!("{:?}", args.mode).to_lowercase());
    }
    v
}

pub fn present(args: &FamilyArgs, out: Option<&FsPath>) -> Result<Report, CliError> {
    let p = build_family(args)?;
    let text = PresentationFile::from_presentation(&p).to_toml();
    let mut report = Report::new("present", family_inputs(args));
    if let Some(path) = out {
        std::fs::write(path, &text).map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))?;
        report.payload("written", json!(path.display().to_string()));
    }
    let validated = p.validate().is_ok();
    report.check("presentation.valid", Status::from_bool(validated), Value::Null);
    report.payload("name", json!(p.name));
    report.payload("presentation", json!(text));
    Ok(report)
}

pub fn suite(k: u32, spec: &str, bound: Option<usize>) -> Result<Report, CliError> {
    if k == 0 {
        return Err(usage("k must be at least 1"));
    }
    let f = need_field(spec)?;
    run_family_suite(k, f, bound).map_err(internal)
}

fn default_bound(p: &DgPresentation, k: Option<u32>) -> usize {
    match k {
        Some(k) => dbplumb::families::default_bound(k),
        None => 4 * p.max_generator_len() + 8,
    }
}

pub fn h0(args: &FamilyArgs, input: Option<&FsPath>, bound: Option<usize>, reading: Reading) -> Result<Report, CliError> {
    let (p, mut inputs) = presentation_source(args, input)?;
    let bound = bound.unwrap_or_else(|| default_bound(&p, input.is_none().then_some(args.k).flatten()));
    inputs["bound"] = json!(bound);
    inputs["reading"] = json!(format!("{reading:?}").to_lowercase());
    let mut report = Report::new("h0", inputs);
    let mut out = compute_h0(&p, bound).map_err(internal)?;
    if reading == Reading::Identified {
        if let H0Outcome::Finite(h) = &out {
            out = identify_idempotents(h, bound).map_err(internal)?;
        }
    }
    match out {
        H0Outcome::Finite(h) => {
            let a = &h.algebra;
            report.check("h0.finite", Status::Pass, json!({ "dim": h.dim() }));
            report.check("h0.associative", Status::from_bool(a.is_associative()), Value::Null);
            report.payload("dim", json!(h.dim()));
            report.payload("basis", json!(h.basis_strings()));
            report.payload("center_dim", json!(a.center().len()));
            report.payload("commutative", json!(a.is_commutative()));
        }
        H0Outcome::InconclusiveAtBound { found, longest, complete } => {
            report.check(
                "h0.finite",
                Status::Inconclusive,
                json!({ "found": found, "longest": longest, "complete_below_bound": complete }),
            );
        }
    }
    Ok(report)
}

pub fn units(
    ctx: &Context,
    args: &FamilyArgs,
    input: Option<&FsPath>,
    bound: Option<usize>,
    element: Option<&str>,
) -> Result<Report, CliError> {
    let (p, mut inputs) = presentation_source(args, input)?;
    if p.field.characteristic() == 0 {
        return Err(usage("unit groups are enumerated over p:<prime> only"));
    }
    let bound = bound.unwrap_or_else(|| default_bound(&p, input.is_none().then_some(args.k).flatten()));
    inputs["bound"] = json!(bound);
    inputs["element"] = json!(element);
    let mut report = Report::new("units", inputs);
    let h = match compute_h0(&p, bound).map_err(internal)? {
        H0Outcome::Finite(h) => h,
        H0Outcome::InconclusiveAtBound { found, longest, .. } => {
            report.check("h0.finite", Status::Inconclusive, json!({ "found": found, "longest": longest }));
            return Ok(report);
        }
    };
    report.check("h0.finite", Status::Pass, json!({ "dim": h.dim() }));
    let gen = match element {
        Some(e) => Some(h.parse(e).map_err(|e| usage(format!("--element: {e}")))?),
        None => None,
    };
    match h.algebra.unit_group(gen.as_deref(), ctx.budget) {
        Ok(u) => {
            report.check("units.enumerated", Status::Pass, json!({ "order": u.order }));
            if gen.is_some() {
                report.check(
                    "units.element-invertible",
                    Status::from_bool(u.generator_inverse.is_some()),
                    json!({ "order": u.generator_order, "inverse": u.generator_inverse }),
                );
            }
            report.payload("unit_group", serde_json::to_value(&u).map_err(internal)?);
        }
        Err(H0Error::BudgetExceeded { needed, budget }) => {
            report.check(
                "units.enumerated",
                Status::Inconclusive,
                json!({ "needed": needed.to_string(), "budget": budget }),
            );
        }
        Err(e) => return Err(internal(e)),
    }
    Ok(report)
}

pub fn tjurina(k: u32, spec: &str) -> Result<Report, CliError> {
    if k == 0 {
        return Err(usage("k must be at least 1"));
    }
    let f = need_field(spec)?;
    let t = tjurina_number(k, f).map_err(internal)?;
    let mut report = Report::new("tjurina", json!({ "k": k, "field": f.spec() }));
    let finite = matches!(t.global, QuotientDim::Finite(_));
    report.check("tjurina.finite", Status::from_bool(finite), json!(t.global));
    report.payload("global", json!(t.global));
    report.payload("local_origin", json!(t.local_origin));
    report.payload("local_minus_two", json!(t.local_minus_two));
    Ok(report)
}

pub fn singular_point(k: u32, spec: &str, point: Option<&str>) -> Result<Report, CliError> {
    if k == 0 {
        return Err(usage("k must be at least 1"));
    }
    let f = need_field(spec)?;
    let ring = PolyRing::uvxy(f).map_err(internal)?;
    let pt: Vec<Scalar> = match point {
        None => special_point(f),
        Some(s) => s
            .split(',')
            .map(|c| ring.parse(c.trim()).map_err(|e| usage(format!("--point: {e}"))).map(|p| p.evaluate(&[])))
            .collect::<Result<_, _>>()?,
    };
    if pt.len() != 4 {
        return Err(usage("--point needs four coordinates u,v,x,y"));
    }
    let sig = sigma(k, &ring).map_err(internal)?;
    let singular = is_singular_point(&sig, &pt).map_err(internal)?;
    let coords: Vec<String> = pt.iter().map(Scalar::to_string).collect();
    let mut report = Report::new("singular-point", json!({ "k": k, "field": f.spec(), "point": coords }));
    report.check("computed", Status::Pass, Value::Null);
    report.payload("singular", json!(singular));
    report.payload("polynomial", json!(sig.display(&ring)));
    Ok(report)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    generators: Vec<String>,
    relators: Vec<String>,
}

fn presentation_from(input: &GroupInput) -> Result<Option<Presentation>, CliError> {
    let bad = |e: GroupError| usage(e);
    if let Some(path) = &input.input {
        let text = read_file(path)?;
        let g: GroupFile = toml::from_str(&text).map_err(|e| {
            let pos = e
                .span()
                .map(|s| {
                    let before = &text[..s.start];
                    format!(
                        "line {}, column {}",
                        before.matches('\n').count() + 1,
                        before.rsplit('\n').next().map_or(0, str::len) + 1
                    )
                })
                .unwrap_or_default();
            CliError::Input(format!("{}: {pos}: {}", path.display(), e.message()))
        })?;
        let gens: Vec<&str> = g.generators.iter().map(String::as_str).collect();
        let rels: Vec<&str> = g.relators.iter().map(String::as_str).collect();
        return Presentation::parse(&gens, &rels)
            .map(Some)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())));
    }
    if let Some(mn) = &input.prism {
        let (m, n) = parse_pair(mn)?;
        return Presentation::prism(m, n).map(Some).map_err(bad);
    }
    if let Some(gens) = &input.generators {
        let gens: Vec<&str> = gens.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let rels: Vec<&str> = input
            .relators
            .as_deref()
            .unwrap_or("")
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        return Presentation::parse(&gens, &rels).map(Some).map_err(bad);
    }
    Ok(None)
}

fn parse_pair(s: &str) -> Result<(u64, u64), CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((
            a.parse().map_err(|_| usage(format!("bad integer `{a}`")))?,
            b.parse().map_err(|_| usage(format!("bad integer `{b}`")))?,
        )),
        _ => Err(usage(format!("expected `m,n`, got `{s}`"))),
    }
}

fn group_from(input: &GroupInput, max_cosets: usize) -> Result<FiniteGroup, CliError> {
    if let Some(name) = &input.group {
        return FiniteGroup::by_name(name).map_err(usage);
    }
    match presentation_from(input)? {
        Some(p) => enumerate_cosets(&p, max_cosets).map_err(internal),
        None => Err(usage("give --group, --input, --prism or --generators")),
    }
}

fn group_inputs(input: &GroupInput) -> Value {
    json!({
        "group": input.group,
        "input": input.input.as_ref().map(|p| p.display().to_string()),
        "generators": input.generators,
        "relators": input.relators,
        "prism": input.prism,
    })
}

fn class_table(g: &FiniteGroup) -> Value {
    Value::Array(
        g.conjugacy_classes()
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "size": c.elements.len(),
                    "element_order": c.element_order,
                    "representative": g.label(c.representative),
                })
            })
            .collect(),
    )
}

pub fn group_center(ctx: &Context, input: &GroupInput, ring: &str) -> Result<Report, CliError> {
    let r = field(ring)?;
    let g = Arc::new(group_from(input, 100_000)?);
    let mut inputs = group_inputs(input);
    inputs["ring"] = json!(r.spec());
    let mut report = Report::new("group center", inputs);
    let alg = GroupAlgebra::new(g.clone(), r);
    let sums = alg.class_sums();
    let central = sums.iter().all(|s| alg.is_central(s));
    report.check("class-sums.central", Status::from_bool(central), json!({ "count": sums.len() }));
    report.payload("order", json!(g.order()));
    report.payload("classes", class_table(&g));
    report.payload("structure_constants", json!(alg.center_structure()));
    if let Field::Prime(p) = r {
        match center_unit_survey(&g, p, ctx.budget) {
            Ok(s) => {
                report.check("center-units.enumerated", Status::Pass, json!({ "units": s.units }));
                report.payload("survey", serde_json::to_value(&s).map_err(internal)?);
            }
            Err(GroupError::BudgetExceeded { needed, budget }) => {
                report.check(
                    "center-units.enumerated",
                    Status::Inconclusive,
                    json!({ "needed": needed, "budget": budget }),
                );
            }
            Err(e) => return Err(internal(e)),
        }
    }
    Ok(report)
}

pub fn group_unit_check(input: &GroupInput, ring: &str, element: &str, reduce_mod: Option<u64>) -> Result<Report, CliError> {
    let r = field(ring)?;
    let g = Arc::new(group_from(input, 100_000)?);
    let mut inputs = group_inputs(input);
    inputs["ring"] = json!(r.spec());
    inputs["element"] = json!(element);
    inputs["reduce_mod"] = json!(reduce_mod);
    let mut report = Report::new("group unit-check", inputs);
    let alg = GroupAlgebra::new(g.clone(), r);
    let u = alg.parse(element).map_err(|e| usage(format!("--element: {e}")))?;
    report.payload("classes", class_table(&g));
    match verify_central_unit(&alg, &u) {
        Ok((_, cert)) => {
            report.check("central", Status::Pass, Value::Null);
            report.check("unit", Status::Pass, json!({ "inverse": cert.inverse }));
            report.payload("certificate", serde_json::to_value(&cert).map_err(internal)?);
        }
        Err(GroupError::NotCentral) => report.check("central", Status::Fail, Value::Null),
        Err(GroupError::NotAUnit) => {
            report.check("central", Status::Pass, Value::Null);
            report.check("unit", Status::Fail, Value::Null);
        }
        Err(e) => return Err(internal(e)),
    }
    if let Some(p) = reduce_mod {
        let (alg_p, up) = alg.reduce_mod_p(&u, p).map_err(usage)?;
        report.payload(
            "reduction",
            json!({ "p": p, "element": alg_p.format(&up), "is_one": up == alg_p.one() }),
        );
    }
    Ok(report)
}

pub fn abelianize(input: &GroupInput) -> Result<Report, CliError> {
    let p = match presentation_from(input)? {
        Some(p) => p,
        None => return Err(usage("give --input, --prism or --generators")),
    };
    let mut report = Report::new("abelianize", group_inputs(input));
    let ab = abelianization(&p);
    report.check("computed", Status::Pass, Value::Null);
    report.payload("invariant_factors", json!(ab.factors));
    report.payload("cyclic", json!(ab.cyclic));
    report.payload("relation_matrix", json!(p.exponent_matrix().to_string()));
    Ok(report)
}

pub fn todd_coxeter(input: &GroupInput, max_cosets: usize) -> Result<Report, CliError> {
    let p = match presentation_from(input)? {
        Some(p) => p,
        None => return Err(usage("give --input, --prism or --generators")),
    };
    let mut inputs = group_inputs(input);
    inputs["max_cosets"] = json!(max_cosets);
    let mut report = Report::new("todd-coxeter", inputs);
    match enumerate_cosets(&p, max_cosets) {
        Ok(g) => {
            let (order, center, orders) = g.fingerprint();
            report.check("enumerated", Status::Pass, json!({ "order": order }));
            report.payload("order", json!(order));
            report.payload("center_order", json!(center));
            report.payload("element_orders", json!(orders));
            report.payload("abelian", json!(g.is_abelian()));
            let gens: BTreeMap<&str, String> = g
                .generators()
                .iter()
                .map(|(n, i)| (n.as_str(), g.label(*i).to_string()))
                .collect();
            report.payload("generators", json!(gens));
        }
        Err(GroupError::CosetLimit(n)) => {
            report.check("enumerated", Status::Inconclusive, json!({ "coset_limit": n }));
        }
        Err(e) => return Err(internal(e)),
    }
    Ok(report)
}

fn trace_checks(report: &mut Report, trace: &[dbplumb::gate::TraceEntry]) {
    for e in trace {
        let status = match e.outcome {
            Outcome::Violated => Status::Fail,
            Outcome::Pass | Outcome::Concluded => Status::Pass,
        };
        report.check(e.rule.clone(), status, json!(e.message));
    }
}

pub fn gate_classify(k: u64, summands: &str) -> Result<Report, CliError> {
    let list = Summand::parse_list(summands).map_err(usage)?;
    let mut report = Report::new("gate classify", json!({ "k": k, "summands": summands }));
    let mut verdicts = Vec::new();
    for s in &list {
        let v = classify_summand(s, k).map_err(usage)?;
        trace_checks(&mut report, &v.trace);
        verdicts.push(json!({ "summand": s.to_string(), "admissible": v.admissible, "trace": v.trace }));
    }
    report.payload("verdicts", Value::Array(verdicts));
    Ok(report)
}

pub fn gate_surgery(k: u64, knots: &str, summands: &str) -> Result<Report, CliError> {
    let knots = Knots::parse(knots).map_err(usage)?;
    let list = Summand::parse_list(summands).map_err(usage)?;
    let v = surgery_gate(k, knots, &list).map_err(usage)?;
    let mut report = Report::new("gate surgery", json!({ "k": k, "knots": knots, "summands": summands }));
    trace_checks(&mut report, &v.trace);
    report.payload("admissible", json!(v.admissible));
    report.payload("conclusion", json!(v.last_message()));
    report.payload("trace", serde_json::to_value(&v.trace).map_err(internal)?);
    Ok(report)
}

/// Random element: a few terms, each a central monomial times a random
/// walk in the quiver.
fn random_element(q: &Arc<Quiver>, field: Field, rng: &mut ChaCha8Rng) -> AlgebraElement {
    let mut u = AlgebraElement::zero(q, field);
    let nc = q.central_vars().len();
    for _ in 0..rng.gen_range(1..=4) {
        let mut path = Path::trivial(rng.gen_range(0..q.num_vertices()));
        for _ in 0..rng.gen_range(0..=4) {
            let out: Vec<usize> = (0..q.arrows().len()).filter(|&a| q.arrow(a).src == path.end).collect();
            if out.is_empty() {
                break;
            }
            let a = out[rng.gen_range(0..out.len())];
            path = path.concat(&Path::arrow(q, a)).expect("composable by construction");
        }
        let mut mono = Monomial::one(nc);
        if nc > 0 {
            for _ in 0..rng.gen_range(0..=2) {
                mono.0[rng.gen_range(0..nc)] += 1;
            }
        }
        u.add_term(mono, path, field.from_i64(rng.gen_range(-6..=6)));
    }
    u
}

pub fn parse_check(ctx: &Context, path: &FsPath, samples: usize) -> Result<Report, CliError> {
    let (file, p) = load_presentation(path)?;
    let mut report = Report::new(
        "parse-check",
        json!({ "input": path.display().to_string(), "samples": samples }),
    );
    let again = PresentationFile::from_presentation(&p);
    let reparsed = PresentationFile::parse(&again.to_toml()).and_then(|f| f.to_presentation());
    let ok = matches!(&reparsed, Ok(back) if *back == p);
    report.check("file.round-trip", Status::from_bool(ok), Value::Null);
    report.payload("canonical", json!(again.to_toml()));
    report.payload("name", json!(file.name));

    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut failures = Vec::new();
    for _ in 0..samples {
        let u = random_element(&p.quiver, p.field, &mut rng);
        let text = u.to_expr_string();
        match AlgebraElement::parse(&p.quiver, p.field, &text) {
            Ok(back) if back == u => {}
            Ok(back) => failures.push(json!({ "printed": text, "reparsed": back.to_expr_string() })),
            Err(e) => failures.push(json!({ "printed": text, "error": e.to_string() })),
        }
        if failures.len() >= 5 {
            break;
        }
    }
    report.check(
        "elements.round-trip",
        Status::from_bool(failures.is_empty()),
        if failures.is_empty() { json!({ "samples": samples }) } else { json!(failures) },
    );
    Ok(report)
}
