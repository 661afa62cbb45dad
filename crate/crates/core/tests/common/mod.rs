//! Helpers shared by integration test targets.

#![allow(dead_code)]

pub mod props;

use std::path::PathBuf;

use dbplumb::gate::{surgery_gate, Knots, Summand};
use serde::Deserialize;

#[derive(Deserialize)]
pub struct GateCase {
    pub name: String,
    pub k: u64,
    pub knots: String,
    pub summands: String,
    pub admissible: bool,
    pub trace: Vec<String>,
}

#[derive(Deserialize)]
struct GateTable {
    case: Vec<GateCase>,
}

pub fn gate_cases() -> Vec<GateCase> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/gate_cases.toml");
    let text = std::fs::read_to_string(path).expect("golden table");
    toml::from_str::<GateTable>(&text).expect("golden table parses").case
}

/// Runs one golden case; returns a description of the first mismatch.
pub fn run_gate_case(c: &GateCase) -> Result<(), String> {
    let summands = Summand::parse_list(&c.summands).map_err(|e| e.to_string())?;
    let knots = Knots::parse(&c.knots).map_err(|e| e.to_string())?;
    let v = surgery_gate(c.k, knots, &summands).map_err(|e| e.to_string())?;
    let got: Vec<String> = v
        .trace
        .iter()
        .map(|e| format!("{} {}", e.rule, serde_json::to_value(e.outcome).unwrap().as_str().unwrap()))
        .collect();
    if got != c.trace {
        return Err(format!("{}: trace {got:?}, expected {:?}", c.name, c.trace));
    }
    if v.admissible != c.admissible {
        return Err(format!("{}: admissible = {}", c.name, v.admissible));
    }
    if c.admissible && v.last_message() != Some("forces unknot (KMOS axiom)") {
        return Err(format!("{}: admissible case does not end in the unknot conclusion", c.name));
    }
    Ok(())
}

/// `|prism(m, n)| = 4mn` and non-cyclic abelianization iff `n` is even, over
/// coprime `m <= 4`, `2 <= n <= 9`. Returns the number of cases checked.
pub fn prism_table() -> Result<usize, String> {
    use dbplumb::groups::{abelianization, todd_coxeter, Presentation};
    use num_integer::Integer;
    let mut checked = 0;
    for m in 1..=4u64 {
        for n in 1..=9u64 {
            if m.gcd(&n) != 1 {
                continue;
            }
            let p = Presentation::prism(m, n).map_err(|e| e.to_string())?;
            let g = todd_coxeter(&p, 200_000).map_err(|e| format!("prism({m},{n}): {e}"))?;
            if g.order() as u64 != 4 * m * n {
                return Err(format!("prism({m},{n}) has order {}", g.order()));
            }
            let ab = abelianization(&p);
            if ab.cyclic == (n % 2 == 0) {
                return Err(format!("prism({m},{n}): abelianization {:?}", ab.factors));
            }
            checked += 1;
        }
    }
    Ok(checked)
}
