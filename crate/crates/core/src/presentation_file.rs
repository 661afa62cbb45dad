//! TOML presentation files.
//!
//! ```toml
//! name = "W_1"
//! field = "q"
//! vertices = ["0", "1"]
//! central_vars = ["x2", "x1"]
//! relations = ["a*b - (x1-1)*e0"]
//!
//! [[arrows]]
//! name = "a"
//! src = "0"
//! dst = "1"
//! deg = 0
//!
//! [differentials]
//! alpha = "(x2+1)*e0"
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::Field;
use crate::dg::{DgError, DgPresentation};
use crate::path_algebra::{AlgebraElement, PathAlgebraError, Quiver};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationFileError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("bad field `{0}`")]
    Field(String),
    #[error("in {context}: {source}")]
    Expression {
        context: String,
        #[source]
        source: PathAlgebraError,
    },
    #[error(transparent)]
    Quiver(PathAlgebraError),
    #[error(transparent)]
    Dg(#[from] DgError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowSpec {
    pub name: String,
    pub src: String,
    pub dst: String,
    #[serde(default)]
    pub deg: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    #[serde(default)]
    pub name: String,
    pub field: String,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub central_vars: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowSpec>,
    #[serde(default)]
    pub differentials: BTreeMap<String, String>,
}

impl PresentationFile {
    pub fn parse(text: &str) -> Result<Self, PresentationFileError> {
        toml::from_str(text).map_err(|e| {
            let (line, column) = e
                .span()
                .map(|s| line_col(text, s.start))
                .unwrap_or((1, 1));
            PresentationFileError::Syntax {
                line,
                column,
                message: e.message().to_string(),
            }
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("presentation serializes")
    }

    pub fn to_presentation(&self) -> Result<DgPresentation, PresentationFileError> {
        let field = Field::parse_spec(&self.field).map_err(|_| PresentationFileError::Field(self.field.clone()))?;
        let vs: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        let arrows: Vec<(&str, &str, &str, i64)> = self
            .arrows
            .iter()
            .map(|a| (a.name.as_str(), a.src.as_str(), a.dst.as_str(), a.deg))
            .collect();
        let cs: Vec<&str> = self.central_vars.iter().map(String::as_str).collect();
        let q = Quiver::new(&vs, &arrows, &cs).map_err(PresentationFileError::Quiver)?;
        let parse = |context: String, s: &str| {
            AlgebraElement::parse(&q, field, s).map_err(|source| PresentationFileError::Expression { context, source })
        };
        let relations = self
            .relations
            .iter()
            .enumerate()
            .map(|(i, r)| parse(format!("relation {i}"), r))
            .collect::<Result<Vec<_>, _>>()?;
        let differentials = self
            .differentials
            .iter()
            .map(|(g, d)| Ok((g.clone(), parse(format!("differential of {g}"), d)?)))
            .collect::<Result<BTreeMap<_, _>, PresentationFileError>>()?;
        let p = DgPresentation {
            name: self.name.clone(),
            quiver: q,
            field,
            relations,
            differentials,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn from_presentation(p: &DgPresentation) -> Self {
        let q = &p.quiver;
        PresentationFile {
            name: p.name.clone(),
            field: p.field.spec(),
            vertices: q.vertices().to_vec(),
            central_vars: q.central_vars().to_vec(),
            relations: p.relations.iter().map(AlgebraElement::to_expr_string).collect(),
            arrows: q
                .arrows()
                .iter()
                .map(|a| ArrowSpec {
                    name: a.name.clone(),
                    src: q.vertices()[a.src].clone(),
                    dst: q.vertices()[a.dst].clone(),
                    deg: a.deg,
                })
                .collect(),
            differentials: p
                .differentials
                .iter()
                .filter(|(_, d)| !d.is_zero())
                .map(|(g, d)| (g.clone(), d.to_expr_string()))
                .collect(),
        }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::{build_ak, build_wk};
    use crate::ginzburg::build_gk_explicit;

    #[test]
    fn round_trip_families() {
        let f3 = Field::prime(3).unwrap();
        for p in [
            build_wk(2, Field::Rationals).unwrap(),
            build_ak(3, f3).unwrap(),
            build_gk_explicit(2, Field::Rationals).unwrap(),
        ] {
            let text = PresentationFile::from_presentation(&p).to_toml();
            let back = PresentationFile::parse(&text).unwrap().to_presentation().unwrap();
            assert_eq!(back, p, "{text}");
        }
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = PresentationFile::parse("field = \"q\"\nvertices = [\"0\"\n").unwrap_err();
        assert!(matches!(err, PresentationFileError::Syntax { line: 2, .. } | PresentationFileError::Syntax { line: 3, .. }), "{err:?}");
        let bad_expr = "field = \"q\"\nvertices = [\"0\"]\nrelations = [\"t*\"]\n[[arrows]]\nname = \"t\"\nsrc = \"0\"\ndst = \"0\"\n";
        let e = PresentationFile::parse(bad_expr).unwrap().to_presentation().unwrap_err();
        assert!(matches!(e, PresentationFileError::Expression { .. }));
        let bad_field = "field = \"p:4\"\nvertices = [\"0\"]\n";
        assert!(matches!(
            PresentationFile::parse(bad_field).unwrap().to_presentation(),
            Err(PresentationFileError::Field(_))
        ));
    }
}
