//! JSON export of computed gradings and re-import for re-verification.
//!
//! Schema: `{"id", "group": {"free_rank", "invariant_factors"}, "type": [..],
//! "components": [{"label": [fe, ..], "basis": [[fe × 28], ..]}]}` where each
//! field element `fe` is four rational strings `[c0, c1, c2, c3]`.

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::diag::{LabeledDecomposition, Part};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::gradecheck::{grading_type, universal_group, GroupStructure};
use crate::liealg::DIM;
use crate::linalg::Subspace;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportedComponent {
    pub label: Vec<FieldElement>,
    pub basis: Vec<Vec<FieldElement>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportedGrading {
    pub id: String,
    pub group: GroupStructure,
    #[serde(rename = "type")]
    pub grading_type: Vec<usize>,
    pub components: Vec<ExportedComponent>,
}

pub fn export(id: &str, d: &LabeledDecomposition) -> Result<ExportedGrading> {
    Ok(ExportedGrading {
        id: id.to_string(),
        group: universal_group(d)?,
        grading_type: grading_type(d),
        components: d
            .parts
            .iter()
            .map(|p| ExportedComponent { label: p.label.clone(), basis: p.space.basis().to_vec() })
            .collect(),
    })
}

pub fn to_json(e: &ExportedGrading) -> Result<String> {
    Ok(serde_json::to_string_pretty(e)?)
}

/// Rebuilds a decomposition; generator descriptors come from the catalog entry
/// with the same id.
pub fn import(json: &str) -> Result<(ExportedGrading, LabeledDecomposition)> {
    let e: ExportedGrading = serde_json::from_str(json)?;
    let spec = catalog::get_spec(&e.id)?;
    let arity = spec.generators.len();
    let basis = None;
    let generators = spec
        .generators
        .iter()
        .map(|g| match g.instantiate(basis) {
            Ok(op) => Ok(op.descriptor),
            Err(Error::MissingCalibration(_)) => Ok(descriptor_without_basis(g)),
            Err(err) => Err(err),
        })
        .collect::<Result<Vec<_>>>()?;
    let parts = e
        .components
        .iter()
        .map(|c| {
            if c.label.len() != arity {
                return Err(Error::Parse(format!("label arity {} != {arity}", c.label.len())));
            }
            let space = Subspace::from_vectors(DIM, &c.basis)?;
            if space.dim() != c.basis.len() {
                return Err(Error::Parse("component basis is linearly dependent".into()));
            }
            Ok(Part { label: c.label.clone(), space })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((e, LabeledDecomposition { generators, parts }))
}

fn descriptor_without_basis(g: &catalog::GeneratorDesc) -> crate::autos::Descriptor {
    use crate::autos::Descriptor;
    use std::str::FromStr;
    match g {
        catalog::GeneratorDesc::Table { name, power } => Descriptor::Table { name: name.clone(), power: *power },
        catalog::GeneratorDesc::Torus { params, base } => Descriptor::Torus {
            params: params.clone(),
            base: base.as_deref().and_then(|b| crate::field::Rational::from_str(b).ok()),
        },
        other => Descriptor::Other(format!("{other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline;

    #[test]
    fn round_trip_q5() {
        let spec = catalog::get_spec("q5").unwrap();
        let (d, report) = pipeline::verify(&spec, None).unwrap();
        let e = export("q5", &d).unwrap();
        let json = to_json(&e).unwrap();
        let (back, d2) = import(&json).unwrap();
        assert_eq!(back, e);
        assert_eq!(d2, d);
        let report2 = pipeline::report_for(&spec, &d2, None).unwrap();
        assert_eq!(report2.group, report.group);
        assert!(report2.passed());
    }

    #[test]
    fn bad_import() {
        assert!(import("{}").is_err());
        let json = r#"{"id":"q5","group":{"free_rank":0,"invariant_factors":[]},"type":[],"components":[{"label":[["1","0","0","0"]],"basis":[]}]}"#;
        assert!(import(json).is_err());
    }
}
