//! The fourteen fine gradings as data: generator recipes, expected type and
//! group, and the published component tables used as golden references.
//!
//! Each grading is a JSON document under `catalog/`, embedded at compile time.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::autos::{self, h_table, Descriptor, MatrixSpec, Operator, ParamFamily};
use crate::calibrate::CalibratedBasis;
use crate::error::{Error, Result};
use crate::field::{FieldElement, Rational};
use crate::gradecheck::GroupStructure;
use crate::liealg::{self, LieElement, DIM};
use crate::linalg::Subspace;

const SOURCES: [&str; 14] = [
    include_str!("../catalog/q1.json"),
    include_str!("../catalog/q2.json"),
    include_str!("../catalog/q3.json"),
    include_str!("../catalog/q4.json"),
    include_str!("../catalog/q5.json"),
    include_str!("../catalog/q6.json"),
    include_str!("../catalog/q7.json"),
    include_str!("../catalog/q8.json"),
    include_str!("../catalog/q9.json"),
    include_str!("../catalog/q10.json"),
    include_str!("../catalog/q11.json"),
    include_str!("../catalog/q12.json"),
    include_str!("../catalog/q13.json"),
    include_str!("../catalog/q14.json"),
];

/// Catalog ids in order.
pub fn ids() -> Vec<String> {
    (1..=SOURCES.len()).map(|k| format!("q{k}")).collect()
}

/// A generator recipe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorDesc {
    AdFamily { family: ParamFamily, param: String },
    AdConst { name: String },
    Table { name: String, power: u32 },
    Torus { params: [FieldElement; 4], base: Option<String> },
}

fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

impl GeneratorDesc {
    /// Whether building this generator needs the calibrated root basis.
    pub fn needs_calibration(&self) -> bool {
        matches!(self, GeneratorDesc::Table { .. } | GeneratorDesc::Torus { .. })
    }

    pub fn instantiate(&self, basis: Option<&CalibratedBasis>) -> Result<Operator> {
        match self {
            GeneratorDesc::AdFamily { family, param } => {
                let a = FieldElement::from_rational(parse_rational(param)?);
                autos::ad_operator(&MatrixSpec::Param(*family, a))
            }
            GeneratorDesc::AdConst { name } => autos::ad_operator(&MatrixSpec::constant(name)?),
            GeneratorDesc::Table { name, power } => {
                let t = h_table(name)?.to_matrix().pow(*power)?;
                let entries = (0..DIM)
                    .flat_map(|i| (0..DIM).map(move |j| (i, j)))
                    .filter(|&(i, j)| !t[(i, j)].is_zero())
                    .map(|(i, j)| (i + 1, j + 1, t[(i, j)].clone()))
                    .collect();
                let table = autos::BasisOperatorTable::new(entries)?;
                autos::operator_from_table(&table, basis, Descriptor::Table { name: name.clone(), power: *power })
            }
            GeneratorDesc::Torus { params, base } => {
                let base = base.as_deref().map(parse_rational).transpose()?;
                autos::torus_operator(params.clone(), base, basis)
            }
        }
    }
}

/// Coordinate system of a golden table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GoldenBasis {
    /// Vectors are combinations of `b_ij`.
    Standard,
    /// Vectors are combinations of the calibrated basis `B`.
    Calibrated,
}

/// One term `c · b_ij` or `c · B_k` of a spanning vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Term {
    Standard { i: usize, j: usize, c: FieldElement },
    Calibrated { k: usize, c: FieldElement },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenComponent {
    pub label: Vec<FieldElement>,
    pub vectors: Vec<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// One catalog entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingSpec {
    pub id: String,
    pub mad_label: Option<String>,
    pub group_heading: String,
    pub generators: Vec<GeneratorDesc>,
    pub expected_type: Vec<usize>,
    pub expected_group: GroupStructure,
    pub golden_basis: GoldenBasis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub golden_note: Option<String>,
    pub golden_components: Vec<GoldenComponent>,
}

impl GradingSpec {
    pub fn needs_calibration(&self) -> bool {
        self.golden_basis == GoldenBasis::Calibrated || self.generators.iter().any(GeneratorDesc::needs_calibration)
    }

    pub fn operators(&self, basis: Option<&CalibratedBasis>) -> Result<Vec<Operator>> {
        self.generators.iter().map(|g| g.instantiate(basis)).collect()
    }

    /// Golden components as canonical subspaces of `o(8)`.
    pub fn golden_subspaces(&self, basis: Option<&CalibratedBasis>) -> Result<Vec<(Vec<FieldElement>, Subspace)>> {
        self.golden_components
            .iter()
            .map(|g| {
                let vectors = g
                    .vectors
                    .iter()
                    .map(|terms| golden_vector(terms, basis))
                    .collect::<Result<Vec<_>>>()?;
                Ok((g.label.clone(), Subspace::from_vectors(DIM, &vectors)?))
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let arity = self.generators.len();
        if let Some(g) = self.golden_components.iter().find(|g| g.label.len() != arity) {
            return Err(Error::Parse(format!("{}: label arity {} != {arity}", self.id, g.label.len())));
        }
        let total: usize = self.expected_type.iter().enumerate().map(|(k, h)| (k + 1) * h).sum();
        if total != DIM {
            return Err(Error::Parse(format!("{}: expected type sums to {total}", self.id)));
        }
        Ok(())
    }
}

fn golden_vector(terms: &[Term], basis: Option<&CalibratedBasis>) -> Result<LieElement> {
    let mut v = liealg::zero();
    let mut calibrated = Vec::new();
    for t in terms {
        match t {
            Term::Standard { i, j, c } => v[liealg::index_of(*i, *j)?] += c,
            Term::Calibrated { k, c } => calibrated.push((*k, c.clone())),
        }
    }
    if !calibrated.is_empty() {
        let b = basis.ok_or_else(|| Error::MissingCalibration("calibrated golden table".into()))?;
        let w = b.combine(&calibrated)?;
        for (x, y) in v.iter_mut().zip(&w) {
            *x += y;
        }
    }
    Ok(v)
}

fn normalize_id(id: &str) -> Result<usize> {
    let lower = id.trim().to_ascii_lowercase();
    lower
        .strip_prefix('q')
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|n| (1..=SOURCES.len()).contains(n))
        .ok_or_else(|| Error::UnknownGrading(id.to_string()))
}

pub fn get_spec(id: &str) -> Result<GradingSpec> {
    let n = normalize_id(id)?;
    let spec: GradingSpec = serde_json::from_str(SOURCES[n - 1])?;
    spec.validate()?;
    Ok(spec)
}

pub fn all_specs() -> Result<Vec<GradingSpec>> {
    ids().iter().map(|id| get_spec(id)).collect()
}

/// Expected components of grading `id`, labels in generator order.
pub fn golden_components(id: &str, basis: Option<&CalibratedBasis>) -> Result<Vec<(Vec<FieldElement>, Subspace)>> {
    get_spec(id)?.golden_subspaces(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_parses() {
        let specs = all_specs().unwrap();
        assert_eq!(specs.len(), 14);
        for s in &specs {
            let dims: usize = s.golden_components.iter().map(|g| g.vectors.len()).sum();
            assert_eq!(dims, DIM, "{}", s.id);
        }
    }

    #[test]
    fn generator_lists() {
        let q5 = get_spec("q5").unwrap();
        let names: Vec<GeneratorDesc> = (1..=7).map(|k| GeneratorDesc::AdConst { name: format!("f{k}") }).collect();
        assert_eq!(q5.generators, names);
        let q8 = get_spec("q8").unwrap();
        let names: Vec<GeneratorDesc> =
            [8, 10, 11, 12].iter().map(|k| GeneratorDesc::AdConst { name: format!("g{k}") }).collect();
        assert_eq!(q8.generators, names);
        assert!(matches!(get_spec("q15"), Err(Error::UnknownGrading(_))));
        assert!(get_spec("Q3").is_ok());
    }

    #[test]
    fn golden_examples() {
        let b = |i, j| liealg::basis_b(i, j).unwrap();
        let q3 = golden_components("q3", None).unwrap();
        let label: Vec<FieldElement> = [1, 1, 1, -1, -1].iter().map(|&x| FieldElement::from_int(x)).collect();
        let (_, s) = q3.iter().find(|(l, _)| l == &label).unwrap();
        let expect = Subspace::from_vectors(DIM, &[b(1, 2), b(3, 4), b(5, 6), b(7, 8)]).unwrap();
        assert!(s.equals(&expect).unwrap());

        let q1 = golden_components("q1", None).unwrap();
        let label: Vec<FieldElement> = [1, -1, -1, -1, -1].iter().map(|&x| FieldElement::from_int(x)).collect();
        let (_, s) = q1.iter().find(|(l, _)| l == &label).unwrap();
        let v: Vec<FieldElement> = b(2, 3).iter().zip(&b(1, 4)).map(|(x, y)| x - y).collect();
        assert!(s.equals(&Subspace::from_vectors(DIM, &[v]).unwrap()).unwrap());

        let q7 = golden_components("q7", None).unwrap();
        let label = vec![FieldElement::one(); 5];
        let (_, s) = q7.iter().find(|(l, _)| l == &label).unwrap();
        assert!(s.equals(&Subspace::from_vectors(DIM, &[b(5, 6), b(7, 8)]).unwrap()).unwrap());
    }

    #[test]
    fn first_coordinates_of_q1() {
        let allowed: Vec<FieldElement> = [(1, 4), (1, 2), (1, 1), (2, 1), (4, 1)]
            .iter()
            .map(|&(a, b)| FieldElement::from_ratio(a, b))
            .collect();
        let q1 = get_spec("q1").unwrap();
        assert!(q1.golden_components.iter().all(|g| allowed.contains(&g.label[0])));
    }

    #[test]
    fn calibrated_tables_need_a_basis() {
        assert!(matches!(golden_components("q13", None), Err(Error::MissingCalibration(_))));
        assert!(get_spec("q13").unwrap().needs_calibration());
        assert!(!get_spec("q10").unwrap().needs_calibration());
    }
}
