//! End-to-end computation and verification of catalog gradings.

use std::path::Path;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::calibrate::{calibrate_root_basis, CalibratedBasis};
use crate::catalog::{self, GradingSpec};
use crate::diag::{diagonalize, LabeledDecomposition};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::gradecheck::{grading_type, universal_group, verify_closure, ClosureReport, GroupStructure};

/// Everything checked about one grading.
#[derive(Clone, Debug)]
pub struct GradingReport {
    pub id: String,
    pub mad_label: Option<String>,
    pub dim_sum: usize,
    pub closure: ClosureReport,
    pub grading_type: Vec<usize>,
    pub expected_type: Vec<usize>,
    pub group: GroupStructure,
    pub expected_group: GroupStructure,
    pub golden_total: usize,
    pub golden_matched: usize,
    pub golden_failures: Vec<String>,
}

impl GradingReport {
    pub fn type_matches(&self) -> bool {
        self.grading_type == self.expected_type
    }

    pub fn group_matches(&self) -> bool {
        self.group == self.expected_group
    }

    pub fn golden_passed(&self) -> bool {
        self.golden_matched == self.golden_total
    }

    pub fn passed(&self) -> bool {
        self.dim_sum == crate::liealg::DIM
            && self.closure.passed()
            && self.type_matches()
            && self.group_matches()
            && self.golden_passed()
    }
}

pub fn format_label(label: &[FieldElement]) -> String {
    let parts: Vec<String> = label.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Diagonalizes the generators of `spec`.
pub fn compute(spec: &GradingSpec, basis: Option<&CalibratedBasis>) -> Result<LabeledDecomposition> {
    if spec.needs_calibration() && basis.is_none() {
        return Err(Error::MissingCalibration(spec.id.clone()));
    }
    diagonalize(&spec.operators(basis)?)
}

/// Compares computed components with the golden table.
pub fn compare_golden(
    spec: &GradingSpec,
    d: &LabeledDecomposition,
    basis: Option<&CalibratedBasis>,
) -> Result<(usize, Vec<String>)> {
    let golden = spec.golden_subspaces(basis)?;
    let mut matched = 0;
    let mut failures = Vec::new();
    for (label, expected) in &golden {
        match d.part_with_label(label) {
            Some(part) if part.space.equals(expected)? => matched += 1,
            Some(part) => failures.push(format!(
                "{}: computed dimension {}, expected span of dimension {} differs",
                format_label(label),
                part.space.dim(),
                expected.dim()
            )),
            None => failures.push(format!("{}: no computed component with this label", format_label(label))),
        }
    }
    Ok((matched, failures))
}

/// Builds the full report for one grading.
pub fn verify(spec: &GradingSpec, basis: Option<&CalibratedBasis>) -> Result<(LabeledDecomposition, GradingReport)> {
    let d = compute(spec, basis)?;
    let report = report_for(spec, &d, basis)?;
    Ok((d, report))
}

/// Certifies an already computed (or imported) decomposition against its spec.
pub fn report_for(spec: &GradingSpec, d: &LabeledDecomposition, basis: Option<&CalibratedBasis>) -> Result<GradingReport> {
    let closure = verify_closure(d);
    let group = universal_group(d)?;
    let (golden_matched, golden_failures) = compare_golden(spec, d, basis)?;
    Ok(GradingReport {
        id: spec.id.clone(),
        mad_label: spec.mad_label.clone(),
        dim_sum: d.total_dim(),
        closure,
        grading_type: grading_type(d),
        expected_type: spec.expected_type.clone(),
        group,
        expected_group: spec.expected_group.clone(),
        golden_total: spec.golden_components.len(),
        golden_matched,
        golden_failures,
    })
}

/// Verifies several gradings concurrently; results come back in input order.
pub fn verify_many(ids: &[String], basis: Option<&CalibratedBasis>) -> Vec<Result<GradingReport>> {
    ids.par_iter()
        .map(|id| {
            let spec = catalog::get_spec(id)?;
            verify(&spec, basis).map(|(_, r)| r)
        })
        .collect()
}

/// Loads the calibration from `cache` when present, otherwise searches and
/// writes the cache.
pub fn load_or_calibrate(cache: Option<&Path>) -> Result<CalibratedBasis> {
    if let Some(path) = cache {
        if path.exists() {
            return CalibratedBasis::load(path);
        }
    }
    let (basis, _) = calibrate_root_basis()?;
    if let Some(path) = cache {
        basis.save(path)?;
    }
    Ok(basis)
}

/// Process-wide calibration, searched once.
pub fn shared_calibration() -> std::result::Result<&'static CalibratedBasis, String> {
    static CELL: OnceLock<std::result::Result<CalibratedBasis, String>> = OnceLock::new();
    CELL.get_or_init(|| calibrate_root_basis().map(|(b, _)| b).map_err(|e| e.to_string()))
        .as_ref()
        .map_err(Clone::clone)
}
