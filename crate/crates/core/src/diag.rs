//! Simultaneous eigenspace decomposition under commuting semisimple operators.
//!
//! Eigenvalues come from a finite candidate list; a part whose eigenspaces do
//! not add up to its full dimension is reported as an error, so a successful
//! split certifies both semisimplicity and completeness of the candidates.

use rayon::prelude::*;

use crate::autos::{Descriptor, Operator};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::liealg::DIM;
use crate::linalg::{kernel_basis, Matrix, Subspace, Vector};

/// One homogeneous component: an eigenvalue tuple and its subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub label: Vec<FieldElement>,
    pub space: Subspace,
}

/// A labeled decomposition of `o(8)` into joint eigenspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledDecomposition {
    pub generators: Vec<Descriptor>,
    pub parts: Vec<Part>,
}

impl LabeledDecomposition {
    pub fn total_dim(&self) -> usize {
        self.parts.iter().map(|p| p.space.dim()).sum()
    }

    pub fn part_with_label(&self, label: &[FieldElement]) -> Option<&Part> {
        self.parts.iter().find(|p| p.label == label)
    }
}

/// Splits one `a`-invariant subspace into eigenspaces for the given candidates.
pub fn split_part(part: &Subspace, a: &Matrix, candidates: &[FieldElement]) -> Result<Vec<(FieldElement, Subspace)>> {
    let d = part.dim();
    // Matrix of `a` restricted to the part, in the part's RREF basis (columns).
    let mut restricted = Matrix::zeros(d, d);
    for (k, v) in part.basis().iter().enumerate() {
        let image = a.apply(v)?;
        let coords = part
            .coordinates(&image)?
            .ok_or_else(|| Error::SplitFailure(format!("part of dimension {d} is not invariant")))?;
        for (i, c) in coords.into_iter().enumerate() {
            restricted[(i, k)] = c;
        }
    }
    let mut out = Vec::new();
    let mut found = 0;
    for lambda in candidates {
        if found == d {
            break;
        }
        let shifted = restricted.sub(&Matrix::identity(d).scale(lambda))?;
        let ker = kernel_basis(&shifted);
        if ker.dim() == 0 {
            continue;
        }
        let vectors: Vec<Vector> = ker
            .basis()
            .iter()
            .map(|c| {
                let mut v = vec![FieldElement::zero(); part.ambient_dim()];
                for (coef, b) in c.iter().zip(part.basis()) {
                    if coef.is_zero() {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(b) {
                        if !y.is_zero() {
                            *x += &(coef * y);
                        }
                    }
                }
                v
            })
            .collect();
        found += vectors.len();
        out.push((lambda.clone(), Subspace::from_vectors(part.ambient_dim(), &vectors)?));
    }
    if found != d {
        return Err(Error::SplitFailure(format!(
            "eigenspaces cover {found} of {d} dimensions; operator not semisimple here or an eigenvalue is missing from the candidates"
        )));
    }
    Ok(out)
}

/// Splits every part; the result records the index of the originating part.
pub fn split_by_operator(
    parts: &[Subspace],
    a: &Matrix,
    candidates: &[FieldElement],
) -> Result<Vec<(usize, FieldElement, Subspace)>> {
    let pieces: Vec<Result<Vec<(FieldElement, Subspace)>>> =
        parts.par_iter().map(|p| split_part(p, a, candidates)).collect();
    let mut out = Vec::new();
    for (k, r) in pieces.into_iter().enumerate() {
        for (lambda, s) in r? {
            out.push((k, lambda, s));
        }
    }
    Ok(out)
}

/// Fails with the first non-commuting pair of generators.
pub fn check_commuting(gens: &[Operator]) -> Result<()> {
    let pairs: Vec<(usize, usize)> =
        (0..gens.len()).flat_map(|i| (i + 1..gens.len()).map(move |j| (i, j))).collect();
    let bad = pairs.par_iter().find_first(|&&(i, j)| !gens[i].commutes_with(&gens[j]));
    match bad {
        Some(&(i, j)) => Err(Error::NonCommuting(format!(
            "{} and {}",
            gens[i].descriptor, gens[j].descriptor
        ))),
        None => Ok(()),
    }
}

/// Iterated splitting over the generator list; labels follow generator order.
pub fn simultaneous_diagonalize(gens: &[(Operator, Vec<FieldElement>)]) -> Result<LabeledDecomposition> {
    let ops: Vec<Operator> = gens.iter().map(|(o, _)| o.clone()).collect();
    check_commuting(&ops)?;
    let mut parts = vec![Part { label: Vec::new(), space: Subspace::full(DIM) }];
    for (op, candidates) in gens {
        let spaces: Vec<Subspace> = parts.iter().map(|p| p.space.clone()).collect();
        let split = split_by_operator(&spaces, &op.matrix, candidates)
            .map_err(|e| Error::SplitFailure(format!("{}: {e}", op.descriptor)))?;
        parts = split
            .into_iter()
            .map(|(k, lambda, space)| {
                let mut label = parts[k].label.clone();
                label.push(lambda);
                Part { label, space }
            })
            .collect();
    }
    Ok(LabeledDecomposition { generators: ops.into_iter().map(|o| o.descriptor).collect(), parts })
}

/// Convenience wrapper taking candidates from each operator's descriptor.
pub fn diagonalize(gens: &[Operator]) -> Result<LabeledDecomposition> {
    let with: Vec<(Operator, Vec<FieldElement>)> =
        gens.iter().map(|o| Ok((o.clone(), o.candidates()?))).collect::<Result<_>>()?;
    simultaneous_diagonalize(&with)
}
