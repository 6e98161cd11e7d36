//! Certification of a labeled decomposition as a group grading: closure under
//! the bracket, type, universal group and refinement between gradings.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::autos::Coordinate;
use crate::diag::LabeledDecomposition;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::liealg::{bracket, LieElement};
use crate::linalg::{hermite_rows, lattice_coordinates, smith_normal_form, IntMatrix};

/// A finitely generated abelian group `Z^r × Z_{d1} × … × Z_{dk}`, `d1 | d2 | …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupStructure {
    pub free_rank: usize,
    pub invariant_factors: Vec<u64>,
}

impl fmt::Display for GroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut k = 0;
        while k < self.invariant_factors.len() {
            let d = self.invariant_factors[k];
            let run = self.invariant_factors[k..].iter().take_while(|&&x| x == d).count();
            parts.push(if run == 1 { format!("Z_{d}") } else { format!("Z_{d}^{run}") });
            k += run;
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" x "))
        }
    }
}

/// A pair of components whose bracket escapes the product component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureViolation {
    pub left: Vec<FieldElement>,
    pub right: Vec<FieldElement>,
    pub witness: LieElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub pairs_checked: usize,
    pub violations: Vec<ClosureViolation>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn label_product(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

/// Checks `[L_g, L_h] ⊆ L_{gh}` over all ordered pairs of components and all pairs
/// of basis vectors. Nonzero brackets whose product label is not in the support
/// are violations; zero brackets are always accepted.
pub fn verify_closure(d: &LabeledDecomposition) -> ClosureReport {
    let index: HashMap<&[FieldElement], usize> =
        d.parts.iter().enumerate().map(|(k, p)| (p.label.as_slice(), k)).collect();
    let n = d.parts.len();
    let violations: Vec<ClosureViolation> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let index = &index;
            (0..n).filter_map(move |b| {
                let (pa, pb) = (&d.parts[a], &d.parts[b]);
                let target = index.get(label_product(&pa.label, &pb.label).as_slice()).copied();
                for x in pa.space.basis() {
                    for y in pb.space.basis() {
                        let z = bracket(x, y);
                        if z.iter().all(FieldElement::is_zero) {
                            continue;
                        }
                        let ok = target.is_some_and(|t| d.parts[t].space.contains(&z).unwrap_or(false));
                        if !ok {
                            return Some(ClosureViolation { left: pa.label.clone(), right: pb.label.clone(), witness: z });
                        }
                    }
                }
                None
            })
        })
        .collect();
    ClosureReport { pairs_checked: n * n, violations }
}

/// `(h1, …, hs)` with `h_i` the number of components of dimension `i`.
pub fn grading_type(d: &LabeledDecomposition) -> Vec<usize> {
    let max = d.parts.iter().map(|p| p.space.dim()).max().unwrap_or(0);
    let mut t = vec![0; max];
    for p in &d.parts {
        if p.space.dim() > 0 {
            t[p.space.dim() - 1] += 1;
        }
    }
    t
}

/// Integer encoding of a label: logarithms for free coordinates, `ζ`-exponents for
/// finite ones.
pub fn encode_label(label: &[FieldElement], coords: &[Coordinate]) -> Result<Vec<i64>> {
    label
        .iter()
        .zip(coords)
        .map(|(x, c)| match c {
            Coordinate::Free(base) => x
                .log_base(base)
                .ok_or_else(|| Error::MalformedLabel(format!("{x} is not a bounded power of {base}"))),
            Coordinate::Finite => x
                .zeta_exponent()
                .map(i64::from)
                .ok_or_else(|| Error::MalformedLabel(format!("{x} is not a root of unity"))),
        })
        .collect()
}

/// The subgroup generated by the support, computed from its exponent lattice.
pub fn universal_group(d: &LabeledDecomposition) -> Result<GroupStructure> {
    let coords: Vec<Coordinate> = d.generators.iter().map(|g| g.coordinate()).collect::<Result<_>>()?;
    let n = coords.len();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for p in &d.parts {
        rows.push(encode_label(&p.label, &coords)?.into_iter().map(BigInt::from).collect());
    }
    let torsion: Vec<Vec<BigInt>> = coords
        .iter()
        .enumerate()
        .filter(|(_, c)| matches!(c, Coordinate::Finite))
        .map(|(j, _)| (0..n).map(|k| BigInt::from(if k == j { 12 } else { 0 })).collect())
        .collect();
    rows.extend(torsion.iter().cloned());
    // Lattice spanned by the support and the torsion relations, then the
    // relations expressed in a basis of that lattice.
    let lattice = hermite_rows(&IntMatrix::from_rows(&rows, n)?);
    let rank = lattice.rows();
    let relations = torsion
        .iter()
        .map(|t| lattice_coordinates(&lattice, t).ok_or_else(|| Error::MalformedLabel("relation outside lattice".into())))
        .collect::<Result<Vec<_>>>()?;
    let factors: Vec<BigInt> = if relations.is_empty() {
        Vec::new()
    } else {
        smith_normal_form(&IntMatrix::from_rows(&relations, rank)?)
    };
    let nonzero: Vec<&BigInt> = factors.iter().filter(|x| !x.is_zero()).collect();
    let invariant_factors = nonzero
        .iter()
        .filter(|x| !x.is_one())
        .map(|x| x.to_u64().ok_or_else(|| Error::MalformedLabel("invariant factor overflow".into())))
        .collect::<Result<_>>()?;
    Ok(GroupStructure { free_rank: rank - nonzero.len(), invariant_factors })
}

/// True iff every component of `fine` lies in exactly one component of `coarse`
/// and each coarse component is the sum of the fine ones it contains.
pub fn refines(fine: &LabeledDecomposition, coarse: &LabeledDecomposition) -> bool {
    let mut filled = vec![0usize; coarse.parts.len()];
    for f in &fine.parts {
        let hosts: Vec<usize> = coarse
            .parts
            .iter()
            .enumerate()
            .filter(|(_, c)| f.space.is_subspace_of(&c.space).unwrap_or(false))
            .map(|(k, _)| k)
            .collect();
        match hosts.as_slice() {
            [k] => filled[*k] += f.space.dim(),
            _ => return false,
        }
    }
    coarse.parts.iter().zip(&filled).all(|(c, &n)| c.space.dim() == n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autos::{ad_operator, Descriptor, MatrixSpec};
    use crate::diag::{diagonalize, Part};
    use crate::liealg::{self, DIM};
    use crate::linalg::Subspace;

    fn q5() -> LabeledDecomposition {
        let gens: Vec<_> = (1..=7).map(|k| ad_operator(&MatrixSpec::F(k)).unwrap()).collect();
        diagonalize(&gens).unwrap()
    }

    #[test]
    fn group_display() {
        let g = GroupStructure { free_rank: 1, invariant_factors: vec![2, 2, 2, 2] };
        assert_eq!(g.to_string(), "Z x Z_2^4");
        let g = GroupStructure { free_rank: 0, invariant_factors: vec![2, 2, 6] };
        assert_eq!(g.to_string(), "Z_2^2 x Z_6");
    }

    #[test]
    fn q5_closure_type_group() {
        let d = q5();
        assert!(verify_closure(&d).passed());
        assert_eq!(grading_type(&d), vec![28]);
        let g = universal_group(&d).unwrap();
        assert_eq!(g, GroupStructure { free_rank: 0, invariant_factors: vec![2; 7] });
    }

    #[test]
    fn moved_vector_breaks_closure() {
        let mut d = q5();
        let b12 = liealg::basis_b(1, 2).unwrap();
        let b13 = liealg::basis_b(1, 3).unwrap();
        let src = d.parts.iter().position(|p| p.space.contains(&b12).unwrap()).unwrap();
        let dst = d.parts.iter().position(|p| p.space.contains(&b13).unwrap()).unwrap();
        d.parts[dst].space = Subspace::from_vectors(DIM, &[b12, b13]).unwrap();
        d.parts.remove(src);
        let r = verify_closure(&d);
        assert!(!r.passed());
    }

    #[test]
    fn refinement_by_merging() {
        let d = q5();
        assert!(refines(&d, &d));
        let b67 = liealg::basis_b(6, 7).unwrap();
        let b57 = liealg::basis_b(5, 7).unwrap();
        let mut coarse = d.clone();
        coarse.parts.retain(|p| !p.space.contains(&b67).unwrap() && !p.space.contains(&b57).unwrap());
        coarse.parts.push(Part {
            label: vec![FieldElement::zero(); 7],
            space: Subspace::from_vectors(DIM, &[b67, b57]).unwrap(),
        });
        assert!(refines(&d, &coarse));
        assert!(!refines(&coarse, &d));
    }

    #[test]
    fn malformed_labels() {
        let mut d = q5();
        d.generators[0] = Descriptor::Other("opaque".into());
        assert!(universal_group(&d).is_err());
        let coords = [Coordinate::Free(crate::field::rat(2, 1))];
        assert!(encode_label(&[FieldElement::from_int(3)], &coords).is_err());
        assert_eq!(encode_label(&[FieldElement::from_ratio(1, 4)], &coords).unwrap(), vec![-2]);
    }
}
