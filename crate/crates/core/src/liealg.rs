//! The Lie algebra `o(8, C)` of skew-symmetric 8×8 matrices.
//!
//! Coordinates are taken in the basis `b_ij = e_ji − e_ij` (`i < j`) ordered
//! lexicographically, so `b₁₂` has index 0 and `b₇₈` index 27.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::linalg::{Matrix, Vector};

/// Size of the defining representation.
pub const N: usize = 8;
/// Dimension of `o(8)`.
pub const DIM: usize = N * (N - 1) / 2;

/// Coordinate vector of length [`DIM`].
pub type LieElement = Vector;

/// The pair `(i, j)`, 1-based with `i < j`, of basis index `k`.
pub fn pair_of(k: usize) -> (usize, usize) {
    pairs()[k]
}

/// Basis index of `b_ij`, 1-based with `i < j`.
pub fn index_of(i: usize, j: usize) -> Result<usize> {
    if !(1..=N).contains(&i) || !(1..=N).contains(&j) || i >= j {
        return Err(Error::IndexOutOfRange(format!("b_({i},{j})")));
    }
    // Entries before row i: (N-1) + (N-2) + ... + (N-i+1).
    let before = (i - 1) * (2 * N - i) / 2;
    Ok(before + (j - i - 1))
}

fn pairs() -> &'static [(usize, usize); DIM] {
    static P: OnceLock<[(usize, usize); DIM]> = OnceLock::new();
    P.get_or_init(|| {
        let v: Vec<_> = (1..=N).flat_map(|i| (i + 1..=N).map(move |j| (i, j))).collect();
        v.try_into().expect("28 pairs")
    })
}

pub fn zero() -> LieElement {
    vec![FieldElement::zero(); DIM]
}

pub fn basis_b(i: usize, j: usize) -> Result<LieElement> {
    let k = index_of(i, j)?;
    let mut v = zero();
    v[k] = FieldElement::one();
    Ok(v)
}

pub fn unit(k: usize) -> LieElement {
    let mut v = zero();
    v[k] = FieldElement::one();
    v
}

/// The 8×8 matrix `Σ x_k b_k`.
pub fn to_matrix(x: &[FieldElement]) -> Matrix {
    let mut m = Matrix::zeros(N, N);
    for (k, c) in x.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (i, j) = pair_of(k);
        m[(j - 1, i - 1)] = c.clone();
        m[(i - 1, j - 1)] = -c;
    }
    m
}

/// Coordinates of a skew-symmetric matrix; the coefficient of `b_ij` is the entry `(j, i)`.
pub fn from_matrix(m: &Matrix) -> Result<LieElement> {
    if m.rows() != N || m.cols() != N {
        return Err(Error::DimensionMismatch { expected: N, got: m.rows() });
    }
    for a in 0..N {
        for b in 0..N {
            if !(&m[(a, b)] + &m[(b, a)]).is_zero() {
                return Err(Error::Parse(format!("matrix is not skew at ({}, {})", a + 1, b + 1)));
            }
        }
    }
    Ok((0..DIM)
        .map(|k| {
            let (i, j) = pair_of(k);
            m[(j - 1, i - 1)].clone()
        })
        .collect())
}

/// `[b_p, b_q] = sign · b_r` or zero.
pub type StructureEntry = Option<(usize, i8)>;

/// Brackets of basis pairs, computed once from 8×8 commutators.
pub struct StructureConstants {
    table: Vec<StructureEntry>,
    /// For each `p`, the indices `q` with nonzero `[b_p, b_q]`.
    partners: Vec<Vec<usize>>,
}

impl StructureConstants {
    pub fn get(&self, p: usize, q: usize) -> StructureEntry {
        self.table[p * DIM + q]
    }

    /// Coordinate vector of `[b_p, b_q]`.
    pub fn bracket_vector(&self, p: usize, q: usize) -> LieElement {
        let mut v = zero();
        if let Some((r, s)) = self.get(p, q) {
            v[r] = FieldElement::from_int(s as i64);
        }
        v
    }

    /// `[x, y]` using the sparse table.
    pub fn bracket(&self, x: &[FieldElement], y: &[FieldElement]) -> LieElement {
        let mut out = zero();
        for (p, xp) in x.iter().enumerate() {
            if xp.is_zero() {
                continue;
            }
            for &q in &self.partners[p] {
                let yq = &y[q];
                if yq.is_zero() {
                    continue;
                }
                let (r, s) = self.table[p * DIM + q].expect("partner has a bracket");
                let prod = xp * yq;
                if s > 0 {
                    out[r] += &prod;
                } else {
                    out[r] -= &prod;
                }
            }
        }
        out
    }
}

/// Computes the structure constants from matrix commutators.
pub fn build_structure_constants() -> StructureConstants {
    let mats: Vec<Matrix> = (0..DIM).map(|k| to_matrix(&unit(k))).collect();
    let mut table = vec![None; DIM * DIM];
    let mut partners = vec![Vec::new(); DIM];
    for p in 0..DIM {
        for q in 0..DIM {
            let xy = mats[p].mul(&mats[q]).expect("8x8");
            let yx = mats[q].mul(&mats[p]).expect("8x8");
            let c = from_matrix(&xy.sub(&yx).expect("8x8")).expect("commutator is skew");
            let nz: Vec<usize> = (0..DIM).filter(|&k| !c[k].is_zero()).collect();
            match nz.as_slice() {
                [] => {}
                [r] => {
                    let s = if c[*r].is_one() { 1 } else { -1 };
                    table[p * DIM + q] = Some((*r, s));
                    partners[p].push(q);
                }
                _ => unreachable!("basis brackets are single basis vectors up to sign"),
            }
        }
    }
    StructureConstants { table, partners }
}

/// Shared structure constants, built on first use.
pub fn structure_constants() -> &'static StructureConstants {
    static SC: OnceLock<StructureConstants> = OnceLock::new();
    SC.get_or_init(build_structure_constants)
}

/// The Lie bracket `[x, y] = xy − yx` in coordinates.
pub fn bracket(x: &[FieldElement], y: &[FieldElement]) -> LieElement {
    structure_constants().bracket(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing() {
        assert_eq!(index_of(1, 2).unwrap(), 0);
        assert_eq!(index_of(7, 8).unwrap(), 27);
        assert_eq!(index_of(3, 4).unwrap(), 13);
        assert!(index_of(2, 2).is_err());
        assert!(index_of(0, 3).is_err());
        assert!(basis_b(3, 1).is_err());
        for k in 0..DIM {
            let (i, j) = pair_of(k);
            assert_eq!(index_of(i, j).unwrap(), k);
        }
        assert_eq!(basis_b(7, 8).unwrap(), unit(27));
    }

    #[test]
    fn basis_matrices_are_skew() {
        for k in 0..DIM {
            let m = to_matrix(&unit(k));
            let (i, j) = pair_of(k);
            assert!(m[(j - 1, i - 1)].is_one());
            assert_eq!(m[(i - 1, j - 1)], FieldElement::from_int(-1));
            assert_eq!(from_matrix(&m).unwrap(), unit(k));
        }
    }

    #[test]
    fn bracket_examples() {
        let b12 = basis_b(1, 2).unwrap();
        let b13 = basis_b(1, 3).unwrap();
        let b23 = basis_b(2, 3).unwrap();
        assert_eq!(bracket(&b12, &b13), b23);
        assert_eq!(bracket(&b12, &basis_b(3, 4).unwrap()), zero());
        let x: LieElement = (0..DIM as i64).map(FieldElement::from_int).collect();
        assert_eq!(bracket(&x, &x), zero());
    }

    #[test]
    fn table_matches_direct_commutator() {
        let x: LieElement = (0..DIM as i64).map(|k| FieldElement::from_int(k % 5 - 2)).collect();
        let mut y: LieElement = (0..DIM as i64).map(|k| FieldElement::from_int(k % 3)).collect();
        y[4] = FieldElement::i();
        let (mx, my) = (to_matrix(&x), to_matrix(&y));
        let direct = mx.mul(&my).unwrap().sub(&my.mul(&mx).unwrap()).unwrap();
        assert_eq!(from_matrix(&direct).unwrap(), bracket(&x, &y));
    }

    #[test]
    fn antisymmetry_and_diagonal() {
        let sc = structure_constants();
        for p in 0..DIM {
            assert!(sc.get(p, p).is_none());
            for q in 0..DIM {
                let a = sc.get(p, q);
                let b = sc.get(q, p);
                assert_eq!(a.map(|(r, s)| (r, -s)), b);
            }
        }
    }
}
