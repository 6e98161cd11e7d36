//! Automorphisms of `o(8)`: conjugation by orthogonal matrices, operators given by
//! basis tables over a calibrated root basis, and the four-parameter torus.

use std::fmt;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::calibrate::CalibratedBasis;
use crate::error::{Error, Result};
use crate::field::{FieldElement, Rational};
use crate::liealg::{self, DIM, N};
use crate::linalg::Matrix;

/// An 8×8 matrix with `P·Pᵗ = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthoMatrix(Matrix);

impl OrthoMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows() != N || m.cols() != N {
            return Err(Error::DimensionMismatch { expected: N, got: m.rows() });
        }
        if !m.mul(&m.transpose())?.is_identity() {
            return Err(Error::NotOrthogonal(format!("{m:?}")));
        }
        Ok(OrthoMatrix(m))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn mul(&self, other: &OrthoMatrix) -> OrthoMatrix {
        OrthoMatrix(self.0.mul(&other.0).expect("8x8"))
    }
}

/// The one-parameter families of orthogonal matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamFamily {
    G,
    F,
    H,
    P,
    Q,
    R,
    S,
}

impl ParamFamily {
    pub const ALL: [ParamFamily; 7] = [Self::G, Self::F, Self::H, Self::P, Self::Q, Self::R, Self::S];

    pub fn name(self) -> &'static str {
        match self {
            Self::G => "g",
            Self::F => "f",
            Self::H => "h",
            Self::P => "p",
            Self::Q => "q",
            Self::R => "r",
            Self::S => "s",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }

    /// Rotation planes (1-based) and whether the `(i, j)` entry carries `+d`.
    fn planes(self) -> (&'static [(usize, usize)], bool) {
        match self {
            Self::G => (&[(5, 7), (6, 8)], false),
            Self::F => (&[(1, 3), (2, 4)], false),
            Self::H => (&[(1, 5), (2, 6), (3, 7), (4, 8)], false),
            Self::P => (&[(7, 8)], true),
            Self::Q => (&[(5, 6)], true),
            Self::R => (&[(3, 4)], true),
            Self::S => (&[(1, 2)], true),
        }
    }
}

/// A recipe for one of the named orthogonal matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixSpec {
    /// `g(a)`, `f(a)`, …, `s(a)`.
    Param(ParamFamily, FieldElement),
    /// `f_1 … f_8`.
    F(usize),
    /// `g_1 … g_14`.
    G(usize),
}

impl MatrixSpec {
    /// Parses a constant name such as `f3` or `g14`.
    pub fn constant(name: &str) -> Result<Self> {
        let bad = || Error::UnknownFamily(name.to_string());
        let (head, tail) = name.split_at(name.char_indices().nth(1).map_or(name.len(), |(k, _)| k));
        let n: usize = tail.parse().map_err(|_| bad())?;
        match head {
            "f" => Ok(MatrixSpec::F(n)),
            "g" => Ok(MatrixSpec::G(n)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for MatrixSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixSpec::Param(fam, a) => write!(f, "{}({a})", fam.name()),
            MatrixSpec::F(n) => write!(f, "f{n}"),
            MatrixSpec::G(n) => write!(f, "g{n}"),
        }
    }
}

fn diag_signs(neg: &[usize]) -> Matrix {
    let mut m = Matrix::identity(N);
    for &k in neg {
        m[(k - 1, k - 1)] = FieldElement::from_int(-1);
    }
    m
}

/// `f_n`: the identity with `−1` in position `9 − n`.
fn f_matrix(n: usize) -> Matrix {
    diag_signs(&[9 - n])
}

/// Signed permutation matrix from `(row, col, sign)` entries, 1-based.
fn signed_perm(entries: &[(usize, usize, i64)]) -> Matrix {
    let mut m = Matrix::zeros(N, N);
    for &(i, j, s) in entries {
        m[(i - 1, j - 1)] = FieldElement::from_int(s);
    }
    m
}

fn product_of_f(ns: &[usize]) -> Matrix {
    ns.iter()
        .map(|&n| f_matrix(n))
        .reduce(|a, b| a.mul(&b).expect("8x8"))
        .expect("nonempty product")
}

fn g_matrix(n: usize) -> Result<Matrix> {
    Ok(match n {
        1 => product_of_f(&[8, 7]),
        2 => product_of_f(&[6, 5]),
        3 => signed_perm(&[(1, 2, 1), (2, 1, 1), (3, 4, 1), (4, 3, 1), (5, 6, 1), (6, 5, 1), (7, 8, 1), (8, 7, 1)]),
        4 => product_of_f(&[7, 5, 4, 2]),
        5 => product_of_f(&[8, 6, 4, 2]),
        6 => product_of_f(&[2, 1]),
        7 => product_of_f(&[7, 5, 3, 1]),
        8 => signed_perm(&[(1, 3, 1), (3, 1, 1), (2, 4, 1), (4, 2, 1), (5, 7, 1), (7, 5, 1), (6, 8, 1), (8, 6, 1)]),
        9 => product_of_f(&[8, 7, 4, 3]),
        10 => product_of_f(&[6, 5, 2, 1]),
        11 => signed_perm(&[(1, 2, 1), (2, 1, 1), (3, 4, 1), (4, 3, 1), (5, 5, -1), (6, 6, 1), (7, 7, -1), (8, 8, 1)]),
        12 => signed_perm(&[(1, 1, 1), (2, 2, -1), (3, 3, 1), (4, 4, -1), (5, 6, -1), (6, 5, 1), (7, 8, -1), (8, 7, 1)]),
        13 => product_of_f(&[4, 3, 2, 1]),
        14 => signed_perm(&[(1, 5, 1), (2, 6, 1), (3, 7, 1), (4, 8, 1), (5, 1, 1), (6, 2, 1), (7, 3, 1), (8, 4, 1)]),
        _ => return Err(Error::UnknownFamily(format!("g{n}"))),
    })
}

/// Builds the named matrix and certifies its orthogonality.
pub fn build_matrix(spec: &MatrixSpec) -> Result<OrthoMatrix> {
    let m = match spec {
        MatrixSpec::F(n) if (1..=8).contains(n) => f_matrix(*n),
        MatrixSpec::F(n) => return Err(Error::UnknownFamily(format!("f{n}"))),
        MatrixSpec::G(n) => g_matrix(*n)?,
        MatrixSpec::Param(fam, a) => {
            if a.is_zero() {
                return Err(Error::ZeroParameter(fam.name().to_string()));
            }
            let inv = a.inv()?;
            let half = Rational::new(1.into(), 2.into());
            let c = (a + &inv).scale(&half);
            let d = &FieldElement::i().scale(&half) * &(a - &inv);
            let (planes, plus_upper) = fam.planes();
            let mut m = Matrix::identity(N);
            for &(i, j) in planes {
                let (i, j) = (i - 1, j - 1);
                m[(i, i)] = c.clone();
                m[(j, j)] = c.clone();
                let (up, down) = if plus_upper { (d.clone(), -&d) } else { (-&d, d.clone()) };
                m[(i, j)] = up;
                m[(j, i)] = down;
            }
            m
        }
    };
    OrthoMatrix::new(m)
}

/// What a generator is; drives eigenvalue candidates and group coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor {
    Ad(MatrixSpec),
    Table { name: String, power: u32 },
    Torus { params: [FieldElement; 4], base: Option<Rational> },
    Other(String),
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Ad(spec) => write!(f, "Ad {spec}"),
            Descriptor::Table { name, power: 1 } => f.write_str(name),
            Descriptor::Table { name, power } => write!(f, "{name}^{power}"),
            Descriptor::Torus { params, .. } => {
                let p: Vec<String> = params.iter().map(|x| x.to_string()).collect();
                write!(f, "t({})", p.join(", "))
            }
            Descriptor::Other(s) => f.write_str(s),
        }
    }
}

/// How a generator's eigenvalues translate into group coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coordinate {
    /// Eigenvalues are integral powers of a rational base `> 1`.
    Free(Rational),
    /// Eigenvalues are 12th roots of unity.
    Finite,
}

impl Descriptor {
    pub fn coordinate(&self) -> Result<Coordinate> {
        match self {
            Descriptor::Ad(MatrixSpec::Param(fam, a)) => {
                if let Some(r) = a.as_rational() {
                    if r.is_positive() && !r.is_one() {
                        let base = if r > &Rational::one() { r.clone() } else { r.recip() };
                        return Ok(Coordinate::Free(base));
                    }
                }
                if a.root_of_unity_order().is_some() {
                    return Ok(Coordinate::Finite);
                }
                Err(Error::UnknownFamily(format!("{}({a}) has no finite eigenvalue set", fam.name())))
            }
            Descriptor::Ad(_) | Descriptor::Table { .. } => Ok(Coordinate::Finite),
            Descriptor::Torus { base: Some(b), .. } if b > &Rational::one() => Ok(Coordinate::Free(b.clone())),
            Descriptor::Torus { params, base: None } => {
                if params.iter().all(|p| p.root_of_unity_order().is_some()) {
                    Ok(Coordinate::Finite)
                } else {
                    Err(Error::UnknownFamily("torus parameters are not roots of unity".into()))
                }
            }
            other => Err(Error::UnknownFamily(format!("no eigenvalue data for {other}"))),
        }
    }
}

/// A finite superset of the spectrum of the operator described.
pub fn candidate_eigenvalues(d: &Descriptor) -> Result<Vec<FieldElement>> {
    if let Descriptor::Ad(MatrixSpec::F(_)) = d {
        return Ok(vec![FieldElement::one(), FieldElement::from_int(-1)]);
    }
    match d.coordinate()? {
        Coordinate::Free(base) => {
            let b = FieldElement::from_rational(base);
            (-2..=2).map(|k| b.pow(k)).collect()
        }
        Coordinate::Finite => Ok((0..12).map(FieldElement::zeta_pow).collect()),
    }
}

/// A linear operator on `o(8)` in `b_ij` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator {
    pub matrix: Matrix,
    pub descriptor: Descriptor,
}

impl Operator {
    pub fn new(matrix: Matrix, descriptor: Descriptor) -> Result<Self> {
        if matrix.rows() != DIM || matrix.cols() != DIM {
            return Err(Error::DimensionMismatch { expected: DIM, got: matrix.rows() });
        }
        Ok(Operator { matrix, descriptor })
    }

    pub fn apply(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        self.matrix.apply(v).expect("28-vector")
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Operator) -> Matrix {
        self.matrix.mul(&other.matrix).expect("28x28")
    }

    pub fn commutes_with(&self, other: &Operator) -> bool {
        self.compose(other) == other.compose(self)
    }

    pub fn candidates(&self) -> Result<Vec<FieldElement>> {
        candidate_eigenvalues(&self.descriptor)
    }
}

/// `Ad P : x ↦ P⁻¹ x P = Pᵗ x P`.
pub fn ad_operator_matrix(p: &OrthoMatrix) -> Matrix {
    let pm = p.matrix();
    let pt = pm.transpose();
    let cols: Vec<Vec<FieldElement>> = (0..DIM)
        .map(|k| {
            let x = liealg::to_matrix(&liealg::unit(k));
            let y = pt.mul(&x).and_then(|t| t.mul(pm)).expect("8x8");
            liealg::from_matrix(&y).expect("conjugate of a skew matrix by an orthogonal one is skew")
        })
        .collect();
    Matrix::from_columns(&cols, DIM).expect("28 columns")
}

pub fn ad_operator(spec: &MatrixSpec) -> Result<Operator> {
    let p = build_matrix(spec)?;
    Operator::new(ad_operator_matrix(&p), Descriptor::Ad(spec.clone()))
}

/// `A(b_source) = Σ coeff · b_target` over an abstract 28-element basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BasisOperatorTable {
    entries: Vec<(usize, usize, FieldElement)>,
}

impl BasisOperatorTable {
    /// Entries are `(target, source, coeff)`, 1-based. Repeated pairs are rejected.
    pub fn new(entries: Vec<(usize, usize, FieldElement)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for (t, s, _) in &entries {
            if !(1..=DIM).contains(t) || !(1..=DIM).contains(s) {
                return Err(Error::IndexOutOfRange(format!("table entry ({t}, {s})")));
            }
            if !seen.insert((*t, *s)) {
                return Err(Error::Parse(format!("duplicate table entry ({t}, {s})")));
            }
        }
        Ok(BasisOperatorTable { entries })
    }

    pub fn entries(&self) -> &[(usize, usize, FieldElement)] {
        &self.entries
    }

    /// Matrix in the abstract basis: column `source` holds the image of `b_source`.
    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(DIM, DIM);
        for (t, s, c) in &self.entries {
            m[(t - 1, s - 1)] += c;
        }
        m
    }
}

/// The printed terms `(coeff, i, j)` of the two table operators.
const H1_TERMS: [(i64, usize, usize); 33] = [
    (1, 2, 4), (1, 3, 1), (1, 3, 2), (1, 5, 27), (1, 6, 8), (1, 7, 9), (1, 8, 25),
    (1, 11, 12), (1, 12, 26), (1, 13, 18), (1, 14, 23), (1, 17, 15), (1, 18, 20),
    (1, 19, 21), (1, 20, 13), (1, 23, 24), (1, 24, 14), (1, 25, 6), (1, 26, 11),
    (-1, 1, 1), (-1, 1, 2), (-1, 1, 3), (-1, 1, 4), (-1, 4, 2), (-1, 4, 4), (-1, 9, 22),
    (-1, 10, 19), (-1, 15, 28), (-1, 16, 5), (-1, 21, 10), (-1, 22, 7), (-1, 27, 16),
    (-1, 28, 17),
];

const H2_TERMS: [(i64, usize, usize); 33] = [
    (1, 2, 2), (1, 2, 3), (1, 2, 4), (1, 4, 1), (1, 5, 26), (1, 6, 16), (1, 7, 19),
    (1, 8, 5), (1, 10, 22), (1, 11, 13), (1, 12, 18), (1, 14, 8), (1, 15, 23), (1, 16, 12),
    (1, 17, 14), (1, 18, 28), (1, 19, 7), (1, 20, 17), (1, 22, 10), (1, 23, 25), (1, 24, 6),
    (1, 26, 20), (1, 27, 11), (1, 28, 24), (-1, 1, 1), (-1, 1, 3), (-1, 1, 4), (-1, 3, 3),
    (-1, 9, 21), (-1, 13, 15), (-1, 21, 9), (-1, 25, 27), (-2, 1, 2),
];

/// The named table operator `H1` or `H2`.
///
/// A printed term `(c, i, j)` is read as sending `b_i` to `c·b_j`. This is the
/// reading under which the tables are automorphisms with the expected eigenspaces;
/// the opposite reading fails both tests.
pub fn h_table(name: &str) -> Result<BasisOperatorTable> {
    let terms: &[(i64, usize, usize)] = match name {
        "H1" => &H1_TERMS,
        "H2" => &H2_TERMS,
        _ => return Err(Error::UnknownFamily(name.to_string())),
    };
    BasisOperatorTable::new(terms.iter().map(|&(c, i, j)| (j, i, FieldElement::from_int(c))).collect())
}

/// Exponents of the twelve positive torus monomials in `(x, y, z, u)`.
pub const MONOMIALS: [[i64; 4]; 12] = [
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 0, 1, 0],
    [0, 0, 0, 1],
    [1, 1, 0, 0],
    [1, 1, 1, 0],
    [0, 1, 1, 0],
    [1, 1, 0, 1],
    [0, 1, 0, 1],
    [1, 2, 1, 1],
    [1, 1, 1, 1],
    [0, 1, 1, 1],
];

/// Exponent vector of the monomial at basis position `k` (1-based, `5 ≤ k ≤ 28`).
pub fn monomial_exponent(k: usize) -> [i64; 4] {
    let m = MONOMIALS[(k - 5) % 12];
    if k < 17 { m } else { m.map(|e| -e) }
}

/// The 28 torus eigenvalues over the calibrated basis; the first four are 1.
pub fn torus_diagonal(params: &[FieldElement; 4]) -> Result<Vec<FieldElement>> {
    if params.iter().any(FieldElement::is_zero) {
        return Err(Error::ZeroParameter("t".into()));
    }
    let mut out = vec![FieldElement::one(); 4];
    for k in 5..=DIM {
        let e = monomial_exponent(k);
        let mut v = FieldElement::one();
        for (p, &n) in params.iter().zip(&e) {
            v = &v * &p.pow(n)?;
        }
        out.push(v);
    }
    Ok(out)
}

fn require_basis<'a>(b: Option<&'a CalibratedBasis>, what: &str) -> Result<&'a CalibratedBasis> {
    b.ok_or_else(|| Error::MissingCalibration(what.to_string()))
}

/// `B · T · B⁻¹`: the table operator transported to `b_ij` coordinates.
pub fn operator_from_table(
    t: &BasisOperatorTable,
    basis: Option<&CalibratedBasis>,
    descriptor: Descriptor,
) -> Result<Operator> {
    let b = require_basis(basis, &descriptor.to_string())?;
    Operator::new(b.conjugate(&t.to_matrix())?, descriptor)
}

pub fn torus_operator(params: [FieldElement; 4], base: Option<Rational>, basis: Option<&CalibratedBasis>) -> Result<Operator> {
    let descriptor = Descriptor::Torus { params: params.clone(), base };
    let b = require_basis(basis, &descriptor.to_string())?;
    let diag = torus_diagonal(&params)?;
    let mut d = Matrix::zeros(DIM, DIM);
    for (k, v) in diag.into_iter().enumerate() {
        d[(k, k)] = v;
    }
    Operator::new(b.conjugate(&d)?, descriptor)
}

/// Basis pairs `(p, q)`, `p < q`, with `A[b_p, b_q] ≠ [A b_p, A b_q]`.
pub fn automorphism_violations(a: &Matrix) -> Vec<(usize, usize)> {
    let sc = liealg::structure_constants();
    let cols: Vec<Vec<FieldElement>> = (0..DIM).map(|k| a.column(k)).collect();
    let mut bad = Vec::new();
    for p in 0..DIM {
        for q in p + 1..DIM {
            let lhs = match sc.get(p, q) {
                Some((r, s)) => cols[r].iter().map(|x| x.scale(&Rational::from_integer((s as i64).into()))).collect(),
                None => liealg::zero(),
            };
            if lhs != sc.bracket(&cols[p], &cols[q]) {
                bad.push((p, q));
            }
        }
    }
    bad
}

/// True iff `a` is invertible and preserves every basis bracket.
pub fn is_automorphism(a: &Matrix) -> bool {
    a.rows() == DIM && a.cols() == DIM && a.rank() == DIM && automorphism_violations(a).is_empty()
}

/// Smallest `n ≤ max` with `aⁿ = 1`.
pub fn operator_order(a: &Matrix, max: u32) -> Option<u32> {
    let mut acc = a.clone();
    for n in 1..=max {
        if acc.is_identity() {
            return Some(n);
        }
        acc = acc.mul(a).ok()?;
    }
    None
}
