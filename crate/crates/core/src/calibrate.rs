//! Calibration of the root basis on which the table operators `H1`, `H2` and the
//! torus `t(x, y, z, u)` are defined.
//!
//! The basis is built from the Cartan grading: four Cartan vectors followed by
//! 24 root vectors, ordered so that position `k` carries the root whose torus
//! monomial is listed at `k`. The procedure:
//!
//! 1. diagonalize `Ad p(2), Ad s(7), Ad r(5), Ad q(3)` and read each root as the
//!    exponent vector of its label in bases `(2, 7, 5, 3)`;
//! 2. enumerate lattice maps `Z⁴ → Z⁴` carrying the monomial exponents onto the
//!    roots;
//! 3. for a map, choose the Cartan vectors by solving the linear intertwining
//!    equations of both tables (simple coroots are preferred);
//! 4. solve for root-vector scalings as a multiplicative system through the
//!    Smith normal form of its exponent matrix;
//! 5. accept when both tables are bracket-preserving.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::autos::{self, ad_operator, automorphism_violations, h_table, monomial_exponent, MatrixSpec, ParamFamily};
use crate::diag::diagonalize;
use crate::error::{Error, Result};
use crate::field::{FieldElement, Rational};
use crate::liealg::{self, bracket, LieElement, DIM};
use crate::linalg::{kernel_basis, smith_with_transforms, IntMatrix, Matrix, Subspace};

/// Exponent vector in `Z⁴`.
pub type Exp = [i64; 4];

/// Bases used to read roots off the Cartan grading labels.
pub const CARTAN_BASES: [i64; 4] = [2, 7, 5, 3];

/// How a calibration was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// Columns are the root exponents assigned to `x, y, z, u`.
    pub lattice_map: [[i64; 4]; 4],
    /// Index of the map in the deterministic enumeration order.
    pub lattice_map_index: usize,
    /// Cartan vectors in simple-coroot coordinates (column `j` gives vector `j`).
    pub cartan_combination: Vec<Vec<FieldElement>>,
    /// Factors applied to the normalized root vectors at positions 5..28.
    pub scalings: Vec<FieldElement>,
}

/// The ordered basis `B`; column `k` of [`CalibratedBasis::matrix`] is `B_{k+1}`.
#[derive(Clone, Debug)]
pub struct CalibratedBasis {
    vectors: Vec<LieElement>,
    root_exponents: Vec<Exp>,
    provenance: Provenance,
    matrix: Matrix,
    inverse: Matrix,
}

#[derive(Serialize, Deserialize)]
struct CalibrationFile {
    vectors: Vec<Vec<FieldElement>>,
    root_exponents: Vec<Exp>,
    provenance: Provenance,
}

impl CalibratedBasis {
    pub fn new(vectors: Vec<LieElement>, provenance: Provenance) -> Result<Self> {
        if vectors.len() != DIM || vectors.iter().any(|v| v.len() != DIM) {
            return Err(Error::DimensionMismatch { expected: DIM, got: vectors.len() });
        }
        let matrix = Matrix::from_columns(&vectors, DIM)?;
        let inverse = matrix
            .inverse()
            .map_err(|_| Error::CalibrationFailed("basis vectors are linearly dependent".into()))?;
        let root_exponents = (5..=DIM).map(monomial_exponent).collect();
        Ok(CalibratedBasis { vectors, root_exponents, provenance, matrix, inverse })
    }

    pub fn vectors(&self) -> &[LieElement] {
        &self.vectors
    }

    /// Torus-monomial exponents of positions 5..28.
    pub fn root_exponents(&self) -> &[Exp] {
        &self.root_exponents
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `B · t · B⁻¹` for an operator `t` written in the basis `B`.
    pub fn conjugate(&self, t: &Matrix) -> Result<Matrix> {
        self.matrix.mul(t)?.mul(&self.inverse)
    }

    /// Standard coordinates of `Σ c_k B_k` for 1-based positions `k`.
    pub fn combine(&self, terms: &[(usize, FieldElement)]) -> Result<LieElement> {
        let mut v = liealg::zero();
        for (k, c) in terms {
            let b = self
                .vectors
                .get(k.wrapping_sub(1))
                .ok_or_else(|| Error::IndexOutOfRange(format!("basis position {k}")))?;
            for (x, y) in v.iter_mut().zip(b) {
                *x += &(c * y);
            }
        }
        Ok(v)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = CalibrationFile {
            vectors: self.vectors.clone(),
            root_exponents: self.root_exponents.clone(),
            provenance: self.provenance.clone(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// Loads a cached calibration and re-certifies it.
    pub fn from_json(s: &str) -> Result<Self> {
        let file: CalibrationFile = serde_json::from_str(s)?;
        let b = CalibratedBasis::new(file.vectors, file.provenance)?;
        if b.root_exponents != file.root_exponents {
            return Err(Error::CalibrationFailed("cached root exponents do not match the torus monomials".into()));
        }
        let report = certify(&b)?;
        if !report.passed() {
            return Err(Error::CalibrationFailed(report.describe_failures()));
        }
        Ok(b)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Outcome of checking a calibration against its defining invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalibrationReport {
    pub h1_violations: Vec<(usize, usize)>,
    pub h2_violations: Vec<(usize, usize)>,
    pub h1_order: Option<u32>,
    pub h2_order: Option<u32>,
    pub cartan_ok: bool,
    /// Whether `t(x, y, z, u)` at generic parameters is bracket-preserving.
    pub roots_ok: bool,
}

impl CalibrationReport {
    pub fn passed(&self) -> bool {
        self.h1_violations.is_empty()
            && self.h2_violations.is_empty()
            && self.h1_order == Some(3)
            && self.h2_order == Some(6)
            && self.cartan_ok
            && self.roots_ok
    }

    pub fn describe_failures(&self) -> String {
        let mut out = Vec::new();
        for (name, v) in [("H1", &self.h1_violations), ("H2", &self.h2_violations)] {
            if !v.is_empty() {
                let shown: Vec<String> = v
                    .iter()
                    .take(12)
                    .map(|&(p, q)| {
                        let (a, b) = (liealg::pair_of(p), liealg::pair_of(q));
                        format!("A[b{}{}, b{}{}] != [A b{}{}, A b{}{}]", a.0, a.1, b.0, b.1, a.0, a.1, b.0, b.1)
                    })
                    .collect();
                out.push(format!("{name}: {} violated bracket equations, e.g. {}", v.len(), shown.join("; ")));
            }
        }
        if self.h1_order != Some(3) {
            out.push(format!("H1 order {:?}, expected 3", self.h1_order));
        }
        if self.h2_order != Some(6) {
            out.push(format!("H2 order {:?}, expected 6", self.h2_order));
        }
        if !self.cartan_ok {
            out.push("positions 1-4 do not span the Cartan subalgebra".into());
        }
        if !self.roots_ok {
            out.push("the torus is not an automorphism over this basis".into());
        }
        out.join("\n")
    }
}

/// The standard Cartan subalgebra `⟨b12, b34, b56, b78⟩`.
pub fn standard_cartan() -> Subspace {
    let v: Vec<LieElement> = [(1, 2), (3, 4), (5, 6), (7, 8)]
        .iter()
        .map(|&(i, j)| liealg::basis_b(i, j).expect("valid pair"))
        .collect();
    Subspace::from_vectors(DIM, &v).expect("28-vectors")
}

/// Checks the automorphism property of both tables, their orders, and the shape of `B`.
pub fn certify(b: &CalibratedBasis) -> Result<CalibrationReport> {
    let t1 = h_table("H1")?.to_matrix();
    let t2 = h_table("H2")?.to_matrix();
    let a1 = b.conjugate(&t1)?;
    let a2 = b.conjugate(&t2)?;
    let (h1_violations, h2_violations) =
        rayon::join(|| automorphism_violations(&a1), || automorphism_violations(&a2));
    let cartan = Subspace::from_vectors(DIM, &b.vectors[..4])?;
    let cartan_ok = cartan.equals(&standard_cartan())?;
    // A generic torus element must itself be an automorphism, which forces each
    // root position to carry a root compatible with its monomial.
    let generic = [2, 3, 5, 7].map(FieldElement::from_int);
    let t = autos::torus_operator(generic, None, Some(b))?;
    let roots_ok = automorphism_violations(&t.matrix).is_empty();
    Ok(CalibrationReport {
        h1_violations,
        h2_violations,
        h1_order: autos::operator_order(&a1, 12),
        h2_order: autos::operator_order(&a2, 12),
        cartan_ok,
        roots_ok,
    })
}

/// Roots of the Cartan grading, keyed by exponent vector, with normalized root vectors.
pub struct CartanData {
    pub roots: BTreeMap<Exp, LieElement>,
    pub cartan: Subspace,
}

/// Diagonalizes the Cartan grading generators and reads off the roots.
pub fn cartan_data() -> Result<CartanData> {
    let specs = [(ParamFamily::P, 2), (ParamFamily::S, 7), (ParamFamily::R, 5), (ParamFamily::Q, 3)];
    let gens = specs
        .iter()
        .map(|&(f, a)| ad_operator(&MatrixSpec::Param(f, FieldElement::from_int(a))))
        .collect::<Result<Vec<_>>>()?;
    let d = diagonalize(&gens)?;
    let mut roots = BTreeMap::new();
    let mut cartan = None;
    for part in &d.parts {
        let mut e = [0i64; 4];
        for (k, (x, &base)) in part.label.iter().zip(&CARTAN_BASES).enumerate() {
            e[k] = x
                .log_base(&Rational::from_integer(base.into()))
                .ok_or_else(|| Error::MalformedLabel(format!("{x} is not a power of {base}")))?;
        }
        if e == [0; 4] {
            cartan = Some(part.space.clone());
        } else {
            if part.space.dim() != 1 {
                return Err(Error::CalibrationFailed(format!("root space {e:?} has dimension {}", part.space.dim())));
            }
            roots.insert(e, part.space.basis()[0].clone());
        }
    }
    let cartan = cartan.ok_or_else(|| Error::CalibrationFailed("no identity component".into()))?;
    if roots.len() != 24 || cartan.dim() != 4 {
        return Err(Error::CalibrationFailed(format!("{} roots and Cartan dimension {}", roots.len(), cartan.dim())));
    }
    Ok(CartanData { roots, cartan })
}

fn apply_map(m: &[[i64; 4]; 4], e: &Exp) -> Exp {
    let mut out = [0i64; 4];
    for (col, &c) in m.iter().zip(e) {
        for r in 0..4 {
            out[r] += col[r] * c;
        }
    }
    out
}

/// All lattice maps sending the monomial exponents onto `roots`, in enumeration order.
/// `map[c]` is the image of the `c`-th unit vector.
pub fn lattice_maps(roots: &[Exp]) -> Vec<[[i64; 4]; 4]> {
    let set: std::collections::HashSet<Exp> = roots.iter().copied().collect();
    let mons: Vec<Exp> = (5..=DIM).map(monomial_exponent).collect();
    let mut out = Vec::new();
    for a in roots {
        for b in roots {
            for c in roots {
                for d in roots {
                    let m = [*a, *b, *c, *d];
                    if !mons.iter().all(|e| set.contains(&apply_map(&m, e))) {
                        continue;
                    }
                    let imgs: std::collections::HashSet<Exp> = mons.iter().map(|e| apply_map(&m, e)).collect();
                    if imgs.len() == 24 {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// `c` with `v = c·w`, if `v` is a multiple of the nonzero vector `w`.
fn ratio(v: &[FieldElement], w: &[FieldElement]) -> Option<FieldElement> {
    let k = w.iter().position(|x| !x.is_zero())?;
    let c = &v[k] / &w[k];
    v.iter().zip(w).all(|(a, b)| a == &(&c * b)).then_some(c)
}

/// The signed permutation on root positions of a table; `None` if the table does
/// not have that shape.
struct TableShape {
    cartan: [[FieldElement; 4]; 4],
    sigma: HashMap<usize, usize>,
    sign: HashMap<usize, FieldElement>,
    matrix: Matrix,
}

fn table_shape(t: &Matrix) -> Result<TableShape> {
    let fail = |m: &str| Error::CalibrationFailed(m.to_string());
    let mut cartan: [[FieldElement; 4]; 4] = Default::default();
    for j in 0..4 {
        for i in 0..DIM {
            if i >= 4 && !t[(i, j)].is_zero() {
                return Err(fail("table mixes Cartan and root positions"));
            }
            if i < 4 {
                cartan[i][j] = t[(i, j)].clone();
            }
        }
    }
    let mut sigma = HashMap::new();
    let mut sign = HashMap::new();
    for j in 4..DIM {
        let nz: Vec<usize> = (0..DIM).filter(|&i| !t[(i, j)].is_zero()).collect();
        match nz.as_slice() {
            [i] if *i >= 4 => {
                sigma.insert(j + 1, i + 1);
                sign.insert(j + 1, t[(*i, j)].clone());
            }
            _ => return Err(fail("table is not monomial on root positions")),
        }
    }
    Ok(TableShape { cartan, sigma, sign, matrix: t.clone() })
}

/// Matrix `S` with `S · exp(k) = exp(σ k)`: columns are the images of `x, y, z, u`.
fn sigma_linear(shape: &TableShape) -> Result<[[i64; 4]; 4]> {
    let mut s = [[0i64; 4]; 4];
    for c in 0..4 {
        s[c] = monomial_exponent(shape.sigma[&(5 + c)]);
    }
    for k in 5..=DIM {
        if apply_map(&s, &monomial_exponent(k)) != monomial_exponent(shape.sigma[&k]) {
            return Err(Error::CalibrationFailed("table permutation is not linear on roots".into()));
        }
    }
    Ok(s)
}

/// Solves `S X = X T` for both tables; returns a preferred invertible solution
/// (row index = coroot, column index = Cartan position).
fn cartan_intertwiner(shapes: &[(TableShape, [[i64; 4]; 4])]) -> Result<Vec<Vec<FieldElement>>> {
    let identity: Vec<Vec<FieldElement>> =
        (0..4).map(|i| (0..4).map(|j| FieldElement::from_int((i == j) as i64)).collect()).collect();
    let satisfies = |x: &Vec<Vec<FieldElement>>| {
        shapes.iter().all(|(sh, s)| {
            (0..4).all(|a| {
                (0..4).all(|b| {
                    let mut lhs = FieldElement::zero();
                    for k in 0..4 {
                        lhs += &x[k][b].scale(&Rational::from_integer(s[k][a].into()));
                        lhs -= &(&x[a][k] * &sh.cartan[k][b]);
                    }
                    lhs.is_zero()
                })
            })
        })
    };
    if satisfies(&identity) {
        return Ok(identity);
    }
    // General solution space of the 16 unknowns x[s][b] (index 4s + b).
    let mut rows = Vec::new();
    for (sh, s) in shapes {
        for a in 0..4 {
            for b in 0..4 {
                let mut row = vec![FieldElement::zero(); 16];
                for k in 0..4 {
                    row[4 * k + b] += &FieldElement::from_int(s[k][a]);
                    row[4 * a + k] -= &sh.cartan[k][b];
                }
                rows.push(row);
            }
        }
    }
    let ker = kernel_basis(&Matrix::from_rows(&rows, 16)?);
    let basis = ker.basis();
    let to_x = |v: &[FieldElement]| -> Vec<Vec<FieldElement>> { (0..4).map(|s| v[4 * s..4 * s + 4].to_vec()).collect() };
    let det_unit = |x: &Vec<Vec<FieldElement>>| -> Option<bool> {
        let m = Matrix::from_rows(x, 4).ok()?;
        if m.rank() < 4 {
            return None;
        }
        let integral = x.iter().flatten().all(|e| e.as_rational().is_some_and(|r| r.is_integer()));
        let inv = m.inverse().ok()?;
        let inv_integral = (0..4).all(|i| (0..4).all(|j| inv[(i, j)].as_rational().is_some_and(|r| r.is_integer())));
        Some(integral && inv_integral)
    };
    let dim = basis.len();
    let mut fallback = None;
    let range = [0i64, 1, -1, 2, -2];
    let total = range.len().pow(dim as u32);
    for idx in 0..total {
        let mut v = vec![FieldElement::zero(); 16];
        let mut rem = idx;
        for b in basis {
            let c = FieldElement::from_int(range[rem % range.len()]);
            rem /= range.len();
            for (x, y) in v.iter_mut().zip(b) {
                *x += &(&c * y);
            }
        }
        let x = to_x(&v);
        match det_unit(&x) {
            Some(true) => return Ok(x),
            Some(false) if fallback.is_none() => fallback = Some(x),
            _ => {}
        }
    }
    fallback.ok_or_else(|| Error::CalibrationFailed("no invertible Cartan intertwiner".into()))
}

/// A `d`-th root of `r` inside the field, for roots of unity and rationals.
fn field_root(r: &FieldElement, d: u32) -> Option<FieldElement> {
    if d == 1 {
        return Some(r.clone());
    }
    if let Some(k) = r.zeta_exponent() {
        return (0..12).map(FieldElement::zeta_pow).find(|z| z.pow(d as i64).ok().as_ref() == Some(&FieldElement::zeta_pow(k as i64)));
    }
    let q = r.as_rational()?;
    let root = |n: &BigInt| -> Option<BigInt> {
        let a = n.abs().nth_root(d);
        (a.pow(d) == n.abs()).then_some(a)
    };
    let (num, den) = (root(q.numer())?, root(q.denom())?);
    let mut x = Rational::new(num, den);
    if q.is_negative() {
        if d % 2 == 0 {
            return None;
        }
        x = -x;
    }
    Some(FieldElement::from_rational(x))
}

fn pow_big(x: &FieldElement, e: &BigInt) -> Result<FieldElement> {
    let e = e.to_i64().ok_or_else(|| Error::CalibrationFailed("exponent overflow".into()))?;
    x.pow(e)
}

/// One attempt for a fixed lattice map. Returns the basis, or the basis that
/// came closest together with its report.
fn attempt(
    data: &CartanData,
    map: &[[i64; 4]; 4],
    map_index: usize,
    shapes: &[(TableShape, [[i64; 4]; 4])],
) -> Result<std::result::Result<CalibratedBasis, (CalibrationReport, CalibratedBasis)>> {
    let fail = |m: String| Error::CalibrationFailed(m);
    // Root vector at each position.
    let mut ev: HashMap<usize, LieElement> = HashMap::new();
    let mut pos_of: HashMap<Exp, usize> = HashMap::new();
    for k in 5..=DIM {
        let root = apply_map(map, &monomial_exponent(k));
        ev.insert(k, data.roots[&root].clone());
        pos_of.insert(monomial_exponent(k), k);
    }
    // Simple coroots h = 2[e, e_-] / α([e, e_-]) for positions 5..8.
    let mut coroots = Vec::new();
    for k in 5..=8 {
        let h = bracket(&ev[&k], &ev[&(k + 12)]);
        let a = ratio(&bracket(&h, &ev[&k]), &ev[&k]).ok_or_else(|| fail(format!("position {k} is not a root vector")))?;
        let two = FieldElement::from_int(2);
        let c = &two / &a;
        coroots.push(h.iter().map(|x| x * &c).collect::<Vec<_>>());
    }
    let x = cartan_intertwiner(shapes)?;
    let cartan_vectors: Vec<LieElement> = (0..4)
        .map(|j| {
            let mut v = liealg::zero();
            for (s, h) in coroots.iter().enumerate() {
                if x[s][j].is_zero() {
                    continue;
                }
                for (a, b) in v.iter_mut().zip(h) {
                    *a += &(&x[s][j] * b);
                }
            }
            v
        })
        .collect();
    let cartan_space = Subspace::from_vectors(DIM, &cartan_vectors)?;
    // Converts RREF coordinates in the Cartan span into coordinates over `cartan_vectors`.
    let mut to_rref = Matrix::zeros(4, 4);
    for (j, v) in cartan_vectors.iter().enumerate() {
        let c = cartan_space.coordinates(v)?.expect("vector lies in its own span");
        for (i, e) in c.into_iter().enumerate() {
            to_rref[(i, j)] = e;
        }
    }
    let from_rref = to_rref.inverse().map_err(|_| fail("Cartan vectors are dependent".into()))?;

    // Multiplicative equations on the scalings c_5..c_28 (unknown index k - 5).
    let mut exps: Vec<Vec<i64>> = Vec::new();
    let mut rhs: Vec<FieldElement> = Vec::new();
    let mut solvable = true;
    for (shape, _) in shapes {
        let sg = &shape.sigma;
        let sn = &shape.sign;
        for k in 5..=DIM {
            for l in k + 1..=DIM {
                let (ek, el) = (monomial_exponent(k), monomial_exponent(l));
                let sum = [ek[0] + el[0], ek[1] + el[1], ek[2] + el[2], ek[3] + el[3]];
                let mut row = vec![0i64; 24];
                let value;
                if let Some(&m) = pos_of.get(&sum) {
                    let n = ratio(&bracket(&ev[&k], &ev[&l]), &ev[&m]).ok_or_else(|| fail(format!("[e{k}, e{l}] not along e{m}")))?;
                    let ns = ratio(&bracket(&ev[&sg[&k]], &ev[&sg[&l]]), &ev[&sg[&m]])
                        .ok_or_else(|| fail(format!("image bracket of ({k}, {l}) not along a root")))?;
                    for (p, e) in [(k, 1), (l, 1), (sg[&m], 1), (m, -1), (sg[&k], -1), (sg[&l], -1)] {
                        row[p - 5] += e;
                    }
                    value = &(&(&sn[&k] * &sn[&l]) * &ns) / &(&sn[&m] * &n);
                } else if sum == [0; 4] {
                    // Apply the table's Cartan block to h = [e_k, e_l].
                    let h = bracket(&ev[&k], &ev[&l]);
                    let coords = cartan_space
                        .coordinates(&h)?
                        .ok_or_else(|| fail(format!("[e{k}, e{l}] outside the Cartan span")))?;
                    let over = from_rref.apply(&coords)?;
                    let mut image = liealg::zero();
                    for j in 0..4 {
                        for i in 0..4 {
                            let c = &over[j] * &shape.matrix[(i, j)];
                            if c.is_zero() {
                                continue;
                            }
                            for (a, b) in image.iter_mut().zip(&cartan_vectors[i]) {
                                *a += &(&c * b);
                            }
                        }
                    }
                    let target = bracket(&ev[&sg[&k]], &ev[&sg[&l]]);
                    let rho = ratio(&image, &target).ok_or_else(|| fail(format!("Cartan image of ({k}, {l}) inconsistent")))?;
                    if rho.is_zero() {
                        return Err(fail(format!("Cartan block annihilates [e{k}, e{l}]")));
                    }
                    for (p, e) in [(k, 1), (l, 1), (sg[&k], -1), (sg[&l], -1)] {
                        row[p - 5] += e;
                    }
                    value = &(&sn[&k] * &sn[&l]) / &rho;
                } else {
                    continue;
                }
                if row.iter().all(|&e| e == 0) {
                    solvable &= value.is_one();
                    continue;
                }
                exps.push(row);
                rhs.push(value);
            }
        }
    }
    let a = IntMatrix::from_rows(&exps, 24)?;
    let snf = smith_with_transforms(&a);
    let diag = snf.diagonal();
    let rank = snf.rank();
    let transformed: Vec<FieldElement> = (0..a.rows())
        .map(|i| {
            let mut acc = FieldElement::one();
            for (e, r) in rhs.iter().enumerate() {
                let u = &snf.u[(i, e)];
                if !u.is_zero() {
                    acc = &acc * &pow_big(r, u)?;
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    solvable &= transformed[rank..].iter().all(FieldElement::is_one);
    let mut w = vec![FieldElement::one(); 24];
    for i in 0..rank {
        let d = diag[i].to_u32().unwrap_or(0);
        match field_root(&transformed[i], d) {
            Some(root) => w[i] = root,
            None => solvable = false,
        }
    }
    let scalings: Vec<FieldElement> = (0..24)
        .map(|j| {
            let mut acc = FieldElement::one();
            for (m, wm) in w.iter().enumerate() {
                let e = &snf.v[(j, m)];
                if !e.is_zero() {
                    acc = &acc * &pow_big(wm, e)?;
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let basis = build_basis(map, map_index, &x, cartan_vectors, &ev, scalings)?;
    let report = certify(&basis)?;
    if solvable && report.passed() {
        Ok(Ok(basis))
    } else {
        Ok(Err((report, basis)))
    }
}

fn build_basis(
    map: &[[i64; 4]; 4],
    map_index: usize,
    x: &[Vec<FieldElement>],
    cartan_vectors: Vec<LieElement>,
    ev: &HashMap<usize, LieElement>,
    scalings: Vec<FieldElement>,
) -> Result<CalibratedBasis> {
    let mut vectors = cartan_vectors;
    for k in 5..=DIM {
        let c = &scalings[k - 5];
        vectors.push(ev[&k].iter().map(|y| y * c).collect());
    }
    let provenance = Provenance {
        lattice_map: *map,
        lattice_map_index: map_index,
        cartan_combination: x.to_vec(),
        scalings,
    };
    CalibratedBasis::new(vectors, provenance)
}

/// Summary of a calibration search.
#[derive(Clone, Debug)]
pub struct SearchSummary {
    pub lattice_maps: usize,
    pub attempts: usize,
}

/// Searches for a valid calibration.
///
/// On failure the error lists concrete violated bracket equations of the
/// candidate with the fewest violations.
pub fn calibrate_root_basis() -> Result<(CalibratedBasis, SearchSummary)> {
    let data = cartan_data()?;
    let roots: Vec<Exp> = data.roots.keys().copied().collect();
    let maps = lattice_maps(&roots);
    if maps.is_empty() {
        return Err(Error::CalibrationFailed("no lattice map carries the torus monomials onto the roots".into()));
    }
    let mut shapes = Vec::new();
    for name in ["H1", "H2"] {
        let shape = table_shape(&h_table(name)?.to_matrix())?;
        let s = sigma_linear(&shape)?;
        shapes.push((shape, s));
    }
    let mut best: Option<(CalibrationReport, CalibratedBasis)> = None;
    for (idx, map) in maps.iter().enumerate() {
        match attempt(&data, map, idx, &shapes)? {
            Ok(b) => return Ok((b, SearchSummary { lattice_maps: maps.len(), attempts: idx + 1 })),
            Err((report, basis)) => {
                let score = report.h1_violations.len() + report.h2_violations.len();
                if best.as_ref().is_none_or(|(r, _)| score < r.h1_violations.len() + r.h2_violations.len()) {
                    best = Some((report, basis));
                }
            }
        }
    }
    let (report, basis) = best.expect("at least one attempt");
    Err(Error::CalibrationFailed(format!(
        "no lattice map yields automorphisms; best candidate (map {}):\n{}",
        basis.provenance().lattice_map_index,
        report.describe_failures()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_exponents_closed_under_negation() {
        let set: std::collections::HashSet<Exp> = (5..=DIM).map(monomial_exponent).collect();
        assert_eq!(set.len(), 24);
        assert!(set.iter().all(|e| set.contains(&e.map(|x| -x))));
    }

    #[test]
    fn field_roots() {
        let r = field_root(&FieldElement::from_int(-1), 2).unwrap();
        assert_eq!(r.pow(2).unwrap(), FieldElement::from_int(-1));
        assert_eq!(field_root(&FieldElement::from_ratio(4, 9), 2), Some(FieldElement::from_ratio(2, 3)));
        assert_eq!(field_root(&FieldElement::from_int(2), 2), None);
    }

    #[test]
    fn ratios() {
        let w = vec![FieldElement::zero(), FieldElement::from_int(2)];
        let v = vec![FieldElement::zero(), FieldElement::i()];
        assert_eq!(ratio(&v, &w), Some(FieldElement::i().scale(&Rational::new(1.into(), 2.into()))));
        assert_eq!(ratio(&[FieldElement::one(), FieldElement::one()], &w), None);
    }

    #[test]
    fn table_shapes() {
        for name in ["H1", "H2"] {
            let sh = table_shape(&h_table(name).unwrap().to_matrix()).unwrap();
            sigma_linear(&sh).unwrap();
        }
    }
}
