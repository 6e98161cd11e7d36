//! Randomized and exhaustive self-checks of the arithmetic layers, runnable from
//! release binaries (the CLI `selftest` command and the acceptance harness).
//!
//! Each suite is seeded, so a failure report is reproducible.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::field::{rat, FieldElement};
use crate::liealg::{bracket, unit, DIM};
use crate::linalg::{kernel_basis, rref, smith_with_transforms, IntMatrix, Matrix};

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn random_element(rng: &mut StdRng) -> FieldElement {
    let mut c = || rat(rng.gen_range(-20..=20), rng.gen_range(1..=6));
    FieldElement::new(c(), c(), c(), c())
}

fn sparse_element(rng: &mut StdRng) -> FieldElement {
    match rng.gen_range(0..4) {
        0 => FieldElement::zero(),
        1 => FieldElement::from_int(rng.gen_range(-3..=3)),
        2 => FieldElement::zeta_pow(rng.gen_range(0..12)),
        _ => FieldElement::from_ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3)),
    }
}

fn random_matrix(rng: &mut StdRng) -> Matrix {
    let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=6));
    let data = (0..r * c).map(|_| sparse_element(rng)).collect();
    Matrix::from_vec(r, c, data).expect("sized")
}

/// Commutative ring axioms, inverses and conjugation on random elements.
pub fn field_axioms(cases: usize, seed: u64) -> SuiteResult {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for n in 0..cases {
        let (a, b, c) = (random_element(&mut rng), random_element(&mut rng), random_element(&mut rng));
        let ok = &a + &b == &b + &a
            && &a * &b == &b * &a
            && &(&a + &b) + &c == &a + &(&b + &c)
            && &(&a * &b) * &c == &a * &(&b * &c)
            && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
            && &(&a + &b) - &b == a
            && (&a * &b).conj() == &a.conj() * &b.conj()
            && (a.is_zero() || a.inv().is_ok_and(|i| (&a * &i).is_one()));
        if !ok {
            failures.push(format!("case {n}: a={a}, b={b}, c={c}"));
        }
    }
    SuiteResult { name: "field axioms", cases, failures }
}

/// Jacobi identity on every ordered triple of basis vectors.
pub fn jacobi() -> SuiteResult {
    let failures: Vec<String> = (0..DIM)
        .into_par_iter()
        .flat_map_iter(|p| {
            (0..DIM).flat_map(move |q| {
                (0..DIM).filter_map(move |r| {
                    let (x, y, z) = (unit(p), unit(q), unit(r));
                    let s1 = bracket(&x, &bracket(&y, &z));
                    let s2 = bracket(&y, &bracket(&z, &x));
                    let s3 = bracket(&z, &bracket(&x, &y));
                    let zero = s1.iter().zip(&s2).zip(&s3).all(|((a, b), c)| (&(a + b) + c).is_zero());
                    (!zero).then(|| format!("basis triple ({p}, {q}, {r})"))
                })
            })
        })
        .collect();
    SuiteResult { name: "Jacobi identity", cases: DIM * DIM * DIM, failures }
}

pub fn rref_idempotence(cases: usize, seed: u64) -> SuiteResult {
    let mut rng = StdRng::seed_from_u64(seed);
    let failures = (0..cases)
        .filter_map(|n| {
            let m = random_matrix(&mut rng);
            let r = rref(&m);
            (rref(&r) != r).then(|| format!("case {n}"))
        })
        .collect();
    SuiteResult { name: "rref idempotence", cases, failures }
}

pub fn kernel_correctness(cases: usize, seed: u64) -> SuiteResult {
    let mut rng = StdRng::seed_from_u64(seed);
    let failures = (0..cases)
        .filter_map(|n| {
            let m = random_matrix(&mut rng);
            let k = kernel_basis(&m);
            let annihilated = k
                .basis()
                .iter()
                .all(|v| m.apply(v).is_ok_and(|w| w.iter().all(FieldElement::is_zero)));
            (!annihilated || k.dim() + m.rank() != m.cols()).then(|| format!("case {n}"))
        })
        .collect();
    SuiteResult { name: "kernel correctness", cases, failures }
}

/// Smith normal form: `U·M·V = D`, nonnegative diagonal, `d_k | d_{k+1}`.
pub fn smith_divisibility(cases: usize, seed: u64) -> SuiteResult {
    let mut rng = StdRng::seed_from_u64(seed);
    let failures = (0..cases)
        .filter_map(|n| {
            let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
            let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-12..=12)).collect()).collect();
            let m = IntMatrix::from_rows(&rows, c).expect("sized");
            let s = smith_with_transforms(&m);
            let d = s.diagonal();
            let nonzero: Vec<&BigInt> = d.iter().take_while(|x| !x.is_zero()).collect();
            let chain = nonzero.windows(2).all(|w| (w[1] % w[0]).is_zero())
                && d.iter().skip(nonzero.len()).all(Zero::is_zero)
                && d.iter().all(|x| !x.is_negative());
            let product = s.u.mul(&m).and_then(|x| x.mul(&s.v)).is_ok_and(|p| p == s.d);
            (!(chain && product)).then(|| format!("case {n}: {rows:?}"))
        })
        .collect();
    SuiteResult { name: "Smith divisibility", cases, failures }
}

/// All suites with the given seed; the field suite runs `field_cases` cases.
pub fn run_all(field_cases: usize, seed: u64) -> Vec<SuiteResult> {
    vec![
        field_axioms(field_cases, seed),
        jacobi(),
        rref_idempotence(500, seed.wrapping_add(1)),
        kernel_correctness(500, seed.wrapping_add(2)),
        smith_divisibility(500, seed.wrapping_add(3)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        assert!(field_axioms(200, 7).passed());
        assert!(rref_idempotence(50, 7).passed());
        assert!(kernel_correctness(50, 7).passed());
        assert!(smith_divisibility(50, 7).passed());
    }
}
