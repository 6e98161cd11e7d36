//! Exact arithmetic in the cyclotomic field `Q(ζ)`, `ζ` a primitive 12th root of unity.
//!
//! Elements are stored as `c0 + c1·ζ + c2·ζ² + c3·ζ³` with rational coefficients,
//! reduced modulo the minimal polynomial `ζ⁴ − ζ² + 1`. The imaginary unit is
//! `i = ζ³` and the primitive cube root of unity is `ω = ζ⁴ = ζ² − 1`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always kept in lowest terms.
pub type Rational = BigRational;

/// Builds a rational from a numerator/denominator pair of machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// An element of `Q(ζ₁₂)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    c: [Rational; 4],
}

fn zero_coeffs() -> [Rational; 4] {
    [Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()]
}

impl FieldElement {
    pub fn new(c0: Rational, c1: Rational, c2: Rational, c3: Rational) -> Self {
        FieldElement { c: [c0, c1, c2, c3] }
    }

    pub fn zero() -> Self {
        FieldElement { c: zero_coeffs() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut c = zero_coeffs();
        c[0] = r;
        FieldElement { c }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(rat(num, den))
    }

    /// The primitive 12th root of unity `ζ`.
    pub fn zeta() -> Self {
        let mut c = zero_coeffs();
        c[1] = Rational::one();
        FieldElement { c }
    }

    /// `i = ζ³`.
    pub fn i() -> Self {
        let mut c = zero_coeffs();
        c[3] = Rational::one();
        FieldElement { c }
    }

    /// `ω = ζ⁴ = ζ² − 1`.
    pub fn omega() -> Self {
        Self::zeta_pow(4)
    }

    /// `ζᵏ` for any integer `k`, served from a precomputed table.
    pub fn zeta_pow(k: i64) -> Self {
        zeta_powers()[k.rem_euclid(12) as usize].clone()
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.c[k]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// Returns the rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.c[1..].iter().all(Zero::is_zero) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    /// Multiplicative inverse, computed by the extended Euclidean algorithm in `Q[x]`
    /// against the minimal polynomial.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(r.recip()));
        }
        let a = Poly::from_coeffs(self.c.to_vec());
        let m = Poly::minimal();
        // Invariant: s·a ≡ r (mod m).
        let (mut r0, mut r1) = (m, a);
        let (mut s0, mut s1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        // r0 is a nonzero constant because the minimal polynomial is irreducible.
        debug_assert_eq!(r0.degree(), Some(0));
        let lead = r0.0[0].clone();
        let mut out = zero_coeffs();
        for (k, v) in s0.0.into_iter().enumerate() {
            out[k] = v / &lead;
        }
        Ok(FieldElement { c: out })
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// The least `n ≤ 12` with `selfⁿ = 1`, if any.
    pub fn root_of_unity_order(&self) -> Option<u32> {
        let mut acc = self.clone();
        for n in 1..=12u32 {
            if acc.is_one() {
                return Some(n);
            }
            acc = &acc * self;
        }
        None
    }

    /// The exponent `k ∈ [0, 12)` with `self = ζᵏ`, if the element is a root of unity.
    pub fn zeta_exponent(&self) -> Option<u32> {
        zeta_powers().iter().position(|z| z == self).map(|k| k as u32)
    }

    /// The integer `k` with `self = baseᵏ`, searched over `|k| ≤ 8`.
    pub fn log_base(&self, base: &Rational) -> Option<i64> {
        let r = self.as_rational()?;
        if !r.is_positive() || base <= &Rational::one() {
            return None;
        }
        let mut up = Rational::one();
        let mut down = Rational::one();
        for k in 0..=8i64 {
            if &up == r {
                return Some(k);
            }
            if &down == r {
                return Some(-k);
            }
            up *= base;
            down /= base;
        }
        None
    }

    /// Complex conjugation, the Galois automorphism `ζ ↦ ζ¹¹`.
    pub fn conj(&self) -> Self {
        let z11 = Self::zeta_pow(11);
        let z22 = Self::zeta_pow(22);
        let z33 = Self::zeta_pow(33);
        let mut out = Self::from_rational(self.c[0].clone());
        out += &z11.scale(&self.c[1]);
        out += &z22.scale(&self.c[2]);
        out += &z33.scale(&self.c[3]);
        out
    }

    /// Multiplies every coefficient by a rational.
    pub fn scale(&self, r: &Rational) -> Self {
        FieldElement {
            c: [&self.c[0] * r, &self.c[1] * r, &self.c[2] * r, &self.c[3] * r],
        }
    }

    /// Serializable form: four rational strings.
    pub fn to_strings(&self) -> [String; 4] {
        [
            self.c[0].to_string(),
            self.c[1].to_string(),
            self.c[2].to_string(),
            self.c[3].to_string(),
        ]
    }

    pub fn from_strings<S: AsRef<str>>(parts: &[S]) -> Result<Self> {
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "field element needs 4 coefficients, got {}",
                parts.len()
            )));
        }
        let mut c = zero_coeffs();
        for (k, p) in parts.iter().enumerate() {
            c[k] = Rational::from_str(p.as_ref().trim())
                .map_err(|e| Error::Parse(format!("bad rational {:?}: {e}", p.as_ref())))?;
        }
        Ok(FieldElement { c })
    }
}

fn zeta_powers() -> &'static [FieldElement; 12] {
    static TABLE: OnceLock<[FieldElement; 12]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let z = FieldElement {
            c: [Rational::zero(), Rational::one(), Rational::zero(), Rational::zero()],
        };
        let mut out: Vec<FieldElement> = Vec::with_capacity(12);
        let mut acc = FieldElement::one();
        for _ in 0..12 {
            out.push(acc.clone());
            acc = &acc * &z;
        }
        out.try_into().expect("twelve powers")
    })
}

/// Dense polynomial over `Q`, lowest degree first, no trailing zeros.
#[derive(Clone, Debug)]
struct Poly(Vec<Rational>);

impl Poly {
    fn from_coeffs(mut v: Vec<Rational>) -> Self {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        Poly(v)
    }

    fn zero() -> Self {
        Poly(Vec::new())
    }

    fn one() -> Self {
        Poly(vec![Rational::one()])
    }

    fn minimal() -> Self {
        Poly(vec![rat(1, 1), rat(0, 1), rat(-1, 1), rat(0, 1), rat(1, 1)])
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let v = (0..n)
            .map(|k| {
                let a = self.0.get(k).cloned().unwrap_or_else(Rational::zero);
                let b = other.0.get(k).cloned().unwrap_or_else(Rational::zero);
                a - b
            })
            .collect();
        Poly::from_coeffs(v)
    }

    fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::from_coeffs(v)
    }

    fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("nonzero divisor");
        let lead = d.0[dd].clone();
        let mut r = self.0.clone();
        let mut q = vec![Rational::zero(); self.0.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = &r[r.len() - 1] / &lead;
            for (j, c) in d.0.iter().enumerate() {
                r[k + j] -= &f * c;
            }
            q[k] = f;
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }
}

impl Default for FieldElement {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for FieldElement {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &'a FieldElement) -> FieldElement {
        FieldElement {
            c: [
                &self.c[0] + &o.c[0],
                &self.c[1] + &o.c[1],
                &self.c[2] + &o.c[2],
                &self.c[3] + &o.c[3],
            ],
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &'a FieldElement) -> FieldElement {
        FieldElement {
            c: [
                &self.c[0] - &o.c[0],
                &self.c[1] - &o.c[1],
                &self.c[2] - &o.c[2],
                &self.c[3] - &o.c[3],
            ],
        }
    }
}

impl<'a> Mul<&'a FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &'a FieldElement) -> FieldElement {
        if self.is_zero() || o.is_zero() {
            return FieldElement::zero();
        }
        if let Some(r) = self.as_rational() {
            return o.scale(r);
        }
        if let Some(r) = o.as_rational() {
            return self.scale(r);
        }
        let mut d: [Rational; 7] = std::array::from_fn(|_| Rational::zero());
        for i in 0..4 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if o.c[j].is_zero() {
                    continue;
                }
                d[i + j] += &self.c[i] * &o.c[j];
            }
        }
        // ζ⁴ = ζ² − 1, ζ⁵ = ζ³ − ζ, ζ⁶ = −1.
        let [d0, d1, d2, d3, d4, d5, d6] = d;
        FieldElement {
            c: [d0 - &d4 - d6, d1 - &d5, d2 + d4, d3 + d5],
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]],
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Panics on a zero divisor; use [`FieldElement::inv`] for a checked version.
#[allow(clippy::suspicious_arithmetic_impl)]
impl<'a> Div<&'a FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn div(self, o: &'a FieldElement) -> FieldElement {
        self * &o.inv().expect("division by zero in Q(zeta12)")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: &'a FieldElement) -> FieldElement {
                (&self).$m(o)
            }
        }
        impl $tr<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<'a> AddAssign<&'a FieldElement> for FieldElement {
    fn add_assign(&mut self, o: &'a FieldElement) {
        for k in 0..4 {
            if !o.c[k].is_zero() {
                self.c[k] += &o.c[k];
            }
        }
    }
}

impl<'a> SubAssign<&'a FieldElement> for FieldElement {
    fn sub_assign(&mut self, o: &'a FieldElement) {
        for k in 0..4 {
            if !o.c[k].is_zero() {
                self.c[k] -= &o.c[k];
            }
        }
    }
}

impl<'a> MulAssign<&'a FieldElement> for FieldElement {
    fn mul_assign(&mut self, o: &'a FieldElement) {
        *self = &*self * o;
    }
}

const ZETA_NAMES: [&str; 12] = [
    "1", "ζ", "-ω²", "i", "ω", "-iω²", "-1", "-ζ", "ω²", "-i", "-ω", "iω²",
];

impl fmt::Display for FieldElement {
    /// Rationals print as `p/q`, roots of unity by name (`i`, `ω`, `-ω²`, ...),
    /// everything else as a polynomial in `ζ`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        if let Some(k) = self.zeta_exponent() {
            return f.write_str(ZETA_NAMES[k as usize]);
        }
        // Rational multiple of a root of unity.
        for (k, z) in zeta_powers().iter().enumerate() {
            let q = self * &z.conj();
            if let Some(r) = q.as_rational() {
                if !r.is_one() && !(-r).is_one() {
                    return write!(f, "{r}·{}", ZETA_NAMES[k]);
                }
            }
        }
        let mut first = true;
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = match k {
                0 => c.to_string(),
                1 => format!("{c}ζ"),
                2 => format!("{c}ζ²"),
                _ => format!("{c}ζ³"),
            };
            if first {
                f.write_str(&term)?;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {term}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({})", self)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts: Vec<String> = Vec::deserialize(d)?;
        FieldElement::from_strings(&parts).map_err(D::Error::custom)
    }
}
