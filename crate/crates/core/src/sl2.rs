//! Exact arithmetic in SL2(Z) and SL2(Z/p), plus the fixed generator constants.

use alloc::format;
use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Largest modulus accepted for residue arithmetic.
pub const MAX_PRIME: u32 = (1 << 31) - 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Sl2Error {
    #[error("determinant is {0}, expected 1")]
    Determinant(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the even prime 2 is not supported")]
    EvenPrime,
    #[error("{0} exceeds the residue arithmetic bound 2^31")]
    PrimeTooLarge(u64),
    #[error("residue {value} out of range for modulus {p}")]
    Residue { value: u32, p: u32 },
}

/// An element of SL2(Z), stored row-major with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat2 {
    e: [BigInt; 4],
}

impl IntMat2 {
    pub fn new(a11: BigInt, a12: BigInt, a21: BigInt, a22: BigInt) -> Result<Self, Sl2Error> {
        let det = &a11 * &a22 - &a12 * &a21;
        if !det.is_one() {
            return Err(Sl2Error::Determinant(format!("{det}")));
        }
        Ok(IntMat2 {
            e: [a11, a12, a21, a22],
        })
    }

    pub fn from_i64(a11: i64, a12: i64, a21: i64, a22: i64) -> Result<Self, Sl2Error> {
        Self::new(a11.into(), a12.into(), a21.into(), a22.into())
    }

    /// Builds a matrix whose determinant is already known to be 1.
    pub(crate) fn from_entries_unchecked(e: [BigInt; 4]) -> Self {
        debug_assert!((&e[0] * &e[3] - &e[1] * &e[2]).is_one());
        IntMat2 { e }
    }

    pub fn identity() -> Self {
        IntMat2 {
            e: [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()],
        }
    }

    pub fn entries(&self) -> &[BigInt; 4] {
        &self.e
    }

    pub fn is_identity(&self) -> bool {
        self.e[0].is_one() && self.e[1].is_zero() && self.e[2].is_zero() && self.e[3].is_one()
    }

    pub fn determinant(&self) -> BigInt {
        &self.e[0] * &self.e[3] - &self.e[1] * &self.e[2]
    }

    pub fn mul(&self, rhs: &IntMat2) -> IntMat2 {
        let [a, b, c, d] = &self.e;
        let [p, q, r, s] = &rhs.e;
        IntMat2 {
            e: [a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s],
        }
    }

    /// Adjugate, which is the inverse for determinant 1.
    pub fn inverse(&self) -> IntMat2 {
        let [a, b, c, d] = &self.e;
        IntMat2 {
            e: [d.clone(), -b, -c, a.clone()],
        }
    }

    /// Entries as `i128` when all of them fit.
    pub fn to_i128(&self) -> Option<[i128; 4]> {
        Some([
            self.e[0].to_i128()?,
            self.e[1].to_i128()?,
            self.e[2].to_i128()?,
            self.e[3].to_i128()?,
        ])
    }

    pub fn reduce_mod(&self, p: Prime) -> ModMat2 {
        let m = BigInt::from(p.value());
        let r = |x: &BigInt| x.mod_floor(&m).to_u32().expect("residue below 2^31");
        ModMat2 {
            e: [r(&self.e[0]), r(&self.e[1]), r(&self.e[2]), r(&self.e[3])],
            p: p.value(),
        }
    }
}

impl fmt::Display for IntMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.e;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

impl fmt::Debug for IntMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Free-function form of [`IntMat2::mul`].
pub fn mul(m1: &IntMat2, m2: &IntMat2) -> IntMat2 {
    m1.mul(m2)
}

/// Free-function form of [`IntMat2::inverse`].
pub fn inverse(m: &IntMat2) -> IntMat2 {
    m.inverse()
}

/// Free-function form of [`IntMat2::reduce_mod`].
pub fn reduce_mod(m: &IntMat2, p: Prime) -> ModMat2 {
    m.reduce_mod(p)
}

/// An odd prime below 2^31, checked by trial division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u32);

impl Prime {
    pub fn new(value: u64) -> Result<Self, Sl2Error> {
        if value == 2 {
            return Err(Sl2Error::EvenPrime);
        }
        if !is_prime(value) {
            return Err(Sl2Error::NotPrime(value));
        }
        if value > MAX_PRIME as u64 {
            return Err(Sl2Error::PrimeTooLarge(value));
        }
        Ok(Prime(value as u32))
    }

    pub fn value(self) -> u32 {
        self.0
    }

    /// 1 or 3.
    pub fn residue_class_mod4(self) -> u8 {
        (self.0 % 4) as u8
    }

    /// Order of SL2(Z/p), p(p^2 - 1).
    pub fn sl2_order(self) -> u64 {
        let p = self.0 as u64;
        p * (p * p - 1)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Sl2Error;

    fn try_from(v: u64) -> Result<Self, Sl2Error> {
        Prime::new(v)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0 as u64
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Odd primes in `[lo, hi]`, ascending.
pub fn odd_primes_between(lo: u64, hi: u64) -> impl Iterator<Item = Prime> {
    (lo.max(3)..=hi).filter_map(|n| Prime::new(n).ok())
}

/// An element of SL2(Z/p) with residues in `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModMat2 {
    e: [u32; 4],
    p: u32,
}

impl ModMat2 {
    pub fn new(entries: [u32; 4], p: Prime) -> Result<Self, Sl2Error> {
        let pv = p.value();
        if let Some(&value) = entries.iter().find(|&&v| v >= pv) {
            return Err(Sl2Error::Residue { value, p: pv });
        }
        let m = ModMat2 { e: entries, p: pv };
        let det = m.determinant();
        if det != 1 {
            return Err(Sl2Error::Determinant(format!("{det} (mod {pv})")));
        }
        Ok(m)
    }

    pub fn identity(p: Prime) -> Self {
        ModMat2 {
            e: [1, 0, 0, 1],
            p: p.value(),
        }
    }

    pub fn entries(&self) -> [u32; 4] {
        self.e
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn is_identity(&self) -> bool {
        self.e == [1, 0, 0, 1]
    }

    pub fn determinant(&self) -> u32 {
        let p = self.p as u64;
        let [a, b, c, d] = self.e.map(|v| v as u64);
        ((a * d % p + p - b * c % p) % p) as u32
    }

    #[inline]
    pub fn mul(&self, rhs: &ModMat2) -> ModMat2 {
        debug_assert_eq!(self.p, rhs.p);
        let p = self.p as u64;
        let [a, b, c, d] = self.e.map(|v| v as u64);
        let [w, x, y, z] = rhs.e.map(|v| v as u64);
        ModMat2 {
            e: [
                ((a * w + b * y) % p) as u32,
                ((a * x + b * z) % p) as u32,
                ((c * w + d * y) % p) as u32,
                ((c * x + d * z) % p) as u32,
            ],
            p: self.p,
        }
    }

    pub fn inverse(&self) -> ModMat2 {
        let p = self.p;
        let neg = |v: u32| if v == 0 { 0 } else { p - v };
        let [a, b, c, d] = self.e;
        ModMat2 {
            e: [d, neg(b), neg(c), a],
            p,
        }
    }

    /// Four residues packed into 16-bit lanes; only injective for p < 2^16.
    #[inline]
    pub fn packed_key(&self) -> u64 {
        let [a, b, c, d] = self.e.map(|v| v as u64);
        a | (b << 16) | (c << 32) | (d << 48)
    }

    #[inline]
    pub fn wide_key(&self) -> u128 {
        let [a, b, c, d] = self.e.map(|v| v as u128);
        a | (b << 32) | (c << 64) | (d << 96)
    }
}

impl fmt::Display for ModMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.e;
        write!(f, "[[{a},{b}],[{c},{d}]] mod {}", self.p)
    }
}

impl fmt::Debug for ModMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The generator constants: x, y, their squares a and b, and the third
/// free generator c.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generators {
    pub x: IntMat2,
    pub y: IntMat2,
    pub a: IntMat2,
    pub b: IntMat2,
    pub c: IntMat2,
}

impl Generators {
    /// Replaces c with a caller-supplied element.
    pub fn with_c(mut self, c: IntMat2) -> Self {
        self.c = c;
        self
    }

    /// The named generating sets used throughout: `{a}`, `{a,b}`, `{a,b,c}`.
    pub fn set(&self, set: GeneratorSet) -> alloc::vec::Vec<IntMat2> {
        match set {
            GeneratorSet::A => alloc::vec![self.a.clone()],
            GeneratorSet::AB => alloc::vec![self.a.clone(), self.b.clone()],
            GeneratorSet::ABC => alloc::vec![self.a.clone(), self.b.clone(), self.c.clone()],
        }
    }
}

/// x = [[1,2],[0,1]], y = [[1,0],[2,1]], a = x², b = y², c = (xy)².
pub fn canonical_generators() -> Generators {
    let x = IntMat2::from_i64(1, 2, 0, 1).expect("det 1");
    let y = IntMat2::from_i64(1, 0, 2, 1).expect("det 1");
    let a = x.mul(&x);
    let b = y.mul(&y);
    let xy = x.mul(&y);
    let c = xy.mul(&xy);
    Generators { x, y, a, b, c }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorSet {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "ab")]
    AB,
    #[serde(rename = "abc")]
    ABC,
}

impl GeneratorSet {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorSet::A => "a",
            GeneratorSet::AB => "ab",
            GeneratorSet::ABC => "abc",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "a" => Some(GeneratorSet::A),
            "ab" => Some(GeneratorSet::AB),
            "abc" => Some(GeneratorSet::ABC),
            _ => None,
        }
    }
}
