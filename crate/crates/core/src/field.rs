//! Arithmetic in `F_p` and in the quadratic extension `F_p(√ε)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Smallest prime the Cartan machinery accepts.
pub const MIN_PRIME: u32 = 5;
/// Largest prime supported by generator-based computations.
pub const MAX_PRIME: u32 = 9973;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime divisors of `n`, ascending, by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Checks that `p` is a prime in `MIN_PRIME..=MAX_PRIME`.
pub fn check_supported_prime(p: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < MIN_PRIME as u64 || p > MAX_PRIME as u64 {
        return Err(Error::PrimeOutOfRange { p, min: MIN_PRIME as u64, max: MAX_PRIME as u64 });
    }
    Ok(p as u32)
}

/// A residue mod an odd prime, stored canonically in `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fp {
    value: u32,
    modulus: u32,
}

impl Fp {
    pub fn new(value: i64, modulus: u32) -> Fp {
        debug_assert!(modulus > 1);
        let value = value.rem_euclid(modulus as i64) as u32;
        Fp { value, modulus }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn zero(modulus: u32) -> Fp {
        Fp { value: 0, modulus }
    }

    pub fn one(modulus: u32) -> Fp {
        Fp { value: 1, modulus }
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut exp: u64) -> Fp {
        let p = self.modulus as u64;
        let mut base = self.value as u64;
        let mut acc = 1 % p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        Fp { value: acc as u32, modulus: self.modulus }
    }

    /// Multiplicative inverse by Fermat; `None` for zero.
    pub fn inv(self) -> Option<Fp> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.modulus as u64 - 2))
        }
    }

    /// Euler's criterion. Zero is neither a residue nor a non-residue.
    pub fn is_square(self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroResidue);
        }
        Ok(self.pow((self.modulus as u64 - 1) / 2).value == 1)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let mut n = self.modulus as u64 - 1;
        for q in prime_factors(n) {
            while n.is_multiple_of(q) && self.pow(n / q).value == 1 {
                n /= q;
            }
        }
        Some(n)
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = self.value as u64 + rhs.value as u64;
        Fp { value: (s % self.modulus as u64) as u32, modulus: self.modulus }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self + (-rhs)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.value == 0 {
            self
        } else {
            Fp { value: self.modulus - self.value, modulus: self.modulus }
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let v = self.value as u64 * rhs.value as u64 % self.modulus as u64;
        Fp { value: v as u32, modulus: self.modulus }
    }
}

/// Smallest `ε ≥ 2` that is a quadratic non-residue mod `p`.
pub fn smallest_nonresidue(p: u32) -> Result<Fp> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if p == 2 {
        return Err(Error::PrimeOutOfRange { p: 2, min: 3, max: u32::MAX as u64 });
    }
    // Every odd prime has a non-residue below p.
    (2..p)
        .map(|e| Fp::new(e as i64, p))
        .find(|e| e.is_square() == Ok(false))
        .ok_or_else(|| Error::Inconsistent(format!("no non-residue mod {p}")))
}

/// Checks that `epsilon` is a non-residue, i.e. `x² − ε` is irreducible.
pub fn check_nonresidue(epsilon: Fp) -> Result<()> {
    match epsilon.is_square() {
        Ok(false) => Ok(()),
        _ => Err(Error::NotNonResidue { value: epsilon.value, p: epsilon.modulus }),
    }
}

/// Smallest generator of the cyclic group `F_p^×`.
pub fn fp_generator(p: u32) -> Fp {
    (1..p as i64).map(|g| Fp::new(g, p)).find(|g| g.order() == Some(p as u64 - 1)).expect("F_p^× is cyclic")
}

/// An element `a + b√ε` of `F_p²`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Fp2 {
    pub a: Fp,
    pub b: Fp,
    pub epsilon: Fp,
}

impl Fp2 {
    pub fn new(a: Fp, b: Fp, epsilon: Fp) -> Fp2 {
        Fp2 { a, b, epsilon }
    }

    pub fn one(epsilon: Fp) -> Fp2 {
        let p = epsilon.modulus();
        Fp2 { a: Fp::one(p), b: Fp::zero(p), epsilon }
    }

    pub fn is_one(&self) -> bool {
        self.a.value() == 1 && self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `a² − εb²`; zero only at zero because `ε` is a non-residue.
    pub fn norm(&self) -> Fp {
        self.a * self.a - self.epsilon * self.b * self.b
    }

    pub fn pow(self, mut exp: u64) -> Fp2 {
        let mut base = self;
        let mut acc = Fp2::one(self.epsilon);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element, dividing `p² − 1`.
    pub fn order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let p = self.epsilon.modulus() as u64;
        let mut n = p * p - 1;
        for q in prime_factors(n) {
            while n.is_multiple_of(q) && self.pow(n / q).is_one() {
                n /= q;
            }
        }
        Some(n)
    }
}

impl fmt::Debug for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·√{} (mod {})", self.a, self.b, self.epsilon, self.epsilon.modulus())
    }
}

impl Mul for Fp2 {
    type Output = Fp2;
    fn mul(self, rhs: Fp2) -> Fp2 {
        debug_assert_eq!(self.epsilon, rhs.epsilon);
        Fp2 {
            a: self.a * rhs.a + self.epsilon * self.b * rhs.b,
            b: self.a * rhs.b + self.b * rhs.a,
            epsilon: self.epsilon,
        }
    }
}

/// First `a + b√ε` with `b ≠ 0`, scanning `(a, b)` lexicographically, whose
/// order is exactly `p² − 1`.
pub fn fp2_generator(p: u32, epsilon: Fp) -> Result<Fp2> {
    if !is_prime(p as u64) || p < 3 {
        return Err(Error::NotPrime(p as u64));
    }
    if epsilon.modulus() != p {
        return Err(Error::ModulusMismatch(epsilon.modulus(), p));
    }
    check_nonresidue(epsilon)?;
    let n = p as u64 * p as u64 - 1;
    let factors = prime_factors(n);
    for a in 0..p {
        for b in 1..p {
            let g = Fp2::new(Fp::new(a as i64, p), Fp::new(b as i64, p), epsilon);
            if factors.iter().all(|q| !g.pow(n / q).is_one()) {
                return Ok(g);
            }
        }
    }
    Err(Error::Inconsistent(format!("F_{p}² has no generator")))
}
