//! The group `GL2(F_p)`: matrices, element orders and subgroup closure.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{prime_factors, Fp};

/// Default bound on the number of elements a subgroup may materialize.
pub const DEFAULT_ELEMENT_CAP: usize = 2_000_000;

/// `|GL2(F_p)| = p(p−1)²(p+1)`.
pub fn gl2_order(p: u32) -> u64 {
    let p = p as u64;
    p * (p - 1) * (p - 1) * (p + 1)
}

/// An invertible 2×2 matrix over `F_p`, entries row-major in `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Matrix {
    entries: [u32; 4],
    p: u32,
}

impl Matrix {
    /// Reduces the entries mod `p` and rejects singular matrices.
    pub fn new(entries: [i64; 4], p: u32) -> Result<Matrix> {
        let m = Matrix { entries: entries.map(|e| e.rem_euclid(p as i64) as u32), p };
        if m.det().is_zero() {
            return Err(Error::Singular(p));
        }
        Ok(m)
    }

    pub fn from_fp(m11: Fp, m12: Fp, m21: Fp, m22: Fp) -> Result<Matrix> {
        let p = m11.modulus();
        for x in [m12, m21, m22] {
            if x.modulus() != p {
                return Err(Error::ModulusMismatch(p, x.modulus()));
            }
        }
        Matrix::new([m11.value() as i64, m12.value() as i64, m21.value() as i64, m22.value() as i64], p)
    }

    pub fn identity(p: u32) -> Matrix {
        Matrix { entries: [1, 0, 0, 1], p }
    }

    pub fn scalar(lambda: Fp) -> Result<Matrix> {
        Matrix::diagonal(lambda, lambda)
    }

    pub fn diagonal(a: Fp, d: Fp) -> Result<Matrix> {
        let p = a.modulus();
        Matrix::from_fp(a, Fp::zero(p), Fp::zero(p), d)
    }

    #[inline]
    pub fn entries(&self) -> [u32; 4] {
        self.entries
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn entry(&self, i: usize) -> Fp {
        Fp::new(self.entries[i] as i64, self.p)
    }

    pub fn det(&self) -> Fp {
        let p = self.p as u64;
        let [a, b, c, d] = self.entries.map(|e| e as u64);
        Fp::new(((a * d) % p) as i64 - ((b * c) % p) as i64, self.p)
    }

    pub fn is_identity(&self) -> bool {
        self.entries == [1, 0, 0, 1]
    }

    pub fn multiply(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.p != rhs.p {
            return Err(Error::ModulusMismatch(self.p, rhs.p));
        }
        Ok(self.mul_same(rhs))
    }

    #[inline]
    fn mul_same(&self, rhs: &Matrix) -> Matrix {
        let p = self.p as u64;
        let [a, b, c, d] = self.entries.map(|e| e as u64);
        let [e, f, g, h] = rhs.entries.map(|e| e as u64);
        Matrix {
            entries: [
                ((a * e + b * g) % p) as u32,
                ((a * f + b * h) % p) as u32,
                ((c * e + d * g) % p) as u32,
                ((c * f + d * h) % p) as u32,
            ],
            p: self.p,
        }
    }

    pub fn inverse(&self) -> Matrix {
        let inv_det = self.det().inv().expect("matrix is invertible by construction");
        let p = self.p;
        let [a, b, c, d] = self.entries.map(|e| Fp::new(e as i64, p));
        let adj = [d, -b, -c, a];
        Matrix { entries: adj.map(|x| (x * inv_det).value()), p }
    }

    pub fn pow(&self, mut exp: u64) -> Matrix {
        let mut base = *self;
        let mut acc = Matrix::identity(self.p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            base = base.mul_same(&base);
            exp >>= 1;
        }
        acc
    }

    /// Least `k ≥ 1` with `m^k = 1`, found by stripping prime factors from
    /// `|GL2(F_p)|`.
    pub fn element_order(&self) -> u64 {
        let mut n = gl2_order(self.p);
        for q in prime_factors(n) {
            while n.is_multiple_of(q) && self.pow(n / q).is_identity() {
                n /= q;
            }
        }
        n
    }

    /// `m · self · m⁻¹`.
    pub fn conjugate_by(&self, m: &Matrix) -> Result<Matrix> {
        Ok(m.multiply(self)?.mul_same(&m.inverse()))
    }

    /// The column vector `self · (x, y)ᵗ`.
    #[inline]
    pub fn apply(&self, x: u32, y: u32) -> (u32, u32) {
        let p = self.p as u64;
        let [a, b, c, d] = self.entries.map(|e| e as u64);
        let (x, y) = (x as u64, y as u64);
        (((a * x + b * y) % p) as u32, ((c * x + d * y) % p) as u32)
    }
}

impl Mul for Matrix {
    type Output = Matrix;

    /// Panics on a modulus mismatch; use [`Matrix::multiply`] for a checked product.
    fn mul(self, rhs: Matrix) -> Matrix {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        self.mul_same(&rhs)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries;
        write!(f, "(({a},{b}),({c},{d})) mod {}", self.p)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A subgroup of `GL2(F_p)` given by generators.
///
/// The element set is materialized on first use and cached. Callers that know
/// the order in closed form can supply it, so orbit computations at large `p`
/// never need the element set.
#[derive(Clone)]
pub struct Subgroup {
    p: u32,
    label: String,
    generators: Vec<Matrix>,
    known_order: Option<u64>,
    cap: usize,
    elements: OnceLock<HashSet<Matrix>>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("label", &self.label)
            .field("p", &self.p)
            .field("generators", &self.generators.len())
            .field("known_order", &self.known_order)
            .field("materialized", &self.elements.get().map(HashSet::len))
            .finish()
    }
}

impl Subgroup {
    /// A lazily materialized subgroup. `known_order`, when given, is trusted
    /// until the element set is built, at which point it is checked.
    pub fn from_generators(
        label: impl Into<String>,
        generators: Vec<Matrix>,
        known_order: Option<u64>,
    ) -> Result<Subgroup> {
        let first = generators.first().ok_or(Error::NoGenerators)?;
        let p = first.modulus();
        if let Some(m) = generators.iter().find(|m| m.modulus() != p) {
            return Err(Error::ModulusMismatch(p, m.modulus()));
        }
        Ok(Subgroup {
            p,
            label: label.into(),
            generators,
            known_order,
            cap: DEFAULT_ELEMENT_CAP,
            elements: OnceLock::new(),
        })
    }

    /// The subgroup generated by `generators`, materialized eagerly.
    pub fn closure(generators: Vec<Matrix>) -> Result<Subgroup> {
        let g = Subgroup::from_generators("generated", generators, None)?;
        g.materialize()?;
        Ok(g)
    }

    /// Wraps a set already known to be a subgroup. The set doubles as the
    /// generator list.
    pub(crate) fn from_elements(label: impl Into<String>, p: u32, elements: HashSet<Matrix>) -> Subgroup {
        let mut generators: Vec<Matrix> = elements.iter().copied().collect();
        generators.sort_unstable();
        let order = elements.len() as u64;
        let cell = OnceLock::new();
        let _ = cell.set(elements);
        Subgroup {
            p,
            label: label.into(),
            generators,
            known_order: Some(order),
            cap: DEFAULT_ELEMENT_CAP,
            elements: cell,
        }
    }

    pub fn with_element_cap(mut self, cap: usize) -> Subgroup {
        self.cap = cap;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Subgroup {
        self.label = label.into();
        self
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn is_materialized(&self) -> bool {
        self.elements.get().is_some()
    }

    /// Breadth-first closure under right multiplication by the generators.
    pub fn materialize(&self) -> Result<&HashSet<Matrix>> {
        if let Some(e) = self.elements.get() {
            return Ok(e);
        }
        let bound = self.cap.min(gl2_order(self.p) as usize);
        let mut seen = HashSet::with_capacity(self.known_order.map_or(1024, |n| (n as usize).min(bound)));
        let identity = Matrix::identity(self.p);
        seen.insert(identity);
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = x.mul_same(g);
                if seen.insert(y) {
                    if seen.len() > bound {
                        return Err(Error::CapExceeded { label: self.label.clone(), cap: bound });
                    }
                    queue.push_back(y);
                }
            }
        }
        if let Some(n) = self.known_order {
            if n != seen.len() as u64 {
                return Err(Error::Inconsistent(format!(
                    "{}: closed-form order {n} but closure has {} elements",
                    self.label,
                    seen.len()
                )));
            }
        }
        let _ = self.elements.set(seen);
        Ok(self.elements.get().expect("just set"))
    }

    /// The order, from the closed form when known, otherwise by closure.
    pub fn order(&self) -> Result<u64> {
        match (self.elements.get(), self.known_order) {
            (Some(e), _) => Ok(e.len() as u64),
            (None, Some(n)) => Ok(n),
            (None, None) => Ok(self.materialize()?.len() as u64),
        }
    }

    pub fn contains(&self, m: &Matrix) -> Result<bool> {
        Ok(self.materialize()?.contains(m))
    }

    pub fn sorted_elements(&self) -> Result<Vec<Matrix>> {
        let mut v: Vec<Matrix> = self.materialize()?.iter().copied().collect();
        v.sort_unstable();
        Ok(v)
    }

    /// Equality of element sets.
    pub fn same_elements(&self, other: &Subgroup) -> Result<bool> {
        if self.p != other.p {
            return Ok(false);
        }
        Ok(self.materialize()? == other.materialize()?)
    }

    /// `m G m⁻¹`, generated by the conjugated generators.
    pub fn conjugate(&self, m: &Matrix) -> Result<Subgroup> {
        if m.modulus() != self.p {
            return Err(Error::ModulusMismatch(self.p, m.modulus()));
        }
        let gens = self.generators.iter().map(|g| g.conjugate_by(m)).collect::<Result<Vec<_>>>()?;
        let mut out = Subgroup::from_generators(format!("{}^g", self.label), gens, self.known_order)?;
        out.cap = self.cap;
        Ok(out)
    }
}

/// Free-function form of [`Subgroup::conjugate`].
pub fn conjugate_subgroup(g: &Subgroup, m: &Matrix) -> Result<Subgroup> {
    g.conjugate(m)
}
