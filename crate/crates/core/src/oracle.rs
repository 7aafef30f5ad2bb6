//! Brute-force reference computations for small primes.
//!
//! Everything here works on raw entry arrays with its own arithmetic: groups
//! come from enumeration by shape rather than generator closure, orbits from
//! applying every element, stabilizers from counting fixers. Only the
//! [`Matrix`] and point types are shared with the main implementation, and
//! only as containers for results.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::action::{Orbit, Point, Space};
use crate::catalog::{CatalogEntry, CatalogKind};
use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::gl2::Matrix;

/// Largest prime the oracle will enumerate.
pub const ORACLE_MAX_PRIME: u32 = 31;

type Raw = [u32; 4];

fn raw_mul(p: u32, x: &Raw, y: &Raw) -> Raw {
    let p = p as u64;
    let [a, b, c, d] = x.map(u64::from);
    let [e, f, g, h] = y.map(u64::from);
    [
        ((a * e + b * g) % p) as u32,
        ((a * f + b * h) % p) as u32,
        ((c * e + d * g) % p) as u32,
        ((c * f + d * h) % p) as u32,
    ]
}

fn raw_det(p: u32, x: &Raw) -> u32 {
    let p = p as u64;
    let [a, b, c, d] = x.map(u64::from);
    ((a * d % p + p - b * c % p) % p) as u32
}

fn raw_pow(p: u32, x: &Raw, k: u32) -> Raw {
    (0..k).fold([1, 0, 0, 1], |acc, _| raw_mul(p, &acc, x))
}

fn to_matrix(p: u32, x: Raw) -> Matrix {
    Matrix::new(x.map(i64::from), p).expect("oracle produced a singular matrix")
}

fn check_cap(p: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if !(5..=ORACLE_MAX_PRIME).contains(&p) {
        return Err(Error::PrimeOutOfRange { p: p as u64, min: 5, max: ORACLE_MAX_PRIME as u64 });
    }
    Ok(())
}

/// All of `GL2(F_p)`.
#[derive(Clone, Debug)]
pub struct EnumeratedGroup {
    pub p: u32,
    pub elements: Vec<Matrix>,
    pub order: u64,
}

/// Every 2×2 matrix with nonzero determinant, by quadruple loop.
pub fn enumerate_gl2(p: u32) -> Result<EnumeratedGroup> {
    check_cap(p)?;
    let mut elements = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    if raw_det(p, &[a, b, c, d]) != 0 {
                        elements.push(to_matrix(p, [a, b, c, d]));
                    }
                }
            }
        }
    }
    let order = elements.len() as u64;
    Ok(EnumeratedGroup { p, elements, order })
}

fn cartan_shape(p: u32, eps: u32) -> Vec<Raw> {
    let mut out = Vec::new();
    for a in 0..p {
        for b in 0..p {
            if (a, b) != (0, 0) {
                out.push([a, eps * b % p, b, a]);
            }
        }
    }
    out
}

fn normalizer_coset_shape(p: u32, eps: u32) -> Vec<Raw> {
    let mut out = Vec::new();
    for c in 0..p {
        for d in 0..p {
            if (c, d) != (0, 0) {
                out.push([c, eps * d % p, (p - d) % p, (p - c) % p]);
            }
        }
    }
    out
}

fn raw_powers(p: u32, set: &[Raw], a: u32) -> BTreeSet<Raw> {
    set.iter().map(|x| raw_pow(p, x, a)).collect()
}

/// Closure of a set under multiplication, by repeated all-pairs products
/// until nothing new appears.
fn fixpoint_closure(p: u32, set: impl IntoIterator<Item = Raw>) -> Vec<Raw> {
    let mut all: HashSet<Raw> = set.into_iter().collect();
    all.insert([1, 0, 0, 1]);
    loop {
        let current: Vec<Raw> = all.iter().copied().collect();
        let before = all.len();
        for x in &current {
            for y in &current {
                all.insert(raw_mul(p, x, y));
            }
        }
        if all.len() == before {
            let mut v: Vec<Raw> = all.into_iter().collect();
            v.sort_unstable();
            return v;
        }
    }
}

fn raw_elements(kind: &CatalogKind, p: u32, eps: u32) -> Result<Vec<Raw>> {
    let raw = match kind {
        CatalogKind::Gl2 => enumerate_gl2(p)?.elements.iter().map(Matrix::entries).collect(),
        CatalogKind::Borel => {
            let mut v = Vec::new();
            for a in 1..p {
                for b in 0..p {
                    for c in 1..p {
                        v.push([a, b, 0, c]);
                    }
                }
            }
            v
        }
        CatalogKind::Cns => cartan_shape(p, eps),
        CatalogKind::CnsPlus => {
            let mut v = cartan_shape(p, eps);
            v.extend(normalizer_coset_shape(p, eps));
            v
        }
        CatalogKind::CnsPower(e) => raw_powers(p, &cartan_shape(p, eps), *e).into_iter().collect(),
        CatalogKind::CnsPlusPower(a) => {
            let powers = raw_powers(p, &cartan_shape(p, eps), *a);
            let sigma = [1, 0, 0, p - 1];
            let mut v: Vec<Raw> = powers.iter().copied().collect();
            v.extend(powers.iter().map(|x| raw_mul(p, x, &sigma)));
            v
        }
        CatalogKind::PowerClosure(base, a) => {
            let base = raw_elements(base, p, eps)?;
            fixpoint_closure(p, raw_powers(p, &base, *a))
        }
    };
    Ok(raw)
}

/// The element set of a catalog kind, built without generator closure.
pub fn elements_by_shape(kind: &CatalogKind, p: u32, epsilon: u32) -> Result<Vec<Matrix>> {
    check_cap(p)?;
    let mut v: Vec<Matrix> = raw_elements(kind, p, epsilon)?.into_iter().map(|x| to_matrix(p, x)).collect();
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// Canonical coordinates: vectors as-is, lines as the least scalar multiple.
fn canonical(space: Space, p: u32, (x, y): (u32, u32)) -> (u32, u32) {
    match space {
        Space::NonzeroVectors => (x, y),
        Space::ProjectiveLine => (1..p)
            .map(|l| ((l as u64 * x as u64 % p as u64) as u32, (l as u64 * y as u64 % p as u64) as u32))
            .min()
            .expect("p ≥ 2"),
    }
}

fn raw_apply(p: u32, m: &Raw, (x, y): (u32, u32)) -> (u32, u32) {
    let r = raw_mul(p, m, &[x, 0, y, 0]);
    (r[0], r[2])
}

/// The orbit of `pt` obtained by applying every element, and the number of
/// elements fixing `pt`.
pub fn orbit_bruteforce<P: Point>(elements: &[Matrix], pt: &P) -> Orbit<P> {
    let p = pt.modulus();
    let start = canonical(P::SPACE, p, pt.coords());
    let mut members = BTreeSet::new();
    let mut fixers = 0u64;
    for m in elements {
        let image = canonical(P::SPACE, p, raw_apply(p, &m.entries(), start));
        if image == start {
            fixers += 1;
        }
        members.insert(image);
    }
    let members: Vec<P> = members.into_iter().map(|(x, y)| P::from_coords(p, x, y).expect("nonzero image")).collect();
    Orbit { base: *pt, size: members.len() as u64, members, stabilizer_order: fixers }
}

/// One brute-force orbit per orbit of the space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BruteforcePartition {
    pub space: Space,
    /// Ascending.
    pub sizes: Vec<u64>,
    /// `(orbit size, stabilizer order)` per orbit, ascending.
    pub orbit_stabilizers: Vec<(u64, u64)>,
}

fn all_points(space: Space, p: u32) -> Vec<(u32, u32)> {
    let mut pts = Vec::new();
    for x in 0..p {
        for y in 0..p {
            if (x, y) != (0, 0) && canonical(space, p, (x, y)) == (x, y) {
                pts.push((x, y));
            }
        }
    }
    pts
}

pub fn orbit_partition_bruteforce(elements: &[Matrix], space: Space, p: u32) -> Result<BruteforcePartition> {
    check_cap(p)?;
    let mut seen = HashSet::new();
    let mut orbit_stabilizers = Vec::new();
    for pt in all_points(space, p) {
        if seen.contains(&pt) {
            continue;
        }
        let mut fixers = 0u64;
        let mut size = 0u64;
        for m in elements {
            let image = canonical(space, p, raw_apply(p, &m.entries(), pt));
            if image == pt {
                fixers += 1;
            }
            if seen.insert(image) {
                size += 1;
            }
        }
        orbit_stabilizers.push((size, fixers));
    }
    orbit_stabilizers.sort_unstable();
    let sizes = orbit_stabilizers.iter().map(|&(s, _)| s).collect();
    Ok(BruteforcePartition { space, sizes, orbit_stabilizers })
}

/// Compares the raw set of `a`-th powers of an entry with the subgroup it
/// generates, and with the `C_ns^a ⋊ ⟨σ⟩` convention for `(C_ns⁺)^a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerSetReport {
    pub kind: String,
    pub p: u32,
    pub exponent: u32,
    pub raw_power_set_size: u64,
    pub generated_order: u64,
    pub raw_is_subgroup: bool,
    /// Order of `C_ns^a ⋊ ⟨σ⟩`, for `C_ns⁺` entries.
    pub semidirect_order: Option<u64>,
}

pub fn powerset_vs_generated(entry: &CatalogEntry, a: u32) -> Result<PowerSetReport> {
    let p = entry.p;
    check_cap(p)?;
    if a == 0 {
        return Err(Error::InvalidArgument("exponent must be at least 1".into()));
    }
    let eps = entry.epsilon.value();
    let base = raw_elements(&entry.kind, p, eps)?;
    let raw = raw_powers(p, &base, a);
    let generated = fixpoint_closure(p, raw.iter().copied());
    let semidirect_order = match entry.kind {
        CatalogKind::CnsPlus => Some(raw_elements(&CatalogKind::CnsPlusPower(a), p, eps)?.len() as u64),
        _ => None,
    };
    Ok(PowerSetReport {
        kind: entry.kind.to_string(),
        p,
        exponent: a,
        raw_power_set_size: raw.len() as u64,
        generated_order: generated.len() as u64,
        raw_is_subgroup: raw.len() == generated.len(),
        semidirect_order,
    })
}
