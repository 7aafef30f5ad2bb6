//! Constructors for the named subgroups of `GL2(F_p)`: the full group, the
//! upper-triangular Borel, the non-split Cartan `C_ns`, its normalizer
//! `C_ns⁺`, and their power subgroups.
//!
//! With `γ` a generator of `C_ns ≅ F_p²^×` and `σ = N(1,0) = diag(1, −1)`,
//! conjugation by `σ` acts on `C_ns` as Frobenius, `σγσ⁻¹ = γ^p`, and
//! `C_ns⁺ = C_ns ⋊ ⟨σ⟩`. Every entry below is built from these two matrices,
//! so no construction ever enumerates the group.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{
    check_nonresidue, check_supported_prime, fp2_generator, fp_generator, gcd, smallest_nonresidue, Fp, Fp2,
};
use crate::gl2::{gl2_order, Matrix, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CatalogKind {
    Gl2,
    Borel,
    Cns,
    CnsPlus,
    /// `C_ns^e`, the `e`-th powers of the cyclic group `C_ns`.
    CnsPower(u32),
    /// `(C_ns⁺)^a = C_ns^a ⋊ ⟨σ⟩`; for `a = 3` and `p ≡ 2 (mod 3)` this is
    /// the index-3 subgroup of `C_ns⁺`.
    CnsPlusPower(u32),
    /// The subgroup generated by all `a`-th powers of another entry.
    PowerClosure(Box<CatalogKind>, u32),
}

impl CatalogKind {
    /// The fixed list of kinds exercised by the verification suites.
    pub fn standard_kinds() -> Vec<CatalogKind> {
        let mut kinds = vec![CatalogKind::Gl2, CatalogKind::Borel, CatalogKind::Cns, CatalogKind::CnsPlus];
        kinds.extend((1..=6).map(CatalogKind::CnsPower));
        kinds.extend((1..=6).map(CatalogKind::CnsPlusPower));
        kinds
    }

    /// Closed-form order, when one exists.
    pub fn order(&self, p: u32) -> Option<u64> {
        let n = p as u64 * p as u64 - 1;
        match self {
            CatalogKind::Gl2 => Some(gl2_order(p)),
            CatalogKind::Borel => Some(p as u64 * (p as u64 - 1) * (p as u64 - 1)),
            CatalogKind::Cns => Some(n),
            CatalogKind::CnsPlus => Some(2 * n),
            CatalogKind::CnsPower(e) => Some(n / gcd(*e as u64, n)),
            CatalogKind::CnsPlusPower(a) => Some(2 * n / gcd(*a as u64, n)),
            CatalogKind::PowerClosure(..) => None,
        }
    }

    pub fn is_cartan_family(&self) -> bool {
        matches!(
            self,
            CatalogKind::Cns | CatalogKind::CnsPlus | CatalogKind::CnsPower(_) | CatalogKind::CnsPlusPower(_)
        )
    }

    /// The largest `C_ns^a` power this kind contains by construction, as an
    /// exponent: `Some(1)` means all of `C_ns`.
    pub fn contained_cartan_power(&self) -> Option<u32> {
        match self {
            CatalogKind::Gl2 | CatalogKind::Cns | CatalogKind::CnsPlus => Some(1),
            CatalogKind::CnsPower(a) | CatalogKind::CnsPlusPower(a) => Some(*a),
            CatalogKind::Borel | CatalogKind::PowerClosure(..) => None,
        }
    }
}

impl fmt::Display for CatalogKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogKind::Gl2 => write!(f, "GL2"),
            CatalogKind::Borel => write!(f, "Borel"),
            CatalogKind::Cns => write!(f, "Cns"),
            CatalogKind::CnsPlus => write!(f, "Cns+"),
            CatalogKind::CnsPower(e) => write!(f, "Cns^{e}"),
            CatalogKind::CnsPlusPower(a) => write!(f, "Cns+^{a}"),
            CatalogKind::PowerClosure(base, a) => write!(f, "<{base}^{a}>"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub kind: CatalogKind,
    pub p: u32,
    pub epsilon: Fp,
    pub group: Subgroup,
    /// The matrix of a generator of `F_p²^×`, for the Cartan family.
    pub cartan_generator: Option<Matrix>,
}

/// `M(a,b) = (a, εb; b, a)`: multiplication by `a + b√ε` in the basis `1, √ε`.
pub fn cartan_matrix(g: &Fp2) -> Result<Matrix> {
    Matrix::from_fp(g.a, g.epsilon * g.b, g.b, g.a)
}

/// `N(c,d) = (c, εd; −d, −c)`.
pub fn normalizer_matrix(c: Fp, d: Fp, epsilon: Fp) -> Result<Matrix> {
    Matrix::from_fp(c, epsilon * d, -d, -c)
}

/// True iff `m = M(a,b)` for some `(a,b)`.
pub fn has_cartan_shape(m: &Matrix, epsilon: Fp) -> bool {
    let [a, b, c, d] = m.entries();
    a == d && Fp::new(b as i64, m.modulus()) == epsilon * Fp::new(c as i64, m.modulus())
}

/// True iff `m = N(c,d)` for some `(c,d)`.
pub fn has_normalizer_shape(m: &Matrix, epsilon: Fp) -> bool {
    let p = m.modulus();
    let [a, b, c, d] = m.entries().map(|x| Fp::new(x as i64, p));
    d == -a && b == -(epsilon * c)
}

fn check_epsilon(p: u32, epsilon: Fp) -> Result<()> {
    if epsilon.modulus() != p {
        return Err(Error::ModulusMismatch(p, epsilon.modulus()));
    }
    check_nonresidue(epsilon)
}

fn entry_from_generators(
    kind: CatalogKind,
    p: u32,
    epsilon: Fp,
    generators: Vec<Matrix>,
    cartan_generator: Option<Matrix>,
) -> Result<CatalogEntry> {
    let group = Subgroup::from_generators(kind.to_string(), generators, kind.order(p))?;
    Ok(CatalogEntry { kind, p, epsilon, group, cartan_generator })
}

pub fn gl2(p: u32) -> Result<CatalogEntry> {
    let p = check_supported_prime(p as u64)?;
    let g = fp_generator(p);
    let gens = vec![Matrix::new([1, 1, 0, 1], p)?, Matrix::new([1, 0, 1, 1], p)?, Matrix::diagonal(g, Fp::one(p))?];
    entry_from_generators(CatalogKind::Gl2, p, smallest_nonresidue(p)?, gens, None)
}

/// Upper-triangular matrices `(a, b; 0, c)`, the stabilizer of the line through `(1, 0)`.
pub fn borel(p: u32) -> Result<CatalogEntry> {
    let p = check_supported_prime(p as u64)?;
    let g = fp_generator(p);
    let gens = vec![Matrix::new([1, 1, 0, 1], p)?, Matrix::diagonal(g, Fp::one(p))?, Matrix::diagonal(Fp::one(p), g)?];
    entry_from_generators(CatalogKind::Borel, p, smallest_nonresidue(p)?, gens, None)
}

fn cartan_data(p: u32, epsilon: Fp) -> Result<(u32, Matrix, Matrix)> {
    let p = check_supported_prime(p as u64)?;
    check_epsilon(p, epsilon)?;
    let gamma = cartan_matrix(&fp2_generator(p, epsilon)?)?;
    let sigma = normalizer_matrix(Fp::one(p), Fp::zero(p), epsilon)?;
    Ok((p, gamma, sigma))
}

pub fn nonsplit_cartan(p: u32, epsilon: Fp) -> Result<CatalogEntry> {
    let (p, gamma, _) = cartan_data(p, epsilon)?;
    entry_from_generators(CatalogKind::Cns, p, epsilon, vec![gamma], Some(gamma))
}

pub fn nonsplit_cartan_normalizer(p: u32, epsilon: Fp) -> Result<CatalogEntry> {
    let (p, gamma, sigma) = cartan_data(p, epsilon)?;
    entry_from_generators(CatalogKind::CnsPlus, p, epsilon, vec![gamma, sigma], Some(gamma))
}

pub fn cns_power(p: u32, epsilon: Fp, e: u32) -> Result<CatalogEntry> {
    check_exponent(e)?;
    let (p, gamma, _) = cartan_data(p, epsilon)?;
    entry_from_generators(CatalogKind::CnsPower(e), p, epsilon, vec![gamma.pow(e as u64)], Some(gamma))
}

pub fn cns_plus_power(p: u32, epsilon: Fp, a: u32) -> Result<CatalogEntry> {
    check_exponent(a)?;
    let (p, gamma, sigma) = cartan_data(p, epsilon)?;
    entry_from_generators(CatalogKind::CnsPlusPower(a), p, epsilon, vec![gamma.pow(a as u64), sigma], Some(gamma))
}

fn check_exponent(a: u32) -> Result<()> {
    if a == 0 {
        return Err(Error::InvalidArgument("power exponent must be at least 1".into()));
    }
    Ok(())
}

/// Builds the entry of the given kind at `p` using `epsilon` for the Cartan family.
pub fn entry(kind: &CatalogKind, p: u32, epsilon: Fp) -> Result<CatalogEntry> {
    match kind {
        CatalogKind::Gl2 | CatalogKind::Borel => {
            check_epsilon(p, epsilon)?;
            let mut e = if *kind == CatalogKind::Gl2 { gl2(p)? } else { borel(p)? };
            e.epsilon = epsilon;
            Ok(e)
        }
        CatalogKind::Cns => nonsplit_cartan(p, epsilon),
        CatalogKind::CnsPlus => nonsplit_cartan_normalizer(p, epsilon),
        CatalogKind::CnsPower(e) => cns_power(p, epsilon, *e),
        CatalogKind::CnsPlusPower(a) => cns_plus_power(p, epsilon, *a),
        CatalogKind::PowerClosure(base, a) => power_subgroup(&entry(base, p, epsilon)?, *a),
    }
}

/// [`entry`] with the smallest non-residue.
pub fn standard_entry(kind: &CatalogKind, p: u32) -> Result<CatalogEntry> {
    let p = check_supported_prime(p as u64)?;
    entry(kind, p, smallest_nonresidue(p)?)
}

/// The `a`-th power subgroup of an entry.
///
/// Cartan-family entries compose exponents (`C_ns^e → C_ns^{ea}`,
/// `(C_ns⁺)^b → (C_ns⁺)^{ab}`). Other entries fall back to
/// [`generated_power_subgroup`], which materializes the group.
pub fn power_subgroup(entry: &CatalogEntry, a: u32) -> Result<CatalogEntry> {
    check_exponent(a)?;
    let p = entry.p;
    match entry.kind {
        CatalogKind::Cns => cns_power(p, entry.epsilon, a),
        CatalogKind::CnsPower(e) => cns_power(p, entry.epsilon, e * a),
        CatalogKind::CnsPlus => cns_plus_power(p, entry.epsilon, a),
        CatalogKind::CnsPlusPower(b) => cns_plus_power(p, entry.epsilon, b * a),
        _ => generated_power_subgroup(entry, a),
    }
}

/// The subgroup generated by `{ g^a : g ∈ G }`, computed from the full
/// element set. For `C_ns⁺` with `p ≡ 2 (mod 3)` and `a = 3` this is all of
/// `C_ns⁺`, since cubing permutes the non-Cartan coset.
pub fn generated_power_subgroup(entry: &CatalogEntry, a: u32) -> Result<CatalogEntry> {
    check_exponent(a)?;
    let powers: HashSet<Matrix> = entry.group.materialize()?.iter().map(|g| g.pow(a as u64)).collect();
    let mut gens: Vec<Matrix> = powers.into_iter().collect();
    gens.sort_unstable();
    let kind = CatalogKind::PowerClosure(Box::new(entry.kind.clone()), a);
    let group = Subgroup::from_generators(kind.to_string(), gens, None)?;
    group.materialize()?;
    Ok(CatalogEntry { kind, p: entry.p, epsilon: entry.epsilon, group, cartan_generator: entry.cartan_generator })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enumerate_gl2;

    fn eps(p: u32) -> Fp {
        smallest_nonresidue(p).unwrap()
    }

    #[test]
    fn borel_orders_and_membership() {
        assert_eq!(borel(5).unwrap().group.order().unwrap(), 80);
        assert_eq!(borel(7).unwrap().group.order().unwrap(), 252);
        let b = borel(5).unwrap();
        assert_eq!(b.group.materialize().unwrap().len(), 80);
        assert!(b.group.contains(&Matrix::new([2, 3, 0, 4], 5).unwrap()).unwrap());
        assert!(!b.group.contains(&Matrix::new([1, 0, 1, 1], 5).unwrap()).unwrap());
    }

    #[test]
    fn cartan_orders() {
        let c5 = nonsplit_cartan(5, eps(5)).unwrap();
        assert_eq!(c5.group.materialize().unwrap().len(), 24);
        let c23 = nonsplit_cartan(23, eps(23)).unwrap();
        assert_eq!(c23.group.materialize().unwrap().len(), 528);
        assert_eq!(c23.cartan_generator.unwrap().element_order(), 528);
        let n5 = nonsplit_cartan_normalizer(5, eps(5)).unwrap();
        assert_eq!(n5.group.materialize().unwrap().len(), 48);
    }

    #[test]
    fn cartan_rejects_residue_epsilon() {
        let err = nonsplit_cartan(5, Fp::new(4, 5)).unwrap_err();
        assert_eq!(err, Error::NotNonResidue { value: 4, p: 5 });
        assert!(nonsplit_cartan(4, Fp::new(2, 4)).is_err());
    }

    #[test]
    fn cartan_closure_matches_shape() {
        for p in [5u32, 7, 11, 13, 17, 19, 23, 29, 31] {
            let e = eps(p);
            let c = nonsplit_cartan(p, e).unwrap();
            let by_shape: HashSet<Matrix> = (0..p)
                .flat_map(|a| (0..p).map(move |b| (a, b)))
                .filter(|&ab| ab != (0, 0))
                .map(|(a, b)| Matrix::new([a as i64, (e.value() * b) as i64, b as i64, a as i64], p).unwrap())
                .collect();
            assert_eq!(c.group.materialize().unwrap(), &by_shape, "p = {p}");
            let plus = nonsplit_cartan_normalizer(p, e).unwrap();
            for m in plus.group.materialize().unwrap() {
                assert!(has_cartan_shape(m, e) ^ has_normalizer_shape(m, e));
            }
        }
    }

    #[test]
    fn normalizer_is_exactly_the_normalizer() {
        for p in [5u32, 7, 11, 13] {
            let e = eps(p);
            let cns = nonsplit_cartan(p, e).unwrap();
            let gamma = cns.cartan_generator.unwrap();
            let plus = nonsplit_cartan_normalizer(p, e).unwrap();
            let plus_set = plus.group.materialize().unwrap();
            for n in plus_set {
                for m in cns.group.materialize().unwrap() {
                    assert!(has_cartan_shape(&m.conjugate_by(n).unwrap(), e));
                }
            }
            // C_ns is cyclic, so x normalizes it iff x γ x⁻¹ ∈ C_ns.
            let normalizer_count = enumerate_gl2(p)
                .unwrap()
                .elements
                .iter()
                .filter(|x| has_cartan_shape(&gamma.conjugate_by(x).unwrap(), e))
                .inspect(|x| assert!(plus_set.contains(x)))
                .count();
            assert_eq!(normalizer_count, plus_set.len());
        }
    }

    #[test]
    fn power_subgroup_examples() {
        let c5 = nonsplit_cartan(5, eps(5)).unwrap();
        assert_eq!(power_subgroup(&c5, 1).unwrap().group.materialize().unwrap().len(), 24);
        let c23 = nonsplit_cartan(23, eps(23)).unwrap();
        let cubes = power_subgroup(&c23, 3).unwrap();
        assert_eq!(cubes.kind, CatalogKind::CnsPower(3));
        assert_eq!(cubes.group.materialize().unwrap().len(), 176);
        let plus = nonsplit_cartan_normalizer(23, eps(23)).unwrap();
        let plus_cubed = power_subgroup(&plus, 3).unwrap();
        assert_eq!(plus_cubed.group.materialize().unwrap().len(), 352);
        // The literal closure of all cubes is the whole normalizer.
        let generated = generated_power_subgroup(&plus, 3).unwrap();
        assert_eq!(generated.group.order().unwrap(), 1056);
        assert!(power_subgroup(&plus, 0).is_err());
    }

    #[test]
    fn power_subgroup_composes() {
        let c = nonsplit_cartan(13, eps(13)).unwrap();
        let twice = power_subgroup(&power_subgroup(&c, 2).unwrap(), 3).unwrap();
        let once = power_subgroup(&c, 6).unwrap();
        assert!(twice.group.same_elements(&once.group).unwrap());
    }

    #[test]
    fn power_subgroup_of_borel_materializes() {
        let b = borel(5).unwrap();
        let sq = power_subgroup(&b, 2).unwrap();
        assert_eq!(sq.kind, CatalogKind::PowerClosure(Box::new(CatalogKind::Borel), 2));
        assert!(sq.group.order().unwrap() < 80);
        assert_eq!(80 % sq.group.order().unwrap(), 0);
    }

    #[test]
    fn closed_form_orders_hold_for_all_kinds() {
        for p in [5u32, 7, 11, 13, 17, 19, 23] {
            for kind in CatalogKind::standard_kinds() {
                let e = standard_entry(&kind, p).unwrap();
                assert_eq!(e.group.materialize().unwrap().len() as u64, kind.order(p).unwrap(), "{kind} at p = {p}");
            }
        }
    }

    #[test]
    fn index_of_borel_is_p_plus_one() {
        for p in [5u32, 7, 97, 9973] {
            let g = gl2(p).unwrap().group.order().unwrap();
            let b = borel(p).unwrap().group.order().unwrap();
            assert_eq!(g / b, p as u64 + 1);
            assert_eq!(g % b, 0);
        }
    }
}
