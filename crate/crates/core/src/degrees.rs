//! Per-prime lower bounds on the degree of the field of definition of a
//! `p`-isogeny, as minimal orbit sizes of the admissible Galois images.
//!
//! These are group-theoretic bounds: they equal the true minimal degree
//! exactly when the image class is realized by a curve.

use std::fmt;

use serde::Serialize;

use crate::action::{min_orbit_size, Space};
use crate::catalog::{self, CatalogEntry, CatalogKind};
use crate::error::{Error, Result};
use crate::field::{check_nonresidue, check_supported_prime, smallest_nonresidue, Fp};
use crate::isogeny_sets::in_iq1;

pub const SEMANTICS: &str = "lower bound (exact if image realized)";

/// Images a non-CM `ρ_{E,p}` can have for `p ∉ I_Q(1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ImageTag {
    Surjective,
    CnsPlus,
    CnsPlusCubed,
    CnsPower(u32),
}

impl ImageTag {
    pub fn catalog_kind(self) -> CatalogKind {
        match self {
            ImageTag::Surjective => CatalogKind::Gl2,
            ImageTag::CnsPlus => CatalogKind::CnsPlus,
            ImageTag::CnsPlusCubed => CatalogKind::CnsPlusPower(3),
            ImageTag::CnsPower(e) => CatalogKind::CnsPower(e),
        }
    }
}

impl fmt::Display for ImageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImageTag::Surjective => write!(f, "surjective"),
            ImageTag::CnsPlus => write!(f, "Cns+"),
            ImageTag::CnsPlusCubed => write!(f, "(Cns+)^3"),
            ImageTag::CnsPower(e) => write!(f, "Cns^{e}"),
        }
    }
}

/// An image class with the standard representative of its conjugacy class.
/// Orbit statistics are conjugation invariant, so the representative stands
/// in for the whole class.
#[derive(Clone, Debug)]
pub struct ImageClass {
    pub tag: ImageTag,
    pub entry: CatalogEntry,
}

impl ImageClass {
    fn new(tag: ImageTag, p: u32, epsilon: Fp) -> Result<ImageClass> {
        let entry = catalog::entry(&tag.catalog_kind(), p, epsilon)?;
        if tag == ImageTag::CnsPlusCubed && p % 3 != 2 {
            return Err(Error::InvalidArgument(format!("(Cns+)^3 is only admissible for p ≡ 2 (mod 3), got {p}")));
        }
        Ok(ImageClass { tag, entry })
    }
}

/// Accepts primes `p ≥ 5` outside `I_Q(1)` within the supported range.
pub fn check_domain(p: u64) -> Result<u32> {
    if !crate::field::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if in_iq1(p) {
        return Err(Error::InBaseSet { p });
    }
    check_supported_prime(p)
}

fn resolve_epsilon(p: u32, epsilon: Option<u32>) -> Result<Fp> {
    match epsilon {
        None => smallest_nonresidue(p),
        Some(e) => {
            let e = Fp::new(e as i64, p);
            check_nonresidue(e)?;
            Ok(e)
        }
    }
}

pub fn allowed_images(p: u64) -> Result<Vec<ImageClass>> {
    allowed_images_with(p, None)
}

/// `[Surjective, Cns+]`, plus `(Cns+)^3` when `p ≡ 2 (mod 3)`.
pub fn allowed_images_with(p: u64, epsilon: Option<u32>) -> Result<Vec<ImageClass>> {
    let p = check_domain(p)?;
    let eps = resolve_epsilon(p, epsilon)?;
    let mut tags = vec![ImageTag::Surjective, ImageTag::CnsPlus];
    if p % 3 == 2 {
        tags.push(ImageTag::CnsPlusCubed);
    }
    tags.into_iter().map(|t| ImageClass::new(t, p, eps)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImageDegree {
    pub image: ImageTag,
    pub group: String,
    pub group_order: u64,
    pub min_orbit: u64,
    /// Orbit sizes on `P¹(F_p)`, ascending.
    pub partition: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub p: u32,
    pub epsilon: u32,
    pub residue_class: u32,
    pub per_image: Vec<ImageDegree>,
    pub d_lower: u64,
    pub semantics: &'static str,
}

impl DegreeReport {
    pub fn min_orbit_for(&self, tag: ImageTag) -> Option<u64> {
        self.per_image.iter().find(|d| d.image == tag).map(|d| d.min_orbit)
    }
}

fn image_degree(class: &ImageClass) -> Result<ImageDegree> {
    let (min_orbit, part) = min_orbit_size(&class.entry.group, Space::ProjectiveLine);
    Ok(ImageDegree {
        image: class.tag,
        group: class.entry.kind.to_string(),
        group_order: class.entry.group.order()?,
        min_orbit,
        partition: part.sizes,
    })
}

pub fn degree_lower_bound(p: u64) -> Result<DegreeReport> {
    degree_lower_bound_with(p, None)
}

/// Minimum over the allowed images of the minimal orbit on `P¹(F_p)`.
pub fn degree_lower_bound_with(p: u64, epsilon: Option<u32>) -> Result<DegreeReport> {
    let images = allowed_images_with(p, epsilon)?;
    let p = p as u32;
    let per_image = images.iter().map(image_degree).collect::<Result<Vec<_>>>()?;
    let d_lower = per_image.iter().map(|d| d.min_orbit).min().expect("Surjective is always allowed");
    if per_image[0].min_orbit != p as u64 + 1 {
        return Err(Error::Inconsistent(format!("GL2(F_{p}) is not transitive on P¹")));
    }
    Ok(DegreeReport {
        p,
        epsilon: images[0].entry.epsilon.value(),
        residue_class: p % 3,
        per_image,
        d_lower,
        semantics: SEMANTICS,
    })
}

/// The bound when `E` has no additive reduction at `p`: the image is
/// surjective or contains all of `C_ns`, so the minimum runs over GL2, `C_ns`
/// and `C_ns⁺`.
pub fn nonadditive_bound(p: u64) -> Result<u64> {
    let p = check_domain(p)?;
    let eps = smallest_nonresidue(p)?;
    [CatalogKind::Gl2, CatalogKind::Cns, CatalogKind::CnsPlus]
        .iter()
        .map(|k| Ok(min_orbit_size(&catalog::entry(k, p, eps)?.group, Space::ProjectiveLine).0))
        .try_fold(u64::MAX, |acc, m: Result<u64>| Ok(acc.min(m?)))
}

/// Minimal orbit of `C_ns^a` on nonzero vectors: a lower bound on the degree
/// of the field of definition of a point of order `p` when the image
/// contains `C_ns^a`.
pub fn point_degree_lower_bound(p: u64, a: u32) -> Result<u64> {
    let p = check_supported_prime(p)?;
    let entry = catalog::cns_power(p, smallest_nonresidue(p)?, a)?;
    Ok(min_orbit_size(&entry.group, Space::NonzeroVectors).0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn allowed_images_by_residue() {
        let tags = |p| allowed_images(p).unwrap().iter().map(|c| c.tag).collect::<Vec<_>>();
        assert_eq!(tags(19), vec![ImageTag::Surjective, ImageTag::CnsPlus]);
        assert_eq!(tags(23), vec![ImageTag::Surjective, ImageTag::CnsPlus, ImageTag::CnsPlusCubed]);
        assert_eq!(allowed_images(13).unwrap_err(), Error::InBaseSet { p: 13 });
        assert_eq!(allowed_images(3).unwrap_err(), Error::InBaseSet { p: 3 });
        assert_eq!(allowed_images(21).unwrap_err(), Error::NotPrime(21));
        assert!(matches!(allowed_images(10007).unwrap_err(), Error::PrimeOutOfRange { .. }));
    }

    #[test]
    fn degree_examples() {
        let r19 = degree_lower_bound(19).unwrap();
        assert_eq!(r19.d_lower, 20);
        assert_eq!(r19.min_orbit_for(ImageTag::CnsPlus), Some(20));
        let r23 = degree_lower_bound(23).unwrap();
        assert_eq!(r23.d_lower, 8);
        assert_eq!(r23.min_orbit_for(ImageTag::Surjective), Some(24));
        assert_eq!(r23.min_orbit_for(ImageTag::CnsPlus), Some(24));
        assert_eq!(r23.min_orbit_for(ImageTag::CnsPlusCubed), Some(8));
        assert_eq!(degree_lower_bound(43).unwrap().d_lower, 44);
    }

    #[test]
    fn epsilon_override() {
        let a = degree_lower_bound_with(23, Some(7)).unwrap();
        assert_eq!(a.epsilon, 7);
        assert_eq!(a.d_lower, 8);
        assert!(matches!(degree_lower_bound_with(23, Some(4)), Err(Error::NotNonResidue { .. })));
    }

    #[test]
    fn nonadditive_examples() {
        assert_eq!(nonadditive_bound(19).unwrap(), 20);
        assert_eq!(nonadditive_bound(23).unwrap(), 24);
    }

    #[test]
    fn point_bound_examples() {
        assert_eq!(point_degree_lower_bound(23, 1).unwrap(), 528);
        assert_eq!(point_degree_lower_bound(23, 3).unwrap(), 176);
        assert_eq!(point_degree_lower_bound(19, 1).unwrap(), 360);
    }

    #[test]
    fn cubed_image_rejected_off_residue_class() {
        let eps = smallest_nonresidue(19).unwrap();
        assert!(ImageClass::new(ImageTag::CnsPlusCubed, 19, eps).is_err());
    }
}
