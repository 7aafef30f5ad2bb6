//! The two spaces `GL2(F_p)` acts on: the projective line `P¹(F_p)` (lines
//! through the origin, i.e. cyclic subgroups of order `p`) and the nonzero
//! vectors of `F_p²` (points of order `p`).
//!
//! Orbits are found by breadth-first search over the generators, so large
//! groups never need to be materialized. Stabilizers do materialize.

use std::collections::{HashSet, VecDeque};
use std::fmt::{self, Debug};
use std::hash::Hash;

use bitvec::vec::BitVec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gl2::{Matrix, Subgroup};

/// A point of a finite `GL2(F_p)`-set with a dense index.
pub trait Point: Copy + Eq + Hash + Ord + Debug {
    const SPACE: Space;

    fn modulus(&self) -> u32;

    /// Canonical coordinates.
    fn coords(&self) -> (u32, u32);

    /// The point with the given coordinates, normalized; `None` at the origin.
    fn from_coords(p: u32, x: u32, y: u32) -> Option<Self>;

    /// The image under the left action `x ↦ m·x`.
    fn act(&self, m: &Matrix) -> Self;

    fn index(&self) -> usize;

    fn from_index(p: u32, index: usize) -> Option<Self>;

    /// Number of slots in the index space; may exceed the number of points.
    fn index_bound(p: u32) -> usize;

    /// Number of points in the space.
    fn count(p: u32) -> u64;

    fn all(p: u32) -> Box<dyn Iterator<Item = Self>> {
        Box::new((0..Self::index_bound(p)).filter_map(move |i| Self::from_index(p, i)))
    }
}

/// A point of `P¹(F_p)`, normalized to `(1, t)` or `(0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProjPoint {
    x: u32,
    y: u32,
    p: u32,
}

impl ProjPoint {
    /// The line through `(x, y) ≠ (0, 0)`.
    pub fn new(x: i64, y: i64, p: u32) -> Result<ProjPoint> {
        let (x, y) = (x.rem_euclid(p as i64) as u32, y.rem_euclid(p as i64) as u32);
        if x == 0 && y == 0 {
            return Err(Error::InvalidArgument("the zero vector spans no line".into()));
        }
        Ok(ProjPoint::normalize(x, y, p))
    }

    /// The point `(1 : t)`.
    pub fn affine(t: u32, p: u32) -> ProjPoint {
        ProjPoint { x: 1, y: t % p, p }
    }

    pub fn infinity(p: u32) -> ProjPoint {
        ProjPoint { x: 0, y: 1, p }
    }

    fn normalize(x: u32, y: u32, p: u32) -> ProjPoint {
        if x == 0 {
            ProjPoint { x: 0, y: 1, p }
        } else {
            let inv = crate::field::Fp::new(x as i64, p).inv().expect("x ≠ 0").value() as u64;
            ProjPoint { x: 1, y: (y as u64 * inv % p as u64) as u32, p }
        }
    }
}

impl Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.x, self.y)
    }
}

impl Point for ProjPoint {
    const SPACE: Space = Space::ProjectiveLine;

    fn modulus(&self) -> u32 {
        self.p
    }

    fn coords(&self) -> (u32, u32) {
        (self.x, self.y)
    }

    fn from_coords(p: u32, x: u32, y: u32) -> Option<ProjPoint> {
        ProjPoint::new(x as i64, y as i64, p).ok()
    }

    fn act(&self, m: &Matrix) -> ProjPoint {
        let (x, y) = m.apply(self.x, self.y);
        ProjPoint::normalize(x, y, self.p)
    }

    fn index(&self) -> usize {
        if self.x == 0 {
            self.p as usize
        } else {
            self.y as usize
        }
    }

    fn from_index(p: u32, index: usize) -> Option<ProjPoint> {
        match index {
            i if i < p as usize => Some(ProjPoint::affine(i as u32, p)),
            i if i == p as usize => Some(ProjPoint::infinity(p)),
            _ => None,
        }
    }

    fn index_bound(p: u32) -> usize {
        p as usize + 1
    }

    fn count(p: u32) -> u64 {
        p as u64 + 1
    }
}

/// A nonzero vector of `F_p²`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VecPoint {
    x: u32,
    y: u32,
    p: u32,
}

impl VecPoint {
    pub fn new(x: i64, y: i64, p: u32) -> Result<VecPoint> {
        let (x, y) = (x.rem_euclid(p as i64) as u32, y.rem_euclid(p as i64) as u32);
        if x == 0 && y == 0 {
            return Err(Error::InvalidArgument("the zero vector is not a point of order p".into()));
        }
        Ok(VecPoint { x, y, p })
    }

    /// The line `⟨P⟩`.
    pub fn line(&self) -> ProjPoint {
        ProjPoint::normalize(self.x, self.y, self.p)
    }
}

impl Debug for VecPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.x, self.y)
    }
}

impl Point for VecPoint {
    const SPACE: Space = Space::NonzeroVectors;

    fn modulus(&self) -> u32 {
        self.p
    }

    fn coords(&self) -> (u32, u32) {
        (self.x, self.y)
    }

    fn from_coords(p: u32, x: u32, y: u32) -> Option<VecPoint> {
        VecPoint::new(x as i64, y as i64, p).ok()
    }

    fn act(&self, m: &Matrix) -> VecPoint {
        let (x, y) = m.apply(self.x, self.y);
        VecPoint { x, y, p: self.p }
    }

    fn index(&self) -> usize {
        self.x as usize * self.p as usize + self.y as usize
    }

    fn from_index(p: u32, index: usize) -> Option<VecPoint> {
        let (x, y) = ((index / p as usize) as u32, (index % p as usize) as u32);
        (index > 0 && x < p).then_some(VecPoint { x, y, p })
    }

    fn index_bound(p: u32) -> usize {
        p as usize * p as usize
    }

    fn count(p: u32) -> u64 {
        p as u64 * p as u64 - 1
    }
}

pub fn act_proj(m: &Matrix, pt: &ProjPoint) -> Result<ProjPoint> {
    check_modulus(m.modulus(), pt.p)?;
    Ok(pt.act(m))
}

pub fn act_vec(m: &Matrix, pt: &VecPoint) -> Result<VecPoint> {
    check_modulus(m.modulus(), pt.p)?;
    Ok(pt.act(m))
}

fn check_modulus(a: u32, b: u32) -> Result<()> {
    if a != b {
        return Err(Error::ModulusMismatch(a, b));
    }
    Ok(())
}

/// Which of the two spaces an orbit computation runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Space {
    ProjectiveLine,
    NonzeroVectors,
}

impl Space {
    pub fn size(self, p: u32) -> u64 {
        match self {
            Space::ProjectiveLine => ProjPoint::count(p),
            Space::NonzeroVectors => VecPoint::count(p),
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::ProjectiveLine => "lines",
            Space::NonzeroVectors => "vectors",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit<P> {
    pub base: P,
    pub size: u64,
    /// Sorted.
    pub members: Vec<P>,
    pub stabilizer_order: u64,
}

fn bfs_members<P: Point>(generators: &[Matrix], pt: P) -> Vec<P> {
    let mut seen = HashSet::from([pt]);
    let mut queue = VecDeque::from([pt]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = x.act(g);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    let mut members: Vec<P> = seen.into_iter().collect();
    members.sort_unstable();
    members
}

/// The orbit of `pt`, with the stabilizer order from orbit–stabilizer.
pub fn orbit<P: Point>(g: &Subgroup, pt: &P) -> Result<Orbit<P>> {
    check_modulus(g.modulus(), pt.modulus())?;
    let members = bfs_members(g.generators(), *pt);
    let size = members.len() as u64;
    let order = g.order()?;
    if order % size != 0 {
        return Err(Error::Inconsistent(format!("{}: orbit of size {size} does not divide |G| = {order}", g.label())));
    }
    Ok(Orbit { base: *pt, size, members, stabilizer_order: order / size })
}

/// Orbit decomposition of a whole space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitPartition {
    pub space: Space,
    /// Ascending.
    pub sizes: Vec<u64>,
    /// Dense index of the least point of each orbit, parallel to the orbits
    /// in discovery order (not to `sizes`).
    #[serde(skip)]
    pub representatives: Vec<usize>,
}

impl OrbitPartition {
    pub fn min(&self) -> u64 {
        self.sizes.first().copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.sizes.iter().sum()
    }
}

/// Orbit label per dense index (`usize::MAX` off the space), plus orbit sizes
/// and representatives in discovery order.
fn label_orbits<P: Point>(g: &Subgroup) -> (Vec<usize>, Vec<u64>, Vec<usize>) {
    let p = g.modulus();
    let gens = g.generators();
    let bound = P::index_bound(p);
    let mut labels = vec![usize::MAX; bound];
    let mut sizes = Vec::new();
    let mut representatives = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..bound {
        if labels[start] != usize::MAX {
            continue;
        }
        let Some(pt) = P::from_index(p, start) else { continue };
        let label = sizes.len();
        labels[start] = label;
        queue.push_back(pt);
        let mut size = 0u64;
        while let Some(x) = queue.pop_front() {
            size += 1;
            for m in gens {
                let y = x.act(m);
                let i = y.index();
                if labels[i] == usize::MAX {
                    labels[i] = label;
                    queue.push_back(y);
                }
            }
        }
        sizes.push(size);
        representatives.push(start);
    }
    (labels, sizes, representatives)
}

fn partition_of<P: Point>(g: &Subgroup, space: Space) -> OrbitPartition {
    let p = g.modulus();
    let gens = g.generators();
    let bound = P::index_bound(p);
    let mut visited: BitVec = BitVec::repeat(false, bound);
    let mut sizes = Vec::new();
    let mut representatives = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..bound {
        if visited[start] {
            continue;
        }
        let Some(pt) = P::from_index(p, start) else { continue };
        visited.set(start, true);
        queue.push_back(pt);
        let mut size = 0u64;
        while let Some(x) = queue.pop_front() {
            size += 1;
            for m in gens {
                let y = x.act(m);
                let i = y.index();
                if !visited[i] {
                    visited.set(i, true);
                    queue.push_back(y);
                }
            }
        }
        sizes.push(size);
        representatives.push(start);
    }
    sizes.sort_unstable();
    OrbitPartition { space, sizes, representatives }
}

/// The size of the orbit through each point, by dense index; zero at
/// indices that are not points.
pub fn orbit_size_map<P: Point>(g: &Subgroup) -> Vec<u64> {
    let (labels, sizes, _) = label_orbits::<P>(g);
    labels.into_iter().map(|l| if l == usize::MAX { 0 } else { sizes[l] }).collect()
}

/// All orbit sizes on `space`, ascending.
pub fn orbit_partition(g: &Subgroup, space: Space) -> OrbitPartition {
    match space {
        Space::ProjectiveLine => partition_of::<ProjPoint>(g, space),
        Space::NonzeroVectors => partition_of::<VecPoint>(g, space),
    }
}

/// Minimal orbit size on `space`, together with the full partition.
pub fn min_orbit_size(g: &Subgroup, space: Space) -> (u64, OrbitPartition) {
    let part = orbit_partition(g, space);
    (part.min(), part)
}

/// `{ m ∈ G : m·pt = pt }`; for a [`ProjPoint`] this is the stabilizer of the line.
pub fn stabilizer<P: Point>(g: &Subgroup, pt: &P) -> Result<Subgroup> {
    check_modulus(g.modulus(), pt.modulus())?;
    let elements: HashSet<Matrix> = g.materialize()?.iter().filter(|m| pt.act(m) == *pt).copied().collect();
    Ok(Subgroup::from_elements(format!("Stab_{}({pt:?})", g.label()), g.modulus(), elements))
}

/// `[Stab_G(⟨P⟩) : Stab_G(P)]` from explicit stabilizers.
pub fn line_point_stabilizer_index(g: &Subgroup, pt: &VecPoint) -> Result<u64> {
    let line = stabilizer(g, &pt.line())?;
    let point = stabilizer(&line, pt)?;
    let (l, q) = (line.order()?, point.order()?);
    if l % q != 0 {
        return Err(Error::Inconsistent(format!("|Stab(P)| = {q} does not divide |Stab(C)| = {l}")));
    }
    Ok(l / q)
}
