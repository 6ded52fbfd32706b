//! Explicit point sets realizing classification entries.
//!
//! Each constructor returns a candidate set; [`witness`] runs the stabilizer
//! oracle on it and only accepts the set when the oracle reports exactly the
//! requested group and component index. Rejected candidates are rebuilt
//! from the next seed in a fixed, deterministic schedule.

use std::f64::consts::TAU;

use serde::Serialize;
use thiserror::Error;

use crate::classifier::{classify, ClassificationEntry, ClassifyError, ComponentIndex, GroupLabel};
use crate::geometry::{chordal_distance, GeometryError, MobiusMap, PointSet, RiemannPoint, C64};
use crate::oracle::{stabilizer, OracleError, StabilizerResult};

/// Default number of seed schedules tried before giving up.
pub const DEFAULT_RETRY_BOUND: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WitnessError {
    #[error("index {index} cannot be realized with stabilizer {group}")]
    UnrealizableIndex { group: GroupLabel, index: ComponentIndex },
    #[error("invalid cardinality {0}")]
    InvalidCardinality(u64),
    #[error("seed lies on a special orbit of {0} (orbit size {1})")]
    SeedOnSpecialLocus(GroupLabel, usize),
    #[error("orbit tag {tag:?} does not belong to {group}")]
    BadOrbitTag { group: GroupLabel, tag: SpecialOrbit },
    #[error("{entry} is not in the classification for n = {n}")]
    NotInClassification { n: u64, entry: ClassificationEntry },
    #[error("stabilizer of sets with at most two points is infinite; no finite witness to verify")]
    InfiniteStabilizer,
    #[error("no verified witness for {entry} at n = {n} after {attempts} attempt(s); last: {last}")]
    WitnessSearchExhausted { n: u64, entry: ClassificationEntry, attempts: usize, last: String },
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

// ---------------------------------------------------------------------------
// polyhedral groups
// ---------------------------------------------------------------------------

const GOLDEN: f64 = 1.618_033_988_749_895;

/// Chordal tolerance used to merge orbit points produced by group products.
const ORBIT_MERGE_TOL: f64 = 1e-7;

fn normalized(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn rotate(v: [f64; 3], axis: [f64; 3], angle: f64) -> [f64; 3] {
    let k = normalized(axis);
    let (s, c) = angle.sin_cos();
    let dot = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
    let cross = [k[1] * v[2] - k[2] * v[1], k[2] * v[0] - k[0] * v[2], k[0] * v[1] - k[1] * v[0]];
    [0, 1, 2].map(|i| v[i] * c + cross[i] * s + k[i] * dot * (1.0 - c))
}

/// The Möbius map induced on the plane by a rotation of the sphere.
pub fn rotation_map(axis: [f64; 3], angle: f64) -> MobiusMap {
    let frame = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]];
    let src = frame.map(RiemannPoint::from_sphere);
    let dst = frame.map(|v| RiemannPoint::from_sphere(rotate(v, axis, angle)));
    MobiusMap::through_triple(src, dst, 0.0).expect("rotation of a non-degenerate frame")
}

/// Closure of a generating set under composition.
fn generate(generators: &[MobiusMap]) -> Vec<MobiusMap> {
    let mut elements = vec![MobiusMap::identity()];
    let mut frontier = 0;
    while frontier < elements.len() {
        let e = elements[frontier];
        for g in generators {
            let h = g.compose(&e);
            if !elements.iter().any(|x| x.approx_eq(&h, 1e-9)) {
                elements.push(h);
            }
        }
        frontier += 1;
    }
    elements
}

/// Rotation group of the icosahedron, octahedron or tetrahedron in the
/// standard embedding: icosahedron vertices are the cyclic permutations of
/// `(0, ±1, ±φ)`, the cube and octahedron are axis aligned, and the
/// tetrahedron takes alternate cube vertices.
pub fn polyhedral_group(group: GroupLabel) -> Vec<MobiusMap> {
    let third = TAU / 3.0;
    let gens = match group {
        GroupLabel::A5 => vec![
            rotation_map([0.0, 1.0, GOLDEN], TAU / 5.0),
            rotation_map([1.0, 1.0, 1.0], third),
            rotation_map([0.0, 0.0, 1.0], TAU / 2.0),
        ],
        GroupLabel::S4 => vec![rotation_map([0.0, 0.0, 1.0], TAU / 4.0), rotation_map([1.0, 1.0, 1.0], third)],
        GroupLabel::A4 => vec![rotation_map([0.0, 0.0, 1.0], TAU / 2.0), rotation_map([1.0, 1.0, 1.0], third)],
        g => panic!("{g} is not polyhedral"),
    };
    generate(&gens)
}

/// Named orbits with nontrivial point stabilizers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpecialOrbit {
    /// Icosahedral: 12 vertices, 20 face centres, 30 edge midpoints.
    V12,
    V20,
    V30,
    /// Octahedral: 6 octahedron vertices, 8 cube vertices; `V12` is reused
    /// for the 12 edge midpoints. Tetrahedral: `V6` is the 6 edge midpoints.
    V6,
    V8,
    /// The two inscribed tetrahedra of the cube.
    V4a,
    V4b,
    /// Dihedral `{0, ∞}`, the `p`-th roots of unity, and their half-turn.
    Poles,
    RootsA,
    RootsB,
    /// Cyclic fixed points.
    Pole0,
    PoleInf,
}

/// Seed of an orbit: a named special orbit or a generic point.
#[derive(Debug, Clone, Copy)]
pub enum OrbitSeed {
    Special(SpecialOrbit),
    Generic(RiemannPoint),
}

fn special_direction(group: GroupLabel, tag: SpecialOrbit) -> Option<[f64; 3]> {
    use SpecialOrbit::*;
    Some(match (group, tag) {
        (GroupLabel::A5, V12) => [0.0, 1.0, GOLDEN],
        (GroupLabel::A5, V20) => [1.0, 1.0, 1.0],
        (GroupLabel::A5, V30) => [0.0, 0.0, 1.0],
        (GroupLabel::S4, V6) | (GroupLabel::A4, V6) => [0.0, 0.0, 1.0],
        (GroupLabel::S4, V8) | (GroupLabel::A4, V4a) => [1.0, 1.0, 1.0],
        (GroupLabel::A4, V4b) => [-1.0, -1.0, -1.0],
        (GroupLabel::S4, V12) => [1.0, 1.0, 0.0],
        _ => return None,
    })
}

fn orbit_points(elements: &[MobiusMap], seed: &RiemannPoint) -> Vec<RiemannPoint> {
    let mut pts: Vec<RiemannPoint> = Vec::new();
    for g in elements {
        let q = g.apply(seed);
        if !pts.iter().any(|p| chordal_distance(p, &q) <= ORBIT_MERGE_TOL) {
            pts.push(q);
        }
    }
    pts
}

/// Full orbit of a polyhedral group.
pub fn polyhedral_orbit(group: GroupLabel, seed: OrbitSeed, tol: f64) -> Result<PointSet, WitnessError> {
    let elements = polyhedral_group(group);
    let pts = match seed {
        OrbitSeed::Special(tag) => {
            let dir = special_direction(group, tag).ok_or(WitnessError::BadOrbitTag { group, tag })?;
            orbit_points(&elements, &RiemannPoint::from_sphere(dir))
        }
        OrbitSeed::Generic(p) => {
            let pts = orbit_points(&elements, &p);
            if pts.len() < elements.len() {
                return Err(WitnessError::SeedOnSpecialLocus(group, pts.len()));
            }
            pts
        }
    };
    Ok(PointSet::new(pts, tol)?)
}

/// A request for orbits of one group: a special orbit, or `multiplicity`
/// generic orbits spread out from `seed` by small rotations.
#[derive(Debug, Clone, Copy)]
pub struct OrbitRecipe {
    pub group: GroupLabel,
    pub seed: OrbitSeed,
    pub multiplicity: usize,
}

impl OrbitRecipe {
    pub fn build(&self, tol: f64) -> Result<PointSet, WitnessError> {
        match self.seed {
            OrbitSeed::Special(tag) => special_orbit(self.group, tag, tol),
            OrbitSeed::Generic(p) => {
                let pts = generic_orbits(self.group, &p, self.multiplicity)?;
                Ok(PointSet::new(pts, tol)?)
            }
        }
    }
}

fn special_orbit(group: GroupLabel, tag: SpecialOrbit, tol: f64) -> Result<PointSet, WitnessError> {
    use SpecialOrbit::*;
    let pts = match (group, tag) {
        (GroupLabel::A5 | GroupLabel::S4 | GroupLabel::A4, _) => {
            return polyhedral_orbit(group, OrbitSeed::Special(tag), tol);
        }
        (GroupLabel::Dihedral(_) | GroupLabel::K4, Poles) | (GroupLabel::Cyclic(_) | GroupLabel::Z2, Pole0) => {
            dihedral_poles(matches!(tag, Poles))
        }
        (GroupLabel::Cyclic(_) | GroupLabel::Z2, PoleInf) => vec![RiemannPoint::INFINITY],
        (GroupLabel::Dihedral(p), RootsA) => roots(p, 0.0),
        (GroupLabel::Dihedral(p), RootsB) => roots(p, 0.5),
        (GroupLabel::K4, RootsA) => roots(2, 0.0),
        (GroupLabel::K4, RootsB) => roots(2, 0.5),
        _ => return Err(WitnessError::BadOrbitTag { group, tag }),
    };
    Ok(PointSet::new(pts, tol)?)
}

fn dihedral_poles(both: bool) -> Vec<RiemannPoint> {
    if both {
        vec![RiemannPoint::ZERO, RiemannPoint::INFINITY]
    } else {
        vec![RiemannPoint::ZERO]
    }
}

/// `e^{2πi (j + shift) / p}` for `j = 0..p`.
fn roots(p: u64, shift: f64) -> Vec<RiemannPoint> {
    (0..p).map(|j| RiemannPoint::unit((j as f64 + shift) / p as f64)).collect()
}

/// Dihedral orbit `C_p(z) = {z ω^j} ∪ {z⁻¹ ω^j}`.
fn dihedral_generic(p: u64, z: C64) -> Vec<RiemannPoint> {
    let zi = z.inv();
    (0..p)
        .flat_map(|j| {
            let w = C64::from_polar(1.0, TAU * j as f64 / p as f64);
            [RiemannPoint::finite(z * w), RiemannPoint::finite(zi * w)]
        })
        .collect()
}

/// Cyclic orbit `{z ω^j}`.
fn cyclic_generic(p: u64, z: C64) -> Vec<RiemannPoint> {
    (0..p).map(|j| RiemannPoint::finite(z * C64::from_polar(1.0, TAU * j as f64 / p as f64))).collect()
}

const GENERIC_AXIS: [f64; 3] = [0.61, -0.31, 0.23];

fn polyhedral_base_point(attempt: usize) -> RiemannPoint {
    let a = attempt as f64;
    RiemannPoint::from_sphere([0.213 + 0.071 * a, 0.437 - 0.053 * a, 0.874 - 0.029 * a])
}

/// `count` generic orbits seeded at small rotations of `base` about a fixed
/// generic axis, by angles `2π l / (8 count² |G|)`.
fn generic_orbits(group: GroupLabel, base: &RiemannPoint, count: usize) -> Result<Vec<RiemannPoint>, WitnessError> {
    let elements = polyhedral_group(group);
    let order = elements.len() as f64;
    let k = count as f64;
    let b = base.to_sphere();
    let mut pts = Vec::new();
    for l in 1..=count {
        let seed = rotate(b, GENERIC_AXIS, TAU * l as f64 / (8.0 * k * k * order));
        let orbit = orbit_points(&elements, &RiemannPoint::from_sphere(seed));
        if orbit.len() < elements.len() {
            return Err(WitnessError::SeedOnSpecialLocus(group, orbit.len()));
        }
        pts.extend(orbit);
    }
    Ok(pts)
}

// ---------------------------------------------------------------------------
// raw constructors (no realizability check)
// ---------------------------------------------------------------------------

/// Union of special orbits and `k` generic orbits of a polyhedral group.
/// `index` is `(ν, μ, ε, k)` for A5/S4 and `(ν, ε, k)` for A4.
pub fn build_polyhedral_unchecked(
    group: GroupLabel,
    index: &[u64],
    attempt: usize,
    tol: f64,
) -> Result<PointSet, WitnessError> {
    use SpecialOrbit::*;
    let bad = || WitnessError::UnrealizableIndex { group, index: ComponentIndex::new(index) };
    let (tags, k): (Vec<SpecialOrbit>, u64) = match (group, index) {
        (GroupLabel::A5, &[v, m, e, k]) => {
            ([(v, V12), (m, V20), (e, V30)].iter().filter(|x| x.0 == 1).map(|x| x.1).collect(), k)
        }
        (GroupLabel::S4, &[v, m, e, k]) => {
            ([(v, V6), (m, V8), (e, V12)].iter().filter(|x| x.0 == 1).map(|x| x.1).collect(), k)
        }
        (GroupLabel::A4, &[v, e, k]) => {
            let mut t = match v {
                0 => vec![],
                1 => vec![V4a],
                2 => vec![V4a, V4b],
                _ => return Err(bad()),
            };
            if e == 1 {
                t.push(V6);
            }
            (t, k)
        }
        _ => return Err(bad()),
    };
    let elements = polyhedral_group(group);
    let mut pts = Vec::new();
    for tag in tags {
        let dir = special_direction(group, tag).expect("tag matches group");
        pts.extend(orbit_points(&elements, &RiemannPoint::from_sphere(dir)));
    }
    if k > 0 {
        pts.extend(generic_orbits(group, &polyhedral_base_point(attempt), k as usize)?);
    }
    Ok(PointSet::new(pts, tol)?)
}

/// Dihedral-`p` set with index `(ν, ε, k)` (`p ≥ 3`) or `(ν, k)` (`p = 2`).
///
/// Generic part: `⋃_{l=1..k} C_p(r_l e^{2πi l / (8k²p)})` with `r_l = 1` on
/// the first attempt and `1 + a·l/10` on attempt `a`. For `p ≥ 3`, `ν` adds
/// `{0, ∞}` and `ε` adds the roots of unity then their half-turn. For
/// `p = 2`, `ν` adds `{0, ∞}`, `{±1}`, `{±i}` in that order.
pub fn build_dihedral_unchecked(p: u64, index: &[u64], attempt: usize, tol: f64) -> Result<PointSet, WitnessError> {
    let group = GroupLabel::dihedral(p.max(2));
    let bad = || WitnessError::UnrealizableIndex { group, index: ComponentIndex::new(index) };
    let (specials, k): (Vec<Vec<RiemannPoint>>, u64) = match (p, index) {
        (2, &[v, k]) if v <= 3 => {
            let fams = [dihedral_poles(true), roots(2, 0.0), roots(2, 0.5)];
            (fams.into_iter().take(v as usize).collect(), k)
        }
        (p, &[v, e, k]) if p >= 3 && v <= 1 && e <= 2 => {
            let mut fams = Vec::new();
            if v == 1 {
                fams.push(dihedral_poles(true));
            }
            if e >= 1 {
                fams.push(roots(p, 0.0));
            }
            if e == 2 {
                fams.push(roots(p, 0.5));
            }
            (fams, k)
        }
        _ => return Err(bad()),
    };
    let mut pts: Vec<RiemannPoint> = specials.into_iter().flatten().collect();
    let kf = k as f64;
    for l in 1..=k {
        let radius = 1.0 + 0.1 * attempt as f64 * l as f64;
        let z = C64::from_polar(radius, TAU * l as f64 / (8.0 * kf * kf * p as f64));
        pts.extend(dihedral_generic(p, z));
    }
    Ok(PointSet::new(pts, tol)?)
}

/// Cyclic-`p` set with index `(ν, k)`.
///
/// For `p ≥ 3` the generic part is the concentric rings `C_p(l)`,
/// `l = 1..k` (ring `l` turned by `2π a l / (8k²p)` on attempt `a`), with
/// `0` added for `ν ≥ 1` and `∞` for `ν = 2`. For `p = 2` the set lies on
/// the real line: `{0, ±1, …, ±k}`, `{±1/2, …, ±(2k−1)/2}` or
/// `{0, ∞, ±1, …, ±k}`, with pairs turned off the line on later attempts.
pub fn build_cyclic_unchecked(p: u64, index: &[u64], attempt: usize, tol: f64) -> Result<PointSet, WitnessError> {
    let group = GroupLabel::cyclic(p.max(2));
    let &[v, k] = index else {
        return Err(WitnessError::UnrealizableIndex { group, index: ComponentIndex::new(index) });
    };
    if v > 2 || p < 2 {
        return Err(WitnessError::UnrealizableIndex { group, index: ComponentIndex::new(index) });
    }
    let a = attempt as f64;
    let kf = k as f64;
    let mut pts = Vec::new();
    if v >= 1 {
        pts.push(RiemannPoint::ZERO);
    }
    if v == 2 {
        pts.push(RiemannPoint::INFINITY);
    }
    for l in 1..=k {
        let lf = l as f64;
        let z = if p == 2 {
            let modulus = if v == 0 { lf - 0.5 } else { lf };
            C64::from_polar(modulus, 0.17 * a * lf)
        } else {
            C64::from_polar(lf, TAU * a * lf / (8.0 * kf * kf * p as f64))
        };
        pts.extend(cyclic_generic(p, z));
    }
    Ok(PointSet::new(pts, tol)?)
}

/// `(n−1)`-th roots of unity together with one extra point (`2` first).
pub fn build_trivial_unchecked(n: u64, attempt: usize, tol: f64) -> Result<PointSet, WitnessError> {
    if n < 2 {
        return Err(WitnessError::InvalidCardinality(n));
    }
    let mut pts = roots(n - 1, 0.0);
    pts.push(RiemannPoint::finite(C64::new(2.0, 0.3 * attempt as f64)));
    Ok(PointSet::new(pts, tol)?)
}

// ---------------------------------------------------------------------------
// validated constructors
// ---------------------------------------------------------------------------

fn unrealizable(group: GroupLabel, index: &[u64]) -> WitnessError {
    WitnessError::UnrealizableIndex { group, index: ComponentIndex::new(index) }
}

fn check_polyhedral(group: GroupLabel, index: &[u64]) -> Result<(), WitnessError> {
    let entry = ClassificationEntry::new(group, ComponentIndex::new(index)).map_err(|_| unrealizable(group, index))?;
    let forced_up = match group {
        // these unions are invariant under the octahedral group
        GroupLabel::A4 => matches!(index, [2, 0, 0] | [0, 1, 0] | [2, 1, 0]),
        _ => false,
    };
    if forced_up || entry.index.counts().iter().all(|&c| c == 0) {
        return Err(unrealizable(group, index));
    }
    Ok(())
}

/// Polyhedral witness candidate; rejects indices whose union has a
/// strictly larger stabilizer.
pub fn polyhedral_witness(group: GroupLabel, index: &[u64], tol: f64) -> Result<PointSet, WitnessError> {
    check_polyhedral(group, index)?;
    build_polyhedral_unchecked(group, index, 0, tol)
}

fn check_dihedral(p: u64, index: &[u64]) -> Result<(), WitnessError> {
    let group = GroupLabel::dihedral(p.max(2));
    let ok = match (p, index) {
        (2, &[v, k]) => v <= 3 && k >= 1,
        (p, &[v, e, k]) if p >= 3 && v <= 1 && e <= 2 => {
            k >= 1 || matches!((v, e), (0, 1)) || (v == 1 && e == 1 && p != 4)
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(unrealizable(group, index))
    }
}

pub fn dihedral_witness(p: u64, index: &[u64], tol: f64) -> Result<PointSet, WitnessError> {
    check_dihedral(p, index)?;
    build_dihedral_unchecked(p, index, 0, tol)
}

fn check_cyclic(p: u64, index: &[u64]) -> Result<(), WitnessError> {
    let group = GroupLabel::cyclic(p.max(2));
    let ok = match (p, index) {
        (p, &[v, k]) if p >= 2 && v <= 2 => k >= 3 || (v, k) == (1, 2) || ((v, k) == (1, 1) && p >= 4),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(unrealizable(group, index))
    }
}

pub fn cyclic_witness(p: u64, index: &[u64], tol: f64) -> Result<PointSet, WitnessError> {
    check_cyclic(p, index)?;
    build_cyclic_unchecked(p, index, 0, tol)
}

/// No nontrivial Möbius map preserves this set once `n ≥ 5`.
pub fn trivial_witness(n: u64, tol: f64) -> Result<PointSet, WitnessError> {
    if n < 5 {
        return Err(WitnessError::InvalidCardinality(n));
    }
    build_trivial_unchecked(n, 0, tol)
}

fn candidate(n: u64, entry: &ClassificationEntry, attempt: usize, tol: f64) -> Result<PointSet, WitnessError> {
    let c = entry.index.counts();
    match entry.group {
        GroupLabel::A5 | GroupLabel::S4 | GroupLabel::A4 => {
            check_polyhedral(entry.group, c)?;
            build_polyhedral_unchecked(entry.group, c, attempt, tol)
        }
        GroupLabel::Dihedral(p) => {
            check_dihedral(p, c)?;
            build_dihedral_unchecked(p, c, attempt, tol)
        }
        GroupLabel::K4 => {
            check_dihedral(2, c)?;
            build_dihedral_unchecked(2, c, attempt, tol)
        }
        GroupLabel::Cyclic(p) => {
            check_cyclic(p, c)?;
            build_cyclic_unchecked(p, c, attempt, tol)
        }
        GroupLabel::Z2 => {
            check_cyclic(2, c)?;
            build_cyclic_unchecked(2, c, attempt, tol)
        }
        GroupLabel::Trivial => {
            if n < 5 {
                return Err(WitnessError::InvalidCardinality(n));
            }
            build_trivial_unchecked(n, attempt, tol)
        }
        GroupLabel::Infinite => Err(WitnessError::InfiniteStabilizer),
    }
}

/// A point set whose stabilizer the oracle has confirmed.
#[derive(Debug, Clone)]
pub struct Witness {
    pub n: u64,
    pub entry: ClassificationEntry,
    pub points: PointSet,
    /// Seed schedules tried, including the accepted one.
    pub attempts: usize,
    pub stabilizer: StabilizerResult,
}

#[derive(Serialize)]
struct WitnessJson<'a> {
    n: u64,
    entry: &'a ClassificationEntry,
    attempts: usize,
    order: usize,
    points: &'a PointSet,
}

impl Serialize for Witness {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        WitnessJson {
            n: self.n,
            entry: &self.entry,
            attempts: self.attempts,
            order: self.stabilizer.order(),
            points: &self.points,
        }
        .serialize(serializer)
    }
}

/// Builds and verifies a witness for `entry`, which must occur in
/// `classify(n)`. Candidates are tried for at most `retry_bound` seed
/// schedules.
pub fn witness(n: u64, entry: &ClassificationEntry, tol: f64, retry_bound: usize) -> Result<Witness, WitnessError> {
    if !classify(n)?.contains(entry) {
        return Err(WitnessError::NotInClassification { n, entry: entry.clone() });
    }
    if entry.group == GroupLabel::Infinite {
        return Err(WitnessError::InfiniteStabilizer);
    }
    let mut last = String::from("no attempt made");
    for attempt in 0..retry_bound.max(1) {
        let points = match candidate(n, entry, attempt, tol) {
            Ok(p) => p,
            Err(e @ (WitnessError::Geometry(_) | WitnessError::SeedOnSpecialLocus(..))) => {
                last = e.to_string();
                continue;
            }
            Err(e) => return Err(e),
        };
        if points.len() as u64 != n {
            last = format!("candidate has {} points", points.len());
            continue;
        }
        match stabilizer(&points) {
            Ok(result) if result.entry() == *entry => {
                return Ok(Witness { n, entry: entry.clone(), points, attempts: attempt + 1, stabilizer: result });
            }
            Ok(result) => last = format!("oracle found {}", result.entry()),
            Err(OracleError::Geometry(e)) => last = e.to_string(),
            Err(e) => last = e.to_string(),
        }
    }
    Err(WitnessError::WitnessSearchExhausted { n, entry: entry.clone(), attempts: retry_bound.max(1), last })
}

// ---------------------------------------------------------------------------
// K4 conjugators
// ---------------------------------------------------------------------------

/// The maps `φ(z) = (z−1)/(z+1)` and `ψ(z) = (z+i)/(iz+1)`. `φ` moves the
/// fixed points `±1` of `z ↦ 1/z` to `0, ∞`, and `ψ` does the same for the
/// fixed points `±i` of `z ↦ −1/z`; each conjugates that involution to
/// `z ↦ −z`.
#[derive(Debug, Clone, Copy)]
pub struct K4Conjugators {
    pub phi: MobiusMap,
    pub psi: MobiusMap,
}

impl Default for K4Conjugators {
    fn default() -> Self {
        let i = C64::new(0.0, 1.0);
        let one = C64::new(1.0, 0.0);
        K4Conjugators {
            phi: MobiusMap::real(1.0, -1.0, 1.0, 1.0).expect("det 2"),
            psi: MobiusMap::new(one, i, i, one).expect("det 2"),
        }
    }
}

/// Which conjugator to apply to a standard dihedral family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conjugator {
    Phi,
    Psi,
}

/// Image under `φ` or `ψ` of the `D_{2p}` set `A_{2p} ∪ ⋃_{l=1..k} C_{2p}(…)`.
///
/// Its stabilizer is a conjugate of `D_{2p}` that contains a conjugate of the
/// standard Klein group through a *different* involution, the configuration
/// where a point set looks like a `K4` union but has a larger stabilizer.
pub fn k4_superset_fixture(which: Conjugator, p: u64, k: u64, tol: f64) -> Result<PointSet, WitnessError> {
    let base = build_dihedral_unchecked(2 * p, &[0, 1, k], 0, tol)?;
    let c = K4Conjugators::default();
    let f = match which {
        Conjugator::Phi => c.phi,
        Conjugator::Psi => c.psi,
    };
    Ok(base.transformed(&f)?)
}
