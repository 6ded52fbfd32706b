//! Brute-force Möbius stabilizer of a finite point set.
//!
//! A Möbius map is fixed by the images of three points, and a stabilizing
//! map must send a chosen base triple of `α` to some ordered triple of `α`.
//! Trying every ordered triple therefore finds the whole stabilizer. The
//! group is then identified from its order and maximal element order, and
//! the component index is read off the orbit decomposition.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::classifier::{ClassificationEntry, ComponentIndex, GroupLabel};
use crate::geometry::{chordal_distance, GeometryError, MobiusMap, PointSet};

/// Group operations accumulate rounding, so they are compared at this
/// multiple of the point tolerance.
pub const CLOSURE_TOL_FACTOR: f64 = 10.0;

/// Exhaustive base-triple search is used up to this many points.
const EXHAUSTIVE_BASE_LIMIT: usize = 40;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("stabilizer of {0} point(s) is infinite; need at least 3")]
    TooFewPoints(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("stabilizing maps are not closed under composition")]
    NotClosed,
    #[error("no finite Möbius group has order {order} and maximal element order {max_order}")]
    UnrecognizedGroup { order: usize, max_order: usize },
    #[error("orbit of size {size} does not fit the orbit table of {label}")]
    OrbitSizeMismatch { label: GroupLabel, size: usize },
}

/// Full stabilizer of a point set.
#[derive(Debug, Clone)]
pub struct StabilizerResult {
    /// Pairwise distinct stabilizing maps, sorted by induced permutation.
    pub elements: Vec<MobiusMap>,
    /// `permutations[g][i] = j` when element `g` sends point `i` to point `j`.
    pub permutations: Vec<Vec<usize>>,
    pub label: GroupLabel,
    pub index: ComponentIndex,
    /// Orbit partition of the input, each orbit sorted, ordered by least member.
    pub orbits: Vec<Vec<usize>>,
}

impl StabilizerResult {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn entry(&self) -> ClassificationEntry {
        ClassificationEntry { group: self.label, index: self.index.clone() }
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }
}

#[derive(Serialize)]
struct StabilizerJson<'a> {
    order: usize,
    label: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
    index: &'a [u64],
    orbit_sizes: Vec<usize>,
    elements: &'a [MobiusMap],
}

impl Serialize for StabilizerResult {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        StabilizerJson {
            order: self.order(),
            label: self.label.family(),
            p: self.label.parameter(),
            index: self.index.counts(),
            orbit_sizes: self.orbit_sizes(),
            elements: &self.elements,
        }
        .serialize(serializer)
    }
}

/// Base triple with the largest minimal pairwise chordal separation
/// (greedy farthest-point choice above [`EXHAUSTIVE_BASE_LIMIT`] points).
pub fn base_triple(alpha: &PointSet) -> [usize; 3] {
    let pts = alpha.points();
    let n = pts.len();
    let d = |i: usize, j: usize| chordal_distance(&pts[i], &pts[j]);
    if n <= EXHAUSTIVE_BASE_LIMIT {
        let mut best = ([0, 1, 2], f64::NEG_INFINITY);
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let s = d(i, j).min(d(i, k)).min(d(j, k));
                    if s > best.1 {
                        best = ([i, j, k], s);
                    }
                }
            }
        }
        return best.0;
    }
    let far = |from: &[usize]| {
        (0..n)
            .filter(|i| !from.contains(i))
            .max_by(|&a, &b| {
                let da = from.iter().map(|&f| d(a, f)).fold(f64::INFINITY, f64::min);
                let db = from.iter().map(|&f| d(b, f)).fold(f64::INFINITY, f64::min);
                da.total_cmp(&db).then(b.cmp(&a))
            })
            .expect("at least three points")
    };
    let second = far(&[0]);
    let third = far(&[0, second]);
    [0, second, third]
}

/// The stabilizer of `alpha`, with group label and component index.
pub fn stabilizer(alpha: &PointSet) -> Result<StabilizerResult, OracleError> {
    if alpha.len() < 3 {
        return Err(OracleError::TooFewPoints(alpha.len()));
    }
    stabilizer_with_base(alpha, base_triple(alpha))
}

/// As [`stabilizer`], enumerating images of the given base triple.
pub fn stabilizer_with_base(alpha: &PointSet, base: [usize; 3]) -> Result<StabilizerResult, OracleError> {
    let (elements, permutations) = stabilizing_maps(alpha, base)?;
    let tol = alpha.tol() * CLOSURE_TOL_FACTOR;
    check_group(&elements, &permutations, base, tol)?;
    let label = identify_group(&elements, tol)?;
    let orbits = orbits_from_permutations(alpha.len(), &permutations);
    let index = index_from_orbits(label, &orbits)?;
    Ok(StabilizerResult { elements, permutations, label, index, orbits })
}

/// Stabilizing maps paired with their induced permutations.
type Hits = Vec<(Vec<usize>, MobiusMap)>;

/// All stabilizing maps with their induced permutations, sorted by permutation.
pub fn stabilizing_maps(alpha: &PointSet, base: [usize; 3]) -> Result<(Vec<MobiusMap>, Vec<Vec<usize>>), OracleError> {
    let n = alpha.len();
    if n < 3 {
        return Err(OracleError::TooFewPoints(n));
    }
    let pts = alpha.points();
    let src = base.map(|i| pts[i]);
    let tol = alpha.tol();

    let found: Result<Vec<Hits>, GeometryError> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut hits = Vec::new();
            for b in (0..n).filter(|&b| b != a) {
                for c in (0..n).filter(|&c| c != a && c != b) {
                    let f = MobiusMap::through_triple(src, [pts[a], pts[b], pts[c]], tol)?;
                    if let Some(perm) = alpha.induced_permutation(&f)? {
                        hits.push((perm, f));
                    }
                }
            }
            Ok(hits)
        })
        .collect();

    let mut all: Vec<(Vec<usize>, MobiusMap)> = found?.into_iter().flatten().collect();
    all.sort_by(|x, y| x.0.cmp(&y.0));
    // a map is determined by the permutation it induces on >= 3 points
    all.dedup_by(|x, y| x.0 == y.0);
    let (perms, maps) = all.into_iter().unzip();
    Ok((maps, perms))
}

/// Identity present and closure under composition, checked on matrices.
fn check_group(elements: &[MobiusMap], perms: &[Vec<usize>], base: [usize; 3], tol: f64) -> Result<(), OracleError> {
    if !elements.iter().any(|g| g.is_identity(tol)) {
        return Err(OracleError::NotClosed);
    }
    // an element is pinned down by where it sends the base triple
    let key = |p: &[usize]| base.map(|i| p[i]);
    let by_key: HashMap<[usize; 3], usize> = perms.iter().enumerate().map(|(i, p)| (key(p), i)).collect();
    let closed = (0..elements.len()).into_par_iter().all(|i| {
        (0..elements.len()).all(|j| {
            let composed_key = key(&perms[j]).map(|x| perms[i][x]);
            by_key.get(&composed_key).is_some_and(|&k| elements[i].compose(&elements[j]).approx_eq(&elements[k], tol))
        })
    });
    if closed {
        Ok(())
    } else {
        Err(OracleError::NotClosed)
    }
}

/// Names a finite Möbius group from its order `N` and maximal element order `m`.
pub fn identify_group(elements: &[MobiusMap], tol: f64) -> Result<GroupLabel, OracleError> {
    let order = elements.len();
    let mut max_order = 0;
    for g in elements {
        let o = g.order(order.max(1), tol).ok_or(OracleError::UnrecognizedGroup { order, max_order: 0 })?;
        max_order = max_order.max(o);
        if max_order == order {
            break;
        }
    }
    label_from_orders(order, max_order)
}

/// The `(N, m)` decision table.
pub fn label_from_orders(order: usize, max_order: usize) -> Result<GroupLabel, OracleError> {
    let n = order as u64;
    Ok(match (order, max_order) {
        (1, 1) => GroupLabel::Trivial,
        (2, 2) => GroupLabel::Z2,
        (60, 5) => GroupLabel::A5,
        (24, 4) => GroupLabel::S4,
        (12, 3) => GroupLabel::A4,
        (4, 2) => GroupLabel::K4,
        (n_, m) if n_ == m && n_ >= 3 => GroupLabel::Cyclic(n),
        (n_, m) if n_ == 2 * m && m >= 3 => GroupLabel::Dihedral(m as u64),
        _ => return Err(OracleError::UnrecognizedGroup { order, max_order }),
    })
}

fn orbits_from_permutations(n: usize, perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orbit: Vec<usize> = perms.iter().map(|p| p[start]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &i in &orbit {
            orbit_of[i] = id;
        }
        orbits.push(orbit);
    }
    orbits
}

/// Orbit partition of `alpha` under a group of stabilizing maps.
pub fn orbit_partition(alpha: &PointSet, elements: &[MobiusMap]) -> Result<Vec<Vec<usize>>, OracleError> {
    let perms = elements
        .iter()
        .map(|g| alpha.induced_permutation(g)?.ok_or(OracleError::NotClosed))
        .collect::<Result<Vec<_>, OracleError>>()?;
    Ok(orbits_from_permutations(alpha.len(), &perms))
}

/// Component index of `alpha` under `elements`, which must stabilize it.
pub fn component_index(
    alpha: &PointSet,
    elements: &[MobiusMap],
    label: GroupLabel,
) -> Result<ComponentIndex, OracleError> {
    index_from_orbits(label, &orbit_partition(alpha, elements)?)
}

fn index_from_orbits(label: GroupLabel, orbits: &[Vec<usize>]) -> Result<ComponentIndex, OracleError> {
    if label == GroupLabel::Trivial {
        return Ok(ComponentIndex::empty());
    }
    let sizes = label.slot_sizes();
    let mut counts = vec![0u64; sizes.len()];
    for orbit in orbits {
        let size = orbit.len();
        let slot =
            sizes.iter().position(|&s| s == size as u64).ok_or(OracleError::OrbitSizeMismatch { label, size })?;
        counts[slot] += 1;
    }
    ClassificationEntry::new(label, ComponentIndex(counts))
        .map(|e| e.index)
        .map_err(|_| OracleError::OrbitSizeMismatch { label, size: 0 })
}
