//! Points and Möbius transformations of the extended complex plane.
//!
//! Everything is kept in homogeneous coordinates so that ∞ needs no special
//! case: a point is a nonzero pair `(z : w)` and a Möbius map is a 2×2
//! complex matrix acting on that pair. Distances are chordal, i.e. the
//! Euclidean distance between the stereographic images on the unit sphere,
//! which is bounded by 2 and well behaved at ∞.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type C64 = Complex64;

/// Default chordal tolerance for point comparisons.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Minimum |det| of a Möbius matrix after scaling its largest entry to 1.
pub const DET_FLOOR: f64 = 1e-12;

const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("homogeneous coordinates (0, 0) do not define a point")]
    ZeroCoordinates,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("degenerate Möbius matrix: |det| = {0:e} after normalization")]
    Degenerate(f64),
    #[error("near-degenerate triple: points {0} and {1} are within 2*tol")]
    NearDegenerateTriple(usize, usize),
    #[error("points {0} and {1} are not separated by more than 2*tol")]
    NotSeparated(usize, usize),
    #[error("ambiguous matching: a point lies within tol of two set members")]
    AmbiguousMatching,
    #[error("invalid tolerance {0}")]
    BadTolerance(f64),
    #[error("cannot parse {0:?} as a point of the extended plane")]
    Parse(String),
}

// ---------------------------------------------------------------------------
// complex number text format
// ---------------------------------------------------------------------------

/// Formats a finite complex number as `re+imi` (or `re-imi`).
pub fn format_complex(c: C64) -> String {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", c.re, sign, c.im.abs())
}

/// Parses `a`, `a+bi`, `a-bi`, `bi`, `i`, `-i`. Whitespace is ignored.
pub fn parse_complex(s: &str) -> Result<C64, GeometryError> {
    let err = || GeometryError::Parse(s.to_string());
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(err());
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| err());
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let parse_im = |s: &str| -> Result<f64, GeometryError> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => s.parse::<f64>().map_err(|_| err()),
        }
    };
    match split {
        Some(i) => {
            let re = body[..i].parse::<f64>().map_err(|_| err())?;
            Ok(C64::new(re, parse_im(&body[i..])?))
        }
        None => Ok(C64::new(0.0, parse_im(body)?)),
    }
}

// ---------------------------------------------------------------------------
// RiemannPoint
// ---------------------------------------------------------------------------

/// A point `z / w` of the extended complex plane.
///
/// Stored normalized: the coordinate of larger modulus is exactly `1`.
#[derive(Clone, Copy, Debug)]
pub struct RiemannPoint {
    z: C64,
    w: C64,
}

impl RiemannPoint {
    pub const INFINITY: RiemannPoint = RiemannPoint { z: ONE, w: ZERO };
    pub const ZERO: RiemannPoint = RiemannPoint { z: ZERO, w: ONE };
    pub const ONE: RiemannPoint = RiemannPoint { z: ONE, w: ONE };

    pub fn new(z: C64, w: C64) -> Result<Self, GeometryError> {
        if !(z.re.is_finite() && z.im.is_finite() && w.re.is_finite() && w.im.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let (nz, nw) = (z.norm(), w.norm());
        if nz == 0.0 && nw == 0.0 {
            return Err(GeometryError::ZeroCoordinates);
        }
        Ok(if nw >= nz { RiemannPoint { z: z / w, w: ONE } } else { RiemannPoint { z: ONE, w: w / z } })
    }

    /// The finite point `z`. Panics on NaN or infinite input.
    pub fn finite(z: C64) -> Self {
        Self::new(z, ONE).expect("finite complex number")
    }

    pub fn real(x: f64) -> Self {
        Self::finite(C64::new(x, 0.0))
    }

    /// `e^{2πi t}`.
    pub fn unit(t: f64) -> Self {
        Self::finite(C64::from_polar(1.0, std::f64::consts::TAU * t))
    }

    pub fn coords(&self) -> (C64, C64) {
        (self.z, self.w)
    }

    pub fn is_infinity(&self) -> bool {
        self.w == ZERO
    }

    /// The affine value, or `None` for ∞.
    pub fn to_complex(&self) -> Option<C64> {
        if self.is_infinity() {
            None
        } else {
            Some(self.z / self.w)
        }
    }

    /// Inverse stereographic projection from the north pole `(0, 0, 1)`,
    /// which corresponds to ∞.
    pub fn from_sphere(v: [f64; 3]) -> Self {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let [x, y, h] = [v[0] / n, v[1] / n, v[2] / n];
        // (x + iy) / (1 - h) == (1 + h) / (x - iy); pick the well-conditioned form
        if h <= 0.0 {
            Self::new(C64::new(x, y), C64::new(1.0 - h, 0.0))
        } else {
            Self::new(C64::new(1.0 + h, 0.0), C64::new(x, -y))
        }
        .expect("unit vector projects to a point")
    }

    pub fn to_sphere(&self) -> [f64; 3] {
        let zw = self.z * self.w.conj();
        let (a, b) = (self.z.norm_sqr(), self.w.norm_sqr());
        let s = a + b;
        [2.0 * zw.re / s, 2.0 * zw.im / s, (a - b) / s]
    }

    pub fn chordal_distance(&self, other: &RiemannPoint) -> f64 {
        chordal_distance(self, other)
    }

    pub fn approx_eq(&self, other: &RiemannPoint, tol: f64) -> bool {
        chordal_distance(self, other) <= tol
    }
}

/// Chordal distance `2|z_p w_q - z_q w_p| / (‖p‖ ‖q‖)`, in `[0, 2]`.
pub fn chordal_distance(p: &RiemannPoint, q: &RiemannPoint) -> f64 {
    let num = (p.z * q.w - q.z * p.w).norm();
    let den = (p.z.norm_sqr() + p.w.norm_sqr()).sqrt() * (q.z.norm_sqr() + q.w.norm_sqr()).sqrt();
    (2.0 * num / den).min(2.0)
}

impl fmt::Display for RiemannPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_complex() {
            None => f.write_str("inf"),
            Some(c) => f.write_str(&format_complex(c)),
        }
    }
}

impl FromStr for RiemannPoint {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(RiemannPoint::INFINITY),
            t => {
                let c = parse_complex(t)?;
                RiemannPoint::new(c, ONE).map_err(|_| GeometryError::Parse(s.to_string()))
            }
        }
    }
}

impl Serialize for RiemannPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RiemannPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// MobiusMap
// ---------------------------------------------------------------------------

/// `z ↦ (az + b) / (cz + d)`, stored with its largest-modulus entry equal to 1.
#[derive(Clone, Copy, Debug)]
pub struct MobiusMap {
    m: [C64; 4],
}

fn normalize_matrix(m: [C64; 4]) -> [C64; 4] {
    let pivot = m.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).expect("four entries");
    if pivot == ZERO {
        return m;
    }
    m.map(|x| x / pivot)
}

fn mat_mul(x: &[C64; 4], y: &[C64; 4]) -> [C64; 4] {
    [x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]]
}

fn adjugate(m: &[C64; 4]) -> [C64; 4] {
    [m[3], -m[1], -m[2], m[0]]
}

impl MobiusMap {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self, GeometryError> {
        if [a, b, c, d].iter().any(|x| !(x.re.is_finite() && x.im.is_finite())) {
            return Err(GeometryError::NonFinite);
        }
        let m = normalize_matrix([a, b, c, d]);
        let det = (m[0] * m[3] - m[1] * m[2]).norm();
        if det.is_nan() || det <= DET_FLOOR {
            return Err(GeometryError::Degenerate(det));
        }
        Ok(MobiusMap { m })
    }

    /// Convenience constructor from real coefficients.
    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Result<Self, GeometryError> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        MobiusMap { m: [ONE, ZERO, ZERO, ONE] }
    }

    /// `z ↦ e^{2πi t} z`.
    pub fn rotation(t: f64) -> Self {
        let u = C64::from_polar(1.0, std::f64::consts::TAU * t);
        MobiusMap { m: normalize_matrix([u, ZERO, ZERO, ONE]) }
    }

    pub fn coefficients(&self) -> [C64; 4] {
        self.m
    }

    pub fn det(&self) -> C64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    pub fn apply(&self, p: &RiemannPoint) -> RiemannPoint {
        let [a, b, c, d] = self.m;
        RiemannPoint::new(a * p.z + b * p.w, c * p.z + d * p.w).expect("nondegenerate map sends points to points")
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MobiusMap) -> MobiusMap {
        MobiusMap { m: normalize_matrix(mat_mul(&self.m, &inner.m)) }
    }

    pub fn inverse(&self) -> MobiusMap {
        MobiusMap { m: normalize_matrix(adjugate(&self.m)) }
    }

    /// Projective equality: `self · other⁻¹` is within `tol` of a scalar
    /// multiple of the identity once its largest entry is scaled to 1.
    pub fn approx_eq(&self, other: &MobiusMap, tol: f64) -> bool {
        let h = normalize_matrix(mat_mul(&self.m, &adjugate(&other.m)));
        h[1].norm() <= tol && h[2].norm() <= tol && (h[0] - h[3]).norm() <= tol
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        let h = self.m;
        h[1].norm() <= tol && h[2].norm() <= tol && (h[0] - h[3]).norm() <= tol
    }

    /// Smallest `k ≤ cap` with `self^k` projectively the identity.
    pub fn order(&self, cap: usize, tol: f64) -> Option<usize> {
        let mut power = *self;
        for k in 1..=cap {
            if power.is_identity(tol) {
                return Some(k);
            }
            power = power.compose(self);
        }
        None
    }

    /// The unique map sending `src[i]` to `dst[i]` for `i = 0, 1, 2`.
    pub fn through_triple(
        src: [RiemannPoint; 3],
        dst: [RiemannPoint; 3],
        tol: f64,
    ) -> Result<MobiusMap, GeometryError> {
        check_triple(&src, tol)?;
        check_triple(&dst, tol)?;
        let to_std = normalize_matrix(to_zero_one_infinity(&src));
        let from_std = normalize_matrix(adjugate(&to_zero_one_infinity(&dst)));
        MobiusMap::new_normalized(mat_mul(&from_std, &to_std))
    }

    /// The map sending `(p₁, p₂, p₃)` to `(0, 1, ∞)`.
    pub fn to_standard_triple(src: [RiemannPoint; 3], tol: f64) -> Result<MobiusMap, GeometryError> {
        check_triple(&src, tol)?;
        MobiusMap::new_normalized(to_zero_one_infinity(&src))
    }

    fn new_normalized(m: [C64; 4]) -> Result<MobiusMap, GeometryError> {
        let [a, b, c, d] = m;
        MobiusMap::new(a, b, c, d)
    }
}

fn check_triple(t: &[RiemannPoint; 3], tol: f64) -> Result<(), GeometryError> {
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if chordal_distance(&t[i], &t[j]) <= 2.0 * tol {
            return Err(GeometryError::NearDegenerateTriple(i, j));
        }
    }
    Ok(())
}

/// Unnormalized matrix of the map `(p₁, p₂, p₃) ↦ (0, 1, ∞)`.
///
/// With `L_j(P) = det[P, p_j]`, the map is `P ↦ (L₃(p₂) L₁(P) : L₁(p₂) L₃(P))`.
fn to_zero_one_infinity(t: &[RiemannPoint; 3]) -> [C64; 4] {
    let (x1, y1) = t[0].coords();
    let (x2, y2) = t[1].coords();
    let (x3, y3) = t[2].coords();
    let l1_at_p2 = y1 * x2 - x1 * y2;
    let l3_at_p2 = y3 * x2 - x3 * y2;
    [l3_at_p2 * y1, -l3_at_p2 * x1, l1_at_p2 * y3, -l1_at_p2 * x3]
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m.map(format_complex);
        write!(f, "[{a}, {b}; {c}, {d}]")
    }
}

impl Serialize for MobiusMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.m.map(format_complex).serialize(serializer)
    }
}

// ---------------------------------------------------------------------------
// PointSet
// ---------------------------------------------------------------------------

type Cell = (i64, i64, i64);

/// A finite set of well-separated points with tolerance-aware membership.
///
/// Lookups go through a uniform grid over the sphere images, so matching a
/// candidate image costs O(1) on average.
#[derive(Clone, Debug)]
pub struct PointSet {
    points: Vec<RiemannPoint>,
    tol: f64,
    cell: f64,
    grid: HashMap<Cell, Vec<usize>>,
}

impl PointSet {
    pub fn new(points: Vec<RiemannPoint>, tol: f64) -> Result<Self, GeometryError> {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(GeometryError::BadTolerance(tol));
        }
        let n = points.len().max(1) as f64;
        let cell = (2.0 * tol).max(0.25 / n.sqrt()).max(1e-12);
        let mut set = PointSet { points, tol, cell, grid: HashMap::new() };
        for i in 0..set.points.len() {
            let p = set.points[i];
            if let Some(j) = set.neighbours(&p, 2.0 * tol).next() {
                return Err(GeometryError::NotSeparated(j, i));
            }
            set.grid.entry(set.cell_of(&p)).or_default().push(i);
        }
        Ok(set)
    }

    /// Builds from affine values.
    pub fn from_complex(values: &[C64], tol: f64) -> Result<Self, GeometryError> {
        Self::new(values.iter().map(|&c| RiemannPoint::finite(c)).collect(), tol)
    }

    pub fn points(&self) -> &[RiemannPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn iter(&self) -> impl Iterator<Item = &RiemannPoint> {
        self.points.iter()
    }

    fn cell_of(&self, p: &RiemannPoint) -> Cell {
        let [x, y, z] = p.to_sphere();
        let q = |v: f64| (v / self.cell).floor() as i64;
        (q(x), q(y), q(z))
    }

    /// Indices of stored points within `radius` (≤ cell size) of `p`.
    fn neighbours<'a>(&'a self, p: &'a RiemannPoint, radius: f64) -> impl Iterator<Item = usize> + 'a {
        let (cx, cy, cz) = self.cell_of(p);
        (-1..=1)
            .flat_map(move |dx| (-1..=1).flat_map(move |dy| (-1..=1).map(move |dz| (cx + dx, cy + dy, cz + dz))))
            .filter_map(|c| self.grid.get(&c))
            .flatten()
            .copied()
            .filter(move |&i| chordal_distance(&self.points[i], p) <= radius)
    }

    /// Index of the member within `tol` of `p`, if any.
    pub fn locate(&self, p: &RiemannPoint) -> Result<Option<usize>, GeometryError> {
        let mut hits = self.neighbours(p, self.tol);
        let first = hits.next();
        if hits.next().is_some() {
            return Err(GeometryError::AmbiguousMatching);
        }
        Ok(first)
    }

    /// Matches `images[i]` to members, returning the index map when it is a
    /// bijection onto the set. Stops at the first unmatched image.
    pub fn match_points(&self, images: &[RiemannPoint]) -> Result<Option<Vec<usize>>, GeometryError> {
        if images.len() != self.len() {
            return Ok(None);
        }
        let mut used = vec![false; self.len()];
        let mut perm = Vec::with_capacity(images.len());
        for p in images {
            match self.locate(p)? {
                Some(j) if !used[j] => {
                    used[j] = true;
                    perm.push(j);
                }
                _ => return Ok(None),
            }
        }
        Ok(Some(perm))
    }

    /// The permutation `i ↦ j` with `f(p_i) ≈ p_j`, if `f` maps the set onto
    /// itself. Images are computed lazily and the scan stops at the first
    /// point without a partner.
    pub fn induced_permutation(&self, f: &MobiusMap) -> Result<Option<Vec<usize>>, GeometryError> {
        let mut used = vec![false; self.len()];
        let mut perm = Vec::with_capacity(self.len());
        for p in &self.points {
            match self.locate(&f.apply(p))? {
                Some(j) if !used[j] => {
                    used[j] = true;
                    perm.push(j);
                }
                _ => return Ok(None),
            }
        }
        Ok(Some(perm))
    }

    pub fn set_equal(&self, other: &PointSet) -> Result<bool, GeometryError> {
        Ok(self.match_points(&other.points)?.is_some())
    }

    pub fn image(&self, f: &MobiusMap) -> Vec<RiemannPoint> {
        self.points.iter().map(|p| f.apply(p)).collect()
    }

    pub fn transformed(&self, f: &MobiusMap) -> Result<PointSet, GeometryError> {
        PointSet::new(self.image(f), self.tol)
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet, GeometryError> {
        let mut pts = self.points.clone();
        pts.extend_from_slice(&other.points);
        PointSet::new(pts, self.tol.max(other.tol))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.points.iter().map(|p| p.to_string()).collect()
    }
}

/// Tolerance-aware set equality; see [`PointSet::set_equal`].
pub fn set_equal(a: &PointSet, b: &PointSet) -> Result<bool, GeometryError> {
    a.set_equal(b)
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.points.serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    const TOL: f64 = DEFAULT_TOL;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn chordal_examples() {
        let zero = RiemannPoint::ZERO;
        let one = RiemannPoint::ONE;
        assert!((chordal_distance(&zero, &RiemannPoint::INFINITY) - 2.0).abs() < 1e-15);
        assert_eq!(chordal_distance(&one, &one), 0.0);
        assert!((chordal_distance(&zero, &one) - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn normalization_puts_unit_on_larger_coordinate() {
        let p = RiemannPoint::new(c(3.0, 4.0), c(1.0, 0.0)).unwrap();
        let (z, w) = p.coords();
        assert_eq!(z, ONE);
        assert!(w.norm() < 1.0);
        let q = RiemannPoint::new(c(0.5, 0.0), c(0.0, 2.0)).unwrap();
        assert_eq!(q.coords().1, ONE);
        assert_eq!(RiemannPoint::new(ZERO, ZERO).unwrap_err(), GeometryError::ZeroCoordinates);
    }

    #[test]
    fn sphere_round_trip() {
        for v in [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [1.0, 0.0, 0.0], [0.3, -0.4, 0.5], [0.1, 0.2, -0.9]] {
            let p = RiemannPoint::from_sphere(v);
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            let back = p.to_sphere();
            for k in 0..3 {
                assert!((back[k] - v[k] / n).abs() < 1e-12, "{v:?} -> {back:?}");
            }
        }
        assert!(RiemannPoint::from_sphere([0.0, 0.0, 1.0]).is_infinity());
        assert!(RiemannPoint::from_sphere([1.0, 0.0, 0.0]).approx_eq(&RiemannPoint::ONE, 1e-15));
    }

    #[test]
    fn apply_examples() {
        let inv = MobiusMap::real(0.0, 1.0, 1.0, 0.0).unwrap();
        assert!(inv.apply(&RiemannPoint::ZERO).is_infinity());
        let one_minus = MobiusMap::real(-1.0, 1.0, 0.0, 1.0).unwrap();
        assert!(one_minus.apply(&RiemannPoint::ONE).approx_eq(&RiemannPoint::ZERO, 1e-15));
        let phi = MobiusMap::real(1.0, -1.0, 1.0, 1.0).unwrap();
        let img = phi.apply(&RiemannPoint::finite(c(0.0, 1.0))).to_complex().unwrap();
        let expected = (c(0.0, 1.0) - 1.0) / (c(0.0, 1.0) + 1.0);
        assert!((img - expected).norm() < 1e-15);
        assert!((img.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_matrix_rejected() {
        assert!(matches!(MobiusMap::real(1.0, 2.0, 2.0, 4.0), Err(GeometryError::Degenerate(_))));
    }

    #[test]
    fn through_triple_examples() {
        let std3 = [RiemannPoint::ZERO, RiemannPoint::ONE, RiemannPoint::INFINITY];
        let id = MobiusMap::through_triple(std3, std3, TOL).unwrap();
        assert!(id.approx_eq(&MobiusMap::identity(), TOL));

        let lam = c(2.5, -1.0);
        let f = MobiusMap::through_triple(
            [RiemannPoint::finite(lam), RiemannPoint::ONE, RiemannPoint::INFINITY],
            std3,
            TOL,
        )
        .unwrap();
        let expected = MobiusMap::new(ONE, -lam, ZERO, ONE - lam).unwrap();
        assert!(f.approx_eq(&expected, TOL));

        let swap =
            MobiusMap::through_triple(std3, [RiemannPoint::ONE, RiemannPoint::ZERO, RiemannPoint::INFINITY], TOL)
                .unwrap();
        assert!(swap.approx_eq(&MobiusMap::real(-1.0, 1.0, 0.0, 1.0).unwrap(), TOL));
    }

    #[test]
    fn through_triple_rejects_collapsed_triple() {
        let p = RiemannPoint::real(0.3);
        let e = MobiusMap::through_triple(
            [p, p, RiemannPoint::INFINITY],
            [RiemannPoint::ZERO, RiemannPoint::ONE, RiemannPoint::INFINITY],
            TOL,
        );
        assert_eq!(e.unwrap_err(), GeometryError::NearDegenerateTriple(0, 1));
    }

    #[test]
    fn set_equal_examples() {
        let a = PointSet::new(vec![RiemannPoint::ZERO, RiemannPoint::ONE, RiemannPoint::INFINITY], TOL).unwrap();
        let b = PointSet::new(vec![RiemannPoint::INFINITY, RiemannPoint::ZERO, RiemannPoint::ONE], TOL).unwrap();
        assert!(set_equal(&a, &b).unwrap());
        let c3 = PointSet::from_complex(&[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)], TOL).unwrap();
        assert!(!set_equal(&a, &c3).unwrap());

        let roots: Vec<_> = (0..5).map(|k| RiemannPoint::unit(k as f64 / 5.0)).collect();
        let a = PointSet::new(roots, TOL).unwrap();
        let b = a.transformed(&MobiusMap::rotation(0.2)).unwrap();
        assert!(set_equal(&a, &b).unwrap());
    }

    #[test]
    fn point_set_rejects_coincident_points() {
        let e = PointSet::from_complex(&[c(1.0, 0.0), c(1.0 + 1e-12, 0.0)], TOL);
        assert_eq!(e.unwrap_err(), GeometryError::NotSeparated(0, 1));
    }

    #[test]
    fn ambiguous_matching_detected() {
        // constructed with a small tolerance, probed with a large one
        let mut s = PointSet::from_complex(&[c(1.0, 0.0), c(1.0 + 1e-6, 0.0)], 1e-9).unwrap();
        s.tol = 1e-5;
        assert_eq!(s.locate(&RiemannPoint::real(1.0)).unwrap_err(), GeometryError::AmbiguousMatching);
    }

    #[test]
    fn text_format_round_trip() {
        for s in ["inf", "0+0i", "1.5-2i", "-0.25+1e-3i"] {
            let p: RiemannPoint = s.parse().unwrap();
            let again: RiemannPoint = p.to_string().parse().unwrap();
            assert!(p.approx_eq(&again, 0.0), "{s}");
        }
        assert_eq!(parse_complex("2+1i").unwrap(), c(2.0, 1.0));
        assert_eq!(parse_complex("5").unwrap(), c(5.0, 0.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("3.5i").unwrap(), c(0.0, 3.5));
        assert_eq!(parse_complex("1e-3-2e+2i").unwrap(), c(1e-3, -200.0));
        assert!(parse_complex("abc").is_err());
        assert_eq!(RiemannPoint::real(-0.5).to_string(), "-0.5+0i");
        assert_eq!(RiemannPoint::INFINITY.to_string(), "inf");
    }

    #[test]
    fn order_of_rotations() {
        assert_eq!(MobiusMap::rotation(1.0 / 5.0).order(60, 1e-7), Some(5));
        assert_eq!(MobiusMap::real(0.0, 1.0, 1.0, 0.0).unwrap().order(60, 1e-7), Some(2));
        assert_eq!(MobiusMap::identity().order(60, 1e-7), Some(1));
        // translation has infinite order
        assert_eq!(MobiusMap::real(1.0, 1.0, 0.0, 1.0).unwrap().order(60, 1e-7), None);
    }
}
