//! The permutation action on normalized configurations of `n` marked points.
//!
//! A configuration is normalized so its first three marked points are
//! `0, 1, ∞`; the remaining `n − 3` coordinates form a [`LambdaTuple`].
//! Permuting the labels and renormalizing gives a birational map `g_σ`.
//! It is evaluated here both from its definition and from closed forms on
//! coset representatives, and the two results must agree.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{chordal_distance, parse_complex, GeometryError, MobiusMap, PointSet, RiemannPoint, C64};
use crate::oracle::{stabilizer, OracleError};

/// Largest `n` for which `G_λ` is found by enumerating all of `S_n`.
pub const DEFAULT_ENUMERATION_BOUND: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModuliError {
    #[error("coordinates do not define a point of the configuration space: {0}")]
    NotInConfigurationSpace(String),
    #[error("permutation acts on {got} labels, configuration has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("not a permutation of 1..{0}")]
    NotAPermutation(usize),
    #[error("closed form and definition of g_sigma differ by {deviation:e}")]
    ClosedFormMismatch { deviation: f64 },
    #[error("direct enumeration needs n <= {bound}, got n = {n}")]
    EnumerationBoundExceeded { n: usize, bound: usize },
    #[error("direct path found {direct} stabilizing permutations, oracle path {oracle}")]
    PathDisagreement { direct: usize, oracle: usize },
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

// ---------------------------------------------------------------------------
// permutations
// ---------------------------------------------------------------------------

/// A bijection of `{1, …, n}`, stored 0-based. Products compose right to
/// left: `(π·σ)(k) = π(σ(k))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self, ModuliError> {
        let n = images.len();
        let distinct: BTreeSet<usize> = images.iter().copied().collect();
        if distinct.len() != n || distinct.iter().any(|&x| x >= n) {
            return Err(ModuliError::NotAPermutation(n));
        }
        Ok(Permutation(images))
    }

    /// Product of disjoint or overlapping cycles written with 1-based labels,
    /// applied right to left.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, ModuliError> {
        let mut p = Permutation::identity(n);
        for cycle in cycles.iter().rev() {
            if cycle.iter().any(|&x| x == 0 || x > n) || cycle.iter().unique().count() != cycle.len() {
                return Err(ModuliError::NotAPermutation(n));
            }
            let mut c = Permutation::identity(n);
            for (i, &a) in cycle.iter().enumerate() {
                c.0[a - 1] = cycle[(i + 1) % cycle.len()] - 1;
            }
            p = c.compose(&p);
        }
        Ok(p)
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self, ModuliError> {
        Self::from_cycles(n, &[&[a, b]])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// 0-based image.
    pub fn apply(&self, k: usize) -> usize {
        self.0[k]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self · inner`.
    pub fn compose(&self, inner: &Permutation) -> Permutation {
        Permutation(inner.0.iter().map(|&k| self.0[k]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    /// All of `S_n` in lexicographic order of images.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..n).permutations(n).map(Permutation)
    }

    /// `σ = τ·v` with `τ` a coset representative and `v` fixing `{1, 2, 3}`
    /// setwise.
    ///
    /// The labels among `1, 2, 3` that `σ` fails to hit are paired in
    /// increasing order with the labels above 3 in `σ({1, 2, 3})`, also in
    /// increasing order; `τ` is the product of those transpositions.
    pub fn decompose(&self) -> CosetDecomposition {
        let n = self.len();
        let hit: Vec<usize> = (0..3).map(|k| self.0[k]).collect();
        let missing: Vec<usize> = (0..3).filter(|j| !hit.contains(j)).collect();
        let high: Vec<usize> = hit.iter().copied().filter(|&x| x >= 3).sorted().collect();
        let mut tau = Permutation::identity(n);
        for (&j, &p) in missing.iter().zip(&high) {
            tau.0[j] = p;
            tau.0[p] = j;
        }
        let pairs: Vec<(usize, usize)> = missing.iter().zip(&high).map(|(&j, &p)| (j + 1, p + 1)).collect();
        let family = CosetRep::from_pairs(&pairs);
        // τ is an involution, so v = τ⁻¹σ = τσ
        let v = tau.compose(self);
        let h = Anharmonic::from_action([v.0[0], v.0[1], v.0[2]]);
        CosetDecomposition { tau, family, v, h }
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation with 1-based labels; `e` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.len()];
        let mut any = false;
        for start in 0..self.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            any = true;
            let mut cycle = vec![start + 1];
            seen[start] = true;
            let mut k = self.0[start];
            while k != start {
                seen[k] = true;
                cycle.push(k + 1);
                k = self.0[k];
            }
            write!(f, "({})", cycle.iter().join(" "))?;
        }
        if !any {
            write!(f, "e")?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    /// 1-based images.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(|x| x + 1))
    }
}

/// Coset representatives, by which of `1, 2, 3` are swapped with labels
/// `p, q, r ≥ 4` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosetRep {
    Identity,
    /// `(1, p)`
    One(usize),
    /// `(2, p)`
    Two(usize),
    /// `(3, p)`
    Three(usize),
    /// `(1, p)(2, q)`
    OneTwo(usize, usize),
    /// `(2, p)(3, q)`
    TwoThree(usize, usize),
    /// `(3, p)(1, q)`
    ThreeOne(usize, usize),
    /// `(1, p)(2, q)(3, r)`
    All(usize, usize, usize),
}

impl CosetRep {
    /// From `(j, p)` pairs with `j ∈ {1, 2, 3}` increasing.
    fn from_pairs(pairs: &[(usize, usize)]) -> CosetRep {
        match pairs {
            [] => CosetRep::Identity,
            [(1, p)] => CosetRep::One(*p),
            [(2, p)] => CosetRep::Two(*p),
            [(3, p)] => CosetRep::Three(*p),
            [(1, p), (2, q)] => CosetRep::OneTwo(*p, *q),
            [(2, p), (3, q)] => CosetRep::TwoThree(*p, *q),
            [(1, q), (3, p)] => CosetRep::ThreeOne(*p, *q),
            [(1, p), (2, q), (3, r)] => CosetRep::All(*p, *q, *r),
            _ => unreachable!("pairs come from distinct labels 1..3"),
        }
    }

    /// Closed-form `g_τ(λ)`. Coordinates are 0-based; `p` is the 1-based
    /// label, so `λ^{p−3}` is `l[p − 4]`.
    pub fn apply(&self, l: &[C64]) -> Vec<C64> {
        let one = C64::new(1.0, 0.0);
        let at = |label: usize| l[label - 4];
        (0..l.len())
            .map(|k| {
                let lk = l[k];
                let label = k + 4;
                match *self {
                    CosetRep::Identity => lk,
                    CosetRep::One(p) => {
                        let lp = at(p);
                        if label == p {
                            -lp / (one - lp)
                        } else {
                            (lk - lp) / (one - lp)
                        }
                    }
                    CosetRep::Two(p) => {
                        let lp = at(p);
                        if label == p {
                            one / lp
                        } else {
                            lk / lp
                        }
                    }
                    CosetRep::Three(p) => {
                        let lp = at(p);
                        if label == p {
                            one - lp
                        } else {
                            lk * (one - lp) / (lk - lp)
                        }
                    }
                    CosetRep::OneTwo(p, q) => {
                        let (lp, lq) = (at(p), at(q));
                        let d = lq - lp;
                        if label == p {
                            -lp / d
                        } else if label == q {
                            (one - lp) / d
                        } else {
                            (lk - lp) / d
                        }
                    }
                    CosetRep::TwoThree(p, q) => {
                        let (lp, lq) = (at(p), at(q));
                        let d = lp - lq;
                        if label == p {
                            d / (lp * (one - lq))
                        } else if label == q {
                            d / lp
                        } else {
                            d * lk / (lp * (lk - lq))
                        }
                    }
                    CosetRep::ThreeOne(p, q) => {
                        let (lp, lq) = (at(p), at(q));
                        if label == p {
                            (lp - one) / (lq - one)
                        } else if label == q {
                            (lp - one) * lq / ((lq - one) * lp)
                        } else {
                            (lp - one) * (lk - lq) / ((lq - one) * (lk - lp))
                        }
                    }
                    CosetRep::All(p, q, r) => {
                        let (lp, lq, lr) = (at(p), at(q), at(r));
                        let c = (lq - lr) / (lq - lp);
                        if label == p {
                            c * lp / lr
                        } else if label == q {
                            c * (one - lp) / (one - lr)
                        } else if label == r {
                            c
                        } else {
                            c * (lk - lp) / (lk - lr)
                        }
                    }
                }
            })
            .collect()
    }
}

/// The six Möbius maps permuting `{0, 1, ∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anharmonic {
    Identity,
    /// `1 − λ`
    OneMinus,
    /// `1 / λ`
    Reciprocal,
    /// `λ / (λ − 1)`
    Ratio,
    /// `(λ − 1) / λ`
    ShiftedRatio,
    /// `−1 / (λ − 1)`
    NegReciprocalShift,
}

impl Anharmonic {
    pub const ALL: [Anharmonic; 6] = [
        Anharmonic::Identity,
        Anharmonic::OneMinus,
        Anharmonic::Reciprocal,
        Anharmonic::Ratio,
        Anharmonic::ShiftedRatio,
        Anharmonic::NegReciprocalShift,
    ];

    /// The element sending the `a`-th of `(0, 1, ∞)` to the `images[a]`-th.
    pub fn from_action(images: [usize; 3]) -> Anharmonic {
        match images {
            [0, 1, 2] => Anharmonic::Identity,
            [1, 0, 2] => Anharmonic::OneMinus,
            [2, 1, 0] => Anharmonic::Reciprocal,
            [0, 2, 1] => Anharmonic::Ratio,
            [2, 0, 1] => Anharmonic::ShiftedRatio,
            [1, 2, 0] => Anharmonic::NegReciprocalShift,
            _ => panic!("{images:?} is not a permutation of 0, 1, 2"),
        }
    }

    pub fn apply(&self, x: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        match self {
            Anharmonic::Identity => x,
            Anharmonic::OneMinus => one - x,
            Anharmonic::Reciprocal => one / x,
            Anharmonic::Ratio => x / (x - one),
            Anharmonic::ShiftedRatio => (x - one) / x,
            Anharmonic::NegReciprocalShift => -one / (x - one),
        }
    }

    pub fn mobius(&self) -> MobiusMap {
        let (a, b, c, d) = match self {
            Anharmonic::Identity => (1.0, 0.0, 0.0, 1.0),
            Anharmonic::OneMinus => (-1.0, 1.0, 0.0, 1.0),
            Anharmonic::Reciprocal => (0.0, 1.0, 1.0, 0.0),
            Anharmonic::Ratio => (1.0, 0.0, 1.0, -1.0),
            Anharmonic::ShiftedRatio => (1.0, -1.0, 1.0, 0.0),
            Anharmonic::NegReciprocalShift => (0.0, -1.0, 1.0, -1.0),
        };
        MobiusMap::real(a, b, c, d).expect("unit determinant")
    }
}

/// `σ = τ·v`.
#[derive(Debug, Clone)]
pub struct CosetDecomposition {
    pub tau: Permutation,
    pub family: CosetRep,
    pub v: Permutation,
    /// Action of `v` on the marked points `0, 1, ∞`.
    pub h: Anharmonic,
}

impl CosetDecomposition {
    /// `g_v(λ)_i = h(λ_{v⁻¹(i)})` on 0-based coordinates.
    pub fn apply_v(&self, l: &[C64]) -> Vec<C64> {
        let vinv = self.v.inverse();
        (0..l.len()).map(|i| self.h.apply(l[vinv.apply(i + 3) - 3])).collect()
    }
}

// ---------------------------------------------------------------------------
// configurations
// ---------------------------------------------------------------------------

/// Coordinates `(λ¹, …, λ^{n−3})` of a configuration normalized to contain
/// `0, 1, ∞` as its first three marked points.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaTuple {
    values: Vec<C64>,
}

fn as_point(x: C64) -> RiemannPoint {
    RiemannPoint::finite(x)
}

impl LambdaTuple {
    /// Requires finite coordinates, off `{0, 1}` and pairwise distinct, each
    /// by more than `tol` in chordal distance.
    pub fn new(values: Vec<C64>, tol: f64) -> Result<Self, ModuliError> {
        let bad = |msg: String| Err(ModuliError::NotInConfigurationSpace(msg));
        for (i, x) in values.iter().enumerate() {
            if !(x.re.is_finite() && x.im.is_finite()) {
                return bad(format!("coordinate {} is not finite", i + 1));
            }
            for (name, c) in [("0", RiemannPoint::ZERO), ("1", RiemannPoint::ONE), ("∞", RiemannPoint::INFINITY)] {
                if chordal_distance(&as_point(*x), &c) <= tol {
                    return bad(format!("coordinate {} coincides with {name}", i + 1));
                }
            }
            for (j, y) in values.iter().enumerate().take(i) {
                if chordal_distance(&as_point(*x), &as_point(*y)) <= tol {
                    return bad(format!("coordinates {} and {} coincide", j + 1, i + 1));
                }
            }
        }
        Ok(LambdaTuple { values })
    }

    /// Normalizes `points` so the first three land on `0, 1, ∞`.
    pub fn from_points(points: &[RiemannPoint], tol: f64) -> Result<Self, ModuliError> {
        if points.len() < 3 {
            return Err(ModuliError::SizeMismatch { expected: 3, got: points.len() });
        }
        let f = MobiusMap::to_standard_triple([points[0], points[1], points[2]], tol)?;
        let mut values = Vec::with_capacity(points.len() - 3);
        for p in &points[3..] {
            match f.apply(p).to_complex() {
                Some(x) => values.push(x),
                None => return Err(ModuliError::NotInConfigurationSpace("point maps to ∞".into())),
            }
        }
        Self::new(values, tol)
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Number of marked points.
    pub fn n(&self) -> usize {
        self.values.len() + 3
    }

    /// Marked points `(0, 1, ∞, λ¹, …)`.
    pub fn marked(&self) -> MarkedConfiguration {
        let mut points = vec![RiemannPoint::ZERO, RiemannPoint::ONE, RiemannPoint::INFINITY];
        points.extend(self.values.iter().map(|&x| as_point(x)));
        MarkedConfiguration { points }
    }

    /// Largest coordinatewise chordal distance.
    pub fn deviation(&self, other: &LambdaTuple) -> f64 {
        deviation(&self.values, &other.values)
    }

    pub fn approx_eq(&self, other: &LambdaTuple, tol: f64) -> bool {
        self.values.len() == other.values.len() && self.deviation(other) <= tol
    }
}

fn deviation(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| chordal_distance(&as_point(*x), &as_point(*y))).fold(0.0, f64::max)
}

impl fmt::Display for LambdaTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.values.iter().map(|&x| as_point(x)).join(", "))
    }
}

impl FromStr for LambdaTuple {
    type Err = ModuliError;

    /// Comma separated complex numbers, e.g. `2+1i, 5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|t| parse_complex(t.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        LambdaTuple::new(values, crate::geometry::DEFAULT_TOL)
    }
}

#[derive(Serialize)]
struct LambdaJson {
    n: usize,
    values: Vec<String>,
}

impl Serialize for LambdaTuple {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        LambdaJson { n: self.n(), values: self.values.iter().map(|&x| as_point(x).to_string()).collect() }
            .serialize(serializer)
    }
}

/// Marked points `z₁ = 0, z₂ = 1, z₃ = ∞, z_{i+3} = λⁱ`.
#[derive(Debug, Clone)]
pub struct MarkedConfiguration {
    pub points: Vec<RiemannPoint>,
}

impl MarkedConfiguration {
    /// The unordered set `[λ]`.
    pub fn set(&self, tol: f64) -> Result<PointSet, ModuliError> {
        Ok(PointSet::new(self.points.clone(), tol)?)
    }
}

// ---------------------------------------------------------------------------
// the action
// ---------------------------------------------------------------------------

fn check_size(lambda: &LambdaTuple, sigma: &Permutation) -> Result<(), ModuliError> {
    if sigma.len() != lambda.n() {
        return Err(ModuliError::SizeMismatch { expected: lambda.n(), got: sigma.len() });
    }
    Ok(())
}

/// The map sending `z_{σ⁻¹(1)}, z_{σ⁻¹(2)}, z_{σ⁻¹(3)}` to `0, 1, ∞`.
pub fn f_sigma(lambda: &LambdaTuple, sigma: &Permutation) -> Result<MobiusMap, ModuliError> {
    check_size(lambda, sigma)?;
    let z = lambda.marked().points;
    let inv = sigma.inverse();
    Ok(MobiusMap::to_standard_triple([0, 1, 2].map(|j| z[inv.apply(j)]), 0.0)?)
}

/// `g_σ(λ)_i = f_σ(z_{σ⁻¹(i+3)})`, straight from the definition.
pub fn g_sigma_definitional(lambda: &LambdaTuple, sigma: &Permutation) -> Result<Vec<C64>, ModuliError> {
    let f = f_sigma(lambda, sigma)?;
    let z = lambda.marked().points;
    let inv = sigma.inverse();
    (3..lambda.n())
        .map(|j| {
            f.apply(&z[inv.apply(j)])
                .to_complex()
                .ok_or_else(|| ModuliError::NotInConfigurationSpace("image at ∞".into()))
        })
        .collect()
}

/// `g_σ = g_τ ∘ g_v` from the coset decomposition and closed forms.
pub fn g_sigma_closed_form(lambda: &LambdaTuple, sigma: &Permutation) -> Result<Vec<C64>, ModuliError> {
    check_size(lambda, sigma)?;
    let dec = sigma.decompose();
    Ok(dec.family.apply(&dec.apply_v(lambda.values())))
}

/// Coordinatewise chordal distance between the two evaluation routes.
pub fn closed_form_deviation(lambda: &LambdaTuple, sigma: &Permutation) -> Result<f64, ModuliError> {
    Ok(deviation(&g_sigma_definitional(lambda, sigma)?, &g_sigma_closed_form(lambda, sigma)?))
}

/// `g_σ(λ)`, evaluated both ways; fails if they differ by more than `10·tol`.
pub fn g_sigma(lambda: &LambdaTuple, sigma: &Permutation, tol: f64) -> Result<LambdaTuple, ModuliError> {
    let direct = g_sigma_definitional(lambda, sigma)?;
    let closed = g_sigma_closed_form(lambda, sigma)?;
    let dev = deviation(&direct, &closed);
    if dev.is_nan() || dev > 10.0 * tol {
        return Err(ModuliError::ClosedFormMismatch { deviation: dev });
    }
    Ok(LambdaTuple { values: direct })
}

/// Uniform random point of `K_n` with coordinates in `[−3, 3]²`, kept at
/// least `0.05` apart from each other and from `0, 1`.
pub fn random_lambda<R: Rng>(n: usize, rng: &mut R) -> LambdaTuple {
    loop {
        let values: Vec<C64> =
            (3..n).map(|_| C64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))).collect();
        if let Ok(l) = LambdaTuple::new(values, 0.05) {
            return l;
        }
    }
}

pub fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation(images)
}

#[derive(Debug, Clone, Serialize)]
pub struct FaithfulnessReport {
    /// Non-identity permutations tested.
    pub checked: usize,
    /// How many of them moved the test point.
    pub moved: usize,
    /// Smallest coordinatewise displacement among them.
    pub min_displacement: f64,
    /// Whether every element of `S_n` was tested.
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupLawReport {
    pub n: usize,
    pub trials: usize,
    /// Largest deviation of `g_π(g_σ(λ))` from `g_{π·σ}(λ)`.
    pub max_deviation: f64,
    /// Largest deviation between closed form and definition seen on the way.
    pub max_closed_form_deviation: f64,
    pub faithfulness: Option<FaithfulnessReport>,
    pub passed: bool,
}

/// Largest `n` at which faithfulness is checked over all of `S_n`.
const EXHAUSTIVE_FAITHFULNESS_LIMIT: usize = 7;

/// Checks `g_π ∘ g_σ = g_{π·σ}` on `trials` random `(σ, π, λ)`, and for
/// `n ≥ 5` that non-identity permutations move a random `λ`.
pub fn verify_group_law(n: usize, trials: usize, seed: u64, tol: f64) -> Result<GroupLawReport, ModuliError> {
    if n < 4 {
        return Err(ModuliError::SizeMismatch { expected: 4, got: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_dev: f64 = 0.0;
    let mut max_cf: f64 = 0.0;
    for _ in 0..trials {
        let lambda = random_lambda(n, &mut rng);
        let sigma = random_permutation(n, &mut rng);
        let pi = random_permutation(n, &mut rng);
        max_cf = max_cf.max(closed_form_deviation(&lambda, &sigma)?).max(closed_form_deviation(&lambda, &pi)?);
        let mu = g_sigma(&lambda, &sigma, tol)?;
        let lhs = g_sigma(&mu, &pi, tol)?;
        let rhs = g_sigma(&lambda, &pi.compose(&sigma), tol)?;
        max_dev = max_dev.max(lhs.deviation(&rhs));
    }
    let faithfulness = if n >= 5 {
        let lambda = random_lambda(n, &mut rng);
        let exhaustive = n <= EXHAUSTIVE_FAITHFULNESS_LIMIT;
        let sigmas: Vec<Permutation> = if exhaustive {
            Permutation::all(n).filter(|s| !s.is_identity()).collect()
        } else {
            (0..trials.max(1)).map(|_| random_permutation(n, &mut rng)).filter(|s| !s.is_identity()).collect()
        };
        let displacements = sigmas
            .par_iter()
            .map(|s| Ok(g_sigma(&lambda, s, tol)?.deviation(&lambda)))
            .collect::<Result<Vec<f64>, ModuliError>>()?;
        Some(FaithfulnessReport {
            checked: displacements.len(),
            moved: displacements.iter().filter(|&&d| d > 10.0 * tol).count(),
            min_displacement: displacements.iter().copied().fold(f64::INFINITY, f64::min),
            exhaustive,
        })
    } else {
        None
    };
    let passed = max_dev < 10.0 * tol && faithfulness.as_ref().is_none_or(|f| f.moved == f.checked);
    Ok(GroupLawReport { n, trials, max_deviation: max_dev, max_closed_form_deviation: max_cf, faithfulness, passed })
}

/// `G_λ` by enumerating `S_n`; needs `n ≤ bound`.
pub fn stabilizer_direct(lambda: &LambdaTuple, tol: f64, bound: usize) -> Result<Vec<Permutation>, ModuliError> {
    let n = lambda.n();
    if n > bound {
        return Err(ModuliError::EnumerationBoundExceeded { n, bound });
    }
    let all: Vec<Permutation> = Permutation::all(n).collect();
    let kept = all
        .into_par_iter()
        .map(|s| {
            let image = g_sigma_definitional(lambda, &s)?;
            Ok((deviation(&image, lambda.values()) <= tol).then_some(s))
        })
        .collect::<Result<Vec<Option<Permutation>>, ModuliError>>()?;
    Ok(kept.into_iter().flatten().collect())
}

/// `G_λ` as the permutations of the marked points induced by the stabilizer
/// of `[λ]`.
pub fn stabilizer_via_oracle(lambda: &LambdaTuple, tol: f64) -> Result<Vec<Permutation>, ModuliError> {
    let set = lambda.marked().set(tol)?;
    let result = stabilizer(&set)?;
    let mut perms: Vec<Permutation> = result.permutations.into_iter().map(Permutation).collect();
    perms.sort();
    Ok(perms)
}

/// `G_λ`, sorted. Runs the oracle path always and the direct path when
/// `n ≤ bound`; the two must agree.
pub fn stabilizer_g_lambda(lambda: &LambdaTuple, tol: f64, bound: usize) -> Result<Vec<Permutation>, ModuliError> {
    let oracle = stabilizer_via_oracle(lambda, tol)?;
    if lambda.n() <= bound {
        let direct = stabilizer_direct(lambda, tol, bound)?;
        if direct != oracle {
            return Err(ModuliError::PathDisagreement { direct: direct.len(), oracle: oracle.len() });
        }
    }
    Ok(oracle)
}

#[derive(Debug, Clone, Serialize)]
pub struct PhiReport {
    pub lambda: LambdaTuple,
    pub g_lambda_order: usize,
    pub stabilizer_order: usize,
    pub pairs_checked: usize,
    pub pairs_passed: usize,
    /// Every `f_σ` with `σ ∈ G_λ` maps `[λ]` onto itself.
    pub all_stabilize: bool,
    pub passed: bool,
}

/// Checks that `σ ↦ f_σ` is an isomorphism from `G_λ` onto the stabilizer
/// of `[λ]`: equal orders, `f_π ∘ f_σ = f_{π·σ}` projectively within
/// `10·tol` on all pairs, and each `f_σ` preserving `[λ]`.
pub fn phi_check(lambda: &LambdaTuple, tol: f64, bound: usize) -> Result<PhiReport, ModuliError> {
    let g = stabilizer_g_lambda(lambda, tol, bound)?;
    let set = lambda.marked().set(tol)?;
    let a_order = stabilizer(&set)?.order();
    let maps = g.iter().map(|s| f_sigma(lambda, s)).collect::<Result<Vec<_>, _>>()?;
    let mut all_stabilize = true;
    for f in &maps {
        all_stabilize &= set.induced_permutation(f)?.is_some();
    }
    let pairs: Vec<(usize, usize)> = (0..g.len()).cartesian_product(0..g.len()).collect();
    let passed_pairs = pairs
        .par_iter()
        .map(|&(i, j)| {
            let product = f_sigma(lambda, &g[i].compose(&g[j]))?;
            Ok(maps[i].compose(&maps[j]).approx_eq(&product, 10.0 * tol))
        })
        .collect::<Result<Vec<bool>, ModuliError>>()?;
    let pairs_passed = passed_pairs.iter().filter(|&&b| b).count();
    Ok(PhiReport {
        lambda: lambda.clone(),
        g_lambda_order: g.len(),
        stabilizer_order: a_order,
        pairs_checked: pairs.len(),
        pairs_passed,
        all_stabilize,
        passed: g.len() == a_order && pairs_passed == pairs.len() && all_stabilize,
    })
}

/// Named configurations with known stabilizers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `λ = (2+i, 5)`, trivial stabilizer.
    Generic,
    /// `{0, ∞}` with the fifth roots of unity, dihedral of order 10.
    D5,
    /// `{0, ±1, ±2}`, order 2.
    Z2,
    /// Octahedron vertices `{0, ∞, ±1, ±i}`, order 24.
    S4,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Generic, Preset::D5, Preset::Z2, Preset::S4];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Generic => "generic",
            Preset::D5 => "d5",
            Preset::Z2 => "z2",
            Preset::S4 => "s4",
        }
    }

    pub fn lambda(&self, tol: f64) -> Result<LambdaTuple, ModuliError> {
        let c = |re: f64, im: f64| C64::new(re, im);
        match self {
            Preset::Generic => LambdaTuple::new(vec![c(2.0, 1.0), c(5.0, 0.0)], tol),
            Preset::D5 => {
                let roots = (1..5).map(|j| C64::from_polar(1.0, std::f64::consts::TAU * j as f64 / 5.0)).collect();
                LambdaTuple::new(roots, tol)
            }
            Preset::Z2 => {
                let pts = [0.0, 1.0, -1.0, 2.0, -2.0].map(RiemannPoint::real);
                LambdaTuple::from_points(&pts, tol)
            }
            Preset::S4 => LambdaTuple::new(vec![c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)], tol),
        }
    }
}

impl FromStr for Preset {
    type Err = ModuliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ModuliError::UnknownPreset(s.to_string()))
    }
}
