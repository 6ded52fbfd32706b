//! Enumeration of every possible stabilizer of an `n`-point subset of the
//! Riemann sphere, together with its component index.
//!
//! This is pure integer arithmetic. Entries come out in a fixed order:
//! icosahedral, octahedral, tetrahedral, dihedral (`p` descending), Klein
//! four-group, cyclic (`p` descending), `Z_2`, trivial.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("invalid cardinality {0}: need n >= 1")]
    InvalidCardinality(u64),
    #[error("index {index} is out of range for {group}")]
    IndexOutOfRange { group: String, index: String },
    #[error("cannot parse classification entry {0:?}")]
    Parse(String),
}

/// A finite subgroup of PSL(2, C) up to conjugacy, or the marker for the
/// infinite stabilizers of sets with at most two points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupLabel {
    A5,
    S4,
    A4,
    /// `D_p` with `p ≥ 3`; `D_2` is [`GroupLabel::K4`].
    Dihedral(u64),
    K4,
    /// `Z_p` with `p ≥ 3`; `Z_2` is [`GroupLabel::Z2`].
    Cyclic(u64),
    Z2,
    Trivial,
    Infinite,
}

impl GroupLabel {
    /// Dihedral group of order `2p`, folding `p = 2` into `K4`.
    pub fn dihedral(p: u64) -> GroupLabel {
        match p {
            0 | 1 => panic!("dihedral parameter must be >= 2"),
            2 => GroupLabel::K4,
            p => GroupLabel::Dihedral(p),
        }
    }

    /// Cyclic group of order `p`, folding `p = 2` into `Z2` and `p = 1` into
    /// the trivial group.
    pub fn cyclic(p: u64) -> GroupLabel {
        match p {
            0 => panic!("cyclic parameter must be >= 1"),
            1 => GroupLabel::Trivial,
            2 => GroupLabel::Z2,
            p => GroupLabel::Cyclic(p),
        }
    }

    /// Group order; `None` for the infinite marker.
    pub fn abstract_order(&self) -> Option<u64> {
        Some(match *self {
            GroupLabel::A5 => 60,
            GroupLabel::S4 => 24,
            GroupLabel::A4 => 12,
            GroupLabel::Dihedral(p) => 2 * p,
            GroupLabel::K4 => 4,
            GroupLabel::Cyclic(p) => p,
            GroupLabel::Z2 => 2,
            GroupLabel::Trivial => 1,
            GroupLabel::Infinite => return None,
        })
    }

    /// Orbit size attached to each component-index slot, in slot order.
    pub fn orbit_sizes(&self) -> &'static [u64] {
        match *self {
            GroupLabel::A5 => &[12, 20, 30, 60],
            GroupLabel::S4 => &[6, 8, 12, 24],
            GroupLabel::A4 => &[4, 6, 12],
            GroupLabel::K4 => &[2, 4],
            GroupLabel::Z2 => &[1, 2],
            GroupLabel::Trivial | GroupLabel::Infinite => &[],
            // parametric families are handled by `slot_sizes`
            GroupLabel::Dihedral(_) | GroupLabel::Cyclic(_) => &[],
        }
    }

    /// Orbit size attached to each slot, including the parametric families.
    pub fn slot_sizes(&self) -> Vec<u64> {
        match *self {
            GroupLabel::Dihedral(p) => vec![2, p, 2 * p],
            GroupLabel::Cyclic(p) => vec![1, p],
            _ => self.orbit_sizes().to_vec(),
        }
    }

    /// Upper bound on each slot; the last slot (free orbits) is unbounded.
    pub fn slot_limits(&self) -> Vec<Option<u64>> {
        let bounded: &[u64] = match *self {
            GroupLabel::A5 | GroupLabel::S4 => &[1, 1, 1],
            GroupLabel::A4 => &[2, 1],
            GroupLabel::Dihedral(_) => &[1, 2],
            GroupLabel::K4 => &[3],
            GroupLabel::Cyclic(_) | GroupLabel::Z2 => &[2],
            GroupLabel::Trivial | GroupLabel::Infinite => return vec![],
        };
        bounded.iter().map(|&b| Some(b)).chain(std::iter::once(None)).collect()
    }

    /// Text tag as printed in listings: `A_5`, `D_7`, `Z_2`, `(0)`, ...
    pub fn tag(&self) -> String {
        match *self {
            GroupLabel::A5 => "A_5".into(),
            GroupLabel::S4 => "S_4".into(),
            GroupLabel::A4 => "A_4".into(),
            GroupLabel::Dihedral(p) => format!("D_{p}"),
            GroupLabel::K4 => "K_4".into(),
            GroupLabel::Cyclic(p) => format!("Z_{p}"),
            GroupLabel::Z2 => "Z_2".into(),
            GroupLabel::Trivial => "(0)".into(),
            GroupLabel::Infinite => "infinity".into(),
        }
    }

    /// Family name used in JSON (`D`, `Z` carry a separate `p`).
    pub fn family(&self) -> &'static str {
        match self {
            GroupLabel::A5 => "A_5",
            GroupLabel::S4 => "S_4",
            GroupLabel::A4 => "A_4",
            GroupLabel::Dihedral(_) => "D",
            GroupLabel::K4 => "K_4",
            GroupLabel::Cyclic(_) => "Z",
            GroupLabel::Z2 => "Z_2",
            GroupLabel::Trivial => "(0)",
            GroupLabel::Infinite => "infinity",
        }
    }

    pub fn parameter(&self) -> Option<u64> {
        match *self {
            GroupLabel::Dihedral(p) | GroupLabel::Cyclic(p) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl FromStr for GroupLabel {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || ClassifyError::Parse(s.to_string());
        Ok(match t.as_str() {
            "A_5" | "A5" => GroupLabel::A5,
            "S_4" | "S4" => GroupLabel::S4,
            "A_4" | "A4" => GroupLabel::A4,
            "K_4" | "K4" => GroupLabel::K4,
            "(0)" | "trivial" => GroupLabel::Trivial,
            "infinity" => GroupLabel::Infinite,
            _ => {
                let (fam, p) = t.split_at(1);
                let p: u64 = p.trim_start_matches('_').parse().map_err(|_| err())?;
                match (fam, p) {
                    ("D", p) if p >= 2 => GroupLabel::dihedral(p),
                    ("Z", p) if p >= 2 => GroupLabel::cyclic(p),
                    _ => return Err(err()),
                }
            }
        })
    }
}

/// Orbit counts, one slot per orbit size of the group (see
/// [`GroupLabel::slot_sizes`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ComponentIndex(pub Vec<u64>);

impl ComponentIndex {
    pub fn new(counts: impl Into<Vec<u64>>) -> Self {
        ComponentIndex(counts.into())
    }

    pub fn empty() -> Self {
        ComponentIndex(Vec::new())
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    /// Number of free (full-size) orbits, i.e. the last slot.
    pub fn free_orbits(&self) -> u64 {
        self.0.last().copied().unwrap_or(0)
    }
}

impl fmt::Display for ComponentIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// One line of a classification: a group and the orbit structure it induces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassificationEntry {
    pub group: GroupLabel,
    pub index: ComponentIndex,
}

impl ClassificationEntry {
    /// Validates slot count and ranges.
    pub fn new(group: GroupLabel, index: ComponentIndex) -> Result<Self, ClassifyError> {
        let limits = group.slot_limits();
        let ok =
            index.0.len() == limits.len() && index.0.iter().zip(&limits).all(|(c, lim)| lim.is_none_or(|l| *c <= l));
        if !ok {
            return Err(ClassifyError::IndexOutOfRange { group: group.tag(), index: index.to_string() });
        }
        Ok(ClassificationEntry { group, index })
    }

    fn raw(group: GroupLabel, counts: &[u64]) -> Self {
        ClassificationEntry { group, index: ComponentIndex::new(counts) }
    }

    pub fn trivial() -> Self {
        Self::raw(GroupLabel::Trivial, &[])
    }

    pub fn infinite() -> Self {
        Self::raw(GroupLabel::Infinite, &[])
    }
}

impl fmt::Display for ClassificationEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.group {
            GroupLabel::Trivial | GroupLabel::Infinite => write!(f, "{}", self.group),
            g => write!(f, "{}, {}", g, self.index),
        }
    }
}

impl FromStr for ClassificationEntry {
    type Err = ClassifyError;

    /// Accepts the listing grammar, e.g. `D_5, (1, 1, 0)`, `Z_2,(1,2)`, `(0)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || ClassifyError::Parse(s.to_string());
        match t.as_str() {
            "(0)" | "trivial" => return Ok(Self::trivial()),
            "infinity" => return Ok(Self::infinite()),
            _ => {}
        }
        let (group, rest) = t.split_once(',').ok_or_else(err)?;
        let group: GroupLabel = group.parse()?;
        let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(err)?;
        let counts = inner.split(',').map(|c| c.parse::<u64>().map_err(|_| err())).collect::<Result<Vec<_>, _>>()?;
        ClassificationEntry::new(group, ComponentIndex(counts))
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    group: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    p: Option<u64>,
    index: Vec<u64>,
}

impl Serialize for ClassificationEntry {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        EntryJson { group: self.group.family().to_string(), p: self.group.parameter(), index: self.index.0.clone() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ClassificationEntry {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = EntryJson::deserialize(deserializer)?;
        let group = match (j.group.as_str(), j.p) {
            ("D", Some(p)) if p >= 2 => GroupLabel::dihedral(p),
            ("Z", Some(p)) if p >= 2 => GroupLabel::cyclic(p),
            (g, None) => g.parse().map_err(D::Error::custom)?,
            _ => return Err(D::Error::custom(format!("bad group {:?}", j.group))),
        };
        ClassificationEntry::new(group, ComponentIndex(j.index)).map_err(D::Error::custom)
    }
}

/// Cardinality implied by an entry. `None` for the trivial and infinite
/// groups, which impose no formula.
pub fn cardinality_of(entry: &ClassificationEntry) -> Option<u64> {
    let sizes = entry.group.slot_sizes();
    if sizes.is_empty() {
        return None;
    }
    Some(sizes.iter().zip(&entry.index.0).map(|(s, c)| s * c).sum())
}

/// Whether the answer for `n` also describes singularities of `M_{0,n}`.
pub fn moduli_interpretation_applies(n: u64) -> bool {
    n >= 5
}

/// Every possible stabilizer (with component index) of an `n`-point subset.
pub fn classify(n: u64) -> Result<Vec<ClassificationEntry>, ClassifyError> {
    use GroupLabel::*;

    if n < 1 {
        return Err(ClassifyError::InvalidCardinality(n));
    }
    let mut out = Vec::new();
    let mut emit = |g: GroupLabel, c: &[u64]| out.push(ClassificationEntry::raw(g, c));

    if n <= 2 {
        emit(Infinite, &[]);
    }

    // icosahedral / octahedral: residues pick the special orbits
    for (group, order, specials) in [(A5, 60, [12, 20, 30]), (S4, 24, [6, 8, 12])] {
        let (k, r) = (n / order, n % order);
        let [v, m, e] = specials;
        if r == 0 && k >= 1 {
            emit(group, &[0, 0, 0, k]);
        }
        if r == v {
            emit(group, &[1, 0, 0, k]);
        }
        if r == m {
            emit(group, &[0, 1, 0, k]);
        }
        if r == e {
            emit(group, &[0, 0, 1, k]);
        }
        if r == v + m {
            emit(group, &[1, 1, 0, k]);
        }
        if r == v + e {
            emit(group, &[1, 0, 1, k]);
        }
        if r == m + e {
            emit(group, &[0, 1, 1, k]);
        }
        // v + m + e = order + 2
        if r == 2 && k >= 1 {
            emit(group, &[1, 1, 1, k - 1]);
        }
    }

    let (k, r) = (n / 12, n % 12);
    if r == 0 && k >= 1 {
        emit(A4, &[0, 0, k]);
    }
    if r == 4 {
        emit(A4, &[1, 0, k]);
    }
    if r == 8 && k >= 1 {
        emit(A4, &[2, 0, k]);
    }
    if r == 6 && k >= 1 {
        emit(A4, &[0, 1, k]);
    }
    if r == 10 {
        emit(A4, &[1, 1, k]);
    }
    if r == 2 && k >= 2 {
        emit(A4, &[2, 1, k - 1]);
    }

    for p in (3..=n).rev() {
        let k = n / (2 * p);
        let l = n / p - 2 * k;
        let r = n - 2 * p * k - p * l;
        let d = Dihedral(p);
        if k >= 1 && r == 0 {
            emit(d, &[0, l, k]);
        }
        if k >= 2 && r == 0 && l == 0 {
            emit(d, &[0, 2, k - 1]);
        }
        if k >= 1 && r == 2 {
            emit(d, &[1, l, k]);
        }
        if k >= 2 && r == 2 && l == 0 {
            emit(d, &[1, 2, k - 1]);
        }
        if k == 0 && r == 0 && l == 1 {
            emit(d, &[0, 1, 0]);
        }
        if k == 0 && r == 2 && l == 1 && p != 4 {
            emit(d, &[1, 1, 0]);
        }
    }

    let (k, r) = (n / 4, n % 4);
    if k >= 1 && r == 0 {
        emit(K4, &[0, k]);
    }
    if k >= 2 && r == 0 {
        emit(K4, &[2, k - 1]);
    }
    if k >= 1 && r == 2 {
        emit(K4, &[1, k]);
    }
    if k >= 2 && r == 2 {
        emit(K4, &[3, k - 1]);
    }

    for p in (3..=n).rev() {
        let (k, r) = (n / p, n % p);
        let z = Cyclic(p);
        if k >= 3 && r <= 2 {
            emit(z, &[r, k]);
        }
        if k == 2 && r == 1 {
            emit(z, &[r, k]);
        }
        if k == 1 && r == 1 && p != 3 {
            emit(z, &[r, k]);
        }
    }

    let (k, r) = (n / 2, n % 2);
    if k >= 3 {
        emit(Z2, &[r, k]);
    }
    if k >= 4 && r == 0 {
        emit(Z2, &[2, k - 1]);
    }
    if k == 2 && r == 1 {
        emit(Z2, &[r, k]);
    }

    if n >= 5 {
        emit(Trivial, &[]);
    }
    Ok(out)
}

/// `{ n ≤ n_max : classify(n) has an entry with this group }`.
pub fn cardinality_set(group: GroupLabel, n_max: u64) -> BTreeSet<u64> {
    (1..=n_max).filter(|&n| classify(n).expect("n >= 1").iter().any(|e| e.group == group)).collect()
}

/// Renders a classification in the listing grammar, one entry per line.
pub fn format_listing(entries: &[ClassificationEntry]) -> String {
    let mut s = String::new();
    for e in entries {
        s.push_str(&e.to_string());
        s.push('\n');
    }
    s
}
