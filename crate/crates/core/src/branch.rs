//! Partitions, branch data, residue vectors and recognition of the
//! two-fibre-plus-hooks shape handled by the realizer.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gcd;

/// Positive parts in non-increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    /// `(m+1, 1, .., 1)` as a partition of `d`.
    pub fn hook(m: usize, d: usize) -> Result<Self> {
        if m + 1 > d {
            return Err(Error::InvalidPartition(format!(
                "hook with m = {m} does not fit in degree {d}"
            )));
        }
        let mut parts = vec![m + 1];
        parts.resize(d - m, 1);
        Ok(Self { parts })
    }

    pub fn trivial(d: usize) -> Result<Self> {
        Self::new(vec![1; d])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Largest part.
    pub fn weight(&self) -> usize {
        self.parts[0]
    }

    pub fn is_trivial(&self) -> bool {
        self.weight() == 1
    }

    /// `Some(m)` when the partition is `(m+1, 1, .., 1)` with `m >= 1`.
    pub fn hook_m(&self) -> Option<usize> {
        (self.weight() > 1 && self.parts[1..].iter().all(|&x| x == 1)).then(|| self.weight() - 1)
    }

    pub fn scaled(&self, k: usize) -> Self {
        Self {
            parts: self.parts.iter().map(|&x| x * k).collect(),
        }
    }

    /// Appends 1s until the total reaches `d`.
    pub fn padded(&self, d: usize) -> Self {
        let mut parts = self.parts.clone();
        let total = self.total();
        if total < d {
            parts.resize(parts.len() + d - total, 1);
        }
        Self { parts }
    }

    /// Drops the 1s (fixed points).
    pub fn nontrivial_parts(&self) -> Vec<usize> {
        self.parts.iter().copied().filter(|&x| x > 1).collect()
    }

    pub fn gcd(&self) -> usize {
        self.parts.iter().fold(0u64, |g, &x| gcd(g, x as u64)) as usize
    }

    /// Parses `(k1,k2,...)`; commas or whitespace separate parts.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let body = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("partition {t:?} must be parenthesised")))?;
        let parts = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad part {s:?} in {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, x) in self.parts.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(d)?;
        Self::new(parts).map_err(serde::de::Error::custom)
    }
}

/// A degree and a multiset of partitions of it. Input order is kept so that
/// roles can be mapped back, but equality is multiset equality.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "BranchDataJson", into = "BranchDataJson")]
pub struct BranchData {
    degree: usize,
    partitions: Vec<Partition>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchDataJson {
    pub degree: usize,
    pub partitions: Vec<Vec<usize>>,
}

impl TryFrom<BranchDataJson> for BranchData {
    type Error = Error;

    fn try_from(j: BranchDataJson) -> Result<Self> {
        let parts = j
            .partitions
            .into_iter()
            .map(Partition::new)
            .collect::<Result<Vec<_>>>()?;
        Self::new(j.degree, parts)
    }
}

impl From<BranchData> for BranchDataJson {
    fn from(bd: BranchData) -> Self {
        Self {
            degree: bd.degree,
            partitions: bd.partitions.into_iter().map(|p| p.parts).collect(),
        }
    }
}

impl BranchData {
    pub fn new(degree: usize, partitions: Vec<Partition>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidBranchData("degree must be positive".into()));
        }
        if let Some(p) = partitions.iter().find(|p| p.total() != degree) {
            return Err(Error::InvalidBranchData(format!(
                "partition {p} does not sum to degree {degree}"
            )));
        }
        Ok(Self { degree, partitions })
    }

    /// Like [`BranchData::new`] but pads short partitions with 1s.
    pub fn padded(degree: usize, partitions: Vec<Partition>) -> Result<Self> {
        let partitions = partitions.into_iter().map(|p| p.padded(degree)).collect();
        Self::new(degree, partitions)
    }

    pub fn from_parts(degree: usize, parts: &[&[usize]]) -> Result<Self> {
        let partitions = parts
            .iter()
            .map(|p| Partition::new(p.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(degree, partitions)
    }

    /// Parses `"(2,2) (2,2) (3,1)"` and checks each group sums to `degree`.
    pub fn parse(degree: usize, text: &str) -> Result<Self> {
        let mut partitions = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let close = rest
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed partition in {text:?}")))?;
            partitions.push(Partition::parse(&rest[..=close])?);
            rest = rest[close + 1..].trim_start_matches(|c: char| c.is_whitespace() || c == ';');
        }
        Self::new(degree, partitions)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    /// Partitions sorted descending, for multiset comparison and census order.
    pub fn canonical_partitions(&self) -> Vec<Partition> {
        let mut v = self.partitions.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// Same multiset, partitions sorted descending.
    pub fn canonical(&self) -> Self {
        Self {
            degree: self.degree,
            partitions: self.canonical_partitions(),
        }
    }

    /// Drops trivial partitions; returns the result and how many were dropped.
    pub fn normalized(&self) -> (Self, usize) {
        let kept: Vec<_> = self
            .partitions
            .iter()
            .filter(|p| !p.is_trivial())
            .cloned()
            .collect();
        let dropped = self.partitions.len() - kept.len();
        (
            Self {
                degree: self.degree,
                partitions: kept,
            },
            dropped,
        )
    }

    pub fn total_branching(&self) -> usize {
        total_branching(self)
    }

    pub fn is_compatible(&self) -> bool {
        is_compatible(self)
    }
}

impl PartialEq for BranchData {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.canonical_partitions() == other.canonical_partitions()
    }
}

impl Eq for BranchData {}

impl std::hash::Hash for BranchData {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.degree.hash(state);
        self.canonical_partitions().hash(state);
    }
}

impl fmt::Display for BranchData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} {{", self.degree)?;
        for (k, p) in self.partitions.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// `v = Σ (d - len λ)` over the collection.
pub fn total_branching(bd: &BranchData) -> usize {
    bd.partitions.iter().map(|p| bd.degree - p.len()).sum()
}

pub fn is_compatible(bd: &BranchData) -> bool {
    total_branching(bd).is_multiple_of(2)
}

/// Genus of the covering surface from Riemann-Hurwitz, kept as twice its
/// value so that incompatible data yields an exact half-integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverGenus {
    twice: i64,
}

impl CoverGenus {
    pub fn twice(self) -> i64 {
        self.twice
    }

    /// `Some(g)` when the genus is an integer (the data is compatible).
    pub fn integer(self) -> Option<i64> {
        (self.twice % 2 == 0).then_some(self.twice / 2)
    }
}

impl fmt::Display for CoverGenus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.integer() {
            Some(g) => write!(f, "{g}"),
            None => write!(f, "{}/2", self.twice),
        }
    }
}

/// Solves `v = 2g(X) - 2 - d(2g(Y) - 2)` for `g(X)` with `g(Y) = base_genus`.
pub fn cover_genus(bd: &BranchData, base_genus: i64) -> CoverGenus {
    let v = total_branching(bd) as i64;
    let d = bd.degree as i64;
    CoverGenus {
        twice: v + 2 + d * (2 * base_genus - 2),
    }
}

/// Non-zero integers summing to zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueVector {
    entries: Vec<i64>,
}

impl ResidueVector {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::InvalidResidueVector(format!(
                "{entries:?} has fewer than two entries"
            )));
        }
        if entries.contains(&0) {
            return Err(Error::InvalidResidueVector(format!("{entries:?} has a zero entry")));
        }
        if entries.iter().sum::<i64>() != 0 {
            return Err(Error::InvalidResidueVector(format!("{entries:?} does not sum to 0")));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn components(&self) -> usize {
        self.entries.len()
    }

    /// Positive entries in order.
    pub fn positives(&self) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|&&x| x > 0)
            .map(|&x| x as usize)
            .collect()
    }

    /// Absolute values of negative entries in order.
    pub fn negatives(&self) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|&&x| x < 0)
            .map(|&x| (-x) as usize)
            .collect()
    }

    /// Sum of the positive entries.
    pub fn positive_sum(&self) -> usize {
        self.positives().iter().sum()
    }

    pub fn gcd(&self) -> usize {
        self.entries
            .iter()
            .fold(0u64, |g, &x| gcd(g, x.unsigned_abs())) as usize
    }

    pub fn is_primitive(&self) -> bool {
        self.gcd() == 1
    }

    pub fn degree(&self) -> usize {
        rv_degree(self)
    }

    /// Swaps the roles of positive and negative entries.
    pub fn negated(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }
}

impl fmt::Display for ResidueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, x) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// `(a_1, .., a_p, -b_1, .., -b_q)`.
pub fn residue_vector_of(a: &Partition, b: &Partition) -> Result<ResidueVector> {
    if a.total() != b.total() {
        return Err(Error::InvalidResidueVector(format!(
            "{a} and {b} have different totals"
        )));
    }
    let entries = a
        .parts()
        .iter()
        .map(|&x| x as i64)
        .chain(b.parts().iter().map(|&x| -(x as i64)))
        .collect();
    ResidueVector::new(entries)
}

/// Sum of positive entries divided by the gcd of all entries.
pub fn rv_degree(rv: &ResidueVector) -> usize {
    rv.positive_sum() / rv.gcd()
}

/// Divides out the gcd `k` of all entries; returns the primitive vector and `k`.
pub fn primitive_reduce(rv: &ResidueVector) -> (ResidueVector, usize) {
    let k = rv.gcd();
    let entries = rv.entries.iter().map(|&x| x / k as i64).collect();
    (ResidueVector { entries }, k)
}

/// One way of reading branch data as zeros `a`, poles `b` and hooks
/// `(m_k + 1, 1, .., 1)` with `Σ m_k = len a + len b - 2 > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MainForm {
    pub degree: usize,
    pub a: Partition,
    pub b: Partition,
    /// `m_k` for each hook, parallel to `hook_indices`.
    pub hooks: Vec<usize>,
    /// Positions of `a`, `b` and the hooks in the originating branch data.
    pub a_index: usize,
    pub b_index: usize,
    pub hook_indices: Vec<usize>,
}

impl MainForm {
    /// Builds a form directly from its ingredients, in the order
    /// `a, b, hooks..`.
    pub fn new(a: Partition, b: Partition, hooks: Vec<usize>) -> Result<Self> {
        let d = a.total();
        if b.total() != d {
            return Err(Error::InvalidBranchData(format!("{a} and {b} differ in total")));
        }
        let m = a.len() + b.len() - 2;
        if m == 0 || hooks.is_empty() {
            return Err(Error::OutsideForm("len a + len b - 2 must be positive".into()));
        }
        if hooks.iter().sum::<usize>() != m || hooks.contains(&0) {
            return Err(Error::OutsideForm(format!(
                "hooks {hooks:?} must be a partition of {m}"
            )));
        }
        if let Some(&big) = hooks.iter().find(|&&x| x + 1 > d) {
            return Err(Error::OutsideForm(format!(
                "hook m = {big} does not fit in degree {d}"
            )));
        }
        let l = hooks.len();
        Ok(Self {
            degree: d,
            a,
            b,
            hooks,
            a_index: 0,
            b_index: 1,
            hook_indices: (2..l + 2).collect(),
        })
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    pub fn m(&self) -> usize {
        self.p() + self.q() - 2
    }

    pub fn l(&self) -> usize {
        self.hooks.len()
    }

    pub fn lambda(&self) -> Partition {
        Partition::new(self.hooks.clone()).expect("hooks are positive")
    }

    pub fn max_m(&self) -> usize {
        self.hooks.iter().copied().max().unwrap_or(0)
    }

    /// gcd of all parts of `a` and `b`.
    pub fn gcd(&self) -> usize {
        gcd(self.a.gcd() as u64, self.b.gcd() as u64) as usize
    }

    pub fn residue_vector(&self) -> ResidueVector {
        residue_vector_of(&self.a, &self.b).expect("a and b share a total")
    }

    /// The criterion `max m_k < d / gcd`, evaluated as `max m_k * gcd < d`.
    pub fn criterion_holds(&self) -> bool {
        self.max_m() * self.gcd() < self.degree
    }

    /// Hook partitions, parallel to `hooks`.
    pub fn extra_partitions(&self) -> Vec<Partition> {
        self.hooks
            .iter()
            .map(|&m| Partition::hook(m, self.degree).expect("hook fits"))
            .collect()
    }

    /// `a, b, hooks..` as branch data.
    pub fn to_branch_data(&self) -> BranchData {
        let mut parts = vec![self.a.clone(), self.b.clone()];
        parts.extend(self.extra_partitions());
        BranchData::new(self.degree, parts).expect("form partitions share the degree")
    }

    fn dedup_key(&self) -> (Partition, Partition, Vec<usize>) {
        let (x, y) = if self.a <= self.b {
            (self.a.clone(), self.b.clone())
        } else {
            (self.b.clone(), self.a.clone())
        };
        let mut hooks = self.hooks.clone();
        hooks.sort_unstable();
        (x, y, hooks)
    }
}

impl fmt::Display for MainForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d={} a={} b={} lambda={}",
            self.degree,
            self.a,
            self.b,
            self.lambda()
        )
    }
}

/// Every reading of `bd` as a [`MainForm`]: each unordered pair of positions
/// designated as `(a, b)` such that all remaining partitions are hooks with
/// `m >= 1` and `Σ m = len a + len b - 2 > 0`. Forms that coincide as values
/// are reported once.
pub fn classify_form(bd: &BranchData) -> Vec<MainForm> {
    let parts = bd.partitions();
    let n = parts.len();
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    let hook_m: Vec<Option<usize>> = parts.iter().map(Partition::hook_m).collect();
    let mut seen = HashSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let rest: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
            let Some(hooks) = rest.iter().map(|&k| hook_m[k]).collect::<Option<Vec<_>>>() else {
                continue;
            };
            let m = parts[i].len() + parts[j].len() - 2;
            if m == 0 || hooks.iter().sum::<usize>() != m {
                continue;
            }
            let form = MainForm {
                degree: bd.degree(),
                a: parts[i].clone(),
                b: parts[j].clone(),
                hooks,
                a_index: i,
                b_index: j,
                hook_indices: rest,
            };
            if seen.insert(form.dedup_key()) {
                out.push(form);
            }
        }
    }
    out
}
