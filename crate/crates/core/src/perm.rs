//! Permutations of `{0, .., n-1}`, cycle types, transitivity and Hurwitz moves.
//!
//! Composition is right-to-left throughout: `p.compose(&q)` applies `q` first,
//! then `p`. Text I/O uses 1-based points in cycle notation, e.g. `(1 2 3)(4 5)`,
//! with `id` for the identity.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::branch::Partition;
use crate::error::{Error, Result};

/// A bijection on `{0, .., n-1}` stored in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    /// Builds a permutation from its one-line image array.
    pub fn from_map(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("degree must be positive".into()));
        }
        let mut seen = vec![false; n];
        for &x in &map {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{map:?} is not a bijection on 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Self { map })
    }

    /// Builds a permutation of degree `n` from disjoint 0-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPermutation("degree must be positive".into()));
        }
        let mut map: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= n {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} exceeds degree {n}",
                        x + 1
                    )));
                }
                if seen[x] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} repeated",
                        x + 1
                    )));
                }
                seen[x] = true;
                map[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Self { map })
    }

    /// A single cycle on the given (distinct) points.
    pub fn cycle(n: usize, points: &[usize]) -> Result<Self> {
        Self::from_cycles(n, &[points.to_vec()])
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidPermutation(
                "transposition needs two distinct points".into(),
            ));
        }
        Self::cycle(n, &[a, b])
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    #[inline]
    pub fn image(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &x) in self.map.iter().enumerate() {
            inv[x] = i;
        }
        Self { map: inv }
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.compose_unchecked(other))
    }

    fn compose_unchecked(&self, other: &Self) -> Self {
        Self {
            map: other.map.iter().map(|&x| self.map[x]).collect(),
        }
    }

    /// `g · self · g⁻¹`, i.e. `self` with its points relabelled through `g`.
    pub fn conjugate(&self, g: &Self) -> Result<Self> {
        if self.degree() != g.degree() {
            return Err(Error::DegreeMismatch(self.degree(), g.degree()));
        }
        let mut map = vec![0; self.degree()];
        for (i, &x) in self.map.iter().enumerate() {
            map[g.map[i]] = g.map[x];
        }
        Ok(Self { map })
    }

    /// Embeds into a larger symmetric group; new points are fixed.
    pub fn extend(&self, n: usize) -> Self {
        assert!(n >= self.degree(), "cannot shrink a permutation");
        let mut map = self.map.clone();
        map.extend(self.degree()..n);
        Self { map }
    }

    /// Points moved by the permutation, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.map[i] != i).collect()
    }

    pub fn moves(&self, x: usize) -> bool {
        self.map[x] != x
    }

    /// Disjoint cycles of length > 1, each starting at its smallest point,
    /// sorted by that point.
    pub fn cycle_factors(&self) -> Vec<Vec<usize>> {
        self.orbits()
            .into_iter()
            .filter(|c| c.len() > 1)
            .collect()
    }

    /// All cycles including fixed points, in the same order as `cycle_factors`.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.map[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.map[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let parts = self.orbits().iter().map(Vec::len).collect();
        CycleType(Partition::new(parts).expect("orbit sizes form a partition"))
    }

    pub fn cycle_count(&self) -> usize {
        self.orbits().len()
    }

    /// The unique cycle through `x`, starting at `x`.
    pub fn cycle_through(&self, x: usize) -> Vec<usize> {
        let mut out = vec![x];
        let mut y = self.map[x];
        while y != x {
            out.push(y);
            y = self.map[y];
        }
        out
    }

    /// Parses 1-based cycle notation such as `(1 2 3)(4 5)` or `id`.
    pub fn parse(text: &str, degree: usize) -> Result<Self> {
        let text = text.trim();
        let bad = |msg: String| Error::Parse(format!("{msg} in {text:?}"));
        if degree == 0 {
            return Err(bad("degree must be positive".into()));
        }
        if text == "id" || text == "()" {
            return Ok(Self::identity(degree));
        }
        let mut cycles = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| bad("expected '('".into()))?;
            let close = open.find(')').ok_or_else(|| bad("unclosed '('".into()))?;
            let body = &open[..close];
            let mut cycle = Vec::new();
            for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                let point: usize = tok
                    .parse()
                    .map_err(|_| bad(format!("bad point {tok:?}")))?;
                if point == 0 || point > degree {
                    return Err(bad(format!("point {point} outside 1..={degree}")));
                }
                cycle.push(point - 1);
            }
            if cycle.is_empty() {
                return Err(bad("empty cycle".into()));
            }
            cycles.push(cycle);
            rest = open[close + 1..].trim_start();
        }
        Self::from_cycles(degree, &cycles).map_err(|e| bad(e.to_string()))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycle_factors();
        if cycles.is_empty() {
            return f.write_str("id");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, x) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}[n={}]", self.degree())
    }
}

/// Right-to-left product. Panics on a degree mismatch; use
/// [`Permutation::compose`] for the fallible form.
impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        assert_eq!(self.degree(), rhs.degree(), "degree mismatch in product");
        self.compose_unchecked(rhs)
    }
}

impl Mul for Permutation {
    type Output = Permutation;

    fn mul(self, rhs: Permutation) -> Permutation {
        &self * &rhs
    }
}

pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    p.compose(q)
}

pub fn conjugate(p: &Permutation, g: &Permutation) -> Result<Permutation> {
    p.conjugate(g)
}

pub fn cycle_type(p: &Permutation) -> CycleType {
    p.cycle_type()
}

pub fn cycle_factors(p: &Permutation) -> Vec<Vec<usize>> {
    p.cycle_factors()
}

/// Right-to-left product of a non-empty list, `perms[0] ∘ perms[1] ∘ ...`.
pub fn product<'a, I>(perms: I) -> Option<Permutation>
where
    I: IntoIterator<Item = &'a Permutation>,
{
    perms.into_iter().fold(None, |acc, p| match acc {
        None => Some(p.clone()),
        Some(acc) => Some(&acc * p),
    })
}

/// Multiset of cycle lengths, fixed points included, sorted non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType(pub Partition);

impl CycleType {
    pub fn partition(&self) -> &Partition {
        &self.0
    }

    pub fn parts(&self) -> &[usize] {
        self.0.parts()
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Minimal union-find over point indices.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            components: n,
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
            self.components -= 1;
        }
    }

    pub(crate) fn components(&self) -> usize {
        self.components
    }
}

/// True iff the group generated by `perms` has a single orbit on `0..n`.
/// Works on generator images only; the group is never materialised.
pub fn is_transitive(perms: &[Permutation], n: usize) -> bool {
    if n == 0 {
        return false;
    }
    let mut uf = UnionFind::new(n);
    for p in perms {
        debug_assert_eq!(p.degree(), n);
        for x in 0..n {
            uf.union(x, p.image(x));
        }
    }
    uf.components() == 1
}

/// What a permutation in a realization tuple stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    /// Fibre over the zeros.
    Zero,
    /// Fibre over the poles.
    Pole,
    /// The k-th extra branch point, 1-based.
    Extra(usize),
    /// The merged extra fibre of a Belyi lift.
    MergedExtra,
    /// Generic k-th branch point (oracle output), 1-based.
    Branch(usize),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Zero => f.write_str("zero"),
            Role::Pole => f.write_str("pole"),
            Role::Extra(k) => write!(f, "extra-{k}"),
            Role::MergedExtra => f.write_str("merged-extra"),
            Role::Branch(k) => write!(f, "branch-{k}"),
        }
    }
}

impl FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let index = |rest: &str| {
            rest.parse::<usize>()
                .ok()
                .filter(|&k| k >= 1)
                .ok_or_else(|| Error::Parse(format!("bad role {s:?}")))
        };
        match s {
            "zero" => Ok(Role::Zero),
            "pole" => Ok(Role::Pole),
            "merged-extra" => Ok(Role::MergedExtra),
            _ => {
                if let Some(rest) = s.strip_prefix("extra-") {
                    index(rest).map(Role::Extra)
                } else if let Some(rest) = s.strip_prefix("branch-") {
                    index(rest).map(Role::Branch)
                } else {
                    Err(Error::Parse(format!("bad role {s:?}")))
                }
            }
        }
    }
}

/// Ordered permutations of one degree, intended to multiply (right to left)
/// to the identity. The product condition is checked by
/// [`RealizationTuple::product_is_identity`] and by the verifier rather than at
/// construction, so that candidate tuples can be parsed and reported on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationTuple {
    degree: usize,
    perms: Vec<Permutation>,
    roles: Vec<Role>,
}

impl RealizationTuple {
    pub fn new(perms: Vec<Permutation>, roles: Vec<Role>) -> Result<Self> {
        if perms.len() < 2 {
            return Err(Error::InvalidTuple("need at least two permutations".into()));
        }
        if roles.len() != perms.len() {
            return Err(Error::InvalidTuple(format!(
                "{} roles for {} permutations",
                roles.len(),
                perms.len()
            )));
        }
        let degree = perms[0].degree();
        if let Some(p) = perms.iter().find(|p| p.degree() != degree) {
            return Err(Error::DegreeMismatch(degree, p.degree()));
        }
        Ok(Self {
            degree,
            perms,
            roles,
        })
    }

    /// Tuple with roles `branch-1, branch-2, ...`.
    pub fn unlabeled(perms: Vec<Permutation>) -> Result<Self> {
        let roles = (1..=perms.len()).map(Role::Branch).collect();
        Self::new(perms, roles)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn into_parts(self) -> (Vec<Permutation>, Vec<Role>) {
        (self.perms, self.roles)
    }

    pub fn product(&self) -> Permutation {
        product(&self.perms).expect("tuple is non-empty")
    }

    pub fn product_is_identity(&self) -> bool {
        self.product().is_identity()
    }

    pub fn is_transitive(&self) -> bool {
        is_transitive(&self.perms, self.degree)
    }

    pub fn cycle_types(&self) -> Vec<CycleType> {
        self.perms.iter().map(Permutation::cycle_type).collect()
    }

    /// Position of the first permutation with the given role.
    pub fn position(&self, role: Role) -> Option<usize> {
        self.roles.iter().position(|&r| r == role)
    }

    /// Replaces `(x, y)` at `(i, i+1)` by `(x y x⁻¹, x)`.
    pub fn hurwitz_move(&self, i: usize) -> Result<Self> {
        if i + 1 >= self.perms.len() {
            return Err(Error::IndexOutOfRange(i, self.perms.len()));
        }
        let mut out = self.clone();
        let (x, y) = (&self.perms[i], &self.perms[i + 1]);
        out.perms[i] = y.conjugate(x)?;
        out.perms[i + 1] = x.clone();
        out.roles.swap(i, i + 1);
        Ok(out)
    }

    /// Inverse of [`hurwitz_move`](Self::hurwitz_move): `(x, y)` becomes
    /// `(y, y⁻¹ x y)`.
    pub fn hurwitz_move_inverse(&self, i: usize) -> Result<Self> {
        if i + 1 >= self.perms.len() {
            return Err(Error::IndexOutOfRange(i, self.perms.len()));
        }
        let mut out = self.clone();
        let (x, y) = (&self.perms[i], &self.perms[i + 1]);
        out.perms[i] = y.clone();
        out.perms[i + 1] = x.conjugate(&y.inverse())?;
        out.roles.swap(i, i + 1);
        Ok(out)
    }

    /// Moves the entry at `from` to `to` by a chain of Hurwitz moves,
    /// conjugating the entries it passes.
    pub fn braid_to(&self, from: usize, to: usize) -> Result<Self> {
        let len = self.perms.len();
        if from >= len {
            return Err(Error::IndexOutOfRange(from, len));
        }
        if to >= len {
            return Err(Error::IndexOutOfRange(to, len));
        }
        let mut t = self.clone();
        if from < to {
            for i in from..to {
                t = t.hurwitz_move(i)?;
            }
        } else {
            for i in (to..from).rev() {
                t = t.hurwitz_move_inverse(i)?;
            }
        }
        Ok(t)
    }

    /// Reorders entries so that `key` is non-decreasing over the index range
    /// `range`, using only Hurwitz moves (stable bubble sort).
    pub(crate) fn braid_sort_by_key<K: Ord>(
        &self,
        range: std::ops::Range<usize>,
        key: impl Fn(&Permutation, Role) -> K,
    ) -> Result<Self> {
        let mut t = self.clone();
        let (lo, hi) = (range.start, range.end);
        for end in (lo + 1..hi).rev() {
            for i in lo..end {
                let a = key(&t.perms[i], t.roles[i]);
                let b = key(&t.perms[i + 1], t.roles[i + 1]);
                if a > b {
                    t = t.hurwitz_move(i)?;
                }
            }
        }
        Ok(t)
    }

    pub(crate) fn with_roles(mut self, roles: Vec<Role>) -> Self {
        assert_eq!(roles.len(), self.perms.len());
        self.roles = roles;
        self
    }
}

impl fmt::Display for RealizationTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (p, r)) in self.perms.iter().zip(&self.roles).enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}={p}")?;
        }
        Ok(())
    }
}

/// Wire form: `{"degree": n, "perms": ["(1 2 3)", "id"], "roles": ["zero", "pole"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleJson {
    pub degree: usize,
    pub perms: Vec<String>,
    pub roles: Vec<String>,
}

impl From<&RealizationTuple> for TupleJson {
    fn from(t: &RealizationTuple) -> Self {
        Self {
            degree: t.degree,
            perms: t.perms.iter().map(ToString::to_string).collect(),
            roles: t.roles.iter().map(ToString::to_string).collect(),
        }
    }
}

impl TryFrom<TupleJson> for RealizationTuple {
    type Error = Error;

    fn try_from(j: TupleJson) -> Result<Self> {
        let perms = j
            .perms
            .iter()
            .map(|s| Permutation::parse(s, j.degree))
            .collect::<Result<Vec<_>>>()?;
        let roles = j
            .roles
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<_>>>()?;
        Self::new(perms, roles)
    }
}

impl Serialize for RealizationTuple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TupleJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RealizationTuple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = TupleJson::deserialize(d)?;
        Self::try_from(j).map_err(serde::de::Error::custom)
    }
}
