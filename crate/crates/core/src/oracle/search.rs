//! Exhaustive search for permutations of given cycle types whose product is
//! the identity and which act transitively.
//!
//! Types are ordered by decreasing `d - length`. The first permutation is
//! fixed to a class representative, the last one is determined by the
//! others, and the ones in between are enumerated class by class. Internal
//! nodes are pruned by an orbit-count bound and by the number of
//! transpositions the remaining permutations can still contribute. Subtrees
//! that failed are remembered by a conjugation invariant of the state
//! (partial product together with the orbit partition), so equivalent
//! states are not searched twice.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use crate::branch::{total_branching, BranchData, Partition};
use crate::error::{Error, Result};
use crate::perm::{Permutation, RealizationTuple, Role};

pub const MAX_DEGREE: usize = 16;

/// Largest conjugacy class the search will enumerate.
const MAX_CLASS: usize = 1 << 22;

/// Upper bound on remembered failed states per shard.
const MAX_MEMO: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// `None` means unlimited.
    pub max_nodes: Option<u64>,
    pub time_limit: Option<Duration>,
    pub shards: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_nodes: None,
            time_limit: None,
            shards: 1,
        }
    }
}

impl SearchBudget {
    pub fn exhaustive() -> Self {
        Self::default()
    }

    pub fn with_shards(shards: usize) -> Self {
        Self {
            shards,
            ..Self::default()
        }
    }

    pub fn is_exhaustive(&self) -> bool {
        self.max_nodes.is_none() && self.time_limit.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A witness, ordered like the input partitions with roles `branch-k`.
    Found(RealizationTuple),
    /// The search space was exhausted.
    NoneProven,
    /// The budget ran out first.
    Unknown,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub memo_hits: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub stats: SearchStats,
    /// Twice the genus implied by the types.
    pub genus_twice: i64,
}

impl SearchResult {
    pub fn witness(&self) -> Option<&RealizationTuple> {
        match &self.outcome {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn found(&self) -> bool {
        self.witness().is_some()
    }

    /// True unless the budget cut the search short.
    pub fn proven(&self) -> bool {
        self.outcome != SearchOutcome::Unknown
    }
}

type P = [u8; MAX_DEGREE];

#[derive(Clone, Copy)]
struct Uf {
    parent: [u8; MAX_DEGREE],
    blocks: u8,
}

impl Uf {
    fn new(d: usize) -> Self {
        let mut parent = [0; MAX_DEGREE];
        for (i, x) in parent.iter_mut().enumerate() {
            *x = i as u8;
        }
        Self {
            parent,
            blocks: d as u8,
        }
    }

    fn find(&self, mut x: u8) -> u8 {
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        x
    }

    fn union(&mut self, a: u8, b: u8) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
            self.blocks -= 1;
        }
    }

    fn absorb(&mut self, p: &P, d: usize) {
        for (x, &y) in p.iter().enumerate().take(d) {
            if y as usize != x {
                self.union(x as u8, y);
            }
        }
    }
}

/// Cycle-length counts: `c[len]` cycles of each length.
fn length_counts(p: &P, d: usize) -> [u8; MAX_DEGREE + 1] {
    let mut seen = [false; MAX_DEGREE];
    let mut c = [0u8; MAX_DEGREE + 1];
    for s in 0..d {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x] as usize;
            len += 1;
        }
        c[len] += 1;
    }
    c
}

fn counts_of(parts: &[usize]) -> [u8; MAX_DEGREE + 1] {
    let mut c = [0u8; MAX_DEGREE + 1];
    for &x in parts {
        c[x] += 1;
    }
    c
}

fn compose(q: &P, p: &P, d: usize) -> P {
    let mut r = [0u8; MAX_DEGREE];
    for x in 0..d {
        r[x] = q[p[x] as usize];
    }
    r
}

/// Every permutation of the given type, each once: the smallest unused point
/// opens a cycle, a length is chosen (longest first), and the rest of the
/// cycle runs through every arrangement of unused points in increasing
/// lexicographic order.
pub(crate) fn class_elements(parts: &[usize], d: usize) -> Vec<[u8; MAX_DEGREE]> {
    fn rec(
        d: usize,
        counts: &mut [u8; MAX_DEGREE + 1],
        used: &mut [bool; MAX_DEGREE],
        cur: &mut P,
        out: &mut Vec<P>,
    ) {
        let Some(start) = (0..d).find(|&x| !used[x]) else {
            out.push(*cur);
            return;
        };
        for len in (1..=d).rev() {
            if counts[len] == 0 {
                continue;
            }
            counts[len] -= 1;
            used[start] = true;
            let mut cyc = [0u8; MAX_DEGREE];
            cyc[0] = start as u8;
            arrange(d, counts, used, cur, out, &mut cyc, 1, len);
            used[start] = false;
            counts[len] += 1;
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn arrange(
        d: usize,
        counts: &mut [u8; MAX_DEGREE + 1],
        used: &mut [bool; MAX_DEGREE],
        cur: &mut P,
        out: &mut Vec<P>,
        cyc: &mut [u8; MAX_DEGREE],
        filled: usize,
        len: usize,
    ) {
        if filled == len {
            for i in 0..len {
                cur[cyc[i] as usize] = cyc[(i + 1) % len];
            }
            rec(d, counts, used, cur, out);
            return;
        }
        for x in cyc[0] as usize + 1..d {
            if used[x] {
                continue;
            }
            used[x] = true;
            cyc[filled] = x as u8;
            arrange(d, counts, used, cur, out, cyc, filled + 1, len);
            used[x] = false;
        }
    }

    let mut counts = counts_of(parts);
    let mut used = [false; MAX_DEGREE];
    let mut cur = [0u8; MAX_DEGREE];
    let mut out = Vec::new();
    rec(d, &mut counts, &mut used, &mut cur, &mut out);
    out
}

/// `d! / z_λ`.
pub(crate) fn class_size(parts: &[usize], d: usize) -> u128 {
    let mut z: u128 = 1;
    let counts = counts_of(parts);
    for (len, &c) in counts.iter().enumerate().skip(1) {
        for i in 1..=c as u128 {
            z *= len as u128 * i;
        }
    }
    (1..=d as u128).product::<u128>() / z
}

/// Cycles on consecutive points, longest first.
fn representative(parts: &[usize]) -> P {
    let mut p = [0u8; MAX_DEGREE];
    let mut start = 0;
    for &len in parts {
        for i in 0..len {
            p[start + i] = (start + (i + 1) % len) as u8;
        }
        start += len;
    }
    p
}

struct Shared {
    nodes: AtomicU64,
    best_shard: AtomicUsize,
    start: Instant,
    max_nodes: Option<u64>,
    time_limit: Option<Duration>,
}

enum Flow {
    Found,
    Exhausted,
    /// Budget ran out.
    OutOfBudget,
    /// A lower shard already has a witness.
    Superseded,
}

struct Shard<'a> {
    d: usize,
    shard: usize,
    range: (usize, usize),
    types: &'a [Vec<usize>],
    lists: &'a [Vec<P>],
    last_counts: [u8; MAX_DEGREE + 1],
    /// `rem[j]`: transpositions still available after level `j`.
    rem: Vec<usize>,
    stack: Vec<P>,
    memo: HashSet<Vec<u8>>,
    local_nodes: u64,
    nodes: u64,
    memo_hits: u64,
    shared: &'a Shared,
    witness: Option<Vec<P>>,
}

impl Shard<'_> {
    fn poll(&mut self) -> Option<Flow> {
        self.nodes += 1;
        self.local_nodes += 1;
        if self.local_nodes < 1024 {
            return None;
        }
        let total = self.shared.nodes.fetch_add(self.local_nodes, Ordering::Relaxed) + self.local_nodes;
        self.local_nodes = 0;
        if self.shared.best_shard.load(Ordering::Relaxed) < self.shard {
            return Some(Flow::Superseded);
        }
        if self.shared.max_nodes.is_some_and(|m| total > m) {
            return Some(Flow::OutOfBudget);
        }
        if self.shared.time_limit.is_some_and(|t| self.shared.start.elapsed() > t) {
            return Some(Flow::OutOfBudget);
        }
        None
    }

    fn key(&self, j: usize, q: &P, uf: &Uf) -> Vec<u8> {
        let d = self.d;
        let mut per_block: Vec<(u8, Vec<u8>)> = Vec::new();
        let mut seen = [false; MAX_DEGREE];
        for s in 0..d {
            if seen[s] {
                continue;
            }
            let mut len = 0u8;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = q[x] as usize;
                len += 1;
            }
            let root = uf.find(s as u8);
            match per_block.iter_mut().find(|(r, _)| *r == root) {
                Some((_, v)) => v.push(len),
                None => per_block.push((root, vec![len])),
            }
        }
        let mut blocks: Vec<Vec<u8>> = per_block
            .into_iter()
            .map(|(_, mut v)| {
                v.sort_unstable();
                v
            })
            .collect();
        blocks.sort_unstable();
        let mut key = vec![j as u8];
        for b in blocks {
            key.extend(b);
            key.push(0);
        }
        key
    }

    fn dfs(&mut self, j: usize, q: &P, uf: &Uf) -> Flow {
        let d = self.d;
        let k = self.types.len();
        let leaf = j == k - 2;
        let lists = self.lists;
        let list = &lists[j];
        let (lo, hi) = if j == 1 { self.range } else { (0, list.len()) };
        for p in &list[lo..hi] {
            if let Some(stop) = self.poll() {
                return stop;
            }
            let q2 = compose(q, p, d);
            let mut uf2 = *uf;
            uf2.absorb(p, d);
            if leaf {
                if length_counts(&q2, d) != self.last_counts {
                    continue;
                }
                uf2.absorb(&q2, d);
                if uf2.blocks == 1 {
                    let mut w = self.stack.clone();
                    w.push(*p);
                    let mut last = [0u8; MAX_DEGREE];
                    for x in 0..d {
                        last[q2[x] as usize] = x as u8;
                    }
                    w.push(last);
                    self.witness = Some(w);
                    return Flow::Found;
                }
                continue;
            }
            let rem = self.rem[j];
            if uf2.blocks as usize > rem + 1 {
                continue;
            }
            let moved = d - length_counts(&q2, d).iter().map(|&c| c as usize).sum::<usize>();
            if moved > rem {
                continue;
            }
            let key = self.key(j, &q2, &uf2);
            if self.memo.contains(&key) {
                self.memo_hits += 1;
                continue;
            }
            self.stack.push(*p);
            let flow = self.dfs(j + 1, &q2, &uf2);
            self.stack.pop();
            match flow {
                Flow::Exhausted => {
                    if self.memo.len() < MAX_MEMO {
                        self.memo.insert(key);
                    }
                }
                other => return other,
            }
        }
        Flow::Exhausted
    }
}

/// Looks for a tuple realizing `bd` on a surface of genus `target_genus`.
///
/// The genus is fixed by the types; a mismatch gives `NoneProven` without
/// searching. Trivial partitions become identity permutations. The witness
/// is the first one in the node order described in the module docs, and does
/// not depend on the number of shards.
pub fn search_tuples(bd: &BranchData, target_genus: i64, budget: &SearchBudget) -> Result<SearchResult> {
    let start = Instant::now();
    let d = bd.degree();
    if d > MAX_DEGREE {
        return Err(Error::Precondition(format!(
            "degree {d} exceeds the search limit {MAX_DEGREE}"
        )));
    }
    if bd.len() < 2 {
        return Err(Error::Precondition(format!("{bd} needs at least two partitions")));
    }
    let genus_twice = total_branching(bd) as i64 + 2 - 2 * d as i64;
    let done = |outcome, stats: SearchStats| SearchResult {
        outcome,
        stats: SearchStats {
            elapsed: start.elapsed(),
            ..stats
        },
        genus_twice,
    };
    if genus_twice != 2 * target_genus || target_genus < 0 {
        return Ok(done(SearchOutcome::NoneProven, SearchStats::default()));
    }

    let parts = bd.partitions();
    let mut order: Vec<usize> = (0..parts.len()).filter(|&i| !parts[i].is_trivial()).collect();
    order.sort_by(|&x, &y| {
        let (px, py) = (&parts[x], &parts[y]);
        px.len().cmp(&py.len()).then(py.cmp(px)).then(x.cmp(&y))
    });
    let k = order.len();
    if k == 0 {
        let outcome = if d == 1 {
            SearchOutcome::Found(assemble(bd, &order, &[])?)
        } else {
            SearchOutcome::NoneProven
        };
        return Ok(done(outcome, SearchStats::default()));
    }
    if k == 1 {
        return Ok(done(SearchOutcome::NoneProven, SearchStats::default()));
    }

    let types: Vec<Vec<usize>> = order.iter().map(|&i| parts[i].parts().to_vec()).collect();
    for t in &types[1..k - 1] {
        if class_size(t, d) > MAX_CLASS as u128 {
            return Err(Error::Precondition(format!(
                "class of type {t:?} is too large to enumerate"
            )));
        }
    }
    let p0 = representative(&types[0]);
    let last_counts = counts_of(&types[k - 1]);

    if k == 2 {
        let mut uf = Uf::new(d);
        uf.absorb(&p0, d);
        let outcome = if length_counts(&p0, d) == last_counts && uf.blocks == 1 {
            let mut inv = [0u8; MAX_DEGREE];
            for x in 0..d {
                inv[p0[x] as usize] = x as u8;
            }
            SearchOutcome::Found(assemble(bd, &order, &[p0, inv])?)
        } else {
            SearchOutcome::NoneProven
        };
        return Ok(done(outcome, SearchStats::default()));
    }

    let mut lists: Vec<Vec<P>> = vec![Vec::new(); k];
    for j in 1..k - 1 {
        lists[j] = class_elements(&types[j], d);
    }
    let mut rem = vec![0; k];
    for j in 0..k {
        rem[j] = types[j + 1..].iter().map(|t| d - t.len()).sum();
    }
    let mut uf0 = Uf::new(d);
    uf0.absorb(&p0, d);

    let shared = Shared {
        nodes: AtomicU64::new(0),
        best_shard: AtomicUsize::new(usize::MAX),
        start,
        max_nodes: budget.max_nodes,
        time_limit: budget.time_limit,
    };
    let n1 = lists[1].len();
    let shards = budget.shards.clamp(1, n1.max(1));
    let run = |s: usize| {
        let mut sh = Shard {
            d,
            shard: s,
            range: (s * n1 / shards, (s + 1) * n1 / shards),
            types: &types,
            lists: &lists,
            last_counts,
            rem: rem.clone(),
            stack: vec![p0],
            memo: HashSet::new(),
            local_nodes: 0,
            nodes: 0,
            memo_hits: 0,
            shared: &shared,
            witness: None,
        };
        let flow = sh.dfs(1, &p0, &uf0);
        if matches!(flow, Flow::Found) {
            shared.best_shard.fetch_min(s, Ordering::Relaxed);
        }
        (flow, sh.witness, sh.nodes, sh.memo_hits)
    };
    let results: Vec<(Flow, Option<Vec<P>>, u64, u64)> = if shards == 1 {
        vec![run(0)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..shards).map(|s| scope.spawn(move || run(s))).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("search shard panicked"))
                .collect()
        })
    };

    let stats = SearchStats {
        nodes: results.iter().map(|r| r.2).sum(),
        memo_hits: results.iter().map(|r| r.3).sum(),
        elapsed: Duration::ZERO,
    };
    let mut out_of_budget = false;
    for (flow, witness, _, _) in results {
        match flow {
            Flow::Found => {
                let w = witness.expect("found implies witness");
                return Ok(done(SearchOutcome::Found(assemble(bd, &order, &w)?), stats));
            }
            Flow::OutOfBudget => out_of_budget = true,
            Flow::Exhausted | Flow::Superseded => {}
        }
    }
    let outcome = if out_of_budget {
        SearchOutcome::Unknown
    } else {
        SearchOutcome::NoneProven
    };
    Ok(done(outcome, stats))
}

/// Puts the witness back in input order: non-trivial entries are sorted by
/// Hurwitz moves, identities fill the trivial positions.
fn assemble(bd: &BranchData, order: &[usize], perms: &[P]) -> Result<RealizationTuple> {
    let d = bd.degree();
    let to_perm = |p: &P| Permutation::from_map(p[..d].iter().map(|&x| x as usize).collect());
    let mut full: Vec<Permutation> = Vec::with_capacity(bd.len());
    if perms.len() >= 2 {
        let sorted = RealizationTuple::new(
            perms.iter().map(to_perm).collect::<Result<Vec<_>>>()?,
            order.iter().map(|&i| Role::Branch(i + 1)).collect(),
        )?;
        let len = sorted.len();
        let sorted = sorted.braid_sort_by_key(0..len, |_, r| match r {
            Role::Branch(i) => i,
            _ => 0,
        })?;
        let (ps, roles) = sorted.into_parts();
        let mut slot: Vec<Option<Permutation>> = vec![None; bd.len()];
        for (p, r) in ps.into_iter().zip(roles) {
            if let Role::Branch(i) = r {
                slot[i - 1] = Some(p);
            }
        }
        for s in slot {
            full.push(s.unwrap_or_else(|| Permutation::identity(d)));
        }
    } else {
        full = vec![Permutation::identity(d); bd.len()];
    }
    RealizationTuple::unlabeled(full)
}

/// Partitions of `n`, each non-increasing, in decreasing lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    partitions_bounded(n, n)
}

/// Partitions of `n` with every part at most `max_part`.
pub fn partitions_bounded(n: usize, max_part: usize) -> Vec<Partition> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition::new(cur.clone()).expect("positive parts"));
            return;
        }
        for x in (1..=max.min(n)).rev() {
            cur.push(x);
            rec(n - x, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, max_part, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::verify_realization;

    fn bd(d: usize, parts: &[&[usize]]) -> BranchData {
        BranchData::from_parts(d, parts).unwrap()
    }

    fn search(b: &BranchData) -> SearchResult {
        let g = (total_branching(b) as i64 + 2 - 2 * b.degree() as i64) / 2;
        search_tuples(b, g, &SearchBudget::exhaustive()).unwrap()
    }

    #[test]
    fn class_enumeration_matches_class_size() {
        for d in 1..=7 {
            for t in partitions_of(d) {
                let els = class_elements(t.parts(), d);
                assert_eq!(els.len() as u128, class_size(t.parts(), d), "{t}");
                let set: HashSet<_> = els.iter().collect();
                assert_eq!(set.len(), els.len());
                for p in &els {
                    assert_eq!(length_counts(p, d), counts_of(t.parts()));
                }
            }
        }
    }

    #[test]
    fn degree_four_exception() {
        let r = search(&bd(4, &[&[2, 2], &[2, 2], &[3, 1]]));
        assert_eq!(r.outcome, SearchOutcome::NoneProven);
    }

    #[test]
    fn two_transpositions() {
        let b = bd(2, &[&[2], &[2]]);
        let r = search(&b);
        let w = r.witness().unwrap();
        let shown: Vec<String> = w.perms().iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["(1 2)", "(1 2)"]);
    }

    #[test]
    fn primitive_triple() {
        let b = bd(4, &[&[1, 3], &[2, 2], &[3, 1]]);
        let r = search(&b);
        assert!(verify_realization(&b, r.witness().unwrap()).ok());
    }

    #[test]
    fn genus_gate() {
        let b = bd(4, &[&[1, 3], &[2, 2], &[3, 1]]);
        let r = search_tuples(&b, 1, &SearchBudget::exhaustive()).unwrap();
        assert_eq!(r.outcome, SearchOutcome::NoneProven);
        assert_eq!(r.stats.nodes, 0);
        // odd branching never matches an integer genus
        let b = bd(3, &[&[2, 1], &[3]]);
        assert_eq!(search_tuples(&b, 0, &SearchBudget::exhaustive()).unwrap().outcome, SearchOutcome::NoneProven);
    }

    #[test]
    fn trivial_partitions_become_identities() {
        let b = bd(3, &[&[1, 1, 1], &[3], &[2, 1], &[2, 1]]);
        let r = search(&b);
        let w = r.witness().unwrap();
        assert!(w.perms()[0].is_identity());
        assert!(verify_realization(&b, w).ok());
    }

    #[test]
    fn budget_gives_unknown() {
        // an exception whose middle class has more than a thousand elements
        let b = bd(8, &[&[4, 4], &[2, 2, 2, 2], &[5, 1, 1, 1]]);
        assert_eq!(search(&b).outcome, SearchOutcome::NoneProven);
        let budget = SearchBudget {
            max_nodes: Some(10),
            ..SearchBudget::default()
        };
        let r = search_tuples(&b, 0, &budget).unwrap();
        assert_eq!(r.outcome, SearchOutcome::Unknown);
        assert!(!r.proven());
    }

    #[test]
    fn shards_agree_on_first_witness() {
        let b = bd(6, &[&[3, 3], &[2, 2, 2], &[2, 1, 1, 1, 1], &[3, 1, 1, 1], &[2, 1, 1, 1, 1]]);
        let one = search_tuples(&b, 0, &SearchBudget::with_shards(1)).unwrap();
        let eight = search_tuples(&b, 0, &SearchBudget::with_shards(8)).unwrap();
        assert_eq!(one.outcome, eight.outcome);
    }

    #[test]
    fn partitions_count() {
        let counts: Vec<usize> = (1..=10).map(|n| partitions_of(n).len()).collect();
        assert_eq!(counts, [1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert_eq!(partitions_of(3).iter().map(|p| p.to_string()).collect::<Vec<_>>(), ["(3)", "(2,1)", "(1,1,1)"]);
    }
}
