//! Brute-force search, exception census and the positive-genus probe.

mod search;

pub use search::{
    partitions_bounded, partitions_of, search_tuples, SearchBudget, SearchOutcome, SearchResult,
    SearchStats, MAX_DEGREE,
};

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::branch::{total_branching, BranchData, Partition};
use crate::decide::{decide, decide_boccara, decide_main};
use crate::error::{Error, Result};
use crate::perm::RealizationTuple;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormFilter {
    /// `a, b` and hooks with `Σ m = p + q - 2`.
    MainForm,
    /// Three partitions, one of them a hook, even total branching.
    BoccaraForm,
    /// Every multiset of non-trivial partitions with even branching and
    /// cover genus between 0 and the census bound.
    AllCompatible,
}

impl FromStr for FormFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "main-form" => Ok(Self::MainForm),
            "boccara-form" => Ok(Self::BoccaraForm),
            "all-compatible" => Ok(Self::AllCompatible),
            _ => Err(Error::Parse(format!("unknown form filter {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CensusVerdict {
    Realizable,
    Exception,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusEntry {
    pub branch_data: BranchData,
    pub genus: i64,
    pub verdict: CensusVerdict,
    pub witness: Option<RealizationTuple>,
    pub proven: bool,
    /// The closed-form answer, where one applies.
    pub decided: Option<bool>,
}

impl CensusEntry {
    /// Closed form and search agree (vacuously when either is missing).
    pub fn agrees(&self) -> bool {
        !matches!(
            (self.decided, self.verdict),
            (Some(true), CensusVerdict::Exception) | (Some(false), CensusVerdict::Realizable)
        )
    }
}

#[derive(Clone, Debug)]
pub struct CensusOptions {
    /// Only used by [`FormFilter::AllCompatible`].
    pub max_genus: usize,
    /// Per-collection search budget; `shards` is used as the number of
    /// collections searched in parallel.
    pub budget: SearchBudget,
}

impl Default for CensusOptions {
    fn default() -> Self {
        Self {
            max_genus: 0,
            budget: SearchBudget::exhaustive(),
        }
    }
}

fn dedup_sorted(v: Vec<BranchData>) -> Vec<BranchData> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for bd in v {
        let key = bd.canonical_partitions();
        if seen.insert(key) {
            out.push(bd.canonical());
        }
    }
    out.sort_by_key(|b| b.canonical_partitions());
    out
}

/// Main-form collections of degree `d`, extra hooks for `Σ m = p + q - 2 + 2g`.
fn form_collections(d: usize, g: usize) -> Vec<BranchData> {
    let parts = partitions_of(d);
    let mut out = Vec::new();
    for (i, a) in parts.iter().enumerate() {
        for b in &parts[i..] {
            let m = a.len() + b.len() - 2 + 2 * g;
            if m == 0 || d < 2 {
                continue;
            }
            for lam in partitions_bounded(m, d - 1) {
                let mut ps = vec![a.clone(), b.clone()];
                ps.extend(
                    lam.parts()
                        .iter()
                        .map(|&m| Partition::hook(m, d).expect("m < d")),
                );
                out.push(BranchData::new(d, ps).expect("partitions of d"));
            }
        }
    }
    dedup_sorted(out)
}

pub fn main_form_collections(d: usize) -> Vec<BranchData> {
    form_collections(d, 0)
}

pub fn boccara_collections(d: usize) -> Vec<BranchData> {
    let parts = partitions_of(d);
    let mut out = Vec::new();
    for (i, a) in parts.iter().enumerate() {
        for b in &parts[i..] {
            for m in 1..d {
                let bd = BranchData::new(d, vec![a.clone(), b.clone(), Partition::hook(m, d).expect("m < d")])
                    .expect("partitions of d");
                if bd.is_compatible() {
                    out.push(bd);
                }
            }
        }
    }
    dedup_sorted(out)
}

/// Multisets of at least two non-trivial partitions of `d` with even total
/// branching `v` and `2d - 2 <= v <= 2d - 2 + 2 max_genus`.
pub fn compatible_collections(d: usize, max_genus: usize) -> Vec<BranchData> {
    if d < 2 {
        return Vec::new();
    }
    let parts: Vec<Partition> = partitions_of(d).into_iter().filter(|p| !p.is_trivial()).collect();
    let lo = 2 * d - 2;
    let hi = lo + 2 * max_genus;
    let mut out = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        d: usize,
        parts: &[Partition],
        from: usize,
        v: usize,
        lo: usize,
        hi: usize,
        cur: &mut Vec<Partition>,
        out: &mut Vec<BranchData>,
    ) {
        if cur.len() >= 2 && v >= lo && v.is_multiple_of(2) {
            out.push(BranchData::new(d, cur.clone()).expect("partitions of d"));
        }
        for i in from..parts.len() {
            let w = d - parts[i].len();
            if v + w > hi {
                continue;
            }
            cur.push(parts[i].clone());
            rec(d, parts, i, v + w, lo, hi, cur, out);
            cur.pop();
        }
    }
    rec(d, &parts, 0, 0, lo, hi, &mut Vec::new(), &mut out);
    dedup_sorted(out)
}

/// The collections a census of degree `d` covers, in census order.
pub fn census_collections(d: usize, filter: FormFilter, max_genus: usize) -> Vec<BranchData> {
    match filter {
        FormFilter::MainForm => main_form_collections(d),
        FormFilter::BoccaraForm => boccara_collections(d),
        FormFilter::AllCompatible => compatible_collections(d, max_genus),
    }
}

fn genus_of(bd: &BranchData) -> i64 {
    (total_branching(bd) as i64 + 2 - 2 * bd.degree() as i64).div_euclid(2)
}

/// Searches one collection at the genus its types force.
pub fn census_entry(bd: &BranchData, filter: FormFilter, budget: &SearchBudget) -> Result<CensusEntry> {
    let genus = genus_of(bd);
    let r = search_tuples(bd, genus, budget)?;
    let decided = match filter {
        FormFilter::MainForm => Some(decide_main(bd)?.realizable),
        FormFilter::BoccaraForm => Some(decide_boccara(bd)?.realizable),
        FormFilter::AllCompatible => decide(bd).ok().map(|v| v.realizable),
    };
    let (verdict, witness) = match r.outcome {
        SearchOutcome::Found(t) => (CensusVerdict::Realizable, Some(t)),
        SearchOutcome::NoneProven => (CensusVerdict::Exception, None),
        SearchOutcome::Unknown => (CensusVerdict::Unknown, None),
    };
    Ok(CensusEntry {
        branch_data: bd.clone(),
        genus,
        verdict,
        witness,
        proven: verdict != CensusVerdict::Unknown,
        decided,
    })
}

/// Runs `f` over `items` on up to `jobs` threads, keeping input order.
fn par_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(f).collect();
    }
    let next = Mutex::new(0usize);
    let slots: Vec<Mutex<Option<R>>> = items.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = {
                    let mut n = next.lock().expect("index lock");
                    let i = *n;
                    *n += 1;
                    i
                };
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                *slots[i].lock().expect("slot lock") = Some(r);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| m.into_inner().expect("slot lock").expect("every slot filled"))
        .collect()
}

/// Every collection of degree `2..=d_max` passing `filter`, each with a
/// search verdict, ordered by degree and then lexicographically.
pub fn census(d_max: usize, filter: FormFilter, opts: &CensusOptions) -> Result<Vec<CensusEntry>> {
    let all: Vec<BranchData> = (2..=d_max)
        .flat_map(|d| census_collections(d, filter, opts.max_genus))
        .collect();
    let single = SearchBudget {
        shards: 1,
        ..opts.budget.clone()
    };
    par_map(&all, opts.budget.shards, |bd| census_entry(bd, filter, &single))
        .into_iter()
        .collect()
}

/// Human-readable table: one row per degree, then the exceptions.
pub fn census_summary(entries: &[CensusEntry]) -> String {
    let mut out = String::new();
    let degrees: BTreeSet<usize> = entries.iter().map(|e| e.branch_data.degree()).collect();
    let _ = writeln!(out, "{:>3} {:>8} {:>10} {:>10} {:>8} {:>9}", "d", "total", "realizable", "exceptions", "unknown", "disagree");
    for d in degrees {
        let row: Vec<&CensusEntry> = entries.iter().filter(|e| e.branch_data.degree() == d).collect();
        let count = |v: CensusVerdict| row.iter().filter(|e| e.verdict == v).count();
        let _ = writeln!(
            out,
            "{:>3} {:>8} {:>10} {:>10} {:>8} {:>9}",
            d,
            row.len(),
            count(CensusVerdict::Realizable),
            count(CensusVerdict::Exception),
            count(CensusVerdict::Unknown),
            row.iter().filter(|e| !e.agrees()).count()
        );
    }
    let exceptions: Vec<&CensusEntry> = entries.iter().filter(|e| e.verdict == CensusVerdict::Exception).collect();
    if !exceptions.is_empty() {
        let _ = writeln!(out, "exceptions:");
        for e in exceptions {
            let _ = writeln!(out, "  {}", e.branch_data);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub d_max: usize,
    pub genus: usize,
    pub probed: usize,
    pub skipped_incompatible: usize,
    pub realized: usize,
    /// Collections with no realization at the target genus.
    pub counterexamples: Vec<BranchData>,
    /// Collections the budget did not settle.
    pub unknown: Vec<BranchData>,
}

impl ProbeReport {
    pub fn clean(&self) -> bool {
        self.counterexamples.is_empty() && self.unknown.is_empty()
    }
}

/// Main-form-shaped collections with `Σ m = p + q - 2 + 2g` and every hook
/// fitting in the degree, searched exhaustively at genus `g`.
pub fn probe_conjecture(d_max: usize, g: usize, budget: &SearchBudget) -> Result<ProbeReport> {
    if g == 0 {
        return Err(Error::Precondition("the probe is for positive genus".into()));
    }
    let all: Vec<BranchData> = (2..=d_max).flat_map(|d| form_collections(d, g)).collect();
    let (compatible, odd): (Vec<_>, Vec<_>) = all.into_iter().partition(|b| b.is_compatible());
    let single = SearchBudget {
        shards: 1,
        ..budget.clone()
    };
    let results = par_map(&compatible, budget.shards, |bd| search_tuples(bd, g as i64, &single));
    let mut report = ProbeReport {
        d_max,
        genus: g,
        probed: compatible.len(),
        skipped_incompatible: odd.len(),
        realized: 0,
        counterexamples: Vec::new(),
        unknown: Vec::new(),
    };
    for (bd, r) in compatible.into_iter().zip(results) {
        match r?.outcome {
            SearchOutcome::Found(_) => report.realized += 1,
            SearchOutcome::NoneProven => report.counterexamples.push(bd),
            SearchOutcome::Unknown => report.unknown.push(bd),
        }
    }
    Ok(report)
}
