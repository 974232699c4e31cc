//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hurwitz::branch::{cover_genus, MainForm};
use hurwitz::decide::{decide, decide_boccara, decide_main};
use hurwitz::oracle::{
    census, main_form_collections, probe_conjecture, search_tuples, CensusOptions, CensusVerdict,
    FormFilter, SearchBudget,
};
use hurwitz::perm::{product, Permutation, RealizationTuple, Role};
use hurwitz::realize::{belyi_branch_data, belyi_lift, realize, realize_form, realize_ones, Outcome};
use hurwitz::{verify_realization, BranchData, Partition};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn shards() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get()).min(8)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bd(d: usize, parts: &[&[usize]]) -> BranchData {
    BranchData::from_parts(d, parts).unwrap()
}

fn degree_four_exception() -> Check {
    let start = Instant::now();
    let exception = bd(4, &[&[2, 2], &[2, 2], &[3, 1]]);
    let v = decide(&exception).map_err(|e| e.to_string())?;
    ensure(!v.realizable, || "decide calls the exception realizable".into())?;
    let r = search_tuples(&exception, 0, &SearchBudget::exhaustive()).map_err(|e| e.to_string())?;
    ensure(r.proven() && !r.found(), || "search does not prove the exception".into())?;

    let mut realized = 0;
    for data in main_form_collections(4) {
        if data == exception {
            continue;
        }
        match realize(&data).map_err(|e| format!("{data}: {e}"))? {
            Outcome::Realized(w) => {
                ensure(verify_realization(&data, &w.tuple).ok(), || format!("{data}: witness fails"))?;
                realized += 1;
            }
            Outcome::NotRealizable(_) => return Err(format!("{data} reported not realizable")),
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(1), || format!("took {took:?}"))?;
    Ok(format!("exception proven, {realized} other collections realized, {took:.2?}"))
}

fn main_form_agreement() -> Check {
    let opts = CensusOptions {
        budget: SearchBudget::with_shards(shards()),
        ..CensusOptions::default()
    };
    let start = Instant::now();
    let entries = census(8, FormFilter::MainForm, &opts).map_err(|e| e.to_string())?;
    let entries: Vec<_> = entries.into_iter().filter(|e| e.branch_data.degree() >= 3).collect();
    let mut exceptions = 0;
    for e in &entries {
        let data = &e.branch_data;
        ensure(e.proven, || format!("{data} left unknown"))?;
        let decided = decide_main(data).map_err(|err| err.to_string())?.realizable;
        let found = e.verdict == CensusVerdict::Realizable;
        ensure(decided == found, || format!("{data}: decide {decided}, search {found}"))?;
        match realize(data).map_err(|err| format!("{data}: {err}"))? {
            Outcome::Realized(w) => {
                ensure(found, || format!("{data}: constructed but the search found nothing"))?;
                ensure(verify_realization(data, &w.tuple).ok(), || format!("{data}: witness fails"))?;
            }
            Outcome::NotRealizable(_) => {
                ensure(!found, || format!("{data}: search found a tuple, constructor refused"))?;
                exceptions += 1;
            }
        }
    }
    Ok(format!(
        "{} collections, {exceptions} exceptions, 0 discrepancies, {:.2?}",
        entries.len(),
        start.elapsed()
    ))
}

fn boccara_agreement() -> Check {
    let opts = CensusOptions {
        budget: SearchBudget::with_shards(shards()),
        ..CensusOptions::default()
    };
    let entries = census(8, FormFilter::BoccaraForm, &opts).map_err(|e| e.to_string())?;
    let (mut deficient, mut even, mut below) = ([0usize; 2], [0usize; 2], 0);
    for e in &entries {
        let data = &e.branch_data;
        ensure(data.is_compatible(), || format!("{data} has odd branching"))?;
        ensure(e.proven, || format!("{data} left unknown"))?;
        let decided = decide_boccara(data).map_err(|err| err.to_string())?.realizable;
        let found = e.verdict == CensusVerdict::Realizable;
        ensure(decided == found, || format!("{data}: decide {decided}, search {found}"))?;
        let (d, v) = (data.degree(), data.total_branching());
        let slot = usize::from(found);
        if v == 2 * d - 2 {
            deficient[slot] += 1;
        } else if v >= 2 * d {
            even[slot] += 1;
        } else {
            below += 1;
        }
    }
    ensure(even[1] > 0 && deficient[0] > 0 && deficient[1] > 0, || {
        format!("bullets not both exercised: v>=2d {even:?}, v=2d-2 {deficient:?}")
    })?;
    ensure(even[0] == 0, || "an even-branching collection above 2d failed".into())?;
    Ok(format!(
        "{} collections, 0 discrepancies; v>=2d: {} realizable; v=2d-2: {} realizable, {} not; {below} below 2d-2",
        entries.len(),
        even[1],
        deficient[1],
        deficient[0]
    ))
}

fn random_partition(rng: &mut ChaCha8Rng, d: usize) -> Partition {
    let mut rest = d;
    let mut parts = Vec::new();
    while rest > 0 {
        let p = rng.gen_range(1..=rest);
        parts.push(p);
        rest -= p;
    }
    Partition::new(parts).unwrap()
}

/// A main form of degree at most 30 with at most five hooks that passes the
/// gcd criterion.
fn random_instance(rng: &mut ChaCha8Rng) -> MainForm {
    loop {
        let d = rng.gen_range(2..=30);
        let a = random_partition(rng, d);
        let b = random_partition(rng, d);
        let m = a.len() + b.len() - 2;
        if m == 0 || m > 5 * (d - 1) {
            continue;
        }
        let lo = m.div_ceil(d - 1).max(1);
        let l = rng.gen_range(lo..=m.min(5));
        let mut hooks = vec![1; l];
        let mut extra = m - l;
        while extra > 0 {
            let k = rng.gen_range(0..l);
            if hooks[k] < d - 1 {
                hooks[k] += 1;
                extra -= 1;
            }
        }
        let form = MainForm::new(a, b, hooks).unwrap();
        if form.criterion_holds() {
            return form;
        }
    }
}

fn constructor_soundness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut slowest = Duration::ZERO;
    let mut lifted = 0;
    for _ in 0..1000 {
        let form = random_instance(&mut rng);
        let mut parts = form.to_branch_data().partitions().to_vec();
        parts.shuffle(&mut rng);
        let data = BranchData::new(form.degree, parts).unwrap();
        let start = Instant::now();
        let outcome = realize(&data).map_err(|e| format!("{data}: {e}"))?;
        let took = start.elapsed();
        let Outcome::Realized(w) = outcome else {
            return Err(format!("{data} reported not realizable"));
        };
        let report = verify_realization(&data, &w.tuple);
        ensure(report.ok() && report.genus() == Some(0), || format!("{data}: {report:?}"))?;
        ensure(took < Duration::from_millis(50), || format!("{data} took {took:?}"))?;
        slowest = slowest.max(took);
        lifted += usize::from(w.lift_factor > 1);
    }
    Ok(format!("1000/1000 verified, {lifted} via a power lift, slowest {slowest:.2?}"))
}

/// `(x_1 .. x_k)` on `n` points from 1-based labels, built by hand.
fn cycle_1(n: usize, labels: &[usize]) -> Vec<usize> {
    let mut map: Vec<usize> = (0..n).collect();
    for (k, &x) in labels.iter().enumerate() {
        map[x - 1] = labels[(k + 1) % labels.len()] - 1;
    }
    map
}

/// `p q`, applying `q` first.
fn times(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (x, &y) in p.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

fn explicit_goldens() -> Check {
    let (mut case_one, mut case_two) = (0, 0);
    for big_d in 1..=6usize {
        let n = big_d + 1;
        let sigma: Vec<usize> = (1..=n).collect();
        let got = realize_ones(big_d, &[big_d, big_d]).map_err(|e| e.to_string())?;
        let want1 = cycle_1(n, &sigma);
        ensure(got[0].as_slice() == want1, || format!("D={big_d}: sigma_1 {}", got[0]))?;
        ensure(got[1].as_slice() == inverse(&want1), || format!("D={big_d}: sigma_2 {}", got[1]))?;
        case_one += 1;

        for m1 in 1..=big_d {
            for m2 in 1..=big_d {
                let Some(m3) = (2 * big_d).checked_sub(m1 + m2) else { continue };
                if m3 == 0 || m3 > big_d {
                    continue;
                }
                let got = realize_ones(big_d, &[m1, m2, m3]).map_err(|e| e.to_string())?;
                let s1 = cycle_1(n, &(1..=m1 + 1).collect::<Vec<_>>());
                let mut c2 = vec![1];
                c2.extend((0..m1 + m2 - big_d).map(|i| m1 + 1 - i));
                c2.extend(m1 + 2..=big_d + 1);
                let s2 = cycle_1(n, &c2);
                let mut shown: Vec<usize> = (m1 + 2..=big_d + 1).collect();
                if m3 < big_d {
                    shown.extend(2..=m1 + m3 - big_d + 2);
                } else {
                    shown.extend(2..=m1 + 1);
                    shown.push(1);
                }
                let shown = cycle_1(n, &shown);
                let tag = format!("D={big_d} ({m1},{m2},{m3})");
                ensure(got[0].as_slice() == s1, || format!("{tag}: sigma_1 {}", got[0]))?;
                ensure(got[1].as_slice() == s2, || format!("{tag}: sigma_2 {}", got[1]))?;
                ensure(times(&s1, &s2) == shown, || format!("{tag}: displayed product differs"))?;
                let prod = times(got[0].as_slice(), got[1].as_slice());
                ensure(prod == shown, || format!("{tag}: sigma_1 sigma_2 differs"))?;
                ensure(got[2].as_slice() == inverse(&shown), || format!("{tag}: sigma_3 {}", got[2]))?;
                case_two += 1;
            }
        }
    }
    Ok(format!("{case_one} two-cycle cases exact, {case_two} three-cycle products match"))
}

const BELYI_SUITE: [(&[usize], &[usize], &[usize]); 20] = [
    (&[3], &[1, 1, 1], &[1, 1]),
    (&[3, 1], &[2, 2], &[1, 1]),
    (&[4], &[2, 1, 1], &[1, 1]),
    (&[2, 2], &[1, 1, 1, 1], &[2, 2]),
    (&[2, 2], &[1, 1, 1, 1], &[1, 1, 1, 1]),
    (&[5], &[1, 1, 1, 1, 1], &[4]),
    (&[5], &[1, 1, 1, 1, 1], &[1, 1, 1, 1]),
    (&[4, 2], &[2, 2, 2], &[2, 1]),
    (&[3, 3], &[2, 2, 2], &[1, 1, 1]),
    (&[6], &[3, 2, 1], &[1, 1]),
    (&[4, 2, 1], &[5, 2], &[3]),
    (&[4, 2, 1], &[5, 2], &[1, 1, 1]),
    (&[4, 4], &[2, 2, 2, 2], &[2, 2]),
    (&[6, 2], &[4, 4], &[1, 1]),
    (&[3, 3, 3], &[9], &[1, 1]),
    (&[5, 5], &[2, 2, 2, 2, 2], &[2, 2, 1]),
    (&[4, 4, 2], &[6, 4], &[2, 1]),
    (&[6, 6], &[4, 4, 4], &[1, 1, 1]),
    (&[3, 3, 3, 3], &[6, 6], &[1, 1, 1, 1]),
    (&[5, 4, 2], &[11], &[1, 1]),
];

fn belyi_suite() -> Check {
    let mut max_degree = 0;
    for (a, b, hooks) in BELYI_SUITE {
        let form = MainForm::new(Partition::new(a.to_vec()).unwrap(), Partition::new(b.to_vec()).unwrap(), hooks.to_vec())
            .map_err(|e| e.to_string())?;
        let (d, r) = (form.degree, form.l());
        let tag = format!("{}", form.to_branch_data());
        ensure(form.criterion_holds() && r <= 4 && d <= 12, || format!("{tag} is not a valid suite entry"))?;
        let (t, _, _) = realize_form(&form).map_err(|e| e.to_string())?;
        let lifted = belyi_lift(&t, r).map_err(|e| e.to_string())?;
        let target = belyi_branch_data(&form).map_err(|e| e.to_string())?;
        ensure(lifted.len() == 3 && lifted.degree() == r * d, || format!("{tag}: shape {lifted}"))?;
        let type_at = |role: Role| -> Option<Partition> {
            lifted.position(role).map(|i| lifted.perms()[i].cycle_type().0)
        };
        let merged_role = if r == 1 { Role::Extra(1) } else { Role::MergedExtra };
        let mut merged: Vec<usize> = hooks.iter().map(|m| m + 1).collect();
        merged.resize(merged.len() + r * d - hooks.iter().map(|m| m + 1).sum::<usize>(), 1);
        ensure(type_at(Role::Zero) == Some(form.a.scaled(r)), || format!("{tag}: zero type"))?;
        ensure(type_at(Role::Pole) == Some(form.b.scaled(r)), || format!("{tag}: pole type"))?;
        ensure(type_at(merged_role) == Partition::new(merged).ok(), || format!("{tag}: merged type"))?;
        ensure(lifted.product_is_identity() && lifted.is_transitive(), || format!("{tag}: {lifted}"))?;
        ensure(verify_realization(&target, &lifted).ok(), || format!("{tag}: verifier"))?;
        ensure(cover_genus(&target, 0).twice() == 0, || format!("{tag}: genus"))?;
        ensure(target.total_branching() == 2 * d * r - 2, || format!("{tag}: total branching"))?;
        max_degree = max_degree.max(r * d);
    }
    Ok(format!("{} lifts verified, largest lifted degree {max_degree}", BELYI_SUITE.len()))
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|m| Permutation::from_map(m).unwrap())
}

fn perms(k: usize) -> impl Strategy<Value = Vec<Permutation>> {
    (1usize..=12).prop_flat_map(move |n| prop::collection::vec(perm_strategy(n), k))
}

fn sorted_types(t: &RealizationTuple) -> Vec<Partition> {
    let mut v: Vec<Partition> = t.cycle_types().into_iter().map(|c| c.0).collect();
    v.sort();
    v
}

fn property_suites() -> Check {
    const CASES: u32 = 10_000;
    let runner = || TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });

    runner()
        .run(&perms(3), |ps| {
            let (p, q, r) = (&ps[0], &ps[1], &ps[2]);
            let left = p.compose(&q.compose(r).unwrap()).unwrap();
            let right = p.compose(q).unwrap().compose(r).unwrap();
            prop_assert_eq!(&left, &right);
            let direct = times(p.as_slice(), &times(q.as_slice(), r.as_slice()));
            prop_assert_eq!(left.as_slice(), direct.as_slice());
            Ok(())
        })
        .map_err(|e| format!("associativity: {e}"))?;

    runner()
        .run(&perms(2), |ps| {
            let (p, g) = (&ps[0], &ps[1]);
            let c = p.conjugate(g).unwrap();
            prop_assert_eq!(c.cycle_type(), p.cycle_type());
            let direct = times(&times(g.as_slice(), p.as_slice()), &inverse(g.as_slice()));
            prop_assert_eq!(c.as_slice(), direct.as_slice());
            Ok(())
        })
        .map_err(|e| format!("conjugation: {e}"))?;

    let tuples = (1usize..=10, 1usize..=5, 0usize..5)
        .prop_flat_map(|(n, k, i)| (prop::collection::vec(perm_strategy(n), k), Just(i)));
    runner()
        .run(&tuples, |(mut ps, i)| {
            let p = product(&ps).unwrap();
            ps.push(p.inverse());
            let t = RealizationTuple::unlabeled(ps).unwrap();
            let i = i % (t.len() - 1);
            for moved in [t.hurwitz_move(i).unwrap(), t.hurwitz_move_inverse(i).unwrap()] {
                prop_assert!(moved.product_is_identity());
                prop_assert_eq!(sorted_types(&moved), sorted_types(&t));
                prop_assert_eq!(moved.is_transitive(), t.is_transitive());
            }
            Ok(())
        })
        .map_err(|e| format!("Hurwitz moves: {e}"))?;

    Ok(format!("associativity, conjugation and Hurwitz moves at {CASES} cases each"))
}

fn genus_one_probe() -> Check {
    let report = probe_conjecture(5, 1, &SearchBudget::with_shards(shards())).map_err(|e| e.to_string())?;
    for c in &report.counterexamples {
        println!("  COUNTEREXAMPLE (needs review): {c}");
    }
    for u in &report.unknown {
        println!("  UNSETTLED: {u}");
    }
    ensure(report.clean(), || {
        format!("{} counterexamples, {} unsettled", report.counterexamples.len(), report.unknown.len())
    })?;
    Ok(format!(
        "{} probed, {} realized, 0 counterexamples, {} skipped for odd branching",
        report.probed, report.realized, report.skipped_incompatible
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("degree-4 exception", degree_four_exception),
        ("main-form agreement, 3 <= d <= 8", main_form_agreement),
        ("three-partition hook agreement, d <= 8", boccara_agreement),
        ("constructor soundness, 1000 random instances", constructor_soundness),
        ("explicit-formula goldens, D <= 6", explicit_goldens),
        ("Belyi lift suite", belyi_suite),
        ("permutation property suites", property_suites),
        ("genus-1 probe, d <= 5", genus_one_probe),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}) [{took:.2?}]", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{took:.2?}]", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
