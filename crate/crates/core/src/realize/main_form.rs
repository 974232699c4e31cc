//! Realizations of `{a, b, (m_1+1,1..), .., (m_l+1,1..)}` for primitive
//! `(a, -b)` and every `m_k` below the degree.

use super::ones::{realize_ones, split_cycle};
use super::three::realize_three;
use crate::branch::{residue_vector_of, Partition, ResidueVector};
use crate::error::{Error, Result};
use crate::perm::{Permutation, RealizationTuple, Role};

/// Counters describing how a construction went.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Candidate surgeries rejected by verification before one passed.
    pub backtracks: usize,
    /// Contraction steps that removed a letter.
    pub surgeries: usize,
}

/// Returns `(τ1, τ2, σ_1..σ_l)` with product `e`, acting transitively,
/// `τ1` of type `rv.positives()`, `τ2` of type `rv.negatives()` and `σ_k` a
/// `(lambda[k] + 1)`-cycle. `rv` must be primitive, `lambda` must sum to the
/// component count minus two and each part must be below the degree.
pub fn realize_main(rv: &ResidueVector, lambda: &[usize]) -> Result<RealizationTuple> {
    realize_main_with_stats(rv, lambda).map(|(t, _)| t)
}

pub fn realize_main_with_stats(
    rv: &ResidueVector,
    lambda: &[usize],
) -> Result<(RealizationTuple, Stats)> {
    if !rv.is_primitive() {
        return Err(Error::Precondition(format!("{rv} is not primitive")));
    }
    let d = rv.positive_sum();
    let m = rv.components() - 2;
    if m == 0 || lambda.is_empty() || lambda.contains(&0) || lambda.iter().sum::<usize>() != m {
        return Err(Error::Precondition(format!(
            "{lambda:?} is not a partition of m = {m}"
        )));
    }
    if let Some(big) = lambda.iter().find(|&&x| x >= d) {
        return Err(Error::Precondition(format!("m = {big} is not below the degree {d}")));
    }
    let mut stats = Stats::default();
    let t = build(&rv.positives(), &rv.negatives(), lambda, &mut stats)?;
    check(&t, &rv.positives(), &rv.negatives(), lambda)
        .map_err(|why| Error::Internal(format!("realization of {rv} with {lambda:?}: {why}")))?;
    Ok((t, stats))
}

fn tuple(t1: Permutation, t2: Permutation, sigmas: Vec<Permutation>) -> Result<RealizationTuple> {
    let mut roles = vec![Role::Zero, Role::Pole];
    roles.extend((1..=sigmas.len()).map(Role::Extra));
    let mut perms = vec![t1, t2];
    perms.extend(sigmas);
    RealizationTuple::new(perms, roles)
}

fn hook_ok(p: &Permutation, m: usize) -> bool {
    let f = p.cycle_factors();
    f.len() == 1 && f[0].len() == m + 1
}

fn type_ok(p: &Permutation, parts: &[usize]) -> bool {
    Partition::new(parts.to_vec()).is_ok_and(|want| p.cycle_type().0 == want)
}

fn check(t: &RealizationTuple, a: &[usize], b: &[usize], lambda: &[usize]) -> std::result::Result<(), String> {
    let p = t.perms();
    if !type_ok(&p[0], a) || !type_ok(&p[1], b) {
        return Err(format!("wrong zero or pole type in {t}"));
    }
    if p.len() != lambda.len() + 2 || !p[2..].iter().zip(lambda).all(|(s, &m)| hook_ok(s, m)) {
        return Err(format!("wrong extras in {t}"));
    }
    if !t.product_is_identity() {
        return Err(format!("{t} does not multiply to e"));
    }
    if !t.is_transitive() {
        return Err(format!("{t} is not transitive"));
    }
    Ok(())
}

/// Moves the extras so that the one now at extra position `k` ends at
/// `targets[k]`, using Hurwitz moves only.
fn reorder_extras(t: RealizationTuple, targets: &[usize]) -> Result<RealizationTuple> {
    let mut roles = vec![Role::Zero, Role::Pole];
    roles.extend(targets.iter().map(|&k| Role::Extra(k + 1)));
    let len = t.len();
    let sorted = t.with_roles(roles).braid_sort_by_key(2..len, |_, r| match r {
        Role::Extra(k) => k,
        _ => 0,
    })?;
    let mut roles = vec![Role::Zero, Role::Pole];
    roles.extend((1..len - 1).map(Role::Extra));
    Ok(sorted.with_roles(roles))
}

fn build(a: &[usize], b: &[usize], lambda: &[usize], stats: &mut Stats) -> Result<RealizationTuple> {
    let (p, q) = (a.len(), b.len());
    if p > q {
        let rev: Vec<usize> = lambda.iter().rev().copied().collect();
        let t = build(b, a, &rev, stats)?;
        let (perms, _) = t.into_parts();
        let sigmas = perms[2..].iter().rev().map(Permutation::inverse).collect();
        return tuple(perms[1].inverse(), perms[0].inverse(), sigmas);
    }
    let d: usize = a.iter().sum();
    let m = p + q - 2;
    let l = lambda.len();

    if d > m {
        let rv = residue_vector_of(
            &Partition::new(a.to_vec())?,
            &Partition::new(b.to_vec())?,
        )?;
        let t = realize_three(&rv)?;
        let (perms, _) = t.into_parts();
        let sigmas = split_cycle(&perms[2], lambda)?;
        return tuple(perms[0].clone(), perms[1].clone(), sigmas);
    }

    if a.iter().all(|&x| x == 1) {
        let sigmas = realize_ones(d - 1, lambda)?;
        return tuple(Permutation::identity(d), Permutation::identity(d), sigmas);
    }

    // work with λ ascending and restore the caller's order at the end
    let mut order: Vec<usize> = (0..l).collect();
    order.sort_by_key(|&k| (lambda[k], k));
    let ms: Vec<usize> = order.iter().map(|&k| lambda[k]).collect();
    let sorted = build_sorted(a, b, &ms, d, stats)?;
    reorder_extras(sorted, &order)
}

fn build_sorted(
    a: &[usize],
    b: &[usize],
    ms: &[usize],
    d: usize,
    stats: &mut Stats,
) -> Result<RealizationTuple> {
    let l = ms.len();

    if l > 3 {
        let mut prefix = 0;
        let r = ms
            .iter()
            .position(|&m| {
                prefix += m;
                prefix >= d
            })
            .expect("Σ m >= d");
        let (head, mid, tail) = if r + 1 < l {
            (&ms[..r], &ms[r..=r], &ms[r + 1..])
        } else {
            (&ms[..l - 2], &ms[l - 2..l - 1], &ms[l - 1..])
        };
        let grouped = [head.iter().sum::<usize>(), mid[0], tail.iter().sum::<usize>()];
        let t = build(a, b, &grouped, stats)?;
        let (perms, _) = t.into_parts();
        let mut sigmas = split_cycle(&perms[2], head)?;
        sigmas.push(perms[3].clone());
        sigmas.extend(split_cycle(&perms[4], tail)?);
        return tuple(perms[0].clone(), perms[1].clone(), sigmas);
    }

    let mut sa = a.to_vec();
    sa.sort_unstable();
    if sa == [1, 2] && b == [1, 1, 1] && ms == [1, 1, 1] {
        let p = |s: &str| Permutation::parse(s, 3).expect("literal permutation");
        return tuple(p("(1 2)"), p("id"), vec![p("(1 3)"), p("(2 3)"), p("(1 3)")]);
    }

    if l == 3 && ms[0] + ms[1] < d {
        let t = build(a, b, &[ms[0] + ms[1], ms[2]], stats)?;
        let (perms, _) = t.into_parts();
        let mut sigmas = split_cycle(&perms[2], &ms[..2])?;
        sigmas.push(perms[3].clone());
        return tuple(perms[0].clone(), perms[1].clone(), sigmas);
    }

    contract_and_grow(a, b, ms, d, stats)
}

/// Removes one point: the largest zero shrinks by one, one simple pole goes,
/// the largest `m` drops by one. The smaller realization is then grown back
/// by a cut-and-join on the new point.
fn contract_and_grow(
    a: &[usize],
    b: &[usize],
    ms: &[usize],
    d: usize,
    stats: &mut Stats,
) -> Result<RealizationTuple> {
    let l = ms.len();
    let ip = (0..a.len()).max_by_key(|&i| (a[i], std::cmp::Reverse(i))).expect("a non-empty");
    let ap = a[ip];
    let Some(jq) = b.iter().rposition(|&x| x == 1) else {
        return Err(Error::Internal(format!("no simple pole in {b:?}")));
    };
    if ap < 2 || ms[l - 1] < 2 {
        return Err(Error::Internal(format!(
            "cannot shrink a = {a:?}, λ = {ms:?}"
        )));
    }
    let mut a1 = a.to_vec();
    a1[ip] -= 1;
    let mut b1 = b.to_vec();
    b1.remove(jq);
    let mut ms1 = ms.to_vec();
    ms1[l - 1] -= 1;
    let small = build(&a1, &b1, &ms1, stats)?;
    stats.surgeries += 1;

    let (perms, _) = small.into_parts();
    let perms: Vec<Permutation> = perms.iter().map(|p| p.extend(d)).collect();
    let n = d - 1;
    let tau2 = perms[1].clone();
    let sigmas = &perms[2..];
    let t_mono = perms[0].inverse();

    let candidates: Vec<Vec<usize>> = t_mono
        .orbits()
        .into_iter()
        .filter(|c| c.len() == ap - 1 && !c.contains(&n))
        .collect();
    for mu in &candidates {
        for grown in surgeries(sigmas, mu, n) {
            let t = match tuple_from(&tau2, grown) {
                Ok(t) => t,
                Err(_) => {
                    stats.backtracks += 1;
                    continue;
                }
            };
            if check(&t, a, b, ms).is_ok() {
                return Ok(t);
            }
            stats.backtracks += 1;
        }
    }
    Err(Error::Internal(format!(
        "no surgery grows a realization of a = {a:?}, b = {b:?}, λ = {ms:?}"
    )))
}

fn tuple_from(tau2: &Permutation, sigmas: Vec<Permutation>) -> Result<RealizationTuple> {
    let mut mono = tau2.clone();
    for s in &sigmas {
        mono = &mono * s;
    }
    tuple(mono.inverse(), tau2.clone(), sigmas)
}

/// `p` with `z` cut out of its cycle.
fn remove_point(p: &Permutation, z: usize) -> Permutation {
    let mut map = p.as_slice().to_vec();
    let pre = p.inverse().image(z);
    map[pre] = p.image(z);
    map[z] = z;
    Permutation::from_map(map).expect("cutting a point keeps a bijection")
}

/// Walks backwards along the cycle of `c` through `x` until it meets a point
/// of `set`; returns that point `y` and `z = c(y)`.
fn walk_back(c: &Permutation, x: usize, set: &[bool]) -> Option<(usize, usize)> {
    let inv = c.inverse();
    let mut y = inv.image(x);
    loop {
        if set[y] {
            return Some((y, c.image(y)));
        }
        if y == x {
            return None;
        }
        y = inv.image(y);
    }
}

fn mask(p: &Permutation) -> Vec<bool> {
    (0..p.degree()).map(|x| p.moves(x)).collect()
}

fn times_swap(p: &Permutation, x: usize, y: usize) -> Permutation {
    let n = p.degree();
    p * &Permutation::transposition(n, x, y).expect("distinct points")
}

fn swap_times(x: usize, y: usize, p: &Permutation) -> Permutation {
    let n = p.degree();
    &Permutation::transposition(n, x, y).expect("distinct points") * p
}

/// Candidate grown extras, in preference order, for the cycle `mu` of
/// `τ2 σ_1 ⋯ σ_l` and new point `n`. `σ_l` is one point short.
fn surgeries(sigmas: &[Permutation], mu: &[usize], n: usize) -> Vec<Vec<Permutation>> {
    let mut out = Vec::new();
    let in_mu = |x: &usize| mu.contains(x);
    match sigmas.len() {
        2 => {
            let (s1, s2) = (&sigmas[0], &sigmas[1]);
            let hit2: Vec<usize> = s2.support().into_iter().filter(in_mu).collect();
            if !hit2.is_empty() {
                for x in hit2 {
                    out.push(vec![s1.clone(), times_swap(s2, x, n)]);
                }
            } else {
                let m2 = mask(s2);
                for x in s1.support().into_iter().filter(in_mu) {
                    let s1n = times_swap(s1, x, n);
                    if let Some((y, z)) = walk_back(&s1n, x, &m2) {
                        out.push(vec![remove_point(&s1n, z), swap_times(y, z, s2)]);
                    }
                }
            }
        }
        3 => {
            let (s1, s2, s3) = (&sigmas[0], &sigmas[1], &sigmas[2]);
            let m2 = mask(s2);
            let m3 = mask(s3);
            let hit3: Vec<usize> = s3.support().into_iter().filter(in_mu).collect();
            let hit2: Vec<usize> = s2.support().into_iter().filter(in_mu).collect();
            if !hit3.is_empty() {
                for x in hit3 {
                    out.push(vec![s1.clone(), s2.clone(), times_swap(s3, x, n)]);
                }
            } else if !hit2.is_empty() {
                for x in hit2 {
                    let s2n = times_swap(s2, x, n);
                    if let Some((y, z)) = walk_back(&s2n, x, &m3) {
                        out.push(vec![s1.clone(), remove_point(&s2n, z), swap_times(y, z, s3)]);
                    }
                }
            } else {
                let nested = s2.support().iter().all(|&x| m3[x]);
                for x in s1.support().into_iter().filter(in_mu) {
                    let s1n = times_swap(s1, x, n);
                    if !nested {
                        let Some((b1, z1)) = walk_back(&s1n, x, &m2) else { continue };
                        let t1 = remove_point(&s1n, z1);
                        let s2n = swap_times(b1, z1, s2);
                        for w in s2n.support().into_iter().filter(|&w| !m3[w]) {
                            if let Some((b2, z2)) = walk_back(&s2n, w, &m3) {
                                out.push(vec![t1.clone(), remove_point(&s2n, z2), swap_times(b2, z2, s3)]);
                            }
                        }
                    } else {
                        let Some((bb, z)) = walk_back(&s1n, x, &m3) else { continue };
                        let t1 = remove_point(&s1n, z);
                        if !m2[bb] {
                            out.push(vec![t1, s2.clone(), swap_times(bb, z, s3)]);
                        } else {
                            let s2n = swap_times(bb, z, s2);
                            if let Some((y, w)) = walk_back(&s2n, z, &m3) {
                                out.push(vec![t1, remove_point(&s2n, w), swap_times(y, w, s3)]);
                            }
                        }
                    }
                }
            }
        }
        _ => {}
    }
    out
}
