//! Realizations of `{a, b, (m+1, 1..1)}` when the degree exceeds `m`,
//! built by repeated contraction.

use super::contract::contract;
use super::lift::power_lift_block;
use crate::branch::{primitive_reduce, ResidueVector};
use crate::error::{Error, Result};
use crate::perm::{Permutation, RealizationTuple, Role};

/// Returns `(τ1, τ2, σ)` with `τ1 τ2 σ = e`, `τ1` of type `rv.positives()`,
/// `τ2` of type `rv.negatives()` and `σ` an `(m+1)`-cycle, `m + 2` the
/// number of components. `rv` must be primitive with degree above `m`.
pub fn realize_three(rv: &ResidueVector) -> Result<RealizationTuple> {
    if !rv.is_primitive() {
        return Err(Error::Precondition(format!("{rv} is not primitive")));
    }
    let m = rv.components() - 2;
    let d = rv.positive_sum();
    if d <= m {
        return Err(Error::Precondition(format!(
            "{rv} has degree {d}, not above m = {m}"
        )));
    }
    let (t1, t2, s) = build(rv)?;
    let t = RealizationTuple::new(vec![t1, t2, s], vec![Role::Zero, Role::Pole, Role::Extra(1)])?;
    if !t.product_is_identity() || !t.is_transitive() {
        return Err(Error::Internal(format!("three-point realization of {rv} failed: {t}")));
    }
    Ok(t)
}

type Triple = (Permutation, Permutation, Permutation);

fn build(rv: &ResidueVector) -> Result<Triple> {
    let pos = rv.positives();
    let neg = rv.negatives();
    let d: usize = pos.iter().sum();

    if pos.len() > neg.len() {
        let (t1, t2, s) = build(&rv.negated())?;
        return Ok((t2.inverse(), t1.inverse(), s.inverse()));
    }
    if pos.len() == 1 && neg.len() == 1 {
        let c = Permutation::cycle(d, &(0..d).collect::<Vec<_>>())?;
        let inv = c.inverse();
        return Ok((c, inv, Permutation::identity(d)));
    }

    let c = contract(rv)?;
    let b0 = c.b();
    let target = c.a() - b0;
    let (sub, k) = primitive_reduce(&c.result);
    let (t1, t2, s) = build(&sub)?;
    let (t1, t2, s) = if k > 1 {
        let t = RealizationTuple::new(vec![t1, t2, s], vec![Role::Zero, Role::Pole, Role::Extra(1)])?;
        let lifted = power_lift_block(&t, k)?;
        let (mut p, _) = lifted.into_parts();
        let s = p.pop().expect("three entries");
        let t2 = p.pop().expect("three entries");
        let t1 = p.pop().expect("three entries");
        (t1, t2, s)
    } else {
        (t1, t2, s)
    };
    let inner = t1.degree();
    debug_assert_eq!(inner + b0, d);

    // τ1'^{-1} = τ2' σ'; a cycle of it of the reduced length meets σ'
    let mono = t1.inverse();
    let x = if s.is_identity() {
        (0..inner).find(|&x| mono.cycle_through(x).len() == target)
    } else {
        s.support()
            .into_iter()
            .find(|&x| mono.cycle_through(x).len() == target)
    }
    .ok_or_else(|| Error::Internal(format!("no cycle of length {target} meets σ for {rv}")))?;
    let y = inner;

    let fresh: Vec<usize> = (inner..d).rev().collect();
    let nu = Permutation::cycle(d, &fresh)?;
    let t2 = &t2.extend(d) * &nu;
    let s = &s.extend(d) * &Permutation::transposition(d, x, y)?;
    let t1 = (&t2 * &s).inverse();
    Ok((t1, t2, s))
}
