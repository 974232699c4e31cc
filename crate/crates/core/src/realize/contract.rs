//! Contraction of a residue vector: replace a positive entry `a` by `a - b`
//! for a negative entry `-b` with `b < a`, drop `-b`, and keep the degree
//! above the new component count minus three.

use crate::branch::{rv_degree, ResidueVector};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub source: ResidueVector,
    pub result: ResidueVector,
    /// Index into `source.positives()`.
    pub i0: usize,
    /// Index into `source.negatives()`.
    pub j0: usize,
}

impl Contraction {
    /// The positive entry that was reduced.
    pub fn a(&self) -> usize {
        self.source.positives()[self.i0]
    }

    /// The negative entry (absolute value) that was removed.
    pub fn b(&self) -> usize {
        self.source.negatives()[self.j0]
    }
}

/// Picks a contraction deterministically: first the largest positive against
/// the smallest negative, then the largest positive against the second
/// smallest negative, then the smallest positive against the smallest
/// negative, then every remaining pair in index order. The first pair whose
/// result has degree above `m - 1` wins, where `m + 2` is the component count
/// of `rv`.
pub fn contract(rv: &ResidueVector) -> Result<Contraction> {
    if rv.components() < 3 {
        return Err(Error::Precondition(format!(
            "{rv} needs at least three components to contract"
        )));
    }
    let pos = rv.positives();
    let neg = rv.negatives();
    let m = rv.components() - 2;

    let first_max = |v: &[usize]| (0..v.len()).max_by_key(|&i| (v[i], std::cmp::Reverse(i)));
    let first_min = |v: &[usize]| (0..v.len()).min_by_key(|&i| (v[i], i));
    let second_min = |v: &[usize]| {
        let lo = first_min(v)?;
        (0..v.len()).filter(|&i| i != lo).min_by_key(|&i| (v[i], i))
    };

    let mut preferred = Vec::new();
    if let (Some(i), Some(j)) = (first_max(&pos), first_min(&neg)) {
        preferred.push((i, j));
        if let Some(j2) = second_min(&neg) {
            preferred.push((i, j2));
        }
    }
    if let (Some(i), Some(j)) = (first_min(&pos), first_min(&neg)) {
        preferred.push((i, j));
    }
    let exhaustive = (0..pos.len()).flat_map(|i| (0..neg.len()).map(move |j| (i, j)));

    for (i0, j0) in preferred.into_iter().chain(exhaustive) {
        if pos[i0] <= neg[j0] {
            continue;
        }
        let result = apply(rv, i0, j0);
        if rv_degree(&result) + 1 > m {
            return Ok(Contraction {
                source: rv.clone(),
                result,
                i0,
                j0,
            });
        }
    }
    Err(Error::NoContraction(rv.to_string()))
}

/// Entry order is kept: the reduced positive stays in place and the removed
/// negative is deleted.
fn apply(rv: &ResidueVector, i0: usize, j0: usize) -> ResidueVector {
    let neg = rv.negatives();
    let b = neg[j0] as i64;
    let mut seen_pos = 0;
    let mut seen_neg = 0;
    let mut out = Vec::with_capacity(rv.components() - 1);
    for &x in rv.entries() {
        if x > 0 {
            out.push(if seen_pos == i0 { x - b } else { x });
            seen_pos += 1;
        } else {
            if seen_neg != j0 {
                out.push(x);
            }
            seen_neg += 1;
        }
    }
    ResidueVector::new(out).expect("contraction preserves the residue-vector axioms")
}
