//! Products of cycles equal to the identity, and splitting a cycle into a
//! chain of shorter ones.

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Splits the single cycle `sigma` into `σ_1, .., σ_l` with `σ_k` a
/// `(lambda[k] + 1)`-cycle and `σ_1 ⋯ σ_l = sigma`. Writing `sigma` from its
/// smallest point as `(c_0 c_1 .. c_m)`, the pieces are the consecutive
/// segments `(c_0 .. c_{m_1})`, `(c_{m_1} .. c_{m_1 + m_2})`, and so on.
pub fn split_cycle(sigma: &Permutation, lambda: &[usize]) -> Result<Vec<Permutation>> {
    let cycles = sigma.cycle_factors();
    let [cycle] = cycles.as_slice() else {
        return Err(Error::Precondition(format!("{sigma} is not a single cycle")));
    };
    split_listed(sigma.degree(), cycle, lambda)
}

/// [`split_cycle`] for a cycle given as an explicit listing.
pub(crate) fn split_listed(n: usize, cycle: &[usize], lambda: &[usize]) -> Result<Vec<Permutation>> {
    if lambda.is_empty() || lambda.contains(&0) || lambda.iter().sum::<usize>() + 1 != cycle.len() {
        return Err(Error::Precondition(format!(
            "{lambda:?} is not a partition of {}",
            cycle.len().saturating_sub(1)
        )));
    }
    let mut out = Vec::with_capacity(lambda.len());
    let mut start = 0;
    for &m in lambda {
        out.push(Permutation::cycle(n, &cycle[start..=start + m])?);
        start += m;
    }
    Ok(out)
}

/// Cycles `σ_1, .., σ_l` in `S_{D+1}` with `σ_k` an `(m_k + 1)`-cycle,
/// `σ_1 ⋯ σ_l = e`, acting transitively. Requires `Σ m_k = 2D` and every
/// `m_k <= D`; the order of `lambda` is kept.
pub fn realize_ones(big_d: usize, lambda: &[usize]) -> Result<Vec<Permutation>> {
    let l = lambda.len();
    if big_d == 0
        || l < 2
        || lambda.contains(&0)
        || lambda.iter().sum::<usize>() != 2 * big_d
        || lambda.iter().any(|&m| m > big_d)
    {
        return Err(Error::Precondition(format!(
            "{lambda:?} must have at least two parts in 1..={big_d} summing to {}",
            2 * big_d
        )));
    }
    let n = big_d + 1;
    let full: Vec<usize> = (0..n).collect();
    match l {
        2 => {
            let s1 = Permutation::cycle(n, &full)?;
            let s2 = s1.inverse();
            Ok(vec![s1, s2])
        }
        3 => {
            let (m1, m2, m3) = (lambda[0], lambda[1], lambda[2]);
            let s1 = Permutation::cycle(n, &full[..=m1])?;
            // (1, m1+1, m1, .., [m1+m2-D entries], m1+2, .., D+1), 1-based
            let mut c2 = vec![0];
            let down = m1 + m2 - big_d;
            c2.extend((0..down).map(|i| m1 - i));
            debug_assert!(down == 0 || m1 + 1 - down == m1 + m3 - big_d + 1);
            c2.extend(m1 + 1..n);
            let s2 = Permutation::cycle(n, &c2)?;
            let s3 = (&s1 * &s2).inverse();
            Ok(vec![s1, s2, s3])
        }
        _ => {
            let mut prefix = 0;
            let r = lambda
                .iter()
                .position(|&m| {
                    prefix += m;
                    prefix > big_d
                })
                .expect("total exceeds D");
            if r + 1 < l {
                let big_m: usize = lambda[..r].iter().sum();
                let big_m3: usize = lambda[r + 1..].iter().sum();
                let three = realize_ones(big_d, &[big_m, lambda[r], big_m3])?;
                let mut out = split_listed(n, &full[..=big_m], &lambda[..r])?;
                out.push(three[1].clone());
                out.extend(split_cycle(&three[2], &lambda[r + 1..])?);
                Ok(out)
            } else {
                let s = Permutation::cycle(n, &full)?;
                let mut out = split_listed(n, &full, &lambda[..l - 1])?;
                out.push(s.inverse());
                Ok(out)
            }
        }
    }
}
