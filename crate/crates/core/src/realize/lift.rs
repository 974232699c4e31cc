//! Block lifts: a tuple of degree `n` becomes one of degree `k * n` on the
//! points `(j, x)`, `j` a block in `0..k`, encoded as `j * n + x`.
//!
//! `T1` walks through the blocks and applies the twist `τ1` once per round.
//! The extras act inside single blocks. `T2` closes the product and ends up
//! with `k` times the cycle type of `τ2` when the conventions line up.

use crate::error::{Error, Result};
use crate::perm::{Permutation, RealizationTuple, Role};

/// Where `T1` applies the twist `τ1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Twist {
    /// `(j, x) -> (j + 1, x)`, and `(k - 1, x) -> (0, τ1 x)`.
    Top,
    /// `(j, x) -> (j - 1, x)`, and `(0, x) -> (k - 1, τ1 x)`.
    Bottom,
}

/// How an extra is copied into its block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Embed {
    Sigma,
    SigmaInverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiftConvention {
    pub twist: Twist,
    pub embed: Embed,
}

/// The four variants, in the order they are tried.
pub const VARIANTS: [LiftConvention; 4] = [
    LiftConvention { twist: Twist::Top, embed: Embed::Sigma },
    LiftConvention { twist: Twist::Bottom, embed: Embed::Sigma },
    LiftConvention { twist: Twist::Top, embed: Embed::SigmaInverse },
    LiftConvention { twist: Twist::Bottom, embed: Embed::SigmaInverse },
];

/// All extras in block 0.
pub const POWER_LIFT_CONVENTION: LiftConvention = VARIANTS[0];

/// Extra `i` in block `i - 1`. With the twist at the top the product of the
/// extras comes out in reverse order, so the twist goes at the bottom.
pub const BELYI_LIFT_CONVENTION: LiftConvention = VARIANTS[1];

/// Raw lift of `τ1` and `sigmas` (extra `i` placed in block `blocks[i]`).
/// Returns `(T1, S_1..S_l, T2)` with `T1 S_1 .. S_l T2 = e`.
pub fn block_lift(
    tau1: &Permutation,
    sigmas: &[Permutation],
    blocks: &[usize],
    k: usize,
    conv: LiftConvention,
) -> (Permutation, Vec<Permutation>, Permutation) {
    let n = tau1.degree();
    let big = k * n;
    let mut t1 = vec![0; big];
    for j in 0..k {
        for x in 0..n {
            let (nj, nx) = match conv.twist {
                Twist::Top if j + 1 == k => (0, tau1.image(x)),
                Twist::Top => (j + 1, x),
                Twist::Bottom if j == 0 => (k - 1, tau1.image(x)),
                Twist::Bottom => (j - 1, x),
            };
            t1[j * n + x] = nj * n + nx;
        }
    }
    let t1 = Permutation::from_map(t1).expect("block rotation is a bijection");
    let lifted: Vec<Permutation> = sigmas
        .iter()
        .zip(blocks)
        .map(|(s, &j)| {
            let s = match conv.embed {
                Embed::Sigma => s.clone(),
                Embed::SigmaInverse => s.inverse(),
            };
            let mut map: Vec<usize> = (0..big).collect();
            for x in 0..n {
                map[j * n + x] = j * n + s.image(x);
            }
            Permutation::from_map(map).expect("block copy is a bijection")
        })
        .collect();
    let mut acc = t1.clone();
    for s in &lifted {
        acc = &acc * s;
    }
    (t1, lifted, acc.inverse())
}

fn scaled_type(p: &Permutation, k: usize) -> Vec<usize> {
    p.cycle_type().0.scaled(k).parts().to_vec()
}

/// Multiplies the degree by `k`: the result realizes `k·type(τ1)`,
/// `k·type(τ2)` and the extras padded with fixed points. Input and output are
/// in the order `(τ1, τ2, σ_1..σ_l)`.
pub fn power_lift_block(t: &RealizationTuple, k: usize) -> Result<RealizationTuple> {
    power_lift_with(t, k).map(|(t, _)| t)
}

/// Like [`power_lift_block`], also reporting the convention that passed.
pub fn power_lift_with(
    t: &RealizationTuple,
    k: usize,
) -> Result<(RealizationTuple, LiftConvention)> {
    check_canonical(t)?;
    if k == 0 {
        return Err(Error::Precondition("lift factor must be positive".into()));
    }
    if k == 1 {
        return Ok((t.clone(), POWER_LIFT_CONVENTION));
    }
    let len = t.len();
    let moved = t.braid_to(1, len - 1)?;
    let perms = moved.perms();
    let tau1 = &perms[0];
    let tau2 = &perms[len - 1];
    let sigmas = &perms[1..len - 1];
    let blocks = vec![0; sigmas.len()];
    let want_t1 = scaled_type(tau1, k);
    let want_t2 = scaled_type(tau2, k);

    let order = std::iter::once(POWER_LIFT_CONVENTION)
        .chain(VARIANTS.into_iter().filter(|&v| v != POWER_LIFT_CONVENTION));
    for conv in order {
        let (t1, ss, t2) = block_lift(tau1, sigmas, &blocks, k, conv);
        if t1.cycle_type().parts() != want_t1 || t2.cycle_type().parts() != want_t2 {
            continue;
        }
        let mut all = vec![t1];
        all.extend(ss);
        all.push(t2);
        let lifted = RealizationTuple::new(all, moved.roles().to_vec())?;
        if !lifted.product_is_identity() || !lifted.is_transitive() {
            continue;
        }
        return Ok((lifted.braid_to(len - 1, 1)?, conv));
    }
    Err(Error::Internal(format!("no lift convention works for {t} with k = {k}")))
}

/// Merges `r` extras into one by placing them in different blocks of an
/// `r`-fold lift. Input `(τ1, τ2, σ_1..σ_r)`, output `(T1, T2, M)` of degree
/// `r·d` where `M` has roles merged-extra and cycle type
/// `(c_1 + 1, .., c_r + 1, 1, ..)` for `σ_k` a `(c_k + 1)`-cycle.
pub fn belyi_lift(t: &RealizationTuple, r: usize) -> Result<RealizationTuple> {
    belyi_lift_with(t, r).map(|(t, _)| t)
}

pub fn belyi_lift_with(
    t: &RealizationTuple,
    r: usize,
) -> Result<(RealizationTuple, LiftConvention)> {
    check_canonical(t)?;
    let len = t.len();
    if r == 0 || len != r + 2 {
        return Err(Error::Precondition(format!(
            "belyi lift with r = {r} needs exactly r extras, got {}",
            len - 2
        )));
    }
    if r == 1 {
        return Ok((t.clone(), BELYI_LIFT_CONVENTION));
    }
    let moved = t.braid_to(1, len - 1)?;
    let perms = moved.perms();
    let tau1 = &perms[0];
    let tau2 = &perms[len - 1];
    let sigmas = &perms[1..len - 1];
    let blocks: Vec<usize> = (0..r).collect();
    let want_t1 = scaled_type(tau1, r);
    let want_t2 = scaled_type(tau2, r);

    let order = std::iter::once(BELYI_LIFT_CONVENTION)
        .chain(VARIANTS.into_iter().filter(|&v| v != BELYI_LIFT_CONVENTION));
    for conv in order {
        let (t1, ss, t2) = block_lift(tau1, sigmas, &blocks, r, conv);
        if t1.cycle_type().parts() != want_t1 || t2.cycle_type().parts() != want_t2 {
            continue;
        }
        let merged = crate::perm::product(&ss).expect("r >= 2");
        let out = RealizationTuple::new(
            vec![t1, merged, t2],
            vec![Role::Zero, Role::MergedExtra, Role::Pole],
        )?
        .braid_to(2, 1)?;
        if !out.product_is_identity() || !out.is_transitive() {
            continue;
        }
        return Ok((out, conv));
    }
    Err(Error::Internal(format!("no lift convention works for {t} with r = {r}")))
}

fn check_canonical(t: &RealizationTuple) -> Result<()> {
    let roles = t.roles();
    if t.len() < 3 || roles[0] != Role::Zero || roles[1] != Role::Pole {
        return Err(Error::Precondition(format!(
            "expected a tuple ordered (zero, pole, extras..), got {t}"
        )));
    }
    if !t.product_is_identity() {
        return Err(Error::Precondition(format!("{t} does not multiply to the identity")));
    }
    Ok(())
}
