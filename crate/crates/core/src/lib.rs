//! Realizability of branch data for rational functions on the Riemann sphere.
//!
//! Branch data of the shape
//! `(a_1..a_p), (b_1..b_q), (m_1+1,1..1), .., (m_l+1,1..1)` with
//! `m_1 + .. + m_l = p + q - 2` is realizable exactly when
//! `max m_k * gcd(a, b) < d`. This crate decides that criterion, builds
//! explicit monodromy tuples (permutations with identity product and
//! transitive action) for every realizable instance, lifts them to Belyi
//! data, and cross-checks everything against a brute-force search.
//!
//! Module map:
//! - [`perm`]: permutations, cycle types, transitivity, Hurwitz moves.
//! - [`branch`]: partitions, branch data, residue vectors, form recognition.
//! - [`decide`]: closed-form verdicts.
//! - [`realize`]: the constructive realizer and its lifts.
//! - [`oracle`]: exhaustive search, census and the positive-genus probe.

pub mod branch;
pub mod decide;
pub mod error;
pub mod oracle;
pub mod perm;
pub mod realize;

pub use branch::{BranchData, CoverGenus, MainForm, Partition, ResidueVector};
pub use decide::{decide_boccara, decide_main, Reason, Verdict};
pub use error::{Error, Result};
pub use perm::{is_transitive, CycleType, Permutation, RealizationTuple, Role};
pub use realize::{realize, verify_realization, Realization, VerifyReport};

/// Greatest common divisor of non-negative integers; `gcd(0, 0) = 0`.
pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
