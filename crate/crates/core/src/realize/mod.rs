//! Explicit monodromy tuples for realizable main-form data.
//!
//! Tuples are ordered `(τ1, τ2, σ_1, .., σ_l)` with `τ1` over the zeros,
//! `τ2` over the poles and `τ1 τ2 σ_1 ⋯ σ_l = e`.

mod contract;
mod lift;
mod main_form;
mod ones;
mod three;

pub use contract::{contract, Contraction};
pub use lift::{
    belyi_lift, belyi_lift_with, block_lift, power_lift_block, power_lift_with, Embed,
    LiftConvention, Twist, BELYI_LIFT_CONVENTION, POWER_LIFT_CONVENTION, VARIANTS,
};
pub use main_form::{realize_main, realize_main_with_stats, Stats};
pub use ones::{realize_ones, split_cycle};
pub use three::realize_three;

use serde::Serialize;

use crate::branch::{classify_form, primitive_reduce, BranchData, MainForm, Partition};
use crate::decide::{decide, decide_main, is_two_full_cycles, Verdict};
use crate::error::{Error, Result};
use crate::perm::{Permutation, RealizationTuple, Role};

/// A verified tuple for some branch data.
#[derive(Clone, Debug)]
pub struct Realization {
    pub tuple: RealizationTuple,
    /// For each entry of `tuple`, the index of the input partition it realizes.
    pub sources: Vec<usize>,
    pub verdict: Verdict,
    /// gcd of the zero and pole parts; the tuple was lifted by this factor.
    pub lift_factor: usize,
    pub stats: Stats,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Realized(Realization),
    NotRealizable(Verdict),
}

/// Decides `bd` and, when realizable, builds and verifies a tuple.
///
/// Main-form data (possibly after dropping trivial partitions) and `{(d), (d)}`
/// are constructed. Data whose verdict comes from the three-partition rule
/// with `v >= 2d` has no construction here and is reported as outside the
/// form.
pub fn realize(bd: &BranchData) -> Result<Outcome> {
    if !bd.is_compatible() {
        return Ok(Outcome::NotRealizable(decide(bd)?));
    }
    let (work, kept) = if classify_form(bd).is_empty() {
        let kept: Vec<usize> = (0..bd.len())
            .filter(|&k| !bd.partitions()[k].is_trivial())
            .collect();
        (bd.normalized().0, kept)
    } else {
        (bd.clone(), (0..bd.len()).collect())
    };
    let dropped = bd.len() - kept.len();
    let forms = classify_form(&work);

    let Some(form) = forms.first() else {
        let verdict = decide(bd)?;
        if !verdict.realizable {
            return Ok(Outcome::NotRealizable(verdict));
        }
        if is_two_full_cycles(&work) {
            let d = work.degree();
            let c = Permutation::cycle(d, &(0..d).collect::<Vec<_>>())?;
            let tuple = RealizationTuple::unlabeled(vec![c.clone(), c.inverse()])?;
            return finish(bd, tuple, kept, verdict, 1, Stats::default());
        }
        return Err(Error::OutsideForm(format!(
            "{bd} is realizable but has no explicit construction; use search"
        )));
    };

    let mut verdict = decide_main(&work)?;
    verdict.dropped_trivial = dropped;
    if !verdict.realizable {
        return Ok(Outcome::NotRealizable(verdict));
    }
    let (tuple, k, stats) = realize_form(form)?;
    let mut sources = vec![kept[form.a_index], kept[form.b_index]];
    sources.extend(form.hook_indices.iter().map(|&i| kept[i]));
    finish(bd, tuple, sources, verdict, k, stats)
}

fn finish(
    bd: &BranchData,
    tuple: RealizationTuple,
    sources: Vec<usize>,
    verdict: Verdict,
    lift_factor: usize,
    stats: Stats,
) -> Result<Outcome> {
    let report = verify_realization(bd, &tuple);
    if !report.ok() {
        return Err(Error::Internal(format!(
            "constructed tuple for {bd} fails verification: {report:?}"
        )));
    }
    Ok(Outcome::Realized(Realization {
        tuple,
        sources,
        verdict,
        lift_factor,
        stats,
    }))
}

/// Builds `(τ1, τ2, σ_1..σ_l)` for a form satisfying the criterion: the
/// primitive part is realized and then lifted by the gcd.
pub fn realize_form(form: &MainForm) -> Result<(RealizationTuple, usize, Stats)> {
    if !form.criterion_holds() {
        return Err(Error::Precondition(format!("{form} fails the gcd criterion")));
    }
    let (prim, k) = primitive_reduce(&form.residue_vector());
    let (t, stats) = realize_main_with_stats(&prim, &form.hooks)?;
    Ok((power_lift_block(&t, k)?, k, stats))
}

/// Branch data realized by the Belyi lift of a form with `r` hooks:
/// `r·a`, `r·b` and one partition `(m_1 + 1, .., m_r + 1, 1, ..)` of `r·d`.
pub fn belyi_branch_data(form: &MainForm) -> Result<BranchData> {
    let r = form.l();
    let d = r * form.degree;
    let merged = Partition::new(form.hooks.iter().map(|m| m + 1).collect())?.padded(d);
    BranchData::new(d, vec![form.a.scaled(r), form.b.scaled(r), merged])
}

/// Outcome of checking a tuple against branch data. Trivial partitions and
/// identity permutations carry no branching and are ignored when comparing
/// types.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub degree_match: bool,
    pub types_match: bool,
    pub product_identity: bool,
    pub transitive: bool,
    /// Twice the genus of the cover described by the tuple.
    pub genus_twice: i64,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.degree_match && self.types_match && self.product_identity && self.transitive
    }

    /// The genus, when the tuple's branching is even.
    pub fn genus(&self) -> Option<i64> {
        (self.genus_twice % 2 == 0).then_some(self.genus_twice / 2)
    }
}

pub fn verify_realization(bd: &BranchData, t: &RealizationTuple) -> VerifyReport {
    let n = t.degree();
    let degree_match = n == bd.degree();
    let mut have: Vec<Partition> = t
        .cycle_types()
        .into_iter()
        .map(|c| c.0)
        .filter(|p| !p.is_trivial())
        .collect();
    let mut want: Vec<Partition> = bd
        .partitions()
        .iter()
        .filter(|p| !p.is_trivial())
        .cloned()
        .collect();
    have.sort();
    want.sort();
    let v: usize = t.perms().iter().map(|p| n - p.cycle_count()).sum();
    VerifyReport {
        degree_match,
        types_match: degree_match && have == want,
        product_identity: t.product_is_identity(),
        transitive: t.is_transitive(),
        genus_twice: v as i64 - 2 * n as i64 + 2,
    }
}

/// The role a tuple entry plays, as the index of its input partition.
pub fn source_of(r: &Realization, role: Role) -> Option<usize> {
    r.tuple.position(role).map(|i| r.sources[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::Reason;

    fn bd(d: usize, parts: &[&[usize]]) -> BranchData {
        BranchData::from_parts(d, parts).unwrap()
    }

    fn realized(b: &BranchData) -> Realization {
        match realize(b).unwrap() {
            Outcome::Realized(r) => r,
            Outcome::NotRealizable(v) => panic!("{b}: {v}"),
        }
    }

    #[test]
    fn exception_is_not_realized() {
        let b = bd(4, &[&[2, 2], &[2, 2], &[3, 1]]);
        let Outcome::NotRealizable(v) = realize(&b).unwrap() else {
            panic!("realized the exception");
        };
        assert_eq!(v.reason, Reason::GcdCriterionFail);
    }

    #[test]
    fn imprimitive_instance_is_lifted() {
        let b = bd(6, &[&[4, 2], &[2, 2, 2], &[2, 1, 1, 1, 1], &[3, 1, 1, 1]]);
        let r = realized(&b);
        assert_eq!(r.lift_factor, 2);
        assert!(verify_realization(&b, &r.tuple).ok());
    }

    #[test]
    fn sources_follow_input_order() {
        let b = bd(4, &[&[3, 1], &[1, 3], &[2, 2]]);
        let r = realized(&b);
        let types = r.tuple.cycle_types();
        for (ty, &src) in types.iter().zip(&r.sources) {
            assert_eq!(ty.0, b.partitions()[src]);
        }
    }

    #[test]
    fn trivial_partitions_are_dropped() {
        let b = bd(4, &[&[1, 1, 1, 1], &[3, 1], &[1, 1, 1, 1], &[2, 2], &[3, 1]]);
        let r = realized(&b);
        assert_eq!(r.verdict.dropped_trivial, 2);
        assert_eq!(r.sources, [1, 3, 4]);

        let b = bd(4, &[&[2, 2], &[2, 2], &[3, 1], &[1, 1, 1, 1]]);
        let Outcome::NotRealizable(v) = realize(&b).unwrap() else {
            panic!("realized the exception");
        };
        assert_eq!(v.dropped_trivial, 1);
    }

    #[test]
    fn two_full_cycles() {
        let b = bd(5, &[&[5], &[5]]);
        let r = realized(&b);
        assert_eq!(r.tuple.len(), 2);
    }

    #[test]
    fn boccara_positive_has_no_construction() {
        // v = 2d with three partitions, one hook
        let b = bd(4, &[&[4], &[4], &[2, 2]]);
        assert!(matches!(realize(&b), Err(Error::OutsideForm(_))));
    }

    #[test]
    fn verify_example_degree_three() {
        let b = BranchData::padded(
            3,
            vec![
                Partition::new(vec![3]).unwrap(),
                Partition::new(vec![1]).unwrap(),
                Partition::new(vec![3]).unwrap(),
            ],
        )
        .unwrap();
        let t = RealizationTuple::new(
            vec![
                Permutation::parse("(1 2 3)", 3).unwrap(),
                Permutation::parse("id", 3).unwrap(),
                Permutation::parse("(1 3 2)", 3).unwrap(),
            ],
            vec![Role::Zero, Role::Pole, Role::Extra(1)],
        )
        .unwrap();
        let rep = verify_realization(&b, &t);
        assert!(rep.ok());
        assert_eq!(rep.genus(), Some(0));
    }

    #[test]
    fn verify_flags_each_failure() {
        let b = bd(3, &[&[3], &[3]]);
        let c = Permutation::parse("(1 2 3)", 3).unwrap();
        let bad_product = RealizationTuple::unlabeled(vec![c.clone(), c.clone()]).unwrap();
        let rep = verify_realization(&b, &bad_product);
        assert!(rep.types_match && !rep.product_identity);

        let s = Permutation::parse("(1 2)", 3).unwrap();
        let intransitive = RealizationTuple::unlabeled(vec![s.clone(), s]).unwrap();
        let rep = verify_realization(&bd(3, &[&[2, 1], &[2, 1]]), &intransitive);
        assert!(rep.product_identity && !rep.transitive);

        let rep = verify_realization(&bd(4, &[&[4], &[4]]), &bad_product);
        assert!(!rep.degree_match && !rep.types_match);
    }

    #[test]
    fn belyi_data_shape() {
        let form = MainForm::new(
            Partition::new(vec![3, 1]).unwrap(),
            Partition::new(vec![1, 1, 1, 1]).unwrap(),
            vec![2, 2],
        )
        .unwrap();
        let b = belyi_branch_data(&form).unwrap();
        assert_eq!(b.degree(), 8);
        assert_eq!(b.partitions()[2].parts(), &[3, 3, 1, 1]);
    }

    #[test]
    fn verify_small_examples() {
        let two = |a: &str, b: &str, n| {
            RealizationTuple::unlabeled(vec![
                Permutation::parse(a, n).unwrap(),
                Permutation::parse(b, n).unwrap(),
            ])
            .unwrap()
        };
        let p2 = || vec![Partition::new(vec![2]).unwrap(); 2];
        let rep = verify_realization(&BranchData::padded(2, p2()).unwrap(), &two("(1 2)", "(1 2)", 2));
        assert!(rep.ok());
        assert_eq!(rep.genus(), Some(0));

        let b3 = BranchData::padded(3, p2()).unwrap();
        let rep = verify_realization(&b3, &two("(1 2)", "(1 3)", 3));
        assert!(rep.types_match && !rep.product_identity);

        let rep = verify_realization(&b3, &two("(1 2)", "(1 2)", 2));
        assert!(!rep.types_match);
    }

    #[test]
    fn main_examples() {
        let rv = |e: &[i64]| crate::branch::ResidueVector::new(e.to_vec()).unwrap();
        let t = realize_main(&rv(&[1, 1, -1, -1]), &[1, 1]).unwrap();
        let shown: Vec<String> = t.perms().iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["id", "id", "(1 2)", "(1 2)"]);
        let t = realize_main(&rv(&[1, 2, -1, -1, -1]), &[1, 2]).unwrap();
        let ty: Vec<Vec<usize>> = t.cycle_types().iter().map(|c| c.parts().to_vec()).collect();
        assert_eq!(ty, [vec![2, 1], vec![1, 1, 1], vec![2, 1], vec![3]]);
    }
}
