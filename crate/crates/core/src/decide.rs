//! Closed-form realizability verdicts.
//!
//! Two criteria are implemented: the gcd criterion for the main form
//! `a, b, hooks..` and the complete three-partition rule for
//! `a, b, (m+1, 1, .., 1)`. Everything else is left to the oracle.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::branch::{classify_form, total_branching, BranchData, MainForm};
use crate::error::{Error, Result};
use crate::gcd;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    GcdCriterionPass,
    GcdCriterionFail,
    BoccaraEvenBranching,
    BoccaraDeficient,
    OutsideForm,
    /// Odd total branching.
    Incompatible,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Reason::GcdCriterionPass => "gcd-criterion-pass",
            Reason::GcdCriterionFail => "gcd-criterion-fail",
            Reason::BoccaraEvenBranching => "boccara-even-branching",
            Reason::BoccaraDeficient => "boccara-deficient",
            Reason::OutsideForm => "outside-form",
            Reason::Incompatible => "incompatible",
        };
        f.write_str(s)
    }
}

/// The numbers a verdict rests on. `gcd` and `max_m` are absent when no
/// form was involved (e.g. odd branching).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub degree: usize,
    pub gcd: Option<usize>,
    pub max_m: Option<usize>,
    pub total_branching: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub realizable: bool,
    pub reason: Reason,
    pub witness: Witness,
    /// Trivial partitions dropped from the input before deciding.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub dropped_trivial: usize,
}

fn is_zero(x: &usize) -> bool {
    *x == 0
}

impl Verdict {
    fn incompatible(bd: &BranchData) -> Self {
        Self {
            realizable: false,
            reason: Reason::Incompatible,
            witness: Witness {
                degree: bd.degree(),
                gcd: None,
                max_m: None,
                total_branching: total_branching(bd),
            },
            dropped_trivial: 0,
        }
    }

    fn from_form(form: &MainForm, v: usize) -> Self {
        let realizable = form.criterion_holds();
        Self {
            realizable,
            reason: if realizable {
                Reason::GcdCriterionPass
            } else {
                Reason::GcdCriterionFail
            },
            witness: Witness {
                degree: form.degree,
                gcd: Some(form.gcd()),
                max_m: Some(form.max_m()),
                total_branching: v,
            },
            dropped_trivial: 0,
        }
    }

    /// Recomputes the witness numbers that do not depend on the chosen
    /// decomposition and compares them with the stored ones.
    pub fn witness_matches(&self, bd: &BranchData) -> bool {
        let w = &self.witness;
        let (bd, dropped) = if self.dropped_trivial > 0 {
            bd.normalized()
        } else {
            (bd.clone(), 0)
        };
        let base = w.degree == bd.degree()
            && w.total_branching == total_branching(&bd)
            && dropped == self.dropped_trivial;
        match self.reason {
            Reason::GcdCriterionPass | Reason::GcdCriterionFail => {
                let (Some(g), Some(m)) = (w.gcd, w.max_m) else {
                    return false;
                };
                base && classify_form(&bd).iter().any(|f| f.gcd() == g && f.max_m() == m)
                    && (m * g < w.degree) == self.realizable
            }
            _ => base,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = &self.witness;
        write!(
            f,
            "{} ({}): d={} v={}",
            if self.realizable { "realizable" } else { "not realizable" },
            self.reason,
            w.degree,
            w.total_branching
        )?;
        if let Some(g) = w.gcd {
            write!(f, " gcd={g}")?;
        }
        if let Some(m) = w.max_m {
            write!(f, " max_m={m}")?;
        }
        if self.dropped_trivial > 0 {
            write!(f, " (dropped {} trivial partitions)", self.dropped_trivial)?;
        }
        Ok(())
    }
}

/// Gcd criterion on every main-form reading of `bd`. All readings must agree;
/// a disagreement is reported as an internal error.
pub fn decide_main(bd: &BranchData) -> Result<Verdict> {
    let v = total_branching(bd);
    if v % 2 == 1 {
        return Ok(Verdict::incompatible(bd));
    }
    let forms = classify_form(bd);
    let first = forms
        .first()
        .ok_or_else(|| Error::OutsideForm(format!("{bd} has no main-form reading")))?;
    let verdict = Verdict::from_form(first, v);
    if let Some(other) = forms.iter().find(|f| f.criterion_holds() != verdict.realizable) {
        return Err(Error::Internal(format!(
            "readings {first} and {other} of {bd} disagree"
        )));
    }
    Ok(verdict)
}

/// Three partitions `a, b, (m+1, 1, .., 1)`: realizable iff the total
/// branching is even and either at least `2d`, or exactly `2d - 2` with the
/// gcd criterion holding.
pub fn decide_boccara(bd: &BranchData) -> Result<Verdict> {
    let parts = bd.partitions();
    if parts.len() != 3 {
        return Err(Error::OutsideForm(format!(
            "{bd} does not have exactly three partitions"
        )));
    }
    let hook_at = parts
        .iter()
        .position(|p| p.hook_m().is_some())
        .ok_or_else(|| Error::OutsideForm(format!("{bd} has no (m+1,1,..,1) partition")))?;
    let d = bd.degree();
    let v = total_branching(bd);
    if v % 2 == 1 {
        return Ok(Verdict::incompatible(bd));
    }
    if v == 2 * d - 2 {
        return decide_main(bd);
    }
    let m = parts[hook_at].hook_m().expect("checked above");
    let g = parts
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != hook_at)
        .fold(0u64, |g, (_, p)| gcd(g, p.gcd() as u64)) as usize;
    let realizable = v >= 2 * d;
    Ok(Verdict {
        realizable,
        reason: if realizable {
            Reason::BoccaraEvenBranching
        } else {
            Reason::BoccaraDeficient
        },
        witness: Witness {
            degree: d,
            gcd: Some(g),
            max_m: Some(m),
            total_branching: v,
        },
        dropped_trivial: 0,
    })
}

/// Front door used by the CLI: tries the main form on the literal input, then
/// on the input with trivial partitions dropped, then the three-partition
/// rule, then the two-fibre case `{(d), (d)}`.
pub fn decide(bd: &BranchData) -> Result<Verdict> {
    if !bd.is_compatible() {
        return Ok(Verdict::incompatible(bd));
    }
    if !classify_form(bd).is_empty() {
        return decide_main(bd);
    }
    let (norm, dropped) = bd.normalized();
    let with_dropped = |mut v: Verdict| {
        v.dropped_trivial = dropped;
        v
    };
    if dropped > 0 && !classify_form(&norm).is_empty() {
        return decide_main(&norm).map(with_dropped);
    }
    if norm.len() == 3 && norm.partitions().iter().any(|p| p.hook_m().is_some()) {
        return decide_boccara(&norm).map(with_dropped);
    }
    if is_two_full_cycles(&norm) {
        let d = norm.degree();
        return Ok(with_dropped(Verdict {
            realizable: true,
            reason: Reason::OutsideForm,
            witness: Witness {
                degree: d,
                gcd: Some(d),
                max_m: None,
                total_branching: total_branching(&norm),
            },
            dropped_trivial: 0,
        }));
    }
    Err(Error::OutsideForm(format!(
        "{bd} is neither of main form nor of three-partition hook form; use search"
    )))
}

/// `{(d), (d)}` with `d >= 2`: realized by a d-cycle and its inverse.
pub fn is_two_full_cycles(bd: &BranchData) -> bool {
    let d = bd.degree();
    d >= 2 && bd.len() == 2 && bd.partitions().iter().all(|p| p.len() == 1 && p.weight() == d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bd(d: usize, parts: &[&[usize]]) -> BranchData {
        BranchData::from_parts(d, parts).unwrap()
    }

    #[test]
    fn degree_four_exception_fails_gcd_criterion() {
        let b = bd(4, &[&[2, 2], &[2, 2], &[3, 1]]);
        let v = decide_main(&b).unwrap();
        assert!(!v.realizable);
        assert_eq!(v.reason, Reason::GcdCriterionFail);
        assert_eq!(v.witness.gcd, Some(2));
        assert_eq!(v.witness.max_m, Some(2));
        assert!(v.witness_matches(&b));
    }

    #[test]
    fn primitive_data_passes() {
        let b = bd(4, &[&[1, 3], &[2, 2], &[3, 1]]);
        let v = decide_main(&b).unwrap();
        assert!(v.realizable);
        assert_eq!(v.reason, Reason::GcdCriterionPass);
        assert!(v.witness_matches(&b));
    }

    #[test]
    fn imprimitive_data_can_pass() {
        let b = bd(6, &[&[4, 2], &[2, 2, 2], &[2, 1, 1, 1, 1], &[3, 1, 1, 1]]);
        let v = decide_main(&b).unwrap();
        assert!(v.realizable);
        assert_eq!((v.witness.gcd, v.witness.max_m), (Some(2), Some(2)));
    }

    #[test]
    fn decide_main_outside_form() {
        assert!(matches!(
            decide_main(&bd(4, &[&[2, 2], &[2, 2]])),
            Err(Error::OutsideForm(_))
        ));
    }

    #[test]
    fn boccara_bullets() {
        let v = decide_boccara(&bd(4, &[&[2, 2], &[2, 2], &[3, 1]])).unwrap();
        assert!(!v.realizable);
        assert_eq!(v.reason, Reason::GcdCriterionFail);

        assert!(decide_boccara(&bd(4, &[&[1, 3], &[2, 2], &[3, 1]])).unwrap().realizable);

        let odd = decide_boccara(&bd(4, &[&[4], &[4], &[2, 1, 1]])).unwrap();
        assert!(!odd.realizable);
        assert_eq!(odd.reason, Reason::Incompatible);

        // v = 3 + 3 + 2 = 8 = 2d
        let even = decide_boccara(&bd(4, &[&[4], &[4], &[3, 1]])).unwrap();
        assert!(even.realizable);
        assert_eq!(even.reason, Reason::BoccaraEvenBranching);

        // v = 1 + 1 + 2 = 4 < 2d - 2
        let low = decide_boccara(&bd(4, &[&[2, 1, 1], &[2, 1, 1], &[3, 1]])).unwrap();
        assert!(!low.realizable);
        assert_eq!(low.reason, Reason::BoccaraDeficient);
    }

    #[test]
    fn boccara_shape_errors() {
        assert!(decide_boccara(&bd(4, &[&[2, 2], &[2, 2]])).is_err());
        assert!(decide_boccara(&bd(4, &[&[2, 2], &[2, 2], &[2, 2]])).is_err());
    }

    #[test]
    fn front_door() {
        let v = decide(&bd(3, &[&[3], &[3]])).unwrap();
        assert!(v.realizable);
        assert_eq!(v.reason, Reason::OutsideForm);

        let v = decide(&bd(4, &[&[2, 2], &[2, 2], &[3, 1], &[1, 1, 1, 1]])).unwrap();
        assert!(!v.realizable);
        assert_eq!(v.dropped_trivial, 1);
        assert!(v.witness_matches(&bd(4, &[&[2, 2], &[2, 2], &[3, 1], &[1, 1, 1, 1]])));

        // a trivial partition used literally as the pole fibre
        let v = decide(&bd(3, &[&[3], &[1, 1, 1], &[3]])).unwrap();
        assert!(v.realizable);
        assert_eq!(v.dropped_trivial, 0);

        assert!(decide(&bd(4, &[&[2, 2], &[2, 2], &[2, 2], &[2, 2]])).is_err());
        assert_eq!(decide(&bd(3, &[&[3], &[3], &[2, 1]])).unwrap().reason, Reason::Incompatible);
    }

    #[test]
    fn verdict_json() {
        let v = decide_main(&bd(4, &[&[2, 2], &[2, 2], &[3, 1]])).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(
            json,
            r#"{"realizable":false,"reason":"gcd-criterion-fail","witness":{"degree":4,"gcd":2,"max_m":2,"total_branching":6}}"#
        );
        let back: Verdict = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }
}
