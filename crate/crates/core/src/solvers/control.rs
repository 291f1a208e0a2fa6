//! Polynomial control algorithms: deletion under `consent(2, 2)` and adding
//! on 1-profiles.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::instance::{AttackInstance, Family, Objective, Solution, Verdict};
use crate::rule::{eval_unchecked, SocialRule};
use crate::set::IndividualSet;

use super::immunity::check_immunity;

/// Deletion control for `consent(2, 2)`, any objective. A self-disqualifying
/// member of `A⁺` survives only if nobody else disqualifies it, and a
/// self-qualifying member of `A⁻` falls only if nobody else qualifies it, so
/// those deletions are forced; no other deletion can help.
pub fn solve_gcdi_22(inst: &AttackInstance) -> Result<Verdict> {
    if inst.family != Family::Gcdi {
        return Err(Error::PreconditionViolated("needs a GCDI instance".into()));
    }
    if inst.rule != SocialRule::consent(2, 2) {
        return Err(Error::PreconditionViolated("needs consent(2, 2)".into()));
    }
    inst.ensure_well_formed()?;
    if let Some(tag) = check_immunity(inst).theorem_tag {
        return Ok(Verdict::immune(tag));
    }
    let p = &inst.profile;
    let everyone = p.everyone();
    let mut forced = IndividualSet::EMPTY;
    for a in inst.a_plus.iter().filter(|&a| p.is_self_disqualifying(a)) {
        forced = forced.union(p.disqualifiers(a, everyone).without(a));
    }
    for a in inst.a_minus.iter().filter(|&a| p.is_self_qualifying(a)) {
        forced = forced.union(p.qualifiers(a, everyone).without(a));
    }
    if !forced.is_disjoint(inst.targets()) || forced.len() as u64 > inst.budget.unwrap_or(0) {
        return Ok(Verdict::no());
    }
    let q = eval_unchecked(&inst.rule, everyone.difference(forced), p);
    Ok(if inst.achieved_by(q) {
        Verdict::yes(Solution::Deleted(forced))
    } else {
        Verdict::no()
    })
}

/// Bookkeeping of the 1-profile adding algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct R1Budget {
    /// Qualifications still needed by each self-qualifying target.
    pub per_target: BTreeMap<usize, usize>,
    /// How many more disqualifications each self-disqualifying target can absorb.
    pub slack: BTreeMap<usize, usize>,
    /// The smallest slack, or the budget when there is no such target.
    pub d: i64,
}

/// Computes `q_a`, `d_a` and `d`; `None` when some self-disqualifying target
/// already has `t` disqualifiers in `T`.
pub fn r1_budget(inst: &AttackInstance) -> Option<R1Budget> {
    let (s, t) = inst.rule.quotas()?;
    let p = &inst.profile;
    let pool = inst.start();
    let mut slack = BTreeMap::new();
    let mut per_target = BTreeMap::new();
    for a in inst.a_plus {
        if p.is_self_disqualifying(a) {
            let dis = p.disqualifiers(a, pool).len();
            if dis >= t {
                return None;
            }
            slack.insert(a, t - dis - 1);
        } else {
            per_target.insert(a, s.saturating_sub(p.qualifiers(a, pool).len()));
        }
    }
    let d = match slack.values().min() {
        Some(&m) => m as i64,
        None => inst.budget.unwrap_or(0) as i64,
    };
    Some(R1Budget { per_target, slack, d })
}

/// Constructive adding for `consent(s, t)`, `s ≥ 2`, on 1-profiles. Each
/// added individual qualifies exactly one target and disqualifies every
/// other, so self-qualifying targets are handled one at a time.
pub fn solve_cgcai_r1(inst: &AttackInstance) -> Result<Verdict> {
    if inst.family != Family::Gcai || inst.objective != Objective::Constructive {
        return Err(Error::PreconditionViolated("needs a constructive GCAI instance".into()));
    }
    let SocialRule::Consent { s, .. } = inst.rule else {
        return Err(Error::PreconditionViolated("needs a consent rule".into()));
    };
    if s < 2 {
        return Err(Error::PreconditionViolated("needs s >= 2".into()));
    }
    if inst.r_restriction != Some(1) {
        return Err(Error::PreconditionViolated("needs r = 1".into()));
    }
    inst.ensure_well_formed()?;
    if let Some(tag) = check_immunity(inst).theorem_tag {
        return Ok(Verdict::immune(tag));
    }
    let Some(b) = r1_budget(inst) else {
        return Ok(Verdict::no());
    };
    let p = &inst.profile;
    let outside = inst.action_domain();
    let mut ell = inst.budget.unwrap_or(0) as i64;
    let mut d = b.d;
    let mut added = IndividualSet::EMPTY;
    for (&a, &q) in &b.per_target {
        let supporters = p.qualifiers(a, outside);
        if supporters.len() < q {
            return Ok(Verdict::no());
        }
        added = added.union(supporters.iter().take(q).collect());
        ell -= q as i64;
        d -= q as i64;
    }
    Ok(if ell >= 0 && d >= 0 {
        Verdict::yes(Solution::Added(added))
    } else {
        Verdict::no()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{check_witness, Answer};
    use crate::profile::Profile;

    fn set(v: &[usize]) -> IndividualSet {
        v.iter().copied().collect()
    }

    #[test]
    fn gcdi_forced_deletion_hits_target() {
        // a1 disqualifies itself and is disqualified by a2 (in A-)
        let p = Profile::binary_from_rows(&["-+++", "-+++", "++++", "++++"]).unwrap();
        let mut inst = AttackInstance::new(p, SocialRule::consent(2, 2), Family::Gcdi, Objective::General);
        inst.a_plus = set(&[0]);
        inst.a_minus = set(&[1]);
        inst.budget = Some(3);
        assert_eq!(solve_gcdi_22(&inst).unwrap().answer, Answer::No);
    }

    #[test]
    fn gcdi_no_forced_deletions_for_lone_self_disqualifier() {
        // a1 is disqualified only by itself; a3 also by a2, who must go
        let p = Profile::binary_from_rows(&["-++", "++-", "++-"]).unwrap();
        let mut inst = AttackInstance::new(p, SocialRule::consent(2, 2), Family::Gcdi, Objective::Constructive);
        inst.a_plus = set(&[0, 2]);
        inst.budget = Some(1);
        let v = solve_gcdi_22(&inst).unwrap();
        assert_eq!(v.witness, Some(Solution::Deleted(set(&[1]))));
        assert!(check_witness(&inst, v.witness.as_ref().unwrap()).unwrap());
        inst.budget = Some(0);
        assert_eq!(solve_gcdi_22(&inst).unwrap().answer, Answer::No);
    }

    #[test]
    fn r1_rejects_overdisqualified_target() {
        // r = 1; a1 is disqualified by everyone in T, itself included
        let p = Profile::binary_from_rows(&["-+--", "-+--", "--+-", "+---"]).unwrap();
        let mut inst = AttackInstance::new(p, SocialRule::consent(2, 2), Family::Gcai, Objective::Constructive);
        inst.pool = Some(set(&[0, 1, 2]));
        inst.a_plus = set(&[0]);
        inst.budget = Some(1);
        inst.r_restriction = Some(1);
        assert_eq!(solve_cgcai_r1(&inst).unwrap().answer, Answer::No);
    }

    #[test]
    fn r1_adds_lexicographically_smallest_supporters() {
        // a1 qualifies itself and needs one more qualifier; a4 and a5 both help
        let p = Profile::binary_from_rows(&["+----", "-+---", "--+--", "+----", "+----"]).unwrap();
        let mut inst = AttackInstance::new(p, SocialRule::consent(2, 3), Family::Gcai, Objective::Constructive);
        inst.pool = Some(set(&[0, 1, 2]));
        inst.a_plus = set(&[0]);
        inst.budget = Some(1);
        inst.r_restriction = Some(1);
        let v = solve_cgcai_r1(&inst).unwrap();
        assert_eq!(v.witness, Some(Solution::Added(set(&[3]))));
        assert!(check_witness(&inst, v.witness.as_ref().unwrap()).unwrap());
    }
}
