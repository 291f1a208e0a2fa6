//! Consent-rule group bribery with `t = 1` (and its dual with `s = 1`).

use crate::error::{Error, Result};
use crate::instance::{AttackInstance, Family, Objective, RowRewrite, Solution, Verdict};
use crate::oracle::subsets_by_size;
use crate::rule::{eval_unchecked, SocialRule};
use crate::set::IndividualSet;

use super::immunity::check_immunity;

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::PreconditionViolated(msg.into()))
    }
}

/// Constructive bribery for `consent(s, 1)`. Every self-disqualifying target
/// must be bribed; beyond those, at most `s` further individuals are needed,
/// each rewritten to qualify everyone. Among cheapest extra sets the
/// lexicographically smallest is returned.
pub fn solve_cgb_xp(inst: &AttackInstance) -> Result<Verdict> {
    require(
        inst.family == Family::Gb && inst.objective == Objective::Constructive,
        "needs a constructive bribery instance",
    )?;
    let SocialRule::Consent { s, t: 1 } = inst.rule else {
        return Err(Error::PreconditionViolated("needs consent(s, 1)".into()));
    };
    inst.ensure_well_formed()?;
    let iv = check_immunity(inst);
    if let Some(tag) = iv.theorem_tag {
        return Ok(Verdict::immune(tag));
    }
    let p = &inst.profile;
    let everyone = p.everyone();
    let budget = inst.budget.unwrap_or(0);

    let forced: IndividualSet = inst.a_plus.iter().filter(|&a| p.is_self_disqualifying(a)).collect();
    let forced_cost = inst.agent_cost(forced);
    if forced_cost > budget {
        return Ok(Verdict::no());
    }
    let remaining = budget - forced_cost;
    let mut base = p.clone();
    for a in forced {
        base.set_row(a, everyone)?;
    }

    let domain = everyone.difference(forced);
    let k = s.min(remaining.min(domain.len() as u64) as usize);
    let mut best: Option<(u64, Vec<usize>)> = None;
    for u in subsets_by_size(domain, k) {
        let cost = inst.agent_cost(u);
        if cost > remaining {
            continue;
        }
        let key = (cost, u.to_vec());
        if best.as_ref().is_some_and(|b| *b <= key) {
            continue;
        }
        let mut bribed = base.clone();
        for a in u {
            bribed.set_row(a, everyone)?;
        }
        if inst.a_plus.is_subset(eval_unchecked(&inst.rule, everyone, &bribed)) {
            best = Some(key);
        }
    }
    Ok(match best {
        Some((_, extra)) => {
            let mut all: Vec<usize> = forced.iter().chain(extra).collect();
            all.sort_unstable();
            Verdict::yes(Solution::Bribed(
                all.into_iter()
                    .map(|individual| RowRewrite {
                        individual,
                        qualifies: everyone,
                    })
                    .collect(),
            ))
        }
        None => Verdict::no(),
    })
}

/// Destructive bribery for `consent(1, t)`, solved on the negated profile as
/// constructive bribery for `consent(t, 1)`.
pub fn solve_dgb_xp(inst: &AttackInstance) -> Result<Verdict> {
    require(
        inst.family == Family::Gb && inst.objective == Objective::Destructive,
        "needs a destructive bribery instance",
    )?;
    let SocialRule::Consent { s: 1, t } = inst.rule else {
        return Err(Error::PreconditionViolated("needs consent(1, t)".into()));
    };
    inst.ensure_well_formed()?;
    let iv = check_immunity(inst);
    if let Some(tag) = iv.theorem_tag {
        return Ok(Verdict::immune(tag));
    }
    let mut dual = inst.clone();
    dual.profile = inst.profile.negate()?;
    dual.rule = SocialRule::consent(t, 1);
    dual.objective = Objective::Constructive;
    dual.a_plus = inst.a_minus;
    dual.a_minus = IndividualSet::EMPTY;
    let v = solve_cgb_xp(&dual)?;
    let everyone = inst.profile.everyone();
    Ok(match v.witness {
        Some(Solution::Bribed(rows)) => Verdict::yes(Solution::Bribed(
            rows.into_iter()
                .map(|r| RowRewrite {
                    individual: r.individual,
                    qualifies: everyone.difference(r.qualifies),
                })
                .collect(),
        )),
        _ => v,
    })
}
