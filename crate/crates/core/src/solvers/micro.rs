//! Microbribery for consent and ternary rules. An individual's status
//! depends only on its own column, so every target is solved on its own and
//! the cheapest per-target changes are combined.

use crate::error::{Error, Result};
use crate::instance::{AttackInstance, CellValue, Family, PairChange, Solution, Verdict};
use crate::profile::Cell;
use crate::rule::SocialRule;

use super::immunity::check_immunity;

/// Cheapest change set for one target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetPlan {
    pub target: usize,
    pub cost: u64,
    pub changes: Vec<PairChange>,
}

/// Cheapest way to move `a` to the wanted status (`qualify = true` for
/// `A⁺`), or `None` if no change set achieves it.
pub fn target_plan(inst: &AttackInstance, a: usize, qualify: bool) -> Option<TargetPlan> {
    let (s, t) = inst.rule.quotas()?;
    let p = &inst.profile;
    let n = p.n();
    let s_prime = match inst.rule {
        SocialRule::Ternary { s_prime, .. } => s_prime.resolve(n),
        _ => s,
    };
    let current = p.cell(a, a);
    let mut diagonal = vec![(current, 0u64)];
    for v in [Cell::Qualify, Cell::Disqualify] {
        if v != current {
            diagonal.push((v, inst.pair_price(a, a)));
        }
    }

    let others: Vec<usize> = (0..n).filter(|&b| b != a).collect();
    let mut best: Option<TargetPlan> = None;
    for (diag, diag_cost) in diagonal {
        let count = |c: Cell| others.iter().filter(|&&b| p.cell(b, a) == c).count();
        let plus = count(Cell::Qualify) + usize::from(diag == Cell::Qualify);
        let minus = count(Cell::Disqualify) + usize::from(diag == Cell::Disqualify);
        // how many entries to change, which ones qualify, and the new value
        let (need, candidate, value): (usize, fn(Cell) -> bool, CellValue) = match (diag, qualify) {
            (Cell::Disqualify, true) => (
                (minus + 1).saturating_sub(t),
                |c| c == Cell::Disqualify,
                CellValue::Qualify,
            ),
            (Cell::Disqualify, false) => (
                t.saturating_sub(minus),
                |c| c != Cell::Disqualify,
                CellValue::Disqualify,
            ),
            (_, true) => {
                let quota = if diag == Cell::Qualify { s } else { s_prime };
                (quota.saturating_sub(plus), |c| c != Cell::Qualify, CellValue::Qualify)
            }
            (_, false) => {
                let quota = if diag == Cell::Qualify { s } else { s_prime };
                (
                    (plus + 1).saturating_sub(quota),
                    |c| c == Cell::Qualify,
                    CellValue::Disqualify,
                )
            }
        };
        let mut pool: Vec<(u64, usize)> = others
            .iter()
            .filter(|&&b| candidate(p.cell(b, a)))
            .map(|&b| (inst.pair_price(b, a), b))
            .collect();
        if pool.len() < need {
            continue;
        }
        pool.sort_unstable();
        pool.truncate(need);
        let cost = diag_cost + pool.iter().map(|(c, _)| c).sum::<u64>();
        if best.as_ref().is_some_and(|b| b.cost <= cost) {
            continue;
        }
        let mut changes: Vec<PairChange> = pool
            .iter()
            .map(|&(_, b)| PairChange {
                evaluator: b,
                evaluated: a,
                value,
            })
            .collect();
        if diag != current {
            let v = if diag == Cell::Qualify {
                CellValue::Qualify
            } else {
                CellValue::Disqualify
            };
            changes.push(PairChange {
                evaluator: a,
                evaluated: a,
                value: v,
            });
        }
        changes.sort_unstable();
        best = Some(TargetPlan {
            target: a,
            cost,
            changes,
        });
    }
    best
}

/// Per-target plans for every member of `A⁺` and `A⁻`; `None` when some
/// target cannot be moved at all.
pub fn microbribery_plans(inst: &AttackInstance) -> Option<Vec<TargetPlan>> {
    inst.a_plus
        .iter()
        .map(|a| target_plan(inst, a, true))
        .chain(inst.a_minus.iter().map(|a| target_plan(inst, a, false)))
        .collect()
}

pub fn solve_microbribery_consent(inst: &AttackInstance) -> Result<Verdict> {
    if inst.family != Family::Gmb {
        return Err(Error::PreconditionViolated("needs a GMB instance".into()));
    }
    if !inst.rule.is_column_local() {
        return Err(Error::PreconditionViolated(
            "microbribery case analysis needs a consent or ternary rule".into(),
        ));
    }
    inst.ensure_well_formed()?;
    if let Some(tag) = check_immunity(inst).theorem_tag {
        return Ok(Verdict::immune(tag));
    }
    let Some(plans) = microbribery_plans(inst) else {
        return Ok(Verdict::no());
    };
    let total: u64 = plans.iter().map(|p| p.cost).sum();
    if total > inst.budget.unwrap_or(0) {
        return Ok(Verdict::no());
    }
    let mut changes: Vec<PairChange> = plans.into_iter().flat_map(|p| p.changes).collect();
    changes.sort_unstable();
    Ok(Verdict::yes(Solution::Flipped(changes)))
}
