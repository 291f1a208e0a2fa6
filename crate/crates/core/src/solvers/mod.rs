//! Specialized algorithms and the dispatcher that picks among them.

pub mod bribery;
pub mod control;
pub mod ilp;
pub mod immunity;
pub mod micro;

pub use bribery::{solve_cgb_xp, solve_dgb_xp};
pub use control::{r1_budget, solve_cgcai_r1, solve_gcdi_22, R1Budget};
pub use ilp::{solve_fpt_ilp, solve_fpt_ilp_with, IlpModel, IlpOptions, LinearConstraint, Sense};
pub use immunity::{
    check_immunity, immunity_matches, ImmunityEntry, ImmunityVerdict, RulePattern, SetReq, IMMUNITY_TABLE,
};
pub use micro::{microbribery_plans, solve_microbribery_consent, target_plan, TargetPlan};

use crate::error::{Error, Result};
use crate::instance::{AttackInstance, Family, Objective, Verdict};
use crate::oracle::{solve_brute, SearchBudget};
use crate::rule::SocialRule;

pub const SOLVER_NAMES: [&str; 7] = [
    "cgb_xp",
    "dgb_xp",
    "gcdi_22",
    "cgcai_r1",
    "microbribery",
    "ilp",
    "brute",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dispatch {
    pub solver: &'static str,
    pub result: Result<Verdict>,
}

/// The specialized solver whose precondition the instance meets, if any.
pub fn specialized_for(inst: &AttackInstance) -> Option<&'static str> {
    let consent = match inst.rule {
        SocialRule::Consent { s, t } => Some((s, t)),
        _ => None,
    };
    let name = match (inst.family, inst.objective, consent) {
        (Family::Gb, Objective::Constructive, Some((_, 1))) => "cgb_xp",
        (Family::Gb, Objective::Destructive, Some((1, _))) => "dgb_xp",
        (Family::Gcdi, _, Some((2, 2))) => "gcdi_22",
        (Family::Gcai, Objective::Constructive, Some((s, _))) if s >= 2 && inst.r_restriction == Some(1) => "cgcai_r1",
        (Family::Gmb, _, _) if inst.rule.is_column_local() => "microbribery",
        (Family::Gcai | Family::Gcdi, _, Some(_)) => "ilp",
        _ => return None,
    };
    Some(name)
}

/// Runs the named solver. `brute` uses the given search budget.
pub fn solve_named(name: &str, inst: &AttackInstance, sb: &SearchBudget) -> Result<Verdict> {
    match name {
        "cgb_xp" => solve_cgb_xp(inst),
        "dgb_xp" => solve_dgb_xp(inst),
        "gcdi_22" => solve_gcdi_22(inst),
        "cgcai_r1" => solve_cgcai_r1(inst),
        "microbribery" => solve_microbribery_consent(inst),
        "ilp" => solve_fpt_ilp(inst),
        "brute" => solve_brute(inst, sb),
        other => Err(Error::PreconditionViolated(format!("unknown solver {other}"))),
    }
}

/// Immunity first, then the matching specialized solver, then brute force.
/// A solver that runs out of room is reported as is rather than retried.
pub fn solve_auto(inst: &AttackInstance, sb: &SearchBudget) -> Dispatch {
    if let Err(e) = inst.ensure_well_formed() {
        return Dispatch {
            solver: "validate",
            result: Err(e),
        };
    }
    if let Some(tag) = check_immunity(inst).theorem_tag {
        return Dispatch {
            solver: "immunity",
            result: Ok(Verdict::immune(tag)),
        };
    }
    let solver = specialized_for(inst).unwrap_or("brute");
    Dispatch {
        solver,
        result: solve_named(solver, inst, sb),
    }
}
