//! Immunity results as a static table. A row applies only when the instance
//! is well formed and nontrivial, which every result below presupposes.

use crate::instance::{AttackInstance, Family, Objective};
use crate::profile::ProfileKind;
use crate::rule::SocialRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RulePattern {
    ConsentS1,
    ConsentT1,
    ConsentS1OrT1,
    AnyConsent,
    Csr,
    Lsr,
}

impl RulePattern {
    fn matches(self, rule: &SocialRule) -> bool {
        let SocialRule::Consent { s, t } = *rule else {
            return match self {
                RulePattern::Csr => *rule == SocialRule::Csr,
                RulePattern::Lsr => *rule == SocialRule::Lsr,
                _ => false,
            };
        };
        match self {
            RulePattern::ConsentS1 => s == 1,
            RulePattern::ConsentT1 => t == 1,
            RulePattern::ConsentS1OrT1 => s == 1 || t == 1,
            RulePattern::AnyConsent => true,
            RulePattern::Csr | RulePattern::Lsr => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetReq {
    Any,
    NonEmpty,
    Empty,
}

impl SetReq {
    fn matches(self, empty: bool) -> bool {
        match self {
            SetReq::Any => true,
            SetReq::NonEmpty => !empty,
            SetReq::Empty => empty,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImmunityEntry {
    pub tag: &'static str,
    pub families: &'static [Family],
    /// `None` matches every objective.
    pub objective: Option<Objective>,
    pub rule: RulePattern,
    pub a_plus: SetReq,
    pub a_minus: SetReq,
    /// Restricts the row to `r`-profiles.
    pub r: Option<usize>,
    pub reason: &'static str,
}

const GCAI: &[Family] = &[Family::Gcai];
const GCPI: &[Family] = &[Family::Gcpi];
const DEL_PART: &[Family] = &[Family::Gcdi, Family::Gcpi];
const CONTROL: &[Family] = &[Family::Gcai, Family::Gcdi, Family::Gcpi];

#[allow(clippy::too_many_arguments)]
const fn entry(
    tag: &'static str,
    families: &'static [Family],
    objective: Option<Objective>,
    rule: RulePattern,
    a_plus: SetReq,
    a_minus: SetReq,
    r: Option<usize>,
    reason: &'static str,
) -> ImmunityEntry {
    ImmunityEntry {
        tag,
        families,
        objective,
        rule,
        a_plus,
        a_minus,
        r,
        reason,
    }
}

use Objective::Exact;
use RulePattern::*;
use SetReq::{Any, Empty, NonEmpty};

/// Checked in order; `check_immunity` reports the first match.
#[rustfmt::skip]
pub static IMMUNITY_TABLE: &[ImmunityEntry] = &[
    entry("thm:fst_immune_egcai", GCAI, Some(Exact), ConsentS1, NonEmpty, Any, None,
        "with s=1 an unqualified target already has t disqualifiers in T"),
    entry("thm:fst_immune_egcai", GCAI, Some(Exact), ConsentT1, Any, NonEmpty, None,
        "with t=1 a qualified target already has s qualifiers in T"),
    entry("cor:fst_immune_egcpi", GCPI, Some(Exact), ConsentS1, Any, Any, None,
        "with s=1 neither side of the exact goal can be reached by partitioning"),
    entry("thm:fst_immune_egcpi", GCPI, Some(Exact), ConsentT1, NonEmpty, Any, None,
        "with t=1 partitioning cannot qualify an unqualified target"),
    entry("obs:fst_immune_egcpi", GCPI, Some(Exact), AnyConsent, Any, Empty, None,
        "everyone must survive the first stage, so the final stage equals f(N)"),
    entry("thm:lsr_immune_egcai", GCAI, Some(Exact), Lsr, Any, NonEmpty, None,
        "adding individuals never breaks an LSR qualification path"),
    entry("thm:lsr_immune_egcpi", GCPI, Some(Exact), Lsr, Any, Any, None,
        "partitioning never creates an LSR qualification path"),
    entry("cor:fst_immune_gcai_gcdi_gcpi", CONTROL, None, ConsentS1OrT1, NonEmpty, NonEmpty, None,
        "with s=1 or t=1 one target side can never change status"),
    entry("obs:csr_immune_gcai", GCAI, None, Csr, NonEmpty, NonEmpty, None,
        "a qualified target in A+ would always reach a qualified target in A-"),
    entry("cor:lsr_immune_gcai", GCAI, None, Lsr, Any, NonEmpty, None,
        "adding individuals cannot disqualify anyone under LSR"),
    entry("cor:lsr_immune_gcdi_gcpi", DEL_PART, None, Lsr, NonEmpty, Any, None,
        "deleting or partitioning cannot qualify anyone under LSR"),
    entry("tab:binary_constructive", GCAI, None, ConsentS1, NonEmpty, Any, None,
        "with s=1 an unqualified target already has t disqualifiers in T"),
    entry("tab:binary_constructive", DEL_PART, None, ConsentT1, NonEmpty, Any, None,
        "with t=1 deleting or partitioning cannot qualify a target"),
    entry("tab:binary_destructive", GCAI, None, ConsentT1, Any, NonEmpty, None,
        "with t=1 a qualified target already has s qualifiers in T"),
    entry("tab:binary_destructive", DEL_PART, None, ConsentS1, Any, NonEmpty, None,
        "with s=1 deleting or partitioning cannot disqualify a target"),
    entry("tab:binary_destructive", GCAI, None, Lsr, Any, NonEmpty, None,
        "adding individuals cannot disqualify anyone under LSR"),
    entry("tab:cgcai_r_profiles", GCAI, None, Csr, NonEmpty, Any, Some(1),
        "on 1-profiles CSR qualifies at most the one individual everyone qualifies"),
    entry("tab:cgcai_r_profiles", GCAI, None, Lsr, NonEmpty, Any, Some(1),
        "on 1-profiles LSR qualifies exactly the self-qualifiers"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImmunityVerdict {
    pub immune: bool,
    pub theorem_tag: Option<&'static str>,
    pub reason: String,
}

impl ImmunityVerdict {
    fn susceptible(reason: impl Into<String>) -> Self {
        ImmunityVerdict {
            immune: false,
            theorem_tag: None,
            reason: reason.into(),
        }
    }
}

/// Every table row whose premise the instance meets, in table order.
pub fn immunity_matches(inst: &AttackInstance) -> Vec<&'static ImmunityEntry> {
    if inst.profile.kind() != ProfileKind::Binary || !inst.validate().is_empty() {
        return Vec::new();
    }
    IMMUNITY_TABLE
        .iter()
        .filter(|e| {
            e.families.contains(&inst.family)
                && e.objective.is_none_or(|o| o == inst.objective)
                && e.rule.matches(&inst.rule)
                && e.a_plus.matches(inst.a_plus.is_empty())
                && e.a_minus.matches(inst.a_minus.is_empty())
                && e.r.is_none_or(|r| inst.profile.is_r_profile(r))
        })
        .collect()
}

pub fn check_immunity(inst: &AttackInstance) -> ImmunityVerdict {
    if inst.profile.kind() != ProfileKind::Binary {
        return ImmunityVerdict::susceptible("immunity results cover binary profiles only");
    }
    if !inst.validate().is_empty() {
        return ImmunityVerdict::susceptible("instance is invalid or trivial");
    }
    match immunity_matches(inst).first() {
        Some(e) => ImmunityVerdict {
            immune: true,
            theorem_tag: Some(e.tag),
            reason: e.reason.to_string(),
        },
        None => ImmunityVerdict::susceptible("no immunity result applies"),
    }
}
