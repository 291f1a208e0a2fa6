//! Social rules and their evaluation.

use std::fmt;

use crate::error::{Error, Result};
use crate::profile::{Cell, Profile, ProfileKind};
use crate::set::IndividualSet;

/// Quota applied to individuals who are indifferent about themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelfIndifferentQuota {
    Fixed(usize),
    /// `ceil((n + 1) / 2)` for a population of size `n`.
    Majority,
}

impl SelfIndifferentQuota {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            SelfIndifferentQuota::Fixed(q) => q,
            SelfIndifferentQuota::Majority => (n + 2) / 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SocialRule {
    Consent {
        s: usize,
        t: usize,
    },
    /// Consensus-start-respecting.
    Csr,
    /// Liberal-start-respecting.
    Lsr,
    Ternary {
        s: usize,
        s_prime: SelfIndifferentQuota,
        t: usize,
    },
}

impl SocialRule {
    pub fn consent(s: usize, t: usize) -> SocialRule {
        SocialRule::Consent { s, t }
    }

    pub fn ternary(s: usize, s_prime: usize, t: usize) -> SocialRule {
        SocialRule::Ternary {
            s,
            s_prime: SelfIndifferentQuota::Fixed(s_prime),
            t,
        }
    }

    pub fn ternary_majority(s: usize, t: usize) -> SocialRule {
        SocialRule::Ternary {
            s,
            s_prime: SelfIndifferentQuota::Majority,
            t,
        }
    }

    /// `(s, t)` for consent and ternary rules.
    pub fn quotas(&self) -> Option<(usize, usize)> {
        match *self {
            SocialRule::Consent { s, t } | SocialRule::Ternary { s, t, .. } => Some((s, t)),
            _ => None,
        }
    }

    /// True when an individual's status depends only on its own column.
    pub fn is_column_local(&self) -> bool {
        self.quotas().is_some()
    }

    /// Checks the rule can be evaluated on a profile of this kind and size.
    pub fn validate_for(&self, kind: ProfileKind, n: usize) -> Result<()> {
        let ok = match self {
            SocialRule::Ternary { .. } => kind != ProfileKind::Partial,
            _ => kind == ProfileKind::Binary,
        };
        if !ok {
            return Err(Error::RuleNotApplicable {
                rule: self.to_string(),
                kind,
            });
        }
        if let Some((s, t)) = self.quotas() {
            if s == 0 || t == 0 || s + t > n + 2 {
                return Err(Error::QuotaConstraintViolated { s, t, n });
            }
        }
        if let SocialRule::Ternary {
            s_prime: SelfIndifferentQuota::Fixed(0),
            ..
        } = self
        {
            return Err(Error::PreconditionViolated("s' must be positive".into()));
        }
        Ok(())
    }

    /// Swaps the quotas of a consent rule; the dual under profile negation.
    pub fn dual(&self) -> Option<SocialRule> {
        match *self {
            SocialRule::Consent { s, t } => Some(SocialRule::Consent { s: t, t: s }),
            _ => None,
        }
    }
}

impl fmt::Display for SocialRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SocialRule::Consent { s, t } => write!(f, "consent:{s},{t}"),
            SocialRule::Csr => f.write_str("csr"),
            SocialRule::Lsr => f.write_str("lsr"),
            SocialRule::Ternary { s, s_prime, t } => match s_prime {
                SelfIndifferentQuota::Fixed(q) => write!(f, "ternary:{s},{q},{t}"),
                SelfIndifferentQuota::Majority => write!(f, "ternary:{s},*,{t}"),
            },
        }
    }
}

/// Rounds `K_0 ⊆ K_1 ⊆ … ⊆ K_final` of an iterative rule; the fixed point
/// is stored once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalTrace {
    pub rounds: Vec<IndividualSet>,
}

impl EvalTrace {
    pub fn result(&self) -> IndividualSet {
        self.rounds.last().copied().unwrap_or_default()
    }
}

/// `f(subset, profile)`.
pub fn eval(rule: &SocialRule, subset: IndividualSet, profile: &Profile) -> Result<IndividualSet> {
    rule.validate_for(profile.kind(), profile.n())?;
    profile.check_set(subset)?;
    Ok(eval_unchecked(rule, subset, profile))
}

/// Evaluation with the round trace for CSR/LSR; consent-style rules have
/// no trace.
pub fn eval_traced(
    rule: &SocialRule,
    subset: IndividualSet,
    profile: &Profile,
) -> Result<(IndividualSet, Option<EvalTrace>)> {
    rule.validate_for(profile.kind(), profile.n())?;
    profile.check_set(subset)?;
    Ok(match rule {
        SocialRule::Csr | SocialRule::Lsr => {
            let trace = iterate(rule, subset, profile);
            (trace.result(), Some(trace))
        }
        _ => (eval_unchecked(rule, subset, profile), None),
    })
}

/// Evaluation without applicability checks, for hot loops whose inputs were
/// validated once up front.
pub fn eval_unchecked(rule: &SocialRule, subset: IndividualSet, profile: &Profile) -> IndividualSet {
    match *rule {
        SocialRule::Consent { s, t } => subset
            .iter()
            .filter(|&a| consent_member(profile, subset, a, s, s, t))
            .collect(),
        SocialRule::Ternary { s, s_prime, t } => {
            let sp = s_prime.resolve(profile.n());
            subset
                .iter()
                .filter(|&a| consent_member(profile, subset, a, s, sp, t))
                .collect()
        }
        SocialRule::Csr | SocialRule::Lsr => iterate(rule, subset, profile).result(),
    }
}

fn consent_member(profile: &Profile, subset: IndividualSet, a: usize, s: usize, s_prime: usize, t: usize) -> bool {
    match profile.cell(a, a) {
        Cell::Qualify => profile.qualifiers(a, subset).len() >= s,
        Cell::Disqualify => profile.disqualifiers(a, subset).len() < t,
        Cell::Indifferent => profile.qualifiers(a, subset).len() >= s_prime,
        // partial profiles are rejected by validate_for
        Cell::Unknown => false,
    }
}

fn iterate(rule: &SocialRule, subset: IndividualSet, profile: &Profile) -> EvalTrace {
    let start: IndividualSet = match rule {
        SocialRule::Csr => subset
            .iter()
            .filter(|&a| subset.is_subset(profile.qualifiers(a, subset)))
            .collect(),
        _ => subset.iter().filter(|&a| profile.is_self_qualifying(a)).collect(),
    };
    let mut rounds = vec![start];
    let mut current = start;
    loop {
        let mut next = current;
        for a in current {
            next = next.union(profile.qualified_by(a).intersection(subset));
        }
        if next == current {
            break;
        }
        rounds.push(next);
        current = next;
    }
    EvalTrace { rounds }
}
