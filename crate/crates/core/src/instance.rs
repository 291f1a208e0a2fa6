//! One record for every attack problem, plus validity checks, the witness
//! checker, and the slack diagnostics.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::profile::{Cell, Profile, ProfileKind};
use crate::rule::{eval_unchecked, SocialRule};
use crate::set::IndividualSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// control by adding individuals
    Gcai,
    /// control by deleting individuals
    Gcdi,
    /// control by partitioning individuals
    Gcpi,
    /// bribery (whole rows)
    Gb,
    /// microbribery (single entries)
    Gmb,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Gcai, Family::Gcdi, Family::Gcpi, Family::Gb, Family::Gmb];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Gcai => "GCAI",
            Family::Gcdi => "GCDI",
            Family::Gcpi => "GCPI",
            Family::Gb => "GB",
            Family::Gmb => "GMB",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.as_str().eq_ignore_ascii_case(s))
    }

    pub fn is_control(self) -> bool {
        matches!(self, Family::Gcai | Family::Gcdi | Family::Gcpi)
    }

    pub fn has_budget(self) -> bool {
        self != Family::Gcpi
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Objective {
    Constructive,
    Destructive,
    Exact,
    General,
}

impl Objective {
    pub const ALL: [Objective; 4] = [
        Objective::Constructive,
        Objective::Destructive,
        Objective::Exact,
        Objective::General,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Objective::Constructive => "constructive",
            Objective::Destructive => "destructive",
            Objective::Exact => "exact",
            Objective::General => "general",
        }
    }

    pub fn parse(s: &str) -> Option<Objective> {
        Objective::ALL.into_iter().find(|o| o.as_str() == s)
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackInstance {
    pub profile: Profile,
    pub rule: SocialRule,
    pub family: Family,
    pub objective: Objective,
    pub a_plus: IndividualSet,
    pub a_minus: IndividualSet,
    /// The initial set `T` for control by adding; `None` for other families.
    pub pool: Option<IndividualSet>,
    /// `None` for partitioning, which has no budget.
    pub budget: Option<u64>,
    /// Per-individual bribery prices; `None` means unit prices.
    pub agent_prices: Option<Vec<u64>>,
    /// Row-major `n × n` microbribery prices; `None` means unit prices.
    pub pair_prices: Option<Vec<u64>>,
    pub r_restriction: Option<usize>,
}

impl AttackInstance {
    /// A minimal instance; callers fill in targets, pool, budget and prices.
    pub fn new(profile: Profile, rule: SocialRule, family: Family, objective: Objective) -> Self {
        AttackInstance {
            profile,
            rule,
            family,
            objective,
            a_plus: IndividualSet::EMPTY,
            a_minus: IndividualSet::EMPTY,
            pool: None,
            budget: None,
            agent_prices: None,
            pair_prices: None,
            r_restriction: None,
        }
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    pub fn targets(&self) -> IndividualSet {
        self.a_plus.union(self.a_minus)
    }

    /// The electorate the attack starts from: `T` for adding, `N` otherwise.
    pub fn start(&self) -> IndividualSet {
        match self.family {
            Family::Gcai => self.pool.unwrap_or_default(),
            _ => self.profile.everyone(),
        }
    }

    pub fn agent_price(&self, a: usize) -> u64 {
        self.agent_prices.as_ref().map_or(1, |p| p[a])
    }

    pub fn pair_price(&self, a: usize, b: usize) -> u64 {
        self.pair_prices.as_ref().map_or(1, |p| p[a * self.n() + b])
    }

    pub fn agent_cost(&self, set: IndividualSet) -> u64 {
        set.iter().map(|a| self.agent_price(a)).sum()
    }

    /// Whether a final qualified set meets the attacker's goal.
    pub fn achieved_by(&self, qualified: IndividualSet) -> bool {
        self.a_plus.is_subset(qualified) && self.a_minus.is_disjoint(qualified)
    }

    /// Individuals the attacker may touch: `N∖T` (adding), `N∖(A⁺∪A⁻)`
    /// (deleting), `N` otherwise.
    pub fn action_domain(&self) -> IndividualSet {
        let everyone = self.profile.everyone();
        match self.family {
            Family::Gcai => everyone.difference(self.start()),
            Family::Gcdi => everyone.difference(self.targets()),
            _ => everyone,
        }
    }

    pub fn initial_qualified(&self) -> Result<IndividualSet> {
        crate::rule::eval(&self.rule, self.start(), &self.profile)
    }

    /// `A⁺ ⊆ f(start)` and `A⁻ ∩ f(start) = ∅`: the empty action already works.
    pub fn is_trivially_satisfied(&self) -> Result<bool> {
        Ok(self.achieved_by(self.initial_qualified()?))
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate(self)
    }

    /// Fails on any violation other than the nontriviality warnings.
    pub fn ensure_well_formed(&self) -> Result<()> {
        let hard: Vec<String> = validate(self)
            .into_iter()
            .filter(|v| !v.is_warning())
            .map(|v| v.to_string())
            .collect();
        if hard.is_empty() {
            Ok(())
        } else {
            Err(Error::PreconditionViolated(hard.join("; ")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DisjointnessViolated(IndividualSet),
    IndexOutOfRange(usize),
    PoolMissing,
    UnexpectedPool,
    TargetsOutsidePool(IndividualSet),
    ExactCoverageViolated,
    /// constructive with a nonempty `A⁻`, or destructive with a nonempty `A⁺`
    ObjectiveMismatch,
    BudgetMissing,
    UnexpectedBudget,
    InvalidPrices(String),
    RRestrictionViolated(usize),
    UnsupportedProfileKind(ProfileKind),
    RuleInvalid(Error),
    /// every member of a nonempty `A⁺` is already qualified
    TargetsAlreadyQualified,
    /// no member of a nonempty `A⁻` is currently qualified
    TargetsAlreadyDisqualified,
}

impl Violation {
    /// Nontriviality complaints are warnings; solvers still accept the instance.
    pub fn is_warning(&self) -> bool {
        matches!(
            self,
            Violation::TargetsAlreadyQualified | Violation::TargetsAlreadyDisqualified
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            Violation::DisjointnessViolated(_) => "DisjointnessViolated",
            Violation::IndexOutOfRange(_) => "IndexOutOfRange",
            Violation::PoolMissing => "PoolMissing",
            Violation::UnexpectedPool => "UnexpectedPool",
            Violation::TargetsOutsidePool(_) => "TargetsOutsidePool",
            Violation::ExactCoverageViolated => "ExactCoverageViolated",
            Violation::ObjectiveMismatch => "ObjectiveMismatch",
            Violation::BudgetMissing => "BudgetMissing",
            Violation::UnexpectedBudget => "UnexpectedBudget",
            Violation::InvalidPrices(_) => "InvalidPrices",
            Violation::RRestrictionViolated(_) => "RRestrictionViolated",
            Violation::UnsupportedProfileKind(_) => "UnsupportedProfileKind",
            Violation::RuleInvalid(_) => "RuleInvalid",
            Violation::TargetsAlreadyQualified => "TargetsAlreadyQualified",
            Violation::TargetsAlreadyDisqualified => "TargetsAlreadyDisqualified",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DisjointnessViolated(s) => write!(f, "A+ and A- overlap in {s:?}"),
            Violation::IndexOutOfRange(i) => write!(f, "individual index {i} out of range"),
            Violation::TargetsOutsidePool(s) => write!(f, "targets {s:?} are not in the pool"),
            Violation::InvalidPrices(m) => write!(f, "invalid prices: {m}"),
            Violation::RRestrictionViolated(r) => {
                write!(f, "profile is not an r-profile for r={r}")
            }
            Violation::UnsupportedProfileKind(k) => {
                write!(f, "{k} profiles are not supported for this family")
            }
            Violation::RuleInvalid(e) => write!(f, "{e}"),
            other => f.write_str(other.name()),
        }
    }
}

pub fn validate(inst: &AttackInstance) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = inst.n();
    let everyone = inst.profile.everyone();

    for set in [inst.a_plus, inst.a_minus, inst.pool.unwrap_or_default()] {
        if let Some(i) = set.difference(everyone).first() {
            out.push(Violation::IndexOutOfRange(i));
        }
    }
    let overlap = inst.a_plus.intersection(inst.a_minus);
    if !overlap.is_empty() {
        out.push(Violation::DisjointnessViolated(overlap));
    }

    match (inst.family, inst.pool) {
        (Family::Gcai, None) => out.push(Violation::PoolMissing),
        (Family::Gcai, Some(pool)) => {
            let outside = inst.targets().difference(pool);
            if !outside.is_empty() {
                out.push(Violation::TargetsOutsidePool(outside));
            }
        }
        (_, Some(_)) => out.push(Violation::UnexpectedPool),
        _ => {}
    }

    match inst.objective {
        Objective::Constructive if !inst.a_minus.is_empty() => out.push(Violation::ObjectiveMismatch),
        Objective::Destructive if !inst.a_plus.is_empty() => out.push(Violation::ObjectiveMismatch),
        Objective::Exact => {
            let cover = match inst.family {
                Family::Gcai => inst.start(),
                _ => everyone,
            };
            if inst.targets() != cover {
                out.push(Violation::ExactCoverageViolated);
            }
        }
        _ => {}
    }

    match (inst.family.has_budget(), inst.budget) {
        (true, None) => out.push(Violation::BudgetMissing),
        (false, Some(_)) => out.push(Violation::UnexpectedBudget),
        _ => {}
    }

    if let Some(p) = &inst.agent_prices {
        if inst.family != Family::Gb {
            out.push(Violation::InvalidPrices("agent prices only apply to bribery".into()));
        } else if p.len() != n || p.contains(&0) {
            out.push(Violation::InvalidPrices(
                "need one positive price per individual".into(),
            ));
        }
    }
    if let Some(p) = &inst.pair_prices {
        if inst.family != Family::Gmb {
            out.push(Violation::InvalidPrices(
                "pair prices only apply to microbribery".into(),
            ));
        } else if p.len() != n * n || p.contains(&0) {
            out.push(Violation::InvalidPrices("need one positive price per pair".into()));
        }
    }

    let kind = inst.profile.kind();
    let kind_ok = match inst.family {
        Family::Gmb => kind != ProfileKind::Partial,
        _ => kind == ProfileKind::Binary,
    };
    if !kind_ok {
        out.push(Violation::UnsupportedProfileKind(kind));
    }

    if let Some(r) = inst.r_restriction {
        if r == 0 || !inst.profile.is_r_profile(r) {
            out.push(Violation::RRestrictionViolated(r));
        }
    }

    let rule_ok = match inst.rule.validate_for(kind, n) {
        Ok(()) => true,
        Err(e) => {
            out.push(Violation::RuleInvalid(e));
            false
        }
    };

    // nontriviality only makes sense once everything above is sound
    if out.is_empty() && rule_ok {
        let qualified = eval_unchecked(&inst.rule, inst.start(), &inst.profile);
        if !inst.a_plus.is_empty() && inst.a_plus.is_subset(qualified) {
            out.push(Violation::TargetsAlreadyQualified);
        }
        if !inst.a_minus.is_empty() && inst.a_minus.is_disjoint(qualified) {
            out.push(Violation::TargetsAlreadyDisqualified);
        }
    }
    out
}

/// A bribed individual together with its complete replacement row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RowRewrite {
    pub individual: usize,
    pub qualifies: IndividualSet,
}

/// One changed entry: `evaluator`'s opinion of `evaluated` becomes `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairChange {
    pub evaluator: usize,
    pub evaluated: usize,
    pub value: CellValue,
}

/// The two values a microbribery may write.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellValue {
    Qualify,
    Disqualify,
}

impl CellValue {
    pub fn cell(self) -> Cell {
        match self {
            CellValue::Qualify => Cell::Qualify,
            CellValue::Disqualify => Cell::Disqualify,
        }
    }

    pub fn opposite_of(cell: Cell) -> Option<CellValue> {
        match cell {
            Cell::Qualify => Some(CellValue::Disqualify),
            Cell::Disqualify => Some(CellValue::Qualify),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Solution {
    Added(IndividualSet),
    Deleted(IndividualSet),
    Partition(IndividualSet),
    Bribed(Vec<RowRewrite>),
    Flipped(Vec<PairChange>),
}

impl Solution {
    /// The do-nothing action for a family.
    pub fn empty_for(family: Family) -> Solution {
        match family {
            Family::Gcai => Solution::Added(IndividualSet::EMPTY),
            Family::Gcdi => Solution::Deleted(IndividualSet::EMPTY),
            Family::Gcpi => Solution::Partition(IndividualSet::EMPTY),
            Family::Gb => Solution::Bribed(Vec::new()),
            Family::Gmb => Solution::Flipped(Vec::new()),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Solution::Added(_) => Family::Gcai,
            Solution::Deleted(_) => Family::Gcdi,
            Solution::Partition(_) => Family::Gcpi,
            Solution::Bribed(_) => Family::Gb,
            Solution::Flipped(_) => Family::Gmb,
        }
    }

    /// Individuals named by the witness (added, deleted, one side of the
    /// partition, or bribed).
    pub fn individuals(&self) -> IndividualSet {
        match self {
            Solution::Added(s) | Solution::Deleted(s) | Solution::Partition(s) => *s,
            Solution::Bribed(rows) => rows.iter().map(|r| r.individual).collect(),
            Solution::Flipped(pairs) => pairs.iter().map(|p| p.evaluator).collect(),
        }
    }

    /// Cost under the instance's price functions (size when unpriced).
    pub fn cost(&self, inst: &AttackInstance) -> u64 {
        match self {
            Solution::Added(s) | Solution::Deleted(s) => s.len() as u64,
            Solution::Partition(_) => 0,
            Solution::Bribed(rows) => rows.iter().map(|r| inst.agent_price(r.individual)).sum(),
            Solution::Flipped(pairs) => pairs.iter().map(|p| inst.pair_price(p.evaluator, p.evaluated)).sum(),
        }
    }
}

/// Final qualified set after applying a solution, with domain checks.
pub fn apply(inst: &AttackInstance, solution: &Solution) -> Result<IndividualSet> {
    if solution.family() != inst.family {
        return Err(Error::KindMismatch(inst.family.to_string()));
    }
    let p = &inst.profile;
    inst.rule.validate_for(p.kind(), p.n())?;
    let rule = &inst.rule;
    let everyone = p.everyone();
    Ok(match solution {
        Solution::Added(u) => {
            if !u.is_subset(inst.action_domain()) {
                return Err(Error::WitnessOutOfDomain(
                    "added individuals must come from outside the pool".into(),
                ));
            }
            eval_unchecked(rule, inst.start().union(*u), p)
        }
        Solution::Deleted(u) => {
            if !u.is_subset(inst.action_domain()) {
                return Err(Error::WitnessOutOfDomain(
                    "deleted individuals must lie outside A+ and A-".into(),
                ));
            }
            eval_unchecked(rule, everyone.difference(*u), p)
        }
        Solution::Partition(u) => {
            p.check_set(*u)?;
            let first = eval_unchecked(rule, *u, p);
            let second = eval_unchecked(rule, everyone.difference(*u), p);
            eval_unchecked(rule, first.union(second), p)
        }
        Solution::Bribed(rows) => {
            let mut bribed = p.clone();
            let mut seen = IndividualSet::EMPTY;
            for rw in rows {
                p.check_index(rw.individual)?;
                p.check_set(rw.qualifies)?;
                if seen.contains(rw.individual) {
                    return Err(Error::WitnessOutOfDomain(format!(
                        "individual {} bribed twice",
                        rw.individual
                    )));
                }
                seen.insert(rw.individual);
                bribed.set_row(rw.individual, rw.qualifies)?;
            }
            eval_unchecked(rule, everyone, &bribed)
        }
        Solution::Flipped(pairs) => {
            let mut bribed = p.clone();
            let mut seen = std::collections::HashSet::new();
            for pc in pairs {
                p.check_index(pc.evaluator)?;
                p.check_index(pc.evaluated)?;
                if !seen.insert((pc.evaluator, pc.evaluated)) {
                    return Err(Error::WitnessOutOfDomain("pair changed twice".into()));
                }
                if p.cell(pc.evaluator, pc.evaluated) == pc.value.cell() {
                    return Err(Error::WitnessOutOfDomain("changed entry keeps its old value".into()));
                }
                bribed.set(pc.evaluator, pc.evaluated, pc.value.cell())?;
            }
            eval_unchecked(rule, everyone, &bribed)
        }
    })
}

/// True iff the solution reaches the goal within budget.
pub fn check_witness(inst: &AttackInstance, solution: &Solution) -> Result<bool> {
    let qualified = apply(inst, solution)?;
    let within_budget = match inst.family {
        Family::Gcpi => true,
        _ => {
            let budget = inst
                .budget
                .ok_or_else(|| Error::PreconditionViolated("instance has no budget".into()))?;
            solution.cost(inst) <= budget
        }
    };
    Ok(within_budget && inst.achieved_by(qualified))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
    Immune,
}

impl Answer {
    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
            Answer::Immune => "IMMUNE",
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub answer: Answer,
    pub witness: Option<Solution>,
    pub immunity_tag: Option<&'static str>,
}

impl Verdict {
    pub fn yes(witness: Solution) -> Verdict {
        Verdict {
            answer: Answer::Yes,
            witness: Some(witness),
            immunity_tag: None,
        }
    }

    pub fn no() -> Verdict {
        Verdict {
            answer: Answer::No,
            witness: None,
            immunity_tag: None,
        }
    }

    pub fn immune(tag: &'static str) -> Verdict {
        Verdict {
            answer: Answer::Immune,
            witness: None,
            immunity_tag: Some(tag),
        }
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }
}

/// Per-target slack: how many (dis)qualifications are missing and how many
/// individuals could supply them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slack {
    pub missing: usize,
    pub choices: usize,
}

impl Slack {
    pub fn excess(self) -> i64 {
        self.choices as i64 - self.missing as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceDiagnostics {
    /// `None` when `A⁺` is empty.
    pub s_star: Option<i64>,
    /// `None` when `A⁻` is empty.
    pub t_star: Option<i64>,
    pub per_individual: BTreeMap<usize, Slack>,
}

/// `s* = max_{a∈A⁺} (choices − missing)` for `t = 1` and self-qualifying
/// targets; `t*` symmetric for `s = 1` and self-disqualifying `A⁻`.
pub fn diagnostics(inst: &AttackInstance) -> Result<InstanceDiagnostics> {
    let SocialRule::Consent { s, t } = inst.rule else {
        return Err(Error::PreconditionViolated("diagnostics need a consent rule".into()));
    };
    let p = &inst.profile;
    if p.kind() != ProfileKind::Binary {
        return Err(Error::WrongKind {
            expected: ProfileKind::Binary,
            got: p.kind(),
        });
    }
    let everyone = p.everyone();
    let mut per_individual = BTreeMap::new();

    let mut s_star = None;
    if !inst.a_plus.is_empty() {
        if t != 1 || !inst.a_plus.iter().all(|a| p.is_self_qualifying(a)) {
            return Err(Error::PreconditionViolated(
                "s* needs t = 1 and self-qualifying A+".into(),
            ));
        }
        for a in inst.a_plus {
            let slack = Slack {
                missing: s.saturating_sub(p.qualifiers(a, everyone).len()),
                choices: p.disqualifiers(a, everyone).len(),
            };
            per_individual.insert(a, slack);
            s_star = Some(s_star.map_or(slack.excess(), |m: i64| m.max(slack.excess())));
        }
    }

    let mut t_star = None;
    if !inst.a_minus.is_empty() {
        if s != 1 || !inst.a_minus.iter().all(|a| p.is_self_disqualifying(a)) {
            return Err(Error::PreconditionViolated(
                "t* needs s = 1 and self-disqualifying A-".into(),
            ));
        }
        for a in inst.a_minus {
            let slack = Slack {
                missing: t.saturating_sub(p.disqualifiers(a, everyone).len()),
                choices: p.qualifiers(a, everyone).len(),
            };
            per_individual.insert(a, slack);
            t_star = Some(t_star.map_or(slack.excess(), |m: i64| m.max(slack.excess())));
        }
    }

    Ok(InstanceDiagnostics {
        s_star,
        t_star,
        per_individual,
    })
}
