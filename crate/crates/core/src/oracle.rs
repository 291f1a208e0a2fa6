//! Exhaustive solvers. They enumerate every candidate action in a fixed
//! order (size first, then lexicographic) and are the reference the
//! specialized algorithms are tested against.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::instance::{AttackInstance, CellValue, Family, PairChange, RowRewrite, Solution, Verdict};
use crate::profile::{Cell, Profile, ProfileKind};
use crate::rule::{eval_unchecked, SocialRule};
use crate::set::IndividualSet;

pub const DEFAULT_NODE_LIMIT: u128 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Extra cap on the number of individuals (or pairs) in a candidate.
    pub max_subset_size: Option<usize>,
    /// Upper bound on the number of candidates examined.
    pub node_limit: Option<u128>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_subset_size: None,
            node_limit: Some(DEFAULT_NODE_LIMIT),
        }
    }
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget {
            max_subset_size: None,
            node_limit: None,
        }
    }

    pub fn with_node_limit(limit: u128) -> Self {
        SearchBudget {
            max_subset_size: None,
            node_limit: Some(limit),
        }
    }

    fn admit(&self, needed: u128) -> Result<()> {
        match self.node_limit {
            Some(limit) if needed > limit => Err(Error::InstanceTooLarge { needed, limit }),
            _ => Ok(()),
        }
    }

    fn cap(&self, k: usize) -> usize {
        self.max_subset_size.map_or(k, |m| m.min(k))
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of subsets of an `m`-set with at most `k` elements.
fn subsets_up_to(m: usize, k: usize) -> u128 {
    (0..=k.min(m)).map(|i| binomial(m, i)).fold(0u128, u128::saturating_add)
}

/// Subsets of `domain` with at most `k` members, by size then lexicographic.
pub(crate) fn subsets_by_size(domain: IndividualSet, k: usize) -> impl Iterator<Item = IndividualSet> {
    let items = domain.to_vec();
    let k = k.min(items.len());
    (0..=k).flat_map(move |size| {
        items
            .clone()
            .into_iter()
            .combinations(size)
            .map(|c| c.into_iter().collect::<IndividualSet>())
    })
}

fn budget_of(inst: &AttackInstance) -> Result<u64> {
    inst.budget
        .ok_or_else(|| Error::PreconditionViolated("instance has no budget".into()))
}

pub fn solve_control_brute(inst: &AttackInstance, sb: &SearchBudget) -> Result<Verdict> {
    if !inst.family.is_control() {
        return Err(Error::PreconditionViolated(format!(
            "{} is not a control problem",
            inst.family
        )));
    }
    inst.ensure_well_formed()?;
    let p = &inst.profile;
    let rule = &inst.rule;
    let everyone = p.everyone();
    match inst.family {
        Family::Gcai | Family::Gcdi => {
            let domain = inst.action_domain();
            let k = sb.cap(budget_of(inst)?.min(domain.len() as u64) as usize);
            sb.admit(subsets_up_to(domain.len(), k))?;
            let adding = inst.family == Family::Gcai;
            for u in subsets_by_size(domain, k) {
                let electorate = if adding {
                    inst.start().union(u)
                } else {
                    everyone.difference(u)
                };
                if inst.achieved_by(eval_unchecked(rule, electorate, p)) {
                    let w = if adding {
                        Solution::Added(u)
                    } else {
                        Solution::Deleted(u)
                    };
                    return Ok(Verdict::yes(w));
                }
            }
            Ok(Verdict::no())
        }
        _ => {
            // U and N∖U play symmetric roles, so the first individual stays in U
            let n = p.n();
            if n == 0 {
                let q = eval_unchecked(rule, IndividualSet::EMPTY, p);
                return Ok(if inst.achieved_by(q) {
                    Verdict::yes(Solution::Partition(IndividualSet::EMPTY))
                } else {
                    Verdict::no()
                });
            }
            sb.admit(1u128 << (n - 1))?;
            let rest = everyone.without(0);
            for extra in subsets_by_size(rest, n - 1) {
                let u = extra.with(0);
                let v = eval_unchecked(rule, u, p).union(eval_unchecked(rule, everyone.difference(u), p));
                if inst.achieved_by(eval_unchecked(rule, v, p)) {
                    return Ok(Verdict::yes(Solution::Partition(u)));
                }
            }
            Ok(Verdict::no())
        }
    }
}

/// Rewrite for a bribed individual: qualify itself and `A⁺`, disqualify the
/// rest. Entries into `A⁺` and `A⁻` are dominant; for column-local rules the
/// remaining entries do not matter.
fn canonical_row(inst: &AttackInstance, a: usize) -> IndividualSet {
    inst.a_plus.with(a).difference(inst.a_minus)
}

pub fn solve_bribery_brute(inst: &AttackInstance, sb: &SearchBudget) -> Result<Verdict> {
    if inst.family != Family::Gb {
        return Err(Error::PreconditionViolated("bribery oracle needs a GB instance".into()));
    }
    inst.ensure_well_formed()?;
    let p = &inst.profile;
    let n = p.n();
    let budget = budget_of(inst)?;
    let k = sb.cap(budget.min(n as u64) as usize);
    let everyone = p.everyone();
    let column_local = inst.rule.is_column_local();

    // entries of bribed rows pointing at targets are fixed; the rest are free
    // for the iterative rules
    let free = everyone.difference(inst.targets());
    let needed: u128 = if column_local {
        subsets_up_to(n, k)
    } else {
        (0..=k.min(n))
            .map(|i| {
                let per = 1u128.checked_shl((i * free.len()) as u32).unwrap_or(u128::MAX);
                binomial(n, i).saturating_mul(per)
            })
            .fold(0u128, u128::saturating_add)
    };
    sb.admit(needed)?;

    for u in subsets_by_size(everyone, k) {
        if inst.agent_cost(u) > budget {
            continue;
        }
        let members = u.to_vec();
        let base = inst.a_plus;
        let mut tried: Vec<Vec<IndividualSet>> = vec![members.iter().map(|&a| canonical_row(inst, a)).collect()];
        if !column_local {
            tried.push(vec![everyone.difference(inst.a_minus); members.len()]);
        }
        for rows in &tried {
            if let Some(w) = bribe_succeeds(inst, &members, rows) {
                return Ok(Verdict::yes(w));
            }
        }
        if column_local {
            continue;
        }
        // every assignment of the free entries, row by row
        let free_items = free.to_vec();
        let per_row = 1u64 << free_items.len();
        let total = (per_row as u128).pow(members.len() as u32);
        for code in 0..total {
            let mut c = code;
            let rows: Vec<IndividualSet> = members
                .iter()
                .map(|_| {
                    let bits = (c % per_row as u128) as u64;
                    c /= per_row as u128;
                    let extra: IndividualSet = free_items
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| bits >> i & 1 == 1)
                        .map(|(_, &b)| b)
                        .collect();
                    base.union(extra)
                })
                .collect();
            if let Some(w) = bribe_succeeds(inst, &members, &rows) {
                return Ok(Verdict::yes(w));
            }
        }
    }
    Ok(Verdict::no())
}

fn bribe_succeeds(inst: &AttackInstance, members: &[usize], rows: &[IndividualSet]) -> Option<Solution> {
    let mut bribed = inst.profile.clone();
    for (&a, &row) in members.iter().zip(rows) {
        bribed.set_row(a, row).ok()?;
    }
    let q = eval_unchecked(&inst.rule, bribed.everyone(), &bribed);
    inst.achieved_by(q).then(|| {
        Solution::Bribed(
            members
                .iter()
                .zip(rows)
                .map(|(&individual, &qualifies)| RowRewrite { individual, qualifies })
                .collect(),
        )
    })
}

/// The values a microbribery may write into a cell.
pub(crate) fn change_options(cell: Cell) -> &'static [CellValue] {
    match cell {
        Cell::Qualify => &[CellValue::Disqualify],
        Cell::Disqualify => &[CellValue::Qualify],
        _ => &[CellValue::Qualify, CellValue::Disqualify],
    }
}

pub fn solve_microbribery_brute(inst: &AttackInstance, sb: &SearchBudget) -> Result<Verdict> {
    if inst.family != Family::Gmb {
        return Err(Error::PreconditionViolated(
            "microbribery oracle needs a GMB instance".into(),
        ));
    }
    inst.ensure_well_formed()?;
    let p = &inst.profile;
    let n = p.n();
    let budget = budget_of(inst)?;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let k = sb.cap(budget.min(pairs.len() as u64) as usize);
    let branching = if p.kind() == ProfileKind::Ternary { 2u128 } else { 1 };
    let needed = (0..=k)
        .map(|i| binomial(pairs.len(), i).saturating_mul(branching.saturating_pow(i as u32)))
        .fold(0u128, u128::saturating_add);
    sb.admit(needed)?;

    let everyone = p.everyone();
    for size in 0..=k {
        for chosen in pairs.iter().copied().combinations(size) {
            let cost: u64 = chosen.iter().map(|&(a, b)| inst.pair_price(a, b)).sum();
            if cost > budget {
                continue;
            }
            let options: Vec<&[CellValue]> = chosen.iter().map(|&(a, b)| change_options(p.cell(a, b))).collect();
            let mut assignment = vec![0usize; size];
            loop {
                let mut bribed = p.clone();
                for (i, &(a, b)) in chosen.iter().enumerate() {
                    // indices are in range and values admitted by the kind
                    let _ = bribed.set(a, b, options[i][assignment[i]].cell());
                }
                if inst.achieved_by(eval_unchecked(&inst.rule, everyone, &bribed)) {
                    let changes = chosen
                        .iter()
                        .enumerate()
                        .map(|(i, &(a, b))| PairChange {
                            evaluator: a,
                            evaluated: b,
                            value: options[i][assignment[i]],
                        })
                        .collect();
                    return Ok(Verdict::yes(Solution::Flipped(changes)));
                }
                // odometer over the per-entry options
                let mut i = 0;
                while i < size {
                    assignment[i] += 1;
                    if assignment[i] < options[i].len() {
                        break;
                    }
                    assignment[i] = 0;
                    i += 1;
                }
                if i == size {
                    break;
                }
            }
        }
    }
    Ok(Verdict::no())
}

/// Number of ways to fill the open cells of each row so that the row has
/// exactly `r` positive entries, or the reason none exists.
pub fn r_extension_counts(profile: &Profile, r: usize) -> Result<Vec<(usize, usize)>> {
    let n = profile.n();
    if r == 0 || r > n {
        return Err(Error::InvalidR { r, n });
    }
    (0..n)
        .map(|b| {
            let known = profile.qualified_by(b).len();
            let open = profile.open_in_row(b).len();
            if known > r || known + open < r {
                Err(Error::NoRExtension {
                    r,
                    reason: format!(
                        "row {} has {known} known +1 and {open} unknown entries",
                        profile.name(b)
                    ),
                })
            } else {
                Ok((r - known, open))
            }
        })
        .collect()
}

/// Calls `visit` on every binary extension of a partial profile (only
/// `r`-extensions when `r` is set) until it returns `false`.
pub fn for_each_extension<F>(profile: &Profile, r: Option<usize>, sb: &SearchBudget, mut visit: F) -> Result<()>
where
    F: FnMut(&Profile) -> bool,
{
    if profile.kind() == ProfileKind::Ternary {
        return Err(Error::WrongKind {
            expected: ProfileKind::Partial,
            got: ProfileKind::Ternary,
        });
    }
    let n = profile.n();
    let base = {
        let mut b = Profile::filled(ProfileKind::Binary, n, Cell::Disqualify)?;
        b.set_names(profile.names().to_vec())?;
        for a in 0..n {
            b.set_row(a, profile.qualified_by(a))?;
        }
        b
    };
    let row_choices: Vec<Vec<IndividualSet>> = match r {
        Some(r) => {
            let counts = r_extension_counts(profile, r)?;
            let needed = counts
                .iter()
                .map(|&(k, c)| binomial(c, k))
                .fold(1u128, u128::saturating_mul);
            sb.admit(needed)?;
            (0..n)
                .map(|b| {
                    profile
                        .open_in_row(b)
                        .to_vec()
                        .into_iter()
                        .combinations(counts[b].0)
                        .map(|c| c.into_iter().collect())
                        .collect()
                })
                .collect()
        }
        None => {
            let open = profile.count_open();
            let needed = 1u128.checked_shl(open as u32).unwrap_or(u128::MAX);
            sb.admit(needed)?;
            (0..n)
                .map(|b| {
                    let cells = profile.open_in_row(b);
                    let items = cells.to_vec();
                    (0u64..1 << items.len())
                        .map(|bits| {
                            items
                                .iter()
                                .enumerate()
                                .filter(|(i, _)| bits >> i & 1 == 1)
                                .map(|(_, &x)| x)
                                .collect()
                        })
                        .collect()
                })
                .collect()
        }
    };
    let mut idx = vec![0usize; n];
    let mut ext = base.clone();
    loop {
        for a in 0..n {
            ext.set_row(a, profile.qualified_by(a).union(row_choices[a][idx[a]]))?;
        }
        if !visit(&ext) {
            return Ok(());
        }
        let mut a = 0;
        while a < n {
            idx[a] += 1;
            if idx[a] < row_choices[a].len() {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
        if a == n {
            return Ok(());
        }
    }
}

/// `(possible, necessary)` by enumerating every extension.
pub fn pqi_nqi_brute(
    profile: &Profile,
    s: IndividualSet,
    rule: &SocialRule,
    r: Option<usize>,
    sb: &SearchBudget,
) -> Result<(bool, bool)> {
    if s.is_empty() {
        return Err(Error::PreconditionViolated("S must be nonempty".into()));
    }
    profile.check_set(s)?;
    rule.validate_for(ProfileKind::Binary, profile.n())?;
    let mut possible = false;
    let mut necessary = true;
    for_each_extension(profile, r, sb, |ext| {
        let ok = s.is_subset(eval_unchecked(rule, ext.everyone(), ext));
        possible |= ok;
        necessary &= ok;
        !(possible && !necessary)
    })?;
    Ok((possible, necessary))
}

/// Picks the oracle matching the instance's family.
pub fn solve_brute(inst: &AttackInstance, sb: &SearchBudget) -> Result<Verdict> {
    match inst.family {
        Family::Gcai | Family::Gcdi | Family::Gcpi => solve_control_brute(inst, sb),
        Family::Gb => solve_bribery_brute(inst, sb),
        Family::Gmb => solve_microbribery_brute(inst, sb),
    }
}
