//! Integer program for consent-rule control by adding or deleting, with one
//! variable per opinion vector over the targets, solved by depth-first
//! branch and bound.

use crate::error::{Error, Result};
use crate::instance::{AttackInstance, Family, Solution, Verdict};
use crate::rule::SocialRule;
use crate::set::IndividualSet;

use super::immunity::check_immunity;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    AtLeast,
    AtMost,
}

/// `Σ coeffs[j] · x_j (sense) rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub label: String,
    pub coeffs: Vec<i64>,
    pub sense: Sense,
    pub rhs: i64,
}

impl LinearConstraint {
    fn holds(&self, x: &[u64]) -> bool {
        let lhs: i64 = self.coeffs.iter().zip(x).map(|(c, &v)| c * v as i64).sum();
        match self.sense {
            Sense::AtLeast => lhs >= self.rhs,
            Sense::AtMost => lhs <= self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpModel {
    pub family: Family,
    /// `A⁺` in index order followed by `A⁻` in index order.
    pub targets: Vec<usize>,
    /// Realized opinion vectors (`true` = qualifies), lexicographic with
    /// `-1 < +1`.
    pub beta_vectors: Vec<Vec<bool>>,
    /// Individuals realizing each vector, ascending.
    pub members: Vec<Vec<usize>>,
    pub constraints: Vec<LinearConstraint>,
    pub budget: u64,
}

pub const DEFAULT_MAX_VECTORS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IlpOptions {
    pub max_vectors: usize,
    pub node_limit: Option<u128>,
}

impl Default for IlpOptions {
    fn default() -> Self {
        IlpOptions {
            max_vectors: DEFAULT_MAX_VECTORS,
            node_limit: Some(50_000_000),
        }
    }
}

impl IlpModel {
    pub fn build(inst: &AttackInstance, opts: &IlpOptions) -> Result<IlpModel> {
        if !matches!(inst.family, Family::Gcai | Family::Gcdi) {
            return Err(Error::PreconditionViolated("the ILP covers GCAI and GCDI".into()));
        }
        let SocialRule::Consent { s, t } = inst.rule else {
            return Err(Error::PreconditionViolated("the ILP needs a consent rule".into()));
        };
        inst.ensure_well_formed()?;
        let p = &inst.profile;
        let targets: Vec<usize> = inst.a_plus.iter().chain(inst.a_minus.iter()).collect();
        let domain = inst.action_domain();

        let mut groups: std::collections::BTreeMap<Vec<bool>, Vec<usize>> = Default::default();
        for b in domain {
            let beta = targets
                .iter()
                .map(|&a| p.cell(b, a) == crate::profile::Cell::Qualify)
                .collect();
            groups.entry(beta).or_default().push(b);
        }
        if groups.len() > opts.max_vectors {
            return Err(Error::InstanceTooLarge {
                needed: groups.len() as u128,
                limit: opts.max_vectors as u128,
            });
        }
        let (beta_vectors, members): (Vec<_>, Vec<_>) = groups.into_iter().unzip();
        let m = beta_vectors.len();
        let budget = inst.budget.unwrap_or(0);

        // adding counts from T upward; deleting counts from N downward
        let (electorate, sign) = match inst.family {
            Family::Gcai => (inst.start(), 1i64),
            _ => (p.everyone(), -1i64),
        };
        let mut constraints = vec![LinearConstraint {
            label: "(2) budget".into(),
            coeffs: vec![1; m],
            sense: Sense::AtMost,
            rhs: budget as i64,
        }];
        for (i, &a) in targets.iter().enumerate() {
            let wants_qualified = i < inst.a_plus.len();
            let self_plus = p.is_self_qualifying(a);
            let base = if self_plus {
                p.qualifiers(a, electorate).len()
            } else {
                p.disqualifiers(a, electorate).len()
            } as i64;
            let coeffs = beta_vectors
                .iter()
                .map(|beta| if beta[i] == self_plus { sign } else { 0 })
                .collect();
            let (label, sense, bound) = match (wants_qualified, self_plus) {
                (true, true) => ("(3.1)", Sense::AtLeast, s as i64),
                (true, false) => ("(3.2)", Sense::AtMost, t as i64 - 1),
                (false, true) => ("(4.1)", Sense::AtMost, s as i64 - 1),
                (false, false) => ("(4.2)", Sense::AtLeast, t as i64),
            };
            constraints.push(LinearConstraint {
                label: format!("{label} {}", p.name(a)),
                coeffs,
                sense,
                rhs: bound - base,
            });
        }
        Ok(IlpModel {
            family: inst.family,
            targets,
            beta_vectors,
            members,
            constraints,
            budget,
        })
    }

    pub fn upper_bounds(&self) -> Vec<u64> {
        self.members.iter().map(|m| m.len() as u64).collect()
    }

    /// Bounds (1) and every linear constraint.
    pub fn is_feasible(&self, x: &[u64]) -> bool {
        x.len() == self.members.len()
            && x.iter().zip(self.upper_bounds()).all(|(&v, ub)| v <= ub)
            && self.constraints.iter().all(|c| c.holds(x))
    }

    /// Takes the first `x_β` members of each group.
    pub fn witness(&self, x: &[u64]) -> Solution {
        let u: IndividualSet = self
            .members
            .iter()
            .zip(x)
            .flat_map(|(m, &k)| m.iter().copied().take(k as usize))
            .collect();
        match self.family {
            Family::Gcai => Solution::Added(u),
            _ => Solution::Deleted(u),
        }
    }

    /// Counts of a witness's individuals per group; `None` if it names
    /// someone outside the action domain.
    pub fn assignment_of(&self, u: IndividualSet) -> Option<Vec<u64>> {
        let mut x = vec![0u64; self.members.len()];
        for b in u {
            let j = self.members.iter().position(|m| m.contains(&b))?;
            x[j] += 1;
        }
        Some(x)
    }

    /// Depth-first search over the variables in order, smallest values first.
    pub fn solve(&self, node_limit: Option<u128>) -> Result<Option<Vec<u64>>> {
        let ub = self.upper_bounds();
        let mut x = vec![0u64; ub.len()];
        let mut nodes = 0u128;
        let found = self.dfs(0, &ub, &mut x, &mut nodes, node_limit)?;
        Ok(found.then_some(x))
    }

    fn dfs(&self, j: usize, ub: &[u64], x: &mut Vec<u64>, nodes: &mut u128, limit: Option<u128>) -> Result<bool> {
        *nodes += 1;
        if let Some(l) = limit {
            if *nodes > l {
                return Err(Error::InstanceTooLarge {
                    needed: *nodes,
                    limit: l,
                });
            }
        }
        if !self.can_still_satisfy(j, ub, x) {
            return Ok(false);
        }
        if j == ub.len() {
            return Ok(self.is_feasible(x));
        }
        for v in 0..=ub[j] {
            x[j] = v;
            if self.dfs(j + 1, ub, x, nodes, limit)? {
                return Ok(true);
            }
        }
        x[j] = 0;
        Ok(false)
    }

    /// Interval bound: with variables `< j` fixed and the rest free in
    /// their boxes (and in what is left of the budget), can each constraint
    /// still hold?
    fn can_still_satisfy(&self, j: usize, ub: &[u64], x: &[u64]) -> bool {
        let used: u64 = x[..j].iter().sum();
        if used > self.budget {
            return false;
        }
        let left = (self.budget - used) as i64;
        self.constraints.iter().all(|c| {
            let fixed: i64 = c.coeffs[..j].iter().zip(x).map(|(k, &v)| k * v as i64).sum();
            let mut pos = 0i64;
            let mut neg = 0i64;
            for (k, &u) in c.coeffs[j..].iter().zip(&ub[j..]) {
                if *k > 0 {
                    pos += k * u as i64;
                } else {
                    neg += k * u as i64;
                }
            }
            let hi = fixed + pos.min(left);
            let lo = fixed + neg.max(-left);
            match c.sense {
                Sense::AtLeast => hi >= c.rhs,
                Sense::AtMost => lo <= c.rhs,
            }
        })
    }
}

pub fn solve_fpt_ilp(inst: &AttackInstance) -> Result<Verdict> {
    solve_fpt_ilp_with(inst, &IlpOptions::default())
}

pub fn solve_fpt_ilp_with(inst: &AttackInstance, opts: &IlpOptions) -> Result<Verdict> {
    let model = IlpModel::build(inst, opts)?;
    if let Some(tag) = check_immunity(inst).theorem_tag {
        return Ok(Verdict::immune(tag));
    }
    Ok(match model.solve(opts.node_limit)? {
        Some(x) => Verdict::yes(model.witness(&x)),
        None => Verdict::no(),
    })
}
