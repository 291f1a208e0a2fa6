//! Possible and necessary qualification on partial profiles, with and
//! without the `r`-extension restriction, plus the max-flow routine the
//! restricted possible case reduces to.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::oracle::{pqi_nqi_brute, r_extension_counts, SearchBudget};
use crate::profile::{Cell, Profile, ProfileKind};
use crate::rule::{eval_unchecked, SocialRule};
use crate::set::IndividualSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub capacity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    vertices: usize,
    source: usize,
    sink: usize,
    arcs: Vec<Arc>,
}

impl FlowNetwork {
    pub fn new(vertices: usize, source: usize, sink: usize) -> Result<Self> {
        if source >= vertices || sink >= vertices || source == sink {
            return Err(Error::PreconditionViolated(format!(
                "bad terminals {source}, {sink} for {vertices} vertices"
            )));
        }
        Ok(FlowNetwork {
            vertices,
            source,
            sink,
            arcs: Vec::new(),
        })
    }

    /// Adds an arc and returns its index.
    pub fn add_arc(&mut self, from: usize, to: usize, capacity: u64) -> Result<usize> {
        if from >= self.vertices || to >= self.vertices {
            return Err(Error::PreconditionViolated(format!("arc {from}->{to} out of range")));
        }
        if to == self.source || from == self.sink {
            return Err(Error::PreconditionViolated(
                "no arcs into the source or out of the sink".into(),
            ));
        }
        self.arcs.push(Arc { from, to, capacity });
        Ok(self.arcs.len() - 1)
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: u64,
    /// Flow on each arc, by arc index.
    pub flow: Vec<u64>,
    /// Arcs leaving the source side of a minimum cut.
    pub min_cut: Vec<usize>,
    /// Vertices on the source side.
    pub source_side: Vec<bool>,
}

/// Edmonds–Karp; arcs are scanned in insertion order, so the result is a
/// function of the network alone.
pub fn max_flow(net: &FlowNetwork) -> MaxFlow {
    let v = net.vertices;
    // residual edge 2i is arc i, 2i+1 its reverse
    let mut cap: Vec<u64> = Vec::with_capacity(2 * net.arcs.len());
    let mut head: Vec<usize> = Vec::with_capacity(2 * net.arcs.len());
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); v];
    for (i, a) in net.arcs.iter().enumerate() {
        cap.push(a.capacity);
        head.push(a.to);
        cap.push(0);
        head.push(a.from);
        adj[a.from].push(2 * i);
        adj[a.to].push(2 * i + 1);
    }
    let mut value = 0u64;
    loop {
        let mut via = vec![usize::MAX; v];
        let mut seen = vec![false; v];
        seen[net.source] = true;
        let mut queue = VecDeque::from([net.source]);
        while let Some(x) = queue.pop_front() {
            for &e in &adj[x] {
                let y = head[e];
                if cap[e] > 0 && !seen[y] {
                    seen[y] = true;
                    via[y] = e;
                    queue.push_back(y);
                }
            }
        }
        if !seen[net.sink] {
            let min_cut = net
                .arcs
                .iter()
                .enumerate()
                .filter(|(_, a)| seen[a.from] && !seen[a.to])
                .map(|(i, _)| i)
                .collect();
            let flow = (0..net.arcs.len()).map(|i| cap[2 * i + 1]).collect();
            return MaxFlow {
                value,
                flow,
                min_cut,
                source_side: seen,
            };
        }
        let mut push = u64::MAX;
        let mut y = net.sink;
        while y != net.source {
            let e = via[y];
            push = push.min(cap[e]);
            y = head[e ^ 1];
        }
        let mut y = net.sink;
        while y != net.source {
            let e = via[y];
            cap[e] -= push;
            cap[e ^ 1] += push;
            y = head[e ^ 1];
        }
        value += push;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryMode {
    Pqi,
    Nqi,
}

impl QueryMode {
    pub fn as_str(self) -> &'static str {
        match self {
            QueryMode::Pqi => "pqi",
            QueryMode::Nqi => "nqi",
        }
    }

    pub fn parse(s: &str) -> Option<QueryMode> {
        match s.to_ascii_lowercase().as_str() {
            "pqi" => Some(QueryMode::Pqi),
            "nqi" => Some(QueryMode::Nqi),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialQuery {
    pub s: IndividualSet,
    pub r: Option<usize>,
    pub mode: QueryMode,
}

fn check_query(profile: &Profile, s: IndividualSet, rule: &SocialRule) -> Result<()> {
    if profile.kind() == ProfileKind::Ternary {
        return Err(Error::WrongKind {
            expected: ProfileKind::Partial,
            got: ProfileKind::Ternary,
        });
    }
    if s.is_empty() {
        return Err(Error::PreconditionViolated("S must be nonempty".into()));
    }
    profile.check_set(s)?;
    rule.validate_for(ProfileKind::Binary, profile.n())
}

/// Resolves every open cell: those in columns of `S` (all of them for
/// CSR/LSR) to `in_s`, the rest to −1.
fn resolve(profile: &Profile, s: IndividualSet, rule: &SocialRule, in_s: Cell) -> Result<Profile> {
    let n = profile.n();
    let mut ext = Profile::filled(ProfileKind::Binary, n, Cell::Disqualify)?;
    ext.set_names(profile.names().to_vec())?;
    let column_local = rule.is_column_local();
    for a in 0..n {
        let mut row = profile.qualified_by(a);
        if in_s == Cell::Qualify {
            let open = profile.open_in_row(a);
            row = row.union(if column_local { open.intersection(s) } else { open });
        }
        ext.set_row(a, row)?;
    }
    Ok(ext)
}

/// The best extension for `S`: consent-type rules depend on a column
/// alone, and with `s + t ≤ n + 2` a +1 on the diagonal never does worse
/// than −1; for CSR/LSR extra qualifications only grow the result.
pub fn optimistic_extension(profile: &Profile, s: IndividualSet, rule: &SocialRule) -> Result<Profile> {
    check_query(profile, s, rule)?;
    resolve(profile, s, rule, Cell::Qualify)
}

/// The worst extension for `S`, by the same arguments reversed.
pub fn pessimistic_extension(profile: &Profile, s: IndividualSet, rule: &SocialRule) -> Result<Profile> {
    check_query(profile, s, rule)?;
    resolve(profile, s, rule, Cell::Disqualify)
}

pub fn pqi(profile: &Profile, s: IndividualSet, rule: &SocialRule) -> Result<bool> {
    let ext = optimistic_extension(profile, s, rule)?;
    Ok(s.is_subset(eval_unchecked(rule, ext.everyone(), &ext)))
}

pub fn nqi(profile: &Profile, s: IndividualSet, rule: &SocialRule) -> Result<bool> {
    let ext = pessimistic_extension(profile, s, rule)?;
    Ok(s.is_subset(eval_unchecked(rule, ext.everyone(), &ext)))
}

pub const DEFAULT_MAX_BRANCHES: u128 = 1 << 16;

/// Tries to fill the open cells so every row has exactly `r` positives and
/// each column `a ∈ S` reaches `demand[a]` positives, with the diagonal of
/// each `a ∈ S` fixed by `diag`. Rows send units to the open cells of `S`
/// columns; leftover units go to the row's remaining open cells in index
/// order.
fn flow_extension(
    profile: &Profile,
    s: IndividualSet,
    r: usize,
    diag: &[(usize, Cell)],
    quota: impl Fn(Cell) -> usize,
) -> Result<Option<Profile>> {
    let mut fixed = profile.clone();
    for &(a, c) in diag {
        fixed.set(a, a, c)?;
    }
    let counts = match r_extension_counts(&fixed, r) {
        Ok(c) => c,
        Err(Error::NoRExtension { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let n = fixed.n();
    let everyone = fixed.everyone();
    let cols = s.to_vec();
    let mut demand = Vec::with_capacity(cols.len());
    for &a in &cols {
        let self_cell = fixed.cell(a, a);
        debug_assert!(self_cell.is_known_sign());
        let need = quota(self_cell);
        let have = fixed.qualifiers(a, everyone).len();
        demand.push(need.saturating_sub(have) as u64);
    }
    // 0 = source, 1..=n rows, then one vertex per column of S, then sink
    let sink = n + cols.len() + 1;
    let mut net = FlowNetwork::new(sink + 1, 0, sink)?;
    for (b, &(k, _)) in counts.iter().enumerate() {
        net.add_arc(0, 1 + b, k as u64)?;
    }
    let mut cell_arcs = Vec::new();
    for (j, &a) in cols.iter().enumerate() {
        for b in fixed.open_in_column(a) {
            cell_arcs.push((net.add_arc(1 + b, 1 + n + j, 1)?, b, a));
        }
        net.add_arc(1 + n + j, sink, demand[j])?;
    }
    let mf = max_flow(&net);
    if mf.value < demand.iter().sum::<u64>() {
        return Ok(None);
    }
    let mut rows: Vec<IndividualSet> = (0..n).map(|b| fixed.qualified_by(b)).collect();
    let mut used = vec![0usize; n];
    for &(e, b, a) in &cell_arcs {
        if mf.flow[e] > 0 {
            rows[b].insert(a);
            used[b] += 1;
        }
    }
    let mut ext = Profile::filled(ProfileKind::Binary, n, Cell::Disqualify)?;
    ext.set_names(fixed.names().to_vec())?;
    for b in 0..n {
        let rest = fixed.open_in_row(b).difference(rows[b]);
        rows[b] = rows[b].union(rest.iter().take(counts[b].0 - used[b]).collect());
        ext.set_row(b, rows[b])?;
    }
    Ok(Some(ext))
}

fn consent_quotas(rule: &SocialRule) -> Result<(usize, usize)> {
    match *rule {
        SocialRule::Consent { s, t } => Ok((s, t)),
        _ => Err(Error::PreconditionViolated(format!("{rule} is not a consent rule"))),
    }
}

/// An `r`-extension qualifying all of `S` under `consent(s, 1)`, `s ≥ 2`, or
/// `None`. With `t = 1` every member of `S` must qualify itself.
pub fn r_pqi_consent_extension(
    profile: &Profile,
    s_set: IndividualSet,
    r: usize,
    rule: &SocialRule,
) -> Result<Option<Profile>> {
    check_query(profile, s_set, rule)?;
    let (s, t) = consent_quotas(rule)?;
    if t != 1 || s < 2 {
        return Err(Error::PreconditionViolated(
            "the flow check needs t = 1 and s >= 2".into(),
        ));
    }
    r_extension_counts(profile, r)?;
    if s_set.iter().any(|a| profile.cell(a, a) == Cell::Disqualify) {
        return Ok(None);
    }
    let diag: Vec<(usize, Cell)> = s_set.iter().map(|a| (a, Cell::Qualify)).collect();
    flow_extension(profile, s_set, r, &diag, |_| s)
}

pub fn r_pqi_consent_flow(profile: &Profile, s_set: IndividualSet, r: usize, rule: &SocialRule) -> Result<bool> {
    Ok(r_pqi_consent_extension(profile, s_set, r, rule)?.is_some())
}

/// Any consent rule: guesses the open diagonal cells of `S`, then runs the
/// flow check with a column target of `s` positives for self-qualifying
/// members and `n − t + 1` for self-disqualifying ones.
pub fn r_pqi_general_extension(
    profile: &Profile,
    s_set: IndividualSet,
    r: usize,
    rule: &SocialRule,
    max_branches: u128,
) -> Result<Option<Profile>> {
    check_query(profile, s_set, rule)?;
    let (s, t) = consent_quotas(rule)?;
    r_extension_counts(profile, r)?;
    let n = profile.n();
    let open: Vec<usize> = s_set.iter().filter(|&a| profile.cell(a, a) == Cell::Unknown).collect();
    let branches = 1u128.checked_shl(open.len() as u32).unwrap_or(u128::MAX);
    if branches > max_branches {
        return Err(Error::InstanceTooLarge {
            needed: branches,
            limit: max_branches,
        });
    }
    let quota = |c: Cell| if c == Cell::Qualify { s } else { n + 1 - t };
    for bits in 0..branches as u64 {
        let diag: Vec<(usize, Cell)> = open
            .iter()
            .enumerate()
            .map(|(i, &a)| (a, Cell::from_sign(bits >> i & 1 == 0)))
            .collect();
        if let Some(ext) = flow_extension(profile, s_set, r, &diag, quota)? {
            return Ok(Some(ext));
        }
    }
    Ok(None)
}

pub fn r_pqi_general(profile: &Profile, s_set: IndividualSet, r: usize, rule: &SocialRule) -> Result<bool> {
    Ok(r_pqi_general_extension(profile, s_set, r, rule, DEFAULT_MAX_BRANCHES)?.is_some())
}

/// Whether every `r`-extension puts `b`'s open cell `(b, a)` at +1
/// (`forced_plus`) or at −1 (`forced_minus`).
fn forced(profile: &Profile, counts: &[(usize, usize)], b: usize, a: usize) -> (bool, bool) {
    match profile.cell(b, a) {
        Cell::Qualify => (true, false),
        Cell::Disqualify => (false, true),
        _ => {
            let (k, c) = counts[b];
            (k == c, k == 0)
        }
    }
}

/// Necessary qualification over `r`-extensions. Consent-type rules look
/// at one column at a time: rows place their open cells independently, so
/// the adversary puts −1 wherever a row has a spare open cell. CSR and LSR
/// are handled for `r = 1` only.
pub fn r_nqi(profile: &Profile, s_set: IndividualSet, r: usize, rule: &SocialRule) -> Result<bool> {
    check_query(profile, s_set, rule)?;
    let counts = r_extension_counts(profile, r)?;
    let n = profile.n();
    match rule.quotas() {
        Some((s, t)) => {
            for a in s_set {
                let min_plus = (0..n).filter(|&b| b != a && forced(profile, &counts, b, a).0).count();
                let (diag_plus, diag_minus) = forced(profile, &counts, a, a);
                // the adversary may pick any diagonal value not forced
                if !diag_minus && min_plus + 1 < s {
                    return Ok(false);
                }
                if !diag_plus && min_plus + t <= n {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        None if r == 1 => {
            let forced_plus = |b: usize, a: usize| forced(profile, &counts, b, a).0;
            Ok(match rule {
                // with one qualification per row only self-loops start, and
                // they lead nowhere else
                SocialRule::Lsr => s_set.iter().all(|a| forced_plus(a, a)),
                // only someone qualified by everyone can start, and then alone
                _ => s_set.len() == 1 && s_set.iter().all(|a| (0..n).all(|b| forced_plus(b, a))),
            })
        }
        None => Err(Error::PreconditionViolated(format!(
            "{rule} with r = {r} is only served by brute force"
        ))),
    }
}

/// Answers a query with the dedicated algorithm when one applies and by
/// enumerating extensions otherwise; also names the method used.
pub fn answer_query(
    profile: &Profile,
    q: &PartialQuery,
    rule: &SocialRule,
    sb: &SearchBudget,
) -> Result<(bool, &'static str)> {
    check_query(profile, q.s, rule)?;
    let brute = |sb: &SearchBudget| -> Result<bool> {
        let (p, nec) = pqi_nqi_brute(profile, q.s, rule, q.r, sb)?;
        Ok(match q.mode {
            QueryMode::Pqi => p,
            QueryMode::Nqi => nec,
        })
    };
    let consent = matches!(rule, SocialRule::Consent { .. });
    match (q.mode, q.r) {
        (QueryMode::Pqi, None) => Ok((pqi(profile, q.s, rule)?, "pqi")),
        (QueryMode::Nqi, None) => Ok((nqi(profile, q.s, rule)?, "nqi")),
        (QueryMode::Pqi, Some(r)) if consent => {
            let (s, t) = rule.quotas().unwrap_or((0, 0));
            if t == 1 && s >= 2 {
                Ok((r_pqi_consent_flow(profile, q.s, r, rule)?, "r_pqi_consent_flow"))
            } else {
                Ok((r_pqi_general(profile, q.s, r, rule)?, "r_pqi_general"))
            }
        }
        (QueryMode::Nqi, Some(r)) if rule.is_column_local() || r == 1 => Ok((r_nqi(profile, q.s, r, rule)?, "r_nqi")),
        _ => {
            if let Some(r) = q.r {
                r_extension_counts(profile, r)?;
            }
            Ok((brute(sb)?, "brute"))
        }
    }
}
