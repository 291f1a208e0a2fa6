//! Seeded instance generators: random profiles and instances, and hard
//! instances built from exact cover by 3-sets.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{AttackInstance, Family, Objective};
use crate::profile::{Cell, Profile, ProfileKind};
use crate::rule::SocialRule;
use crate::set::IndividualSet;

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Fair ±1 draws; in ternary and partial profiles each cell is open
/// (`*` or `?`) with probability `star_density` first.
pub fn random_profile<R: Rng>(rng: &mut R, n: usize, kind: ProfileKind, star_density: f64) -> Result<Profile> {
    if !(0.0..=1.0).contains(&star_density) {
        return Err(Error::PreconditionViolated(format!(
            "star density {star_density} outside [0, 1]"
        )));
    }
    let open = match kind {
        ProfileKind::Binary => None,
        ProfileKind::Ternary => Some(Cell::Indifferent),
        ProfileKind::Partial => Some(Cell::Unknown),
    };
    let mut p = Profile::filled(kind, n, Cell::Disqualify)?;
    for a in 0..n {
        for b in 0..n {
            let c = match open {
                Some(c) if star_density > 0.0 && rng.gen_bool(star_density) => c,
                _ => Cell::from_sign(rng.gen_bool(0.5)),
            };
            p.set(a, b, c)?;
        }
    }
    Ok(p)
}

pub fn gen_random_profile(n: usize, kind: ProfileKind, star_density: f64, seed: u64) -> Result<Profile> {
    random_profile(&mut rng_for(seed), n, kind, star_density)
}

/// Each row qualifies a uniformly drawn `r`-subset of `N`.
pub fn random_r_profile<R: Rng>(rng: &mut R, n: usize, r: usize) -> Result<Profile> {
    if r == 0 || r > n {
        return Err(Error::InvalidR { r, n });
    }
    let mut p = Profile::filled(ProfileKind::Binary, n, Cell::Disqualify)?;
    for a in 0..n {
        p.set_row(a, index::sample(rng, n, r).into_iter().collect())?;
    }
    Ok(p)
}

pub fn gen_random_r_profile(n: usize, r: usize, seed: u64) -> Result<Profile> {
    random_r_profile(&mut rng_for(seed), n, r)
}

/// An `r`-profile with `unknowns` cells hidden, so it always has an
/// `r`-extension.
pub fn random_r_partial_profile<R: Rng>(rng: &mut R, n: usize, r: usize, unknowns: usize) -> Result<Profile> {
    let full = random_r_profile(rng, n, r)?;
    let mut p = full.into_kind(ProfileKind::Partial)?;
    for i in index::sample(rng, n * n, unknowns.min(n * n)) {
        p.set(i / n, i % n, Cell::Unknown)?;
    }
    Ok(p)
}

pub fn gen_r_partial_profile(n: usize, r: usize, unknowns: usize, seed: u64) -> Result<Profile> {
    random_r_partial_profile(&mut rng_for(seed), n, r, unknowns)
}

/// A partial profile with exactly `unknowns` hidden cells.
pub fn random_partial_profile<R: Rng>(rng: &mut R, n: usize, unknowns: usize) -> Result<Profile> {
    let mut p = random_profile(rng, n, ProfileKind::Partial, 0.0)?;
    for i in index::sample(rng, n * n, unknowns.min(n * n)) {
        p.set(i / n, i % n, Cell::Unknown)?;
    }
    Ok(p)
}

/// `consent(s, t)` with `s + t ≤ n + 2`, uniform over `s` first.
pub fn random_consent_rule<R: Rng>(rng: &mut R, n: usize) -> SocialRule {
    let s = rng.gen_range(1..=n + 1);
    SocialRule::consent(s, rng.gen_range(1..=n + 2 - s))
}

/// Shape of a random attack instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub family: Family,
    pub objective: Objective,
    pub rule: SocialRule,
    pub n: usize,
    /// Binary, or ternary for microbribery.
    pub kind: ProfileKind,
    pub star_density: f64,
    pub max_budget: u64,
    /// Upper bound on `|A⁺| + |A⁻|` outside the exact objective.
    pub max_targets: usize,
    /// Draw an `r`-profile and record the restriction.
    pub r: Option<usize>,
    /// Prices are drawn from `1..=max_price`; 1 means unit prices.
    pub max_price: u64,
}

impl InstanceSpec {
    pub fn new(family: Family, objective: Objective, rule: SocialRule, n: usize) -> Self {
        InstanceSpec {
            family,
            objective,
            rule,
            n,
            kind: ProfileKind::Binary,
            star_density: 0.0,
            max_budget: 3,
            max_targets: 3,
            r: None,
            max_price: 1,
        }
    }
}

fn random_subset<R: Rng>(rng: &mut R, from: IndividualSet, k: usize) -> IndividualSet {
    let items = from.to_vec();
    items.choose_multiple(rng, k.min(items.len())).copied().collect()
}

/// One draw; the result may be trivially satisfied or otherwise invalid.
pub fn random_instance<R: Rng>(rng: &mut R, spec: &InstanceSpec) -> Result<AttackInstance> {
    let n = spec.n;
    let profile = match spec.r {
        Some(r) => random_r_profile(rng, n, r)?,
        None => random_profile(rng, n, spec.kind, spec.star_density)?,
    };
    let mut inst = AttackInstance::new(profile, spec.rule, spec.family, spec.objective);
    let everyone = inst.profile.everyone();
    if spec.family == Family::Gcai {
        let mut pool: IndividualSet = everyone.iter().filter(|_| rng.gen_bool(0.5)).collect();
        // An empty pool leaves nothing to target.
        if pool.is_empty() && n > 0 {
            pool.insert(rng.gen_range(0..n));
        }
        inst.pool = Some(pool);
    }
    let start = inst.start();
    let k = if start.is_empty() || spec.max_targets == 0 {
        0
    } else {
        rng.gen_range(1..=spec.max_targets.min(start.len()))
    };
    match spec.objective {
        Objective::Exact => {
            for a in start {
                if rng.gen_bool(0.5) {
                    inst.a_plus.insert(a);
                } else {
                    inst.a_minus.insert(a);
                }
            }
        }
        Objective::Constructive => inst.a_plus = random_subset(rng, start, k),
        Objective::Destructive => inst.a_minus = random_subset(rng, start, k),
        Objective::General => {
            for a in random_subset(rng, start, k) {
                if rng.gen_bool(0.5) {
                    inst.a_plus.insert(a);
                } else {
                    inst.a_minus.insert(a);
                }
            }
        }
    }
    if spec.family.has_budget() {
        inst.budget = Some(rng.gen_range(0..=spec.max_budget));
    }
    if spec.max_price > 1 {
        match spec.family {
            Family::Gb => inst.agent_prices = Some((0..n).map(|_| rng.gen_range(1..=spec.max_price)).collect()),
            Family::Gmb => inst.pair_prices = Some((0..n * n).map(|_| rng.gen_range(1..=spec.max_price)).collect()),
            _ => {}
        }
    }
    inst.r_restriction = spec.r;
    Ok(inst)
}

/// First draw without any violation, nontriviality included.
pub fn random_valid_instance<R: Rng>(
    rng: &mut R,
    spec: &InstanceSpec,
    attempts: usize,
) -> Result<Option<AttackInstance>> {
    for _ in 0..attempts {
        let inst = random_instance(rng, spec)?;
        if inst.validate().is_empty() {
            return Ok(Some(inst));
        }
    }
    Ok(None)
}

pub fn gen_random_instance(spec: &InstanceSpec, seed: u64) -> Result<AttackInstance> {
    random_instance(&mut rng_for(seed), spec)
}

/// Restricted exact cover by 3-sets: `3m` elements, `3m` triples, every
/// element in exactly three triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rx3cInstance {
    pub m: usize,
    pub triples: Vec<[usize; 3]>,
    /// Indices into `triples`.
    pub planted_cover: Option<Vec<usize>>,
}

impl Rx3cInstance {
    pub fn new(m: usize, triples: Vec<[usize; 3]>) -> Result<Self> {
        let inst = Rx3cInstance {
            m,
            triples,
            planted_cover: None,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let size = 3 * self.m;
        if self.m == 0 || self.triples.len() != size {
            return Err(Error::PreconditionViolated(format!(
                "need 3m = {size} triples for m = {}, got {}",
                self.m,
                self.triples.len()
            )));
        }
        let mut freq = vec![0usize; size];
        for t in &self.triples {
            if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] || t.iter().any(|&x| x >= size) {
                return Err(Error::PreconditionViolated(format!("bad triple {t:?}")));
            }
            for &x in t {
                freq[x] += 1;
            }
        }
        if let Some(x) = freq.iter().position(|&f| f != 3) {
            return Err(Error::PreconditionViolated(format!(
                "element {x} occurs in {} triples",
                freq[x]
            )));
        }
        if let Some(c) = &self.planted_cover {
            if !self.is_cover(c) {
                return Err(Error::PreconditionViolated("planted cover is not exact".into()));
            }
        }
        Ok(())
    }

    pub fn is_cover(&self, chosen: &[usize]) -> bool {
        let mut seen = vec![false; 3 * self.m];
        for &i in chosen {
            let Some(t) = self.triples.get(i) else {
                return false;
            };
            for &x in t {
                if std::mem::replace(&mut seen[x], true) {
                    return false;
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Lexicographically first exact cover found by backtracking.
    pub fn find_cover(&self) -> Option<Vec<usize>> {
        fn go(inst: &Rx3cInstance, covered: &mut Vec<bool>, chosen: &mut Vec<usize>) -> bool {
            let Some(x) = covered.iter().position(|&c| !c) else {
                return true;
            };
            for (i, t) in inst.triples.iter().enumerate() {
                if t.contains(&x) && t.iter().all(|&y| !covered[y]) {
                    t.iter().for_each(|&y| covered[y] = true);
                    chosen.push(i);
                    if go(inst, covered, chosen) {
                        return true;
                    }
                    chosen.pop();
                    t.iter().for_each(|&y| covered[y] = false);
                }
            }
            false
        }
        let mut covered = vec![false; 3 * self.m];
        let mut chosen = Vec::new();
        go(self, &mut covered, &mut chosen).then(|| {
            chosen.sort_unstable();
            chosen
        })
    }

    pub fn has_cover(&self) -> bool {
        self.find_cover().is_some()
    }

    /// Plants `m` disjoint triples, then adds `2m` triples so every element
    /// occurs three times.
    pub fn planted(m: usize, seed: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::PreconditionViolated("m must be positive".into()));
        }
        let mut rng = rng_for(seed);
        let mut xs: Vec<usize> = (0..3 * m).collect();
        xs.shuffle(&mut rng);
        let mut triples: Vec<[usize; 3]> = xs.chunks(3).map(sorted_triple).collect();
        let rest = fill_triples(&mut rng, m, 2)?;
        triples.extend(rest);
        let mut order: Vec<usize> = (0..3 * m).collect();
        order.shuffle(&mut rng);
        let shuffled = order.iter().map(|&i| triples[i]).collect();
        let mut cover: Vec<usize> = (0..3 * m).filter(|&j| order[j] < m).collect();
        cover.sort_unstable();
        let inst = Rx3cInstance {
            m,
            triples: shuffled,
            planted_cover: Some(cover),
        };
        inst.validate()?;
        Ok(inst)
    }

    /// A random instance with no exact cover. With `m = 1` every instance
    /// is three copies of `X`, so `m ≥ 2` is required.
    pub fn without_cover(m: usize, seed: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::PreconditionViolated(
                "every instance with m = 1 has an exact cover".into(),
            ));
        }
        let mut rng = rng_for(seed);
        for _ in 0..10_000 {
            let inst = Rx3cInstance {
                m,
                triples: fill_triples(&mut rng, m, 3)?,
                planted_cover: None,
            };
            if !inst.has_cover() {
                return Ok(inst);
            }
        }
        Err(Error::PreconditionViolated(format!(
            "no coverless instance found for m = {m}"
        )))
    }
}

fn sorted_triple(c: &[usize]) -> [usize; 3] {
    let mut t = [c[0], c[1], c[2]];
    t.sort_unstable();
    t
}

/// `copies · m` triples in which every element of `0..3m` occurs `copies`
/// times and no triple repeats an element.
fn fill_triples<R: Rng>(rng: &mut R, m: usize, copies: usize) -> Result<Vec<[usize; 3]>> {
    let mut pool: Vec<usize> = (0..3 * m).flat_map(|x| std::iter::repeat_n(x, copies)).collect();
    for _ in 0..100_000 {
        pool.shuffle(rng);
        if pool.chunks(3).all(|c| c[0] != c[1] && c[0] != c[2] && c[1] != c[2]) {
            return Ok(pool.chunks(3).map(sorted_triple).collect());
        }
    }
    Err(Error::PreconditionViolated(format!(
        "could not fill triples for m = {m}"
    )))
}

fn names(groups: &[(&str, usize)]) -> Vec<String> {
    groups
        .iter()
        .flat_map(|&(p, k)| (1..=k).map(move |i| format!("{p}{i}")))
        .collect()
}

fn blank(n: usize) -> Result<Profile> {
    Profile::filled(ProfileKind::Binary, n, Cell::Disqualify)
}

/// Group bribery under `consent(6m−2, 1)`: element individuals qualify each
/// other, a triple individual qualifies exactly the elements outside its
/// triple, so each element is one qualification short.
pub fn rx3c_to_cgb(rx: &Rx3cInstance) -> Result<AttackInstance> {
    rx.validate()?;
    let m = rx.m;
    let (nx, nf) = (3 * m, 3 * m);
    let mut p = blank(nx + nf)?;
    for x in 0..nx {
        for y in 0..nx {
            p.set(x, y, Cell::Qualify)?;
        }
    }
    for (f, t) in rx.triples.iter().enumerate() {
        for x in (0..nx).filter(|x| !t.contains(x)) {
            p.set(nx + f, x, Cell::Qualify)?;
        }
    }
    p.set_names(names(&[("x", nx), ("F", nf)]))?;
    let mut inst = AttackInstance::new(
        p,
        SocialRule::consent(6 * m - 2, 1),
        Family::Gb,
        Objective::Constructive,
    );
    inst.a_plus = IndividualSet::full(nx);
    inst.budget = Some(m as u64);
    Ok(inst)
}

/// The same shape with a fixed quota `s`: each element is qualified by
/// itself and `s − 2` outside triples, so it is still one short. Used for
/// smoke tests only; the cover equivalence does not carry over.
pub fn rx3c_to_cgb_clipped(rx: &Rx3cInstance, s: usize) -> Result<AttackInstance> {
    rx.validate()?;
    let m = rx.m;
    let (nx, nf) = (3 * m, 3 * m);
    if s < 2 || s - 2 > nf - 3 {
        return Err(Error::PreconditionViolated(format!(
            "clipped quota s = {s} must lie in 2..={}",
            nf - 1
        )));
    }
    let mut p = blank(nx + nf)?;
    for x in 0..nx {
        p.set(x, x, Cell::Qualify)?;
        let outside = (0..nf).filter(|&f| !rx.triples[f].contains(&x)).take(s - 2);
        for f in outside {
            p.set(nx + f, x, Cell::Qualify)?;
        }
    }
    p.set_names(names(&[("x", nx), ("F", nf)]))?;
    let mut inst = AttackInstance::new(p, SocialRule::consent(s, 1), Family::Gb, Objective::Constructive);
    inst.a_plus = IndividualSet::full(nx);
    inst.budget = Some(m as u64);
    Ok(inst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RProfileVariant {
    /// `r = 3`, `consent(2, t)`.
    Consent { t: usize },
    /// `r = 4`, liberal-start-respecting rule.
    Lsr,
}

/// Constructive control by adding on an `r`-profile. `T` holds the
/// element and dummy individuals, triple individuals are addable, `ℓ = m`.
pub fn rx3c_to_cgcai_r(rx: &Rx3cInstance, variant: RProfileVariant) -> Result<AttackInstance> {
    rx.validate()?;
    let m = rx.m;
    let (nx, nf) = (3 * m, 3 * m);
    let nd = match variant {
        RProfileVariant::Consent { .. } => 3,
        RProfileVariant::Lsr => 4,
    };
    let d0 = nx + nf;
    let mut p = blank(nx + nf + nd)?;
    for x in 0..nx {
        match variant {
            RProfileVariant::Consent { .. } => {
                p.set(x, x, Cell::Qualify)?;
                p.set(x, d0, Cell::Qualify)?;
                p.set(x, d0 + 1, Cell::Qualify)?;
            }
            RProfileVariant::Lsr => {
                for d in 0..nd {
                    p.set(x, d0 + d, Cell::Qualify)?;
                }
            }
        }
    }
    for (f, t) in rx.triples.iter().enumerate() {
        for &x in t {
            p.set(nx + f, x, Cell::Qualify)?;
        }
        if variant == RProfileVariant::Lsr {
            p.set(nx + f, nx + f, Cell::Qualify)?;
        }
    }
    for d in 0..nd {
        for e in 0..nd {
            p.set(d0 + d, d0 + e, Cell::Qualify)?;
        }
    }
    p.set_names(names(&[("x", nx), ("F", nf), ("d", nd)]))?;
    let (rule, r) = match variant {
        RProfileVariant::Consent { t } => (SocialRule::consent(2, t), 3),
        RProfileVariant::Lsr => (SocialRule::Lsr, 4),
    };
    let mut inst = AttackInstance::new(p, rule, Family::Gcai, Objective::Constructive);
    let xs = IndividualSet::full(nx);
    let ds: IndividualSet = (d0..d0 + nd).collect();
    inst.pool = Some(xs.union(ds));
    inst.a_plus = xs;
    inst.budget = Some(m as u64);
    inst.r_restriction = Some(r);
    Ok(inst)
}

/// Constructive control by deleting under `consent(2, 4)`: every element
/// disqualifies itself and is disqualified by its three triples, so each
/// element needs one of its triples deleted; `ℓ = m`.
pub fn rx3c_to_cgcdi(rx: &Rx3cInstance) -> Result<AttackInstance> {
    rx.validate()?;
    let m = rx.m;
    let (nx, nf) = (3 * m, 3 * m);
    let mut p = blank(nx + nf)?;
    for x in 0..nx {
        for y in (0..nx).filter(|&y| y != x) {
            p.set(x, y, Cell::Qualify)?;
        }
    }
    for (f, t) in rx.triples.iter().enumerate() {
        for x in (0..nx).filter(|x| !t.contains(x)) {
            p.set(nx + f, x, Cell::Qualify)?;
        }
    }
    p.set_names(names(&[("x", nx), ("F", nf)]))?;
    let mut inst = AttackInstance::new(p, SocialRule::consent(2, 4), Family::Gcdi, Objective::Constructive);
    inst.a_plus = IndividualSet::full(nx);
    inst.budget = Some(m as u64);
    Ok(inst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AugmentFlavor {
    Gcai,
    Gcdi,
}

/// Copies `src` into the top-left corner of a larger blank profile and
/// names the `extra` new individuals `g1, g2, …`.
fn widen(src: &Profile, extra: usize) -> Result<Profile> {
    let n = src.n();
    let mut p = blank(n + extra)?;
    for a in 0..n {
        p.set_row(a, src.qualified_by(a))?;
    }
    let mut nm = src.names().to_vec();
    nm.extend(names(&[("g", extra)]));
    p.set_names(nm)?;
    Ok(p)
}

/// Turns a constructive consent control instance into a general one with
/// `A⁻ = {g1}`, forcing one extra action and raising the budget by one.
///
/// Adding (`s, t ≥ 2`): `g1 … g(t−1)` join `T`, `gt` is addable, all of
/// them disqualify everyone, and the original individuals qualify `g1`.
/// Deleting (`s ≥ 2`): `g1 … gs` qualify everyone and the original
/// individuals disqualify `g1`.
pub fn augment_to_general(inst: &AttackInstance, flavor: AugmentFlavor) -> Result<AttackInstance> {
    inst.ensure_well_formed()?;
    let SocialRule::Consent { s, t } = inst.rule else {
        return Err(Error::PreconditionViolated("augmentation needs a consent rule".into()));
    };
    if inst.objective != Objective::Constructive {
        return Err(Error::PreconditionViolated(
            "augmentation needs a constructive instance".into(),
        ));
    }
    let n = inst.n();
    let original = inst.profile.everyone();
    let g1 = n;
    let mut out = match flavor {
        AugmentFlavor::Gcai => {
            if inst.family != Family::Gcai || s < 2 || t < 2 {
                return Err(Error::PreconditionViolated(
                    "adding flavor needs GCAI with s, t >= 2".into(),
                ));
            }
            // the new individuals disqualify everyone; that must not touch A+
            if !inst.a_plus.iter().all(|a| inst.profile.is_self_qualifying(a)) {
                return Err(Error::PreconditionViolated("A+ must qualify itself".into()));
            }
            let mut p = widen(&inst.profile, t)?;
            for b in original {
                p.set(b, g1, Cell::Qualify)?;
            }
            let mut out = inst.clone();
            out.profile = p;
            out.pool = Some(inst.start().union((g1..g1 + t - 1).collect()));
            out
        }
        AugmentFlavor::Gcdi => {
            if inst.family != Family::Gcdi || s < 2 {
                return Err(Error::PreconditionViolated(
                    "deleting flavor needs GCDI with s >= 2".into(),
                ));
            }
            if !inst.a_plus.iter().all(|a| inst.profile.is_self_disqualifying(a)) {
                return Err(Error::PreconditionViolated("A+ must disqualify itself".into()));
            }
            let mut p = widen(&inst.profile, s)?;
            for g in g1..g1 + s {
                p.set_row(g, p.everyone())?;
            }
            let mut out = inst.clone();
            out.profile = p;
            out
        }
    };
    out.objective = Objective::General;
    out.a_minus = IndividualSet::singleton(g1);
    out.budget = inst.budget.map(|l| l + 1);
    out.r_restriction = None;
    Ok(out)
}

/// Turns a constructive partitioning instance whose individuals all
/// disqualify themselves into an exact one: `s` new individuals qualify
/// everyone, the originals disqualify them, and `A⁻ = N ∖ A⁺`.
pub fn egcpi_gadget(inst: &AttackInstance) -> Result<AttackInstance> {
    inst.ensure_well_formed()?;
    let SocialRule::Consent { s, .. } = inst.rule else {
        return Err(Error::PreconditionViolated("the gadget needs a consent rule".into()));
    };
    if inst.family != Family::Gcpi || inst.objective != Objective::Constructive || s < 2 {
        return Err(Error::PreconditionViolated(
            "the gadget needs constructive GCPI with s >= 2".into(),
        ));
    }
    let original = inst.profile.everyone();
    if !original.iter().all(|a| inst.profile.is_self_disqualifying(a)) {
        return Err(Error::PreconditionViolated(
            "every individual must disqualify itself".into(),
        ));
    }
    let n = inst.n();
    let mut p = widen(&inst.profile, s)?;
    for g in n..n + s {
        p.set_row(g, p.everyone())?;
    }
    let mut out = inst.clone();
    out.profile = p;
    out.objective = Objective::Exact;
    out.a_minus = out.profile.everyone().difference(inst.a_plus);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::diagnostics;
    use crate::rule::eval;

    #[test]
    fn profiles_are_reproducible() {
        let a = gen_random_profile(5, ProfileKind::Binary, 0.0, 1).unwrap();
        let b = gen_random_profile(5, ProfileKind::Binary, 0.0, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(gen_random_profile(0, ProfileKind::Binary, 0.0, 9).unwrap().n(), 0);
        assert!(gen_random_profile(3, ProfileKind::Partial, 1.5, 9).is_err());
    }

    #[test]
    fn star_density_is_binomial() {
        let seeds = 1000u64;
        let total: usize = (0..seeds)
            .map(|s| {
                gen_random_profile(6, ProfileKind::Partial, 0.2, s)
                    .unwrap()
                    .count_open()
            })
            .sum();
        let mean = 0.2 * 36.0 * seeds as f64;
        let sd = (36.0 * seeds as f64 * 0.2 * 0.8).sqrt();
        assert!((total as f64 - mean).abs() < 3.0 * sd, "{total} vs {mean}");
    }

    #[test]
    fn r_profiles_have_exact_row_sums() {
        assert_eq!(
            gen_random_r_profile(4, 4, 3).unwrap(),
            Profile::filled(ProfileKind::Binary, 4, Cell::Qualify).unwrap()
        );
        for seed in 0..20 {
            let p = gen_random_r_profile(5, 1, seed).unwrap();
            assert!(p.is_r_profile(1));
            assert_eq!(p.row_positive_counts().iter().sum::<usize>(), 5);
        }
        assert!(matches!(gen_random_r_profile(3, 0, 0), Err(Error::InvalidR { .. })));
        assert!(matches!(gen_random_r_profile(3, 4, 0), Err(Error::InvalidR { .. })));
    }

    #[test]
    fn r_partial_profiles_hide_cells() {
        let p = gen_r_partial_profile(5, 2, 6, 4).unwrap();
        assert_eq!(p.kind(), ProfileKind::Partial);
        assert_eq!(p.count_open(), 6);
        assert!(crate::oracle::r_extension_counts(&p, 2).is_ok());
    }

    #[test]
    fn planted_instances_are_valid() {
        for m in 1..=3 {
            for seed in 0..5 {
                let rx = Rx3cInstance::planted(m, seed).unwrap();
                assert!(rx.is_cover(rx.planted_cover.as_ref().unwrap()));
                assert!(rx.has_cover());
            }
        }
    }

    #[test]
    fn coverless_instances() {
        assert!(Rx3cInstance::without_cover(1, 0).is_err());
        let rx = Rx3cInstance::without_cover(2, 0).unwrap();
        rx.validate().unwrap();
        assert!(!rx.has_cover());
        let fixed = Rx3cInstance::new(
            2,
            vec![[0, 1, 5], [0, 2, 5], [0, 3, 4], [1, 2, 3], [1, 2, 4], [3, 4, 5]],
        )
        .unwrap();
        assert!(!fixed.has_cover());
    }

    #[test]
    fn cgb_construction_shape() {
        let rx = Rx3cInstance::planted(2, 7).unwrap();
        let inst = rx3c_to_cgb(&rx).unwrap();
        assert_eq!(inst.validate(), vec![]);
        assert_eq!(diagnostics(&inst).unwrap().s_star, Some(2));
        let q = eval(&inst.rule, inst.profile.everyone(), &inst.profile).unwrap();
        assert!(q.is_disjoint(inst.a_plus));
    }

    #[test]
    fn clipped_cgb_is_one_short() {
        let rx = Rx3cInstance::planted(2, 7).unwrap();
        let inst = rx3c_to_cgb_clipped(&rx, 2).unwrap();
        assert_eq!(inst.validate(), vec![]);
        for a in inst.a_plus {
            assert_eq!(inst.profile.qualifiers(a, inst.profile.everyone()).len(), 1);
        }
        assert!(rx3c_to_cgb_clipped(&rx, 1).is_err());
    }

    #[test]
    fn r_profile_constructions() {
        let rx = Rx3cInstance::planted(1, 0).unwrap();
        let c = rx3c_to_cgcai_r(&rx, RProfileVariant::Consent { t: 1 }).unwrap();
        assert_eq!(c.validate(), vec![]);
        assert!(c.profile.is_r_profile(3));
        let l = rx3c_to_cgcai_r(&rx, RProfileVariant::Lsr).unwrap();
        assert_eq!(l.validate(), vec![]);
        assert!(l.profile.is_r_profile(4));
        let q = eval(&l.rule, l.start(), &l.profile).unwrap();
        assert!(q.is_disjoint(l.a_plus));
    }

    #[test]
    fn augmented_instances_validate() {
        let rx = Rx3cInstance::planted(1, 0).unwrap();
        let src = rx3c_to_cgcai_r(&rx, RProfileVariant::Consent { t: 2 }).unwrap();
        let g = augment_to_general(&src, AugmentFlavor::Gcai).unwrap();
        assert_eq!(g.validate(), vec![]);
        assert_eq!(g.budget, Some(2));
        let q = eval(&g.rule, g.start(), &g.profile).unwrap();
        assert!(q.contains(g.n() - 2), "g1 starts out qualified");

        let src = rx3c_to_cgcdi(&rx).unwrap();
        assert_eq!(src.validate(), vec![]);
        let d = augment_to_general(&src, AugmentFlavor::Gcdi).unwrap();
        assert_eq!(d.validate(), vec![]);
        assert!(augment_to_general(&src, AugmentFlavor::Gcai).is_err());
    }

    #[test]
    fn egcpi_gadget_qualifies_new_individuals() {
        let p = Profile::binary_from_rows(&["-+-", "+-+", "--+"]).unwrap();
        let mut src = AttackInstance::new(p, SocialRule::consent(2, 2), Family::Gcpi, Objective::Constructive);
        src.a_plus = IndividualSet::singleton(0);
        assert!(egcpi_gadget(&src).is_err(), "a3 qualifies itself");
        src.profile = Profile::binary_from_rows(&["-+-", "+--", "---"]).unwrap();
        let out = egcpi_gadget(&src).unwrap();
        assert_eq!(out.n(), 5);
        assert_eq!(out.a_minus.to_vec(), vec![1, 2, 3, 4]);
        let q = eval(&out.rule, out.profile.everyone(), &out.profile).unwrap();
        assert!(q.contains(3) && q.contains(4));
    }
}
