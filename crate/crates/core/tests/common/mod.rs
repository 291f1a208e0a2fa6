//! Sweeps shared by the acceptance target and the integration tests. Each
//! returns how many cases it checked and a description of every failure.
#![allow(dead_code)]

use std::time::{Duration, Instant};

use gid_core::generators::{
    augment_to_general, random_consent_rule, random_partial_profile, random_profile, random_r_partial_profile,
    random_valid_instance, rng_for, rx3c_to_cgb, rx3c_to_cgcai_r, rx3c_to_cgcdi, AugmentFlavor, InstanceSpec,
    RProfileVariant, Rx3cInstance,
};
use gid_core::instance::{apply, Answer, PairChange};
use gid_core::oracle::{pqi_nqi_brute, solve_brute, SearchBudget};
use gid_core::partial::{nqi, pqi, r_nqi, r_pqi_consent_flow, r_pqi_general};
use gid_core::rule::SelfIndifferentQuota;
use gid_core::solvers::{
    check_immunity, immunity_matches, solve_named, IlpModel, IlpOptions, RulePattern, SetReq, IMMUNITY_TABLE,
};
use gid_core::{
    check_witness, diagnostics, eval, eval_traced, AttackInstance, Family, IndividualSet, Objective, Profile,
    ProfileKind, SocialRule, Solution,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Default)]
pub struct Report {
    pub checked: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < 20 {
            self.failures.push(msg);
        } else if self.failures.len() == 20 {
            self.failures.push("…".into());
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.checked += other.checked;
        for f in other.failures {
            self.fail(f);
        }
    }
}

fn timed(f: impl FnOnce(&mut Report)) -> Report {
    let start = Instant::now();
    let mut r = Report::default();
    f(&mut r);
    r.elapsed = start.elapsed();
    r
}

pub fn set(v: &[usize]) -> IndividualSet {
    v.iter().copied().collect()
}

pub fn ex1() -> Profile {
    Profile::binary_from_rows(&["+++-+", "--+-+", "-++--", "++++-", "-++--"]).unwrap()
}

/// Treats an immunity verdict as NO.
fn says_yes(a: Answer) -> bool {
    a == Answer::Yes
}

// ---- golden example -------------------------------------------------------

pub fn golden() -> Report {
    timed(|r| {
        let p = ex1();
        let n = p.everyone();
        let cases: [(SocialRule, &[usize]); 5] = [
            (SocialRule::consent(1, 1), &[0, 2, 3]),
            (SocialRule::consent(1, 2), &[0, 1, 2, 3]),
            (SocialRule::consent(2, 1), &[0, 2]),
            (SocialRule::Csr, &[1, 2, 4]),
            (SocialRule::Lsr, &[0, 1, 2, 3, 4]),
        ];
        for (rule, want) in cases {
            r.checked += 1;
            let got = eval(&rule, n, &p).unwrap();
            if got != set(want) {
                r.fail(format!("{rule}: got {:?}, want {want:?}", got.to_vec()));
            }
        }
        r.checked += 1;
        let (_, trace) = eval_traced(&SocialRule::Csr, n, &p).unwrap();
        let rounds: Vec<Vec<usize>> = trace.unwrap().rounds.iter().map(|s| s.to_vec()).collect();
        if rounds != vec![vec![2], vec![1, 2], vec![1, 2, 4]] {
            r.fail(format!("csr rounds {rounds:?}"));
        }
    })
}

// ---- duality ----------------------------------------------------------------

pub fn duality(profiles: usize, seed: u64) -> Report {
    timed(|r| {
        let mut rng = rng_for(seed);
        for i in 0..profiles {
            let n = rng.gen_range(1..=7);
            let p = random_profile(&mut rng, n, ProfileKind::Binary, 0.0).unwrap();
            let neg = p.negate().unwrap();
            let everyone = p.everyone();
            for s in 1..=n + 1 {
                for t in 1..=n + 2 - s {
                    r.checked += 1;
                    let lhs = eval(&SocialRule::consent(s, t), everyone, &p).unwrap();
                    let rhs = everyone.difference(eval(&SocialRule::consent(t, s), everyone, &neg).unwrap());
                    if lhs != rhs {
                        r.fail(format!("profile #{i} n={n} s={s} t={t}"));
                    }
                }
            }
        }
    })
}

// ---- immunity ---------------------------------------------------------------

fn rule_for(pattern: RulePattern, n: usize, rng: &mut ChaCha8Rng) -> SocialRule {
    let s1 = |rng: &mut ChaCha8Rng| SocialRule::consent(1, rng.gen_range(1..=n + 1));
    let t1 = |rng: &mut ChaCha8Rng| SocialRule::consent(rng.gen_range(1..=n + 1), 1);
    match pattern {
        RulePattern::ConsentS1 => s1(rng),
        RulePattern::ConsentT1 => t1(rng),
        RulePattern::ConsentS1OrT1 => {
            if rng.gen_bool(0.5) {
                s1(rng)
            } else {
                t1(rng)
            }
        }
        RulePattern::AnyConsent => random_consent_rule(rng, n),
        RulePattern::Csr => SocialRule::Csr,
        RulePattern::Lsr => SocialRule::Lsr,
    }
}

fn objectives_for(a_plus: SetReq, a_minus: SetReq) -> Vec<Objective> {
    Objective::ALL
        .into_iter()
        .filter(|o| match o {
            Objective::Constructive => a_minus != SetReq::NonEmpty && a_plus != SetReq::Empty,
            Objective::Destructive => a_plus != SetReq::NonEmpty && a_minus != SetReq::Empty,
            _ => true,
        })
        .collect()
}

/// For each table row, random valid instances meeting its premise: brute
/// force must say NO and the row must be among the matches.
pub fn immunity(per_entry: usize, seed: u64) -> Report {
    timed(|r| {
        let sb = SearchBudget::default();
        for (idx, e) in IMMUNITY_TABLE.iter().enumerate() {
            let mut rng = rng_for(seed ^ (idx as u64) << 32);
            let objectives = match e.objective {
                Some(o) => vec![o],
                None => objectives_for(e.a_plus, e.a_minus),
            };
            let mut found = 0;
            let mut draws = 0;
            while found < per_entry && draws < per_entry * 2000 {
                draws += 1;
                let n = rng.gen_range(2..=6);
                let family = *e.families.choose(&mut rng).unwrap();
                let objective = *objectives.choose(&mut rng).unwrap();
                let mut spec = InstanceSpec::new(family, objective, rule_for(e.rule, n, &mut rng), n);
                spec.r = e.r;
                spec.max_targets = rng.gen_range(1..=n);
                let Some(inst) = random_valid_instance(&mut rng, &spec, 1).unwrap() else {
                    continue;
                };
                if !immunity_matches(&inst).iter().any(|m| std::ptr::eq(*m, e)) {
                    continue;
                }
                found += 1;
                r.checked += 1;
                let v = check_immunity(&inst);
                if !v.immune || v.theorem_tag.is_none() {
                    r.fail(format!("{} #{found}: not flagged", e.tag));
                }
                match solve_brute(&inst, &sb) {
                    Ok(b) if b.is_yes() => r.fail(format!("{} #{found}: brute force found {:?}", e.tag, b.witness)),
                    Ok(_) => {}
                    Err(err) => r.fail(format!("{} #{found}: {err}", e.tag)),
                }
            }
            if found < per_entry {
                r.fail(format!("{}: only {found} instances drawn for row {idx}", e.tag));
            }
        }
    })
}

// ---- oracle equivalence -------------------------------------------------------

pub const SWEPT_SOLVERS: [&str; 8] = [
    "cgb_xp",
    "dgb_xp",
    "gcdi_22",
    "cgcai_r1",
    "microbribery",
    "microbribery_ternary",
    "ilp_gcai",
    "ilp_gcdi",
];

fn spec_for(sweep: &str, rng: &mut ChaCha8Rng) -> (InstanceSpec, &'static str) {
    let any_objective = |rng: &mut ChaCha8Rng| *Objective::ALL.choose(rng).unwrap();
    match sweep {
        "cgb_xp" => {
            let n = rng.gen_range(3..=7);
            let s = rng.gen_range(2..=3);
            let mut spec = InstanceSpec::new(Family::Gb, Objective::Constructive, SocialRule::consent(s, 1), n);
            spec.max_price = if rng.gen_bool(0.5) { 1 } else { 3 };
            (spec, "cgb_xp")
        }
        "dgb_xp" => {
            let n = rng.gen_range(3..=7);
            let t = rng.gen_range(1..=3);
            let mut spec = InstanceSpec::new(Family::Gb, Objective::Destructive, SocialRule::consent(1, t), n);
            spec.max_price = if rng.gen_bool(0.5) { 1 } else { 3 };
            (spec, "dgb_xp")
        }
        "gcdi_22" => {
            let n = rng.gen_range(2..=8);
            let o = any_objective(rng);
            (
                InstanceSpec::new(Family::Gcdi, o, SocialRule::consent(2, 2), n),
                "gcdi_22",
            )
        }
        "cgcai_r1" => {
            let n = rng.gen_range(2..=8);
            let s = rng.gen_range(2..=3.min(n + 1));
            let t = rng.gen_range(1..=n + 2 - s);
            let mut spec = InstanceSpec::new(Family::Gcai, Objective::Constructive, SocialRule::consent(s, t), n);
            spec.r = Some(1);
            (spec, "cgcai_r1")
        }
        "microbribery" => {
            let n = rng.gen_range(2..=7);
            let o = any_objective(rng);
            let mut spec = InstanceSpec::new(Family::Gmb, o, random_consent_rule(rng, n), n);
            spec.max_price = if rng.gen_bool(0.5) { 1 } else { 3 };
            (spec, "microbribery")
        }
        "microbribery_ternary" => {
            let n = rng.gen_range(2..=7);
            let o = any_objective(rng);
            let SocialRule::Consent { s, t } = random_consent_rule(rng, n) else {
                unreachable!()
            };
            let rule = if rng.gen_bool(0.5) {
                SocialRule::ternary_majority(s, t)
            } else {
                SocialRule::Ternary {
                    s,
                    s_prime: SelfIndifferentQuota::Fixed(rng.gen_range(1..=n)),
                    t,
                }
            };
            let mut spec = InstanceSpec::new(Family::Gmb, o, rule, n);
            spec.kind = ProfileKind::Ternary;
            spec.star_density = 0.3;
            spec.max_price = if rng.gen_bool(0.5) { 1 } else { 3 };
            (spec, "microbribery")
        }
        "ilp_gcai" | "ilp_gcdi" => {
            let n = rng.gen_range(2..=7);
            let family = if sweep == "ilp_gcai" {
                Family::Gcai
            } else {
                Family::Gcdi
            };
            let o = any_objective(rng);
            (InstanceSpec::new(family, o, random_consent_rule(rng, n), n), "ilp")
        }
        other => panic!("unknown sweep {other}"),
    }
}

/// Random valid instances from a sweep's precondition domain.
pub fn sweep_instances(sweep: &str, count: usize, seed: u64) -> Vec<(AttackInstance, &'static str)> {
    let mut rng = rng_for(seed);
    let mut out = Vec::with_capacity(count);
    let mut draws = 0;
    while out.len() < count {
        draws += 1;
        assert!(draws < count * 5000, "{sweep}: could not draw enough valid instances");
        let (spec, solver) = spec_for(sweep, &mut rng);
        if let Some(inst) = random_valid_instance(&mut rng, &spec, 1).unwrap() {
            out.push((inst, solver));
        }
    }
    out
}

fn extra_checks(
    inst: &AttackInstance,
    solver: &str,
    fast: &gid_core::Verdict,
    brute: &gid_core::Verdict,
    r: &mut Report,
    label: &str,
) {
    match solver {
        "cgb_xp" => {
            if let Some(Solution::Bribed(rows)) = &fast.witness {
                let forced = inst
                    .a_plus
                    .iter()
                    .filter(|&a| inst.profile.is_self_disqualifying(a))
                    .count();
                let SocialRule::Consent { s, .. } = inst.rule else {
                    unreachable!()
                };
                if rows.len() > forced + s {
                    r.fail(format!("{label}: bribed {} > {forced} + {s}", rows.len()));
                }
            }
        }
        "ilp" => {
            let model = match IlpModel::build(inst, &IlpOptions::default()) {
                Ok(m) => m,
                Err(e) => return r.fail(format!("{label}: model: {e}")),
            };
            // the model itself, immunity aside
            match model.solve(None) {
                Ok(x) => {
                    if x.is_some() != brute.is_yes() {
                        r.fail(format!(
                            "{label}: model feasible = {}, brute force {}",
                            x.is_some(),
                            brute.answer
                        ));
                    }
                    if let Some(x) = x {
                        if !model.is_feasible(&x) || !check_witness(inst, &model.witness(&x)).unwrap_or(false) {
                            r.fail(format!("{label}: model solution {x:?} does not verify"));
                        }
                    }
                }
                Err(e) => r.fail(format!("{label}: model solve: {e}")),
            }
            if let Some(w) = &brute.witness {
                match model.assignment_of(w.individuals()) {
                    Some(x) if model.is_feasible(&x) => {
                        let back = model.witness(&x);
                        if !check_witness(inst, &back).unwrap_or(false) {
                            r.fail(format!("{label}: witness rebuilt from brute assignment fails"));
                        }
                    }
                    _ => r.fail(format!("{label}: brute witness is not a feasible assignment")),
                }
            }
        }
        _ => {}
    }
}

/// Specialized solver against brute force on `count` random instances.
pub fn oracle_equivalence(sweep: &str, count: usize, seed: u64) -> Report {
    timed(|r| {
        let sb = SearchBudget::default();
        for (i, (inst, solver)) in sweep_instances(sweep, count, seed).into_iter().enumerate() {
            r.checked += 1;
            let label = format!("{sweep} #{i}");
            let fast = match solve_named(solver, &inst, &sb) {
                Ok(v) => v,
                Err(e) => {
                    r.fail(format!("{label}: {solver} failed: {e}"));
                    continue;
                }
            };
            let brute = match solve_brute(&inst, &sb) {
                Ok(v) => v,
                Err(e) => {
                    r.fail(format!("{label}: brute force failed: {e}"));
                    continue;
                }
            };
            if says_yes(fast.answer) != says_yes(brute.answer) {
                r.fail(format!(
                    "{label}: {solver} says {}, brute force {}",
                    fast.answer, brute.answer
                ));
            }
            for v in [&fast, &brute] {
                if let Some(w) = &v.witness {
                    if !check_witness(&inst, w).unwrap_or(false) {
                        r.fail(format!("{label}: witness {w:?} does not verify"));
                    }
                }
            }
            extra_checks(&inst, solver, &fast, &brute, r, &label);
        }
    })
}

// ---- reductions --------------------------------------------------------------

fn expect(r: &mut Report, label: &str, inst: &AttackInstance, want_yes: bool) -> Option<gid_core::Verdict> {
    r.checked += 1;
    if let Err(e) = inst.ensure_well_formed() {
        r.fail(format!("{label}: invalid: {e}"));
        return None;
    }
    match solve_brute(inst, &SearchBudget::unlimited()) {
        Ok(v) => {
            if v.is_yes() != want_yes {
                r.fail(format!("{label}: brute force says {}", v.answer));
            }
            if let Some(w) = &v.witness {
                if !check_witness(inst, w).unwrap_or(false) {
                    r.fail(format!("{label}: witness fails"));
                }
            }
            Some(v)
        }
        Err(e) => {
            r.fail(format!("{label}: {e}"));
            None
        }
    }
}

pub fn reductions(seed: u64) -> Report {
    timed(|r| {
        let yes1 = Rx3cInstance::planted(1, seed).unwrap();
        let yes2 = Rx3cInstance::planted(2, seed).unwrap();
        let no2 = Rx3cInstance::without_cover(2, seed).unwrap();

        for (label, rx, want) in [
            ("cgb m=1", &yes1, true),
            ("cgb m=2", &yes2, true),
            ("cgb m=2 no cover", &no2, false),
        ] {
            let inst = rx3c_to_cgb(rx).unwrap();
            r.checked += 1;
            if diagnostics(&inst).ok().and_then(|d| d.s_star) != Some(2) {
                r.fail(format!("{label}: s* is not 2"));
            }
            if let Some(v) = expect(r, label, &inst, want) {
                if rx.m == 1 && v.witness.as_ref().map(|w| w.individuals().len()) != Some(1) {
                    r.fail(format!("{label}: witness size is not 1"));
                }
            }
        }

        for variant in [RProfileVariant::Consent { t: 1 }, RProfileVariant::Lsr] {
            for (rx, want) in [(&yes1, true), (&yes2, true), (&no2, false)] {
                let label = format!("cgcai_r {variant:?} m={} cover={want}", rx.m);
                let inst = rx3c_to_cgcai_r(rx, variant).unwrap();
                expect(r, &label, &inst, want);
            }
        }

        for (rx, want) in [(&yes1, true), (&no2, false)] {
            let src = rx3c_to_cgcai_r(rx, RProfileVariant::Consent { t: 2 }).unwrap();
            let cgcdi = rx3c_to_cgcdi(rx).unwrap();
            expect(r, &format!("cgcdi source m={}", rx.m), &cgcdi, want);
            for (flavor, src) in [(AugmentFlavor::Gcai, &src), (AugmentFlavor::Gcdi, &cgcdi)] {
                let label = format!("augment {flavor:?} m={}", rx.m);
                let mut aug = augment_to_general(src, flavor).unwrap();
                r.checked += 1;
                let g1 = aug.a_minus.first().unwrap();
                if !eval(&aug.rule, aug.start(), &aug.profile).unwrap().contains(g1) {
                    r.fail(format!("{label}: g1 not initially qualified"));
                }
                expect(r, &label, &aug, want);
                if want {
                    aug.budget = src.budget;
                    expect(r, &format!("{label} budget kept"), &aug, false);
                }
            }
        }
    })
}

// ---- partial profiles ------------------------------------------------------------

fn random_rule_family(family: usize, rng: &mut ChaCha8Rng, n: usize) -> SocialRule {
    match family {
        0 => random_consent_rule(rng, n),
        1 => SocialRule::Csr,
        2 => SocialRule::Lsr,
        _ => {
            let SocialRule::Consent { s, t } = random_consent_rule(rng, n) else {
                unreachable!()
            };
            SocialRule::ternary_majority(s, t)
        }
    }
}

fn random_target(rng: &mut ChaCha8Rng, n: usize) -> IndividualSet {
    let k = rng.gen_range(1..=n.min(3));
    let all: Vec<usize> = (0..n).collect();
    all.choose_multiple(rng, k).copied().collect()
}

/// PQI and NQI against extension enumeration, `per_family` profiles for
/// each of consent, CSR, LSR and ternary rules.
pub fn partial_queries(per_family: usize, seed: u64) -> Report {
    timed(|r| {
        let sb = SearchBudget::default();
        for family in 0..4 {
            let mut rng = rng_for(seed.wrapping_add(family as u64));
            for i in 0..per_family {
                let n = rng.gen_range(1..=5);
                let unknowns = rng.gen_range(0..=8);
                let p = random_partial_profile(&mut rng, n, unknowns).unwrap();
                let rule = random_rule_family(family, &mut rng, n);
                let s = random_target(&mut rng, n);
                r.checked += 1;
                let label = format!("{rule} #{i}");
                let (bp, bn) = pqi_nqi_brute(&p, s, &rule, None, &sb).unwrap();
                let (fp, fnq) = (pqi(&p, s, &rule).unwrap(), nqi(&p, s, &rule).unwrap());
                if (fp, fnq) != (bp, bn) {
                    r.fail(format!("{label}: fast ({fp}, {fnq}) vs brute ({bp}, {bn})\n{p:?}"));
                }
                if fnq && !fp {
                    r.fail(format!("{label}: necessary but not possible"));
                }
            }
        }
    })
}

/// `r`-restricted queries against `r`-extension enumeration.
pub fn r_partial_queries(count: usize, seed: u64) -> Report {
    timed(|r| {
        let sb = SearchBudget::default();
        let mut rng = rng_for(seed);
        for i in 0..count {
            let n = rng.gen_range(2..=6);
            let rr = rng.gen_range(1..=3.min(n));
            let unknowns = rng.gen_range(0..=8);
            let p = random_r_partial_profile(&mut rng, n, rr, unknowns).unwrap();
            let s = random_target(&mut rng, n);
            let label = format!("r-partial #{i} n={n} r={rr}");

            let flow_rule = SocialRule::consent(rng.gen_range(2..=n + 1), 1);
            let any_rule = random_consent_rule(&mut rng, n);
            for rule in [flow_rule, any_rule] {
                r.checked += 1;
                let (bp, bn) = pqi_nqi_brute(&p, s, &rule, Some(rr), &sb).unwrap();
                if matches!(rule, SocialRule::Consent { t: 1, s } if s >= 2) {
                    let f = r_pqi_consent_flow(&p, s, rr, &rule).unwrap();
                    if f != bp {
                        r.fail(format!("{label} {rule}: flow {f} vs brute {bp}\n{p:?}"));
                    }
                }
                let g = r_pqi_general(&p, s, rr, &rule).unwrap();
                let nq = r_nqi(&p, s, rr, &rule).unwrap();
                if g != bp || nq != bn {
                    r.fail(format!(
                        "{label} {rule}: ({g}, {nq}) vs brute ({bp}, {bn}) S={:?}\n{p:?}",
                        s.to_vec()
                    ));
                }
                if nq && !g {
                    r.fail(format!("{label}: necessary but not possible"));
                }
            }
            if rr == 1 {
                for rule in [SocialRule::Csr, SocialRule::Lsr] {
                    r.checked += 1;
                    let (_, bn) = pqi_nqi_brute(&p, s, &rule, Some(1), &sb).unwrap();
                    let nq = r_nqi(&p, s, 1, &rule).unwrap();
                    if nq != bn {
                        r.fail(format!(
                            "{label} {rule}: r_nqi {nq} vs brute {bn} S={:?}\n{p:?}",
                            s.to_vec()
                        ));
                    }
                }
            }
        }
    })
}

// ---- determinism -------------------------------------------------------------------

/// A printable digest of a sweep's instances and every solver's output.
pub fn sweep_fingerprint(sweep: &str, count: usize, seed: u64) -> Vec<String> {
    let sb = SearchBudget::default();
    sweep_instances(sweep, count, seed)
        .iter()
        .map(|(inst, solver)| {
            let text = gid_core::format::write_instance(inst, "p.gid");
            let profile = gid_core::format::write_profile(&inst.profile);
            let fast = solve_named(solver, inst, &sb);
            let brute = solve_brute(inst, &sb);
            format!("{text}{profile}{fast:?}{brute:?}")
        })
        .collect()
}

pub fn determinism(count: usize, seed: u64) -> Report {
    use rayon::prelude::*;
    timed(|r| {
        for sweep in SWEPT_SOLVERS {
            r.checked += 1;
            let a = sweep_fingerprint(sweep, count, seed);
            let b = sweep_fingerprint(sweep, count, seed);
            if a != b {
                r.fail(format!("{sweep}: two sequential runs differ"));
            }
            // one instance per task, collected in index order
            let sb = SearchBudget::default();
            let par: Vec<String> = sweep_instances(sweep, count, seed)
                .par_iter()
                .map(|(inst, solver)| {
                    let text = gid_core::format::write_instance(inst, "p.gid");
                    let profile = gid_core::format::write_profile(&inst.profile);
                    format!(
                        "{text}{profile}{:?}{:?}",
                        solve_named(solver, inst, &sb),
                        solve_brute(inst, &sb)
                    )
                })
                .collect();
            if par != a {
                r.fail(format!("{sweep}: parallel run differs"));
            }
        }
        r.checked += 1;
        let gens = |s: u64| {
            let rx = Rx3cInstance::planted(2, s).unwrap();
            let mut rng = rng_for(s);
            format!(
                "{:?}{:?}{:?}{:?}{:?}",
                rx,
                rx3c_to_cgb(&rx).unwrap(),
                Rx3cInstance::without_cover(2, s).unwrap(),
                random_r_partial_profile(&mut rng, 6, 2, 5).unwrap(),
                random_partial_profile(&mut rng, 5, 4).unwrap()
            )
        };
        if (0..10).map(gens).collect::<Vec<_>>() != (0..10).map(gens).collect::<Vec<_>>() {
            r.fail("generators differ across runs".into());
        }
    })
}

pub fn changes_cost(inst: &AttackInstance, changes: &[PairChange]) -> u64 {
    changes.iter().map(|c| inst.pair_price(c.evaluator, c.evaluated)).sum()
}

pub fn applied(inst: &AttackInstance, w: &Solution) -> IndividualSet {
    apply(inst, w).unwrap()
}
