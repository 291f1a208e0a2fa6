//! Worked examples that cut across modules: generated instances solved by
//! the oracle and the specialized solvers, plus the generator contracts.

use gid_core::generators::{
    augment_to_general, gen_random_profile, gen_random_r_profile, rx3c_to_cgb, rx3c_to_cgb_clipped, rx3c_to_cgcai_r,
    AugmentFlavor, RProfileVariant, Rx3cInstance,
};
use gid_core::oracle::{pqi_nqi_brute, solve_brute, solve_control_brute, SearchBudget};
use gid_core::partial::{pqi, r_pqi_consent_flow, r_pqi_general};
use gid_core::solvers::{check_immunity, solve_auto, solve_cgb_xp, solve_gcdi_22};
use gid_core::{
    check_witness, diagnostics, eval, Answer, AttackInstance, Cell, Family, IndividualSet, Objective, Profile,
    ProfileKind, SocialRule,
};

fn set(xs: &[usize]) -> IndividualSet {
    xs.iter().copied().collect()
}

fn ex1() -> Profile {
    Profile::binary_from_rows(&["+++-+", "--+-+", "-++--", "++++-", "-++--"]).unwrap()
}

fn sb() -> SearchBudget {
    SearchBudget::default()
}

#[test]
fn duality_on_the_worked_example() {
    let p = ex1();
    let n = p.everyone();
    let direct = eval(&SocialRule::consent(1, 2), n, &p).unwrap();
    let dual = n.difference(eval(&SocialRule::consent(2, 1), n, &p.negate().unwrap()).unwrap());
    assert_eq!(direct, set(&[0, 1, 2, 3]));
    assert_eq!(direct, dual);
    assert_eq!(p.negate().unwrap().negate().unwrap(), p);
}

#[test]
fn deletion_witness_is_recomputed() {
    let mut inst = AttackInstance::new(ex1(), SocialRule::consent(1, 2), Family::Gcdi, Objective::Constructive);
    inst.a_plus = set(&[4]);
    inst.budget = Some(2);
    let w = gid_core::Solution::Deleted(set(&[2]));
    let after = eval(&inst.rule, set(&[0, 1, 3, 4]), &inst.profile).unwrap();
    assert_eq!(check_witness(&inst, &w).unwrap(), after.contains(4));

    let v = solve_control_brute(&inst, &sb()).unwrap();
    if let Some(w) = &v.witness {
        assert!(check_witness(&inst, w).unwrap());
    }
}

#[test]
fn rx3c_bribery_planted() {
    let rx = Rx3cInstance::planted(1, 7).unwrap();
    let inst = rx3c_to_cgb(&rx).unwrap();
    assert!(inst.validate().is_empty());
    let v = solve_brute(&inst, &sb()).unwrap();
    assert_eq!(v.answer, Answer::Yes);
    assert_eq!(v.witness.as_ref().unwrap().individuals().len(), 1);

    let rx = Rx3cInstance::planted(2, 11).unwrap();
    let inst = rx3c_to_cgb(&rx).unwrap();
    let v = solve_brute(&inst, &sb()).unwrap();
    assert_eq!(v.answer, Answer::Yes);
    let w = v.witness.unwrap();
    assert_eq!(w.individuals().len(), 2);
    assert!(check_witness(&inst, &w).unwrap());
}

#[test]
fn rx3c_bribery_without_cover() {
    let rx = Rx3cInstance::without_cover(2, 3).unwrap();
    assert!(!rx.has_cover());
    let inst = rx3c_to_cgb(&rx).unwrap();
    assert_eq!(solve_brute(&inst, &sb()).unwrap().answer, Answer::No);
    assert_eq!(solve_cgb_xp(&inst).unwrap().answer, Answer::No);
}

#[test]
fn rx3c_diagnostics() {
    let rx = Rx3cInstance::planted(2, 5).unwrap();
    let d = diagnostics(&rx3c_to_cgb(&rx).unwrap()).unwrap();
    assert_eq!(d.s_star, Some(2));
    assert_eq!(d.per_individual.len(), 6);
    for slack in d.per_individual.values() {
        assert_eq!((slack.missing, slack.choices), (1, 3));
    }
}

#[test]
fn clipped_bribery_matches_the_oracle() {
    for seed in 0..4 {
        let rx = Rx3cInstance::planted(2, seed).unwrap();
        let inst = rx3c_to_cgb_clipped(&rx, 2).unwrap();
        let fast = solve_cgb_xp(&inst).unwrap();
        let slow = solve_brute(&inst, &sb()).unwrap();
        assert_eq!(fast.answer, slow.answer, "seed {seed}");
        if let Some(w) = &fast.witness {
            assert!(check_witness(&inst, w).unwrap());
        }
    }
}

#[test]
fn gcdi_forced_deletion_of_a_protected_individual() {
    // a0 is disqualified by itself and by a2; a2 is in A⁻ and may not be deleted.
    let p = Profile::binary_from_rows(&["-+++", "++++", "-+-+", "++++"]).unwrap();
    let mut inst = AttackInstance::new(p, SocialRule::consent(2, 2), Family::Gcdi, Objective::General);
    inst.a_plus = set(&[0]);
    inst.a_minus = set(&[2]);
    inst.budget = Some(3);
    assert_eq!(solve_gcdi_22(&inst).unwrap().answer, Answer::No);
    assert_eq!(solve_control_brute(&inst, &sb()).unwrap().answer, Answer::No);
}

#[test]
fn immunity_tags() {
    let mut inst = AttackInstance::new(ex1(), SocialRule::Lsr, Family::Gcpi, Objective::Constructive);
    inst.a_plus = set(&[0]);
    // LSR qualifies everyone in the worked example; cut a0 off from its qualifiers.
    inst.profile.set(0, 0, Cell::Disqualify).unwrap();
    inst.profile.set(3, 0, Cell::Disqualify).unwrap();
    let v = check_immunity(&inst);
    assert!(v.immune);
    assert_eq!(v.theorem_tag, Some("cor:lsr_immune_gcdi_gcpi"));
    assert_eq!(solve_brute(&inst, &sb()).unwrap().answer, Answer::No);

    let mut inst = AttackInstance::new(ex1(), SocialRule::consent(1, 1), Family::Gcpi, Objective::Constructive);
    inst.a_plus = set(&[1]);
    let d = solve_auto(&inst, &sb());
    assert_eq!(d.solver, "immunity");
    assert_eq!(d.result.unwrap().answer, Answer::Immune);
}

#[test]
fn pqi_single_unknown() {
    // a0 qualifies only itself; a2's opinion is unknown.
    let p = Profile::from_rows(ProfileKind::Partial, &["+--", "---", "?--"]).unwrap();
    let rule = SocialRule::consent(2, 1);
    let (possible, necessary) = pqi_nqi_brute(&p, set(&[0]), &rule, None, &sb()).unwrap();
    assert!(possible && !necessary);
    assert!(pqi(&p, set(&[0]), &rule).unwrap());
}

#[test]
fn pqi_liberal_self_resolution() {
    let p = Profile::from_rows(ProfileKind::Partial, &["?---", "-+--", "-++-", "-+-+"]).unwrap();
    let rule = SocialRule::consent(1, 2);
    assert!(pqi(&p, set(&[0]), &rule).unwrap());
    assert!(pqi_nqi_brute(&p, set(&[0]), &rule, None, &sb()).unwrap().0);
}

#[test]
fn r_pqi_branching_agrees_with_flow_when_t_is_one() {
    for seed in 0..40 {
        let p = gid_core::generators::gen_r_partial_profile(5, 2, 6, seed).unwrap();
        let rule = SocialRule::consent(2, 1);
        for s in [set(&[0]), set(&[1, 3]), set(&[0, 2, 4])] {
            let flow = r_pqi_consent_flow(&p, s, 2, &rule);
            let general = r_pqi_general(&p, s, 2, &rule);
            match (flow, general) {
                (Ok(a), Ok(b)) => assert_eq!(a, b, "seed {seed}"),
                (Err(_), Err(_)) => {}
                (a, b) => panic!("seed {seed}: {a:?} vs {b:?}"),
            }
        }
    }
}

#[test]
fn generator_contracts() {
    let a = gen_random_profile(5, ProfileKind::Binary, 0.0, 1).unwrap();
    assert_eq!(a, gen_random_profile(5, ProfileKind::Binary, 0.0, 1).unwrap());
    assert_eq!(gen_random_profile(0, ProfileKind::Binary, 0.0, 9).unwrap().n(), 0);
    let full = gen_random_r_profile(4, 4, 3).unwrap();
    assert!((0..4).all(|a| (0..4).all(|b| full.cell(a, b) == Cell::Qualify)));
}

#[test]
fn r_profile_reduction_planted() {
    let rx = Rx3cInstance::planted(1, 2).unwrap();
    let inst = rx3c_to_cgcai_r(&rx, RProfileVariant::Consent { t: 2 }).unwrap();
    assert!(inst.validate().is_empty());
    assert_eq!(solve_brute(&inst, &sb()).unwrap().answer, Answer::Yes);
}

#[test]
fn augmentation_needs_the_extra_unit_of_budget() {
    let rx = Rx3cInstance::planted(1, 4).unwrap();
    let src = rx3c_to_cgcai_r(&rx, RProfileVariant::Consent { t: 2 }).unwrap();
    let aug = augment_to_general(&src, AugmentFlavor::Gcai).unwrap();
    assert!(aug.validate().is_empty());
    assert_eq!(solve_brute(&aug, &sb()).unwrap().answer, Answer::Yes);

    let mut short = aug.clone();
    short.budget = short.budget.map(|b| b - 1);
    assert_eq!(solve_brute(&short, &sb()).unwrap().answer, Answer::No);
}
