use adams_core::chains::{
    check_corollaries, embed_higher, find_chains, first_up_index, lift_down, lift_shrink, lift_up, ChainConstraints,
    LiftCase, Multiplicity, Parity, StandardModule, TemperedDescriptor,
};
use adams_core::enumerate::lift_set_for;
use adams_core::fixtures;
use adams_core::segment::Segment;
use adams_core::HalfInt;

fn module(pairs: &[(i64, i64)], l: i64, m: Parity) -> StandardModule {
    let m = Multiplicity::Parity(m);
    StandardModule::from_pairs(pairs, TemperedDescriptor::known(l, m, m)).unwrap()
}

fn sorted(std: &StandardModule) -> Vec<(i64, i64)> {
    let mut out: Vec<_> = std.pairs().into_iter().map(|(x, y)| (x.floor(), y.floor())).collect();
    out.sort();
    out
}

#[test]
fn single_segment_chain() {
    let m = module(&[(3, 3)], 5, Parity::Odd);
    let chains = find_chains(&m, &ChainConstraints::starting_at(HalfInt::from_int(3)));
    assert_eq!(chains[0].to_string(), "[3,3]");
}

#[test]
fn down_lift_at_one_only_touches_the_tempered_part() {
    let base = fixtures::sp10_standard_module();
    let out = lift_down(&base, 1).unwrap();
    assert_eq!(out.module.segments, base.segments);
    assert_eq!(out.module.tempered.m_s1, Multiplicity::Parity(Parity::Even));
}

#[test]
fn down_lifts_commute_with_embedding() {
    let base = fixtures::sp10_standard_module();
    let at5 = lift_down(&base, 5).unwrap().module;
    let at9 = embed_higher(&at5, 5, 9).unwrap();
    let mut added = sorted(&at9);
    for p in sorted(&at5) {
        let i = added.iter().position(|q| *q == p).unwrap();
        added.remove(i);
    }
    assert_eq!(added, vec![(3, 3), (4, 4)]);
    assert_eq!(at9.segments, lift_down(&base, 9).unwrap().module.segments);
}

#[test]
fn shrink_without_a_chain_changes_nothing() {
    let m = module(&[(1, 1)], 1, Parity::Odd);
    let out = lift_shrink(&m, 7).unwrap();
    assert!(out.chain.is_empty());
    assert_eq!(out.module.segments, m.segments);
}

#[test]
fn reflected_up_lift_adds_the_symmetric_segment() {
    let m = module(&[(2, 2)], 3, Parity::Even);
    let out = lift_up(&m, 7).unwrap();
    assert_eq!(out.case, Some(LiftCase::Reflected));
    assert_eq!(sorted(&out.module), vec![(-1, 2), (2, 3)]);
}

#[test]
fn first_up_index_of_an_empty_chain() {
    let m = module(&[], -1, Parity::Odd);
    assert_eq!(first_up_index(&m), Ok(1));
}

#[test]
fn corollaries_hold_on_the_worked_modules() {
    for std in [fixtures::sp10_standard_module(), fixtures::o10_standard_module()] {
        let set = lift_set_for(&std).unwrap();
        let report = check_corollaries(&std, &set);
        assert!(report.passed(), "{:?}", report.violations);
        assert!(!set.composites.is_empty());
    }
}

#[test]
fn tampered_up_lift_is_caught() {
    let std = fixtures::sp10_standard_module();
    let mut set = lift_set_for(&std).unwrap();
    let gap = HalfInt::from_int((set.l_pi + 1) / 2);
    let first = set.up.values_mut().next().unwrap();
    first.module.segments.push(Segment::new(std.segments[0].rho.clone(), gap, gap).unwrap());
    let report = check_corollaries(&std, &set);
    assert!(report.violations.iter().any(|v| v.check == "up-lacks-gap"));
}
