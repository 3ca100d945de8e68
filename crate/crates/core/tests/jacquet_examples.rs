use adams_core::chains::{lift_down, StandardModule, TemperedDescriptor};
use adams_core::fixtures;
use adams_core::jacquet::{
    dominate, is_ddr, jac_neg_nonzero, jac_vanishes_arthur, jacquet_plan, mstar_zeta, sigma_above, ArthurJacVerdict,
    Dominated, GlObject, JacVerdict, LadderShape,
};
use adams_core::param::{BlockData, CuspidalLine, GroupContext, JordanBlock, PacketMember, Sign};
use adams_core::HalfInt;

fn h(n: i64) -> HalfInt {
    HalfInt::from_int(n)
}

fn module(pairs: &[(i64, i64)]) -> StandardModule {
    StandardModule::from_pairs(pairs, TemperedDescriptor::unknown()).unwrap()
}

fn bd(a: u32, b: u32) -> BlockData {
    BlockData::new(JordanBlock::new(CuspidalLine::chi_v(), a, b).unwrap(), Sign::Plus, 0).unwrap()
}

#[test]
fn single_exponent_expansion_has_three_terms() {
    for doubled in [1, 2, 3, 4, 7] {
        let a = HalfInt::from_doubled(doubled);
        let sum = mstar_zeta(a, a).unwrap();
        assert_eq!(sum.total(), 3);
        let unit = GlObject::unit();
        assert_eq!(sum.multiplicity(&[GlObject::zeta(-a, -a), unit.clone()]), 1);
        assert_eq!(sum.multiplicity(&[GlObject::zeta(a, a), unit.clone()]), 1);
        assert_eq!(sum.multiplicity(&[unit, GlObject::zeta(a, a)]), 1);
    }
}

#[test]
fn upper_part_of_level_five_modules_is_a_ladder() {
    let (upper, shape) = sigma_above(&module(&[(3, 3), (2, 2), (1, 2), (1, 1)]), h(2));
    let pairs: Vec<_> = upper.iter().map(|s| (s.x, s.y)).collect();
    assert_eq!(pairs, vec![(h(2), h(2)), (h(3), h(3))]);
    assert!(matches!(shape, LadderShape::SingleLadder(_)));

    let (upper, shape) = sigma_above(&module(&[(1, 2)]), h(5));
    assert!(upper.is_empty());
    assert_eq!(shape, LadderShape::Unlinked);
}

#[test]
fn nested_segments_are_not_linked() {
    let (_, shape) = sigma_above(&module(&[(1, 3), (2, 2)]), h(1));
    assert_eq!(shape, LadderShape::Unlinked);
}

#[test]
fn level_five_modules_kill_the_next_step() {
    let sp = lift_down(&fixtures::sp10_standard_module(), 5).unwrap().module;
    assert_eq!(jac_neg_nonzero(&sp, h(2)), JacVerdict::Zero);
    let o = lift_down(&fixtures::o10_standard_module(), 5).unwrap().module;
    assert_eq!(o.segments, module(&[(3, 3), (2, 2), (1, 2), (1, 1)]).segments);
    assert_eq!(jac_neg_nonzero(&o, h(2)), JacVerdict::Zero);
    assert_eq!(jac_neg_nonzero(&module(&[(2, 2)]), h(2)), JacVerdict::Nonzero);
}

#[test]
fn mixed_lines_are_unsupported() {
    let mut std = module(&[(2, 2)]);
    let other = CuspidalLine::named("ρ", 2, adams_core::param::SelfDualType::Symplectic).unwrap();
    std.segments.push(adams_core::segment::Segment::new(other, h(3), h(3)).unwrap());
    assert_eq!(jac_neg_nonzero(&std, h(2)), JacVerdict::Unsupported);
}

#[test]
fn dominate_shifts_repeated_blocks() {
    let m = PacketMember::new(GroupContext::symplectic(12).unwrap(), vec![bd(7, 1), bd(7, 1)]);
    let d = dominate(&m, &CuspidalLine::chi_v());
    assert_eq!(d.shifts, vec![0, 1]);
    assert!(is_ddr(&d.blocks, &d.rho));

    let m = fixtures::sp10_three_blocks();
    let d = dominate(&m, &CuspidalLine::chi_v());
    assert_eq!(d.shifts, vec![0, 0, 0]);
    assert!(is_ddr(&m.blocks, &CuspidalLine::chi_v()));
}

fn plan_for(a: u32, b: u32, shift: u32) -> Vec<HalfInt> {
    let d = Dominated { blocks: vec![bd(a, b)], shifts: vec![shift], rho: CuspidalLine::chi_v() };
    jacquet_plan(&d).exponents()
}

#[test]
fn plans_undo_shifts() {
    // [3,3] with zeta = -1 shifted once sits at (1,9); twice at (1,11).
    assert_eq!(plan_for(1, 9, 1), vec![h(-4)]);
    assert_eq!(plan_for(1, 11, 2), vec![h(-5), h(-4)]);
    // [3,4] with zeta = +1 shifted once sits at (10,2).
    assert_eq!(plan_for(10, 2, 1), vec![h(4), h(5)]);
    assert!(plan_for(7, 1, 0).is_empty());
}

#[test]
fn arthur_criterion() {
    let line = CuspidalLine::chi_v();
    let steinberg = fixtures::steinberg_sp6();
    assert_eq!(jac_vanishes_arthur(&steinberg, &line, h(-3)), ArthurJacVerdict::Zero);
    assert_eq!(jac_vanishes_arthur(&steinberg, &line, h(3)), ArthurJacVerdict::PossiblyNonzero);
    let trivial = fixtures::trivial_sp6();
    assert_eq!(jac_vanishes_arthur(&trivial, &line, h(-3)), ArthurJacVerdict::PossiblyNonzero);
    assert_eq!(jac_vanishes_arthur(&trivial, &line, HalfInt::HALF), ArthurJacVerdict::Zero);
}
