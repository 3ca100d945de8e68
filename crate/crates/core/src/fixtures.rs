//! Small worked members and standard modules, shared by tests, the CLI and the demo.

use crate::chains::{LValue, Multiplicity, Parity, StandardModule, TemperedDescriptor};
use crate::param::{BlockData, CuspidalLine, GroupContext, JordanBlock, PacketMember, Sign};

fn block(a: u32, b: u32, eta: Sign) -> BlockData {
    BlockData::new(JordanBlock::new(CuspidalLine::chi_v(), a, b).expect("positive indices"), eta, 0)
        .expect("t = 0 is always in range")
}

/// Steinberg representation of `Sp(6)`: one block `S_7 ⊗ S_1`.
pub fn steinberg_sp6() -> PacketMember {
    PacketMember::new(GroupContext::symplectic(6).expect("even"), vec![block(7, 1, Sign::Plus)])
}

/// Trivial representation of `Sp(6)`: one block `S_1 ⊗ S_7`.
pub fn trivial_sp6() -> PacketMember {
    PacketMember::new(GroupContext::symplectic(6).expect("even"), vec![block(1, 7, Sign::Plus)])
}

/// `Sp(10)` member with blocks `(1,1,-)`, `(3,1,+)`, `(1,7,-)`.
pub fn sp10_three_blocks() -> PacketMember {
    PacketMember::new(
        GroupContext::symplectic(10).expect("even"),
        vec![block(1, 1, Sign::Minus), block(3, 1, Sign::Plus), block(1, 7, Sign::Minus)],
    )
}

/// `O(10)` with trivial discriminant and Hasse invariant `-1`, blocks `(1,3,-)`, `(1,7,+)`.
pub fn o10_hasse_minus() -> PacketMember {
    PacketMember::new(
        GroupContext::orthogonal(10, Sign::Plus, Sign::Minus).expect("even"),
        vec![block(1, 3, Sign::Minus), block(1, 7, Sign::Plus)],
    )
}

fn odd() -> Multiplicity {
    Multiplicity::Parity(Parity::Odd)
}

/// `ν^3 ⋊ σ` with `σ` supercuspidal, `l(σ) = 5`: the standard module of [`sp10_three_blocks`].
pub fn sp10_standard_module() -> StandardModule {
    let sigma = TemperedDescriptor::known(5, odd(), odd()).with_label("σ");
    StandardModule::from_pairs(&[(3, 3)], sigma).expect("valid segments")
}

/// `ν^3 × δ(1,2) ⋊ σ`, `l(σ) = 3`: the standard module of [`o10_hasse_minus`].
pub fn o10_standard_module() -> StandardModule {
    let sigma = TemperedDescriptor::known(3, odd(), odd()).with_label("σ");
    StandardModule::from_pairs(&[(3, 3), (1, 2)], sigma).expect("valid segments")
}

/// Standard module of the level-5 lift of [`sp10_three_blocks`] on its going-down tower.
pub fn sp10_level5_module() -> StandardModule {
    let tempered = TemperedDescriptor::new(LValue::Unknown, Multiplicity::Unknown, Multiplicity::Unknown)
        .with_label("θ_{-1}(σ)");
    StandardModule::from_pairs(&[(3, 3), (2, 2), (1, 1)], tempered).expect("valid segments")
}
