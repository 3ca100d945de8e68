//! Exhaustive small members, synthetic standard modules and the invariant suites run on them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chains::{
    check_corollaries, LValue, LiftCase, LiftOutcome, LiftSet, Multiplicity, Parity, StandardModule,
    TemperedDescriptor,
};
use crate::half_int::HalfInt;
use crate::param::{BlockData, CuspidalLine, GroupContext, JordanBlock, PacketMember, Sign};
use crate::recipe::{
    d_index, high_lift, reverse_high_lift, roles_from, DescentReport, FallbackTable, LevelOutcome, Rule,
    TowerChoice,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Sp,
    O,
    All,
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sp" | "Sp" => Ok(Family::Sp),
            "o" | "O" => Ok(Family::O),
            "all" => Ok(Family::All),
            other => Err(format!("unknown family {other:?}; expected sp, o or all")),
        }
    }
}

fn sort_key(block: &JordanBlock) -> (HalfInt, std::cmp::Reverse<HalfInt>, u32, u32) {
    (block.big_a(), std::cmp::Reverse(block.big_b()), block.a(), block.b())
}

/// Good-parity shapes `(a, b)` on the trivial line with `a·b <= max_dim`, in canonical order.
fn shapes(max_dim: u32) -> Vec<JordanBlock> {
    let mut out = Vec::new();
    for a in 1..=max_dim {
        for b in 1..=max_dim / a {
            if a % 2 == b % 2 {
                out.push(JordanBlock::new(CuspidalLine::chi_v(), a, b).expect("positive"));
            }
        }
    }
    out.sort_by_key(sort_key);
    out
}

fn partitions(shapes: &[JordanBlock], from: usize, left: u32, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if left == 0 {
        out.push(current.clone());
        return;
    }
    for (i, shape) in shapes.iter().enumerate().skip(from) {
        let size = shape.dim();
        if size <= left {
            current.push(i);
            partitions(shapes, i, left - size, current, out);
            current.pop();
        }
    }
}

/// Allowed `(eta, t)` pairs for a block, canonical signs only.
fn sign_choices(block: &JordanBlock) -> Vec<(Sign, u32)> {
    let mut out = Vec::new();
    for t in 0..=block.min_ab() / 2 {
        out.push((Sign::Plus, t));
        if 2 * t != block.min_ab() {
            out.push((Sign::Minus, t));
        }
    }
    out
}

fn assign(
    shapes: &[JordanBlock],
    parts: &[usize],
    at: usize,
    previous: Option<usize>,
    current: &mut Vec<BlockData>,
    out: &mut Vec<Vec<BlockData>>,
) {
    if at == parts.len() {
        out.push(current.clone());
        return;
    }
    let block = &shapes[parts[at]];
    // Identical blocks take nondecreasing choices so each multiset appears once.
    let floor = match previous {
        Some(choice) if at > 0 && parts[at - 1] == parts[at] => choice,
        _ => 0,
    };
    for (k, (eta, t)) in sign_choices(block).into_iter().enumerate().skip(floor) {
        current.push(BlockData::raw(block.clone(), eta, t));
        assign(shapes, parts, at + 1, Some(k), current, out);
        current.pop();
    }
}

/// Parameter dimensions `N`, block data with `Σ a·b = N`, one canonical order per multiset.
fn block_lists(dim: u32, shapes: &[JordanBlock]) -> Vec<Vec<BlockData>> {
    let mut parts = Vec::new();
    partitions(shapes, 0, dim, &mut Vec::new(), &mut parts);
    let mut out = Vec::new();
    for p in parts {
        assign(shapes, &p, 0, None, &mut Vec::new(), &mut out);
    }
    out
}

/// Every valid good-parity member on the trivial line with parameter dimension at most `max_dim`.
///
/// Orthogonal groups use trivial discriminant and both Hasse invariants.
pub fn enumerate_members(family: Family, max_dim: u32) -> Vec<PacketMember> {
    let shapes = shapes(max_dim);
    let mut out = Vec::new();
    for dim in 1..=max_dim {
        let contexts: Vec<GroupContext> = match (dim % 2, family) {
            (1, Family::Sp | Family::All) => vec![GroupContext::symplectic(dim - 1).expect("even")],
            (0, Family::O | Family::All) => [Sign::Plus, Sign::Minus]
                .into_iter()
                .map(|hasse| GroupContext::orthogonal(dim, Sign::Plus, hasse).expect("even"))
                .collect(),
            _ => Vec::new(),
        };
        if contexts.is_empty() {
            continue;
        }
        for blocks in block_lists(dim, &shapes) {
            for context in &contexts {
                let m = PacketMember::new(*context, blocks.clone());
                if m.is_valid() {
                    out.push(m);
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// `d_down <= d_up`, with equality only at 1.
    TowerOrder,
    /// Nonzero levels are upward closed.
    Monotone,
    /// Every surviving level keeps the sign product of the high lift.
    SignProduct,
    /// Reversing the high lift recovers the member.
    RoundTrip,
    /// The det twist is an involution preserving validity.
    DetTwist,
    /// First occurrences add up to `2n + 2ε + 2`.
    Conservation,
    /// Far-away high blocks leave `d` unchanged.
    HighBlocks,
    /// A vanishing step happens right above a `ζ = -1`, `t = 0` block.
    Obstacle,
    /// Structural facts about chain lifts on synthetic standard modules.
    Chains,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::TowerOrder,
        Check::Monotone,
        Check::SignProduct,
        Check::RoundTrip,
        Check::DetTwist,
        Check::Conservation,
        Check::HighBlocks,
        Check::Obstacle,
        Check::Chains,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::TowerOrder => "tower-order",
            Check::Monotone => "monotone",
            Check::SignProduct => "sign-product",
            Check::RoundTrip => "round-trip",
            Check::DetTwist => "det-twist",
            Check::Conservation => "conservation",
            Check::HighBlocks => "high-blocks",
            Check::Obstacle => "obstacle",
            Check::Chains => "chains",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl FromStr for Check {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown check {s:?}"))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: Check,
    pub checked: usize,
    /// Cases where a hypothesis of the check was not met.
    pub skipped: usize,
    pub violations: Vec<String>,
}

impl CheckReport {
    fn new(check: Check) -> Self {
        CheckReport { check, checked: 0, skipped: 0, violations: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Descent on both towers of one member.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub member: PacketMember,
    pub plus: DescentReport,
    pub minus: DescentReport,
}

impl Analysis {
    pub fn new(member: &PacketMember) -> Self {
        let none = FallbackTable::new();
        let run = |tower| d_index(member, tower, &none).expect("enumerated members are valid");
        Analysis { member: member.clone(), plus: run(TowerChoice::Plus), minus: run(TowerChoice::Minus) }
    }

    /// No level on either tower needed the general algorithm.
    pub fn resolved(&self) -> bool {
        self.plus.d.is_some() && self.minus.d.is_some()
    }

    pub fn report(&self, tower: TowerChoice) -> &DescentReport {
        match tower {
            TowerChoice::Plus => &self.plus,
            TowerChoice::Minus => &self.minus,
        }
    }
}

pub fn run_member_checks(members: &[PacketMember], checks: &[Check]) -> Vec<CheckReport> {
    let analyses: Vec<Analysis> = members.iter().map(Analysis::new).collect();
    checks
        .iter()
        .filter(|c| **c != Check::Chains)
        .map(|&check| {
            let mut report = CheckReport::new(check);
            for a in &analyses {
                member_check(check, a, &mut report);
            }
            report
        })
        .collect()
}

fn member_check(check: Check, a: &Analysis, report: &mut CheckReport) {
    let m = &a.member;
    match check {
        Check::TowerOrder | Check::Conservation => {
            let (Some(dp), Some(dm)) = (a.plus.d, a.minus.d) else {
                report.skipped += 1;
                return;
            };
            match roles_from(&m.context, dp, dm) {
                Ok(roles) if check == Check::TowerOrder => {
                    report.record(roles.d_down <= roles.d_up, || format!("{m}: d_down > d_up"))
                }
                Ok(roles) => {
                    let n = i64::from(m.context.n);
                    let eps = if m.context.is_symplectic() { 1 } else { -1 };
                    let ok = roles.m_up + roles.m_down == 2 * n + 2 * eps + 2 && roles.m_up == n + eps + roles.d_up;
                    report.record(ok, || format!("{m}: first occurrences {} + {}", roles.m_up, roles.m_down))
                }
                Err(e) => report.record(false, || format!("{m}: {e}")),
            }
        }
        Check::Monotone => {
            for r in [&a.plus, &a.minus] {
                report.record(r.is_monotone(), || format!("{m} ({}): nonzero levels not upward closed", r.tower));
            }
        }
        Check::SignProduct => {
            for r in [&a.plus, &a.minus] {
                let want = r.top.member.sign_product();
                for level in &r.levels {
                    if let LevelOutcome::Member(lm) = &level.outcome {
                        report.record(lm.sign_product() == want, || {
                            format!("{m} ({}): level {} has sign product {}", r.tower, level.alpha, lm.sign_product())
                        });
                        if !lm.context.is_symplectic() {
                            continue;
                        }
                        report.record(lm.is_valid(), || format!("{m} ({}): level {} invalid", r.tower, level.alpha));
                    }
                }
            }
        }
        Check::RoundTrip => {
            for tower in TowerChoice::BOTH {
                let (top, _) = high_lift(m, tower).expect("valid member");
                let expected = if !m.context.is_symplectic() && tower == TowerChoice::Minus {
                    m.det_twist().expect("orthogonal")
                } else {
                    m.clone()
                };
                let back = reverse_high_lift(&top.member);
                report.record(back.as_ref() == Ok(&expected), || format!("{m} ({tower}): reversed to {back:?}"));
            }
        }
        Check::DetTwist => {
            if m.context.is_symplectic() {
                report.skipped += 1;
                return;
            }
            let once = m.det_twist().expect("orthogonal");
            let ok = once.is_valid() && once.det_twist().as_ref() == Ok(m);
            report.record(ok, || format!("{m}: det twist is not an involution"));
        }
        Check::Obstacle => {
            for r in [&a.plus, &a.minus] {
                let Some(d) = r.d else {
                    report.skipped += 1;
                    continue;
                };
                if d == 1 {
                    continue;
                }
                let stop = r.level(d - 2).expect("level below d");
                let above = r.member_at(d).expect("member at d");
                let ok = stop.rule == Rule::AdjacentVanish
                    && stop.block.is_some_and(|j| {
                        let bd = &above.blocks[j];
                        bd.block.zeta() == Sign::Minus && bd.t == 0
                    });
                report.record(ok, || format!("{m} ({}): vanishing at {} without an obstacle", r.tower, d - 2));
            }
        }
        Check::HighBlocks => high_block_check(a, report),
        Check::Chains => {}
    }
}

/// A block `(2, b)` with `t = 1` whose segment starts well above every existing block.
fn with_high_block(m: &PacketMember) -> (PacketMember, HalfInt) {
    let top = m.blocks.iter().map(|bd| bd.block.big_a().floor()).max().unwrap_or(-1);
    let start = top + 3;
    let b = (2 * start + 2) as u32;
    let high = BlockData::new(JordanBlock::new(CuspidalLine::chi_v(), 2, b).expect("positive"), Sign::Plus, 1)
        .expect("t = 1 fits a = 2");
    let mut blocks = m.blocks.clone();
    blocks.push(high);
    let mut context = m.context;
    context.n += 2 * b;
    (PacketMember::new(context, blocks), HalfInt::from_int(start))
}

fn high_block_check(a: &Analysis, report: &mut CheckReport) {
    let m = &a.member;
    let (extended, start) = with_high_block(m);
    debug_assert!(extended.is_valid(), "{extended}");
    let ext = Analysis::new(&extended);
    // Largest level whose added block already sits below the high block.
    let alpha = 2 * start.floor() - 1;
    for tower in TowerChoice::BOTH {
        let r_ext = ext.report(tower);
        let Some(d_ext) = r_ext.d else {
            report.skipped += 1;
            continue;
        };
        let Some(level) = r_ext.level(alpha) else {
            report.skipped += 1;
            continue;
        };
        let (LevelOutcome::Member(lm), Some(added)) = (&level.outcome, level.added) else {
            report.skipped += 1;
            continue;
        };
        let eta = lm.blocks[added].eta;
        let partner = TowerChoice::BOTH.into_iter().find(|t| {
            let r = a.report(*t);
            r.member_at(alpha).is_some_and(|pm| pm.blocks[r.top.added].eta == eta)
        });
        let Some(partner) = partner else {
            report.skipped += 1;
            continue;
        };
        let Some(d) = a.report(partner).d else {
            report.skipped += 1;
            continue;
        };
        report.record(d == d_ext, || {
            format!("{m} ({partner}) has d = {d} but with a high block ({tower}) d = {d_ext}")
        });
    }
}

/// Integer segments `[x, y]` with `-4 <= x <= y <= 5` and `x + y > 0`.
pub fn segment_types() -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for y in 1..=5 {
        for x in (-4).max(1 - y)..=y {
            out.push((x, y));
        }
    }
    out
}

/// Tempered parts the chain rules can meet: `l ∈ {-1, 1, 3, 5}`, odd `m(S_1)` when `l > 1`.
pub fn tempered_descriptors() -> Vec<TemperedDescriptor> {
    let parities = [Parity::Odd, Parity::Even];
    let mut out = Vec::new();
    for p in parities {
        let m = Multiplicity::Parity(p);
        out.push(TemperedDescriptor::known(-1, m, Multiplicity::Unknown));
        out.push(TemperedDescriptor::known(1, m, m));
    }
    for l in [3, 5] {
        for p in parities {
            out.push(TemperedDescriptor::known(l, Multiplicity::Parity(Parity::Odd), Multiplicity::Parity(p)));
        }
    }
    out
}

/// Every multiset of at most `full` segment types, plus `sampled` random multisets of
/// `full + 1 ..= 5` segments; each paired with a tempered descriptor in rotation.
pub fn synthetic_modules(full: usize, sampled: usize, seed: u64) -> Vec<StandardModule> {
    let types = segment_types();
    let descriptors = tempered_descriptors();
    let mut multisets: Vec<Vec<(i64, i64)>> = vec![Vec::new()];
    let mut frontier: Vec<(usize, Vec<(i64, i64)>)> = vec![(0, Vec::new())];
    for _ in 0..full {
        let mut next = Vec::new();
        for (from, ms) in &frontier {
            for (i, t) in types.iter().enumerate().skip(*from) {
                let mut grown = ms.clone();
                grown.push(*t);
                multisets.push(grown.clone());
                next.push((i, grown));
            }
        }
        frontier = next;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..sampled {
        let size = rng.gen_range(full + 1..=5.max(full + 1));
        let ms: Vec<(i64, i64)> = (0..size).map(|_| *types.choose(&mut rng).expect("types")).collect();
        multisets.push(ms);
    }
    let mut out = Vec::new();
    for (i, ms) in multisets.iter().enumerate() {
        for k in 0..2 {
            let tempered = descriptors[(2 * i + k) % descriptors.len()].clone();
            out.push(StandardModule::from_pairs(ms, tempered).expect("types are valid segments"));
        }
    }
    out
}

/// Tempered parts to try for the next up lift: `l(τ')` runs from the bound the chain rules
/// guarantee up to `l(π)`.
pub fn second_step_descriptors(base: &StandardModule, l_pi: i64) -> impl Fn(&LiftOutcome) -> Vec<TemperedDescriptor> {
    let l_tau = base.tempered.l_tau.known().unwrap_or(-1);
    move |up: &LiftOutcome| {
        let lower = match up.case {
            Some(LiftCase::Reflected) => l_tau,
            _ => l_tau + 2,
        };
        let s1_choices: Vec<Multiplicity> = match up.module.tempered.m_s1 {
            Multiplicity::Unknown => vec![Multiplicity::Parity(Parity::Odd), Multiplicity::Parity(Parity::Even)],
            known => vec![known],
        };
        let mut out = Vec::new();
        for l in (lower.max(-1)..=l_pi.max(lower)).step_by(2) {
            for &s1 in &s1_choices {
                if l > 1 && s1 != Multiplicity::Parity(Parity::Odd) {
                    continue;
                }
                // After a reflected lift the new thick segment starts at (1 - l(τ))/2, which an
                // even top multiplicity at the same l would forbid as a chain start.
                let reflected_again = up.case == Some(LiftCase::Reflected) && l == l_tau;
                let sl: Vec<Multiplicity> = if reflected_again {
                    vec![Multiplicity::Parity(Parity::Odd)]
                } else if l > 1 {
                    vec![Multiplicity::Parity(Parity::Odd), Multiplicity::Parity(Parity::Even)]
                } else {
                    vec![s1]
                };
                for msl in sl {
                    out.push(TemperedDescriptor::new(LValue::Known(l), s1, msl).with_label("τ′"));
                }
            }
        }
        out
    }
}

/// Lifts gathered for the chain checks; the vanishing check needs `l(τ) > 0`.
pub fn lift_set_for(std: &StandardModule) -> Result<LiftSet, crate::chains::ChainError> {
    let l_pi = crate::chains::l_of_pi(std)?;
    let mut set = LiftSet::compute(std, 2, &second_step_descriptors(std, l_pi))?;
    if std.tempered.l_tau.known().is_none_or(|l| l <= 0) {
        set.composites.clear();
    }
    Ok(set)
}

pub fn run_chain_checks(modules: &[StandardModule]) -> CheckReport {
    let mut report = CheckReport::new(Check::Chains);
    for std in modules {
        match lift_set_for(std) {
            Ok(set) => {
                let result = check_corollaries(std, &set);
                report.checked += result.checks_run;
                report.violations.extend(
                    result.violations.iter().map(|v| format!("{std}: {} at α={} β={:?}: {}", v.check, v.alpha, v.beta, v.detail)),
                );
            }
            Err(_) => report.skipped += 1,
        }
    }
    report
}

/// Counts by group for an enumeration run.
pub fn count_by_group(members: &[PacketMember]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for m in members {
        *out.entry(m.context.to_string()).or_default() += 1;
    }
    out
}
