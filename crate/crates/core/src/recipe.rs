//! High lifts, the level-by-level descent and the tower bookkeeping built on it.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chains::StandardModule;
use crate::half_int::HalfInt;
use crate::jacquet::{jac_neg_nonzero, JacVerdict};
use crate::param::{
    BlockData, CuspidalLine, GroupContext, Issue, JordanBlock, LineLabel, PacketMember, ParamError, Sign,
    ValidationReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecipeError {
    #[error("block #{index} has bad parity")]
    BadParity { index: usize },
    #[error("member is not valid: {}", .0.issues.iter().map(Issue::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(ValidationReport),
    #[error("level {0} must be a positive odd integer")]
    BadLevel(i64),
    #[error("the last block is not a removable (chi_W, 1, alpha) block")]
    TopBlockNotRemovable,
    #[error("blocks #{0} and #{1} are not a block followed by a singleton")]
    NotAdjacent(usize, usize),
    #[error("singleton {x} lies outside [{lo}, {hi}]")]
    SingletonOutsideInterval { x: HalfInt, lo: HalfInt, hi: HalfInt },
    #[error("order change undefined: signs differ and t = 0")]
    OrderChangeUndefined,
    #[error("d is unresolved on the {0} tower")]
    UnresolvedD(TowerChoice),
    #[error("both towers stop at d = {0} > 1")]
    EqualTowers(i64),
    #[error(transparent)]
    Param(#[from] ParamError),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TowerChoice {
    Plus,
    Minus,
}

impl TowerChoice {
    pub const BOTH: [TowerChoice; 2] = [TowerChoice::Plus, TowerChoice::Minus];

    pub fn other(self) -> Self {
        match self {
            TowerChoice::Plus => TowerChoice::Minus,
            TowerChoice::Minus => TowerChoice::Plus,
        }
    }

    /// What the label means for a given source group.
    pub fn describe(self, source: &GroupContext) -> &'static str {
        match (source.is_symplectic(), self) {
            (true, TowerChoice::Plus) => "added block has eta = +",
            (true, TowerChoice::Minus) => "added block has eta = -",
            (false, TowerChoice::Plus) => "lift of the member itself",
            (false, TowerChoice::Minus) => "lift of the det-twisted member",
        }
    }
}

impl fmt::Display for TowerChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerChoice::Plus => write!(f, "plus"),
            TowerChoice::Minus => write!(f, "minus"),
        }
    }
}

impl std::str::FromStr for TowerChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plus" | "+" => Ok(TowerChoice::Plus),
            "minus" | "-" => Ok(TowerChoice::Minus),
            other => Err(format!("unknown tower {other:?}; expected plus or minus")),
        }
    }
}

/// Standard modules of lifted members, keyed by level, used when separation fails.
pub type FallbackTable = BTreeMap<i64, StandardModule>;

fn check_level(alpha: i64) -> Result<(), RecipeError> {
    if alpha <= 0 || alpha % 2 == 0 {
        return Err(RecipeError::BadLevel(alpha));
    }
    Ok(())
}

fn added_block(alpha: i64) -> Result<JordanBlock, RecipeError> {
    check_level(alpha)?;
    Ok(JordanBlock::new(CuspidalLine::chi_w(), 1, alpha as u32)?)
}

/// Group on the other side of the dual pair at level `alpha`.
pub fn target_context(source: &GroupContext, alpha: i64, hasse: Sign) -> Result<GroupContext, RecipeError> {
    check_level(alpha)?;
    let n = i64::from(source.n);
    Ok(if source.is_symplectic() {
        GroupContext::orthogonal((n + 1 + alpha) as u32, Sign::Plus, hasse)?
    } else {
        GroupContext::symplectic((n - 1 + alpha) as u32)?
    })
}

/// The parameter `ψ_α` as a list of blocks: lines twisted, `(chi_W, 1, α)` appended.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AdamsTarget {
    pub context: GroupContext,
    pub blocks: Vec<JordanBlock>,
}

pub fn adams_target(m: &PacketMember, alpha: i64) -> Result<AdamsTarget, RecipeError> {
    let mut blocks: Vec<JordanBlock> = m.blocks.iter().map(|bd| bd.block.with_rho(bd.block.rho.twisted())).collect();
    blocks.push(added_block(alpha)?);
    Ok(AdamsTarget { context: target_context(&m.context, alpha, Sign::Plus)?, blocks })
}

/// A member of `Π_{ψ_α}` that remembers which block was added by the lift.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TargetMember {
    pub member: PacketMember,
    pub added: usize,
    pub alpha: i64,
}

impl TargetMember {
    pub fn added_data(&self) -> &BlockData {
        &self.member.blocks[self.added]
    }

    /// The same data with the added block moved to level `alpha`.
    pub fn at(&self, alpha: i64) -> Result<TargetMember, RecipeError> {
        let block = added_block(alpha)?;
        let mut member = self.member.clone();
        let old = &member.blocks[self.added];
        member.blocks[self.added] = BlockData::raw(block, old.eta, old.t);
        let n = i64::from(member.context.n) + alpha - self.alpha;
        member.context.n = u32::try_from(n).map_err(|_| RecipeError::BadLevel(alpha))?;
        Ok(TargetMember { member, added: self.added, alpha })
    }
}

fn same_line_max_a(blocks: &[BlockData], line: &CuspidalLine) -> Option<HalfInt> {
    blocks.iter().filter(|bd| &bd.block.rho == line).map(|bd| bd.block.big_a()).max()
}

fn require_valid(m: &PacketMember) -> Result<(), RecipeError> {
    let report = m.validate();
    if let Some(Issue::BadParity { index }) = report.issues.iter().find(|i| matches!(i, Issue::BadParity { .. })) {
        return Err(RecipeError::BadParity { index: *index });
    }
    if !report.is_valid() {
        return Err(RecipeError::Invalid(report));
    }
    Ok(())
}

/// Parameter data of `θ_{-α}(π)` for large `α`, valid from the returned `alpha0` up.
pub fn high_lift(m: &PacketMember, tower: TowerChoice) -> Result<(TargetMember, i64), RecipeError> {
    require_valid(m)?;
    let source = if !m.context.is_symplectic() && tower == TowerChoice::Minus { m.det_twist()? } else { m.clone() };
    let mut blocks: Vec<BlockData> = source
        .blocks
        .iter()
        .map(|bd| {
            let eta = if bd.block.rho.label == LineLabel::ChiV { bd.eta.flip() } else { bd.eta };
            BlockData::raw(bd.block.with_rho(bd.block.rho.twisted()), eta, bd.t).canonical()
        })
        .collect();
    let alpha0 = match same_line_max_a(&blocks, &CuspidalLine::chi_w()) {
        None => 1,
        Some(top) => {
            let above = top.doubled() + 2;
            if above % 2 == 0 { above + 1 } else { above }
        }
    };
    let lifted: Sign = blocks.iter().map(BlockData::epsilon_factor).product();
    let eta = if m.context.is_symplectic() {
        match tower {
            TowerChoice::Plus => Sign::Plus,
            TowerChoice::Minus => Sign::Minus,
        }
    } else {
        // The symplectic target needs the full product to be +.
        lifted
    };
    let added = BlockData::new(added_block(alpha0)?, eta, 0)?;
    blocks.push(added);
    let product = lifted * eta;
    let member = PacketMember::new(target_context(&m.context, alpha0, product)?, blocks);
    let added = member.blocks.len() - 1;
    Ok((TargetMember { member, added, alpha: alpha0 }, alpha0))
}

/// Undo [`high_lift`]: drop the top `(chi_W, 1, α)` block and restore the source data.
///
/// For an orthogonal target whose restored signs fail the sign condition, the preimage
/// is taken from the det-twisted member instead.
pub fn reverse_high_lift(m: &PacketMember) -> Result<PacketMember, RecipeError> {
    let (top, rest) = m.blocks.split_last().ok_or(RecipeError::TopBlockNotRemovable)?;
    let b = &top.block;
    let chi_w = CuspidalLine::chi_w();
    if b.rho != chi_w || b.a() != 1 || b.b() % 2 == 0 {
        return Err(RecipeError::TopBlockNotRemovable);
    }
    let alpha = i64::from(b.b());
    let x = HalfInt::from_int((alpha - 1) / 2);
    if same_line_max_a(rest, &chi_w).is_some_and(|a| a >= x) {
        return Err(RecipeError::TopBlockNotRemovable);
    }
    let restore = |blocks: &[BlockData]| -> Vec<BlockData> {
        blocks
            .iter()
            .map(|bd| {
                let eta = if bd.block.rho.label == LineLabel::ChiW { bd.eta.flip() } else { bd.eta };
                BlockData::raw(bd.block.with_rho(bd.block.rho.twisted()), eta, bd.t).canonical()
            })
            .collect()
    };
    let n = i64::from(m.context.n);
    if m.context.is_symplectic() {
        let blocks = restore(rest);
        let hasse = blocks.iter().map(BlockData::epsilon_factor).product();
        let n = u32::try_from(n + 1 - alpha).map_err(|_| RecipeError::TopBlockNotRemovable)?;
        Ok(PacketMember::new(GroupContext::orthogonal(n, Sign::Plus, hasse)?, blocks))
    } else {
        let mut blocks = restore(rest);
        if blocks.iter().map(BlockData::epsilon_factor).product::<Sign>() != Sign::Plus {
            let twisted = m.det_twist()?;
            blocks = restore(&twisted.blocks[..rest.len()]);
        }
        let n = u32::try_from(n - 1 - alpha).map_err(|_| RecipeError::TopBlockNotRemovable)?;
        Ok(PacketMember::new(GroupContext::symplectic(n)?, blocks))
    }
}

/// Swap block `big_index` with the singleton block `(x, x, -)` right after it.
pub fn change_order_singleton(m: &PacketMember, big_index: usize) -> Result<PacketMember, RecipeError> {
    let small_index = big_index + 1;
    let (Some(big), Some(small)) = (m.blocks.get(big_index), m.blocks.get(small_index)) else {
        return Err(RecipeError::NotAdjacent(big_index, small_index));
    };
    let s = &small.block;
    if s.a() != 1 || s.rho != big.block.rho || s.big_a() != s.big_b() {
        return Err(RecipeError::NotAdjacent(big_index, small_index));
    }
    let x = s.big_a();
    let (lo, hi) = (big.block.big_b(), big.block.big_a());
    if x < lo || x > hi {
        return Err(RecipeError::SingletonOutsideInterval { x, lo, hi });
    }
    let width = big.block.width();
    let small_eta = Sign::pow_neg_one(width) * small.eta;
    let (eta, t) = match big.block.zeta() {
        Sign::Plus => (big.eta.flip(), big.t),
        Sign::Minus => {
            let t_max = (big.block.min_ab() / 2) as u32;
            if big.eta == small_eta {
                if big.t < t_max {
                    (big.eta.flip(), big.t + 1)
                } else if width % 2 == 0 {
                    (big.eta, big.t)
                } else {
                    (big.eta, big.t - 1)
                }
            } else if big.t == 0 {
                return Err(RecipeError::OrderChangeUndefined);
            } else {
                (big.eta.flip(), big.t - 1)
            }
        }
    };
    let small_eta = match big.block.zeta() {
        Sign::Plus => small_eta.flip(),
        Sign::Minus => small_eta,
    };
    let mut blocks = m.blocks.clone();
    blocks[big_index] = BlockData::raw(s.clone(), small_eta, small.t).canonical();
    blocks[small_index] = BlockData::raw(big.block.clone(), eta, t).canonical();
    let out = PacketMember::new(m.context, blocks);
    assert_eq!(out.sign_product(), m.sign_product(), "order change moved the sign product");
    Ok(out)
}

/// Which rule produced a level of the descent.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Starting point: the high lift itself.
    HighLift,
    /// No same-line block below the added one.
    NoInteraction,
    /// The added block passed a block starting at its level.
    Reorder,
    /// No block near the added one.
    EmptySpace,
    /// The added block sits strictly inside a block.
    InsideBlock,
    /// Right above a `ζ = -1`, `t = 0` block with incompatible signs.
    AdjacentVanish,
    /// Right above a block, signs compatible.
    AdjacentSurvive,
    /// Decided by a Jacquet module computation on a supplied standard module.
    JacquetFallback,
    /// An earlier level vanished.
    BelowZero,
    /// Blocks too close together for the local rules.
    Unresolved,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::HighLift => "high-lift",
            Rule::NoInteraction => "no-interaction",
            Rule::Reorder => "reorder",
            Rule::EmptySpace => "empty-space",
            Rule::InsideBlock => "inside-block",
            Rule::AdjacentVanish => "adjacent-vanish",
            Rule::AdjacentSurvive => "adjacent-survive",
            Rule::JacquetFallback => "jacquet-fallback",
            Rule::BelowZero => "below-zero",
            Rule::Unresolved => "unresolved",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StepOutcome {
    Survive(TargetMember),
    Zero,
    NeedsGeneralAlgorithm(String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Step {
    pub outcome: StepOutcome,
    pub rule: Rule,
    /// The block the rule looked at.
    pub block: Option<usize>,
}

impl Step {
    fn new(outcome: StepOutcome, rule: Rule, block: Option<usize>) -> Self {
        Step { outcome, rule, block }
    }
}

fn is_separated(blocks: &[BlockData], line: &CuspidalLine, added: usize, i: usize) -> bool {
    let (lo, hi) = (blocks[i].block.big_b(), blocks[i].block.big_a());
    blocks.iter().enumerate().all(|(k, bd)| {
        if k == i || k == added || &bd.block.rho != line {
            return true;
        }
        if k < i {
            bd.block.big_a() + 1 < lo
        } else {
            bd.block.big_b() > hi + 1
        }
    })
}

/// Pass every hit block starting at the added block's level, nearest first, then lower
/// the added block by two.
fn advance(tm: &TargetMember, starts: &[usize], rule: Rule) -> Step {
    let mut member = tm.member.clone();
    let mut added = tm.added;
    let mut starts = starts.to_vec();
    starts.sort_unstable_by(|a, b| b.cmp(a));
    for j in starts {
        if j + 1 != added {
            return Step::new(StepOutcome::NeedsGeneralAlgorithm(format!("block #{j} is not next to the added block")), Rule::Unresolved, Some(j));
        }
        match change_order_singleton(&member, j) {
            Ok(next) => member = next,
            Err(e) => return Step::new(StepOutcome::NeedsGeneralAlgorithm(e.to_string()), Rule::Unresolved, Some(j)),
        }
        added = j;
    }
    let before = member.sign_product();
    let next = TargetMember { member, added, alpha: tm.alpha }.at(tm.alpha - 2).expect("level above 1");
    assert_eq!(next.member.sign_product(), before, "lowering the added block moved the sign product");
    Step::new(StepOutcome::Survive(next), rule, None)
}

/// From the member at level `α` to the one at `α - 2`.
pub fn recipe_step(tm: &TargetMember, fallback: Option<&StandardModule>) -> Step {
    assert!(tm.alpha >= 3, "no level below 1");
    let blocks = &tm.member.blocks;
    let x = HalfInt::from_int((tm.alpha - 1) / 2);
    let line = blocks[tm.added].block.rho.clone();
    let below: Vec<usize> = (0..tm.added).filter(|&i| blocks[i].block.rho == line).collect();
    if below.is_empty() {
        return advance(tm, &[], Rule::NoInteraction);
    }
    let hits: Vec<usize> = below
        .iter()
        .copied()
        .filter(|&i| blocks[i].block.big_b() <= x && x <= blocks[i].block.big_a() + 1)
        .collect();
    let starts: Vec<usize> = hits.iter().copied().filter(|&i| blocks[i].block.big_b() == x).collect();
    if hits.is_empty() {
        return advance(tm, &[], Rule::EmptySpace);
    }
    let fires = |i: usize| x == blocks[i].block.big_b() || x == blocks[i].block.big_a() + 1;
    if let Some(&crowded) = hits.iter().find(|&&i| fires(i) && !is_separated(blocks, &line, tm.added, i)) {
        let verdict = fallback.map(|std| jac_neg_nonzero(std, x));
        return match verdict {
            Some(JacVerdict::Zero) => Step::new(StepOutcome::Zero, Rule::JacquetFallback, Some(crowded)),
            Some(JacVerdict::Nonzero) => {
                let mut step = advance(tm, &starts, Rule::JacquetFallback);
                step.block = Some(crowded);
                step
            }
            Some(JacVerdict::Unsupported) | None => Step::new(
                StepOutcome::NeedsGeneralAlgorithm(format!("block #{crowded} is not separated from its neighbours")),
                Rule::Unresolved,
                Some(crowded),
            ),
        };
    }
    let j = hits[0];
    let bj = &blocks[j];
    let mut step = if x == bj.block.big_a() + 1 {
        let eta_added = blocks[tm.added].eta;
        let vanish = bj.block.a() < bj.block.b()
            && bj.t == 0
            && eta_added != Sign::pow_neg_one(bj.block.width()) * bj.eta;
        if vanish {
            Step::new(StepOutcome::Zero, Rule::AdjacentVanish, None)
        } else {
            advance(tm, &[], Rule::AdjacentSurvive)
        }
    } else if bj.block.big_b() < x {
        advance(tm, &[], Rule::InsideBlock)
    } else {
        advance(tm, &starts, Rule::Reorder)
    };
    step.block.get_or_insert(j);
    step
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", content = "member", rename_all = "snake_case")]
pub enum LevelOutcome {
    Member(PacketMember),
    Zero,
    NeedsGeneralAlgorithm,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Level {
    pub alpha: i64,
    pub outcome: LevelOutcome,
    pub rule: Rule,
    /// Position of the added block, for members.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub added: Option<usize>,
    /// The block the rule looked at, indexed in the previous level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DescentReport {
    pub tower: TowerChoice,
    pub alpha0: i64,
    /// Decreasing levels from `alpha0` down to 1.
    pub levels: Vec<Level>,
    /// Least nonzero level, when every level was decided.
    pub d: Option<i64>,
    pub top: TargetMember,
}

impl DescentReport {
    pub fn level(&self, alpha: i64) -> Option<&Level> {
        self.levels.iter().find(|l| l.alpha == alpha)
    }

    /// The member at `alpha`, extrapolating above `alpha0`.
    pub fn member_at(&self, alpha: i64) -> Option<PacketMember> {
        if alpha > self.alpha0 {
            return self.top.at(alpha).ok().map(|tm| tm.member);
        }
        match &self.level(alpha)?.outcome {
            LevelOutcome::Member(m) => Some(m.clone()),
            _ => None,
        }
    }

    pub fn unresolved(&self) -> bool {
        self.d.is_none()
    }

    /// Every level survives the product check and the nonzero levels form an upward-closed set.
    pub fn is_monotone(&self) -> bool {
        let mut seen_gap = false;
        for level in &self.levels {
            match level.outcome {
                LevelOutcome::Member(_) if seen_gap => return false,
                LevelOutcome::Member(_) => {}
                _ => seen_gap = true,
            }
        }
        true
    }

    pub fn products_preserved(&self) -> bool {
        let want = self.top.member.sign_product();
        self.levels.iter().all(|l| match &l.outcome {
            LevelOutcome::Member(m) => m.sign_product() == want,
            _ => true,
        })
    }
}

/// Runs the high lift and the descent on one tower.
pub fn d_index(m: &PacketMember, tower: TowerChoice, fallback: &FallbackTable) -> Result<DescentReport, RecipeError> {
    let (top, alpha0) = high_lift(m, tower)?;
    let mut levels = vec![Level {
        alpha: alpha0,
        outcome: LevelOutcome::Member(top.member.clone()),
        rule: Rule::HighLift,
        added: Some(top.added),
        block: None,
        note: None,
    }];
    let mut current = Some(top.clone());
    let mut stuck = false;
    for alpha in (1..=alpha0 - 2).rev().step_by(2) {
        let level = match current.take() {
            Some(tm) => {
                let step = recipe_step(&tm, fallback.get(&(alpha + 2)));
                match step.outcome {
                    StepOutcome::Survive(next) => {
                        let level = Level {
                            alpha,
                            outcome: LevelOutcome::Member(next.member.clone()),
                            rule: step.rule,
                            added: Some(next.added),
                            block: step.block,
                            note: None,
                        };
                        current = Some(next);
                        level
                    }
                    StepOutcome::Zero => Level {
                        alpha,
                        outcome: LevelOutcome::Zero,
                        rule: step.rule,
                        added: None,
                        block: step.block,
                        note: None,
                    },
                    StepOutcome::NeedsGeneralAlgorithm(why) => {
                        stuck = true;
                        Level {
                            alpha,
                            outcome: LevelOutcome::NeedsGeneralAlgorithm,
                            rule: step.rule,
                            added: None,
                            block: step.block,
                            note: Some(why),
                        }
                    }
                }
            }
            None if stuck => Level {
                alpha,
                outcome: LevelOutcome::NeedsGeneralAlgorithm,
                rule: Rule::Unresolved,
                added: None,
                block: None,
                note: None,
            },
            None => Level { alpha, outcome: LevelOutcome::Zero, rule: Rule::BelowZero, added: None, block: None, note: None },
        };
        levels.push(level);
    }
    let d = if stuck {
        None
    } else {
        levels.iter().filter(|l| matches!(l.outcome, LevelOutcome::Member(_))).map(|l| l.alpha).min()
    };
    let report = DescentReport { tower, alpha0, levels, d, top };
    assert!(report.products_preserved(), "a recipe step moved the sign product");
    Ok(report)
}

/// `{odd α >= d}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AdamsRange {
    pub from: i64,
}

impl AdamsRange {
    pub fn contains(&self, alpha: i64) -> bool {
        alpha % 2 != 0 && alpha >= self.from
    }
}

impl fmt::Display for AdamsRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}, ...}}", self.from, self.from + 2)
    }
}

pub fn adams_set(m: &PacketMember, tower: TowerChoice, fallback: &FallbackTable) -> Result<AdamsRange, RecipeError> {
    let report = d_index(m, tower, fallback)?;
    report.d.map(|from| AdamsRange { from }).ok_or(RecipeError::UnresolvedD(tower))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TowerRoles {
    pub up: TowerChoice,
    pub down: TowerChoice,
    pub d_up: i64,
    pub d_down: i64,
    /// First-occurrence dimensions on the two towers.
    pub m_up: i64,
    pub m_down: i64,
    /// Both towers start at level 1, so the labels carry no information.
    pub ambiguous: bool,
}

/// `n + ε` with `ε = +1` for symplectic and `-1` for orthogonal sources.
fn n_plus_eps(context: &GroupContext) -> i64 {
    i64::from(context.n) + if context.is_symplectic() { 1 } else { -1 }
}

pub fn roles_from(context: &GroupContext, d_plus: i64, d_minus: i64) -> Result<TowerRoles, RecipeError> {
    if d_plus == d_minus && d_plus != 1 {
        return Err(RecipeError::EqualTowers(d_plus));
    }
    let (up, d_up, d_down) = if d_plus >= d_minus {
        (TowerChoice::Plus, d_plus, d_minus)
    } else {
        (TowerChoice::Minus, d_minus, d_plus)
    };
    let m_up = n_plus_eps(context) + d_up;
    let m_down = 2 * n_plus_eps(context) + 2 - m_up;
    Ok(TowerRoles { up, down: up.other(), d_up, d_down, m_up, m_down, ambiguous: d_up == 1 })
}

pub fn tower_roles(m: &PacketMember, fallback: &FallbackTable) -> Result<TowerRoles, RecipeError> {
    let d = |tower| d_index(m, tower, fallback).and_then(|r| r.d.ok_or(RecipeError::UnresolvedD(tower)));
    roles_from(&m.context, d(TowerChoice::Plus)?, d(TowerChoice::Minus)?)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "status", content = "member", rename_all = "snake_case")]
pub enum LiftStatus {
    InPacket(PacketMember),
    ZeroLift,
    NotInAAPacket,
}

pub fn lift_parameter(
    m: &PacketMember,
    alpha: i64,
    tower: TowerChoice,
    fallback: &FallbackTable,
) -> Result<LiftStatus, RecipeError> {
    check_level(alpha)?;
    let report = d_index(m, tower, fallback)?;
    if let Some(d) = report.d {
        if alpha >= d {
            return Ok(LiftStatus::InPacket(report.member_at(alpha).expect("levels above d are members")));
        }
    }
    let roles = tower_roles(m, fallback)?;
    Ok(if tower == roles.up { LiftStatus::ZeroLift } else { LiftStatus::NotInAAPacket })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bd(a: u32, b: u32, eta: Sign, t: u32) -> BlockData {
        BlockData::new(JordanBlock::new(CuspidalLine::chi_w(), a, b).unwrap(), eta, t).unwrap()
    }

    fn member(blocks: Vec<BlockData>) -> PacketMember {
        PacketMember::new(GroupContext::symplectic(0).unwrap(), blocks)
    }

    use Sign::{Minus, Plus};

    #[test]
    fn order_change_with_plus_block() {
        let m = member(vec![bd(7, 1, Minus, 0), bd(1, 7, Plus, 0)]);
        let out = change_order_singleton(&m, 0).unwrap();
        assert_eq!(out.blocks, vec![bd(1, 7, Minus, 0), bd(7, 1, Plus, 0)]);
    }

    #[test]
    fn order_change_equal_signs_at_max_t() {
        let m = member(vec![bd(1, 7, Minus, 0), bd(1, 7, Minus, 0)]);
        let out = change_order_singleton(&m, 0).unwrap();
        assert_eq!(out.blocks, vec![bd(1, 7, Minus, 0), bd(1, 7, Minus, 0)]);
    }

    #[test]
    fn order_change_unequal_signs_lowers_t() {
        // (A, B) = (2, 1) with t = 1; the singleton at 1 has the opposite relative sign.
        let m = member(vec![bd(2, 4, Plus, 1), bd(1, 3, Plus, 0)]);
        let out = change_order_singleton(&m, 0).unwrap();
        assert_eq!(out.blocks, vec![bd(1, 3, Minus, 0), bd(2, 4, Minus, 0)]);
    }

    #[test]
    fn order_change_needs_singleton_inside() {
        let m = member(vec![bd(7, 1, Minus, 0), bd(1, 3, Plus, 0)]);
        assert!(matches!(
            change_order_singleton(&m, 0),
            Err(RecipeError::SingletonOutsideInterval { .. })
        ));
        assert_eq!(change_order_singleton(&m, 1), Err(RecipeError::NotAdjacent(1, 2)));
    }

    #[test]
    fn tower_arithmetic() {
        let sp6 = GroupContext::symplectic(6).unwrap();
        let roles = roles_from(&sp6, 9, 1).unwrap();
        assert_eq!((roles.up, roles.m_up, roles.m_down), (TowerChoice::Plus, 16, 0));
        assert!(roles_from(&sp6, 1, 1).unwrap().ambiguous);
        assert_eq!(roles_from(&sp6, 5, 5), Err(RecipeError::EqualTowers(5)));
    }
}
