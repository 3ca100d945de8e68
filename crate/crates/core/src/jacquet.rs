//! Symbolic Jacquet modules: co-multiplication of segments, dominating shifts,
//! and the vanishing criteria for `Jac_x`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chains::StandardModule;
use crate::half_int::HalfInt;
use crate::param::{BlockData, CuspidalLine, JordanBlock, PacketMember, Sign};
use crate::segment::{GeneralizedSegment, Segment};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JacquetError {
    #[error("ζ({a},{b}) is not a segment: b - a must be an integer >= -1")]
    MalformedSegment { a: HalfInt, b: HalfInt },
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum FactorKind {
    Zeta,
    Delta,
}

/// `ζ(x,y)` or `δ([x,y])`, never empty. Singletons are stored as `Zeta`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct GlFactor {
    pub kind: FactorKind,
    pub x: HalfInt,
    pub y: HalfInt,
}

impl fmt::Display for GlFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x == self.y {
            return write!(f, "ν^{}", self.x);
        }
        match self.kind {
            FactorKind::Zeta => write!(f, "ζ({},{})", self.x, self.y),
            FactorKind::Delta => write!(f, "δ([{},{}])", self.x, self.y),
        }
    }
}

/// Formal product of GL factors in the Grothendieck group, so factors commute.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
pub struct GlObject(Vec<GlFactor>);

impl GlObject {
    pub fn unit() -> Self {
        GlObject(Vec::new())
    }

    pub fn factor(kind: FactorKind, x: HalfInt, y: HalfInt) -> Self {
        let mut obj = GlObject::unit();
        obj.push(kind, x, y);
        obj
    }

    pub fn zeta(x: HalfInt, y: HalfInt) -> Self {
        GlObject::factor(FactorKind::Zeta, x, y)
    }

    pub fn delta(x: HalfInt, y: HalfInt) -> Self {
        GlObject::factor(FactorKind::Delta, x, y)
    }

    fn push(&mut self, kind: FactorKind, x: HalfInt, y: HalfInt) {
        if y < x {
            return;
        }
        let kind = if x == y { FactorKind::Zeta } else { kind };
        let at = self.0.partition_point(|f| *f < GlFactor { kind, x, y });
        self.0.insert(at, GlFactor { kind, x, y });
    }

    pub fn times(&self, other: &GlObject) -> GlObject {
        let mut out = self.clone();
        for f in &other.0 {
            out.push(f.kind, f.x, f.y);
        }
        out
    }

    pub fn factors(&self) -> &[GlFactor] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    /// Single exponent `ν^z`.
    pub fn is_nu(&self, z: HalfInt) -> bool {
        matches!(self.0.as_slice(), [f] if f.x == z && f.y == z)
    }
}

impl fmt::Display for GlObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, factor) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "×")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

/// Multiset of tensors `obj_1 ⊗ ... ⊗ obj_k` with positive multiplicities.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct FormalSum {
    terms: BTreeMap<Vec<GlObject>, u32>,
}

impl FormalSum {
    pub fn new() -> Self {
        FormalSum::default()
    }

    pub fn add(&mut self, tensor: Vec<GlObject>, mult: u32) {
        if mult > 0 {
            *self.terms.entry(tensor).or_insert(0) += mult;
        }
    }

    pub fn add_pair(&mut self, left: GlObject, right: GlObject) {
        self.add(vec![left, right], 1);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[GlObject], u32)> {
        self.terms.iter().map(|(t, m)| (t.as_slice(), *m))
    }

    /// Sum of multiplicities.
    pub fn total(&self) -> u32 {
        self.terms.values().sum()
    }

    pub fn multiplicity(&self, tensor: &[GlObject]) -> u32 {
        self.terms.get(tensor).copied().unwrap_or(0)
    }

    /// Slotwise product of two sums of equal arity.
    pub fn times(&self, other: &FormalSum) -> FormalSum {
        let mut out = FormalSum::new();
        for (lt, lm) in &self.terms {
            for (rt, rm) in &other.terms {
                let tensor = lt.iter().zip(rt).map(|(a, b)| a.times(b)).collect();
                out.add(tensor, lm * rm);
            }
        }
        out
    }

    /// Apply `m*` to slot `slot` of every term, raising the arity by one.
    pub fn expand_slot(&self, slot: usize) -> FormalSum {
        let mut out = FormalSum::new();
        for (tensor, mult) in &self.terms {
            for (pieces, inner) in &mstar_object(&tensor[slot]).terms {
                let mut t = tensor[..slot].to_vec();
                t.extend(pieces.iter().cloned());
                t.extend(tensor[slot + 1..].iter().cloned());
                out.add(t, mult * inner);
            }
        }
        out
    }

    /// Right-hand tensor factors that occur.
    pub fn right_factors(&self) -> Vec<&GlObject> {
        self.terms.keys().filter_map(|t| t.last()).collect()
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (tensor, mult)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *mult > 1 {
                write!(f, "{mult}·")?;
            }
            for (k, obj) in tensor.iter().enumerate() {
                if k > 0 {
                    write!(f, "⊗")?;
                }
                write!(f, "{obj}")?;
            }
        }
        Ok(())
    }
}

fn check_segment(a: HalfInt, b: HalfInt) -> Result<(), JacquetError> {
    if !a.same_class(b) || b < a - 1 {
        return Err(JacquetError::MalformedSegment { a, b });
    }
    Ok(())
}

/// Steps from `from` to `to` inclusive, in units of one.
fn span(from: HalfInt, to: HalfInt) -> impl Iterator<Item = HalfInt> {
    let n = ((to - from).doubled() / 2).max(-1);
    (0..=n).map(move |k| from + k)
}

/// `M*(ζ(a,b)) = Σ_{i=a-1}^{b} Σ_{j=i}^{b} ζ(-b,-(j+1)) × ζ(a,i) ⊗ ζ(i+1,j)`.
pub fn mstar_zeta(a: HalfInt, b: HalfInt) -> Result<FormalSum, JacquetError> {
    check_segment(a, b)?;
    let mut out = FormalSum::new();
    for i in span(a - 1, b) {
        for j in span(i, b) {
            let left = GlObject::zeta(-b, -(j + 1)).times(&GlObject::zeta(a, i));
            out.add_pair(left, GlObject::zeta(i + 1, j));
        }
    }
    Ok(out)
}

/// Number of terms the double sum in [`mstar_zeta`] produces.
pub fn mstar_zeta_term_count(a: HalfInt, b: HalfInt) -> u32 {
    span(a - 1, b).map(|i| ((b - i).doubled() / 2 + 1) as u32).sum()
}

/// `m*(δ([x,y])) = Σ_{k=x-1}^{y} δ([k+1,y]) ⊗ δ([x,k])`.
pub fn mstar_delta(seg: &Segment) -> FormalSum {
    mstar_factor(FactorKind::Delta, seg.x, seg.y)
}

/// `m*(ζ(x,y)) = Σ_{k=x-1}^{y} ζ(x,k) ⊗ ζ(k+1,y)`.
pub fn mstar_zeta_segment(x: HalfInt, y: HalfInt) -> FormalSum {
    mstar_factor(FactorKind::Zeta, x, y)
}

fn mstar_factor(kind: FactorKind, x: HalfInt, y: HalfInt) -> FormalSum {
    let mut out = FormalSum::new();
    if y < x {
        out.add_pair(GlObject::unit(), GlObject::unit());
        return out;
    }
    for k in span(x - 1, y) {
        match kind {
            FactorKind::Delta => out.add_pair(GlObject::delta(k + 1, y), GlObject::delta(x, k)),
            FactorKind::Zeta => out.add_pair(GlObject::zeta(x, k), GlObject::zeta(k + 1, y)),
        }
    }
    out
}

/// `m*` of a product, by multiplicativity.
pub fn mstar_object(obj: &GlObject) -> FormalSum {
    let mut out = FormalSum::new();
    out.add_pair(GlObject::unit(), GlObject::unit());
    for f in obj.factors() {
        out = out.times(&mstar_factor(f.kind, f.x, f.y));
    }
    out
}

/// The generalized segment with rows `ζ(B+s) … ζ(A+s)` for `s = T, …, 1`.
pub fn build_l(block: &JordanBlock, shift: u32) -> GeneralizedSegment {
    let zeta = block.zeta();
    let entries = (1..=i64::from(shift))
        .rev()
        .map(|s| {
            span(block.big_b() + s, block.big_a() + s)
                .map(|v| if zeta == Sign::Plus { v } else { -v })
                .collect()
        })
        .collect();
    GeneralizedSegment::new(block.rho.clone(), entries, zeta).expect("shifted block is rectangular")
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Dominated {
    pub blocks: Vec<BlockData>,
    pub shifts: Vec<u32>,
    pub rho: CuspidalLine,
}

/// Shift blocks on `rho` up until their segments `[B,A]` are pairwise disjoint.
///
/// Blocks are placed in list order. A block keeps `T = 0` if it already misses every
/// placed segment; otherwise it moves just above the highest placed segment.
pub fn dominate(m: &PacketMember, rho: &CuspidalLine) -> Dominated {
    let mut placed: Vec<(HalfInt, HalfInt)> = Vec::new();
    let mut blocks = Vec::with_capacity(m.blocks.len());
    let mut shifts = Vec::with_capacity(m.blocks.len());
    for bd in &m.blocks {
        let block = &bd.block;
        if &block.rho != rho {
            blocks.push(bd.clone());
            shifts.push(0);
            continue;
        }
        let (lo, hi) = (block.big_b(), block.big_a());
        let clear = placed.iter().all(|&(pl, ph)| hi < pl || ph < lo);
        let shift = if clear {
            0
        } else {
            let top = placed.iter().map(|p| p.1).max().expect("a placed segment overlaps");
            ((top - lo).doubled() / 2 + 1).max(0) as u32
        };
        let moved = JordanBlock::from_segment(
            rho.clone(),
            hi + i64::from(shift),
            lo + i64::from(shift),
            block.zeta(),
        )
        .expect("shifting keeps a block");
        placed.push((lo + i64::from(shift), hi + i64::from(shift)));
        blocks.push(BlockData::raw(moved, bd.eta, bd.t));
        shifts.push(shift);
    }
    Dominated { blocks, shifts, rho: rho.clone() }
}

/// Same-line segments `[B,A]` pairwise disjoint.
pub fn is_ddr(blocks: &[BlockData], rho: &CuspidalLine) -> bool {
    let segs: Vec<_> = blocks
        .iter()
        .filter(|bd| &bd.block.rho == rho)
        .map(|bd| (bd.block.big_b(), bd.block.big_a()))
        .collect();
    segs.iter().enumerate().all(|(i, a)| segs[i + 1..].iter().all(|b| a.1 < b.0 || b.1 < a.0))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct JacStep {
    pub block: usize,
    pub exponent: HalfInt,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct JacquetPlan {
    pub steps: Vec<JacStep>,
}

impl JacquetPlan {
    pub fn exponents(&self) -> Vec<HalfInt> {
        self.steps.iter().map(|s| s.exponent).collect()
    }
}

/// `Jac_x` steps that bring the shifted blocks back, lowest block first; within a block
/// the outermost row `ζ(B+T) … ζ(A+T)` goes first.
pub fn jacquet_plan(dominated: &Dominated) -> JacquetPlan {
    let mut steps = Vec::new();
    for (index, (bd, &shift)) in dominated.blocks.iter().zip(&dominated.shifts).enumerate() {
        if shift == 0 {
            continue;
        }
        let shift = i64::from(shift);
        let zeta = bd.block.zeta();
        let (lo, hi) = (bd.block.big_b() - shift, bd.block.big_a() - shift);
        for s in (1..=shift).rev() {
            for v in span(lo + s, hi + s) {
                let exponent = if zeta == Sign::Plus { v } else { -v };
                steps.push(JacStep { block: index, exponent });
            }
        }
    }
    JacquetPlan { steps }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum ArthurJacVerdict {
    Zero,
    PossiblyNonzero,
}

/// `Jac_x` kills the member when `x` is not `ζ·B` for any block on the line.
pub fn jac_vanishes_arthur(m: &PacketMember, rho: &CuspidalLine, x: HalfInt) -> ArthurJacVerdict {
    let hit = m.blocks.iter().any(|bd| {
        let b = &bd.block;
        &b.rho == rho
            && match b.zeta() {
                Sign::Plus => b.big_b() == x,
                Sign::Minus => -b.big_b() == x,
            }
    });
    if hit {
        ArthurJacVerdict::PossiblyNonzero
    } else {
        ArthurJacVerdict::Zero
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum LadderShape {
    Unlinked,
    SingleLadder(GeneralizedSegment),
    Unsupported,
}

/// Segments with `x >= z`, sorted by `x`, and the shape of their Langlands quotient.
pub fn sigma_above(std: &StandardModule, z: HalfInt) -> (Vec<Segment>, LadderShape) {
    let mut upper: Vec<Segment> = std.segments.iter().filter(|s| s.x >= z).cloned().collect();
    upper.sort();
    let shape = classify(&upper);
    (upper, shape)
}

pub fn classify(segments: &[Segment]) -> LadderShape {
    let linked = |a: &Segment, b: &Segment| a.rho == b.rho && a.is_linked(b).unwrap_or(false);
    let any_linked = segments
        .iter()
        .enumerate()
        .any(|(i, a)| segments[i + 1..].iter().any(|b| linked(a, b)));
    if !any_linked {
        return LadderShape::Unlinked;
    }
    ladder_of(segments).map_or(LadderShape::Unsupported, LadderShape::SingleLadder)
}

/// Segments `[c+i, d+i]`, `i = 0..m`, form the generalized segment with corner `d`.
fn ladder_of(segments: &[Segment]) -> Option<GeneralizedSegment> {
    let first = segments.first()?;
    let width = first.len();
    let consecutive = segments.iter().enumerate().all(|(i, s)| {
        s.rho == first.rho && s.len() == width && s.x == first.x + i as i64
    });
    consecutive.then(|| {
        GeneralizedSegment::from_corner(first.rho.clone(), first.y, segments.len(), width as usize)
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum JacVerdict {
    Nonzero,
    Zero,
    Unsupported,
}

impl fmt::Display for JacVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            JacVerdict::Nonzero => "Nonzero",
            JacVerdict::Zero => "Zero",
            JacVerdict::Unsupported => "Unsupported",
        };
        write!(f, "{s}")
    }
}

/// Decides `Jac_{-z}(π) ≠ 0` from the standard module of `π`: it holds exactly when
/// `m*` of the Langlands quotient built from segments with `x >= z` has a term `ξ ⊗ ν^z`.
pub fn jac_neg_nonzero(std: &StandardModule, z: HalfInt) -> JacVerdict {
    let (upper, shape) = sigma_above(std, z);
    let lines = upper.iter().map(|s| &s.rho).collect::<std::collections::BTreeSet<_>>();
    if lines.len() > 1 {
        return JacVerdict::Unsupported;
    }
    let found = match shape {
        LadderShape::Unlinked => upper.iter().any(|s| s.x == z),
        // The right-hand factors of a ladder end at its bottom-right entry.
        LadderShape::SingleLadder(gs) => gs.bottom_right() == Some(z),
        LadderShape::Unsupported => return JacVerdict::Unsupported,
    };
    if found {
        JacVerdict::Nonzero
    } else {
        JacVerdict::Zero
    }
}

/// `ζ(x,y) ⊗ ξ` occurs in `m*` of the ladder iff `x` is the corner and `y` lies
/// in the first column.
pub fn kret_lapid_left(gs: &GeneralizedSegment, x: HalfInt, y: HalfInt) -> bool {
    gs.top_left() == Some(x) && gs.first_column().contains(&y)
}

/// `(l-1)/2` is absent from the first column.
pub fn condition_k(gs: &GeneralizedSegment, l: i64) -> bool {
    if gs.is_empty() {
        return true;
    }
    !gs.first_column().contains(&HalfInt::from_doubled(l - 1))
}
