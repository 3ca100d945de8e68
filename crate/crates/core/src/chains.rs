//! Standard modules and the chain rules that compute theta lifts on them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::half_int::HalfInt;
use crate::param::{CuspidalLine, GroupContext};
use crate::segment::Segment;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("missing tempered data: {0}")]
    MissingTemperedData(&'static str),
    #[error("alpha={alpha} must exceed l(pi)={l}")]
    AlphaNotAboveL { alpha: i64, l: i64 },
    #[error("beta={beta} is not large enough for this module")]
    BetaNotLarge { beta: i64 },
    #[error("level {0} must be a positive odd integer")]
    BadLevel(i64),
    #[error("segment {0} must be nonempty with x + y > 0")]
    BadSegment(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n: u32) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Odd => Parity::Even,
            Parity::Even => Parity::Odd,
        }
    }
}

/// What is known about a multiplicity `m_φ(S_d)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Multiplicity {
    Exact(u32),
    Parity(Parity),
    Unknown,
}

impl Multiplicity {
    pub fn parity(self) -> Option<Parity> {
        match self {
            Multiplicity::Exact(n) => Some(Parity::of(n)),
            Multiplicity::Parity(p) => Some(p),
            Multiplicity::Unknown => None,
        }
    }

    fn incremented(self) -> Multiplicity {
        match self {
            Multiplicity::Exact(n) => Multiplicity::Exact(n + 1),
            Multiplicity::Parity(p) => Multiplicity::Parity(p.flip()),
            Multiplicity::Unknown => Multiplicity::Unknown,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Exact(n) => write!(f, "{n}"),
            Multiplicity::Parity(Parity::Odd) => write!(f, "odd"),
            Multiplicity::Parity(Parity::Even) => write!(f, "even"),
            Multiplicity::Unknown => write!(f, "?"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LValue {
    Known(i64),
    AtLeast(i64),
    Unknown,
}

impl LValue {
    pub fn known(self) -> Option<i64> {
        match self {
            LValue::Known(l) => Some(l),
            _ => None,
        }
    }
}

impl fmt::Display for LValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LValue::Known(l) => write!(f, "{l}"),
            LValue::AtLeast(l) => write!(f, ">={l}"),
            LValue::Unknown => write!(f, "?"),
        }
    }
}

/// The part of the tempered representation the chain rules read.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct TemperedDescriptor {
    pub label: String,
    pub l_tau: LValue,
    pub m_s1: Multiplicity,
    /// Multiplicity of `S_{l_tau}`; ignored when `l_tau = 1`, where it is `m_s1`.
    pub m_sl: Multiplicity,
}

impl TemperedDescriptor {
    pub fn new(l_tau: LValue, m_s1: Multiplicity, m_sl: Multiplicity) -> Self {
        TemperedDescriptor { label: "τ".into(), l_tau, m_s1, m_sl }
    }

    pub fn known(l_tau: i64, m_s1: Multiplicity, m_sl: Multiplicity) -> Self {
        TemperedDescriptor::new(LValue::Known(l_tau), m_s1, m_sl)
    }

    pub fn unknown() -> Self {
        TemperedDescriptor::new(LValue::Unknown, Multiplicity::Unknown, Multiplicity::Unknown)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Parity of `m_φ(S_{l_tau})`.
    pub fn top_parity(&self) -> Option<Parity> {
        match self.l_tau {
            LValue::Known(1) => self.m_s1.parity(),
            _ => self.m_sl.parity(),
        }
    }

    /// Names of fields a downstream rule would have to guess.
    pub fn unknown_fields(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self.l_tau {
            LValue::Known(_) => {}
            LValue::AtLeast(l) => out.push(format!("l_tau (>= {l})")),
            LValue::Unknown => out.push("l_tau".into()),
        }
        if self.m_s1 == Multiplicity::Unknown {
            out.push("mS1".into());
        }
        if self.l_tau != LValue::Known(1) && self.m_sl == Multiplicity::Unknown {
            out.push("mSl".into());
        }
        out
    }
}

impl fmt::Display for TemperedDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [l_tau={}, mS1={}", self.label, self.l_tau, self.m_s1)?;
        if self.l_tau != LValue::Known(1) {
            write!(f, ", mSl={}", self.m_sl)?;
        }
        write!(f, "]")
    }
}

/// Langlands data: positive-exponent segments and a tempered part.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct StandardModule {
    pub segments: Vec<Segment>,
    pub tempered: TemperedDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<GroupContext>,
}

impl StandardModule {
    pub fn new(mut segments: Vec<Segment>, tempered: TemperedDescriptor) -> Result<Self, ChainError> {
        for s in &segments {
            if s.is_empty() || s.x + s.y <= HalfInt::ZERO {
                return Err(ChainError::BadSegment(s.to_string()));
            }
        }
        segments.sort();
        Ok(StandardModule { segments, tempered, context: None })
    }

    /// Integer segments on the trivial line.
    pub fn from_pairs(pairs: &[(i64, i64)], tempered: TemperedDescriptor) -> Result<Self, ChainError> {
        let segments = pairs.iter().map(|&(x, y)| Segment::ints(x, y)).collect();
        StandardModule::new(segments, tempered)
    }

    pub fn pairs(&self) -> Vec<(HalfInt, HalfInt)> {
        self.segments.iter().map(|s| (s.x, s.y)).collect()
    }

    pub fn count(&self, x: HalfInt, y: HalfInt) -> usize {
        self.segments.iter().filter(|s| s.x == x && s.y == y).count()
    }

    pub fn has_singleton(&self, x: HalfInt) -> bool {
        self.count(x, x) > 0
    }

    fn line(&self) -> CuspidalLine {
        self.segments.first().map_or_else(CuspidalLine::chi_v, |s| s.rho.clone())
    }

    fn insert(&mut self, seg: Segment) {
        let at = self.segments.partition_point(|s| *s < seg);
        self.segments.insert(at, seg);
    }

    fn remove(&mut self, seg: &Segment) {
        let at = self.segments.iter().position(|s| s == seg).expect("segment present");
        self.segments.remove(at);
    }
}

impl fmt::Display for StandardModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.segments.is_empty() {
            write!(f, "∅")?;
        }
        for (i, s) in self.segments.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " × ")?;
            }
            if s.is_singleton() {
                write!(f, "ν^{}", s.x)?;
            } else {
                write!(f, "δ({},{})", s.x, s.y)?;
            }
        }
        write!(f, " ⋊ {}", self.tempered)
    }
}

/// Segments `[c_i, d_i]` with `d_{i+1} = d_i + 1` and `c_{i+1} > c_i`.
/// Empty segments `[d+1, d]` pad a chain that ran out of real segments.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Chain {
    pub segments: Vec<Segment>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn widths(&self) -> Vec<i64> {
        self.segments.iter().map(Segment::len).collect()
    }

    pub fn is_chain(&self) -> bool {
        self.segments.windows(2).all(|w| w[1].y == w[0].y + 1 && w[1].x > w[0].x)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.segments.iter().map(Segment::to_string).collect();
        write!(f, "{}", parts.join(", "))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Anchor {
    /// Fix the right end of the lowest segment.
    Start(HalfInt),
    /// Fix the right end of the highest segment.
    End(HalfInt),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum WidthPreference {
    Widest,
    Narrowest,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ChainConstraints {
    pub anchor: Anchor,
    /// Forbidden left end of the lowest segment (start anchors only).
    pub forbid_c1: Option<HalfInt>,
    pub widths: WidthPreference,
    pub max_len: Option<usize>,
}

impl ChainConstraints {
    pub fn starting_at(d1: HalfInt) -> Self {
        ChainConstraints { anchor: Anchor::Start(d1), forbid_c1: None, widths: WidthPreference::Widest, max_len: None }
    }
}

/// Every chain of the greatest attainable length (capped by `max_len`), best first:
/// width vectors compared from the lowest segment up, then left ends ascending.
pub fn find_chains(std: &StandardModule, constraints: &ChainConstraints) -> Vec<Chain> {
    let mut distinct = std.segments.clone();
    distinct.dedup();
    let cap = constraints.max_len.unwrap_or(usize::MAX);
    let mut found: Vec<Vec<Segment>> = Vec::new();
    let mut path = Vec::new();
    walk(&distinct, constraints, cap, &mut path, &mut found);
    let best = found.iter().map(Vec::len).max().unwrap_or(0);
    let mut chains: Vec<Chain> = found
        .into_iter()
        .filter(|p| p.len() == best && best > 0)
        .map(|mut p| {
            if matches!(constraints.anchor, Anchor::End(_)) {
                p.reverse();
            }
            Chain { segments: p }
        })
        .collect();
    chains.sort_by(|a, b| {
        let by_width = match constraints.widths {
            WidthPreference::Widest => b.widths().cmp(&a.widths()),
            WidthPreference::Narrowest => a.widths().cmp(&b.widths()),
        };
        let lefts = |c: &Chain| c.segments.iter().map(|s| s.x).collect::<Vec<_>>();
        by_width.then_with(|| lefts(a).cmp(&lefts(b)))
    });
    chains.dedup();
    chains
}

fn walk(
    pool: &[Segment],
    constraints: &ChainConstraints,
    cap: usize,
    path: &mut Vec<Segment>,
    found: &mut Vec<Vec<Segment>>,
) {
    if path.len() == cap {
        found.push(path.clone());
        return;
    }
    let depth = path.len() as i64;
    let candidates: Vec<&Segment> = pool
        .iter()
        .filter(|s| match constraints.anchor {
            Anchor::Start(d1) => {
                s.y == d1 + depth
                    && match path.last() {
                        None => constraints.forbid_c1 != Some(s.x),
                        Some(prev) => s.x > prev.x,
                    }
            }
            Anchor::End(dt) => s.y == dt - depth && path.last().is_none_or(|next| s.x < next.x),
        })
        .collect();
    if candidates.is_empty() {
        found.push(path.clone());
        return;
    }
    for s in candidates {
        path.push(s.clone());
        walk(pool, constraints, cap, path, found);
        path.pop();
    }
}

fn half(n: i64) -> HalfInt {
    HalfInt::from_doubled(n)
}

fn known_l(std: &StandardModule) -> Result<i64, ChainError> {
    std.tempered.l_tau.known().ok_or(ChainError::MissingTemperedData("l_tau"))
}

fn check_level(alpha: i64) -> Result<(), ChainError> {
    if alpha <= 0 || alpha % 2 == 0 {
        return Err(ChainError::BadLevel(alpha));
    }
    Ok(())
}

fn longest_from(std: &StandardModule, l_tau: i64, forbid: bool) -> usize {
    let mut c = ChainConstraints::starting_at(half(l_tau + 1));
    if forbid {
        c.forbid_c1 = Some(half(1 - l_tau));
    }
    find_chains(std, &c).first().map_or(0, Chain::len)
}

/// `l(π) = l(τ) + 2t`, `t` the longest chain whose lowest segment ends at `(l(τ)+1)/2`.
pub fn l_of_pi(std: &StandardModule) -> Result<i64, ChainError> {
    let l_tau = known_l(std)?;
    let t = if l_tau > 0 {
        match std.tempered.top_parity() {
            Some(Parity::Even) => longest_from(std, l_tau, true),
            Some(Parity::Odd) => longest_from(std, l_tau, false),
            None => {
                let (with, without) = (longest_from(std, l_tau, true), longest_from(std, l_tau, false));
                if with != without {
                    return Err(ChainError::MissingTemperedData("mSl"));
                }
                with
            }
        }
    } else {
        longest_from(std, l_tau, false)
    };
    Ok(l_tau + 2 * t as i64)
}

/// First level on the going-up tower.
pub fn first_up_index(std: &StandardModule) -> Result<i64, ChainError> {
    Ok(l_of_pi(std)? + 2)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum LiftCase {
    /// Chain bottom sits strictly right of `1 - d_1` (shrink) or `m(S_l)` is odd (up).
    Plain,
    /// The bottom segment is `[1-d_1, d_1]` (shrink) or `m(S_l)` is even (up).
    Reflected,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LiftOutcome {
    pub module: StandardModule,
    /// Fields of the new tempered part left undetermined.
    pub unknowns: Vec<String>,
    pub chain: Chain,
    pub case: Option<LiftCase>,
}

impl LiftOutcome {
    fn new(module: StandardModule, chain: Chain, case: Option<LiftCase>) -> Self {
        let unknowns = module.tempered.unknown_fields();
        LiftOutcome { module, unknowns, chain, case }
    }
}

/// Going-down lift `θ_{-α}`: add singletons `1, …, (α-1)/2`, one more `S_1` in the tempered part.
pub fn lift_down(std: &StandardModule, alpha: i64) -> Result<LiftOutcome, ChainError> {
    check_level(alpha)?;
    let mut module = std.clone();
    let line = std.line();
    for v in 1..=(alpha - 1) / 2 {
        module.insert(Segment::new(line.clone(), v.into(), v.into()).expect("singleton"));
    }
    module.tempered = TemperedDescriptor {
        label: format!("θ_{{-1}}({})", std.tempered.label),
        l_tau: LValue::Unknown,
        m_s1: std.tempered.m_s1.incremented(),
        m_sl: Multiplicity::Unknown,
    };
    Ok(LiftOutcome::new(module, Chain::default(), None))
}

/// From the going-down lift at `alpha` to the one at `beta`: add singletons
/// `(α+1)/2, …, (β-1)/2`.
pub fn embed_higher(std_at_alpha: &StandardModule, alpha: i64, beta: i64) -> Result<StandardModule, ChainError> {
    check_level(alpha)?;
    check_level(beta)?;
    if beta == alpha {
        return Ok(std_at_alpha.clone());
    }
    let top = half(beta - 1);
    if beta < alpha || std_at_alpha.segments.iter().any(|s| s.y >= top) {
        return Err(ChainError::BetaNotLarge { beta });
    }
    let mut module = std_at_alpha.clone();
    let line = std_at_alpha.line();
    for v in (alpha + 1) / 2..=(beta - 1) / 2 {
        module.insert(Segment::new(line.clone(), v.into(), v.into()).expect("singleton"));
    }
    Ok(module)
}

/// Lift `θ_α` towards smaller groups: shrink the longest (then narrowest) chain ending
/// at `(α-1)/2`.
pub fn lift_shrink(std: &StandardModule, alpha: i64) -> Result<LiftOutcome, ChainError> {
    check_level(alpha)?;
    let constraints = ChainConstraints {
        anchor: Anchor::End(half(alpha - 1)),
        forbid_c1: None,
        widths: WidthPreference::Narrowest,
        max_len: None,
    };
    let chain = find_chains(std, &constraints).into_iter().next().unwrap_or_default();
    let t = chain.len() as i64;
    let mut module = std.clone();
    let case = match chain.segments.first() {
        Some(first) if first.x + first.y == HalfInt::ONE => LiftCase::Reflected,
        _ => LiftCase::Plain,
    };
    for (i, seg) in chain.segments.iter().enumerate() {
        module.remove(seg);
        if i == 0 && case == LiftCase::Reflected {
            continue;
        }
        if !seg.is_singleton() {
            module.insert(Segment::new(seg.rho.clone(), seg.x, seg.y - 1).expect("shrunk segment"));
        }
    }
    let label = match case {
        LiftCase::Plain => format!("θ_{{{}}}({})", alpha - 2 * t, std.tempered.label),
        LiftCase::Reflected => format!("θ_{{{}}}({}′)", alpha - 2 * t + 2, std.tempered.label),
    };
    module.tempered = TemperedDescriptor::unknown().with_label(label);
    Ok(LiftOutcome::new(module, chain, Some(case)))
}

/// Going-up lift `θ_{-α}` for `α > l(π)`.
pub fn lift_up(std: &StandardModule, alpha: i64) -> Result<LiftOutcome, ChainError> {
    check_level(alpha)?;
    let l_pi = l_of_pi(std)?;
    if alpha <= l_pi {
        return Err(ChainError::AlphaNotAboveL { alpha, l: l_pi });
    }
    let l_tau = known_l(std)?;
    let case = if l_tau > 0 {
        match std.tempered.top_parity() {
            Some(Parity::Odd) => LiftCase::Plain,
            Some(Parity::Even) => LiftCase::Reflected,
            None => return Err(ChainError::MissingTemperedData("mSl")),
        }
    } else {
        LiftCase::Plain
    };
    let t = ((alpha - l_tau) / 2 - 1) as usize;
    let d1 = half(l_tau + 1);
    let constraints = ChainConstraints {
        anchor: Anchor::Start(d1),
        forbid_c1: (case == LiftCase::Reflected).then(|| half(1 - l_tau)),
        widths: WidthPreference::Widest,
        max_len: Some(t),
    };
    let mut chain = if t == 0 {
        Chain::default()
    } else {
        find_chains(std, &constraints).into_iter().next().unwrap_or_default()
    };
    let line = std.line();
    while chain.len() < t {
        let d = d1 + chain.len() as i64;
        chain.segments.push(Segment::new(line.clone(), d + 1, d).expect("empty segment"));
    }
    let mut module = std.clone();
    for seg in &chain.segments {
        if !seg.is_empty() {
            module.remove(seg);
        }
        module.insert(Segment::new(seg.rho.clone(), seg.x, seg.y + 1).expect("stretched segment"));
    }
    let odd_s1 = if l_tau > 0 { Multiplicity::Parity(Parity::Odd) } else { Multiplicity::Unknown };
    module.tempered = match case {
        LiftCase::Plain => TemperedDescriptor {
            label: format!("θ_{{{}}}({})", -2 - l_tau, std.tempered.label),
            l_tau: LValue::Unknown,
            m_s1: odd_s1,
            m_sl: Multiplicity::Unknown,
        },
        LiftCase::Reflected => {
            module.insert(Segment::new(line, half(1 - l_tau), half(l_tau + 1)).expect("reflected segment"));
            TemperedDescriptor {
                label: "σ".into(),
                l_tau: LValue::AtLeast(l_tau),
                m_s1: odd_s1,
                m_sl: Multiplicity::Unknown,
            }
        }
    };
    Ok(LiftOutcome::new(module, chain, Some(case)))
}

/// `θ_α(σ) = 0` is forced when `σ` misses a singleton of `1, …, (α-1)/2` (so it is no
/// going-down lift) and has even `m(S_1)` (so it is no going-up lift).
/// `None` when the parity of `m(S_1)` is unknown.
pub fn key_vanishing(sigma: &StandardModule, alpha: i64) -> Option<bool> {
    let missing = (1..=(alpha - 1) / 2).any(|v| !sigma.has_singleton(v.into()));
    let even = sigma.tempered.m_s1.parity()? == Parity::Even;
    Some(missing && even)
}

/// Lifts of one module, gathered for the corollary checks.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct LiftSet {
    pub l_pi: i64,
    pub up: BTreeMap<i64, LiftOutcome>,
    pub down: BTreeMap<i64, LiftOutcome>,
    /// `(α, β, θ^down_{-β}(θ^up_{-α}(π)))` with `β <= l(π)`.
    pub composites: Vec<(i64, i64, StandardModule)>,
    /// `(α, β, θ^up_{-β}(π'))` where `π' = θ^up_{-α}(π)` with a supplied tempered part.
    pub second_up: Vec<(i64, i64, LiftOutcome)>,
}

impl LiftSet {
    /// Up and down lifts for `α = l+2, …, l+2+2·extra`, every composite with `β <= l`,
    /// and second up lifts for each supplied descriptor of the new tempered part.
    pub fn compute(
        std: &StandardModule,
        extra: i64,
        second_tempered: &dyn Fn(&LiftOutcome) -> Vec<TemperedDescriptor>,
    ) -> Result<Self, ChainError> {
        let l_pi = l_of_pi(std)?;
        let mut set = LiftSet { l_pi, ..LiftSet::default() };
        for alpha in (l_pi + 2..=l_pi + 2 + 2 * extra).step_by(2).filter(|a| *a > 0) {
            let up = lift_up(std, alpha)?;
            set.down.insert(alpha, lift_down(std, alpha)?);
            for beta in (1..=l_pi).step_by(2) {
                let sigma = lift_down(&up.module, beta)?.module;
                set.composites.push((alpha, beta, sigma));
            }
            for tempered in second_tempered(&up) {
                let mut next = up.module.clone();
                next.tempered = tempered;
                let l_next = l_of_pi(&next)?;
                for beta in [l_next + 2, l_next + 4] {
                    set.second_up.push((alpha, beta, lift_up(&next, beta)?));
                }
            }
            set.up.insert(alpha, up);
        }
        Ok(set)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CorollaryViolation {
    pub check: String,
    pub alpha: i64,
    pub beta: Option<i64>,
    pub detail: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub checks_run: usize,
    pub violations: Vec<CorollaryViolation>,
}

impl CorollaryReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, ok: bool, check: &str, alpha: i64, beta: Option<i64>, detail: impl FnOnce() -> String) {
        self.checks_run += 1;
        if !ok {
            self.violations.push(CorollaryViolation { check: check.into(), alpha, beta, detail: detail() });
        }
    }
}

/// Structural facts every set of lifts must satisfy.
pub fn check_corollaries(std: &StandardModule, lifts: &LiftSet) -> CorollaryReport {
    let mut report = CorollaryReport::default();
    let l_pi = lifts.l_pi;
    report.record(l_of_pi(std).ok() == Some(l_pi), "l", l_pi, None, || "l(pi) mismatch".into());
    let gap = half(l_pi + 1);

    for (&alpha, up) in &lifts.up {
        report.record(l_pi < 0 || !up.module.has_singleton(gap), "up-lacks-gap", alpha, None, || {
            format!("up lift contains singleton {gap}: {}", up.module)
        });
        let s1 = up.module.tempered.m_s1.parity();
        let l_tau = std.tempered.l_tau.known().unwrap_or(-1);
        report.record(l_tau <= 0 || s1 == Some(Parity::Odd), "up-odd-s1", alpha, None, || {
            "m(S_1) of the new tempered part is not odd".into()
        });
    }

    for (kind, lifts_of_kind) in [("up", &lifts.up), ("down", &lifts.down)] {
        for (&alpha, lift) in lifts_of_kind {
            if alpha < 3 || lift.module.has_singleton(half(alpha - 1)) {
                continue;
            }
            let first_up = kind == "up" && alpha == l_pi + 2;
            report.record(first_up, "missing-top-means-first-up", alpha, None, || {
                format!("{kind} lift lacks singleton {} but is not the first up lift", half(alpha - 1))
            });
        }
    }

    for (&alpha, up) in &lifts.up {
        if alpha <= l_pi + 2 {
            continue;
        }
        let Some(down) = lifts.down.get(&alpha) else { continue };
        let above = |m: &StandardModule| -> Vec<Segment> {
            m.segments.iter().filter(|s| s.x >= half(alpha - 1)).cloned().collect()
        };
        report.record(above(&up.module) == above(&down.module), "up-down-agree-above", alpha, None, || {
            format!("up {} vs down {}", up.module, down.module)
        });
    }

    let bound = half(l_pi + 3);
    for (alpha, beta, second) in &lifts.second_up {
        let touched = second.chain.segments.iter().any(|s| s.is_singleton() && s.x < bound);
        report.record(!touched, "second-up-keeps-low-singletons", *alpha, Some(*beta), || {
            format!("second up lift stretches a singleton below {bound}: chain {}", second.chain)
        });
    }

    for (alpha, beta, sigma) in &lifts.composites {
        report.record(key_vanishing(sigma, *alpha) == Some(true), "shrink-after-down-up-vanishes", *alpha, Some(*beta), || {
            format!("θ_{alpha} of {sigma} is not forced to vanish")
        });
    }
    report
}
