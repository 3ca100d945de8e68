//! Jordan blocks, packet-membership data and the validity rules tying them together.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::half_int::HalfInt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    /// `(-1)^exponent`.
    pub fn pow_neg_one(exponent: i64) -> Sign {
        if exponent.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn pow(self, exponent: u32) -> Sign {
        if exponent % 2 == 0 {
            Sign::Plus
        } else {
            self
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl std::iter::Product for Sign {
    fn product<I: Iterator<Item = Sign>>(iter: I) -> Sign {
        iter.fold(Sign::Plus, Mul::mul)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelfDualType {
    Orthogonal,
    Symplectic,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineLabel {
    /// The quadratic character attached to the target space.
    ChiV,
    /// The quadratic character attached to the source space.
    ChiW,
    Named(String),
}

/// A self-dual cuspidal representation, up to the data the bookkeeping needs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct CuspidalLine {
    pub label: LineLabel,
    pub kind: SelfDualType,
    pub dim: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("block indices must be positive, got a={a}, b={b}")]
    ZeroIndex { a: u32, b: u32 },
    #[error("cuspidal line must have positive dimension")]
    ZeroDimLine,
    #[error("quadratic characters are one-dimensional and orthogonal")]
    QuadraticShape,
    #[error("t={t} exceeds min(a,b)/2 for block ({a},{b})")]
    TOutOfRange { a: u32, b: u32, t: u32 },
    #[error("space dimension {0} must be even")]
    OddSpace(u32),
    #[error("operation needs an orthogonal source group")]
    NotOrthogonal,
    #[error("(A,B,zeta) = ({big_a},{big_b},{zeta}) does not describe a block")]
    BadAbz { big_a: HalfInt, big_b: HalfInt, zeta: Sign },
}

impl CuspidalLine {
    pub fn chi_v() -> Self {
        CuspidalLine { label: LineLabel::ChiV, kind: SelfDualType::Orthogonal, dim: 1 }
    }

    pub fn chi_w() -> Self {
        CuspidalLine { label: LineLabel::ChiW, kind: SelfDualType::Orthogonal, dim: 1 }
    }

    pub fn named(name: &str, dim: u32, kind: SelfDualType) -> Result<Self, ParamError> {
        let label = match name {
            "chi_V" => LineLabel::ChiV,
            "chi_W" => LineLabel::ChiW,
            other => LineLabel::Named(other.to_string()),
        };
        if dim == 0 {
            return Err(ParamError::ZeroDimLine);
        }
        if matches!(label, LineLabel::ChiV | LineLabel::ChiW)
            && (dim != 1 || kind != SelfDualType::Orthogonal)
        {
            return Err(ParamError::QuadraticShape);
        }
        Ok(CuspidalLine { label, kind, dim })
    }

    pub fn is_quadratic(&self) -> bool {
        self.dim == 1 && self.kind == SelfDualType::Orthogonal
    }

    /// Twist by `chi_W * chi_V^{-1}`: the two distinguished characters trade places.
    pub fn twisted(&self) -> Self {
        let label = match &self.label {
            LineLabel::ChiV => LineLabel::ChiW,
            LineLabel::ChiW => LineLabel::ChiV,
            named => named.clone(),
        };
        CuspidalLine { label, ..self.clone() }
    }

    pub fn name(&self) -> String {
        match &self.label {
            LineLabel::ChiV => "chi_V".into(),
            LineLabel::ChiW => "chi_W".into(),
            LineLabel::Named(s) => s.clone(),
        }
    }
}

impl fmt::Display for CuspidalLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        if !matches!(self.label, LineLabel::ChiV | LineLabel::ChiW) && !self.is_quadratic() {
            let kind = match self.kind {
                SelfDualType::Orthogonal => 'o',
                SelfDualType::Symplectic => 's',
            };
            write!(f, ":{}:{}", self.dim, kind)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct OrthData {
    pub disc: Sign,
    pub hasse: Sign,
}

/// The source group: `Sp(n)` when `epsilon = +`, `O(n)` with quadratic invariants otherwise.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GroupContext {
    pub epsilon: Sign,
    pub n: u32,
    pub orth: Option<OrthData>,
}

impl GroupContext {
    pub fn symplectic(n: u32) -> Result<Self, ParamError> {
        if n % 2 != 0 {
            return Err(ParamError::OddSpace(n));
        }
        Ok(GroupContext { epsilon: Sign::Plus, n, orth: None })
    }

    pub fn orthogonal(n: u32, disc: Sign, hasse: Sign) -> Result<Self, ParamError> {
        if n % 2 != 0 {
            return Err(ParamError::OddSpace(n));
        }
        Ok(GroupContext { epsilon: Sign::Minus, n, orth: Some(OrthData { disc, hasse }) })
    }

    pub fn is_symplectic(&self) -> bool {
        self.epsilon == Sign::Plus
    }

    /// Dimension of the L-parameter: `n+1` for `Sp(n)`, `n` for `O(n)`.
    pub fn param_dim(&self) -> u32 {
        if self.is_symplectic() {
            self.n + 1
        } else {
            self.n
        }
    }

    /// The sign the product of block factors must equal.
    pub fn epsilon_g(&self) -> Sign {
        match (self.is_symplectic(), self.orth) {
            (true, _) => Sign::Plus,
            (false, Some(o)) => o.hasse,
            (false, None) => Sign::Plus,
        }
    }
}

impl fmt::Display for GroupContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.orth {
            Some(o) if !self.is_symplectic() => {
                write!(f, "O({}; disc={}, hasse={})", self.n, o.disc, o.hasse)
            }
            _ => write!(f, "Sp({})", self.n),
        }
    }
}

/// `rho ⊗ S_a ⊗ S_b`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct JordanBlock {
    pub rho: CuspidalLine,
    a: u32,
    b: u32,
}

impl JordanBlock {
    pub fn new(rho: CuspidalLine, a: u32, b: u32) -> Result<Self, ParamError> {
        if a == 0 || b == 0 {
            return Err(ParamError::ZeroIndex { a, b });
        }
        Ok(JordanBlock { rho, a, b })
    }

    /// Rebuild `(a, b)` from the segment description.
    pub fn from_segment(
        rho: CuspidalLine,
        big_a: HalfInt,
        big_b: HalfInt,
        zeta: Sign,
    ) -> Result<Self, ParamError> {
        let bad = || ParamError::BadAbz { big_a, big_b, zeta };
        let max = (big_a + big_b + 1).to_int().ok_or_else(bad)?;
        let min = (big_a - big_b + 1).to_int().ok_or_else(bad)?;
        if min < 1 || big_b < HalfInt::ZERO || (big_b == HalfInt::ZERO && zeta == Sign::Minus) {
            return Err(bad());
        }
        let (a, b) = match zeta {
            Sign::Plus => (max, min),
            Sign::Minus => (min, max),
        };
        JordanBlock::new(rho, a as u32, b as u32)
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn big_a(&self) -> HalfInt {
        HalfInt::from_doubled(i64::from(self.a) + i64::from(self.b) - 2)
    }

    pub fn big_b(&self) -> HalfInt {
        HalfInt::from_doubled((i64::from(self.a) - i64::from(self.b)).abs())
    }

    pub fn zeta(&self) -> Sign {
        if self.a >= self.b {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn min_ab(&self) -> u32 {
        self.a.min(self.b)
    }

    pub fn max_ab(&self) -> u32 {
        self.a.max(self.b)
    }

    /// `A - B`, always an integer.
    pub fn width(&self) -> i64 {
        i64::from(self.min_ab()) - 1
    }

    pub fn dim(&self) -> u32 {
        self.rho.dim * self.a * self.b
    }

    pub fn is_good_parity(&self) -> bool {
        let same_parity = self.a % 2 == self.b % 2;
        match self.rho.kind {
            SelfDualType::Orthogonal => same_parity,
            SelfDualType::Symplectic => !same_parity,
        }
    }

    pub fn with_b(&self, b: u32) -> Self {
        JordanBlock { rho: self.rho.clone(), a: self.a, b }
    }

    pub fn with_rho(&self, rho: CuspidalLine) -> Self {
        JordanBlock { rho, a: self.a, b: self.b }
    }
}

impl fmt::Display for JordanBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

pub fn make_block(rho: CuspidalLine, a: u32, b: u32) -> Result<JordanBlock, ParamError> {
    JordanBlock::new(rho, a, b)
}

/// A Jordan block with its sign `eta` and integer `t`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BlockData {
    pub block: JordanBlock,
    pub eta: Sign,
    pub t: u32,
}

impl BlockData {
    /// Checks the range of `t` and canonicalizes `eta` when it carries no information.
    pub fn new(block: JordanBlock, eta: Sign, t: u32) -> Result<Self, ParamError> {
        if 2 * t > block.min_ab() {
            return Err(ParamError::TOutOfRange { a: block.a, b: block.b, t });
        }
        Ok(BlockData { block, eta, t }.canonical())
    }

    /// No checks and no canonicalization.
    pub fn raw(block: JordanBlock, eta: Sign, t: u32) -> Self {
        BlockData { block, eta, t }
    }

    pub fn is_canonical(&self) -> bool {
        2 * self.t != self.block.min_ab() || self.eta == Sign::Plus
    }

    pub fn canonical(mut self) -> Self {
        if 2 * self.t == self.block.min_ab() {
            self.eta = Sign::Plus;
        }
        self
    }

    /// `eta^min(a,b) * (-1)^(floor(min/2) + t)`.
    pub fn epsilon_factor(&self) -> Sign {
        let min = self.block.min_ab();
        self.eta.pow(min) * Sign::pow_neg_one(i64::from(min / 2) + i64::from(self.t))
    }

    pub fn with_eta(&self, eta: Sign) -> Self {
        BlockData { eta, ..self.clone() }.canonical()
    }
}

impl fmt::Display for BlockData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{}", self.block.a, self.block.b, self.eta)?;
        if self.t != 0 {
            write!(f, ",t={}", self.t)?;
        }
        if self.block.rho.label != LineLabel::ChiV {
            write!(f, ",{}", self.block.rho)?;
        }
        write!(f, ")")
    }
}

pub fn epsilon_factor(bd: &BlockData) -> Sign {
    bd.epsilon_factor()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Issue {
    Dimension { expected: u32, found: u32 },
    BadParity { index: usize },
    TOutOfRange { index: usize },
    DeterminantSign { product: Sign, expected: Sign },
    OrderNotAdmissible { earlier: usize, later: usize },
    NonCanonicalEta { index: usize },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::Dimension { expected, found } => {
                write!(f, "blocks have total dimension {found}, expected {expected}")
            }
            Issue::BadParity { index } => write!(f, "block #{index} has bad parity"),
            Issue::TOutOfRange { index } => write!(f, "block #{index} has t > min(a,b)/2"),
            Issue::DeterminantSign { product, expected } => {
                write!(f, "product of block signs is {product}, expected {expected}")
            }
            Issue::OrderNotAdmissible { earlier, later } => write!(
                f,
                "block #{earlier} strictly contains block #{later} with the same zeta but sits below it"
            ),
            Issue::NonCanonicalEta { index } => {
                write!(f, "block #{index} has 2t = min(a,b) but eta is not +")
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// A packet member: block data in admissible order (the list order).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct PacketMember {
    pub context: GroupContext,
    pub blocks: Vec<BlockData>,
}

impl PacketMember {
    pub fn new(context: GroupContext, blocks: Vec<BlockData>) -> Self {
        PacketMember { context, blocks }
    }

    pub fn dim(&self) -> u32 {
        self.blocks.iter().map(|bd| bd.block.dim()).sum()
    }

    pub fn sign_product(&self) -> Sign {
        self.blocks.iter().map(BlockData::epsilon_factor).product()
    }

    pub fn canonicalize(&self) -> Self {
        PacketMember {
            context: self.context,
            blocks: self.blocks.iter().cloned().map(BlockData::canonical).collect(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        let expected = self.context.param_dim();
        if self.dim() != expected {
            issues.push(Issue::Dimension { expected, found: self.dim() });
        }
        for (index, bd) in self.blocks.iter().enumerate() {
            if !bd.block.is_good_parity() {
                issues.push(Issue::BadParity { index });
            }
            if 2 * bd.t > bd.block.min_ab() {
                issues.push(Issue::TOutOfRange { index });
            } else if !bd.is_canonical() {
                issues.push(Issue::NonCanonicalEta { index });
            }
        }
        let product = self.sign_product();
        let target = self.context.epsilon_g();
        if product != target {
            issues.push(Issue::DeterminantSign { product, expected: target });
        }
        issues.extend(order_violations(&self.blocks));
        ValidationReport { issues }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// Parameter of `pi ⊗ det`: flips eta wherever `dim(rho)(|a-b|+1)` is odd.
    pub fn det_twist(&self) -> Result<Self, ParamError> {
        if self.context.is_symplectic() {
            return Err(ParamError::NotOrthogonal);
        }
        let blocks = self
            .blocks
            .iter()
            .map(|bd| {
                let odd = bd.block.rho.dim * (bd.block.a.abs_diff(bd.block.b) + 1) % 2 == 1;
                if odd {
                    bd.with_eta(bd.eta.flip())
                } else {
                    bd.clone()
                }
            })
            .collect();
        let twisted = PacketMember { context: self.context, blocks };
        if self.dim() == self.context.param_dim() {
            assert_eq!(twisted.sign_product(), self.sign_product(), "det twist changed the sign product");
        }
        Ok(twisted)
    }
}

impl fmt::Display for PacketMember {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.context)?;
        for (i, bd) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{bd}")?;
        }
        Ok(())
    }
}

/// Pairs `(earlier, later)` where the earlier block strictly contains the later one
/// with equal zeta, which forces it to be larger.
fn order_violations(blocks: &[BlockData]) -> Vec<Issue> {
    let mut out = Vec::new();
    for (i, lo) in blocks.iter().enumerate() {
        for (j, hi) in blocks.iter().enumerate().skip(i + 1) {
            let (x, y) = (&lo.block, &hi.block);
            if x.rho == y.rho
                && x.zeta() == y.zeta()
                && x.big_a() > y.big_a()
                && y.big_b() > x.big_b()
            {
                out.push(Issue::OrderNotAdmissible { earlier: i, later: j });
            }
        }
    }
    out
}

/// Stable split into (bad parity, good parity).
pub fn good_parity_split(blocks: &[BlockData]) -> (Vec<BlockData>, Vec<BlockData>) {
    blocks.iter().cloned().partition(|bd| !bd.block.is_good_parity())
}
