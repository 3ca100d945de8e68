//! Text format for members and standard modules.
//!
//! ```text
//! # comments run to the end of the line
//! O(10; disc=+, hasse=-);
//! (a=1,b=3,eta=-,t=0) + (a=1,b=7,eta=+,t=0);
//! std@5: [3,3]+[2,2]+[1,1] | l_tau=?, mS1=?
//! ```
//!
//! Statements are separated by `;`. Half-integers are written `n/2`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chains::{LValue, Multiplicity, Parity, StandardModule, TemperedDescriptor};
use crate::half_int::HalfInt;
use crate::param::{BlockData, CuspidalLine, GroupContext, JordanBlock, LineLabel, PacketMember, SelfDualType, Sign};
use crate::segment::Segment;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Position {
    pub offset: usize,
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {} (offset {})", self.line, self.col, self.offset)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: Position, message: String },
    #[error("invalid input at {pos}: {message}")]
    Semantic { pos: Position, message: String },
}

impl DslError {
    pub fn position(&self) -> Position {
        match self {
            DslError::Syntax { pos, .. } | DslError::Semantic { pos, .. } => *pos,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct InputDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub member: Option<PacketMember>,
    /// `std@α` clauses: standard modules of lifted members.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub lifted_modules: BTreeMap<i64, StandardModule>,
    /// A `std:` clause: the standard module of the member itself.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<StandardModule>,
}

pub fn parse_input(text: &str) -> Result<InputDocument, DslError> {
    Parser::new(text).document()
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { text, pos: 0 }
    }

    fn position_at(&self, offset: usize) -> Position {
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let col = before.rfind('\n').map_or(before.chars().count(), |nl| before[nl + 1..].chars().count()) + 1;
        Position { offset, line, col }
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, DslError> {
        Err(DslError::Syntax { pos: self.position_at(self.pos), message: message.into() })
    }

    fn semantic<T>(&self, at: usize, message: impl fmt::Display) -> Result<T, DslError> {
        Err(DslError::Semantic { pos: self.position_at(at), message: message.to_string() })
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        loop {
            let rest = self.rest();
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                return;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), DslError> {
        if self.eat(token) {
            Ok(())
        } else {
            let found = self.rest().chars().next().map_or("end of input".to_string(), |c| format!("{c:?}"));
            self.syntax(format!("expected {token:?}, found {found}"))
        }
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let len = rest.find(|c: char| !(c.is_alphanumeric() || c == '_')).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn integer(&mut self) -> Result<i64, DslError> {
        self.skip_ws();
        let rest = self.rest();
        let sign = usize::from(rest.starts_with('-') || rest.starts_with('+'));
        let digits = rest[sign..].find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len() - sign);
        if digits == 0 {
            return self.syntax("expected an integer");
        }
        let value = rest[..sign + digits].parse().or_else(|_| self.syntax("integer out of range"))?;
        self.pos += sign + digits;
        Ok(value)
    }

    fn unsigned(&mut self) -> Result<u32, DslError> {
        let at = self.pos;
        let v = self.integer()?;
        u32::try_from(v).or_else(|_| self.semantic(at, format!("{v} must be a non-negative integer")))
    }

    fn half_int(&mut self) -> Result<HalfInt, DslError> {
        let n = self.integer()?;
        if self.eat("/") {
            let at = self.pos;
            match self.integer()? {
                1 => Ok(HalfInt::from_int(n)),
                2 => Ok(HalfInt::from_doubled(n)),
                _ => self.semantic(at, "only halves are allowed"),
            }
        } else {
            Ok(HalfInt::from_int(n))
        }
    }

    fn sign(&mut self) -> Result<Sign, DslError> {
        if self.eat("+1") || self.eat("+") {
            Ok(Sign::Plus)
        } else if self.eat("-1") || self.eat("-") {
            Ok(Sign::Minus)
        } else {
            self.syntax("expected a sign + or -")
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn document(mut self) -> Result<InputDocument, DslError> {
        let mut doc = InputDocument::default();
        let mut context: Option<(GroupContext, usize)> = None;
        let mut blocks: Option<(Vec<BlockData>, usize)> = None;
        loop {
            if self.at_end() {
                break;
            }
            let start = self.pos;
            if self.rest().starts_with("Sp") || self.rest().starts_with("O(") || self.rest().starts_with("O ") {
                if context.is_some() {
                    return self.semantic(start, "group given twice");
                }
                context = Some((self.group()?, start));
            } else if self.rest().starts_with("std") {
                self.std_clause(&mut doc)?;
            } else if self.rest().starts_with('(') {
                if blocks.is_some() {
                    return self.semantic(start, "block list given twice");
                }
                blocks = Some((self.block_list()?, start));
            } else {
                return self.syntax("expected a group, a block list or a std clause");
            }
            if !self.at_end() {
                self.expect(";")?;
            }
        }
        match (context, blocks) {
            (Some((ctx, _)), Some((blocks, _))) => doc.member = Some(PacketMember::new(ctx, blocks)),
            (Some((ctx, _)), None) => doc.member = Some(PacketMember::new(ctx, Vec::new())),
            (None, Some((_, at))) => return self.semantic(at, "block list without a group"),
            (None, None) => {}
        }
        if let (Some(m), Some(std)) = (&doc.member, doc.module.as_mut()) {
            std.context = Some(m.context);
        }
        Ok(doc)
    }

    fn group(&mut self) -> Result<GroupContext, DslError> {
        let at = self.pos;
        match self.word() {
            "Sp" => {
                self.expect("(")?;
                let n = self.unsigned()?;
                self.expect(")")?;
                GroupContext::symplectic(n).or_else(|e| self.semantic(at, e))
            }
            "O" => {
                self.expect("(")?;
                let n = self.unsigned()?;
                self.expect(";")?;
                self.expect("disc")?;
                self.expect("=")?;
                let disc = self.sign()?;
                self.expect(",")?;
                self.expect("hasse")?;
                self.expect("=")?;
                let hasse = self.sign()?;
                self.expect(")")?;
                GroupContext::orthogonal(n, disc, hasse).or_else(|e| self.semantic(at, e))
            }
            _ => {
                self.pos = at;
                self.syntax("expected Sp(n) or O(n; disc=.., hasse=..)")
            }
        }
    }

    fn block_list(&mut self) -> Result<Vec<BlockData>, DslError> {
        let mut out = vec![self.block()?];
        while self.eat("+") {
            out.push(self.block()?);
        }
        Ok(out)
    }

    fn block(&mut self) -> Result<BlockData, DslError> {
        let at = self.pos;
        self.expect("(")?;
        let (mut a, mut b, mut eta, mut t, mut rho) = (None, None, None, None, None);
        loop {
            let key_at = self.pos;
            let key = self.word();
            self.expect("=")?;
            let dup = match key {
                "a" => a.replace(self.unsigned()?).is_some(),
                "b" => b.replace(self.unsigned()?).is_some(),
                "eta" => eta.replace(self.sign()?).is_some(),
                "t" => t.replace(self.unsigned()?).is_some(),
                "rho" => rho.replace(self.line()?).is_some(),
                other => {
                    self.pos = key_at;
                    return self.syntax(format!("unknown block field {other:?}"));
                }
            };
            if dup {
                return self.semantic(key_at, format!("field {key} given twice"));
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        let (Some(a), Some(b), Some(eta)) = (a, b, eta) else {
            return self.semantic(at, "a block needs a, b and eta");
        };
        let rho = rho.unwrap_or_else(CuspidalLine::chi_v);
        let block = JordanBlock::new(rho, a, b).or_else(|e| self.semantic(at, e))?;
        BlockData::new(block, eta, t.unwrap_or(0)).or_else(|e| self.semantic(at, e))
    }

    fn line(&mut self) -> Result<CuspidalLine, DslError> {
        let at = self.pos;
        let name = self.word();
        if name.is_empty() {
            return self.syntax("expected a cuspidal line name");
        }
        let (dim, kind) = if self.eat(":") {
            let dim = self.unsigned()?;
            self.expect(":")?;
            let kind = match self.word() {
                "o" => SelfDualType::Orthogonal,
                "s" => SelfDualType::Symplectic,
                _ => return self.syntax("expected o or s"),
            };
            (dim, kind)
        } else {
            (1, SelfDualType::Orthogonal)
        };
        CuspidalLine::named(name, dim, kind).or_else(|e| self.semantic(at, e))
    }

    fn std_clause(&mut self, doc: &mut InputDocument) -> Result<(), DslError> {
        let at = self.pos;
        self.expect("std")?;
        let level = if self.eat("@") {
            let level_at = self.pos;
            let level = self.integer()?;
            if level <= 0 || level % 2 == 0 {
                return self.semantic(level_at, format!("level {level} must be a positive odd integer"));
            }
            Some(level)
        } else {
            None
        };
        self.expect(":")?;
        let mut segments = Vec::new();
        if self.peek() == Some('[') {
            segments.push(self.segment()?);
            while self.eat("+") {
                segments.push(self.segment()?);
            }
        }
        self.expect("|")?;
        let tempered = self.tempered()?;
        let module = StandardModule::new(segments, tempered).or_else(|e| self.semantic(at, e))?;
        match level {
            Some(level) => {
                if doc.lifted_modules.insert(level, module).is_some() {
                    return self.semantic(at, format!("std@{level} given twice"));
                }
            }
            None => {
                if doc.module.replace(module).is_some() {
                    return self.semantic(at, "std given twice");
                }
            }
        }
        Ok(())
    }

    fn segment(&mut self) -> Result<Segment, DslError> {
        let at = self.pos;
        self.expect("[")?;
        let x = self.half_int()?;
        self.expect(",")?;
        let y = self.half_int()?;
        self.expect("]")?;
        Segment::new(CuspidalLine::chi_v(), x, y).or_else(|e| self.semantic(at, e))
    }

    fn tempered(&mut self) -> Result<TemperedDescriptor, DslError> {
        let mut desc = TemperedDescriptor::unknown();
        loop {
            let key_at = self.pos;
            match self.word() {
                "l_tau" => {
                    self.expect("=")?;
                    desc.l_tau = if self.eat("?") { LValue::Unknown } else { LValue::Known(self.integer()?) };
                }
                "mS1" => {
                    self.expect("=")?;
                    desc.m_s1 = self.multiplicity()?;
                }
                "mSl" => {
                    self.expect("=")?;
                    desc.m_sl = self.multiplicity()?;
                }
                other => {
                    self.pos = key_at;
                    return self.syntax(format!("unknown tempered field {other:?}"));
                }
            }
            if !self.eat(",") {
                return Ok(desc);
            }
        }
    }

    fn multiplicity(&mut self) -> Result<Multiplicity, DslError> {
        if self.eat("?") {
            return Ok(Multiplicity::Unknown);
        }
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            return Ok(Multiplicity::Exact(self.unsigned()?));
        }
        let at = self.pos;
        match self.word() {
            "odd" => Ok(Multiplicity::Parity(Parity::Odd)),
            "even" => Ok(Multiplicity::Parity(Parity::Even)),
            _ => {
                self.pos = at;
                self.syntax("expected odd, even, a count or ?")
            }
        }
    }
}

pub fn serialize_block(bd: &BlockData) -> String {
    let mut out = format!("(a={},b={},eta={},t={}", bd.block.a(), bd.block.b(), bd.eta, bd.t);
    if bd.block.rho.label != LineLabel::ChiV {
        out += &format!(",rho={}", serialize_line(&bd.block.rho));
    }
    out + ")"
}

fn serialize_line(line: &CuspidalLine) -> String {
    let kind = match line.kind {
        SelfDualType::Orthogonal => 'o',
        SelfDualType::Symplectic => 's',
    };
    if line.is_quadratic() {
        line.name()
    } else {
        format!("{}:{}:{}", line.name(), line.dim, kind)
    }
}

pub fn serialize_member(m: &PacketMember) -> String {
    let blocks: Vec<String> = m.blocks.iter().map(serialize_block).collect();
    if blocks.is_empty() {
        format!("{}", m.context)
    } else {
        format!("{}; {}", m.context, blocks.join(" + "))
    }
}

fn serialize_multiplicity(m: Multiplicity) -> String {
    match m {
        Multiplicity::Unknown => "?".into(),
        other => other.to_string(),
    }
}

/// `std@level: ...` or `std: ...` when `level` is `None`.
pub fn serialize_module(std: &StandardModule, level: Option<i64>) -> String {
    let head = level.map_or("std".to_string(), |l| format!("std@{l}"));
    let segs: Vec<String> = std.segments.iter().map(Segment::to_string).collect();
    let l_tau = match std.tempered.l_tau {
        LValue::Known(l) => l.to_string(),
        _ => "?".into(),
    };
    let mut tail = format!("l_tau={}, mS1={}", l_tau, serialize_multiplicity(std.tempered.m_s1));
    if std.tempered.m_sl != Multiplicity::Unknown {
        tail += &format!(", mSl={}", serialize_multiplicity(std.tempered.m_sl));
    }
    format!("{head}: {} | {tail}", segs.join("+"))
}

pub fn serialize_document(doc: &InputDocument) -> String {
    let mut parts = Vec::new();
    if let Some(m) = &doc.member {
        parts.push(serialize_member(m));
    }
    if let Some(std) = &doc.module {
        parts.push(serialize_module(std, None));
    }
    for (level, std) in &doc.lifted_modules {
        parts.push(serialize_module(std, Some(*level)));
    }
    parts.join(";\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_symplectic_member() {
        let doc = parse_input("Sp(6); (a=7,b=1,eta=+,t=0)").unwrap();
        let m = doc.member.unwrap();
        assert_eq!(m.context, GroupContext::symplectic(6).unwrap());
        assert_eq!(m.blocks.len(), 1);
        assert!(m.is_valid());
    }

    #[test]
    fn parses_orthogonal_member_with_comments() {
        let text = "# two blocks\nO(10; disc=+, hasse=-);\n(a=1,b=3,eta=-,t=0) + (a=1,b=7,eta=+,t=0) # done\n";
        let m = parse_input(text).unwrap().member.unwrap();
        assert_eq!(m.context.epsilon_g(), Sign::Minus);
        assert!(m.is_valid());
    }

    #[test]
    fn parses_std_clauses() {
        let doc = parse_input("std@5: [3,3]+[2,2]+[1,1] | l_tau=?, mS1=?; std: [1/2,3/2] | l_tau=3,mS1=odd,mSl=even").unwrap();
        assert_eq!(doc.lifted_modules[&5].segments.len(), 3);
        let own = doc.module.unwrap();
        assert_eq!(own.segments[0].x, HalfInt::HALF);
        assert_eq!(own.tempered.m_sl, Multiplicity::Parity(Parity::Even));
    }

    #[test]
    fn malformed_sign_is_positioned() {
        let err = parse_input("Sp(6); (a=7,b=1,eta=*,t=0)").unwrap_err();
        assert!(matches!(err, DslError::Syntax { .. }));
        assert_eq!(err.position().offset, 20);
        assert_eq!(err.position().col, 21);
    }

    #[test]
    fn semantic_errors_are_separate() {
        let err = parse_input("Sp(6); (a=7,b=1,eta=+,t=3)").unwrap_err();
        assert!(matches!(err, DslError::Semantic { .. }));
        let err = parse_input("Sp(5)").unwrap_err();
        assert!(matches!(err, DslError::Semantic { .. }));
    }

    #[test]
    fn named_lines_round_trip() {
        let text = "Sp(10); (a=2,b=1,eta=+,t=0,rho=sigma:2:s) + (a=1,b=1,eta=-,t=0,rho=chi_W)";
        let doc = parse_input(text).unwrap();
        assert_eq!(parse_input(&serialize_document(&doc)).unwrap(), doc);
    }
}
