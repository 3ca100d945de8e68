//! Segments `[x, y]` on a cuspidal line and rectangular generalized segments.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::half_int::HalfInt;
use crate::param::{CuspidalLine, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SegmentError {
    #[error("segments live on different cuspidal lines")]
    MixedCuspidalLines,
    #[error("[{x},{y}] is not a segment: y - x must be an integer >= -1")]
    Malformed { x: HalfInt, y: HalfInt },
    #[error("generalized segment rows do not step by one")]
    NotRectangular,
}

/// `[x, y]`; the empty segment is `[x, x-1]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Segment {
    pub x: HalfInt,
    pub y: HalfInt,
    pub rho: CuspidalLine,
}

impl Segment {
    pub fn new(rho: CuspidalLine, x: HalfInt, y: HalfInt) -> Result<Self, SegmentError> {
        if !x.same_class(y) || y < x - 1 {
            return Err(SegmentError::Malformed { x, y });
        }
        Ok(Segment { x, y, rho })
    }

    /// Integer segment on the trivial line.
    pub fn ints(x: i64, y: i64) -> Self {
        Segment::new(CuspidalLine::chi_v(), x.into(), y.into()).expect("integer segment")
    }

    pub fn is_empty(&self) -> bool {
        self.y < self.x
    }

    pub fn is_singleton(&self) -> bool {
        self.x == self.y
    }

    /// Number of exponents.
    pub fn len(&self) -> i64 {
        (self.y - self.x + 1).to_int().expect("segment length is integral")
    }

    pub fn contains_segment(&self, other: &Segment) -> bool {
        other.is_empty() || (self.x <= other.x && other.y <= self.y)
    }

    fn union_is_segment(&self, other: &Segment) -> bool {
        self.x.same_class(other.x) && other.x <= self.y + 1 && self.x <= other.y + 1
    }

    pub fn is_linked(&self, other: &Segment) -> Result<bool, SegmentError> {
        self.same_line(other)?;
        if self.is_empty() || other.is_empty() {
            return Ok(false);
        }
        Ok(!self.contains_segment(other)
            && !other.contains_segment(self)
            && self.union_is_segment(other))
    }

    pub fn is_juxtaposed(&self, other: &Segment) -> Result<bool, SegmentError> {
        self.same_line(other)?;
        if self.is_empty() || other.is_empty() {
            return Ok(false);
        }
        let disjoint = self.y < other.x || other.y < self.x;
        Ok(disjoint && self.union_is_segment(other))
    }

    fn same_line(&self, other: &Segment) -> Result<(), SegmentError> {
        if self.rho == other.rho {
            Ok(())
        } else {
            Err(SegmentError::MixedCuspidalLines)
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.x, self.y)
    }
}

pub fn is_linked(s1: &Segment, s2: &Segment) -> Result<bool, SegmentError> {
    s1.is_linked(s2)
}

pub fn is_juxtaposed(s1: &Segment, s2: &Segment) -> Result<bool, SegmentError> {
    s1.is_juxtaposed(s2)
}

/// Matrix of exponents with `x[i+1][j] = x[i][j] - zeta` and `x[i][j+1] = x[i][j] + zeta`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneralizedSegment {
    pub rho: CuspidalLine,
    pub entries: Vec<Vec<HalfInt>>,
    pub zeta: Sign,
}

impl GeneralizedSegment {
    pub fn new(rho: CuspidalLine, entries: Vec<Vec<HalfInt>>, zeta: Sign) -> Result<Self, SegmentError> {
        let gs = GeneralizedSegment { rho, entries, zeta };
        if !gs.is_consistent() {
            return Err(SegmentError::NotRectangular);
        }
        Ok(gs)
    }

    /// Rows decreasing, columns increasing: `x[i][j] = top_left + i - j`.
    pub fn from_corner(rho: CuspidalLine, top_left: HalfInt, rows: usize, cols: usize) -> Self {
        let entries = (0..rows)
            .map(|i| (0..cols).map(|j| top_left + (i as i64 - j as i64)).collect())
            .collect();
        GeneralizedSegment { rho, entries, zeta: Sign::Minus }
    }

    fn is_consistent(&self) -> bool {
        let step = self.zeta.value();
        let width = self.entries.first().map_or(0, Vec::len);
        self.entries.iter().all(|row| row.len() == width)
            && self.entries.iter().all(|row| row.windows(2).all(|w| w[1] == w[0] + step))
            && self.entries.windows(2).all(|rows| {
                rows[0].iter().zip(&rows[1]).all(|(up, down)| *down == *up - step)
            })
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.rows() == 0 || self.cols() == 0
    }

    pub fn transpose(&self) -> Self {
        let entries = (0..self.cols())
            .map(|j| self.entries.iter().map(|row| row[j]).collect())
            .collect();
        GeneralizedSegment { rho: self.rho.clone(), entries, zeta: self.zeta.flip() }
    }

    /// The same representation stored with decreasing rows.
    pub fn normalized(&self) -> Self {
        match self.zeta {
            Sign::Minus => self.clone(),
            Sign::Plus => self.transpose(),
        }
    }

    /// First column of the normalized matrix, top to bottom.
    pub fn first_column(&self) -> Vec<HalfInt> {
        self.normalized().entries.iter().map(|row| row[0]).collect()
    }

    pub fn top_left(&self) -> Option<HalfInt> {
        self.normalized().entries.first().and_then(|row| row.first()).copied()
    }

    pub fn bottom_right(&self) -> Option<HalfInt> {
        self.normalized().entries.last().and_then(|row| row.last()).copied()
    }
}

impl PartialEq for GeneralizedSegment {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        a.rho == b.rho && (a.entries == b.entries || (a.is_empty() && b.is_empty()))
    }
}

impl Eq for GeneralizedSegment {}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: i64, y: i64) -> Segment {
        Segment::ints(x, y)
    }

    #[test]
    fn linkage_examples() {
        assert!(s(2, 2).is_linked(&s(3, 3)).unwrap());
        assert!(s(2, 2).is_juxtaposed(&s(3, 3)).unwrap());
        assert!(s(1, 3).is_linked(&s(2, 4)).unwrap());
        assert!(!s(1, 3).is_juxtaposed(&s(2, 4)).unwrap());
        assert!(!s(1, 4).is_linked(&s(2, 3)).unwrap());
        assert!(!s(1, 1).is_linked(&s(3, 3)).unwrap());
        assert!(!s(2, 1).is_linked(&s(2, 2)).unwrap());
    }

    #[test]
    fn linkage_needs_one_line() {
        let other = CuspidalLine::chi_w();
        let t = Segment::new(other, 2.into(), 2.into()).unwrap();
        assert_eq!(s(1, 1).is_linked(&t), Err(SegmentError::MixedCuspidalLines));
    }

    #[test]
    fn half_integer_segments_do_not_link_integer_ones() {
        let h = Segment::new(CuspidalLine::chi_v(), HalfInt::from_doubled(3), HalfInt::from_doubled(5))
            .unwrap();
        assert!(!h.is_linked(&s(1, 2)).unwrap());
        assert!(Segment::new(CuspidalLine::chi_v(), HalfInt::from_doubled(3), 2.into()).is_err());
    }

    #[test]
    fn transpose_is_same_representation() {
        let gs = GeneralizedSegment::new(
            CuspidalLine::chi_v(),
            vec![vec![4.into(), 5.into()]],
            Sign::Plus,
        )
        .unwrap();
        assert_eq!(gs.transpose(), gs);
        assert_eq!(gs.first_column(), vec![HalfInt::from(4), HalfInt::from(5)]);
        assert!(GeneralizedSegment::new(
            CuspidalLine::chi_v(),
            vec![vec![4.into(), 6.into()]],
            Sign::Plus
        )
        .is_err());
    }
}
