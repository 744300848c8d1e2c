//! The value group `Z^k` (k = 1 or 2) under lexicographic order, with an
//! adjoined top element standing in for the value of zero.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

/// Largest supported rank of the value group.
pub const MAX_RANK: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("dimension mismatch: rank {0} vs rank {1}")]
    Dimension(usize, usize),
    #[error("infinity has no additive inverse")]
    NegInfinity,
    #[error("unsupported rank {0} (expected 1 or 2)")]
    Rank(usize),
    #[error("cannot parse group element `{0}`")]
    Parse(String),
}

/// An element of `Z^k ∪ {∞}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum GroupElement {
    Finite(SmallVec<[i64; MAX_RANK]>),
    Infinity,
}

impl GroupElement {
    pub fn new(coords: &[i64]) -> Self {
        GroupElement::Finite(SmallVec::from_slice(coords))
    }

    pub fn zero(rank: usize) -> Self {
        GroupElement::Finite(SmallVec::from_elem(0, rank))
    }

    /// The `i`-th standard basis vector of `Z^rank`.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut c = SmallVec::from_elem(0, rank);
        c[i] = 1;
        GroupElement::Finite(c)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, GroupElement::Infinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, GroupElement::Finite(c) if c.iter().all(|&x| x == 0))
    }

    pub fn coords(&self) -> Option<&[i64]> {
        match self {
            GroupElement::Finite(c) => Some(c),
            GroupElement::Infinity => None,
        }
    }

    pub fn rank(&self) -> Option<usize> {
        self.coords().map(|c| c.len())
    }

    pub fn lex_compare(&self, other: &Self) -> Result<Ordering, GroupError> {
        match (self, other) {
            (GroupElement::Infinity, GroupElement::Infinity) => Ok(Ordering::Equal),
            (GroupElement::Infinity, _) => Ok(Ordering::Greater),
            (_, GroupElement::Infinity) => Ok(Ordering::Less),
            (GroupElement::Finite(a), GroupElement::Finite(b)) => {
                if a.len() != b.len() {
                    return Err(GroupError::Dimension(a.len(), b.len()));
                }
                Ok(a.as_slice().cmp(b.as_slice()))
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, GroupError> {
        match (self, other) {
            (GroupElement::Infinity, _) | (_, GroupElement::Infinity) => Ok(GroupElement::Infinity),
            (GroupElement::Finite(a), GroupElement::Finite(b)) => {
                if a.len() != b.len() {
                    return Err(GroupError::Dimension(a.len(), b.len()));
                }
                Ok(GroupElement::Finite(a.iter().zip(b).map(|(x, y)| x + y).collect()))
            }
        }
    }

    pub fn neg(&self) -> Result<Self, GroupError> {
        match self {
            GroupElement::Infinity => Err(GroupError::NegInfinity),
            GroupElement::Finite(a) => Ok(GroupElement::Finite(a.iter().map(|x| -x).collect())),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GroupError> {
        self.add(&other.neg()?)
    }

    /// `self >= other`, panicking on rank mismatch.
    pub fn ge(&self, other: &Self) -> bool {
        self.lex_compare(other).expect("rank mismatch") != Ordering::Less
    }

    pub fn min<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self.ge(other) {
            other
        } else {
            self
        }
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.lex_compare(other).ok()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Infinity => write!(f, "inf"),
            GroupElement::Finite(c) => {
                write!(f, "(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for GroupElement {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "inf" {
            return Ok(GroupElement::Infinity);
        }
        let inner = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(|| GroupError::Parse(s.to_string()))?;
        let coords = inner
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| GroupError::Parse(s.to_string())))
            .collect::<Result<SmallVec<[i64; MAX_RANK]>, _>>()?;
        if coords.is_empty() || coords.len() > MAX_RANK {
            return Err(GroupError::Rank(coords.len()));
        }
        Ok(GroupElement::Finite(coords))
    }
}

impl From<GroupElement> for String {
    fn from(g: GroupElement) -> String {
        g.to_string()
    }
}

impl TryFrom<String> for GroupElement {
    type Error = GroupError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(c: &[i64]) -> GroupElement {
        GroupElement::new(c)
    }

    #[test]
    fn compare_examples() {
        assert_eq!(g(&[0, 3]).lex_compare(&g(&[2, 1])), Ok(Ordering::Less));
        assert_eq!(g(&[1, 5]).lex_compare(&g(&[1, 5])), Ok(Ordering::Equal));
        assert_eq!(GroupElement::Infinity.lex_compare(&g(&[9, -9])), Ok(Ordering::Greater));
        assert_eq!(g(&[1]).lex_compare(&g(&[1, 0])), Err(GroupError::Dimension(1, 2)));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(g(&[1, 0]).add(&g(&[0, -2])).unwrap(), g(&[1, -2]));
        assert_eq!(g(&[3]).add(&g(&[3]).neg().unwrap()).unwrap(), g(&[0]));
        assert_eq!(GroupElement::Infinity.add(&g(&[5, 5])).unwrap(), GroupElement::Infinity);
        assert_eq!(GroupElement::Infinity.neg(), Err(GroupError::NegInfinity));
    }

    #[test]
    fn text_form() {
        for s in ["(1,-2)", "(0)", "inf"] {
            assert_eq!(s.parse::<GroupElement>().unwrap().to_string(), s);
        }
        assert!("(1,2,3)".parse::<GroupElement>().is_err());
        assert!("1,2".parse::<GroupElement>().is_err());
    }

    fn box2() -> Vec<GroupElement> {
        let mut v = Vec::new();
        for a in -5..=5 {
            for b in -5..=5 {
                v.push(g(&[a, b]));
            }
        }
        v
    }

    #[test]
    fn order_compatible_with_addition() {
        let pts = box2();
        for a in &pts {
            for b in &pts {
                if a.lex_compare(b).unwrap() != Ordering::Less {
                    continue;
                }
                for c in pts.iter().step_by(7) {
                    let (ac, bc) = (a.add(c).unwrap(), b.add(c).unwrap());
                    assert_eq!(ac.lex_compare(&bc).unwrap(), Ordering::Less);
                }
            }
        }
    }

    #[test]
    fn antisymmetric_and_transitive() {
        let pts = box2();
        for a in &pts {
            for b in &pts {
                let ab = a.lex_compare(b).unwrap();
                assert_eq!(ab.reverse(), b.lex_compare(a).unwrap());
                if ab == Ordering::Equal {
                    assert_eq!(a, b);
                }
            }
        }
        for a in pts.iter().step_by(3) {
            for b in pts.iter().step_by(5) {
                for c in pts.iter().step_by(4) {
                    if a <= b && b <= c {
                        assert!(a <= c);
                    }
                }
            }
        }
    }
}
