//! Toy spreads: the spread of nondecreasing sequences with entries below
//! `n`, its points, finite and infinite sums of copies, the normal form of
//! finite sums and the bounded search behind almost-enumerability.

mod almost;
mod normal;
mod sum;

pub use almost::{almost_enum_witness, AlmostWitness};
pub use normal::{apply_witness, apply_witness_inverse, normalize, EquivWitness, Side, Step};
pub use sum::{closure_fan_law, Card, Components, SeqIndex, SumDescriptor, SumLaw, SumPoint};

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

use crate::spread::{Point, SpreadError, SpreadLaw};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToyError {
    #[error("{0} is not a point of the toy spread of size {1}")]
    NotMember(String, u64),
    #[error("malformed jump list: {0}")]
    BadJumps(String),
    #[error("component {0} does not exist or is empty")]
    NoSuchComponent(u64),
    #[error(transparent)]
    Spread(#[from] SpreadError),
}

pub(crate) fn in_toy(n: u64, s: &[u64]) -> bool {
    n > 0 && s.iter().all(|&x| x < n) && s.windows(2).all(|w| w[0] <= w[1])
}

/// The law of the toy spread of size `n`: nondecreasing sequences with
/// entries below `n`. Size zero is the empty spread and rejects the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ToyLaw {
    pub n: u64,
}

impl SpreadLaw for ToyLaw {
    fn accepts(&self, s: &[u64]) -> bool {
        in_toy(self.n, s)
    }
    fn child_bound(&self, _s: &[u64]) -> Option<u64> {
        Some(self.n.saturating_sub(1))
    }
    fn describe(&self) -> String {
        format!("toy {}", self.n)
    }
}

pub fn toy_law(n: u64) -> ToyLaw {
    ToyLaw { n }
}

/// A nondecreasing sequence that starts at 0 and takes finitely many
/// steps, each recorded as `(index, new_value)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawToyPoint")]
pub struct ToyPoint {
    jumps: Vec<(u64, u64)>,
}

#[derive(Deserialize)]
struct RawToyPoint {
    jumps: Vec<(u64, u64)>,
}

impl TryFrom<RawToyPoint> for ToyPoint {
    type Error = ToyError;
    fn try_from(r: RawToyPoint) -> Result<Self, ToyError> {
        ToyPoint::new(r.jumps)
    }
}

impl ToyPoint {
    pub fn new(jumps: Vec<(u64, u64)>) -> Result<Self, ToyError> {
        let mut prev: Option<(u64, u64)> = None;
        for &(i, v) in &jumps {
            if v == 0 {
                return Err(ToyError::BadJumps("jump to value 0".into()));
            }
            if let Some((pi, pv)) = prev {
                if i <= pi || v <= pv {
                    return Err(ToyError::BadJumps("indices and values must increase".into()));
                }
            }
            prev = Some((i, v));
        }
        Ok(ToyPoint { jumps })
    }

    pub fn zero() -> Self {
        ToyPoint::default()
    }

    /// Constant `0` up to `index`, then constant `value`.
    pub fn step(index: u64, value: u64) -> Self {
        if value == 0 {
            ToyPoint::zero()
        } else {
            ToyPoint { jumps: vec![(index, value)] }
        }
    }

    pub fn jumps(&self) -> &[(u64, u64)] {
        &self.jumps
    }

    pub fn at(&self, i: u64) -> u64 {
        self.jumps.iter().take_while(|&&(j, _)| j <= i).last().map_or(0, |&(_, v)| v)
    }

    pub fn final_value(&self) -> u64 {
        self.jumps.last().map_or(0, |&(_, v)| v)
    }

    /// Whether the point reaches the value `v`.
    pub fn reaches(&self, v: u64) -> bool {
        if v == 0 {
            self.at(0) == 0
        } else {
            self.jumps.iter().any(|&(_, w)| w == v)
        }
    }

    /// Least index at which the value `v` is taken.
    pub fn first_index_of(&self, v: u64) -> Option<u64> {
        if v == 0 {
            return if self.at(0) == 0 { Some(0) } else { None };
        }
        self.jumps.iter().find(|&&(_, w)| w == v).map(|&(i, _)| i)
    }

    pub fn to_point(&self) -> Point {
        let len = self.jumps.last().map_or(0, |&(i, _)| i as usize);
        let pre: Vec<u64> = (0..len as u64).map(|i| self.at(i)).collect();
        Point::prefix_then_constant(&pre, self.final_value())
    }

    pub fn from_point(p: &Point) -> Option<ToyPoint> {
        if p.period().len() != 1 {
            return None;
        }
        let head = p.prefix(p.pre().len() + 1);
        if head.windows(2).any(|w| w[0] > w[1]) {
            return None;
        }
        let mut jumps = Vec::new();
        let mut cur = 0;
        for (i, &v) in head.iter().enumerate() {
            if v != cur {
                jumps.push((i as u64, v));
                cur = v;
            }
        }
        Some(ToyPoint { jumps })
    }

    /// Every value raised by one.
    pub fn succ(&self) -> ToyPoint {
        let mut jumps: Vec<(u64, u64)> = self.jumps.iter().map(|&(i, v)| (i, v + 1)).collect();
        if jumps.first().is_none_or(|&(i, _)| i > 0) {
            jumps.insert(0, (0, 1));
        }
        ToyPoint { jumps }
    }

    /// Every value lowered by one; `None` when the point starts at 0.
    pub fn pred(&self) -> Option<ToyPoint> {
        if self.at(0) == 0 {
            return None;
        }
        let jumps = self.jumps.iter().filter(|&&(_, v)| v > 1).map(|&(i, v)| (i, v - 1)).collect();
        Some(ToyPoint { jumps })
    }

    /// The point with a leading 0 inserted.
    pub fn cons_zero(&self) -> ToyPoint {
        ToyPoint { jumps: self.jumps.iter().map(|&(i, v)| (i + 1, v)).collect() }
    }

    /// The point with its first entry dropped.
    pub fn tail(&self) -> ToyPoint {
        let mut jumps: Vec<(u64, u64)> = Vec::new();
        for &(i, v) in &self.jumps {
            let j = i.saturating_sub(1);
            if jumps.last().is_some_and(|&(k, _)| k == j) {
                jumps.pop();
            }
            jumps.push((j, v));
        }
        ToyPoint { jumps }
    }

    /// All jump indices moved right by `k`.
    pub fn delay(&self, k: u64) -> ToyPoint {
        ToyPoint { jumps: self.jumps.iter().map(|&(i, v)| (i + k, v)).collect() }
    }
}

impl fmt::Display for ToyPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.jumps.iter().map(|(i, v)| format!("{i}:{v}")).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Where a point sits in the rank structure of a toy spread.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    /// Cantor-Bendixson rank; 0 for isolated points.
    pub order: u64,
    pub isolated: bool,
    /// The defining formula the point satisfies.
    pub family: String,
}

/// A point of the toy spread of size `n` with final value `v` has order
/// `n - 1 - v`: it lies in the toy spread of size `v + 1` and reaches its
/// top value, which makes it the decidable-among-survivors point of that
/// rank.
pub fn classify_point(n: u64, p: &ToyPoint) -> Result<Classification, ToyError> {
    let v = p.final_value();
    if n == 0 || v >= n {
        return Err(ToyError::NotMember(p.to_string(), n));
    }
    let order = n - 1 - v;
    Ok(Classification { order, isolated: order == 0, family: format!("D_{order}") })
}

/// Every toy point of the toy spread of size `n` whose jump indices are
/// below `index_bound`.
pub fn enumerate_toy_points(n: u64, index_bound: u64) -> Vec<ToyPoint> {
    fn go(n: u64, index_bound: u64, from: u64, cur: u64, acc: &mut Vec<(u64, u64)>, out: &mut Vec<ToyPoint>) {
        out.push(ToyPoint { jumps: acc.clone() });
        for i in from..index_bound {
            for v in cur + 1..n {
                acc.push((i, v));
                go(n, index_bound, i + 1, v, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, index_bound, 0, 0, &mut Vec::new(), &mut out);
    }
    out
}
