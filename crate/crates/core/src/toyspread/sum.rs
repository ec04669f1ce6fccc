use serde::{Deserialize, Serialize};
use schemars::JsonSchema;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{in_toy, ToyError, ToyPoint};
use crate::seqcore::StrictIncSeq;
use crate::spread::{Point, SpreadLaw};

/// Index sequence of an infinite sum: either eventually periodic or
/// strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(untagged)]
pub enum SeqIndex {
    Periodic(Point),
    Increasing(StrictIncSeq),
}

impl SeqIndex {
    pub fn at(&self, i: usize) -> u64 {
        match self {
            SeqIndex::Periodic(p) => p.at(i),
            SeqIndex::Increasing(z) => z.at(i),
        }
    }

    fn has_nonzero(&self) -> bool {
        match self {
            SeqIndex::Periodic(p) => p.max_entry() > 0,
            SeqIndex::Increasing(_) => true,
        }
    }
}

/// A toy spread or a sum of toy spreads.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum SumDescriptor {
    /// The toy spread of size `n`.
    Toy { n: u64 },
    /// `n` copies of the toy spread of size `m`.
    Product { n: u64, m: u64 },
    /// Countably many copies of the toy spread of size `m`.
    OmegaProduct { m: u64 },
    /// Copy `i` is the toy spread of size `s[i]`.
    FiniteSum { s: Vec<u64> },
    /// Copy `i` is the toy spread of size `alpha(i)`.
    SeqSum { alpha: SeqIndex },
    /// The zero sequence together with, for each `n`, the block
    /// `0^n * <1> * T` where `T` is the toy spread of size `alpha(n)`.
    ClosureFan { alpha: Point },
}

impl fmt::Display for SumDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SumDescriptor::Toy { n } => write!(f, "T_{n}"),
            SumDescriptor::Product { n, m } => write!(f, "{n} x T_{m}"),
            SumDescriptor::OmegaProduct { m } => write!(f, "w x T_{m}"),
            SumDescriptor::FiniteSum { s } => write!(f, "T_{s:?}"),
            SumDescriptor::SeqSum { alpha: SeqIndex::Periodic(p) } => write!(f, "T_{p}"),
            SumDescriptor::SeqSum { alpha: SeqIndex::Increasing(z) } => {
                write!(f, "T_inc{:?}+{:?}", z.values(), z.period_increments())
            }
            SumDescriptor::ClosureFan { alpha } => write!(f, "T*_{alpha}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SumLaw {
    desc: SumDescriptor,
}

impl SumDescriptor {
    pub fn law(&self) -> SumLaw {
        SumLaw { desc: self.clone() }
    }

    /// Size of the toy spread in component `i`, or `None` when the
    /// descriptor is not a plain sum.
    pub fn component_size(&self, i: u64) -> Option<u64> {
        match self {
            SumDescriptor::Toy { n } => Some(if i == 0 { *n } else { 0 }),
            SumDescriptor::Product { n, m } => Some(if i < *n { *m } else { 0 }),
            SumDescriptor::OmegaProduct { m } => Some(*m),
            SumDescriptor::FiniteSum { s } => Some(s.get(i as usize).copied().unwrap_or(0)),
            SumDescriptor::SeqSum { alpha } => Some(alpha.at(i as usize)),
            SumDescriptor::ClosureFan { .. } => None,
        }
    }

    /// Multiset of component sizes, for the closed-form evaluator.
    pub fn components(&self) -> Option<Components> {
        let mut c = Components::default();
        match self {
            SumDescriptor::Toy { n } => c.add_finite(*n, 1),
            SumDescriptor::Product { n, m } => c.add_finite(*m, *n),
            SumDescriptor::OmegaProduct { m } => c.add_infinite(*m),
            SumDescriptor::FiniteSum { s } => s.iter().for_each(|&k| c.add_finite(k, 1)),
            SumDescriptor::SeqSum { alpha: SeqIndex::Periodic(p) } => {
                p.pre().iter().for_each(|&k| c.add_finite(k, 1));
                p.period().iter().for_each(|&k| c.add_infinite(k));
            }
            SumDescriptor::SeqSum { alpha: SeqIndex::Increasing(_) } => c.unbounded = true,
            SumDescriptor::ClosureFan { .. } => return None,
        }
        Some(c)
    }
}

impl SpreadLaw for SumLaw {
    fn accepts(&self, s: &[u64]) -> bool {
        match &self.desc {
            SumDescriptor::ClosureFan { alpha } => closure_accepts(alpha, s),
            SumDescriptor::Toy { n } => in_toy(*n, s),
            SumDescriptor::SeqSum { alpha } if s.is_empty() => alpha.has_nonzero(),
            SumDescriptor::FiniteSum { s: sizes } if s.is_empty() => sizes.iter().any(|&k| k > 0),
            d => match s.split_first() {
                None => d.component_size(0).is_some_and(|k| k > 0) || matches!(d, SumDescriptor::Product { n, m } if *n > 0 && *m > 0),
                Some((&i, rest)) => in_toy(d.component_size(i).unwrap_or(0), rest),
            },
        }
    }

    fn child_bound(&self, s: &[u64]) -> Option<u64> {
        match &self.desc {
            SumDescriptor::Toy { n } => Some(n.saturating_sub(1)),
            SumDescriptor::Product { n, m } => Some(if s.is_empty() { *n } else { *m }.saturating_sub(1)),
            SumDescriptor::FiniteSum { s: sizes } if s.is_empty() => Some((sizes.len() as u64).saturating_sub(1)),
            SumDescriptor::ClosureFan { alpha } => Some(match s.iter().position(|&x| x != 0) {
                None => 1,
                Some(q) => alpha.at(q).saturating_sub(1),
            }),
            _ => None,
        }
    }

    fn describe(&self) -> String {
        self.desc.to_string()
    }
}

fn closure_accepts(alpha: &Point, s: &[u64]) -> bool {
    match s.iter().position(|&x| x != 0) {
        None => true,
        Some(q) => s[q] == 1 && in_toy(alpha.at(q), &s[q + 1..]),
    }
}

/// The fan law of the closure of the blocks `0^n * <1> * T_{alpha(n)}`.
/// Initial segments of the zero sequence are always accepted.
pub fn closure_fan_law(alpha: &Point) -> SumLaw {
    SumDescriptor::ClosureFan { alpha: alpha.clone() }.law()
}

/// A point of a sum: a component index and a point of that component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SumPoint {
    pub component: u64,
    pub inner: ToyPoint,
}

impl SumPoint {
    pub fn to_point(&self) -> Point {
        self.inner.to_point().prepend(&[self.component])
    }

    pub fn check_in(&self, desc: &SumDescriptor) -> Result<(), ToyError> {
        let size = desc.component_size(self.component).ok_or(ToyError::NoSuchComponent(self.component))?;
        if size == 0 {
            return Err(ToyError::NoSuchComponent(self.component));
        }
        if self.inner.final_value() >= size {
            return Err(ToyError::NotMember(self.inner.to_string(), size));
        }
        Ok(())
    }
}

/// A cardinality that is either finite or countably infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Card {
    Finite(u64),
    Infinite,
}

impl Card {
    pub fn at_least(&self, q: u64) -> bool {
        match *self {
            Card::Finite(c) => c >= q,
            Card::Infinite => true,
        }
    }

    pub fn is(&self, q: u64) -> bool {
        *self == Card::Finite(q)
    }

    fn add(self, other: Card) -> Card {
        match (self, other) {
            (Card::Finite(a), Card::Finite(b)) => Card::Finite(a + b),
            _ => Card::Infinite,
        }
    }
}

/// Component sizes of a sum with their multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Components {
    pub finite: BTreeMap<u64, u64>,
    pub infinite: BTreeSet<u64>,
    /// Components of every size occur.
    pub unbounded: bool,
}

impl Components {
    fn add_finite(&mut self, size: u64, count: u64) {
        if size > 0 && count > 0 {
            *self.finite.entry(size).or_insert(0) += count;
        }
    }

    fn add_infinite(&mut self, size: u64) {
        if size > 0 {
            self.infinite.insert(size);
        }
    }

    /// Points of rank at least `p` (equivalently, exactly `p`; the two
    /// counts agree componentwise) in one toy component of size `k`.
    fn per_component(k: u64, p: u64) -> Card {
        if k <= p {
            Card::Finite(0)
        } else if k == p + 1 {
            Card::Finite(1)
        } else {
            Card::Infinite
        }
    }

    /// Number of points of rank at least `p`.
    pub fn rank_at_least(&self, p: u64) -> Card {
        if self.unbounded {
            return Card::Infinite;
        }
        let mut total = Card::Finite(0);
        for (&k, &c) in &self.finite {
            total = total.add(match Self::per_component(k, p) {
                Card::Finite(x) => Card::Finite(x * c),
                Card::Infinite => Card::Infinite,
            });
        }
        for &k in &self.infinite {
            if k > p {
                total = Card::Infinite;
            }
        }
        total
    }

    /// Number of points of rank exactly `p`.
    pub fn rank_exactly(&self, p: u64) -> Card {
        // per component these coincide with the rank-at-least counts
        self.rank_at_least(p)
    }
}
