//! Normal form of finite sums of toy spreads.
//!
//! Reading the sizes left to right, a sum collapses to `n` copies of a
//! single toy spread: a smaller summand is absorbed into an existing copy,
//! an equal one adds a copy, and a larger one swallows every copy so far.
//! The witness records, per source component, the chain of absorption maps
//! a point goes through.

use serde::{Deserialize, Serialize};

use super::{SumDescriptor, SumPoint, ToyError, ToyPoint};

/// Which summand of `T_low + T_high` a point comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Low,
    High,
}

/// One application of the bijection `T_low + T_high -> T_high` (low < high).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub low: u64,
    pub high: u64,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct ComponentMap {
    target: u64,
    steps: Vec<Step>,
}

/// A bijection from the sum `T_s` onto `n` copies of `T_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivWitness {
    pub source: Vec<u64>,
    pub copies: u64,
    pub size: u64,
    maps: Vec<Option<ComponentMap>>,
}

impl EquivWitness {
    pub fn source_descriptor(&self) -> SumDescriptor {
        SumDescriptor::FiniteSum { s: self.source.clone() }
    }

    pub fn target_descriptor(&self) -> SumDescriptor {
        SumDescriptor::Product { n: self.copies, m: self.size }
    }

    /// Number of absorption steps applied to points of component `i`.
    pub fn chain_len(&self, i: usize) -> usize {
        self.maps.get(i).and_then(|m| m.as_ref()).map_or(0, |m| m.steps.len())
    }
}

/// Normal form `(n, m)` of the finite sum with component sizes `s`, with a
/// witness. Empty components are skipped; an empty sum gives `(0, 1)`.
pub fn normalize(s: &[u64]) -> (u64, u64, EquivWitness) {
    let mut maps: Vec<Option<ComponentMap>> = Vec::with_capacity(s.len());
    let mut state: Option<(u64, u64)> = None;
    for &p in s {
        if p == 0 {
            maps.push(None);
            continue;
        }
        let next = match state {
            None => {
                maps.push(Some(ComponentMap { target: 0, steps: Vec::new() }));
                (1, p)
            }
            Some((n, m)) if p < m => {
                for c in maps.iter_mut().flatten().filter(|c| c.target == 0) {
                    c.steps.push(Step { low: p, high: m, side: Side::High });
                }
                maps.push(Some(ComponentMap { target: 0, steps: vec![Step { low: p, high: m, side: Side::Low }] }));
                (n, m)
            }
            Some((n, m)) if p == m => {
                maps.push(Some(ComponentMap { target: n, steps: Vec::new() }));
                (n + 1, m)
            }
            Some((n, m)) => {
                for c in maps.iter_mut().flatten() {
                    let j = c.target;
                    c.steps.push(Step { low: m, high: p, side: Side::Low });
                    for _ in 0..j {
                        c.steps.push(Step { low: m, high: p, side: Side::High });
                    }
                    c.target = 0;
                }
                let steps = vec![Step { low: m, high: p, side: Side::High }; n as usize];
                maps.push(Some(ComponentMap { target: 0, steps }));
                (1, p)
            }
        };
        state = Some(next);
    }
    let (n, m) = state.unwrap_or((0, 1));
    (n, m, EquivWitness { source: s.to_vec(), copies: n, size: m, maps })
}

/// The bijection `T_low + T_high -> T_high`, built from the one-step case
/// `T_k + T_{k+1} -> T_{k+1}` that sends the low summand through `x -> x+1`
/// and the high summand through `x -> <0> * x`.
fn absorb(low: u64, high: u64, side: Side, x: &ToyPoint) -> ToyPoint {
    if high == low + 1 {
        return match side {
            Side::Low => x.succ(),
            Side::High => x.cons_zero(),
        };
    }
    let k = high - 1;
    match side {
        Side::Low => absorb(low, k, Side::Low, x).succ(),
        Side::High => match x.pred() {
            Some(y) => absorb(low, k, Side::High, &y).succ(),
            None => x.clone(),
        },
    }
}

fn absorb_inverse(low: u64, high: u64, y: &ToyPoint) -> (Side, ToyPoint) {
    if high == low + 1 {
        return match y.pred() {
            None => (Side::High, y.tail()),
            Some(x) => (Side::Low, x),
        };
    }
    let k = high - 1;
    match y.pred() {
        None => (Side::High, y.clone()),
        Some(z) => match absorb_inverse(low, k, &z) {
            (Side::Low, x) => (Side::Low, x),
            (Side::High, x) => (Side::High, x.succ()),
        },
    }
}

pub fn apply_witness(w: &EquivWitness, p: &SumPoint) -> Result<SumPoint, ToyError> {
    p.check_in(&w.source_descriptor())?;
    let map = w
        .maps
        .get(p.component as usize)
        .and_then(|m| m.as_ref())
        .ok_or(ToyError::NoSuchComponent(p.component))?;
    let inner = map.steps.iter().fold(p.inner.clone(), |x, st| absorb(st.low, st.high, st.side, &x));
    Ok(SumPoint { component: map.target, inner })
}

pub fn apply_witness_inverse(w: &EquivWitness, q: &SumPoint) -> Result<SumPoint, ToyError> {
    q.check_in(&w.target_descriptor())?;
    let mut x = q.inner.clone();
    // Undo the chains from the last summand backwards: at each stage the
    // current point belongs to exactly one candidate component.
    'outer: for (i, map) in w.maps.iter().enumerate().rev() {
        let Some(map) = map else { continue };
        if map.target != q.component {
            continue;
        }
        let mut y = x.clone();
        for st in map.steps.iter().rev() {
            let (side, prev) = absorb_inverse(st.low, st.high, &y);
            if side != st.side {
                continue 'outer;
            }
            y = prev;
        }
        x = y;
        return Ok(SumPoint { component: i as u64, inner: x });
    }
    Err(ToyError::NotMember(q.inner.to_string(), w.size))
}
