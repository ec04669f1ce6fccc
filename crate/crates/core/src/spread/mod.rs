//! Spread-laws, eventually periodic points and the bounded operations on
//! them: validation, leftmost paths, the canonical retraction, fan checks,
//! rank profiles and enumeration of decidable spreads.

mod law;
mod point;
mod tree;

pub use law::{BaireLaw, FnLaw, SingletonLaw, SpreadLaw, TableDefault, TableLaw};
pub use point::Point;
pub use tree::{rank_profile, Layer, RankLevel, RankProfile, RankValue, TruncatedTree};

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

use crate::seqcore::{is_prefix, FinSeq, SeqError};

pub const DEFAULT_DEPTH: usize = 12;
pub const DEFAULT_BRANCH_BOUND: u64 = 12;
pub const DEFAULT_RANK_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpreadError {
    #[error("a point needs a non-empty period")]
    EmptyPeriod,
    #[error("the law rejects the empty sequence")]
    RootRejected,
    #[error("no accepted child of {0} below the branch bound")]
    SearchExhausted(FinSeq),
    #[error("points below {0} separate within the depth")]
    NotInjectiveToDepth(FinSeq),
    #[error("{0} is not accepted")]
    NotMember(FinSeq),
    #[error("accepted node {0} extends no coded prefix")]
    IncompleteCode(FinSeq),
    #[error(transparent)]
    Seq(#[from] SeqError),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Accepted nodes shorter than the depth with no accepted child.
    pub spread_violations: Vec<FinSeq>,
    /// Rejected nodes with an accepted extension.
    pub monotonicity_violations: Vec<FinSeq>,
    /// Whether every sequence within the bounds was inspected; otherwise
    /// rejected nodes were probed only a few levels below the accepted
    /// region.
    pub exhaustive: bool,
    pub accepted_nodes: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.spread_violations.is_empty() && self.monotonicity_violations.is_empty()
    }
}

/// Sequences scanned before validation falls back to probing.
const EXHAUSTIVE_BUDGET: u128 = 1 << 20;
const PROBE_LEVELS: usize = 2;

fn region_size(depth: usize, bound: u64) -> u128 {
    let mut total: u128 = 0;
    let mut level: u128 = 1;
    for _ in 0..=depth {
        total = total.saturating_add(level);
        level = level.saturating_mul(bound as u128);
    }
    total
}

pub fn validate_spread_law(law: &dyn SpreadLaw, depth: usize, branch_bound: u64) -> ValidationReport {
    let mut report =
        ValidationReport { exhaustive: region_size(depth, branch_bound) <= EXHAUSTIVE_BUDGET, ..Default::default() };
    let mut s = Vec::new();
    if report.exhaustive {
        scan_all(law, depth, branch_bound, &mut s, &mut report);
    } else {
        scan_accepted(law, depth, branch_bound, &mut s, &mut report);
    }
    report
}

// Returns whether `s` or one of its extensions in the region is accepted.
fn scan_all(law: &dyn SpreadLaw, depth: usize, bound: u64, s: &mut Vec<u64>, r: &mut ValidationReport) -> bool {
    let here = law.accepts(s);
    let mut child_accepted = false;
    let mut below = false;
    if s.len() < depth {
        for n in 0..bound {
            s.push(n);
            child_accepted |= law.accepts(s);
            below |= scan_all(law, depth, bound, s, r);
            s.pop();
        }
    }
    if here {
        r.accepted_nodes += 1;
        if s.len() < depth && !child_accepted {
            r.spread_violations.push(FinSeq(s.clone()));
        }
    } else if below {
        r.monotonicity_violations.push(FinSeq(s.clone()));
    }
    here || below
}

fn probe_rejected(law: &dyn SpreadLaw, levels: usize, bound: u64, s: &mut Vec<u64>) -> bool {
    if levels == 0 {
        return false;
    }
    for n in 0..bound {
        s.push(n);
        let hit = law.accepts(s) || probe_rejected(law, levels - 1, bound, s);
        s.pop();
        if hit {
            return true;
        }
    }
    false
}

fn scan_accepted(law: &dyn SpreadLaw, depth: usize, bound: u64, s: &mut Vec<u64>, r: &mut ValidationReport) {
    if !law.accepts(s) {
        if probe_rejected(law, PROBE_LEVELS.min(depth - s.len()), bound, s) {
            r.monotonicity_violations.push(FinSeq(s.clone()));
        }
        return;
    }
    r.accepted_nodes += 1;
    if s.len() == depth {
        return;
    }
    let mut any = false;
    for n in 0..bound {
        s.push(n);
        any |= law.accepts(s);
        scan_accepted(law, depth, bound, s, r);
        s.pop();
    }
    if !any {
        r.spread_violations.push(FinSeq(s.clone()));
    }
}

fn least_child(law: &dyn SpreadLaw, s: &[u64], branch_bound: u64) -> Result<u64, SpreadError> {
    let mut t = s.to_vec();
    for n in 0..branch_bound {
        t.push(n);
        if law.accepts(&t) {
            return Ok(n);
        }
        t.pop();
    }
    Err(SpreadError::SearchExhausted(FinSeq(s.to_vec())))
}

/// Initial segment of length `length` of the leftmost path, built by
/// always taking the least accepted child.
pub fn leftmost_inhabitant(law: &dyn SpreadLaw, length: usize, branch_bound: u64) -> Result<FinSeq, SpreadError> {
    if !law.accepts(&[]) {
        return Err(SpreadError::RootRejected);
    }
    let mut s = Vec::with_capacity(length);
    while s.len() < length {
        let n = least_child(law, &s, branch_bound)?;
        s.push(n);
    }
    Ok(FinSeq(s))
}

/// The canonical retraction of Baire space onto the spread, applied to the
/// initial segment of `x` of length `depth`. Accepted segments are kept;
/// the first rejected step is replaced by the least accepted child of the
/// image so far.
pub fn retract(law: &dyn SpreadLaw, x: &Point, depth: usize, branch_bound: u64) -> Result<FinSeq, SpreadError> {
    if !law.accepts(&[]) {
        return Err(SpreadError::RootRejected);
    }
    let mut image: Vec<u64> = Vec::with_capacity(depth);
    for k in 0..depth {
        let original = x.prefix(k + 1);
        if law.accepts(&original) {
            image = original;
        } else {
            let n = least_child(law, &image, branch_bound)?;
            image.push(n);
        }
    }
    Ok(FinSeq(image))
}

/// Whether every accepted child below the depth stays within `bound`.
/// Children are scanned up to `branch_bound`, so violations beyond it go
/// unseen.
pub fn is_fan_to_depth(law: &dyn SpreadLaw, depth: usize, bound: &dyn Fn(&[u64]) -> u64, branch_bound: u64) -> bool {
    fn go(law: &dyn SpreadLaw, depth: usize, bound: &dyn Fn(&[u64]) -> u64, bb: u64, s: &mut Vec<u64>) -> bool {
        if s.len() == depth {
            return true;
        }
        let b = bound(s);
        for n in 0..bb {
            s.push(n);
            let ok = if law.accepts(s) { n <= b && go(law, depth, bound, bb, s) } else { true };
            s.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    if !law.accepts(&[]) {
        return true;
    }
    go(law, depth, bound, branch_bound, &mut Vec::new())
}

pub fn cb_rank_profile(law: &dyn SpreadLaw, depth: usize, branch_bound: u64, rank_cap: usize) -> RankProfile {
    let tree = TruncatedTree::build(law, depth, branch_bound);
    rank_profile(&tree, branch_bound, rank_cap)
}

/// Turns a coding of a decidable spread (prefixes paired with distinct
/// numbers) into the points it enumerates, ordered by their numbers.
///
/// Below each coded prefix the truncation must be a single path; the point
/// is that path continued by repeating its last entry.
pub fn enumerate_decidable(
    law: &dyn SpreadLaw,
    code: &[(FinSeq, u64)],
    depth: usize,
    branch_bound: u64,
) -> Result<Vec<Point>, SpreadError> {
    let tree = TruncatedTree::build(law, depth, branch_bound);
    let mut by_number: BTreeMap<u64, Point> = BTreeMap::new();
    for (s, n) in code {
        if !law.accepts(s.as_slice()) {
            return Err(SpreadError::NotMember(s.clone()));
        }
        if s.len() > depth {
            return Err(SpreadError::NotInjectiveToDepth(s.clone()));
        }
        let below: Vec<FinSeq> =
            tree.leaves().into_iter().filter(|l| is_prefix(s.as_slice(), l.as_slice())).collect();
        if below.len() > 1 || by_number.contains_key(n) {
            return Err(SpreadError::NotInjectiveToDepth(s.clone()));
        }
        let path = match below.into_iter().next() {
            Some(p) => p,
            None => return Err(SpreadError::NotMember(s.clone())),
        };
        let last = path.as_slice().last().copied().unwrap_or(0);
        by_number.insert(*n, Point::prefix_then_constant(path.as_slice(), last));
    }
    for leaf in tree.leaves() {
        if !code.iter().any(|(s, _)| is_prefix(s.as_slice(), leaf.as_slice())) {
            return Err(SpreadError::IncompleteCode(leaf));
        }
    }
    Ok(by_number.into_values().collect())
}
