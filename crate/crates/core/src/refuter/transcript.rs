use serde::{Deserialize, Serialize};
use schemars::JsonSchema;
use std::fmt;

use super::strategy::{Modulus, Query};
use crate::seqcore::unpair_first;
use crate::spread::Point;
use crate::vitali::{fan_for, in_omega_neighbourhood, within_differences, RelExpr};

pub const SCHEMA_VERSION: u32 = 1;

/// Sets of points a transcript can test membership in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "set", rename_all = "kebab-case")]
pub enum PointSet {
    /// Points differing from `gamma` in at most `max` places.
    Within { gamma: Point, max: u64 },
    /// Points that, first differing from `gamma` at `j`, differ from it in
    /// at most `j + 1` places.
    OmegaNeighbourhood { gamma: Point },
    /// The 0/1 fan attached to a restricted-grammar expression.
    FanFor { expr: RelExpr },
}

impl PointSet {
    pub fn contains(&self, a: &Point) -> bool {
        match self {
            PointSet::Within { gamma, max } => within_differences(gamma, *max as usize, a),
            PointSet::OmegaNeighbourhood { gamma } => in_omega_neighbourhood(gamma, a),
            PointSet::FanFor { expr } => fan_for(expr).is_ok_and(|f| f.contains(a)),
        }
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointSet::Within { gamma, max } => write!(f, "F[{gamma}, {max}]"),
            PointSet::OmegaNeighbourhood { gamma } => write!(f, "F[{gamma}, omega]"),
            PointSet::FanFor { expr } => write!(f, "fan {expr}"),
        }
    }
}

/// A finite computation on recorded data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CheckKind {
    /// `candidate` and `reference` agree below `len`.
    PrefixAgrees { reference: Point, candidate: Point, len: u64 },
    DiffersAt { a: Point, b: Point, index: u64 },
    AgreesAt { a: Point, b: Point, index: u64 },
    /// `value > bound`.
    Exceeds { value: u64, bound: u64 },
    /// `value >= bound`.
    AtLeast { value: u64, bound: u64 },
    /// `candidate` and `reference` differ only below `len`.
    AgreesFrom { candidate: Point, reference: Point, len: u64 },
    /// The first place where the points differ is `index`.
    FirstDifference { a: Point, b: Point, index: u64 },
    PointsEqual { a: Point, b: Point },
    PointsApart { a: Point, b: Point },
    /// The points do not eventually agree.
    NotVitaliEquivalent { a: Point, b: Point },
    VitaliEquivalent { a: Point, b: Point },
    MemberOf { set: PointSet, candidate: Point },
    /// The first coordinate of the pair coded by `code` is `first`.
    PairFirst { code: u64, first: u64 },
    /// Dropping the first `by` entries of `a` leaves `b`.
    ShiftEquals { a: Point, by: u64, b: Point },
}

impl CheckKind {
    pub fn evaluate(&self) -> bool {
        match self {
            CheckKind::PrefixAgrees { reference, candidate, len } => {
                reference.prefix(*len as usize) == candidate.prefix(*len as usize)
            }
            CheckKind::DiffersAt { a, b, index } => a.at(*index as usize) != b.at(*index as usize),
            CheckKind::AgreesAt { a, b, index } => a.at(*index as usize) == b.at(*index as usize),
            CheckKind::Exceeds { value, bound } => value > bound,
            CheckKind::AtLeast { value, bound } => value >= bound,
            CheckKind::AgreesFrom { candidate, reference, len } => {
                candidate.agreement_from(reference).is_some_and(|k| k as u64 <= *len)
            }
            CheckKind::FirstDifference { a, b, index } => a.first_difference(b) == Some(*index as usize),
            CheckKind::PointsEqual { a, b } => a == b,
            CheckKind::PointsApart { a, b } => a != b,
            CheckKind::NotVitaliEquivalent { a, b } => a.agreement_from(b).is_none(),
            CheckKind::VitaliEquivalent { a, b } => a.agreement_from(b).is_some(),
            CheckKind::MemberOf { set, candidate } => set.contains(candidate),
            CheckKind::PairFirst { code, first } => unpair_first(*code) == *first,
            CheckKind::ShiftEquals { a, by, b } => a.shift_by(*by as usize) == *b,
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckKind::PrefixAgrees { reference, candidate, len } => {
                write!(f, "{candidate} starts with the first {len} entries of {reference}")
            }
            CheckKind::DiffersAt { a, b, index } => write!(f, "{a} and {b} differ at {index}"),
            CheckKind::AgreesAt { a, b, index } => write!(f, "{a} and {b} agree at {index}"),
            CheckKind::Exceeds { value, bound } => write!(f, "{value} > {bound}"),
            CheckKind::AtLeast { value, bound } => write!(f, "{value} >= {bound}"),
            CheckKind::AgreesFrom { candidate, reference, len } => {
                write!(f, "{candidate} agrees with {reference} from {len} on")
            }
            CheckKind::FirstDifference { a, b, index } => write!(f, "{a} first differs from {b} at {index}"),
            CheckKind::PointsEqual { a, b } => write!(f, "{a} = {b}"),
            CheckKind::PointsApart { a, b } => write!(f, "{a} # {b}"),
            CheckKind::NotVitaliEquivalent { a, b } => write!(f, "{a} and {b} do not eventually agree"),
            CheckKind::VitaliEquivalent { a, b } => write!(f, "{a} and {b} eventually agree"),
            CheckKind::MemberOf { set, candidate } => write!(f, "{candidate} lies in {set}"),
            CheckKind::PairFirst { code, first } => write!(f, "{code} codes a pair with first coordinate {first}"),
            CheckKind::ShiftEquals { a, by, b } => write!(f, "{a} without its first {by} entries is {b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct Check {
    #[serde(flatten)]
    pub kind: CheckKind,
    /// The recorded outcome.
    pub expect: bool,
}

impl Check {
    pub fn holds(kind: CheckKind) -> Check {
        Check { kind, expect: true }
    }

    /// The assertion a claim makes about the constructed point, recorded
    /// as failing.
    pub fn refuted(kind: CheckKind) -> Check {
        Check { kind, expect: false }
    }

    pub fn verified(&self) -> bool {
        self.kind.evaluate() == self.expect
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum DecisionBranch {
    /// The claim that every nearby point equals the given one.
    AllEqual,
    /// The claim that every nearby point is apart from the given one.
    AllApart,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum ApartnessBranch {
    /// Nearby points are all inequivalent to the first point.
    First,
    /// Nearby points are all inequivalent to the second point.
    Second,
}

/// Which refuter ran, with its inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "refuter", rename_all = "kebab-case")]
pub enum RefuterInput {
    EqualityDecidability { modulus: Modulus, branch: DecisionBranch },
    VitaliStability { gamma: Point, modulus: Modulus },
    Apartness { a: Point, b: Point, modulus: Modulus, branch: ApartnessBranch },
    TowerCollapse { gamma: Point, i: u64 },
    OmegaStability { gamma: Point },
    FinContainment { expr: RelExpr },
    DecidabilityOnOmegaClass { gamma: Point, modulus: Modulus, branch: DecisionBranch },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct Answer {
    pub query: Query,
    pub modulus: Modulus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct Step {
    /// What the claim at this step says, in words.
    pub claim: String,
    pub answers: Vec<Answer>,
    /// The point constructed against the claim.
    pub point: Point,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct Transcript {
    pub schema_version: u32,
    pub input: RefuterInput,
    pub steps: Vec<Step>,
}

impl Transcript {
    /// Every check but the last is recorded as passing, the last as failing,
    /// and all recorded outcomes are what the checks compute.
    pub fn checks_consistent(&self) -> bool {
        let all: Vec<&Check> = self.steps.iter().flat_map(|s| s.checks.iter()).collect();
        let Some((last, rest)) = all.split_last() else {
            return false;
        };
        !last.expect && rest.iter().all(|c| c.expect) && all.iter().all(|c| c.verified())
    }

    pub fn narrate(&self) -> String {
        let mut out = String::new();
        for (k, s) in self.steps.iter().enumerate() {
            out.push_str(&format!("step {}: {}\n", k + 1, s.claim));
            for a in &s.answers {
                out.push_str(&format!("  {} answered p={} n={}\n", a.query, a.modulus.p, a.modulus.n));
            }
            out.push_str(&format!("  point {}\n", s.point));
            for c in &s.checks {
                let mark = if c.expect { "ok  " } else { "FAIL" };
                out.push_str(&format!("  [{mark}] {}\n", c.kind));
            }
        }
        out.push_str("contradiction\n");
        out
    }
}
