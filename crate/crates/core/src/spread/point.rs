//! Eventually periodic points of Baire space.

use serde::{Deserialize, Serialize};
use schemars::JsonSchema;
use std::fmt;

use super::SpreadError;

#[derive(Deserialize, JsonSchema)]
struct RawPoint {
    #[serde(default)]
    pre: Vec<u64>,
    period: Vec<u64>,
}

/// An eventually periodic infinite sequence `pre * period * period * ...`,
/// always stored in canonical form (primitive period, shortest preperiod),
/// so structural equality is equality of sequences.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPoint")]
pub struct Point {
    pre: Vec<u64>,
    period: Vec<u64>,
}

impl JsonSchema for Point {
    fn schema_name() -> String {
        "Point".into()
    }
    fn json_schema(gen: &mut schemars::gen::SchemaGenerator) -> schemars::schema::Schema {
        RawPoint::json_schema(gen)
    }
}

impl TryFrom<RawPoint> for Point {
    type Error = SpreadError;
    fn try_from(r: RawPoint) -> Result<Self, Self::Error> {
        Point::new(r.pre, r.period)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl Point {
    pub fn new(pre: Vec<u64>, period: Vec<u64>) -> Result<Self, SpreadError> {
        if period.is_empty() {
            return Err(SpreadError::EmptyPeriod);
        }
        let mut p = Point { pre, period };
        p.canonicalize();
        Ok(p)
    }

    pub fn constant(c: u64) -> Self {
        Point { pre: Vec::new(), period: vec![c] }
    }

    pub fn zero() -> Self {
        Point::constant(0)
    }

    /// `s` followed by the constant sequence `c`.
    pub fn prefix_then_constant(s: &[u64], c: u64) -> Self {
        let mut p = Point { pre: s.to_vec(), period: vec![c] };
        p.canonicalize();
        p
    }

    fn canonicalize(&mut self) {
        let n = self.period.len();
        for d in 1..=n {
            if n.is_multiple_of(d) && (0..n).all(|i| self.period[i] == self.period[i % d]) {
                self.period.truncate(d);
                break;
            }
        }
        while let Some(&last) = self.pre.last() {
            if last != *self.period.last().unwrap() {
                break;
            }
            self.pre.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn pre(&self) -> &[u64] {
        &self.pre
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    pub fn at(&self, n: usize) -> u64 {
        if n < self.pre.len() {
            self.pre[n]
        } else {
            self.period[(n - self.pre.len()) % self.period.len()]
        }
    }

    /// The initial segment of length `n`.
    pub fn prefix(&self, n: usize) -> Vec<u64> {
        (0..n).map(|i| self.at(i)).collect()
    }

    /// `s * self`.
    pub fn prepend(&self, s: &[u64]) -> Point {
        let mut pre = s.to_vec();
        pre.extend_from_slice(&self.pre);
        let mut p = Point { pre, period: self.period.clone() };
        p.canonicalize();
        p
    }

    /// Drops the first `k` entries.
    pub fn shift_by(&self, k: usize) -> Point {
        if k <= self.pre.len() {
            return Point { pre: self.pre[k..].to_vec(), period: self.period.clone() };
        }
        let mut period = self.period.clone();
        let r = (k - self.pre.len()) % period.len();
        period.rotate_left(r);
        Point { pre: Vec::new(), period }
    }

    pub fn shift(&self) -> Point {
        self.shift_by(1)
    }

    /// The point that reads `head` first and then continues as `self` from
    /// position `head.len()` on.
    pub fn splice(&self, head: &[u64]) -> Point {
        self.shift_by(head.len()).prepend(head)
    }

    /// Same as `self` except at `index`, where the entry is replaced.
    pub fn with_entry(&self, index: usize, value: u64) -> Point {
        let mut head = self.prefix(index + 1);
        head[index] = value;
        self.splice(&head)
    }

    /// Same as `self` except at `index`, where the entry is incremented.
    pub fn bump(&self, index: usize) -> Point {
        self.with_entry(index, self.at(index) + 1)
    }

    /// Agrees with `self` below `len` and with `other` from `len` on.
    pub fn hybrid(&self, len: usize, other: &Point) -> Point {
        other.splice(&self.prefix(len))
    }

    pub fn map(&self, f: impl Fn(u64) -> u64) -> Point {
        let mut p = Point {
            pre: self.pre.iter().map(|&x| f(x)).collect(),
            period: self.period.iter().map(|&x| f(x)).collect(),
        };
        p.canonicalize();
        p
    }

    /// Index after which both points are purely periodic with a common
    /// period, and the length of that common period.
    pub fn joint_window(&self, other: &Point) -> (usize, usize) {
        (self.pre.len().max(other.pre.len()), lcm(self.period.len(), other.period.len()))
    }

    pub fn first_difference(&self, other: &Point) -> Option<usize> {
        let (m, l) = self.joint_window(other);
        (0..m + l).find(|&i| self.at(i) != other.at(i))
    }

    /// Number of positions where the points differ, `None` if infinite.
    pub fn disagreement_count(&self, other: &Point) -> Option<usize> {
        let (m, l) = self.joint_window(other);
        if (m..m + l).any(|i| self.at(i) != other.at(i)) {
            return None;
        }
        Some((0..m).filter(|&i| self.at(i) != other.at(i)).count())
    }

    /// Least `n` with `self(i) = other(i)` for every `i >= n`, if any.
    pub fn agreement_from(&self, other: &Point) -> Option<usize> {
        let (m, l) = self.joint_window(other);
        if (m..m + l).any(|i| self.at(i) != other.at(i)) {
            return None;
        }
        let mut n = m;
        while n > 0 && self.at(n - 1) == other.at(n - 1) {
            n -= 1;
        }
        Some(n)
    }

    /// Largest entry; entries of an eventually periodic point are bounded.
    pub fn max_entry(&self) -> u64 {
        self.pre.iter().chain(self.period.iter()).copied().max().unwrap_or(0)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "<{}>({})^w", join(&self.pre), join(&self.period))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(pre: &[u64], period: &[u64]) -> Point {
        Point::new(pre.to_vec(), period.to_vec()).unwrap()
    }

    #[test]
    fn canonical_forms_coincide() {
        assert_eq!(pt(&[0, 0, 1], &[2, 1, 2, 1]), pt(&[0, 0], &[1, 2]));
        assert_eq!(pt(&[3, 3], &[3]), Point::constant(3));
        assert!(Point::new(vec![1], vec![]).is_err());
    }

    #[test]
    fn splice_and_bump() {
        let g = pt(&[], &[1, 2]);
        let b = g.bump(1);
        assert_eq!(b.prefix(5), vec![1, 3, 1, 2, 1]);
        assert_eq!(b.disagreement_count(&g), Some(1));
        let h = Point::zero().hybrid(2, &Point::constant(1));
        assert_eq!(h, pt(&[0, 0], &[1]));
    }

    #[test]
    fn differences() {
        assert_eq!(Point::zero().first_difference(&Point::constant(1)), Some(0));
        assert_eq!(Point::zero().disagreement_count(&Point::constant(1)), None);
        let a = pt(&[5, 0, 7], &[0]);
        assert_eq!(a.agreement_from(&Point::zero()), Some(3));
        assert_eq!(a.disagreement_count(&Point::zero()), Some(2));
    }

    #[test]
    fn json_roundtrip() {
        let p = pt(&[1, 2], &[0, 3]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"pre":[1,2],"period":[0,3]}"#);
        let q: Point = serde_json::from_str(r#"{"pre":[1,2,0,3],"period":[0,3]}"#).unwrap();
        assert_eq!(p, q);
    }

    fn arb_point() -> impl Strategy<Value = Point> {
        (
            proptest::collection::vec(0u64..4, 0..5),
            proptest::collection::vec(0u64..4, 1..4),
        )
            .prop_map(|(a, b)| Point::new(a, b).unwrap())
    }

    proptest! {
        #[test]
        fn canonicalization_preserves_values(
            pre in proptest::collection::vec(0u64..3, 0..5),
            per in proptest::collection::vec(0u64..3, 1..4),
        ) {
            let p = Point::new(pre.clone(), per.clone()).unwrap();
            for i in 0..30 {
                let raw = if i < pre.len() { pre[i] } else { per[(i - pre.len()) % per.len()] };
                prop_assert_eq!(p.at(i), raw);
            }
        }

        #[test]
        fn shift_then_prepend(p in arb_point()) {
            prop_assert_eq!(p.shift().prepend(&[p.at(0)]), p.clone());
        }

        #[test]
        fn equality_matches_difference(a in arb_point(), b in arb_point()) {
            prop_assert_eq!(a == b, a.first_difference(&b).is_none());
        }
    }
}
