use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use schemars::JsonSchema;

use super::Point;

/// A decidable predicate on finite sequences.
///
/// `accepts(s)` plays the role of the law returning zero on `s`. A law is a
/// spread-law when the root is accepted exactly if some one-step extension
/// is, and every accepted node has an accepted child; validation checks this
/// on truncations.
pub trait SpreadLaw: Send + Sync {
    fn accepts(&self, s: &[u64]) -> bool;

    /// Upper bound on accepted child indices below `s`, when the law knows one.
    fn child_bound(&self, _s: &[u64]) -> Option<u64> {
        None
    }

    fn describe(&self) -> String;
}

impl fmt::Debug for dyn SpreadLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Accepts every sequence.
#[derive(Clone, Copy, Debug, Default)]
pub struct BaireLaw;

impl SpreadLaw for BaireLaw {
    fn accepts(&self, _s: &[u64]) -> bool {
        true
    }
    fn describe(&self) -> String {
        "baire".into()
    }
}

/// Accepts exactly the initial segments of one point.
#[derive(Clone, Debug)]
pub struct SingletonLaw(pub Point);

impl SpreadLaw for SingletonLaw {
    fn accepts(&self, s: &[u64]) -> bool {
        s.iter().enumerate().all(|(i, &x)| self.0.at(i) == x)
    }
    fn child_bound(&self, s: &[u64]) -> Option<u64> {
        Some(self.0.at(s.len()))
    }
    fn describe(&self) -> String {
        format!("singleton {}", self.0)
    }
}

/// How a table treats sequences longer than its longest listed entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum TableDefault {
    /// Only listed sequences are accepted.
    RejectExtensions,
    /// A longer sequence is accepted when its cut at table depth is listed
    /// and every later entry is zero.
    ExtendZeros,
    /// A longer sequence is accepted when its cut at table depth is listed.
    ExtendAll,
}

#[derive(Clone, Debug)]
pub struct TableLaw {
    accept: BTreeSet<Vec<u64>>,
    default: TableDefault,
    max_len: usize,
}

impl TableLaw {
    pub fn new(accept: impl IntoIterator<Item = Vec<u64>>, default: TableDefault) -> Self {
        let accept: BTreeSet<Vec<u64>> = accept.into_iter().collect();
        let max_len = accept.iter().map(|s| s.len()).max().unwrap_or(0);
        TableLaw { accept, default, max_len }
    }

    pub fn entries(&self) -> impl Iterator<Item = &Vec<u64>> {
        self.accept.iter()
    }

    pub fn default_rule(&self) -> TableDefault {
        self.default
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }
}

impl SpreadLaw for TableLaw {
    fn accepts(&self, s: &[u64]) -> bool {
        if s.len() <= self.max_len {
            return self.accept.contains(s);
        }
        let head_listed = self.accept.contains(&s[..self.max_len]);
        match self.default {
            TableDefault::RejectExtensions => false,
            TableDefault::ExtendZeros => head_listed && s[self.max_len..].iter().all(|&x| x == 0),
            TableDefault::ExtendAll => head_listed,
        }
    }
    fn describe(&self) -> String {
        format!("table with {} entries ({:?})", self.accept.len(), self.default)
    }
}

/// A law given by a closure.
#[derive(Clone)]
pub struct FnLaw {
    name: String,
    f: Arc<dyn Fn(&[u64]) -> bool + Send + Sync>,
}

impl FnLaw {
    pub fn new(name: impl Into<String>, f: impl Fn(&[u64]) -> bool + Send + Sync + 'static) -> Self {
        FnLaw { name: name.into(), f: Arc::new(f) }
    }
}

impl SpreadLaw for FnLaw {
    fn accepts(&self, s: &[u64]) -> bool {
        (self.f)(s)
    }
    fn describe(&self) -> String {
        self.name.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_defaults() {
        let t = |d| TableLaw::new(vec![vec![], vec![1], vec![1, 0]], d);
        let zeros = t(TableDefault::ExtendZeros);
        assert!(zeros.accepts(&[1, 0, 0, 0]));
        assert!(!zeros.accepts(&[1, 0, 2]));
        assert!(!zeros.accepts(&[0]));
        assert!(t(TableDefault::ExtendAll).accepts(&[1, 0, 5]));
        assert!(!t(TableDefault::RejectExtensions).accepts(&[1, 0, 0]));
    }

    #[test]
    fn singleton_prefixes() {
        let l = SingletonLaw(Point::new(vec![2], vec![0]).unwrap());
        assert!(l.accepts(&[2, 0, 0]));
        assert!(!l.accepts(&[2, 1]));
        assert_eq!(l.child_bound(&[2]), Some(0));
    }
}
