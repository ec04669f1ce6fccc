use serde::{Deserialize, Serialize};
use schemars::JsonSchema;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::RefuterError;

/// What a continuity argument hands back for a uniform claim: a prefix
/// length `p` and a bound `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, JsonSchema)]
pub struct Modulus {
    pub p: u64,
    pub n: u64,
}

impl Modulus {
    pub fn new(p: u64, n: u64) -> Self {
        Modulus { p, n }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum QueryTag {
    /// Modulus fixed by the caller rather than asked for.
    Given,
    /// Claim that one more difference does not leave the tower level.
    Tower,
    /// Claim that the omega neighbourhood sits in the omega relation; the
    /// bound is read as the tower level.
    Omega,
    /// Claim that the fan lies in the finiteness notion.
    FinFirst,
    /// Claim that past the first 1 the fan picks a union member; the bound
    /// is read as the member index.
    FinSecond,
}

impl QueryTag {
    pub fn name(self) -> &'static str {
        match self {
            QueryTag::Given => "given",
            QueryTag::Tower => "tower",
            QueryTag::Omega => "omega",
            QueryTag::FinFirst => "fin-first",
            QueryTag::FinSecond => "fin-second",
        }
    }
}

impl FromStr for QueryTag {
    type Err = RefuterError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [QueryTag::Given, QueryTag::Tower, QueryTag::Omega, QueryTag::FinFirst, QueryTag::FinSecond]
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| RefuterError::BadStrategy(format!("unknown query tag {s}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, JsonSchema)]
pub struct Query {
    pub tag: QueryTag,
    pub level: u64,
}

impl Query {
    pub fn new(tag: QueryTag, level: u64) -> Self {
        Query { tag, level }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.tag.name(), self.level)
    }
}

/// Answers the claims a refuter asks about. `None` means no answer.
pub trait ProverStrategy {
    fn answer(&self, q: &Query) -> Option<Modulus>;
}

impl<F: Fn(&Query) -> Option<Modulus>> ProverStrategy for F {
    fn answer(&self, q: &Query) -> Option<Modulus> {
        self(q)
    }
}

/// A table of answers keyed by `tag:level` or by `tag` alone (any level),
/// with an optional fallback.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScriptStrategy {
    exact: BTreeMap<Query, Modulus>,
    per_tag: BTreeMap<QueryTag, Modulus>,
    default: Option<Modulus>,
}

impl ScriptStrategy {
    pub fn constant(m: Modulus) -> Self {
        ScriptStrategy { default: Some(m), ..Default::default() }
    }

    pub fn with(mut self, q: Query, m: Modulus) -> Self {
        self.exact.insert(q, m);
        self
    }

    pub fn with_tag(mut self, tag: QueryTag, m: Modulus) -> Self {
        self.per_tag.insert(tag, m);
        self
    }

    pub fn without_default(mut self) -> Self {
        self.default = None;
        self
    }

    pub fn default_answer(&self) -> Option<Modulus> {
        self.default
    }

    /// Reads a JSON object whose keys are `default`, `tag` or `tag:level`
    /// and whose values are moduli, e.g.
    /// `{"default": {"p": 2, "n": 2}, "tower:0": {"p": 5, "n": 1}}`.
    pub fn from_json(src: &str) -> Result<Self, RefuterError> {
        let raw: BTreeMap<String, Modulus> =
            serde_json::from_str(src).map_err(|e| RefuterError::BadStrategy(e.to_string()))?;
        let mut s = ScriptStrategy::default();
        for (k, m) in raw {
            if k == "default" {
                s.default = Some(m);
            } else if let Some((tag, level)) = k.split_once(':') {
                let level = level.parse().map_err(|_| RefuterError::BadStrategy(format!("bad level in {k}")))?;
                s.exact.insert(Query::new(tag.parse()?, level), m);
            } else {
                s.per_tag.insert(k.parse()?, m);
            }
        }
        Ok(s)
    }
}

impl ProverStrategy for ScriptStrategy {
    fn answer(&self, q: &Query) -> Option<Modulus> {
        self.exact.get(q).or_else(|| self.per_tag.get(&q.tag)).copied().or(self.default)
    }
}
