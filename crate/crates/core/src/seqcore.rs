//! Finite sequences of naturals, their numeric codes, Cantor pairing and
//! eventually periodic strictly increasing sequences.
//!
//! Codes use the gap encoding: the sequence `s` is sent to the finite set
//! `{s0, s0+s1+1, s0+s1+s2+2, ...}` and that set to the sum of the powers
//! of two it names. This is a bijection between finite sequences and
//! naturals with `code(<>) = 0`; the length of a coded sequence is its
//! popcount. Codes live in `u128`, so a sequence whose entries plus length
//! exceed 128 has no code and reports [`SeqError::CodeOverflow`].

use serde::{Deserialize, Serialize};
use schemars::JsonSchema;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("sequence {0} has no code below 2^128")]
    CodeOverflow(FinSeq),
    #[error("pairing of {0} and {1} overflows u64")]
    PairOverflow(u64, u64),
    #[error("invalid strictly increasing sequence: {0}")]
    InvalidStrictInc(String),
}

/// Cantor pairing `J(m, n) = (m+n)(m+n+1)/2 + n`.
pub fn pair(m: u64, n: u64) -> Result<u64, SeqError> {
    let s = (m as u128) + (n as u128);
    s.checked_mul(s + 1)
        .and_then(|t| u64::try_from(t / 2 + n as u128).ok())
        .ok_or(SeqError::PairOverflow(m, n))
}

/// Inverse of [`pair`]; total on `u64`.
pub fn unpair(z: u64) -> (u64, u64) {
    let z = z as u128;
    // largest w with w(w+1)/2 <= z
    let mut w = (((8 * z + 1) as f64).sqrt() as u128).saturating_sub(1) / 2;
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    let n = z - w * (w + 1) / 2;
    let m = w - n;
    (m as u64, n as u64)
}

/// First projection of the pairing, written `n'` in the Vitali fan rules.
pub fn unpair_first(z: u64) -> u64 {
    unpair(z).0
}

/// A finite sequence of naturals.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FinSeq(pub Vec<u64>);

impl FinSeq {
    pub fn empty() -> Self {
        FinSeq(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn at(&self, i: usize) -> Option<u64> {
        self.0.get(i).copied()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn concat(&self, other: &[u64]) -> FinSeq {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        FinSeq(v)
    }

    pub fn push(&self, n: u64) -> FinSeq {
        self.concat(&[n])
    }

    /// Initial segment of length `n` (or the whole sequence if shorter).
    pub fn restrict(&self, n: usize) -> FinSeq {
        FinSeq(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn code(&self) -> Result<u128, SeqError> {
        encode(&self.0)
    }

    pub fn decode(code: u128) -> FinSeq {
        decode(code)
    }
}

impl From<Vec<u64>> for FinSeq {
    fn from(v: Vec<u64>) -> Self {
        FinSeq(v)
    }
}

impl From<&[u64]> for FinSeq {
    fn from(v: &[u64]) -> Self {
        FinSeq(v.to_vec())
    }
}

impl fmt::Display for FinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ">")
    }
}

pub fn encode(s: &[u64]) -> Result<u128, SeqError> {
    let mut code: u128 = 0;
    let mut pos: u128 = 0;
    for (i, &x) in s.iter().enumerate() {
        pos = if i == 0 { x as u128 } else { pos + x as u128 + 1 };
        if pos >= 128 {
            return Err(SeqError::CodeOverflow(FinSeq(s.to_vec())));
        }
        code |= 1u128 << pos;
    }
    Ok(code)
}

pub fn decode(code: u128) -> FinSeq {
    let mut out = Vec::with_capacity(code.count_ones() as usize);
    let mut prev: Option<u32> = None;
    let mut rest = code;
    while rest != 0 {
        let pos = rest.trailing_zeros();
        rest &= rest - 1;
        out.push(match prev {
            None => pos as u64,
            Some(p) => (pos - p - 1) as u64,
        });
        prev = Some(pos);
    }
    FinSeq(out)
}

/// Length of the coded sequence, read off the code directly.
pub fn coded_len(code: u128) -> usize {
    code.count_ones() as usize
}

pub fn is_prefix(s: &[u64], t: &[u64]) -> bool {
    s.len() <= t.len() && t[..s.len()] == *s
}

pub fn is_strict_prefix(s: &[u64], t: &[u64]) -> bool {
    s.len() < t.len() && is_prefix(s, t)
}

/// Strictly increasing sequence given by an explicit head followed by a
/// repeating block of positive increments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct StrictIncSeq {
    values: Vec<u64>,
    period_increments: Vec<u64>,
}

impl StrictIncSeq {
    pub fn new(values: Vec<u64>, period_increments: Vec<u64>) -> Result<Self, SeqError> {
        let s = StrictIncSeq { values, period_increments };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), SeqError> {
        if self.values.is_empty() {
            return Err(SeqError::InvalidStrictInc("no explicit values".into()));
        }
        if self.period_increments.is_empty() {
            return Err(SeqError::InvalidStrictInc("empty increment block".into()));
        }
        if self.period_increments.contains(&0) {
            return Err(SeqError::InvalidStrictInc("increments must be positive".into()));
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SeqError::InvalidStrictInc("values not strictly increasing".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn period_increments(&self) -> &[u64] {
        &self.period_increments
    }

    pub fn at(&self, n: usize) -> u64 {
        if n < self.values.len() {
            return self.values[n];
        }
        let steps = (n - self.values.len() + 1) as u64;
        let block: u64 = self.period_increments.iter().sum();
        let k = self.period_increments.len() as u64;
        let partial: u64 = self.period_increments[..(steps % k) as usize].iter().sum();
        self.values[self.values.len() - 1] + (steps / k) * block + partial
    }

    /// Whether `v` occurs in the range of the sequence.
    pub fn contains(&self, v: u64) -> bool {
        if self.values.contains(&v) {
            return true;
        }
        let last = *self.values.last().unwrap();
        if v <= last {
            return false;
        }
        let block: u64 = self.period_increments.iter().sum();
        let offset = (v - last) % block;
        let mut acc = 0;
        for &d in &self.period_increments {
            acc += d;
            if acc % block == offset {
                return true;
            }
        }
        false
    }

    /// Least index `p` with `self(p) != other(p)`, searching a window long
    /// enough that agreement there forces agreement everywhere.
    pub fn first_difference(&self, other: &StrictIncSeq) -> Option<usize> {
        let head = self.values.len().max(other.values.len());
        let window = head + 2 * self.period_increments.len() * other.period_increments.len() + 1;
        (0..window).find(|&i| self.at(i) != other.at(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_codes_to_zero() {
        assert_eq!(encode(&[]).unwrap(), 0);
        assert_eq!(decode(0), FinSeq::empty());
    }

    #[test]
    fn small_codes() {
        assert_eq!(encode(&[0]).unwrap(), 1);
        assert_eq!(encode(&[1]).unwrap(), 2);
        assert_eq!(encode(&[0, 0]).unwrap(), 3);
        assert_eq!(decode(5), FinSeq(vec![0, 1]));
    }

    #[test]
    fn concat_and_prefix() {
        let s = FinSeq(vec![2, 5]);
        let t = s.concat(&[7]);
        assert_eq!(t, FinSeq(vec![2, 5, 7]));
        assert!(is_strict_prefix(s.as_slice(), t.as_slice()));
        assert!(is_prefix(t.as_slice(), t.as_slice()));
        assert!(!is_strict_prefix(t.as_slice(), t.as_slice()));
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(encode(&[200]), Err(SeqError::CodeOverflow(_))));
    }

    #[test]
    fn pairing_values() {
        assert_eq!(pair(0, 0).unwrap(), 0);
        assert_eq!(pair(1, 0).unwrap(), 1);
        assert_eq!(pair(0, 1).unwrap(), 2);
        assert_eq!(unpair(4), (1, 1));
        assert!(pair(u64::MAX, 1).is_err());
    }

    #[test]
    fn strict_inc_lookup() {
        let z = StrictIncSeq::new(vec![2, 3, 5], vec![1, 2]).unwrap();
        let head: Vec<u64> = (0..8).map(|i| z.at(i)).collect();
        assert_eq!(head, vec![2, 3, 5, 6, 8, 9, 11, 12]);
        assert!(z.contains(11) && !z.contains(10) && !z.contains(4));
        assert!(StrictIncSeq::new(vec![3, 3], vec![1]).is_err());
        assert!(StrictIncSeq::new(vec![3], vec![0]).is_err());
    }

    proptest! {
        #[test]
        fn code_roundtrip(v in proptest::collection::vec(0u64..12, 0..9)) {
            let c = encode(&v).unwrap();
            prop_assert_eq!(decode(c), FinSeq(v.clone()));
            prop_assert_eq!(coded_len(c), v.len());
        }

        #[test]
        fn decode_encode_roundtrip(c in any::<u64>()) {
            let s = decode(c as u128);
            prop_assert_eq!(encode(s.as_slice()).unwrap(), c as u128);
        }

        #[test]
        fn pair_roundtrip(m in 0u64..1 << 30, n in 0u64..1 << 30) {
            let z = pair(m, n).unwrap();
            prop_assert_eq!(unpair(z), (m, n));
        }

        #[test]
        fn unpair_roundtrip(z in any::<u64>()) {
            let (m, n) = unpair(z);
            prop_assert_eq!(pair(m, n).unwrap(), z);
        }

        #[test]
        fn strict_inc_is_increasing(
            vals in proptest::collection::btree_set(0u64..50, 1..5),
            incs in proptest::collection::vec(1u64..4, 1..4),
        ) {
            let z = StrictIncSeq::new(vals.into_iter().collect(), incs).unwrap();
            for i in 0..30 {
                prop_assert!(z.at(i) < z.at(i + 1));
                prop_assert!(z.contains(z.at(i)));
            }
        }
    }
}
