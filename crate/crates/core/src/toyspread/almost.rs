use serde::{Deserialize, Serialize};

use super::{ToyError, ToyPoint};
use crate::seqcore::FinSeq;
use crate::spread::Point;

/// A prefix `s` of the input point and how far the point agrees with the
/// constant continuation of `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlmostWitness {
    pub s: FinSeq,
    pub code: Option<u128>,
    /// `s` continued by repeating its last entry.
    pub dagger: Point,
    pub agreement: u64,
}

/// Given a point of the toy spread of size `n` and a demanded agreement
/// length for every prefix, finds a prefix `s` such that the point agrees
/// with `s` continued constantly for `eps(s)` places.
///
/// The candidates are the prefixes ending at the first occurrence of each
/// value the point takes, tried from the smallest value up; the last one
/// is the point itself, so the search always succeeds.
pub fn almost_enum_witness(n: u64, p: &ToyPoint, eps: &dyn Fn(&FinSeq) -> u64) -> Result<AlmostWitness, ToyError> {
    if n == 0 || p.final_value() >= n {
        return Err(ToyError::NotMember(p.to_string(), n));
    }
    let point = p.to_point();
    let mut values: Vec<u64> = Vec::new();
    if p.at(0) == 0 {
        values.push(0);
    }
    values.extend(p.jumps().iter().map(|&(_, v)| v));
    for v in values {
        let i0 = p.first_index_of(v).expect("value is taken") as usize;
        let s = FinSeq(point.prefix(i0 + 1));
        let dagger = Point::prefix_then_constant(s.as_slice(), v);
        let e = eps(&s);
        if point.prefix(e as usize) == dagger.prefix(e as usize) {
            return Ok(AlmostWitness { code: s.code().ok(), s, dagger, agreement: e });
        }
    }
    unreachable!("the final value always yields the point itself")
}
