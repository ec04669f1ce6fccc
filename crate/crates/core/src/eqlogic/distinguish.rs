use serde::{Deserialize, Serialize};

use super::evaluate::{evaluate, Verdict};
use super::formula::{named, Family};
use super::oracle::oracle_evaluate;
use super::EqLogicError;
use crate::seqcore::StrictIncSeq;
use crate::toyspread::{SeqIndex, SumDescriptor};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideReport {
    pub closed_form: Verdict,
    /// Truncation verdict, or the reason it was not reached.
    pub oracle: Result<Verdict, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinguishReport {
    pub sentence: String,
    pub family: Family,
    /// Least index where the two sequences differ.
    pub index: usize,
    pub zeta_value: u64,
    pub eta_value: u64,
    /// The side whose value at `index` is smaller, where the sentence is
    /// meant to hold: `"zeta"` or `"eta"`.
    pub expected_holds_on: String,
    pub zeta: SideReport,
    pub eta: SideReport,
    /// Both evaluators give `holds` on the expected side and `negation
    /// holds` on the other.
    pub confirmed: bool,
}

fn side(desc: &SumDescriptor, family: &Family, depth: usize) -> SideReport {
    let f = named(family.clone());
    SideReport {
        closed_form: evaluate(&f, desc),
        oracle: oracle_evaluate(&f, desc, depth).map_err(|e| e.to_string()),
    }
}

/// Candidate sentence separating the infinite sums indexed by two distinct
/// strictly increasing sequences: with `p` their first difference and `k`
/// the smaller of the two values there, the sentence saying there is
/// exactly one point of rank `k - 1`. Both evaluators are run on both sums
/// and the report says whether they confirm the separation.
pub fn distinguish(zeta: &StrictIncSeq, eta: &StrictIncSeq, depth: usize) -> Result<DistinguishReport, EqLogicError> {
    let p = zeta.first_difference(eta).ok_or(EqLogicError::NotApart)?;
    let (zv, ev) = (zeta.at(p), eta.at(p));
    let k = zv.min(ev);
    if k == 0 {
        return Err(EqLogicError::Unsupported("the smaller value at the first difference is 0".into()));
    }
    let family = Family::Rho { m: k - 1 };
    let zd = SumDescriptor::SeqSum { alpha: SeqIndex::Increasing(zeta.clone()) };
    let ed = SumDescriptor::SeqSum { alpha: SeqIndex::Increasing(eta.clone()) };
    let zeta_side = side(&zd, &family, depth);
    let eta_side = side(&ed, &family, depth);
    let (yes, no) = if zv < ev { (&zeta_side, &eta_side) } else { (&eta_side, &zeta_side) };
    let confirmed = yes.closed_form == Verdict::Holds
        && no.closed_form == Verdict::NegHolds
        && yes.oracle == Ok(Verdict::Holds)
        && no.oracle == Ok(Verdict::NegHolds);
    Ok(DistinguishReport {
        sentence: family.to_string(),
        family,
        index: p,
        zeta_value: zv,
        eta_value: ev,
        expected_holds_on: if zv < ev { "zeta".into() } else { "eta".into() },
        zeta: zeta_side,
        eta: eta_side,
        confirmed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn picks_the_first_difference() {
        let z = StrictIncSeq::new(vec![2, 3, 5], vec![1]).unwrap();
        let e = StrictIncSeq::new(vec![2, 4, 5], vec![1]).unwrap();
        let r = distinguish(&z, &e, 8).unwrap();
        assert_eq!(r.index, 1);
        assert_eq!(r.sentence, "rho[2]");
        assert_eq!(r.expected_holds_on, "zeta");
        let swapped = distinguish(&e, &z, 8).unwrap();
        assert_eq!(swapped.sentence, r.sentence);
        assert_eq!(swapped.expected_holds_on, "eta");
        assert_eq!(swapped.zeta, r.eta);
    }

    #[test]
    fn equal_sequences_are_rejected() {
        let z = StrictIncSeq::new(vec![1], vec![1]).unwrap();
        assert_eq!(distinguish(&z, &z, 8), Err(EqLogicError::NotApart));
    }

    #[test]
    fn sums_over_increasing_sequences_are_not_separated() {
        // Larger components contribute infinitely many points of every
        // lower rank, so the sentence fails on both sides.
        let z = StrictIncSeq::new(vec![2, 3, 5], vec![1]).unwrap();
        let e = StrictIncSeq::new(vec![2, 4, 5], vec![1]).unwrap();
        let r = distinguish(&z, &e, 9).unwrap();
        assert_eq!(r.zeta.closed_form, Verdict::NegHolds);
        assert_eq!(r.eta.closed_form, Verdict::NegHolds);
        assert_eq!(r.zeta.oracle, Ok(Verdict::NegHolds));
        assert!(!r.confirmed);
    }
}
