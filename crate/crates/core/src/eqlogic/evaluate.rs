//! Closed-form evaluation of recognized sentences over toy spreads and
//! their sums.
//!
//! Each family sentence is a statement about how many points have a given
//! Cantor-Bendixson rank, and those counts add up over the components of a
//! sum: a toy component of size `k` has no point of rank at least `p` when
//! `k <= p`, exactly one when `k = p + 1`, and infinitely many otherwise.

use serde::{Deserialize, Serialize};
use std::fmt;

use super::formula::{Family, Formula};
use super::recognize::recognize;
use super::EqLogicError;
use crate::toyspread::{Card, SumDescriptor};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    NegHolds,
    Unsupported(String),
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Holds
        } else {
            Verdict::NegHolds
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "holds"),
            Verdict::NegHolds => write!(f, "negation holds"),
            Verdict::Unsupported(why) => write!(f, "unsupported: {why}"),
        }
    }
}

/// Rank counts a structure exposes to the family reading.
pub(crate) trait RankCounts {
    fn at_least(&self, p: u64) -> Result<Card, EqLogicError>;
    fn exactly(&self, p: u64) -> Result<Card, EqLogicError>;
}

/// Evaluates the propositional skeleton over recognized family sentences.
/// A verdict is only produced when each leaf is decided; the connectives
/// then combine them in an intuitionistically sound way.
pub(crate) fn eval_skeleton(
    f: &Formula,
    leaf: &dyn Fn(&Family) -> Result<Verdict, EqLogicError>,
) -> Result<Verdict, EqLogicError> {
    use Verdict::*;
    Ok(match f {
        Formula::True => Holds,
        Formula::False => NegHolds,
        Formula::Named { family, .. } if family.is_sentence() => leaf(family)?,
        Formula::Not { arg } => match eval_skeleton(arg, leaf)? {
            Holds => NegHolds,
            NegHolds => Holds,
            u => u,
        },
        Formula::And { left, right } => match (eval_skeleton(left, leaf)?, eval_skeleton(right, leaf)?) {
            (NegHolds, _) | (_, NegHolds) => NegHolds,
            (Holds, Holds) => Holds,
            (Unsupported(u), _) | (_, Unsupported(u)) => Unsupported(u),
        },
        Formula::Or { left, right } => match (eval_skeleton(left, leaf)?, eval_skeleton(right, leaf)?) {
            (Holds, _) | (_, Holds) => Holds,
            (NegHolds, NegHolds) => NegHolds,
            (Unsupported(u), _) | (_, Unsupported(u)) => Unsupported(u),
        },
        Formula::Implies { left, right } => match (eval_skeleton(left, leaf)?, eval_skeleton(right, leaf)?) {
            (NegHolds, _) | (_, Holds) => Holds,
            (Holds, NegHolds) => NegHolds,
            (Unsupported(u), _) | (_, Unsupported(u)) => Unsupported(u),
        },
        other => Unsupported(format!("no recognized family in {other}")),
    })
}

pub(crate) fn family_verdict(family: &Family, counts: &dyn RankCounts) -> Result<Verdict, EqLogicError> {
    let v = match family {
        Family::Psi { m } => counts.exactly(*m)?.at_least(1),
        Family::Rho { m } => counts.exactly(*m)?.is(1),
        Family::PsiMany { p, q } => counts.at_least(*p)?.at_least(*q),
        Family::RhoMany { p, q } => counts.at_least(*p)?.is(*q),
        Family::AtLeast { n } => counts.at_least(0)?.at_least(n + 1),
        Family::DecEq => counts.at_least(1)?.is(0),
        Family::Stable => true,
        Family::D { .. } | Family::Apart { .. } => {
            return Ok(Verdict::Unsupported(format!("{family} has free variables")));
        }
    };
    Ok(Verdict::from_bool(v))
}

struct ClosedForm(crate::toyspread::Components);

impl RankCounts for ClosedForm {
    fn at_least(&self, p: u64) -> Result<Card, EqLogicError> {
        Ok(self.0.rank_at_least(p))
    }
    fn exactly(&self, p: u64) -> Result<Card, EqLogicError> {
        Ok(self.0.rank_exactly(p))
    }
}

/// Decides a sentence built from family sentences over a sum descriptor.
pub fn evaluate(f: &Formula, structure: &SumDescriptor) -> Verdict {
    if !f.is_sentence() {
        return Verdict::Unsupported("formula has free variables".into());
    }
    let Some(components) = structure.components() else {
        return Verdict::Unsupported(format!("no closed form for {structure}"));
    };
    let counts = ClosedForm(components);
    let f = recognize(f);
    eval_skeleton(&f, &|fam| family_verdict(fam, &counts)).unwrap_or_else(|e| Verdict::Unsupported(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_sentence;
    use super::*;
    use crate::seqcore::StrictIncSeq;
    use crate::spread::Point;
    use crate::toyspread::SeqIndex;

    fn ev(src: &str, d: &SumDescriptor) -> Verdict {
        evaluate(&parse_sentence(src).unwrap(), d)
    }

    #[test]
    fn toy_table() {
        let t3 = SumDescriptor::Toy { n: 3 };
        assert_eq!(ev("psi[2]", &t3), Verdict::Holds);
        assert_eq!(ev("rho[2]", &t3), Verdict::Holds);
        assert_eq!(ev("rho[1]", &t3), Verdict::NegHolds);
        assert_eq!(ev("psi[3]", &t3), Verdict::NegHolds);
        assert_eq!(ev("~rho[1] & psi[1]", &t3), Verdict::Holds);
    }

    #[test]
    fn products() {
        let d = SumDescriptor::Product { n: 2, m: 3 };
        assert_eq!(ev("psi[2,2]", &d), Verdict::Holds);
        assert_eq!(ev("rho[2,2]", &d), Verdict::Holds);
        assert_eq!(ev("rho[2,3]", &d), Verdict::NegHolds);
        assert_eq!(ev("rho[1,2]", &d), Verdict::NegHolds);
        let w = SumDescriptor::OmegaProduct { m: 2 };
        assert_eq!(ev("psi[1,7]", &w), Verdict::Holds);
        assert_eq!(ev("psi[2,1]", &w), Verdict::NegHolds);
    }

    #[test]
    fn sequence_sums() {
        let a = SumDescriptor::SeqSum { alpha: SeqIndex::Periodic(Point::new(vec![2, 3], vec![0]).unwrap()) };
        // the copy of T_3 contributes infinitely many rank-1 points
        assert_eq!(ev("rho[1]", &a), Verdict::NegHolds);
        assert_eq!(ev("rho[2]", &a), Verdict::Holds);
        let z = SumDescriptor::SeqSum { alpha: SeqIndex::Increasing(StrictIncSeq::new(vec![2], vec![1]).unwrap()) };
        assert_eq!(ev("psi[5] & ~rho[5]", &z), Verdict::Holds);
    }

    #[test]
    fn other_families() {
        assert_eq!(ev("psi_card[6]", &SumDescriptor::Product { n: 7, m: 1 }), Verdict::Holds);
        assert_eq!(ev("psi_card[7]", &SumDescriptor::Product { n: 7, m: 1 }), Verdict::NegHolds);
        assert_eq!(ev("dec_eq", &SumDescriptor::Product { n: 7, m: 1 }), Verdict::Holds);
        assert_eq!(ev("dec_eq", &SumDescriptor::Toy { n: 2 }), Verdict::NegHolds);
        assert_eq!(ev("stab", &SumDescriptor::Toy { n: 2 }), Verdict::Holds);
    }

    #[test]
    fn unsupported_cases() {
        let fan = SumDescriptor::ClosureFan { alpha: Point::constant(2) };
        assert!(matches!(ev("psi[1]", &fan), Verdict::Unsupported(_)));
        assert!(matches!(ev("exists x forall y (x = y)", &SumDescriptor::Toy { n: 2 }), Verdict::Unsupported(_)));
    }

    #[test]
    fn verdict_json() {
        assert_eq!(serde_json::to_string(&Verdict::Holds).unwrap(), r#"{"verdict":"holds"}"#);
        assert_eq!(
            serde_json::to_string(&Verdict::Unsupported("x".into())).unwrap(),
            r#"{"verdict":"unsupported","detail":"x"}"#
        );
    }
}
