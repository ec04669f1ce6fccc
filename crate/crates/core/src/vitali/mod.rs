//! The Vitali relation and its extensions, decided on eventually periodic
//! points.
//!
//! On such points every relation here is decidable, and the plus operator
//! unfolds to "eventually agree, or already related". Extensions therefore
//! all coincide with the Vitali relation pointwise; the differences between
//! them only show up against continuity, which is the business of the
//! refuter module.

mod expr;
mod fan;

pub use expr::{iterate_plus, parse_relexpr, plus, union, Generator, RelExpr, UNION_PREFIX};
pub use fan::{fan_for, in_omega_neighbourhood, within_differences, FanForRel};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spread::Point;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VitaliError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0} is not built from the Vitali relation by plus and unions")]
    NotInE(String),
    #[error("{0} is neither the Vitali relation nor the plus of a union of such")]
    NotEStar(String),
    #[error("the points do not eventually agree")]
    NotVitaliEquivalent,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}

fn eventually_agree(a: &Point, b: &Point) -> bool {
    a.agreement_from(b).is_some()
}

/// Decides `a r b`. Unions consult their explicit members only.
pub fn decide(r: &RelExpr, a: &Point, b: &Point) -> bool {
    match r {
        RelExpr::Base | RelExpr::NegNeg | RelExpr::Tower { .. } | RelExpr::OmegaTower => eventually_agree(a, b),
        RelExpr::Plus { arg } => eventually_agree(a, b) || decide(arg, a, b),
        RelExpr::Union { children, .. } => children.iter().any(|c| decide(c, a, b)),
        RelExpr::Almost => a.disagreement_count(b).is_some(),
    }
}

/// The first explicit member of a union relating the points.
pub fn firing_child(r: &RelExpr, a: &Point, b: &Point) -> Option<usize> {
    match r {
        RelExpr::Union { children, .. } => children.iter().position(|c| decide(c, a, b)),
        _ => None,
    }
}

/// `a r 0`, the finiteness notion attached to `r`.
pub fn fin_member(r: &RelExpr, a: &Point) -> bool {
    decide(r, a, &Point::zero())
}

/// An expression of the restricted grammar containing `r`.
pub fn embed_in_estar(r: &RelExpr) -> Result<RelExpr, VitaliError> {
    if !r.in_e() {
        return Err(VitaliError::NotInE(r.to_string()));
    }
    Ok(embed(&r.desugar()))
}

fn embed(r: &RelExpr) -> RelExpr {
    match r {
        RelExpr::Base => RelExpr::Base,
        RelExpr::Plus { arg } => plus(union(vec![embed(arg)])),
        RelExpr::Union { children, generator } => {
            let generator = match generator {
                // embeds of an iterated plus chain form a wrapped chain
                Generator::IteratedPlus => Generator::WrappedPlus,
                g => *g,
            };
            plus(RelExpr::Union { children: children.iter().map(embed).collect(), generator })
        }
        other => unreachable!("desugared member of E: {other}"),
    }
}

fn transitive_by_construction(r: &RelExpr) -> bool {
    match r {
        RelExpr::Base | RelExpr::Tower { i: 0 } | RelExpr::OmegaTower => true,
        RelExpr::Union { children, generator: Generator::IteratedPlus } => {
            !children.is_empty()
                && transitive_by_construction(&children[0])
                && children.iter().enumerate().all(|(k, c)| *c == iterate_plus(children[0].clone(), k as u64))
        }
        _ => false,
    }
}

/// The union of the plus chain over `r`. Only accepted for relations known
/// to be transitive: the Vitali relation and earlier outputs.
pub fn transitive_closure_expr(r: &RelExpr) -> Result<RelExpr, VitaliError> {
    if !r.in_e() {
        return Err(VitaliError::NotInE(r.to_string()));
    }
    if !transitive_by_construction(r) {
        return Err(VitaliError::PreconditionFailed(format!("{r} is not known to be transitive")));
    }
    Ok(RelExpr::Union {
        children: (0..UNION_PREFIX as u64).map(|k| iterate_plus(r.clone(), k)).collect(),
        generator: Generator::IteratedPlus,
    })
}

pub fn shift(a: &Point) -> Point {
    a.shift()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassEquality {
    Equal,
    NotEqual,
}

/// Equality inside one Vitali class: only the places before the two points
/// start to agree for good need checking.
pub fn decidable_equality_on_class(gamma: &Point, a: &Point) -> Result<ClassEquality, VitaliError> {
    let m = gamma.agreement_from(a).ok_or(VitaliError::NotVitaliEquivalent)?;
    Ok(if gamma.prefix(m) == a.prefix(m) { ClassEquality::Equal } else { ClassEquality::NotEqual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(pre: &[u64], period: &[u64]) -> Point {
        Point::new(pre.to_vec(), period.to_vec()).unwrap()
    }

    #[test]
    fn base_and_almost() {
        assert!(decide(&RelExpr::Base, &pt(&[1], &[0]), &Point::zero()));
        assert!(!decide(&RelExpr::Base, &pt(&[], &[0, 1]), &Point::zero()));
        assert!(!decide(&RelExpr::Almost, &pt(&[], &[0, 1]), &Point::zero()));
        // the preperiod only changes finitely many places
        assert!(decide(&RelExpr::Base, &pt(&[5, 1], &[2, 1]), &pt(&[], &[2, 1])));
    }

    #[test]
    fn fin() {
        assert!(fin_member(&RelExpr::OmegaTower, &pt(&[3, 0, 7], &[0])));
        assert!(!fin_member(&RelExpr::Base, &Point::constant(1)));
    }

    #[test]
    fn embedding_examples() {
        assert_eq!(embed_in_estar(&RelExpr::Base).unwrap(), RelExpr::Base);
        assert_eq!(embed_in_estar(&plus(RelExpr::Base)).unwrap(), plus(union(vec![RelExpr::Base])));
        let w = embed_in_estar(&RelExpr::OmegaTower).unwrap();
        assert!(w.is_estar());
        assert!(matches!(embed_in_estar(&RelExpr::Almost), Err(VitaliError::NotInE(_))));
    }

    #[test]
    fn closure() {
        let t = transitive_closure_expr(&RelExpr::Base).unwrap();
        assert_eq!(t, RelExpr::OmegaTower.desugar());
        assert_eq!(t.child(3), Some(RelExpr::Tower { i: 3 }.desugar()));
        assert!(transitive_closure_expr(&t).is_ok());
        assert!(matches!(transitive_closure_expr(&plus(RelExpr::Base)), Err(VitaliError::PreconditionFailed(_))));
        assert!(matches!(transitive_closure_expr(&RelExpr::NegNeg), Err(VitaliError::NotInE(_))));
    }

    #[test]
    fn shift_drops_the_head() {
        assert_eq!(shift(&pt(&[5], &[0])), Point::zero());
    }

    #[test]
    fn class_equality() {
        let z = Point::zero();
        assert_eq!(decidable_equality_on_class(&z, &z), Ok(ClassEquality::Equal));
        assert_eq!(decidable_equality_on_class(&z, &pt(&[1], &[0])), Ok(ClassEquality::NotEqual));
        assert_eq!(decidable_equality_on_class(&z, &Point::constant(1)), Err(VitaliError::NotVitaliEquivalent));
    }
}
