use super::expr::RelExpr;
use super::VitaliError;
use crate::seqcore::unpair_first;
use crate::spread::{Point, SpreadLaw};

/// The 0/1 fan attached to a restricted-grammar expression.
///
/// For the Vitali relation it holds the sequences with at most one 1. For
/// the plus of a union it holds the sequences with at most one 1, and the
/// sequences `0^q 1 0^t 1 b` where `b` lies in the fan of the union member
/// numbered by the first coordinate of the pair coded by `q + 1 + t`, the
/// index of the second 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanForRel {
    expr: RelExpr,
}

impl FanForRel {
    pub fn expr(&self) -> &RelExpr {
        &self.expr
    }

    /// Whether an eventually periodic point is a path of the fan.
    pub fn contains(&self, a: &Point) -> bool {
        member(&self.expr, a)
    }
}

fn second_level(expr: &RelExpr) -> Option<&RelExpr> {
    match expr {
        RelExpr::Plus { arg } => Some(arg.as_ref()),
        _ => None,
    }
}

fn accepts(expr: &RelExpr, s: &[u64]) -> bool {
    if s.iter().any(|&x| x > 1) {
        return false;
    }
    let mut ones = s.iter().enumerate().filter(|&(_, &x)| x == 1).map(|(i, _)| i);
    let (Some(_), Some(n)) = (ones.next(), ones.next()) else {
        return true;
    };
    let Some(union) = second_level(expr) else {
        return false;
    };
    match union.child(unpair_first(n as u64) as usize) {
        Some(c) => accepts(&c, &s[n + 1..]),
        None => false,
    }
}

fn member(expr: &RelExpr, a: &Point) -> bool {
    if a.max_entry() > 1 {
        return false;
    }
    let zero = Point::zero();
    let Some(q) = a.first_difference(&zero) else {
        return true;
    };
    let Some(t) = a.shift_by(q + 1).first_difference(&zero) else {
        return true;
    };
    let n = q + 1 + t;
    let Some(union) = second_level(expr) else {
        return false;
    };
    match union.child(unpair_first(n as u64) as usize) {
        Some(c) => member(&c, &a.shift_by(n + 1)),
        None => false,
    }
}

impl SpreadLaw for FanForRel {
    fn accepts(&self, s: &[u64]) -> bool {
        accepts(&self.expr, s)
    }
    fn child_bound(&self, _s: &[u64]) -> Option<u64> {
        Some(1)
    }
    fn describe(&self) -> String {
        format!("fan for {}", self.expr)
    }
}

pub fn fan_for(r: &RelExpr) -> Result<FanForRel, VitaliError> {
    if !r.is_estar() {
        return Err(VitaliError::NotEStar(r.to_string()));
    }
    let expr = match r {
        RelExpr::Tower { i: 0 } => RelExpr::Base,
        other => other.clone(),
    };
    Ok(FanForRel { expr })
}

/// The points differing from `gamma` in at most `i` places.
pub fn within_differences(gamma: &Point, i: usize, a: &Point) -> bool {
    a.disagreement_count(gamma).is_some_and(|c| c <= i)
}

/// The points that, when they first differ from `gamma` at `j`, differ
/// from it in at most `j + 1` places.
pub fn in_omega_neighbourhood(gamma: &Point, a: &Point) -> bool {
    match a.first_difference(gamma) {
        None => true,
        Some(j) => within_differences(gamma, j + 1, a),
    }
}
