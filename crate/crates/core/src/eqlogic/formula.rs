//! Formulas of the pure equality language and the named families built
//! from it.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// A named family instance; each one abbreviates a fixed formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `D_m(x)`; `D_0(x)` says `x` is decidable against every element, and
    /// `D_m(x)` says the same relative to the elements outside all lower
    /// families, with `x` itself outside them.
    D { m: u64, x: String },
    /// `AP(x, y)`: every element is unequal to `x` or unequal to `y`.
    Apart { x: String, y: String },
    /// Some element satisfies `D_m`.
    Psi { m: u64 },
    /// Exactly one element satisfies `D_m`.
    Rho { m: u64 },
    /// `q` pairwise apart elements outside `D_0..D_{p-1}`.
    PsiMany { p: u64, q: u64 },
    /// Exactly `q` pairwise apart elements outside `D_0..D_{p-1}`, and
    /// every such element equals one of them.
    RhoMany { p: u64, q: u64 },
    /// At least `n + 1` pairwise distinct elements.
    AtLeast { n: u64 },
    /// Equality is decidable.
    DecEq,
    /// Equality is stable under double negation.
    Stable,
}

impl Family {
    pub fn is_sentence(&self) -> bool {
        !matches!(self, Family::D { .. } | Family::Apart { .. })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::D { m, x } => write!(f, "D_{m}({x})"),
            Family::Apart { x, y } => write!(f, "AP({x},{y})"),
            Family::Psi { m } => write!(f, "psi[{m}]"),
            Family::Rho { m } => write!(f, "rho[{m}]"),
            Family::PsiMany { p, q } => write!(f, "psi[{p},{q}]"),
            Family::RhoMany { p, q } => write!(f, "rho[{p},{q}]"),
            Family::AtLeast { n } => write!(f, "psi_card[{n}]"),
            Family::DecEq => write!(f, "dec_eq"),
            Family::Stable => write!(f, "stab"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Formula {
    True,
    False,
    Eq { left: String, right: String },
    Not { arg: Box<Formula> },
    And { left: Box<Formula>, right: Box<Formula> },
    Or { left: Box<Formula>, right: Box<Formula> },
    Implies { left: Box<Formula>, right: Box<Formula> },
    Exists { var: String, body: Box<Formula> },
    Forall { var: String, body: Box<Formula> },
    /// A family instance together with its definitional expansion.
    Named { family: Family, expansion: Box<Formula> },
}

pub fn eq(a: &str, b: &str) -> Formula {
    Formula::Eq { left: a.into(), right: b.into() }
}

pub fn not(f: Formula) -> Formula {
    Formula::Not { arg: Box::new(f) }
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And { left: Box::new(a), right: Box::new(b) }
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or { left: Box::new(a), right: Box::new(b) }
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies { left: Box::new(a), right: Box::new(b) }
}

pub fn exists(v: &str, f: Formula) -> Formula {
    Formula::Exists { var: v.into(), body: Box::new(f) }
}

pub fn forall(v: &str, f: Formula) -> Formula {
    Formula::Forall { var: v.into(), body: Box::new(f) }
}

/// Conjunction of a list, `True` when empty.
pub fn conj(fs: Vec<Formula>) -> Formula {
    fs.into_iter().reduce(and).unwrap_or(Formula::True)
}

/// Disjunction of a list, `False` when empty.
pub fn disj(fs: Vec<Formula>) -> Formula {
    fs.into_iter().reduce(or).unwrap_or(Formula::False)
}

/// Source of bound-variable names for expansions. The leading underscore
/// keeps them apart from user identifiers, which cannot start with one.
#[derive(Default)]
pub struct Fresh(usize);

impl Fresh {
    pub fn next(&mut self) -> String {
        self.0 += 1;
        format!("_v{}", self.0)
    }
}

/// `Named` node for `family`, with a freshly generated expansion.
pub fn named(family: Family) -> Formula {
    let expansion = expand(&family, &mut Fresh::default());
    Formula::Named { family, expansion: Box::new(expansion) }
}

fn named_with(family: Family, fresh: &mut Fresh) -> Formula {
    let expansion = expand(&family, fresh);
    Formula::Named { family, expansion: Box::new(expansion) }
}

fn outside_lower(m: u64, x: &str, fresh: &mut Fresh) -> Formula {
    conj((0..m).map(|i| not(named_with(Family::D { m: i, x: x.into() }, fresh))).collect())
}

/// The definitional expansion of a family instance, one level deep: inner
/// family instances stay as `Named` nodes.
pub fn expand(family: &Family, fresh: &mut Fresh) -> Formula {
    match family {
        Family::D { m: 0, x } => {
            let y = fresh.next();
            forall(&y, or(eq(x, &y), not(eq(x, &y))))
        }
        Family::D { m, x } => {
            let y = fresh.next();
            let guard = outside_lower(*m, &y, fresh);
            and(outside_lower(*m, x, fresh), forall(&y, implies(guard, or(eq(x, &y), not(eq(x, &y))))))
        }
        Family::Apart { x, y } => {
            let z = fresh.next();
            forall(&z, or(not(eq(&z, x)), not(eq(&z, y))))
        }
        Family::Psi { m } => {
            let x = fresh.next();
            exists(&x, named_with(Family::D { m: *m, x: x.clone() }, fresh))
        }
        Family::Rho { m } => {
            let x = fresh.next();
            let y = fresh.next();
            let dx = named_with(Family::D { m: *m, x: x.clone() }, fresh);
            let dy = named_with(Family::D { m: *m, x: y.clone() }, fresh);
            exists(&x, and(dx, forall(&y, implies(dy, eq(&y, &x)))))
        }
        Family::PsiMany { p, q } => {
            let xs: Vec<String> = (0..*q).map(|_| fresh.next()).collect();
            let body = many_body(*p, &xs, fresh);
            xs.iter().rev().fold(body, |acc, x| exists(x, acc))
        }
        Family::RhoMany { p, q } => {
            let xs: Vec<String> = (0..*q).map(|_| fresh.next()).collect();
            let z = fresh.next();
            let body = many_body(*p, &xs, fresh);
            let guard = outside_lower(*p, &z, fresh);
            let covered = disj(xs.iter().map(|x| eq(&z, x)).collect());
            let body = and(body, forall(&z, implies(guard, covered)));
            xs.iter().rev().fold(body, |acc, x| exists(x, acc))
        }
        Family::AtLeast { n } => {
            let xs: Vec<String> = (0..=*n).map(|_| fresh.next()).collect();
            let mut parts = Vec::new();
            for i in 0..xs.len() {
                for j in i + 1..xs.len() {
                    parts.push(not(eq(&xs[i], &xs[j])));
                }
            }
            xs.iter().rev().fold(conj(parts), |acc, x| exists(x, acc))
        }
        Family::DecEq => {
            let (x, y) = (fresh.next(), fresh.next());
            forall(&x, forall(&y, or(eq(&x, &y), not(eq(&x, &y)))))
        }
        Family::Stable => {
            let (x, y) = (fresh.next(), fresh.next());
            forall(&x, forall(&y, implies(not(not(eq(&x, &y))), eq(&x, &y))))
        }
    }
}

fn many_body(p: u64, xs: &[String], fresh: &mut Fresh) -> Formula {
    let mut parts = Vec::new();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            parts.push(named_with(Family::Apart { x: xs[i].clone(), y: xs[j].clone() }, fresh));
        }
    }
    for x in xs {
        parts.push(outside_lower(p, x, fresh));
    }
    conj(parts)
}

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq { left, right } => {
                for v in [left, right] {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
            Formula::Not { arg } => arg.collect_free(bound, out),
            Formula::And { left, right } | Formula::Or { left, right } | Formula::Implies { left, right } => {
                left.collect_free(bound, out);
                right.collect_free(bound, out);
            }
            Formula::Exists { var, body } | Formula::Forall { var, body } => {
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Formula::Named { expansion, .. } => expansion.collect_free(bound, out),
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Maximal nesting of quantifiers, counting through expansions.
    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Eq { .. } => 0,
            Formula::Not { arg } => arg.quantifier_rank(),
            Formula::And { left, right } | Formula::Or { left, right } | Formula::Implies { left, right } => {
                left.quantifier_rank().max(right.quantifier_rank())
            }
            Formula::Exists { body, .. } | Formula::Forall { body, .. } => 1 + body.quantifier_rank(),
            Formula::Named { expansion, .. } => expansion.quantifier_rank(),
        }
    }

    /// The formula with every `Named` node replaced by its expansion.
    pub fn unfold(&self) -> Formula {
        match self {
            Formula::Named { expansion, .. } => expansion.unfold(),
            Formula::Not { arg } => not(arg.unfold()),
            Formula::And { left, right } => and(left.unfold(), right.unfold()),
            Formula::Or { left, right } => or(left.unfold(), right.unfold()),
            Formula::Implies { left, right } => implies(left.unfold(), right.unfold()),
            Formula::Exists { var, body } => exists(var, body.unfold()),
            Formula::Forall { var, body } => forall(var, body.unfold()),
            f => f.clone(),
        }
    }
}

fn needs_parens(f: &Formula) -> bool {
    matches!(f, Formula::And { .. } | Formula::Or { .. } | Formula::Implies { .. })
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Eq { left, right } => write!(f, "{left} = {right}"),
            Formula::Not { arg } => {
                if matches!(**arg, Formula::Eq { .. }) {
                    write!(f, "~({arg})")
                } else {
                    write!(f, "~{arg}")
                }
            }
            Formula::And { left, right } => write!(f, "({left} & {right})"),
            Formula::Or { left, right } => write!(f, "({left} | {right})"),
            Formula::Implies { left, right } => write!(f, "({left} -> {right})"),
            Formula::Exists { var, body } | Formula::Forall { var, body } => {
                let q = if matches!(self, Formula::Exists { .. }) { "exists" } else { "forall" };
                if needs_parens(body) || matches!(**body, Formula::Exists { .. } | Formula::Forall { .. }) {
                    write!(f, "{q} {var} {body}")
                } else {
                    write!(f, "{q} {var} ({body})")
                }
            }
            Formula::Named { family, .. } => write!(f, "{family}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansions_are_closed_where_expected() {
        for fam in [
            Family::Psi { m: 2 },
            Family::Rho { m: 1 },
            Family::PsiMany { p: 1, q: 3 },
            Family::RhoMany { p: 2, q: 2 },
            Family::AtLeast { n: 3 },
            Family::DecEq,
            Family::Stable,
        ] {
            assert!(named(fam.clone()).is_sentence(), "{fam}");
        }
        let d = named(Family::D { m: 2, x: "x".into() });
        assert_eq!(d.free_vars().into_iter().collect::<Vec<_>>(), vec!["x".to_string()]);
    }

    #[test]
    fn ranks() {
        assert_eq!(named(Family::AtLeast { n: 4 }).quantifier_rank(), 5);
        assert_eq!(named(Family::D { m: 0, x: "x".into() }).quantifier_rank(), 1);
        assert_eq!(named(Family::D { m: 1, x: "x".into() }).quantifier_rank(), 2);
    }

    #[test]
    fn display() {
        let f = exists("x", forall("y", or(eq("x", "y"), not(eq("x", "y")))));
        assert_eq!(f.to_string(), "exists x forall y (x = y | ~(x = y))");
    }
}
