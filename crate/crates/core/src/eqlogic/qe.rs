//! Classical truth of pure equality sentences in an infinite model.
//!
//! Quantifiers range over equality types: an existential over `y`, given
//! the classes of the variables already in scope, either puts `y` into one
//! of those classes or into a fresh one, and an infinite model always has
//! a fresh element. This is exact for every infinite model, whatever the
//! quantifier rank.

use super::formula::Formula;
use super::EqLogicError;

fn holds(f: &Formula, env: &mut Vec<(String, usize)>, classes: usize) -> Result<bool, EqLogicError> {
    let lookup = |env: &Vec<(String, usize)>, v: &str| {
        env.iter().rev().find(|(n, _)| n == v).map(|&(_, c)| c).ok_or_else(|| EqLogicError::Scope(v.to_string()))
    };
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Eq { left, right } => lookup(env, left)? == lookup(env, right)?,
        Formula::Not { arg } => !holds(arg, env, classes)?,
        Formula::And { left, right } => holds(left, env, classes)? && holds(right, env, classes)?,
        Formula::Or { left, right } => holds(left, env, classes)? || holds(right, env, classes)?,
        Formula::Implies { left, right } => !holds(left, env, classes)? || holds(right, env, classes)?,
        Formula::Exists { var, body } | Formula::Forall { var, body } => {
            let want = matches!(f, Formula::Exists { .. });
            for c in 0..=classes {
                env.push((var.clone(), c));
                let r = holds(body, env, classes.max(c + 1));
                env.pop();
                if r? == want {
                    return Ok(want);
                }
            }
            !want
        }
        Formula::Named { expansion, .. } => holds(expansion, env, classes)?,
    })
}

/// Decides a sentence in the infinite model with decidable equality.
pub fn qe_decide(f: &Formula) -> Result<bool, EqLogicError> {
    holds(f, &mut Vec::new(), 0)
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_sentence;
    use super::*;

    fn qe(src: &str) -> bool {
        qe_decide(&parse_sentence(src).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        assert!(!qe("exists x forall y (x = y)"));
        assert!(qe("psi_card[5]"));
        assert!(qe("forall x exists y ~(x = y)"));
        assert!(qe("dec_eq & stab"));
        assert!(qe("psi[0]"));
        assert!(!qe("psi[1]"));
        assert!(qe("psi[0,3]"));
    }
}
