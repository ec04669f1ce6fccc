//! Syntactic recognition of family instances in raw formulas, up to
//! renaming of bound variables.

use std::collections::HashMap;
use std::sync::OnceLock;

use super::formula::*;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum V {
    Bound(usize),
    Free(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Canon {
    T,
    F,
    Eq(V, V),
    Not(Box<Canon>),
    And(Box<Canon>, Box<Canon>),
    Or(Box<Canon>, Box<Canon>),
    Imp(Box<Canon>, Box<Canon>),
    Ex(Box<Canon>),
    All(Box<Canon>),
}

struct Namer {
    bound: Vec<String>,
    free: Vec<String>,
}

impl Namer {
    fn var(&mut self, name: &str) -> V {
        if let Some(i) = self.bound.iter().rposition(|b| b == name) {
            return V::Bound(i);
        }
        match self.free.iter().position(|f| f == name) {
            Some(i) => V::Free(i),
            None => {
                self.free.push(name.to_string());
                V::Free(self.free.len() - 1)
            }
        }
    }
}

fn canon(f: &Formula, n: &mut Namer) -> Canon {
    let b = |c: Canon| Box::new(c);
    match f {
        Formula::True => Canon::T,
        Formula::False => Canon::F,
        Formula::Eq { left, right } => {
            let l = n.var(left);
            Canon::Eq(l, n.var(right))
        }
        Formula::Not { arg } => Canon::Not(b(canon(arg, n))),
        Formula::And { left, right } => {
            let l = canon(left, n);
            Canon::And(b(l), b(canon(right, n)))
        }
        Formula::Or { left, right } => {
            let l = canon(left, n);
            Canon::Or(b(l), b(canon(right, n)))
        }
        Formula::Implies { left, right } => {
            let l = canon(left, n);
            Canon::Imp(b(l), b(canon(right, n)))
        }
        Formula::Exists { var, body } | Formula::Forall { var, body } => {
            n.bound.push(var.clone());
            let c = canon(body, n);
            n.bound.pop();
            if matches!(f, Formula::Exists { .. }) {
                Canon::Ex(b(c))
            } else {
                Canon::All(b(c))
            }
        }
        Formula::Named { expansion, .. } => canon(expansion, n),
    }
}

#[derive(Clone, Debug)]
enum Template {
    D(u64),
    Apart,
    Closed(Family),
}

const MAX_M: u64 = 6;
const MAX_PQ: u64 = 4;
const MAX_CARD: u64 = 10;

fn table() -> &'static HashMap<Canon, Template> {
    static TABLE: OnceLock<HashMap<Canon, Template>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = HashMap::new();
        let mut add = |fam: Family, tpl: Template| {
            let f = named(fam);
            let c = canon(&f, &mut Namer { bound: vec![], free: vec![] });
            t.entry(c).or_insert(tpl);
        };
        for m in 0..=MAX_M {
            add(Family::D { m, x: "x".into() }, Template::D(m));
            add(Family::Psi { m }, Template::Closed(Family::Psi { m }));
            add(Family::Rho { m }, Template::Closed(Family::Rho { m }));
        }
        add(Family::Apart { x: "x".into(), y: "y".into() }, Template::Apart);
        for p in 0..=MAX_PQ {
            for q in 1..=MAX_PQ {
                add(Family::PsiMany { p, q }, Template::Closed(Family::PsiMany { p, q }));
                add(Family::RhoMany { p, q }, Template::Closed(Family::RhoMany { p, q }));
            }
        }
        for n in 0..=MAX_CARD {
            add(Family::AtLeast { n }, Template::Closed(Family::AtLeast { n }));
        }
        add(Family::DecEq, Template::Closed(Family::DecEq));
        add(Family::Stable, Template::Closed(Family::Stable));
        t
    })
}

/// The family instance `f` spells out, if any.
pub fn match_family(f: &Formula) -> Option<Family> {
    if let Formula::Named { family, .. } = f {
        return Some(family.clone());
    }
    let mut namer = Namer { bound: vec![], free: vec![] };
    let c = canon(f, &mut namer);
    let fam = match table().get(&c)? {
        Template::D(m) => Family::D { m: *m, x: namer.free[0].clone() },
        Template::Apart => Family::Apart { x: namer.free[0].clone(), y: namer.free[1].clone() },
        Template::Closed(fam) => fam.clone(),
    };
    Some(fam)
}

/// Wraps every maximal subformula that spells out a family instance in a
/// `Named` node.
pub fn recognize(f: &Formula) -> Formula {
    if matches!(f, Formula::Named { .. }) {
        return f.clone();
    }
    if !matches!(f, Formula::Eq { .. } | Formula::True | Formula::False) {
        if let Some(family) = match_family(f) {
            return Formula::Named { family, expansion: Box::new(f.clone()) };
        }
    }
    match f {
        Formula::Not { arg } => not(recognize(arg)),
        Formula::And { left, right } => and(recognize(left), recognize(right)),
        Formula::Or { left, right } => or(recognize(left), recognize(right)),
        Formula::Implies { left, right } => implies(recognize(left), recognize(right)),
        Formula::Exists { var, body } => exists(var, recognize(body)),
        Formula::Forall { var, body } => forall(var, recognize(body)),
        other => other.clone(),
    }
}

/// Alpha-equivalence, looking through `Named` nodes.
pub fn alpha_equivalent(a: &Formula, b: &Formula) -> bool {
    let mut na = Namer { bound: vec![], free: vec![] };
    let mut nb = Namer { bound: vec![], free: vec![] };
    canon(a, &mut na) == canon(b, &mut nb) && na.free == nb.free
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_formula;
    use super::*;

    #[test]
    fn decidability_is_recognized() {
        let f = parse_formula("forall y (x=y | ~(x=y))").unwrap();
        assert_eq!(match_family(&f), Some(Family::D { m: 0, x: "x".into() }));
        let g = parse_formula("forall w (q=w | ~(q=w))").unwrap();
        assert_eq!(match_family(&g), Some(Family::D { m: 0, x: "q".into() }));
    }

    #[test]
    fn spelled_out_sentences() {
        for fam in [Family::Psi { m: 2 }, Family::RhoMany { p: 1, q: 2 }, Family::AtLeast { n: 3 }] {
            let raw = parse_formula(&named(fam.clone()).unfold().to_string().replace("_v", "v")).unwrap();
            assert_eq!(match_family(&raw), Some(fam));
        }
    }

    #[test]
    fn apartness_argument_order() {
        let f = parse_formula("forall z (~(z = b) | ~(z = a))").unwrap();
        assert_eq!(match_family(&f), Some(Family::Apart { x: "b".into(), y: "a".into() }));
    }

    #[test]
    fn non_instances() {
        assert_eq!(match_family(&parse_formula("exists x forall y (x = y)").unwrap()), None);
        let r = recognize(&parse_formula("exists x forall y (x=y | ~(x=y))").unwrap());
        assert!(matches!(r, Formula::Named { family: Family::Psi { m: 0 }, .. }));
    }

    #[test]
    fn alpha_equivalence() {
        let a = parse_formula("exists x forall y (x = y)").unwrap();
        let b = parse_formula("exists u forall v (u = v)").unwrap();
        let c = parse_formula("exists u forall v (v = u)").unwrap();
        assert!(alpha_equivalent(&a, &b));
        assert!(!alpha_equivalent(&a, &c));
    }
}
