use serde::{Deserialize, Serialize};
use schemars::JsonSchema;
use std::fmt;

use super::VitaliError;

/// Children of a union beyond the explicit list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    /// Child `i` is `children[i mod len]`.
    #[default]
    Cycle,
    /// Each child is the plus of the previous one.
    IteratedPlus,
    /// Each child is the plus of the union of the previous one alone.
    WrappedPlus,
}

/// Default number of explicit children written out for schematic unions.
pub const UNION_PREFIX: usize = 8;

/// A relation on Baire space built from the Vitali relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum RelExpr {
    Base,
    Plus {
        arg: Box<RelExpr>,
    },
    Union {
        children: Vec<RelExpr>,
        #[serde(default)]
        generator: Generator,
    },
    NegNeg,
    Almost,
    Tower {
        i: u64,
    },
    OmegaTower,
}

pub fn plus(r: RelExpr) -> RelExpr {
    RelExpr::Plus { arg: Box::new(r) }
}

pub fn union(rs: Vec<RelExpr>) -> RelExpr {
    RelExpr::Union { children: rs, generator: Generator::Cycle }
}

/// `plus` applied `k` times.
pub fn iterate_plus(r: RelExpr, k: u64) -> RelExpr {
    (0..k).fold(r, |acc, _| plus(acc))
}

fn wrap(r: RelExpr) -> RelExpr {
    plus(union(vec![r]))
}

impl RelExpr {
    /// Replaces towers by the plus chains and unions they stand for.
    pub fn desugar(&self) -> RelExpr {
        match self {
            RelExpr::Tower { i } => iterate_plus(RelExpr::Base, *i),
            RelExpr::OmegaTower => RelExpr::Union {
                children: (0..UNION_PREFIX as u64).map(|i| iterate_plus(RelExpr::Base, i)).collect(),
                generator: Generator::IteratedPlus,
            },
            RelExpr::Plus { arg } => plus(arg.desugar()),
            RelExpr::Union { children, generator } => {
                RelExpr::Union { children: children.iter().map(RelExpr::desugar).collect(), generator: *generator }
            }
            other => other.clone(),
        }
    }

    /// The `i`-th member of a union, following the generator past the
    /// explicit list. `None` for anything but a non-empty union.
    pub fn child(&self, i: usize) -> Option<RelExpr> {
        let RelExpr::Union { children, generator } = self else {
            return None;
        };
        let len = children.len();
        if len == 0 {
            return None;
        }
        if i < len {
            return Some(children[i].clone());
        }
        let last = children[len - 1].clone();
        let extra = i - len + 1;
        Some(match generator {
            Generator::Cycle => children[i % len].clone(),
            Generator::IteratedPlus => iterate_plus(last, extra as u64),
            Generator::WrappedPlus => (0..extra).fold(last, |acc, _| wrap(acc)),
        })
    }

    /// Membership in the class generated from the Vitali relation by plus
    /// and countable unions.
    pub fn in_e(&self) -> bool {
        match self {
            RelExpr::Base | RelExpr::Tower { .. } | RelExpr::OmegaTower => true,
            RelExpr::Plus { arg } => arg.in_e(),
            // generators preserve membership, so the explicit list decides
            RelExpr::Union { children, .. } => !children.is_empty() && children.iter().all(RelExpr::in_e),
            RelExpr::NegNeg | RelExpr::Almost => false,
        }
    }

    /// Matches the restricted grammar: the Vitali relation, or the plus of
    /// a union of such expressions.
    pub fn is_estar(&self) -> bool {
        match self {
            RelExpr::Base | RelExpr::Tower { i: 0 } => true,
            RelExpr::Plus { arg } => match arg.as_ref() {
                RelExpr::Union { children, generator } => {
                    !children.is_empty()
                        && *generator != Generator::IteratedPlus
                        && children.iter().all(RelExpr::is_estar)
                }
                _ => false,
            },
            _ => false,
        }
    }

    /// Levels of a restricted-grammar expression: 1 for the Vitali relation,
    /// one more per plus-of-union. `None` outside the grammar or when a
    /// generator makes the levels unbounded.
    pub fn estar_height(&self) -> Option<usize> {
        match self {
            RelExpr::Base | RelExpr::Tower { i: 0 } => Some(1),
            RelExpr::Plus { arg } => match arg.as_ref() {
                RelExpr::Union { children, generator: Generator::Cycle } if !children.is_empty() => {
                    let hs: Option<Vec<usize>> = children.iter().map(RelExpr::estar_height).collect();
                    Some(1 + hs?.into_iter().max()?)
                }
                _ => None,
            },
            _ => None,
        }
    }

    /// Node count of the syntax tree, towers counted as single nodes.
    pub fn depth(&self) -> usize {
        match self {
            RelExpr::Plus { arg } => 1 + arg.depth(),
            RelExpr::Union { children, .. } => 1 + children.iter().map(RelExpr::depth).max().unwrap_or(0),
            _ => 1,
        }
    }
}

impl fmt::Display for RelExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelExpr::Base => write!(f, "(base)"),
            RelExpr::Plus { arg } => write!(f, "(plus {arg})"),
            RelExpr::Union { children, generator } => {
                write!(f, "(union")?;
                match generator {
                    Generator::Cycle => {}
                    Generator::IteratedPlus => write!(f, " :iterated-plus")?,
                    Generator::WrappedPlus => write!(f, " :wrapped-plus")?,
                }
                for c in children {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
            RelExpr::NegNeg => write!(f, "(negneg)"),
            RelExpr::Almost => write!(f, "(almost)"),
            RelExpr::Tower { i } => write!(f, "(tower {i})"),
            RelExpr::OmegaTower => write!(f, "(omega-tower)"),
        }
    }
}

#[derive(Debug, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn lex(src: &str) -> Vec<(usize, Tok<'_>)> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => {
                out.push((i, Tok::Open));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::Close));
                i += 1;
            }
            c if c.is_ascii_whitespace() => i += 1,
            _ => {
                let start = i;
                while i < bytes.len() && !matches!(bytes[i], b'(' | b')') && !bytes[i].is_ascii_whitespace() {
                    i += 1;
                }
                out.push((start, Tok::Atom(&src[start..i])));
            }
        }
    }
    out
}

struct Reader<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    at: usize,
    end: usize,
}

impl<'a> Reader<'a> {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, VitaliError> {
        Err(VitaliError::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<RelExpr, VitaliError> {
        if self.toks.get(self.at).map(|t| &t.1) != Some(&Tok::Open) {
            return self.err("expected '('");
        }
        self.at += 1;
        let head = match self.toks.get(self.at) {
            Some((_, Tok::Atom(a))) => *a,
            _ => return self.err("expected an operator"),
        };
        self.at += 1;
        let e = match head {
            "base" => RelExpr::Base,
            "negneg" => RelExpr::NegNeg,
            "almost" => RelExpr::Almost,
            "omega-tower" => RelExpr::OmegaTower,
            "plus" => plus(self.expr()?),
            "tower" => match self.toks.get(self.at) {
                Some((_, Tok::Atom(a))) => match a.parse::<u64>() {
                    Ok(i) => {
                        self.at += 1;
                        RelExpr::Tower { i }
                    }
                    Err(_) => return self.err("tower index must be a natural number"),
                },
                _ => return self.err("tower needs an index"),
            },
            "union" => {
                let mut generator = Generator::Cycle;
                if let Some((_, Tok::Atom(a))) = self.toks.get(self.at) {
                    generator = match *a {
                        ":cycle" => Generator::Cycle,
                        ":iterated-plus" => Generator::IteratedPlus,
                        ":wrapped-plus" => Generator::WrappedPlus,
                        _ => return self.err(format!("unknown union generator {a}")),
                    };
                    self.at += 1;
                }
                let mut children = Vec::new();
                while self.toks.get(self.at).map(|t| &t.1) == Some(&Tok::Open) {
                    children.push(self.expr()?);
                }
                if children.is_empty() {
                    return self.err("union needs at least one member");
                }
                RelExpr::Union { children, generator }
            }
            other => return self.err(format!("unknown operator {other}")),
        };
        if self.toks.get(self.at).map(|t| &t.1) != Some(&Tok::Close) {
            return self.err("expected ')'");
        }
        self.at += 1;
        Ok(e)
    }
}

/// Reads the s-expression syntax: `(base)`, `(plus R)`,
/// `(union [:cycle|:iterated-plus|:wrapped-plus] R1 R2 ...)`, `(tower i)`,
/// `(omega-tower)`, `(negneg)`, `(almost)`.
pub fn parse_relexpr(src: &str) -> Result<RelExpr, VitaliError> {
    let mut r = Reader { toks: lex(src), at: 0, end: src.len() };
    let e = r.expr()?;
    if r.at < r.toks.len() {
        return r.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for src in [
            "(base)",
            "(plus (union (base) (plus (base))))",
            "(union :iterated-plus (tower 0) (tower 1))",
            "(union :wrapped-plus (base))",
            "(omega-tower)",
            "(plus (almost))",
        ] {
            let e = parse_relexpr(src).unwrap();
            assert_eq!(e.to_string(), src);
            let json = serde_json::to_string(&e).unwrap();
            assert_eq!(serde_json::from_str::<RelExpr>(&json).unwrap(), e);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_relexpr("(plus)"), Err(VitaliError::Parse { .. })));
        assert!(matches!(parse_relexpr("(union)"), Err(VitaliError::Parse { .. })));
        assert!(matches!(parse_relexpr("(tower x)"), Err(VitaliError::Parse { .. })));
        assert!(matches!(parse_relexpr("(base) (base)"), Err(VitaliError::Parse { pos: 7, .. })));
        assert!(matches!(parse_relexpr("(union :nope (base))"), Err(VitaliError::Parse { .. })));
    }

    #[test]
    fn plus_of_base_is_the_first_tower() {
        assert_eq!(plus(RelExpr::Base), RelExpr::Tower { i: 1 }.desugar());
        assert!(plus(RelExpr::Base).in_e());
        assert!(!plus(RelExpr::Base).is_estar());
    }

    #[test]
    fn grammar_flags() {
        let u = union(vec![RelExpr::Tower { i: 0 }, RelExpr::Tower { i: 1 }, RelExpr::Tower { i: 2 }]);
        assert!(u.in_e());
        assert!(!u.is_estar());
        let w = wrap(RelExpr::Base);
        assert!(w.is_estar());
        assert_eq!(w.estar_height(), Some(2));
        assert_eq!(plus(union(vec![RelExpr::Base, w.clone()])).estar_height(), Some(3));
        assert!(!wrap(union(vec![RelExpr::Base])).is_estar());
        assert!(!RelExpr::Almost.in_e());
        assert!(!plus(RelExpr::NegNeg).in_e());
        assert!(!RelExpr::OmegaTower.is_estar());
    }

    #[test]
    fn generated_children() {
        let it = RelExpr::OmegaTower.desugar();
        assert_eq!(it.child(10), Some(iterate_plus(RelExpr::Base, 10)));
        let cyc = union(vec![RelExpr::Base, RelExpr::Almost]);
        assert_eq!(cyc.child(5), Some(RelExpr::Almost));
        let w = RelExpr::Union { children: vec![RelExpr::Base], generator: Generator::WrappedPlus };
        assert_eq!(w.child(2), Some(wrap(wrap(RelExpr::Base))));
        assert!(w.child(2).unwrap().is_estar());
    }
}
