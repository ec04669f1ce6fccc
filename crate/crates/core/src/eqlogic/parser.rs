//! Parser for the ASCII formula syntax described in `docs/grammar.md`.

use super::formula::*;
use super::EqLogicError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Equals,
    Amp,
    Bar,
    Arrow,
    Tilde,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, EqLogicError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '=' => Tok::Equals,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            '~' | '!' => Tok::Tilde,
            '-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_digit() => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let n = src[start..=i]
                    .parse()
                    .map_err(|_| EqLogicError::Parse { pos: start, msg: "number too large".into() })?;
                Tok::Num(n)
            }
            c if c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(src[start..=i].to_string())
            }
            other => return Err(EqLogicError::Parse { pos: start, msg: format!("unexpected character '{other}'") }),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

const RESERVED: &[&str] =
    &["exists", "forall", "true", "false", "D", "AP", "psi", "rho", "psi_card", "dec_eq", "stab"];

fn d_index(name: &str) -> Option<u64> {
    name.strip_prefix("D_").and_then(|d| d.parse().ok())
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, EqLogicError> {
        Err(EqLogicError::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), EqLogicError> {
        if self.peek() == Some(&want) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn variable(&mut self) -> Result<String, EqLogicError> {
        match self.peek() {
            Some(Tok::Ident(name)) if !RESERVED.contains(&name.as_str()) && d_index(name).is_none() => {
                let name = name.clone();
                self.at += 1;
                Ok(name)
            }
            _ => self.err("expected a variable"),
        }
    }

    fn number(&mut self) -> Result<u64, EqLogicError> {
        match self.peek() {
            Some(&Tok::Num(n)) => {
                self.at += 1;
                Ok(n)
            }
            _ => self.err("expected a number"),
        }
    }

    fn formula(&mut self) -> Result<Formula, EqLogicError> {
        let left = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.at += 1;
            let right = self.formula()?;
            return Ok(implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, EqLogicError> {
        let mut f = self.conjunction()?;
        while self.peek() == Some(&Tok::Bar) {
            self.at += 1;
            f = or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, EqLogicError> {
        let mut f = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.at += 1;
            f = and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, EqLogicError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.at += 1;
                Ok(not(self.unary()?))
            }
            Some(Tok::Ident(k)) if k == "exists" || k == "forall" => {
                let is_exists = k == "exists";
                self.at += 1;
                let mut vars = vec![self.variable()?];
                while let Some(Tok::Ident(name)) = self.peek() {
                    if RESERVED.contains(&name.as_str()) || d_index(name).is_some() {
                        break;
                    }
                    // `forall x y = z` is ambiguous; a variable is only taken
                    // as bound when another binder or the body follows it
                    if self.toks.get(self.at + 1).map(|(_, t)| t) == Some(&Tok::Equals) {
                        break;
                    }
                    vars.push(self.variable()?);
                }
                if self.peek() == Some(&Tok::Dot) {
                    self.at += 1;
                }
                let body = self.unary()?;
                Ok(vars.iter().rev().fold(body, |acc, v| if is_exists { exists(v, acc) } else { forall(v, acc) }))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, EqLogicError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.at += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "true" => {
                    self.at += 1;
                    Ok(Formula::True)
                }
                "false" => {
                    self.at += 1;
                    Ok(Formula::False)
                }
                "dec_eq" => {
                    self.at += 1;
                    Ok(named(Family::DecEq))
                }
                "stab" => {
                    self.at += 1;
                    Ok(named(Family::Stable))
                }
                "AP" => {
                    self.at += 1;
                    self.expect(Tok::LParen, "'('")?;
                    let x = self.variable()?;
                    self.expect(Tok::Comma, "','")?;
                    let y = self.variable()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(named(Family::Apart { x, y }))
                }
                "psi" | "rho" | "psi_card" => {
                    self.at += 1;
                    self.expect(Tok::LBrack, "'['")?;
                    let a = self.number()?;
                    let b = if name != "psi_card" && self.peek() == Some(&Tok::Comma) {
                        self.at += 1;
                        let q = self.number()?;
                        if q == 0 {
                            return self.err("count must be positive");
                        }
                        Some(q)
                    } else {
                        None
                    };
                    self.expect(Tok::RBrack, "']'")?;
                    Ok(named(match (name.as_str(), b) {
                        ("psi", None) => Family::Psi { m: a },
                        ("rho", None) => Family::Rho { m: a },
                        ("psi", Some(q)) => Family::PsiMany { p: a, q },
                        ("rho", Some(q)) => Family::RhoMany { p: a, q },
                        _ => Family::AtLeast { n: a },
                    }))
                }
                _ if name == "D" || d_index(&name).is_some() => {
                    self.at += 1;
                    let m = d_index(&name).unwrap_or(0);
                    self.expect(Tok::LParen, "'('")?;
                    let x = self.variable()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(named(Family::D { m, x }))
                }
                _ => {
                    let left = self.variable()?;
                    self.expect(Tok::Equals, "'='")?;
                    let right = self.variable()?;
                    Ok(eq(&left, &right))
                }
            },
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a formula; free variables are allowed.
pub fn parse_formula(src: &str) -> Result<Formula, EqLogicError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0, end: src.len() };
    let f = p.formula()?;
    if p.at < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

/// Parses a formula and rejects it when a variable is unbound.
pub fn parse_sentence(src: &str) -> Result<Formula, EqLogicError> {
    let f = parse_formula(src)?;
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(EqLogicError::Scope(v));
    }
    Ok(f)
}
