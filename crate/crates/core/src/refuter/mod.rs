//! Executable counterexamples to uniform claims about Baire space.
//!
//! Each refuter takes the modulus a continuity argument would extract from
//! a claim, either directly or by asking a prover strategy, builds an
//! eventually periodic point against it, and records every step as a
//! finite check. The last check of a transcript is the claim's assertion
//! about the constructed point, and it fails.

mod strategy;
mod transcript;

pub use strategy::{Modulus, ProverStrategy, Query, QueryTag, ScriptStrategy};
pub use transcript::{
    Answer, ApartnessBranch, Check, CheckKind, DecisionBranch, PointSet, RefuterInput, Step, Transcript,
    SCHEMA_VERSION,
};

use std::collections::BTreeMap;
use thiserror::Error;

use crate::seqcore::pair;
use crate::spread::Point;
use crate::vitali::{fan_for, RelExpr};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RefuterError {
    #[error("the strategy gives no answer to {0}")]
    StrategyIncomplete(Query),
    #[error("malformed transcript: {0}")]
    MalformedTranscript(String),
    #[error("{0} is neither the Vitali relation nor the plus of a union of such")]
    NotEStar(String),
    #[error("modulus too large: {0}")]
    ModulusTooLarge(String),
    #[error("bad strategy script: {0}")]
    BadStrategy(String),
}

/// Largest index a constructed point may be modified at.
pub const MAX_INDEX: u64 = 1 << 14;
/// Largest tower level a strategy may name.
pub const MAX_LEVEL: u64 = 1 << 10;

fn ask(s: &dyn ProverStrategy, q: Query) -> Result<Answer, RefuterError> {
    let modulus = s.answer(&q).ok_or(RefuterError::StrategyIncomplete(q))?;
    Ok(Answer { query: q, modulus })
}

fn given(m: Modulus) -> Answer {
    Answer { query: Query::new(QueryTag::Given, 0), modulus: m }
}

/// `max(p, n + 1)`, the first index both past the bound and outside the
/// prefix.
fn place(m: Modulus) -> Result<usize, RefuterError> {
    let k = m.p.max(m.n.saturating_add(1));
    if k > MAX_INDEX {
        return Err(RefuterError::ModulusTooLarge(format!("index {k} exceeds {MAX_INDEX}")));
    }
    Ok(k as usize)
}

fn zeros_then_one(q: usize) -> Vec<u64> {
    let mut v = vec![0; q];
    v.push(1);
    v
}

fn transcript(input: RefuterInput, steps: Vec<Step>) -> Transcript {
    Transcript { schema_version: SCHEMA_VERSION, input, steps }
}

/// Refutes decidable equality at the zero sequence: near it, points are
/// neither all equal to it nor all apart from it.
pub fn refute_equality_decidability(m: Modulus, branch: DecisionBranch) -> Result<Transcript, RefuterError> {
    let alpha = Point::zero();
    let p = place(Modulus::new(m.p, 0))?;
    let (claim, beta, last) = match branch {
        DecisionBranch::AllEqual => {
            let beta = alpha.bump(p);
            (
                format!("every point starting with the first {} entries of {alpha} equals it", m.p),
                beta.clone(),
                vec![
                    Check::holds(CheckKind::DiffersAt { a: beta.clone(), b: alpha.clone(), index: p as u64 }),
                    Check::refuted(CheckKind::PointsEqual { a: beta, b: alpha.clone() }),
                ],
            )
        }
        DecisionBranch::AllApart => (
            format!("every point starting with the first {} entries of {alpha} is apart from it", m.p),
            alpha.clone(),
            vec![Check::refuted(CheckKind::PointsApart { a: alpha.clone(), b: alpha.clone() })],
        ),
    };
    let mut checks =
        vec![Check::holds(CheckKind::PrefixAgrees { reference: alpha.clone(), candidate: beta.clone(), len: m.p })];
    checks.extend(last);
    Ok(transcript(
        RefuterInput::EqualityDecidability { modulus: m, branch },
        vec![Step { claim, answers: vec![given(m)], point: beta, checks }],
    ))
}

/// Refutes that every point differing from `gamma` in at most one place
/// eventually agrees with it, with a modulus bound on where agreement
/// starts.
pub fn refute_vitali_stability(gamma: &Point, m: Modulus) -> Result<Transcript, RefuterError> {
    let k = place(m)?;
    let alpha = gamma.bump(k);
    let checks = vec![
        Check::holds(CheckKind::MemberOf {
            set: PointSet::Within { gamma: gamma.clone(), max: 1 },
            candidate: alpha.clone(),
        }),
        Check::holds(CheckKind::PrefixAgrees { reference: gamma.clone(), candidate: alpha.clone(), len: m.p }),
        Check::holds(CheckKind::Exceeds { value: k as u64, bound: m.n }),
        Check::refuted(CheckKind::AgreesAt { a: alpha.clone(), b: gamma.clone(), index: k as u64 }),
    ];
    let claim = format!(
        "every point with at most one difference from {gamma} that starts with its first {} entries agrees with it after {}",
        m.p, m.n
    );
    Ok(transcript(
        RefuterInput::VitaliStability { gamma: gamma.clone(), modulus: m },
        vec![Step { claim, answers: vec![given(m)], point: alpha, checks }],
    ))
}

/// Refutes the apartness formula between `a` and `b` in the Vitali
/// structure: near `a` there are points equivalent to `a` and points
/// equivalent to `b`.
pub fn refute_apartness(a: &Point, b: &Point, m: Modulus, branch: ApartnessBranch) -> Result<Transcript, RefuterError> {
    let p = place(Modulus::new(m.p, 0))?;
    let (claim, gamma, target) = match branch {
        ApartnessBranch::First => (
            format!("{a} and {b} are apart: no point starting with the first {} entries of {a} is equivalent to it", m.p),
            a.clone(),
            a,
        ),
        ApartnessBranch::Second => (
            format!("{a} and {b} are apart: no point starting with the first {} entries of {a} is equivalent to {b}", m.p),
            a.hybrid(p, b),
            b,
        ),
    };
    let checks = vec![
        Check::holds(CheckKind::PrefixAgrees { reference: a.clone(), candidate: gamma.clone(), len: m.p }),
        Check::refuted(CheckKind::NotVitaliEquivalent { a: gamma.clone(), b: target.clone() }),
    ];
    Ok(transcript(
        RefuterInput::Apartness { a: a.clone(), b: b.clone(), modulus: m, branch },
        vec![Step { claim, answers: vec![given(m)], point: gamma, checks }],
    ))
}

fn tower_steps(gamma: &Point, i: u64, strategy: &dyn ProverStrategy) -> Result<Vec<Step>, RefuterError> {
    if i > MAX_LEVEL {
        return Err(RefuterError::ModulusTooLarge(format!("level {i} exceeds {MAX_LEVEL}")));
    }
    let answers = (0..=i).rev().map(|j| ask(strategy, Query::new(QueryTag::Tower, j))).collect::<Result<Vec<_>, _>>()?;
    let mut steps = Vec::new();
    let mut below: Option<Point> = None;
    for (j, ans) in (0..=i).zip(answers.into_iter().rev()) {
        let m = ans.modulus;
        let k = place(m)?;
        let point = match &below {
            None => gamma.bump(k),
            Some(b) => gamma.bump(k).hybrid(k + 1, b),
        };
        let mut checks = vec![
            Check::holds(CheckKind::MemberOf {
                set: PointSet::Within { gamma: gamma.clone(), max: j + 1 },
                candidate: point.clone(),
            }),
            Check::holds(CheckKind::PrefixAgrees { reference: gamma.clone(), candidate: point.clone(), len: m.p }),
            Check::holds(CheckKind::Exceeds { value: k as u64, bound: m.n }),
        ];
        let claim = match &below {
            None => {
                checks.push(Check::refuted(CheckKind::AgreesAt { a: point.clone(), b: gamma.clone(), index: k as u64 }));
                format!(
                    "every point with at most one difference from {gamma} that starts with its first {} entries agrees with it after {}",
                    m.p, m.n
                )
            }
            Some(b) => {
                checks.push(Check::holds(CheckKind::DiffersAt { a: point.clone(), b: gamma.clone(), index: k as u64 }));
                checks.push(Check::holds(CheckKind::MemberOf {
                    set: PointSet::Within { gamma: gamma.clone(), max: j },
                    candidate: b.clone(),
                }));
                checks.push(Check::holds(CheckKind::AgreesFrom {
                    candidate: point.clone(),
                    reference: b.clone(),
                    len: k as u64 + 1,
                }));
                format!(
                    "every point with at most {} differences from {gamma} that starts with its first {} entries and differs from it after {} is related to it at level {}",
                    j + 1,
                    m.p,
                    m.n,
                    j - 1
                )
            }
        };
        steps.push(Step { claim, answers: vec![ans], point: point.clone(), checks });
        below = Some(point);
    }
    steps.reverse();
    Ok(steps)
}

/// Refutes that the points differing from `gamma` in at most `i + 1`
/// places are all related to it at tower level `i`. One step per level,
/// from `i` down to the Vitali relation itself.
pub fn refute_tower_collapse(gamma: &Point, i: u64, strategy: &dyn ProverStrategy) -> Result<Transcript, RefuterError> {
    Ok(transcript(RefuterInput::TowerCollapse { gamma: gamma.clone(), i }, tower_steps(gamma, i, strategy)?))
}

/// Refutes that the omega neighbourhood of `gamma` lies in its omega
/// class. The strategy's first answer names a prefix and a tower level
/// `i` (as the bound); the claim then reduces to the tower claim at `i`.
pub fn refute_omega_stability(gamma: &Point, strategy: &dyn ProverStrategy) -> Result<Transcript, RefuterError> {
    let ans = ask(strategy, Query::new(QueryTag::Omega, 0))?;
    let (p, i) = (ans.modulus.p, ans.modulus.n);
    let q = place(Modulus::new(p, i))?;
    let tower = tower_steps(gamma, i, strategy)?;
    let top = tower[0].point.clone();
    let beta = gamma.bump(q).hybrid(q + 1, &top);
    let checks = vec![
        Check::holds(CheckKind::MemberOf {
            set: PointSet::OmegaNeighbourhood { gamma: gamma.clone() },
            candidate: beta.clone(),
        }),
        Check::holds(CheckKind::PrefixAgrees { reference: gamma.clone(), candidate: beta.clone(), len: p }),
        Check::holds(CheckKind::FirstDifference { a: beta.clone(), b: gamma.clone(), index: q as u64 }),
        Check::holds(CheckKind::Exceeds { value: q as u64, bound: i }),
        Check::holds(CheckKind::MemberOf {
            set: PointSet::Within { gamma: gamma.clone(), max: i + 1 },
            candidate: top.clone(),
        }),
        Check::holds(CheckKind::AgreesFrom { candidate: beta.clone(), reference: top, len: q as u64 + 1 }),
    ];
    let claim = format!("every point of the omega neighbourhood of {gamma} starting with its first {p} entries is related to it at level {i}");
    let mut steps = vec![Step { claim, answers: vec![ans], point: beta, checks }];
    steps.extend(tower);
    Ok(transcript(RefuterInput::OmegaStability { gamma: gamma.clone() }, steps))
}

struct FinLevel {
    expr: RelExpr,
    first: Answer,
    q: usize,
    /// Second answer, the union member, the index of the second 1 and the
    /// run of zeros before it.
    descent: Option<(Answer, RelExpr, u64, usize)>,
}

fn least_code_with_first(i: u64, lo: u64) -> Result<u64, RefuterError> {
    let mut k = 0;
    loop {
        let c = pair(i, k).map_err(|e| RefuterError::ModulusTooLarge(e.to_string()))?;
        if c >= lo {
            return Ok(c);
        }
        k += 1;
    }
}

/// Refutes that the fan attached to `r` lies in the finiteness notion of
/// `r`. Each plus-of-union level asks for two answers: where agreement
/// with zero starts, and which union member the fan enters after the
/// first 1 (as the bound). The descent ends at the fan of the Vitali
/// relation; the transcript has one step per level visited.
pub fn refute_fin_containment(r: &RelExpr, strategy: &dyn ProverStrategy) -> Result<Transcript, RefuterError> {
    let fan = fan_for(r).map_err(|_| RefuterError::NotEStar(r.to_string()))?;
    let mut levels = Vec::new();
    let mut cur = fan.expr().clone();
    for d in 0.. {
        let first = ask(strategy, Query::new(QueryTag::FinFirst, d))?;
        let q = place(first.modulus)?;
        let RelExpr::Plus { arg } = &cur else {
            levels.push(FinLevel { expr: cur, first, q, descent: None });
            break;
        };
        let second = ask(strategy, Query::new(QueryTag::FinSecond, d))?;
        let (rr, i) = (second.modulus.p, second.modulus.n);
        let lo = (q as u64 + 1).saturating_add(rr);
        if lo > MAX_INDEX {
            return Err(RefuterError::ModulusTooLarge(format!("index {lo} exceeds {MAX_INDEX}")));
        }
        let code = least_code_with_first(i, lo)?;
        if code > MAX_INDEX {
            return Err(RefuterError::ModulusTooLarge(format!("index {code} exceeds {MAX_INDEX}")));
        }
        let child = fan_for(&arg.child(i as usize).expect("union of the restricted grammar")).expect("member of the grammar");
        let t = (code - q as u64 - 1) as usize;
        let child = child.expr().clone();
        levels.push(FinLevel { expr: cur, first, q, descent: Some((second, child.clone(), code, t)) });
        cur = child;
    }
    let zero = Point::zero();
    let mut steps = Vec::new();
    let mut below: Option<Point> = None;
    for lv in levels.into_iter().rev() {
        let (p, n, q) = (lv.first.modulus.p, lv.first.modulus.n, lv.q);
        let fan_set = |e: &RelExpr| PointSet::FanFor { expr: e.clone() };
        let (point, claim, answers, tail) = match (&lv.descent, &below) {
            (Some((second, child, code, t)), Some(b)) => {
                let mut head = zeros_then_one(q);
                head.extend(zeros_then_one(*t));
                let point = b.prepend(&head);
                let corridor = Point::new(zeros_then_one(q), vec![0]).expect("non-empty period");
                let tail = vec![
                    Check::holds(CheckKind::DiffersAt { a: point.clone(), b: zero.clone(), index: q as u64 }),
                    Check::holds(CheckKind::PrefixAgrees {
                        reference: corridor,
                        candidate: point.clone(),
                        len: q as u64 + 1 + second.modulus.p,
                    }),
                    Check::holds(CheckKind::AtLeast { value: *t as u64, bound: second.modulus.p }),
                    Check::holds(CheckKind::PairFirst { code: *code, first: second.modulus.n }),
                    Check::holds(CheckKind::ShiftEquals { a: point.clone(), by: code + 1, b: b.clone() }),
                    Check::holds(CheckKind::MemberOf { set: fan_set(child), candidate: b.clone() }),
                ];
                let claim = format!(
                    "every point of the fan for {} starting with {p} zeros is, once nonzero after {n}, in the finiteness notion of a union member; past 0^{q}1 0^{} the member is number {}",
                    lv.expr, second.modulus.p, second.modulus.n
                );
                (point, claim, vec![lv.first.clone(), second.clone()], tail)
            }
            (None, None) => {
                let point = zero.bump(q);
                let tail = vec![Check::refuted(CheckKind::AgreesAt { a: point.clone(), b: zero.clone(), index: q as u64 })];
                let claim = format!("every point of the fan for {} starting with {p} zeros is zero after {n}", lv.expr);
                (point, claim, vec![lv.first.clone()], tail)
            }
            _ => unreachable!("only the last level has no descent"),
        };
        let mut checks = vec![
            Check::holds(CheckKind::MemberOf { set: fan_set(&lv.expr), candidate: point.clone() }),
            Check::holds(CheckKind::PrefixAgrees { reference: zero.clone(), candidate: point.clone(), len: p }),
            Check::holds(CheckKind::Exceeds { value: q as u64, bound: n }),
        ];
        checks.extend(tail);
        steps.push(Step { claim, answers, point: point.clone(), checks });
        below = Some(point);
    }
    steps.reverse();
    Ok(transcript(RefuterInput::FinContainment { expr: r.clone() }, steps))
}

/// Refutes decidable equality on the omega class of `gamma`, using the
/// points that differ from it in at most one place.
pub fn refute_decidability_on_omega_class(
    gamma: &Point,
    m: Modulus,
    branch: DecisionBranch,
) -> Result<Transcript, RefuterError> {
    let p = place(Modulus::new(m.p, 0))?;
    let alpha = match branch {
        DecisionBranch::AllEqual => gamma.bump(p),
        DecisionBranch::AllApart => gamma.clone(),
    };
    let mut checks = vec![
        Check::holds(CheckKind::MemberOf {
            set: PointSet::Within { gamma: gamma.clone(), max: 1 },
            candidate: alpha.clone(),
        }),
        Check::holds(CheckKind::PrefixAgrees { reference: gamma.clone(), candidate: alpha.clone(), len: m.p }),
    ];
    let claim = match branch {
        DecisionBranch::AllEqual => {
            checks.push(Check::refuted(CheckKind::PointsEqual { a: gamma.clone(), b: alpha.clone() }));
            format!("every point with at most one difference from {gamma} that starts with its first {} entries equals it", m.p)
        }
        DecisionBranch::AllApart => {
            checks.push(Check::refuted(CheckKind::PointsApart { a: gamma.clone(), b: alpha.clone() }));
            format!("every point starting with the first {} entries of {gamma} is apart from it", m.p)
        }
    };
    Ok(transcript(
        RefuterInput::DecidabilityOnOmegaClass { gamma: gamma.clone(), modulus: m, branch },
        vec![Step { claim, answers: vec![given(m)], point: alpha, checks }],
    ))
}

/// Runs the refuter named by `input`; fixed-modulus refuters ignore the
/// strategy.
pub fn run_refuter(input: &RefuterInput, strategy: &dyn ProverStrategy) -> Result<Transcript, RefuterError> {
    match input {
        RefuterInput::EqualityDecidability { modulus, branch } => refute_equality_decidability(*modulus, *branch),
        RefuterInput::VitaliStability { gamma, modulus } => refute_vitali_stability(gamma, *modulus),
        RefuterInput::Apartness { a, b, modulus, branch } => refute_apartness(a, b, *modulus, *branch),
        RefuterInput::TowerCollapse { gamma, i } => refute_tower_collapse(gamma, *i, strategy),
        RefuterInput::OmegaStability { gamma } => refute_omega_stability(gamma, strategy),
        RefuterInput::FinContainment { expr } => refute_fin_containment(expr, strategy),
        RefuterInput::DecidabilityOnOmegaClass { gamma, modulus, branch } => {
            refute_decidability_on_omega_class(gamma, *modulus, *branch)
        }
    }
}

/// Re-runs every recorded check and replays the construction with the
/// recorded answers. True iff the checks compute their recorded outcomes,
/// only the last one fails, and the replay reproduces the transcript.
pub fn verify_transcript(t: &Transcript) -> Result<bool, RefuterError> {
    if t.schema_version != SCHEMA_VERSION {
        return Err(RefuterError::MalformedTranscript(format!(
            "schema version {} (expected {SCHEMA_VERSION})",
            t.schema_version
        )));
    }
    if t.steps.is_empty() {
        return Err(RefuterError::MalformedTranscript("no steps".into()));
    }
    if !t.checks_consistent() {
        return Ok(false);
    }
    let mut answers = BTreeMap::new();
    for a in t.steps.iter().flat_map(|s| s.answers.iter()) {
        if answers.insert(a.query, a.modulus).is_some_and(|m| m != a.modulus) {
            return Ok(false);
        }
    }
    let replay = run_refuter(&t.input, &|q: &Query| answers.get(q).copied());
    Ok(replay.is_ok_and(|r| r == *t))
}
