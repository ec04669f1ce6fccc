//! The first-order language of pure equality, interpreted over spreads.
//!
//! Formulas are parsed from an ASCII syntax, named families are recognized
//! syntactically, and sentences are decided three ways: by closed forms
//! over toy spreads and their sums, by a truncation oracle, and classically
//! over an infinite model.

mod distinguish;
mod evaluate;
mod formula;
mod oracle;
mod parser;
mod qe;
mod recognize;

pub use distinguish::{distinguish, DistinguishReport, SideReport};
pub use evaluate::{evaluate, Verdict};
pub use formula::{and, conj, disj, eq, exists, expand, forall, implies, named, not, or, Family, Formula, Fresh};
pub use oracle::{oracle_evaluate, OracleModel};
pub use parser::{parse_formula, parse_sentence};
pub use qe::qe_decide;
pub use recognize::{alpha_equivalent, match_family, recognize};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EqLogicError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unbound variable {0}")]
    Scope(String),
    #[error("truncation too shallow: {0}")]
    DepthInsufficient(String),
    #[error("the sequences do not differ")]
    NotApart,
    #[error("unsupported: {0}")]
    Unsupported(String),
}
