//! JSON descriptions of spread-laws.
//!
//! ```json
//! {"kind": "baire"}
//! {"kind": "singleton", "point": {"pre": [1], "period": [0]}}
//! {"kind": "builtin", "family": "toy", "n": 3}
//! {"kind": "structure", "structure": {"variant": "product", "n": 2, "m": 3}}
//! {"kind": "table", "accept": [[0], [0, 1], 5], "default": "reject-extensions"}
//! {"kind": "vitali-fan", "expr": "(plus (union (base)))"}
//! ```
//!
//! Table entries are sequences or their numeric codes.

use serde::{Deserialize, Serialize};
use schemars::JsonSchema;
use thiserror::Error;

use crate::seqcore::decode;
use crate::spread::{BaireLaw, Point, SingletonLaw, SpreadLaw, TableDefault, TableLaw};
use crate::toyspread::{toy_law, SumDescriptor};
use crate::vitali::{fan_for, parse_relexpr};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LawDefError {
    #[error("bad law description: {0}")]
    Json(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(untagged)]
pub enum TableEntry {
    Seq(Vec<u64>),
    Code(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Toy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LawDef {
    Baire,
    Singleton { point: Point },
    Builtin { family: Family, n: u64 },
    Structure { structure: SumDescriptor },
    Table {
        accept: Vec<TableEntry>,
        #[serde(default = "reject_extensions")]
        default: TableDefault,
    },
    VitaliFan { expr: String },
}

fn reject_extensions() -> TableDefault {
    TableDefault::RejectExtensions
}

impl LawDef {
    pub fn from_json(src: &str) -> Result<Self, LawDefError> {
        serde_json::from_str(src).map_err(|e| LawDefError::Json(e.to_string()))
    }

    pub fn build(&self) -> Result<Box<dyn SpreadLaw>, LawDefError> {
        Ok(match self {
            LawDef::Baire => Box::new(BaireLaw),
            LawDef::Singleton { point } => Box::new(SingletonLaw(point.clone())),
            LawDef::Builtin { family: Family::Toy, n } => Box::new(toy_law(*n)),
            LawDef::Structure { structure } => Box::new(structure.law()),
            LawDef::Table { accept, default } => {
                let rows = accept.iter().map(|e| match e {
                    TableEntry::Seq(s) => s.clone(),
                    TableEntry::Code(c) => decode(*c as u128).0,
                });
                Box::new(TableLaw::new(rows, *default))
            }
            LawDef::VitaliFan { expr } => {
                let r = parse_relexpr(expr).map_err(|e| LawDefError::Invalid(e.to_string()))?;
                Box::new(fan_for(&r).map_err(|e| LawDefError::Invalid(e.to_string()))?)
            }
        })
    }
}
