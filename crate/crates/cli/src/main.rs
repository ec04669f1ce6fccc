use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use intuit::eqlogic::{distinguish, evaluate, oracle_evaluate, parse_sentence, qe_decide};
use intuit::lawdef::LawDef;
use intuit::refuter::{
    run_refuter, verify_transcript, ApartnessBranch, DecisionBranch, Modulus, ProverStrategy, Query, QueryTag,
    RefuterInput, ScriptStrategy, Transcript,
};
use intuit::seqcore::StrictIncSeq;
use intuit::spread::{is_fan_to_depth, validate_spread_law, Point, TruncatedTree, DEFAULT_DEPTH};
use intuit::toyspread::{classify_point, normalize, SumDescriptor, ToyPoint};
use intuit::vitali::{decide, embed_in_estar, fan_for, parse_relexpr};

#[derive(Parser)]
#[command(name = "intuit", version, about = "Spreads, equality logic over toy spreads, Vitali relations and refuters")]
struct Cli {
    /// Seed for randomized strategies.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for truncation oracles (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a sentence on a structure by closed forms.
    Check {
        formula: String,
        /// Structure as JSON, e.g. '{"variant":"toy","n":3}'; '@file' reads a file.
        #[arg(long)]
        structure: String,
    },
    /// Evaluate a sentence on truncations of a structure.
    OracleCheck {
        formula: String,
        /// Structure as JSON; '@file' reads a file.
        #[arg(long)]
        structure: String,
        /// Largest truncation depth and branch bound.
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Candidate sentence separating two sums over strictly increasing sequences.
    Distinguish {
        /// '{"values":[2,3],"period_increments":[1]}'
        #[arg(long)]
        zeta: String,
        /// Same shape as --zeta.
        #[arg(long)]
        eta: String,
        /// Truncation depth for the oracle confirmation.
        #[arg(long, default_value_t = 9)]
        depth: usize,
    },
    /// Normal form n x T_m of a finite sum of toy spreads.
    Normalize {
        /// Component sizes, e.g. 1,3,3,2.
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<u64>,
        /// Also print the equivalence witness.
        #[arg(long)]
        witness: bool,
    },
    /// Order of a point in the toy spread of size n.
    Classify {
        #[arg(long)]
        n: u64,
        /// '{"pre":[0,1],"period":[2]}' or '{"jumps":[[1,1],[3,2]]}'
        #[arg(long)]
        point: String,
    },
    /// Classical truth of an equality sentence in an infinite model.
    Qe { sentence: String },
    /// Vitali relations.
    Vitali {
        #[command(subcommand)]
        cmd: VitaliCmd,
    },
    /// Run a refuter and print its transcript.
    Refute {
        name: RefuterName,
        /// Strategy script (JSON with a "default" entry); '@file' or a path.
        #[arg(long)]
        strategy: Option<String>,
        /// Modulus p,n for single-shot refuters; asked from the strategy otherwise.
        #[arg(long, value_parser = parse_modulus)]
        modulus: Option<Modulus>,
        /// Centre point as JSON, e.g. '{"pre":[1],"period":[0]}'; zero by default.
        #[arg(long)]
        gamma: Option<String>,
        /// First point for apartness.
        #[arg(long)]
        a: Option<String>,
        /// Second point for apartness.
        #[arg(long)]
        b: Option<String>,
        /// Tower level for tower-collapse.
        #[arg(long, default_value_t = 1)]
        i: u64,
        /// Which claim to refute.
        #[arg(long, value_enum, default_value_t = Branch::First)]
        branch: Branch,
        /// Restricted-grammar expression for fin-containment.
        #[arg(long, default_value = "(plus (union (base)))")]
        expr: String,
    },
    /// Re-check a transcript file.
    Verify { transcript: String },
    /// Check the spread conditions of a law on a truncation.
    ValidateLaw {
        /// Law as JSON; '@file' reads a file.
        law: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Children tried below each node.
        #[arg(long, default_value_t = 4)]
        branch_bound: u64,
    },
}

#[derive(Subcommand)]
enum VitaliCmd {
    /// Decide a relation on two eventually periodic points.
    Decide { relexpr: String, a: String, b: String },
    /// Build and check the fan of a restricted-grammar expression.
    Fan {
        relexpr: String,
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// A restricted-grammar expression containing the given one.
    Embed { relexpr: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum RefuterName {
    EqualityDecidability,
    VitaliStability,
    Apartness,
    TowerCollapse,
    OmegaStability,
    FinContainment,
    DecidabilityOnOmegaClass,
}

/// `first`/`second` pick the apartness branch, `all-equal`/`all-apart`
/// the decidability one; the first two and last two are interchangeable.
#[derive(Clone, Copy, ValueEnum)]
enum Branch {
    First,
    Second,
    AllEqual,
    AllApart,
}

impl Branch {
    fn decision(self) -> DecisionBranch {
        match self {
            Branch::First | Branch::AllEqual => DecisionBranch::AllEqual,
            Branch::Second | Branch::AllApart => DecisionBranch::AllApart,
        }
    }
    fn apartness(self) -> ApartnessBranch {
        match self {
            Branch::First | Branch::AllEqual => ApartnessBranch::First,
            Branch::Second | Branch::AllApart => ApartnessBranch::Second,
        }
    }
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Out = Result<Value, Failure>;

/// Inline JSON, or the contents of a file named with a leading '@'.
fn arg_text(s: &str) -> Result<String, Failure> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure(format!("{path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

fn json_arg<T: serde::de::DeserializeOwned>(s: &str, what: &str) -> Result<T, Failure> {
    serde_json::from_str(&arg_text(s)?).map_err(|e| Failure(format!("bad {what}: {e}")))
}

/// Answers every query with numbers drawn from a generator seeded by the
/// seed and the query, so answers do not depend on the asking order.
struct SeededStrategy(u64);

impl ProverStrategy for SeededStrategy {
    fn answer(&self, q: &Query) -> Option<Modulus> {
        let mix = (q.tag as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ q.level.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
        let mut rng = ChaCha8Rng::seed_from_u64(self.0 ^ mix);
        let p = rng.gen_range(0..8);
        let n = match q.tag {
            QueryTag::Omega => rng.gen_range(0..4),
            QueryTag::FinSecond => rng.gen_range(0..3),
            _ => rng.gen_range(0..8),
        };
        Some(Modulus::new(p, n))
    }
}

fn point_arg(s: Option<&String>, what: &str) -> Result<Point, Failure> {
    match s {
        Some(s) => json_arg(s, what),
        None => Ok(Point::zero()),
    }
}

#[allow(clippy::too_many_arguments)]
fn parse_modulus(s: &str) -> Result<Modulus, String> {
    let (p, n) = s.split_once(',').ok_or("expected p,n")?;
    let num = |t: &str| t.trim().parse::<u64>().map_err(|e| e.to_string());
    Ok(Modulus::new(num(p)?, num(n)?))
}

fn refute(
    name: RefuterName,
    strategy: Option<&String>,
    modulus: Option<Modulus>,
    gamma: Option<&String>,
    a: Option<&String>,
    b: Option<&String>,
    i: u64,
    branch: Branch,
    expr: &str,
    seed: u64,
) -> Out {
    let strategy: Box<dyn ProverStrategy> = match strategy {
        Some(s) => {
            let text = match s.strip_prefix('@') {
                Some(path) => std::fs::read_to_string(path)?,
                None if std::path::Path::new(s).exists() => std::fs::read_to_string(s)?,
                None => s.clone(),
            };
            let script = ScriptStrategy::from_json(&text)?;
            if script.default_answer().is_none() {
                return Err(Failure("strategy script needs a \"default\" entry".into()));
            }
            Box::new(script)
        }
        None => Box::new(SeededStrategy(seed)),
    };
    let m = match modulus {
        Some(m) => m,
        None => strategy.answer(&Query::new(QueryTag::Given, 0)).ok_or_else(|| Failure("no modulus".into()))?,
    };
    let gamma = point_arg(gamma, "gamma")?;
    let input = match name {
        RefuterName::EqualityDecidability => RefuterInput::EqualityDecidability { modulus: m, branch: branch.decision() },
        RefuterName::VitaliStability => RefuterInput::VitaliStability { gamma, modulus: m },
        RefuterName::Apartness => RefuterInput::Apartness {
            a: point_arg(a, "a")?,
            b: match b {
                Some(b) => json_arg(b, "b")?,
                None => Point::constant(1),
            },
            modulus: m,
            branch: branch.apartness(),
        },
        RefuterName::TowerCollapse => RefuterInput::TowerCollapse { gamma, i },
        RefuterName::OmegaStability => RefuterInput::OmegaStability { gamma },
        RefuterName::FinContainment => RefuterInput::FinContainment { expr: parse_relexpr(expr)? },
        RefuterName::DecidabilityOnOmegaClass => {
            RefuterInput::DecidabilityOnOmegaClass { gamma, modulus: m, branch: branch.decision() }
        }
    };
    let t = run_refuter(&input, strategy.as_ref())?;
    eprint!("{}", t.narrate());
    Ok(serde_json::to_value(&t)?)
}

fn run(cli: Cli) -> Out {
    match cli.cmd {
        Cmd::Check { formula, structure } => {
            let f = parse_sentence(&formula)?;
            let d: SumDescriptor = json_arg(&structure, "structure")?;
            Ok(serde_json::to_value(evaluate(&f, &d))?)
        }
        Cmd::OracleCheck { formula, structure, depth } => {
            let f = parse_sentence(&formula)?;
            let d: SumDescriptor = json_arg(&structure, "structure")?;
            Ok(serde_json::to_value(oracle_evaluate(&f, &d, depth)?)?)
        }
        Cmd::Distinguish { zeta, eta, depth } => {
            let z: StrictIncSeq = json_arg(&zeta, "zeta")?;
            let e: StrictIncSeq = json_arg(&eta, "eta")?;
            let r = distinguish(&z, &e, depth)?;
            if !r.confirmed {
                eprintln!("the sentence {} does not separate the two sums", r.sentence);
            }
            Ok(serde_json::to_value(r)?)
        }
        Cmd::Normalize { s, witness } => {
            let (n, m, w) = normalize(&s);
            let mut out = json!({ "n": n, "m": m });
            if witness {
                out["witness"] = serde_json::to_value(w)?;
            }
            Ok(out)
        }
        Cmd::Classify { n, point } => {
            let text = arg_text(&point)?;
            let p = match serde_json::from_str::<ToyPoint>(&text) {
                Ok(p) => p,
                Err(_) => {
                    let pt: Point = serde_json::from_str(&text).map_err(|e| Failure(format!("bad point: {e}")))?;
                    ToyPoint::from_point(&pt).ok_or_else(|| Failure(format!("{pt} is not nondecreasing")))?
                }
            };
            Ok(serde_json::to_value(classify_point(n, &p)?)?)
        }
        Cmd::Qe { sentence } => Ok(json!({ "value": qe_decide(&parse_sentence(&sentence)?)? })),
        Cmd::Vitali { cmd } => match cmd {
            VitaliCmd::Decide { relexpr, a, b } => {
                let r = parse_relexpr(&relexpr)?;
                let (a, b): (Point, Point) = (json_arg(&a, "a")?, json_arg(&b, "b")?);
                Ok(json!({ "value": decide(&r, &a, &b) }))
            }
            VitaliCmd::Fan { relexpr, depth } => {
                let fan = fan_for(&parse_relexpr(&relexpr)?)?;
                let report = validate_spread_law(&fan, depth, 2);
                Ok(json!({
                    "expr": fan.expr().to_string(),
                    "depth": depth,
                    "validation": report,
                    "fan": is_fan_to_depth(&fan, depth, &|_| 1, 3),
                    "nodes_at_depth": TruncatedTree::build(&fan, depth, 2).leaves().len(),
                }))
            }
            VitaliCmd::Embed { relexpr } => {
                let t = embed_in_estar(&parse_relexpr(&relexpr)?)?;
                Ok(json!({ "expr": t.to_string(), "tree": t }))
            }
        },
        Cmd::Refute { name, strategy, modulus, gamma, a, b, i, branch, expr } => refute(
            name,
            strategy.as_ref(),
            modulus,
            gamma.as_ref(),
            a.as_ref(),
            b.as_ref(),
            i,
            branch,
            &expr,
            cli.seed,
        ),
        Cmd::Verify { transcript } => {
            let text = match transcript.strip_prefix('@') {
                Some(path) => std::fs::read_to_string(path)?,
                None => std::fs::read_to_string(&transcript)?,
            };
            let t: Transcript = serde_json::from_str(&text).map_err(|e| Failure(format!("malformed transcript: {e}")))?;
            Ok(json!({ "valid": verify_transcript(&t)? }))
        }
        Cmd::ValidateLaw { law, depth, branch_bound } => {
            let def = LawDef::from_json(&arg_text(&law)?)?;
            let report = validate_spread_law(def.build()?.as_ref(), depth, branch_bound);
            Ok(json!({ "valid": report.is_valid(), "report": report }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("warning: {e}");
        }
    }
    match run(cli) {
        Ok(v) => {
            let text = serde_json::to_string_pretty(&v).expect("values serialize");
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::SUCCESS
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
