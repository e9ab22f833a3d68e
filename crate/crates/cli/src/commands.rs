//! The subcommands as functions from input text to output text and exit code.

use std::fmt;

use clap::ValueEnum;
use serde::Serialize;
use uniqopt::json::{
    instance_to_json, parse_instance, report_to_json, BijectionDoc, InstanceDoc, ReducedDoc, ValueDoc,
};
use uniqopt::reductions::{compile, verify_bijection};
use uniqopt::{
    brute_force_unique, decide_unique, generate::generate, optima, solve as solve_exact, EnumerationOracle, Error,
    Instance, Kind, Method, Oracle, OracleStats, Status,
};

pub const EXIT_UNIQUE: u8 = 0;
pub const EXIT_MULTIPLE: u8 = 1;
pub const EXIT_INFEASIBLE: u8 = 2;
pub const EXIT_PARSE: u8 = 11;
pub const EXIT_TOO_LARGE: u8 = 12;
pub const EXIT_OTHER: u8 = 13;
pub const EXIT_USAGE: u8 = 14;

/// Variables a reduction chain may add on top of the source: one for profit
/// normalization, one for feasibility padding, one for the rank-1 step.
const MAX_AUXILIARY: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Oracle,
    Brute,
}

#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Io(String),
    Usage(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::Parse(_)) => EXIT_PARSE,
            Failure::Core(Error::TooLarge { .. }) => EXIT_TOO_LARGE,
            Failure::Core(_) | Failure::Io(_) => EXIT_OTHER,
            Failure::Usage(_) => EXIT_USAGE,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{}: {e}", e.name()),
            Failure::Io(msg) | Failure::Usage(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub max_n: usize,
    pub verify_limit: usize,
    pub seed: u64,
    pub engine: Engine,
}

impl RunConfig {
    pub fn new(max_n: usize, verify_limit: usize, seed: u64, engine: Engine) -> Result<Self, Failure> {
        if verify_limit > max_n {
            return Err(Failure::Usage(format!("--limit {verify_limit} exceeds --max-n {max_n}")));
        }
        Ok(RunConfig { max_n, verify_limit, seed, engine })
    }

    fn oracle(&self) -> EnumerationOracle {
        EnumerationOracle::new().with_limit(self.max_n)
    }
}

pub fn gen(kind: Kind, n: usize, coeff_bound: u64, seed: u64) -> Result<String, Failure> {
    Ok(instance_to_json(&generate(kind, n, coeff_bound, seed)?))
}

#[derive(Serialize)]
struct SolveDoc {
    status: &'static str,
    optimal_value: Option<ValueDoc>,
    witness: Option<Vec<u8>>,
    stats: OracleStats,
    method: Method,
}

/// Exit code 0 with the optimum, or 2 if nothing is feasible.
pub fn solve(input: &str, config: &RunConfig) -> Result<(String, u8), Failure> {
    let inst = parse_instance(input)?;
    let doc = match config.engine {
        Engine::Oracle => {
            let oracle = config.oracle();
            match solve_exact(&inst, &oracle)? {
                Some(opt) => SolveDoc {
                    status: "optimal",
                    optimal_value: Some(ValueDoc::from(&opt.value)),
                    witness: Some(opt.witness.to_bits()),
                    stats: opt.stats,
                    method: Method::Oracle,
                },
                None => SolveDoc {
                    status: "infeasible",
                    optimal_value: None,
                    witness: None,
                    stats: oracle.stats(),
                    method: Method::Oracle,
                },
            }
        }
        Engine::Brute => {
            let best = optima(&inst, config.max_n, 1)?;
            SolveDoc {
                status: if best.value.is_some() { "optimal" } else { "infeasible" },
                optimal_value: best.value.as_ref().map(ValueDoc::from),
                witness: best.optimizers.first().map(|w| w.to_bits()),
                stats: OracleStats::default(),
                method: Method::Brute,
            }
        }
    };
    let code = if doc.optimal_value.is_some() { EXIT_UNIQUE } else { EXIT_INFEASIBLE };
    Ok((serde_json::to_string(&doc).expect("solve documents always serialize"), code))
}

pub fn status_code(status: Status) -> u8 {
    match status {
        Status::Unique => EXIT_UNIQUE,
        Status::Multiple => EXIT_MULTIPLE,
        Status::Infeasible => EXIT_INFEASIBLE,
    }
}

pub fn decide(input: &str, config: &RunConfig) -> Result<(String, u8), Failure> {
    let inst = parse_instance(input)?;
    let report = match config.engine {
        Engine::Oracle => decide_unique(&inst, &config.oracle())?,
        Engine::Brute => brute_force_unique(&inst, config.max_n)?,
    };
    Ok((report_to_json(&report), status_code(report.status)))
}

fn check_from(inst: &Instance, from: Option<Kind>) -> Result<(), Failure> {
    match from {
        Some(k) if k != inst.kind() => {
            Err(Error::InvalidInstance(format!("input is {}, not {}", inst.kind(), k)).into())
        }
        _ => Ok(()),
    }
}

pub fn reduce(input: &str, from: Option<Kind>, to: Kind, config: &RunConfig) -> Result<String, Failure> {
    let inst = parse_instance(input)?;
    check_from(&inst, from)?;
    let compiled = compile(&inst, to, config.max_n)?;
    let doc = ReducedDoc {
        instance: InstanceDoc::from(&compiled.target),
        solution_map: compiled.full_map().unwrap_or_else(|| compiled.solution_map.clone()),
        notices: compiled.notices.iter().map(|n| n.to_string()).collect(),
    };
    Ok(serde_json::to_string(&doc).expect("reduction documents always serialize"))
}

#[derive(Serialize)]
struct VerifyEntry {
    from: &'static str,
    to: &'static str,
    /// `source` when the input itself was compared, `prepared` when padding
    /// changed it and the padded instance was compared instead.
    checked: &'static str,
    #[serde(flatten)]
    report: BijectionDoc,
    notices: Vec<String>,
}

fn default_targets(kind: Kind) -> Vec<Kind> {
    match kind {
        Kind::Knapsack => vec![Kind::SubsetSumGoal, Kind::Hyperbolic, Kind::Rank1Quadratic],
        Kind::SubsetSumGoal => vec![Kind::Rank1Quadratic],
        _ => vec![],
    }
}

/// Exit code 0 iff every requested check matched, 1 otherwise.
pub fn verify(input: &str, targets: &[Kind], config: &RunConfig) -> Result<(String, u8), Failure> {
    let inst = parse_instance(input)?;
    let n = inst.dimension();
    if n > config.verify_limit {
        return Err(Error::TooLarge { n, limit: config.verify_limit }.into());
    }
    let targets = if targets.is_empty() { default_targets(inst.kind()) } else { targets.to_vec() };
    if targets.is_empty() {
        return Err(Error::InvalidInstance(format!("no reductions start from {}", inst.kind())).into());
    }
    let limit = config.verify_limit + MAX_AUXILIARY;
    let mut entries = Vec::with_capacity(targets.len());
    for to in targets {
        let compiled = compile(&inst, to, config.max_n)?;
        let (checked, report) = match compiled.full_map() {
            Some(map) => ("source", verify_bijection(&compiled.source, &compiled.target, &map, limit)?),
            None => {
                ("prepared", verify_bijection(&compiled.prepared, &compiled.target, &compiled.solution_map, limit)?)
            }
        };
        entries.push(VerifyEntry {
            from: inst.kind().name(),
            to: to.name(),
            checked,
            report: BijectionDoc::from(&report),
            notices: compiled.notices.iter().map(|n| n.to_string()).collect(),
        });
    }
    let code = if entries.iter().all(|e| e.report.matched) { 0 } else { 1 };
    Ok((serde_json::to_string(&entries).expect("verification documents always serialize"), code))
}
