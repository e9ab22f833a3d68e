//! JSON documents for instances and reports.
//!
//! Integers travel as decimal strings so that values beyond 64 bits survive
//! any JSON reader. Assignments are arrays of `0`/`1`.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::decider::{Method, Search, Status, UniquenessReport};
use crate::error::{Error, Result};
use crate::model::{
    Assignment, ExactValue, HyperbolicProgram, Instance, KnapsackInstance, LinearForm, QuadraticProgram,
    Rank1QuadraticProgram, SubsetSumGoalInstance,
};
use crate::oracle::OracleStats;
use crate::reductions::{BijectionReport, Direction, Mismatch, SolutionMap};

fn dec(x: &BigInt) -> String {
    x.to_string()
}

fn decs(xs: &[BigInt]) -> Vec<String> {
    xs.iter().map(dec).collect()
}

fn parse_int(s: &str) -> Result<BigInt> {
    let body = s.strip_prefix('-').unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("`{s}` is not a decimal integer")));
    }
    BigInt::from_str(s).map_err(|e| Error::Parse(format!("`{s}`: {e}")))
}

fn parse_ints(xs: &[String]) -> Result<Vec<BigInt>> {
    xs.iter().map(|s| parse_int(s)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InstanceDoc {
    Knapsack { weights: Vec<String>, profits: Vec<String>, bound: String },
    SubsetSumGoal { weights: Vec<String>, goal: String },
    Rank1Quadratic { u: Vec<String>, v: Vec<String> },
    Quadratic { matrix: Vec<Vec<String>> },
    Hyperbolic { a0: String, a: Vec<String>, b0: String, b: Vec<String> },
}

impl From<&Instance> for InstanceDoc {
    fn from(inst: &Instance) -> Self {
        match inst {
            Instance::Knapsack(k) => {
                InstanceDoc::Knapsack { weights: decs(k.weights()), profits: decs(k.profits()), bound: dec(k.bound()) }
            }
            Instance::SubsetSumGoal(s) => {
                InstanceDoc::SubsetSumGoal { weights: decs(s.weights()), goal: dec(s.goal()) }
            }
            Instance::Rank1Quadratic(r) => InstanceDoc::Rank1Quadratic { u: decs(r.u()), v: decs(r.v()) },
            Instance::Quadratic(q) => InstanceDoc::Quadratic { matrix: q.matrix().iter().map(|r| decs(r)).collect() },
            Instance::Hyperbolic(h) => InstanceDoc::Hyperbolic {
                a0: dec(&h.numerator().constant),
                a: decs(&h.numerator().coeffs),
                b0: dec(&h.denominator().constant),
                b: decs(&h.denominator().coeffs),
            },
        }
    }
}

impl TryFrom<InstanceDoc> for Instance {
    type Error = Error;

    fn try_from(doc: InstanceDoc) -> Result<Self> {
        Ok(match doc {
            InstanceDoc::Knapsack { weights, profits, bound } => {
                KnapsackInstance::new(parse_ints(&weights)?, parse_ints(&profits)?, parse_int(&bound)?)?.into()
            }
            InstanceDoc::SubsetSumGoal { weights, goal } => {
                SubsetSumGoalInstance::new(parse_ints(&weights)?, parse_int(&goal)?)?.into()
            }
            InstanceDoc::Rank1Quadratic { u, v } => {
                Rank1QuadraticProgram::new(parse_ints(&u)?, parse_ints(&v)?)?.into()
            }
            InstanceDoc::Quadratic { matrix } => {
                QuadraticProgram::new(matrix.iter().map(|r| parse_ints(r)).collect::<Result<_>>()?)?.into()
            }
            InstanceDoc::Hyperbolic { a0, a, b0, b } => HyperbolicProgram::new(
                LinearForm::new(parse_int(&a0)?, parse_ints(&a)?),
                LinearForm::new(parse_int(&b0)?, parse_ints(&b)?),
            )?
            .into(),
        })
    }
}

pub fn instance_to_json(inst: &Instance) -> String {
    serde_json::to_string(&InstanceDoc::from(inst)).expect("instance documents always serialize")
}

/// Parses an instance document. Unknown fields are ignored, so the output of
/// a reduction (which carries extra metadata) parses as its target instance.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    Instance::try_from(doc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueDoc {
    pub num: String,
    pub den: String,
}

impl From<&ExactValue> for ValueDoc {
    fn from(v: &ExactValue) -> Self {
        ValueDoc { num: dec(v.numer()), den: dec(v.denom()) }
    }
}

impl TryFrom<&ValueDoc> for ExactValue {
    type Error = Error;

    fn try_from(doc: &ValueDoc) -> Result<Self> {
        ExactValue::ratio(parse_int(&doc.num)?, parse_int(&doc.den)?)
    }
}

fn bits_doc(x: &Assignment) -> Vec<u8> {
    x.to_bits()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub status: Status,
    pub optimal_value: Option<ValueDoc>,
    pub witnesses: Vec<Vec<u8>>,
    pub stats: OracleStats,
    pub method: Method,
    pub search: Search,
}

impl From<&UniquenessReport> for ReportDoc {
    fn from(r: &UniquenessReport) -> Self {
        ReportDoc {
            status: r.status,
            optimal_value: r.optimal_value.as_ref().map(ValueDoc::from),
            witnesses: r.witnesses.iter().map(bits_doc).collect(),
            stats: r.stats,
            method: r.method,
            search: r.search,
        }
    }
}

impl TryFrom<ReportDoc> for UniquenessReport {
    type Error = Error;

    fn try_from(doc: ReportDoc) -> Result<Self> {
        Ok(UniquenessReport {
            status: doc.status,
            optimal_value: doc.optimal_value.as_ref().map(ExactValue::try_from).transpose()?,
            witnesses: doc.witnesses.iter().map(|w| Assignment::from_bits(w)).collect::<Result<_>>()?,
            stats: doc.stats,
            method: doc.method,
            search: doc.search,
        })
    }
}

pub fn report_to_json(r: &UniquenessReport) -> String {
    serde_json::to_string(&ReportDoc::from(r)).expect("reports always serialize")
}

pub fn parse_report(text: &str) -> Result<UniquenessReport> {
    let doc: ReportDoc = serde_json::from_str(text)?;
    UniquenessReport::try_from(doc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MismatchDoc {
    pub direction: Direction,
    pub from: Vec<u8>,
    pub image: Option<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionDoc {
    pub left_optimizers: String,
    pub right_optimizers: String,
    pub matched: bool,
    pub counterexample: Option<MismatchDoc>,
}

impl From<&BijectionReport> for BijectionDoc {
    fn from(r: &BijectionReport) -> Self {
        BijectionDoc {
            left_optimizers: r.left_optimizers.to_string(),
            right_optimizers: r.right_optimizers.to_string(),
            matched: r.matched,
            counterexample: r.counterexample.as_ref().map(|m| MismatchDoc {
                direction: m.direction,
                from: bits_doc(&m.from),
                image: m.image.as_ref().map(bits_doc),
            }),
        }
    }
}

impl TryFrom<BijectionDoc> for BijectionReport {
    type Error = Error;

    fn try_from(doc: BijectionDoc) -> Result<Self> {
        let count = |s: &str| s.parse::<u64>().map_err(|e| Error::Parse(format!("`{s}`: {e}")));
        Ok(BijectionReport {
            left_optimizers: count(&doc.left_optimizers)?,
            right_optimizers: count(&doc.right_optimizers)?,
            matched: doc.matched,
            counterexample: doc
                .counterexample
                .map(|m| -> Result<Mismatch> {
                    Ok(Mismatch {
                        direction: m.direction,
                        from: Assignment::from_bits(&m.from)?,
                        image: m.image.as_deref().map(Assignment::from_bits).transpose()?,
                    })
                })
                .transpose()?,
        })
    }
}

/// A reduction result: the target instance document, flattened, plus the
/// solution map and any normalization notices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedDoc {
    #[serde(flatten)]
    pub instance: InstanceDoc,
    pub solution_map: Vec<SolutionMap>,
    pub notices: Vec<String>,
}
