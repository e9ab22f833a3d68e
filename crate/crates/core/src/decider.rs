//! Two-phase uniqueness decision.
//!
//! Phase one locates the exact optimum with threshold queries: plain
//! bisection over the integers in `[-S, S]` for the integer-valued families,
//! and for hyperbolic programs a dyadic bisection down to an interval shorter
//! than `1/S²` followed by simplest-rational reconstruction. Phase two asks
//! the oracle for two distinct assignments attaining that optimum.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::brute;
use crate::error::{Error, Result};
use crate::model::{Assignment, ExactValue, Instance, Sense};
use crate::oracle::{Objective, Oracle, OracleStats};
use crate::rational::{ceil_log2, floor_div2, midpoint, simplest_rational_in};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Unique,
    Multiple,
    Infeasible,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Unique => "unique",
            Status::Multiple => "multiple",
            Status::Infeasible => "infeasible",
        }
    }
}

/// Which procedure produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Oracle,
    Brute,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Brute => "brute",
        }
    }
}

/// How the optimum was located.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Search {
    IntegerBisection,
    /// Dyadic bisection with continued-fraction reconstruction.
    #[serde(rename = "dyadic_bisection_simplest_rational")]
    DyadicBisection,
    Exhaustive,
}

impl Search {
    pub fn as_str(self) -> &'static str {
        match self {
            Search::IntegerBisection => "integer_bisection",
            Search::DyadicBisection => "dyadic_bisection_simplest_rational",
            Search::Exhaustive => "exhaustive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessReport {
    pub status: Status,
    pub optimal_value: Option<ExactValue>,
    /// One witness if unique, the two lexicographically smallest optima if
    /// not, none if infeasible.
    pub witnesses: Vec<Assignment>,
    pub stats: OracleStats,
    pub method: Method,
    pub search: Search,
}

impl UniquenessReport {
    fn infeasible(stats: OracleStats, method: Method, search: Search) -> Self {
        UniquenessReport { status: Status::Infeasible, optimal_value: None, witnesses: vec![], stats, method, search }
    }

    fn from_optima(
        value: ExactValue,
        witnesses: Vec<Assignment>,
        stats: OracleStats,
        method: Method,
        search: Search,
    ) -> Self {
        match witnesses.len() {
            0 => Self::infeasible(stats, method, search),
            1 => UniquenessReport {
                status: Status::Unique,
                optimal_value: Some(value),
                witnesses,
                stats,
                method,
                search,
            },
            _ => UniquenessReport {
                status: Status::Multiple,
                optimal_value: Some(value),
                witnesses,
                stats,
                method,
                search,
            },
        }
    }

    /// True when the report carries the same verdict, optimum and witnesses,
    /// regardless of which procedure produced it.
    pub fn same_answer(&self, other: &UniquenessReport) -> bool {
        self.status == other.status && self.optimal_value == other.optimal_value && self.witnesses == other.witnesses
    }
}

/// An exact optimum and one assignment attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub value: ExactValue,
    pub witness: Assignment,
    pub stats: OracleStats,
}

fn stats_since(oracle: &dyn Oracle, start: OracleStats) -> OracleStats {
    let now = oracle.stats();
    OracleStats {
        threshold_queries: now.threshold_queries - start.threshold_queries,
        witness_queries: now.witness_queries - start.witness_queries,
        assignments_examined: now.assignments_examined - start.assignments_examined,
    }
}

/// Upper bound on the threshold queries of the integer search.
pub fn integer_query_budget(s: &BigInt) -> u64 {
    if s.is_zero() {
        0
    } else {
        ceil_log2(&(s * 2 + 1))
    }
}

/// Upper bound on the threshold queries of the rational search.
pub fn rational_query_budget(s: &BigInt) -> u64 {
    if s.is_zero() {
        0
    } else {
        ceil_log2(&(s * s * s * 4)) + 2
    }
}

/// Threshold answer with "nothing is feasible" read as "no".
fn at_least(obj: &Objective, oracle: &dyn Oracle, t: ExactValue) -> Result<Option<Assignment>> {
    match oracle.exists_at_least(obj, &t) {
        Err(Error::NoFeasiblePoint) => Ok(None),
        other => other,
    }
}

/// Bisection over the integers in `[-S, S]`.
///
/// The result is the optimum whenever one exists. The witness is absent when
/// no query succeeded: then the optimum, if any, is the far end of the
/// interval and the caller must check that something attains it.
fn integer_search(obj: &Objective, oracle: &dyn Oracle) -> Result<(BigInt, Option<Assignment>)> {
    let s = obj.value_bound();
    let mut lo = -s.clone();
    let mut hi = s;
    let mut witness = None;
    match obj.sense() {
        Sense::Minimize => {
            // lo <= c* <= hi, and `witness` attains hi once set.
            while lo < hi {
                let mid = floor_div2(&(&lo + &hi));
                match oracle.exists_at_most(obj, &mid)? {
                    Some(w) => {
                        hi = mid;
                        witness = Some(w);
                    }
                    None => lo = mid + 1,
                }
            }
        }
        Sense::Maximize => {
            while lo < hi {
                let mid = -floor_div2(&-(&lo + &hi));
                match at_least(obj, oracle, ExactValue::integer(mid.clone()))? {
                    Some(w) => {
                        lo = mid;
                        witness = Some(w);
                    }
                    None => hi = mid - 1,
                }
            }
        }
    }
    Ok((lo, witness))
}

/// Dyadic bisection for the maximum of a hyperbolic program, with the same
/// contract as `integer_search`.
fn rational_search(obj: &Objective, oracle: &dyn Oracle) -> Result<(ExactValue, Option<Assignment>)> {
    let Instance::Hyperbolic(h) = obj else {
        return Err(Error::WrongSense("rational search needs a hyperbolic program"));
    };
    let s = h.coefficient_sum();
    if s.is_zero() {
        // The denominator is identically zero.
        return Ok((ExactValue::integer(0), None));
    }

    let top = BigRational::from_integer(s.clone());
    // Every value is at most S; reaching it ends the search.
    if let Some(w) = at_least(obj, oracle, ExactValue::from_rational(top.clone()))? {
        return Ok((ExactValue::from_rational(top), Some(w)));
    }

    // g(t) = "some value >= t". If anything is feasible g(lo) holds, since
    // every value is >= -S; g(hi) fails.
    let mut lo = -top.clone();
    let mut hi = top;
    let mut witness = None;
    let width = BigRational::new(BigInt::one(), &s * &s);
    while &hi - &lo >= width {
        let mid = midpoint(&lo, &hi);
        match at_least(obj, oracle, ExactValue::from_rational(mid.clone()))? {
            Some(w) => {
                lo = mid;
                witness = Some(w);
            }
            None => hi = mid,
        }
    }
    let value = simplest_rational_in(&ExactValue::from_rational(lo), &ExactValue::from_rational(hi));
    Ok((value, witness))
}

fn locate(obj: &Objective, oracle: &dyn Oracle) -> Result<(ExactValue, Option<Assignment>)> {
    if obj.is_integral() {
        integer_search(obj, oracle).map(|(c, w)| (ExactValue::integer(c), w))
    } else {
        rational_search(obj, oracle)
    }
}

fn search_kind(obj: &Objective) -> Search {
    if obj.is_integral() {
        Search::IntegerBisection
    } else {
        Search::DyadicBisection
    }
}

/// Locates the exact optimum of any objective; `None` if infeasible.
pub fn solve(obj: &Objective, oracle: &dyn Oracle) -> Result<Option<Optimum>> {
    let start = oracle.stats();
    let (value, witness) = locate(obj, oracle)?;
    let witness = match witness {
        Some(w) => w,
        // The optimum was never confirmed by a query; ask for it directly.
        None => match oracle.witnesses_at(obj, &value)?.into_iter().next() {
            Some(w) => w,
            None => return Ok(None),
        },
    };
    Ok(Some(Optimum { value, witness, stats: stats_since(oracle, start) }))
}

/// Exact minimum of a quadratic-type objective (general, rank-1 or subset sum
/// with goal value) by integer bisection.
pub fn solve_min_quadratic(obj: &Objective, oracle: &dyn Oracle) -> Result<Optimum> {
    if obj.sense() != Sense::Minimize {
        return Err(Error::WrongSense("solve_min_quadratic needs a minimization objective"));
    }
    // Minimization objectives have no feasibility constraint.
    solve(obj, oracle)?.ok_or(Error::NoFeasiblePoint)
}

/// Exact maximum of a hyperbolic program as a reduced fraction.
pub fn solve_max_hyperbolic(obj: &Objective, oracle: &dyn Oracle) -> Result<Optimum> {
    if !matches!(obj, Instance::Hyperbolic(_)) {
        return Err(Error::WrongSense("solve_max_hyperbolic needs a hyperbolic program"));
    }
    solve(obj, oracle)?.ok_or(Error::NoFeasiblePoint)
}

/// Decides whether `obj` has a unique optimal solution using threshold
/// queries followed by a single two-witness query. Infeasibility shows up as
/// an empty answer to that query.
pub fn decide_unique(obj: &Objective, oracle: &dyn Oracle) -> Result<UniquenessReport> {
    let start = oracle.stats();
    let (value, _) = locate(obj, oracle)?;
    let witnesses = oracle.witnesses_at(obj, &value)?;
    Ok(UniquenessReport::from_optima(value, witnesses, stats_since(oracle, start), Method::Oracle, search_kind(obj)))
}

/// Independent referee: one full enumeration, evaluating every assignment
/// from scratch.
pub fn brute_force_unique(obj: &Objective, limit: usize) -> Result<UniquenessReport> {
    let optima = brute::optima(obj, limit, 2)?;
    Ok(match optima.value {
        None => UniquenessReport::infeasible(OracleStats::default(), Method::Brute, Search::Exhaustive),
        Some(v) => UniquenessReport::from_optima(
            v,
            optima.optimizers,
            OracleStats::default(),
            Method::Brute,
            Search::Exhaustive,
        ),
    })
}
