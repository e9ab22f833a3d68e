//! The existence oracle used by the decision procedures.
//!
//! Every question is of the form "is there a feasible assignment whose value
//! compares to a threshold in a given way", which is an NP question for all
//! five families. [`EnumerationOracle`] answers it by exhaustive search and
//! always returns the lexicographically smallest witnesses, so answers do not
//! depend on how the search is split across threads.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::enumerate::{self, Cmp, Query};
use crate::error::{Error, Result};
use crate::model::{Assignment, ExactValue, Instance, Sense};

/// The objective an oracle query is asked about. Each instance family carries
/// its own sense and feasibility rule (`w(I) = W` for knapsack, a nonzero
/// denominator for hyperbolic programs).
pub type Objective = Instance;

pub const DEFAULT_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleStats {
    pub threshold_queries: u64,
    pub witness_queries: u64,
    pub assignments_examined: u64,
}

pub trait Oracle {
    /// A witness with value `<= c` for a minimization objective.
    fn exists_at_most(&self, obj: &Objective, c: &BigInt) -> Result<Option<Assignment>>;

    /// A feasible witness with value `>= t` for a maximization objective.
    /// Fails with [`Error::NoFeasiblePoint`] if no assignment is feasible.
    fn exists_at_least(&self, obj: &Objective, t: &ExactValue) -> Result<Option<Assignment>>;

    /// The (at most two) lexicographically smallest feasible assignments with
    /// value exactly `v`. This is the two-witness question: asking for a
    /// second optimum, and reporting the first one found on the way.
    fn witnesses_at(&self, obj: &Objective, v: &ExactValue) -> Result<Vec<Assignment>>;

    /// Number of feasible assignments with value `v`, truncated at `cap`.
    fn count_optima(&self, obj: &Objective, v: &ExactValue, cap: u64) -> Result<u64>;

    fn stats(&self) -> OracleStats;

    fn two_optima_at(&self, obj: &Objective, v: &ExactValue) -> Result<Option<(Assignment, Assignment)>> {
        let mut w = self.witnesses_at(obj, v)?;
        Ok(if w.len() == 2 {
            let second = w.pop().unwrap();
            let first = w.pop().unwrap();
            Some((first, second))
        } else {
            None
        })
    }
}

/// Exhaustive-search oracle for instances with at most `limit` variables.
#[derive(Debug)]
pub struct EnumerationOracle {
    limit: usize,
    parallel: bool,
    threshold_queries: AtomicU64,
    witness_queries: AtomicU64,
    assignments_examined: AtomicU64,
}

impl Default for EnumerationOracle {
    fn default() -> Self {
        Self::new()
    }
}

impl EnumerationOracle {
    pub fn new() -> Self {
        EnumerationOracle {
            limit: DEFAULT_LIMIT,
            parallel: true,
            threshold_queries: AtomicU64::new(0),
            witness_queries: AtomicU64::new(0),
            assignments_examined: AtomicU64::new(0),
        }
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        // Indices are u64 and scans need one spare bit.
        self.limit = limit.min(62);
        self
    }

    /// Enables or disables multi-threaded scans. Answers are identical either way.
    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    fn check_size(&self, obj: &Objective) -> Result<()> {
        let n = obj.dimension();
        if n > self.limit {
            Err(Error::TooLarge { n, limit: self.limit })
        } else {
            Ok(())
        }
    }

    fn run(&self, obj: &Objective, cmp: Cmp, threshold: &ExactValue, want: usize) -> enumerate::ScanOutcome {
        let out = enumerate::scan(obj, &Query { cmp, threshold }, want, self.parallel);
        self.assignments_examined.fetch_add(out.examined, Ordering::Relaxed);
        out
    }

    fn first(obj: &Objective, out: &enumerate::ScanOutcome) -> Option<Assignment> {
        out.hits.first().map(|&i| Assignment::from_index(i, obj.dimension()))
    }
}

impl Oracle for EnumerationOracle {
    fn exists_at_most(&self, obj: &Objective, c: &BigInt) -> Result<Option<Assignment>> {
        if obj.sense() != Sense::Minimize {
            return Err(Error::WrongSense("exists_at_most needs a minimization objective"));
        }
        self.check_size(obj)?;
        self.threshold_queries.fetch_add(1, Ordering::Relaxed);
        let out = self.run(obj, Cmp::AtMost, &ExactValue::integer(c.clone()), 1);
        Ok(Self::first(obj, &out))
    }

    fn exists_at_least(&self, obj: &Objective, t: &ExactValue) -> Result<Option<Assignment>> {
        if obj.sense() != Sense::Maximize {
            return Err(Error::WrongSense("exists_at_least needs a maximization objective"));
        }
        self.check_size(obj)?;
        self.threshold_queries.fetch_add(1, Ordering::Relaxed);
        let out = self.run(obj, Cmp::AtLeast, t, 1);
        if out.hits.is_empty() && !out.any_feasible {
            return Err(Error::NoFeasiblePoint);
        }
        Ok(Self::first(obj, &out))
    }

    fn witnesses_at(&self, obj: &Objective, v: &ExactValue) -> Result<Vec<Assignment>> {
        self.check_size(obj)?;
        self.witness_queries.fetch_add(1, Ordering::Relaxed);
        let out = self.run(obj, Cmp::Equal, v, 2);
        let n = obj.dimension();
        Ok(out.hits.iter().map(|&i| Assignment::from_index(i, n)).collect())
    }

    fn count_optima(&self, obj: &Objective, v: &ExactValue, cap: u64) -> Result<u64> {
        self.check_size(obj)?;
        self.witness_queries.fetch_add(1, Ordering::Relaxed);
        let want = usize::try_from(cap).unwrap_or(usize::MAX);
        let out = self.run(obj, Cmp::Equal, v, want);
        Ok(out.hits.len() as u64)
    }

    fn stats(&self) -> OracleStats {
        OracleStats {
            threshold_queries: self.threshold_queries.load(Ordering::Relaxed),
            witness_queries: self.witness_queries.load(Ordering::Relaxed),
            assignments_examined: self.assignments_examined.load(Ordering::Relaxed),
        }
    }
}
