//! Exact uniqueness decisions for 0-1 quadratic and hyperbolic programs.
//!
//! The crate covers five problem families (equality-constrained knapsack,
//! subset sum with goal value, rank-1 and general quadratic programs, and
//! hyperbolic ratio programs), the reductions that compile knapsack instances
//! into the other families, and a two-phase decision procedure: locate the
//! exact optimum with threshold queries to an existence oracle, then ask the
//! oracle for two distinct optima.
//!
//! ```
//! use uniqopt::{decide_unique, EnumerationOracle, KnapsackInstance, Status};
//!
//! let k = KnapsackInstance::from_i64(&[1, 2, 3], &[6, 10, 12], 3).unwrap();
//! let report = decide_unique(&k.into(), &EnumerationOracle::new()).unwrap();
//! assert_eq!(report.status, Status::Unique);
//! ```

mod brute;
pub mod decider;
mod enumerate;
pub mod error;
pub mod generate;
pub mod json;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod reductions;

pub use brute::{achievable_values, optima, Optima};
pub use decider::{
    brute_force_unique, decide_unique, integer_query_budget, rational_query_budget, solve, solve_max_hyperbolic,
    solve_min_quadratic, Method, Optimum, Search, Status, UniquenessReport,
};
pub use error::{Error, Result};
pub use model::{
    Assignment, ExactValue, HyperbolicProgram, Instance, Kind, KnapsackInstance, LinearForm, QuadraticProgram,
    Rank1QuadraticProgram, Sense, SubsetSumGoalInstance,
};
pub use oracle::{EnumerationOracle, Objective, Oracle, OracleStats, DEFAULT_LIMIT};
pub use rational::simplest_rational_in;
