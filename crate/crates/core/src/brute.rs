//! Plain exhaustive optimization, used as an independent referee.
//!
//! Every assignment is evaluated from scratch through the model's own
//! evaluation functions; nothing here shares code with the oracle's
//! incremental scan.

use crate::error::{Error, Result};
use crate::model::{Assignment, ExactValue, Instance};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optima {
    /// Optimal value, `None` if no assignment is feasible.
    pub value: Option<ExactValue>,
    /// The lexicographically smallest optimizers, at most `keep` of them.
    pub optimizers: Vec<Assignment>,
    /// Total number of optimizers.
    pub count: u64,
}

pub fn check_limit(inst: &Instance, limit: usize) -> Result<()> {
    let n = inst.dimension();
    if n > limit || n >= 63 {
        Err(Error::TooLarge { n, limit })
    } else {
        Ok(())
    }
}

/// Enumerates all `2^n` assignments of `inst` in lexicographic order.
pub fn optima(inst: &Instance, limit: usize, keep: usize) -> Result<Optima> {
    check_limit(inst, limit)?;
    let n = inst.dimension();
    let mut best: Option<ExactValue> = None;
    let mut optimizers = Vec::new();
    let mut count = 0u64;
    for index in 0..1u64 << n {
        let x = Assignment::from_index(index, n);
        let Some(v) = inst.value(&x)? else { continue };
        let improves = match &best {
            None => true,
            Some(b) => inst.better(&v, b),
        };
        if improves {
            best = Some(v);
            optimizers.clear();
            count = 0;
        } else if best.as_ref() != Some(&v) {
            continue;
        }
        count += 1;
        if optimizers.len() < keep {
            optimizers.push(x);
        }
    }
    Ok(Optima { value: best, optimizers, count })
}

/// Every distinct feasible value of `inst`, sorted ascending.
pub fn achievable_values(inst: &Instance, limit: usize) -> Result<Vec<ExactValue>> {
    check_limit(inst, limit)?;
    let n = inst.dimension();
    let mut values = Vec::new();
    for index in 0..1u64 << n {
        if let Some(v) = inst.value(&Assignment::from_index(index, n))? {
            values.push(v);
        }
    }
    values.sort();
    values.dedup();
    Ok(values)
}
