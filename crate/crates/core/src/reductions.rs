//! Instance compilers for the reduction chain
//! knapsack → subset sum with goal value → rank-1 quadratic, and
//! knapsack → hyperbolic, together with the maps that carry optimal
//! solutions across each step.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::brute;
use crate::error::{Error, Result};
use crate::model::{
    Assignment, HyperbolicProgram, Instance, Kind, KnapsackInstance, LinearForm, Rank1QuadraticProgram,
    SubsetSumGoalInstance,
};
use crate::oracle::DEFAULT_LIMIT;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapRule {
    IdentityOnItems,
    DropAuxiliaryVariable,
    #[serde(rename = "add_auxiliary_variable_set_to_1")]
    AddAuxiliaryVariableSetTo1,
}

/// One positional step carrying assignments between two instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionMap {
    pub direction: Direction,
    pub rule: MapRule,
}

impl SolutionMap {
    pub const IDENTITY: SolutionMap = SolutionMap { direction: Direction::Forward, rule: MapRule::IdentityOnItems };
    pub const APPEND_ONE: SolutionMap =
        SolutionMap { direction: Direction::Forward, rule: MapRule::AddAuxiliaryVariableSetTo1 };

    pub fn inverse(self) -> SolutionMap {
        let direction = match self.direction {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        };
        let rule = match self.rule {
            MapRule::IdentityOnItems => MapRule::IdentityOnItems,
            MapRule::DropAuxiliaryVariable => MapRule::AddAuxiliaryVariableSetTo1,
            MapRule::AddAuxiliaryVariableSetTo1 => MapRule::DropAuxiliaryVariable,
        };
        SolutionMap { direction, rule }
    }
}

/// Applies one map to an optimizer of its source side.
pub fn map_optimizer(map: &SolutionMap, x: &Assignment) -> Result<Assignment> {
    match map.rule {
        MapRule::IdentityOnItems => Ok(x.clone()),
        MapRule::AddAuxiliaryVariableSetTo1 => {
            let mut bits = x.clone().into_bits();
            bits.push(true);
            Ok(Assignment::new(bits))
        }
        MapRule::DropAuxiliaryVariable => {
            let mut bits = x.clone().into_bits();
            match bits.pop() {
                Some(true) => Ok(Assignment::new(bits)),
                _ => Err(Error::NotAnOptimizerShape),
            }
        }
    }
}

/// Applies a chain of maps left to right.
pub fn map_chain(maps: &[SolutionMap], x: &Assignment) -> Result<Assignment> {
    maps.iter().try_fold(x.clone(), |acc, m| map_optimizer(m, &acc))
}

/// The inverse chain, carrying target assignments back to the source.
pub fn inverse_chain(maps: &[SolutionMap]) -> Vec<SolutionMap> {
    maps.iter().rev().map(|m| m.inverse()).collect()
}

/// If the total profit is zero, appends an item of weight 0 and profit 1.
///
/// Every optimizer of the result contains the new item, so `I ↦ I ∪ {new}`
/// is a bijection between the optimizers of the two instances.
pub fn normalize_profit(inst: &KnapsackInstance) -> KnapsackInstance {
    let mut out = inst.clone();
    if inst.total_profit().is_zero() {
        out.push_item(BigInt::zero(), BigInt::one());
    }
    out
}

/// Whether some subset weighs exactly the bound, or `None` if the instance
/// has more than `limit` items.
pub fn has_feasible_subset(inst: &KnapsackInstance, limit: usize) -> Option<bool> {
    if inst.len() > limit {
        return None;
    }
    let bound = inst.bound();
    // Reachable subset weights not exceeding the bound.
    let mut reach: BTreeSet<BigInt> = BTreeSet::from([BigInt::zero()]);
    for w in inst.weights() {
        if w.is_zero() {
            continue;
        }
        let next: Vec<BigInt> = reach.iter().map(|r| r + w).filter(|s| s <= bound).collect();
        reach.extend(next);
        if reach.contains(bound) {
            return Some(true);
        }
    }
    Some(reach.contains(bound))
}

/// Appends a dummy item of weight `W` and profit 0 unless some subset already
/// weighs exactly `W`. Instances with more than `limit` items are padded
/// without checking.
pub fn pad_feasible_with_limit(inst: &KnapsackInstance, limit: usize) -> KnapsackInstance {
    let mut out = inst.clone();
    if has_feasible_subset(inst, limit) != Some(true) {
        out.push_item(inst.bound().clone(), BigInt::zero());
    }
    out
}

pub fn pad_feasible(inst: &KnapsackInstance) -> KnapsackInstance {
    pad_feasible_with_limit(inst, DEFAULT_LIMIT)
}

/// Subset sum with goal value: `q_i = 3 w_i P + p_i`, `Q = (3W + 1) P`.
///
/// Sets with `w(I) = W` land in `[Q - P, Q]`, all others at distance at least
/// `2P` from the goal, so the minimizers are exactly the most profitable
/// feasible sets.
pub fn knapsack_to_ssg(inst: &KnapsackInstance) -> Result<SubsetSumGoalInstance> {
    let p_total = inst.total_profit();
    if p_total.is_zero() {
        return Err(Error::ProfitSumZero);
    }
    let three_p: BigInt = &p_total * 3;
    let weights = inst.weights().iter().zip(inst.profits()).map(|(w, p)| w * &three_p + p).collect();
    let goal = (inst.bound() * 3 + 1) * &p_total;
    SubsetSumGoalInstance::new(weights, goal)
}

/// `f(x) = (q·x - 3Q x_{n+1}) (q·x + Q x_{n+1})` over `n + 1` variables.
///
/// With the auxiliary bit set this is `(q·x - Q)² - 4Q²`; with it clear it is
/// a square, hence never below the value `-3Q²` at `(0, …, 0, 1)`.
pub fn ssg_to_rank1(inst: &SubsetSumGoalInstance) -> Result<Rank1QuadraticProgram> {
    let goal = inst.goal();
    if goal.is_zero() {
        return Err(Error::GoalZero);
    }
    let mut u = inst.weights().to_vec();
    let mut v = inst.weights().to_vec();
    u.push(-(goal * 3u32));
    v.push(goal.clone());
    Rank1QuadraticProgram::new(u, v)
}

/// `f(x) = (2 + p·x) / (1 + 2P (W - w·x))`.
///
/// Feasible sets have denominator 1 and value `2 + p(I) >= 2`; lighter sets
/// stay below 2 and heavier ones are negative.
pub fn knapsack_to_hyperbolic(inst: &KnapsackInstance) -> Result<HyperbolicProgram> {
    let p_total = inst.total_profit();
    if p_total.is_zero() {
        return Err(Error::ProfitSumZero);
    }
    if has_feasible_subset(inst, DEFAULT_LIMIT) == Some(false) {
        return Err(Error::InfeasibleInstance);
    }
    let two_p: BigInt = &p_total * 2;
    let numerator = LinearForm::new(BigInt::from(2), inst.profits().to_vec());
    let coeffs = inst.weights().iter().map(|w| -(w * &two_p)).collect::<Vec<BigInt>>();
    let denominator = LinearForm::new(&two_p * inst.bound() + 1, coeffs);
    HyperbolicProgram::new(numerator, denominator)
}

/// A normalization applied before a knapsack-sourced reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Notice {
    ProfitNormalized,
    FeasibilityPadded,
}

impl Notice {
    pub fn as_str(self) -> &'static str {
        match self {
            Notice::ProfitNormalized => "profit normalized",
            Notice::FeasibilityPadded => "feasibility padded",
        }
    }
}

impl fmt::Display for Notice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A compiled reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compiled {
    /// The instance as given.
    pub source: Instance,
    /// The source after normalization; the reduction is applied to this.
    pub prepared: Instance,
    pub target: Instance,
    /// Carries optimizers of `source` to `prepared`. `None` when padding
    /// changed the problem (the source was infeasible, so there is nothing to
    /// carry).
    pub normalization: Option<Vec<SolutionMap>>,
    /// Carries optimizers of `prepared` to `target`.
    pub solution_map: Vec<SolutionMap>,
    pub notices: Vec<Notice>,
}

impl Compiled {
    /// The end-to-end map from `source` to `target`, when one exists.
    pub fn full_map(&self) -> Option<Vec<SolutionMap>> {
        self.normalization.as_ref().map(|n| n.iter().chain(&self.solution_map).copied().collect())
    }
}

/// Applies `normalize_profit` then `pad_feasible`, recording what changed.
pub fn prepare_knapsack(
    inst: &KnapsackInstance,
    limit: usize,
) -> (KnapsackInstance, Option<Vec<SolutionMap>>, Vec<Notice>) {
    let mut notices = Vec::new();
    let mut maps = Vec::new();
    let normalized = normalize_profit(inst);
    if normalized.len() != inst.len() {
        notices.push(Notice::ProfitNormalized);
        maps.push(SolutionMap::APPEND_ONE);
    }
    let padded = pad_feasible_with_limit(&normalized, limit);
    if padded.len() != normalized.len() {
        notices.push(Notice::FeasibilityPadded);
        return (padded, None, notices);
    }
    (padded, Some(maps), notices)
}

/// Compiles `source` into an instance of kind `to`. Supported steps are
/// knapsack → subset sum with goal value, subset sum → rank-1 quadratic,
/// knapsack → hyperbolic, and knapsack → rank-1 quadratic through subset sum.
pub fn compile(source: &Instance, to: Kind, limit: usize) -> Result<Compiled> {
    match (source, to) {
        (Instance::Knapsack(k), Kind::SubsetSumGoal | Kind::Hyperbolic | Kind::Rank1Quadratic) => {
            let (prepared, normalization, notices) = prepare_knapsack(k, limit);
            let (target, solution_map): (Instance, _) = match to {
                Kind::SubsetSumGoal => (knapsack_to_ssg(&prepared)?.into(), vec![SolutionMap::IDENTITY]),
                Kind::Hyperbolic => (knapsack_to_hyperbolic(&prepared)?.into(), vec![SolutionMap::IDENTITY]),
                _ => (
                    ssg_to_rank1(&knapsack_to_ssg(&prepared)?)?.into(),
                    vec![SolutionMap::IDENTITY, SolutionMap::APPEND_ONE],
                ),
            };
            Ok(Compiled {
                source: source.clone(),
                prepared: prepared.into(),
                target,
                normalization,
                solution_map,
                notices,
            })
        }
        (Instance::SubsetSumGoal(s), Kind::Rank1Quadratic) => Ok(Compiled {
            source: source.clone(),
            prepared: source.clone(),
            target: ssg_to_rank1(s)?.into(),
            normalization: Some(vec![]),
            solution_map: vec![SolutionMap::APPEND_ONE],
            notices: vec![],
        }),
        (src, to) => Err(Error::InvalidInstance(format!("no reduction from {} to {}", src.kind(), to))),
    }
}

/// An optimizer that a map fails to carry onto an optimizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub direction: Direction,
    pub from: Assignment,
    /// The image, if the map could be applied at all.
    pub image: Option<Assignment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectionReport {
    pub left_optimizers: u64,
    pub right_optimizers: u64,
    pub matched: bool,
    /// The lexicographically first failure, forward direction first.
    pub counterexample: Option<Mismatch>,
}

/// Exhaustively checks that `maps` restricted to the optimizers of `source`
/// is a bijection onto the optimizers of `target`.
pub fn verify_bijection(
    source: &Instance,
    target: &Instance,
    maps: &[SolutionMap],
    limit: usize,
) -> Result<BijectionReport> {
    brute::check_limit(source, limit)?;
    brute::check_limit(target, limit)?;
    let left = brute::optima(source, limit, usize::MAX)?;
    let right = brute::optima(target, limit, usize::MAX)?;
    let left_set: BTreeSet<&Assignment> = left.optimizers.iter().collect();
    let right_set: BTreeSet<&Assignment> = right.optimizers.iter().collect();

    let check = |direction, xs: &[Assignment], chain: &[SolutionMap], dest: &BTreeSet<&Assignment>| {
        xs.iter().find_map(|x| match map_chain(chain, x) {
            Ok(y) if dest.contains(&y) => None,
            Ok(y) => Some(Mismatch { direction, from: x.clone(), image: Some(y) }),
            Err(_) => Some(Mismatch { direction, from: x.clone(), image: None }),
        })
    };
    let back = inverse_chain(maps);
    let counterexample = check(Direction::Forward, &left.optimizers, maps, &right_set)
        .or_else(|| check(Direction::Backward, &right.optimizers, &back, &left_set));

    Ok(BijectionReport {
        left_optimizers: left.count,
        right_optimizers: right.count,
        matched: counterexample.is_none() && left.count == right.count,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ExactValue;

    fn bits(b: &[u8]) -> Assignment {
        Assignment::from_bits(b).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn worked() -> KnapsackInstance {
        KnapsackInstance::from_i64(&[1, 2, 3], &[6, 10, 12], 3).unwrap()
    }

    #[test]
    fn normalize_profit_cases() {
        let k = KnapsackInstance::from_i64(&[1, 2], &[2, 3], 2).unwrap();
        assert_eq!(normalize_profit(&k), k);
        let k = KnapsackInstance::from_i64(&[1, 1], &[0, 0], 1).unwrap();
        assert_eq!(normalize_profit(&k), KnapsackInstance::from_i64(&[1, 1, 0], &[0, 0, 1], 1).unwrap());
        let k = KnapsackInstance::from_i64(&[], &[], 0).unwrap();
        assert_eq!(normalize_profit(&k), KnapsackInstance::from_i64(&[0], &[1], 0).unwrap());
    }

    #[test]
    fn pad_feasible_cases() {
        assert_eq!(pad_feasible(&worked()), worked());
        let k = KnapsackInstance::from_i64(&[2], &[7], 1).unwrap();
        assert_eq!(pad_feasible(&k), KnapsackInstance::from_i64(&[2, 1], &[7, 0], 1).unwrap());
        let k = KnapsackInstance::from_i64(&[5, 6], &[1, 1], 0).unwrap();
        assert_eq!(pad_feasible(&k), k);
        // Above the limit the dummy is appended without looking.
        assert_eq!(pad_feasible_with_limit(&worked(), 2).len(), 4);
    }

    #[test]
    fn knapsack_to_ssg_formulas() {
        let s = knapsack_to_ssg(&worked()).unwrap();
        assert_eq!(s.weights(), big(&[90, 178, 264]).as_slice());
        assert_eq!(s.goal(), &BigInt::from(280));
        let s = knapsack_to_ssg(&KnapsackInstance::from_i64(&[1], &[1], 1).unwrap()).unwrap();
        assert_eq!((s.weights(), s.goal()), (big(&[4]).as_slice(), &BigInt::from(4)));
        let s = knapsack_to_ssg(&KnapsackInstance::from_i64(&[0], &[1], 0).unwrap()).unwrap();
        assert_eq!((s.weights(), s.goal()), (big(&[1]).as_slice(), &BigInt::from(1)));
        let zero = KnapsackInstance::from_i64(&[1], &[0], 1).unwrap();
        assert_eq!(knapsack_to_ssg(&zero), Err(Error::ProfitSumZero));
    }

    #[test]
    fn ssg_to_rank1_formulas() {
        let r = ssg_to_rank1(&SubsetSumGoalInstance::from_i64(&[5], 5).unwrap()).unwrap();
        assert_eq!((r.u(), r.v()), (big(&[5, -15]).as_slice(), big(&[5, 5]).as_slice()));
        let s = SubsetSumGoalInstance::from_i64(&[90, 178, 264], 280).unwrap();
        let r = ssg_to_rank1(&s).unwrap();
        assert_eq!(r.u(), big(&[90, 178, 264, -840]).as_slice());
        assert_eq!(r.v(), big(&[90, 178, 264, 280]).as_slice());
        let aux = bits(&[0, 0, 0, 1]);
        assert_eq!(r.eval(&aux).unwrap(), BigInt::from(-3 * 280 * 280));
        assert_eq!(ssg_to_rank1(&SubsetSumGoalInstance::from_i64(&[1], 0).unwrap()), Err(Error::GoalZero));
    }

    #[test]
    fn knapsack_to_hyperbolic_formulas() {
        let h = knapsack_to_hyperbolic(&worked()).unwrap();
        assert_eq!(h, HyperbolicProgram::from_i64(2, &[6, 10, 12], 169, &[-56, -112, -168]).unwrap());
        assert_eq!(h.eval_parts(&bits(&[1, 1, 0])).unwrap().1, BigInt::from(1));
        assert_eq!(h.eval(&bits(&[1, 1, 0])).unwrap(), ExactValue::integer(18));
        let h = knapsack_to_hyperbolic(&KnapsackInstance::from_i64(&[1], &[1], 1).unwrap()).unwrap();
        assert_eq!(h, HyperbolicProgram::from_i64(2, &[1], 3, &[-2]).unwrap());
        let infeasible = KnapsackInstance::from_i64(&[2], &[1], 1).unwrap();
        assert_eq!(knapsack_to_hyperbolic(&infeasible), Err(Error::InfeasibleInstance));
        let zero = KnapsackInstance::from_i64(&[1], &[0], 1).unwrap();
        assert_eq!(knapsack_to_hyperbolic(&zero), Err(Error::ProfitSumZero));
    }

    #[test]
    fn optimizer_maps() {
        let fwd = SolutionMap::APPEND_ONE;
        let back = fwd.inverse();
        assert_eq!(back.rule, MapRule::DropAuxiliaryVariable);
        assert_eq!(back.direction, Direction::Backward);
        assert_eq!(map_optimizer(&fwd, &bits(&[1, 1, 0])).unwrap(), bits(&[1, 1, 0, 1]));
        assert_eq!(map_optimizer(&back, &bits(&[1, 1, 0, 1])).unwrap(), bits(&[1, 1, 0]));
        assert_eq!(map_optimizer(&back, &bits(&[1, 1, 0, 0])), Err(Error::NotAnOptimizerShape));
        assert_eq!(map_optimizer(&SolutionMap::IDENTITY, &bits(&[0, 1])).unwrap(), bits(&[0, 1]));
    }

    #[test]
    fn worked_bijections() {
        let k = worked();
        let ssg = knapsack_to_ssg(&k).unwrap();
        let r = verify_bijection(&k.clone().into(), &ssg.clone().into(), &[SolutionMap::IDENTITY], 12).unwrap();
        assert!(r.matched);
        assert_eq!((r.left_optimizers, r.right_optimizers), (1, 1));

        let twin = KnapsackInstance::from_i64(&[1, 1], &[1, 1], 1).unwrap();
        let h = knapsack_to_hyperbolic(&twin).unwrap();
        let r = verify_bijection(&twin.into(), &h.into(), &[SolutionMap::IDENTITY], 12).unwrap();
        assert!(r.matched);
        assert_eq!((r.left_optimizers, r.right_optimizers), (2, 2));

        let single = SubsetSumGoalInstance::from_i64(&[5], 5).unwrap();
        let rank1 = ssg_to_rank1(&single).unwrap();
        let r = verify_bijection(&single.into(), &rank1.into(), &[SolutionMap::APPEND_ONE], 12).unwrap();
        assert!(r.matched);
        assert_eq!((r.left_optimizers, r.right_optimizers), (1, 1));
    }

    #[test]
    fn wrong_map_is_caught() {
        let single = SubsetSumGoalInstance::from_i64(&[5], 5).unwrap();
        let rank1 = ssg_to_rank1(&single).unwrap();
        let wrong = SolutionMap { direction: Direction::Forward, rule: MapRule::IdentityOnItems };
        // Identity cannot even change the dimension; the forward image is not an optimizer.
        let r = verify_bijection(&single.into(), &rank1.into(), &[wrong], 12).unwrap();
        assert!(!r.matched);
        let c = r.counterexample.unwrap();
        assert_eq!(c.direction, Direction::Forward);
        assert_eq!(c.from, bits(&[1]));
    }

    #[test]
    fn verify_limit() {
        let k = KnapsackInstance::from_i64(&[1; 5], &[1; 5], 2).unwrap();
        let s = knapsack_to_ssg(&k).unwrap();
        assert_eq!(
            verify_bijection(&k.into(), &s.into(), &[SolutionMap::IDENTITY], 4),
            Err(Error::TooLarge { n: 5, limit: 4 })
        );
    }

    #[test]
    fn compile_normalizes_and_pads() {
        let k = KnapsackInstance::from_i64(&[1, 1], &[0, 0], 1).unwrap();
        let c = compile(&k.clone().into(), Kind::Rank1Quadratic, 24).unwrap();
        assert_eq!(c.notices, vec![Notice::ProfitNormalized]);
        assert_eq!(c.target.dimension(), 4);
        let full = c.full_map().unwrap();
        let r = verify_bijection(&k.into(), &c.target, &full, 12).unwrap();
        assert!(r.matched);
        assert_eq!((r.left_optimizers, r.right_optimizers), (2, 2));

        let none = KnapsackInstance::from_i64(&[2], &[0], 1).unwrap();
        let c = compile(&none.into(), Kind::Hyperbolic, 24).unwrap();
        assert_eq!(c.notices, vec![Notice::ProfitNormalized, Notice::FeasibilityPadded]);
        assert!(c.full_map().is_none());
        let r = verify_bijection(&c.prepared, &c.target, &c.solution_map, 12).unwrap();
        assert!(r.matched);

        let q: Instance = crate::model::QuadraticProgram::zero(1).into();
        assert!(compile(&q, Kind::Hyperbolic, 24).is_err());
    }

    #[test]
    fn feasibility_search() {
        assert_eq!(has_feasible_subset(&worked(), 24), Some(true));
        let k = KnapsackInstance::from_i64(&[4, 6, 10], &[1, 1, 1], 15).unwrap();
        assert_eq!(has_feasible_subset(&k, 24), Some(false));
        assert_eq!(has_feasible_subset(&k, 2), None);
    }
}
