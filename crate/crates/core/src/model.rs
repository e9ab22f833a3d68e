//! Exact representations of the problem families and their objective values.
//!
//! Every quantity is an arbitrary-precision integer or a reduced rational.
//! Variables are indexed from `0` internally; an [`Assignment`] doubles as the
//! characteristic vector of an item subset (`x[i] == 1` iff item `i` is chosen).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// A 0-1 vector. Ordering is lexicographic with `x[0]` most significant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Assignment(vec![false; n])
    }

    /// Parses 0/1 entries; anything else is rejected.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        bits.iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::InvalidInstance(format!("assignment entry {other} is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Assignment)
    }

    /// The assignment whose bit string, read with `x[0]` as the most
    /// significant bit, equals `index`.
    pub fn from_index(index: u64, n: usize) -> Self {
        Assignment((0..n).map(|i| (index >> (n - 1 - i)) & 1 == 1).collect())
    }

    pub fn index(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.0.iter().map(|&b| b as u8).collect()
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.0
    }

    /// Indices of the chosen items.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.len() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: n, found: self.len() })
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// An exact objective value: a rational in lowest terms with positive
/// denominator. Integers are the values with denominator one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactValue(BigRational);

impl ExactValue {
    pub fn integer(v: impl Into<BigInt>) -> Self {
        ExactValue(BigRational::from_integer(v.into()))
    }

    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(ExactValue(BigRational::new(num.into(), den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        // Ratio keeps itself reduced with a positive denominator.
        ExactValue(r)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

fn abs_sum<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().map(|x| x.abs()).sum()
}

fn select_sum(coeffs: &[BigInt], x: &Assignment) -> BigInt {
    x.support().map(|i| &coeffs[i]).sum()
}

fn check_non_negative(what: &str, xs: &[BigInt]) -> Result<()> {
    match xs.iter().position(|x| x.is_negative()) {
        Some(i) => Err(Error::InvalidInstance(format!("{what}[{i}] is negative"))),
        None => Ok(()),
    }
}

/// Knapsack with an equality constraint: a subset is feasible iff its weight
/// is exactly the bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackInstance {
    weights: Vec<BigInt>,
    profits: Vec<BigInt>,
    bound: BigInt,
}

impl KnapsackInstance {
    pub fn new(weights: Vec<BigInt>, profits: Vec<BigInt>, bound: BigInt) -> Result<Self> {
        if weights.len() != profits.len() {
            return Err(Error::InvalidInstance(format!("{} weights but {} profits", weights.len(), profits.len())));
        }
        check_non_negative("weights", &weights)?;
        check_non_negative("profits", &profits)?;
        if bound.is_negative() {
            return Err(Error::InvalidInstance("bound is negative".into()));
        }
        Ok(KnapsackInstance { weights, profits, bound })
    }

    /// Convenience constructor for small literal instances.
    pub fn from_i64(weights: &[i64], profits: &[i64], bound: i64) -> Result<Self> {
        Self::new(to_big(weights), to_big(profits), bound.into())
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }

    pub fn profits(&self) -> &[BigInt] {
        &self.profits
    }

    pub fn bound(&self) -> &BigInt {
        &self.bound
    }

    /// Total profit `P` of all items.
    pub fn total_profit(&self) -> BigInt {
        self.profits.iter().sum()
    }

    pub fn total_weight(&self) -> BigInt {
        self.weights.iter().sum()
    }

    /// Returns `(w(I), p(I))`.
    pub fn eval(&self, x: &Assignment) -> Result<(BigInt, BigInt)> {
        x.check_len(self.len())?;
        Ok((select_sum(&self.weights, x), select_sum(&self.profits, x)))
    }

    pub fn is_feasible(&self, x: &Assignment) -> Result<bool> {
        x.check_len(self.len())?;
        Ok(select_sum(&self.weights, x) == self.bound)
    }

    pub(crate) fn push_item(&mut self, weight: BigInt, profit: BigInt) {
        self.weights.push(weight);
        self.profits.push(profit);
    }
}

/// Subset sum with goal value: minimize `|q(I) - Q|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSumGoalInstance {
    weights: Vec<BigInt>,
    goal: BigInt,
}

impl SubsetSumGoalInstance {
    pub fn new(weights: Vec<BigInt>, goal: BigInt) -> Result<Self> {
        check_non_negative("weights", &weights)?;
        if goal.is_negative() {
            return Err(Error::InvalidInstance("goal is negative".into()));
        }
        Ok(SubsetSumGoalInstance { weights, goal })
    }

    pub fn from_i64(weights: &[i64], goal: i64) -> Result<Self> {
        Self::new(to_big(weights), goal.into())
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }

    pub fn goal(&self) -> &BigInt {
        &self.goal
    }

    /// `q(I)`
    pub fn weight_of(&self, x: &Assignment) -> Result<BigInt> {
        x.check_len(self.len())?;
        Ok(select_sum(&self.weights, x))
    }

    /// `|q(I) - Q|`
    pub fn eval(&self, x: &Assignment) -> Result<BigInt> {
        Ok((self.weight_of(x)? - &self.goal).abs())
    }
}

/// `constant + sum_i coeffs[i] * x[i]`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub constant: BigInt,
    pub coeffs: Vec<BigInt>,
}

impl LinearForm {
    pub fn new(constant: BigInt, coeffs: Vec<BigInt>) -> Self {
        LinearForm { constant, coeffs }
    }

    pub fn homogeneous(coeffs: Vec<BigInt>) -> Self {
        LinearForm { constant: BigInt::zero(), coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &Assignment) -> Result<BigInt> {
        x.check_len(self.len())?;
        Ok(&self.constant + select_sum(&self.coeffs, x))
    }

    /// Sum of absolute values of the constant and all coefficients.
    pub fn abs_sum(&self) -> BigInt {
        self.constant.abs() + abs_sum(&self.coeffs)
    }
}

/// Objective `(u·x)(v·x)`, the product of two homogeneous linear forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rank1QuadraticProgram {
    u: LinearForm,
    v: LinearForm,
}

impl Rank1QuadraticProgram {
    pub fn new(u: Vec<BigInt>, v: Vec<BigInt>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::InvalidInstance(format!("factor lengths differ: {} vs {}", u.len(), v.len())));
        }
        Ok(Rank1QuadraticProgram { u: LinearForm::homogeneous(u), v: LinearForm::homogeneous(v) })
    }

    pub fn from_i64(u: &[i64], v: &[i64]) -> Result<Self> {
        Self::new(to_big(u), to_big(v))
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn u(&self) -> &[BigInt] {
        &self.u.coeffs
    }

    pub fn v(&self) -> &[BigInt] {
        &self.v.coeffs
    }

    pub fn eval(&self, x: &Assignment) -> Result<BigInt> {
        Ok(self.u.eval(x)? * self.v.eval(x)?)
    }

    /// The outer product `u vᵀ`. Not symmetrized, so entries stay integral;
    /// `xᵀ(u vᵀ)x` equals the rank-1 objective for every 0-1 vector.
    pub fn to_matrix(&self) -> QuadraticProgram {
        let matrix = self.u().iter().map(|ui| self.v().iter().map(|vj| ui * vj).collect()).collect();
        QuadraticProgram { matrix }
    }

    /// `S` of the outer-product matrix, i.e. `(sum |u_i|) (sum |v_j|)`.
    pub fn coefficient_sum(&self) -> BigInt {
        self.u.abs_sum() * self.v.abs_sum()
    }
}

/// Objective `xᵀAx` for a square integer matrix `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticProgram {
    matrix: Vec<Vec<BigInt>>,
}

impl QuadraticProgram {
    pub fn new(matrix: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = matrix.len();
        if let Some(i) = matrix.iter().position(|row| row.len() != n) {
            return Err(Error::InvalidInstance(format!(
                "matrix is not square: row {i} has {} entries, expected {n}",
                matrix[i].len()
            )));
        }
        Ok(QuadraticProgram { matrix })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| to_big(r)).collect())
    }

    pub fn zero(n: usize) -> Self {
        QuadraticProgram { matrix: vec![vec![BigInt::zero(); n]; n] }
    }

    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn matrix(&self) -> &[Vec<BigInt>] {
        &self.matrix
    }

    pub fn eval(&self, x: &Assignment) -> Result<BigInt> {
        x.check_len(self.len())?;
        let support: Vec<usize> = x.support().collect();
        Ok(support.iter().flat_map(|&i| support.iter().map(move |&j| (i, j))).map(|(i, j)| &self.matrix[i][j]).sum())
    }

    /// `S = sum |A_ij|`, a bound on `|xᵀAx|`.
    pub fn coefficient_sum(&self) -> BigInt {
        abs_sum(self.matrix.iter().flatten())
    }
}

/// Objective `(a0 + a·x) / (b0 + b·x)`, maximized over assignments with a
/// nonzero denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperbolicProgram {
    numerator: LinearForm,
    denominator: LinearForm,
}

impl HyperbolicProgram {
    pub fn new(numerator: LinearForm, denominator: LinearForm) -> Result<Self> {
        if numerator.len() != denominator.len() {
            return Err(Error::InvalidInstance(format!(
                "numerator has {} coefficients, denominator {}",
                numerator.len(),
                denominator.len()
            )));
        }
        Ok(HyperbolicProgram { numerator, denominator })
    }

    pub fn from_i64(a0: i64, a: &[i64], b0: i64, b: &[i64]) -> Result<Self> {
        Self::new(LinearForm::new(a0.into(), to_big(a)), LinearForm::new(b0.into(), to_big(b)))
    }

    pub fn len(&self) -> usize {
        self.numerator.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerator.is_empty()
    }

    pub fn numerator(&self) -> &LinearForm {
        &self.numerator
    }

    pub fn denominator(&self) -> &LinearForm {
        &self.denominator
    }

    /// `(N(x), D(x))` before reduction.
    pub fn eval_parts(&self, x: &Assignment) -> Result<(BigInt, BigInt)> {
        Ok((self.numerator.eval(x)?, self.denominator.eval(x)?))
    }

    pub fn eval(&self, x: &Assignment) -> Result<ExactValue> {
        let (num, den) = self.eval_parts(x)?;
        ExactValue::ratio(num, den)
    }

    pub fn is_feasible(&self, x: &Assignment) -> Result<bool> {
        Ok(!self.denominator.eval(x)?.is_zero())
    }

    /// `S = sum |a_i| + sum |b_i|`, constants included.
    pub fn coefficient_sum(&self) -> BigInt {
        self.numerator.abs_sum() + self.denominator.abs_sum()
    }
}

/// Whether the family's objective is minimized or maximized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Knapsack,
    SubsetSumGoal,
    Rank1Quadratic,
    Quadratic,
    Hyperbolic,
}

impl Kind {
    pub const ALL: [Kind; 5] =
        [Kind::Knapsack, Kind::SubsetSumGoal, Kind::Rank1Quadratic, Kind::Quadratic, Kind::Hyperbolic];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Knapsack => "knapsack",
            Kind::SubsetSumGoal => "subset_sum_goal",
            Kind::Rank1Quadratic => "rank1_quadratic",
            Kind::Quadratic => "quadratic",
            Kind::Hyperbolic => "hyperbolic",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "knapsack" => Kind::Knapsack,
            "subset_sum_goal" | "ssg" => Kind::SubsetSumGoal,
            "rank1_quadratic" | "rank1" => Kind::Rank1Quadratic,
            "quadratic" => Kind::Quadratic,
            "hyperbolic" => Kind::Hyperbolic,
            other => return Err(Error::Parse(format!("unknown instance kind `{other}`"))),
        })
    }
}

/// Any instance of the five families, each with its natural objective:
/// knapsack maximizes profit over sets of weight exactly `W`, subset sum
/// minimizes `|q(I) - Q|`, both quadratic forms are minimized and the
/// hyperbolic ratio is maximized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Knapsack(KnapsackInstance),
    SubsetSumGoal(SubsetSumGoalInstance),
    Rank1Quadratic(Rank1QuadraticProgram),
    Quadratic(QuadraticProgram),
    Hyperbolic(HyperbolicProgram),
}

impl Instance {
    pub fn kind(&self) -> Kind {
        match self {
            Instance::Knapsack(_) => Kind::Knapsack,
            Instance::SubsetSumGoal(_) => Kind::SubsetSumGoal,
            Instance::Rank1Quadratic(_) => Kind::Rank1Quadratic,
            Instance::Quadratic(_) => Kind::Quadratic,
            Instance::Hyperbolic(_) => Kind::Hyperbolic,
        }
    }

    /// Number of 0-1 variables.
    pub fn dimension(&self) -> usize {
        match self {
            Instance::Knapsack(k) => k.len(),
            Instance::SubsetSumGoal(s) => s.len(),
            Instance::Rank1Quadratic(r) => r.len(),
            Instance::Quadratic(q) => q.len(),
            Instance::Hyperbolic(h) => h.len(),
        }
    }

    pub fn sense(&self) -> Sense {
        match self {
            Instance::Knapsack(_) | Instance::Hyperbolic(_) => Sense::Maximize,
            _ => Sense::Minimize,
        }
    }

    /// True for the families whose optimum is always an integer.
    pub fn is_integral(&self) -> bool {
        !matches!(self, Instance::Hyperbolic(_))
    }

    /// Bound `S` on the magnitude of every objective value (and, for the
    /// hyperbolic family, of every numerator and denominator).
    ///
    /// Quadratic and hyperbolic programs use their coefficient sums. Knapsack
    /// profits lie in `[0, P]` and subset-sum values in `[0, sum q + Q]`.
    pub fn value_bound(&self) -> BigInt {
        match self {
            Instance::Knapsack(k) => k.total_profit(),
            Instance::SubsetSumGoal(s) => s.weights().iter().sum::<BigInt>() + s.goal(),
            Instance::Rank1Quadratic(r) => r.coefficient_sum(),
            Instance::Quadratic(q) => q.coefficient_sum(),
            Instance::Hyperbolic(h) => h.coefficient_sum(),
        }
    }

    /// Objective value at `x`, or `None` if `x` is infeasible.
    pub fn value(&self, x: &Assignment) -> Result<Option<ExactValue>> {
        Ok(match self {
            Instance::Knapsack(k) => {
                let (w, p) = k.eval(x)?;
                (&w == k.bound()).then(|| ExactValue::integer(p))
            }
            Instance::SubsetSumGoal(s) => Some(ExactValue::integer(s.eval(x)?)),
            Instance::Rank1Quadratic(r) => Some(ExactValue::integer(r.eval(x)?)),
            Instance::Quadratic(q) => Some(ExactValue::integer(q.eval(x)?)),
            Instance::Hyperbolic(h) => {
                let (num, den) = h.eval_parts(x)?;
                (!den.is_zero()).then(|| ExactValue::from_rational(BigRational::new(num, den)))
            }
        })
    }

    /// True if `a` is strictly better than `b` under this instance's sense.
    pub fn better(&self, a: &ExactValue, b: &ExactValue) -> bool {
        match self.sense() {
            Sense::Minimize => a < b,
            Sense::Maximize => a > b,
        }
    }
}

impl From<KnapsackInstance> for Instance {
    fn from(v: KnapsackInstance) -> Self {
        Instance::Knapsack(v)
    }
}

impl From<SubsetSumGoalInstance> for Instance {
    fn from(v: SubsetSumGoalInstance) -> Self {
        Instance::SubsetSumGoal(v)
    }
}

impl From<Rank1QuadraticProgram> for Instance {
    fn from(v: Rank1QuadraticProgram) -> Self {
        Instance::Rank1Quadratic(v)
    }
}

impl From<QuadraticProgram> for Instance {
    fn from(v: QuadraticProgram) -> Self {
        Instance::Quadratic(v)
    }
}

impl From<HyperbolicProgram> for Instance {
    fn from(v: HyperbolicProgram) -> Self {
        Instance::Hyperbolic(v)
    }
}

pub(crate) fn to_big(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}
