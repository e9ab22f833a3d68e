//! Exhaustive lexicographic enumeration with incremental objective updates.
//!
//! Assignments are visited in increasing index order (`x[0]` most
//! significant), so the first hits of a scan are the lexicographically
//! smallest witnesses. Stepping from one index to the next flips the trailing
//! ones off and one bit on, which is two flips amortized.
//!
//! Arithmetic runs in `i128` whenever a magnitude bound on the instance and
//! the query threshold guarantees that no intermediate product can overflow;
//! otherwise it runs in `BigInt`. Both paths are exact.

use std::ops::{AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::model::{ExactValue, Instance};

/// Below this many variables a scan runs on the calling thread.
const PARALLEL_MIN_VARS: usize = 12;
const MAX_CHUNK_BITS: usize = 6;
/// Magnitudes below this bound keep every product of two of them below 2^124.
const I128_SAFE: u64 = 1 << 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Cmp {
    AtMost,
    AtLeast,
    Equal,
}

/// `value <op> threshold`, with infeasible assignments never matching.
#[derive(Debug, Clone)]
pub(crate) struct Query<'a> {
    pub cmp: Cmp,
    pub threshold: &'a ExactValue,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct ScanOutcome {
    /// Indices of the first hits in lexicographic order.
    pub hits: Vec<u64>,
    /// Assignments a sequential scan would have visited before stopping.
    pub examined: u64,
    /// Whether any feasible assignment was visited.
    pub any_feasible: bool,
}

pub(crate) trait Scalar:
    Clone
    + Ord
    + Send
    + Sync
    + Zero
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    fn from_big(b: &BigInt) -> Self;
    fn is_neg(&self) -> bool;
}

impl Scalar for i128 {
    fn from_big(b: &BigInt) -> Self {
        b.to_i128().expect("magnitude checked before choosing i128")
    }

    fn is_neg(&self) -> bool {
        *self < 0
    }
}

impl Scalar for BigInt {
    fn from_big(b: &BigInt) -> Self {
        b.clone()
    }

    fn is_neg(&self) -> bool {
        self.is_negative()
    }
}

fn lift<T: Scalar>(xs: &[BigInt]) -> Vec<T> {
    xs.iter().map(T::from_big).collect()
}

#[derive(Clone)]
enum Kernel<T> {
    Quadratic {
        diag: Vec<T>,
        /// `cross[j][k] = A_jk + A_kj` off the diagonal, zero on it.
        cross: Vec<Vec<T>>,
        /// `h[j] = sum_{k != j} cross[j][k] x_k`
        h: Vec<T>,
        value: T,
    },
    Rank1 {
        u: Vec<T>,
        v: Vec<T>,
        su: T,
        sv: T,
    },
    Ssg {
        q: Vec<T>,
        goal: T,
        s: T,
    },
    Knapsack {
        w: Vec<T>,
        p: Vec<T>,
        bound: T,
        sw: T,
        sp: T,
    },
    Hyperbolic {
        a: Vec<T>,
        b: Vec<T>,
        num: T,
        den: T,
    },
}

impl<T: Scalar> Kernel<T> {
    /// Kernel positioned at the all-zeros assignment.
    fn new(inst: &Instance) -> Self {
        match inst {
            Instance::Quadratic(q) => {
                let m = q.matrix();
                let n = m.len();
                let cross = (0..n)
                    .map(|j| {
                        (0..n).map(|k| if j == k { T::zero() } else { T::from_big(&(&m[j][k] + &m[k][j])) }).collect()
                    })
                    .collect();
                Kernel::Quadratic {
                    diag: (0..n).map(|i| T::from_big(&m[i][i])).collect(),
                    cross,
                    h: vec![T::zero(); n],
                    value: T::zero(),
                }
            }
            Instance::Rank1Quadratic(r) => {
                Kernel::Rank1 { u: lift(r.u()), v: lift(r.v()), su: T::zero(), sv: T::zero() }
            }
            Instance::SubsetSumGoal(s) => {
                Kernel::Ssg { q: lift(s.weights()), goal: T::from_big(s.goal()), s: T::zero() }
            }
            Instance::Knapsack(k) => Kernel::Knapsack {
                w: lift(k.weights()),
                p: lift(k.profits()),
                bound: T::from_big(k.bound()),
                sw: T::zero(),
                sp: T::zero(),
            },
            Instance::Hyperbolic(h) => Kernel::Hyperbolic {
                a: lift(&h.numerator().coeffs),
                b: lift(&h.denominator().coeffs),
                num: T::from_big(&h.numerator().constant),
                den: T::from_big(&h.denominator().constant),
            },
        }
    }

    fn flip(&mut self, k: usize, on: bool) {
        fn step<T: Scalar>(acc: &mut T, c: &T, on: bool) {
            if on {
                *acc += c;
            } else {
                *acc -= c;
            }
        }
        match self {
            Kernel::Quadratic { diag, cross, h, value } => {
                step(value, &diag[k], on);
                step(value, &h[k], on);
                for (hj, row) in h.iter_mut().zip(cross.iter()) {
                    step(hj, &row[k], on);
                }
            }
            Kernel::Rank1 { u, v, su, sv } => {
                step(su, &u[k], on);
                step(sv, &v[k], on);
            }
            Kernel::Ssg { q, s, .. } => step(s, &q[k], on),
            Kernel::Knapsack { w, p, sw, sp, .. } => {
                step(sw, &w[k], on);
                step(sp, &p[k], on);
            }
            Kernel::Hyperbolic { a, b, num, den } => {
                step(num, &a[k], on);
                step(den, &b[k], on);
            }
        }
    }

    /// Current value as `(num, den)` with `den > 0`, or `None` if infeasible.
    fn score(&self) -> Option<(T, T)> {
        match self {
            Kernel::Quadratic { value, .. } => Some((value.clone(), one())),
            Kernel::Rank1 { su, sv, .. } => Some((su.clone() * sv.clone(), one())),
            Kernel::Ssg { goal, s, .. } => {
                let d = s.clone() - goal.clone();
                Some((if d.is_neg() { -d } else { d }, one()))
            }
            Kernel::Knapsack { bound, sw, sp, .. } => (sw == bound).then(|| (sp.clone(), one())),
            Kernel::Hyperbolic { num, den, .. } => {
                if den.is_zero() {
                    None
                } else if den.is_neg() {
                    Some((-num.clone(), -den.clone()))
                } else {
                    Some((num.clone(), den.clone()))
                }
            }
        }
    }
}

fn one<T: Scalar>() -> T {
    T::from_big(&BigInt::from(1))
}

/// Sum of magnitudes bounding every running total a kernel can hold.
fn magnitude(inst: &Instance) -> BigInt {
    fn abs_sum(xs: &[BigInt]) -> BigInt {
        xs.iter().map(|x| x.abs()).sum()
    }
    match inst {
        Instance::Knapsack(k) => abs_sum(k.weights()) + abs_sum(k.profits()) + k.bound(),
        Instance::SubsetSumGoal(s) => abs_sum(s.weights()) + s.goal(),
        Instance::Rank1Quadratic(r) => {
            let (su, sv) = (abs_sum(r.u()), abs_sum(r.v()));
            &su * &sv + su + sv
        }
        Instance::Quadratic(q) => q.coefficient_sum() * 2,
        Instance::Hyperbolic(h) => h.coefficient_sum(),
    }
}

fn fits_i128(inst: &Instance, threshold: &ExactValue) -> bool {
    let safe = BigInt::from(I128_SAFE);
    magnitude(inst) < safe && threshold.numer().abs() < safe && threshold.denom() < &safe
}

struct Chunk {
    start: u64,
    end: u64,
}

fn scan_chunk<T: Scalar>(
    base: &Kernel<T>,
    n: usize,
    chunk: &Chunk,
    cmp: Cmp,
    p: &T,
    q: &T,
    want: usize,
) -> ScanOutcome {
    let mut kernel = base.clone();
    for bit in 0..n {
        if (chunk.start >> bit) & 1 == 1 {
            kernel.flip(n - 1 - bit, true);
        }
    }
    let mut out = ScanOutcome::default();
    let mut idx = chunk.start;
    loop {
        out.examined += 1;
        if let Some((num, den)) = kernel.score() {
            out.any_feasible = true;
            let lhs = num * q.clone();
            let rhs = p.clone() * den;
            let hit = match cmp {
                Cmp::AtMost => lhs <= rhs,
                Cmp::AtLeast => lhs >= rhs,
                Cmp::Equal => lhs == rhs,
            };
            if hit {
                out.hits.push(idx);
                if out.hits.len() >= want {
                    break;
                }
            }
        }
        if idx + 1 == chunk.end {
            break;
        }
        let t = idx.trailing_ones() as usize;
        for bit in 0..t {
            kernel.flip(n - 1 - bit, false);
        }
        kernel.flip(n - 1 - t, true);
        idx += 1;
    }
    out
}

fn run<T: Scalar>(inst: &Instance, query: &Query<'_>, want: usize, parallel: bool) -> ScanOutcome {
    let n = inst.dimension();
    let base = Kernel::<T>::new(inst);
    let p = T::from_big(query.threshold.numer());
    let q = T::from_big(query.threshold.denom());
    let total = 1u64 << n;

    let chunk_bits = if parallel && n >= PARALLEL_MIN_VARS { (n - 8).min(MAX_CHUNK_BITS) } else { 0 };
    let size = total >> chunk_bits;
    let chunks: Vec<Chunk> = (0..1u64 << chunk_bits).map(|c| Chunk { start: c * size, end: (c + 1) * size }).collect();

    let results: Vec<ScanOutcome> = if chunks.len() == 1 {
        vec![scan_chunk(&base, n, &chunks[0], query.cmp, &p, &q, want)]
    } else {
        chunks.par_iter().map(|c| scan_chunk(&base, n, c, query.cmp, &p, &q, want)).collect()
    };

    // Merge as if the chunks had been scanned one after another.
    let mut merged = ScanOutcome::default();
    for (chunk, res) in chunks.iter().zip(results) {
        merged.any_feasible |= res.any_feasible;
        let needed = want - merged.hits.len();
        if res.hits.len() >= needed {
            let last = res.hits[needed - 1];
            merged.hits.extend_from_slice(&res.hits[..needed]);
            merged.examined += last - chunk.start + 1;
            return merged;
        }
        merged.hits.extend(res.hits);
        merged.examined += chunk.end - chunk.start;
    }
    merged
}

/// Scans all `2^n` assignments of `inst` in lexicographic order and returns
/// the first `want` whose value satisfies `query`.
pub(crate) fn scan(inst: &Instance, query: &Query<'_>, want: usize, parallel: bool) -> ScanOutcome {
    assert!(inst.dimension() < 64);
    if want == 0 {
        return ScanOutcome::default();
    }
    if fits_i128(inst, query.threshold) {
        run::<i128>(inst, query, want, parallel)
    } else {
        run::<BigInt>(inst, query, want, parallel)
    }
}
