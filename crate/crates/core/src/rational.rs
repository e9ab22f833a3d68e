//! Simplest-rational reconstruction by continued-fraction descent.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::model::ExactValue;

/// The rational in `[lo, hi)` with the smallest denominator, ties broken by
/// the smallest absolute numerator.
///
/// Any interval shorter than `1/S²` holds at most one rational with
/// denominator `<= S`; if it holds one, this returns it.
///
/// # Panics
///
/// If `lo >= hi`.
pub fn simplest_rational_in(lo: &ExactValue, hi: &ExactValue) -> ExactValue {
    assert!(lo < hi, "empty interval [{lo}, {hi})");
    ExactValue::from_rational(simplest(lo.as_rational(), true, Some(hi.as_rational()), false))
}

/// Simplest rational between `lo` and `hi` (`None` is +infinity), each end
/// included iff its flag is set. The interval must be nonempty.
fn simplest(lo: &BigRational, lo_closed: bool, hi: Option<&BigRational>, hi_closed: bool) -> BigRational {
    let zero = BigRational::zero();
    let above_zero = lo > &zero || (lo == &zero && !lo_closed);
    let below_zero = hi.is_some_and(|h| h < &zero || (h == &zero && !hi_closed));

    if below_zero {
        let hi = hi.unwrap();
        return -simplest(&-hi, hi_closed, Some(&-lo), lo_closed);
    }
    if !above_zero {
        return zero;
    }

    // Smallest integer in the interval, if any.
    let k = if lo.is_integer() && lo_closed { lo.to_integer() } else { lo.floor().to_integer() + 1 };
    let k_fits = match hi {
        None => true,
        Some(h) => {
            let kr = BigRational::from_integer(k.clone());
            &kr < h || (&kr == h && hi_closed)
        }
    };
    if k_fits {
        return BigRational::from_integer(k);
    }

    // The interval lies inside (f, f + 1]; write x = f + 1/y and recurse on y.
    let f = lo.floor();
    let hi = hi.expect("an unbounded interval always contains an integer");
    let y_lo = (hi - &f).recip();
    let lo_frac = lo - &f;
    let y_hi = (!lo_frac.is_zero()).then(|| lo_frac.recip());
    let y = simplest(&y_lo, hi_closed, y_hi.as_ref(), lo_closed);
    f + y.recip()
}

/// Smallest power-of-two exponent `k` with `2^k >= x` for `x >= 1`.
pub(crate) fn ceil_log2(x: &BigInt) -> u64 {
    assert!(x.is_positive());
    let bits = x.bits();
    if (x - BigInt::one()).is_zero() {
        0
    } else if (x & (x - BigInt::one())).is_zero() {
        bits - 1
    } else {
        bits
    }
}

/// Floor of a rational midpoint is not needed; dyadic midpoints are exact.
pub(crate) fn midpoint(a: &BigRational, b: &BigRational) -> BigRational {
    (a + b) / BigRational::from_integer(BigInt::from(2))
}

pub(crate) fn floor_div2(x: &BigInt) -> BigInt {
    x.div_floor(&BigInt::from(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> ExactValue {
        ExactValue::ratio(n, d).unwrap()
    }

    /// Reference: try denominators in increasing order.
    fn brute_simplest(lo: &ExactValue, hi: &ExactValue) -> ExactValue {
        let (lo, hi) = (lo.as_rational(), hi.as_rational());
        for den in 1i64.. {
            let d = BigRational::from_integer(den.into());
            let start = (lo * &d).ceil().to_integer();
            let end = (hi * &d).ceil().to_integer();
            // numerators in [start, end)
            let mut best: Option<BigInt> = None;
            let mut num = start;
            while num < end {
                if best.as_ref().is_none_or(|b| num.abs() < b.abs()) {
                    best = Some(num.clone());
                }
                num += 1;
            }
            if let Some(n) = best {
                return ExactValue::ratio(n, den).unwrap();
            }
        }
        unreachable!()
    }

    #[test]
    fn worked_intervals() {
        assert_eq!(simplest_rational_in(&q(7, 5), &q(8, 5)), q(3, 2));
        assert_eq!(simplest_rational_in(&q(0, 1), &q(1, 1)), q(0, 1));
        assert_eq!(simplest_rational_in(&q(-8, 5), &q(-7, 5)), q(-3, 2));
    }

    #[test]
    fn half_open_ends() {
        // 1 is excluded on the right, included on the left.
        assert_eq!(simplest_rational_in(&q(1, 2), &q(1, 1)), q(1, 2));
        assert_eq!(simplest_rational_in(&q(1, 1), &q(3, 2)), q(1, 1));
        assert_eq!(simplest_rational_in(&q(-1, 1), &q(-1, 2)), q(-1, 1));
        assert_eq!(simplest_rational_in(&q(-3, 2), &q(-1, 1)), q(-3, 2));
        assert_eq!(simplest_rational_in(&q(-7, 5), &q(-1, 1)), q(-4, 3));
        assert_eq!(simplest_rational_in(&q(-5, 2), &q(7, 3)), q(0, 1));
        assert_eq!(simplest_rational_in(&q(-5, 2), &q(0, 1)), q(-1, 1));
    }

    #[test]
    fn ceil_log2_values() {
        let c = |v: i64| ceil_log2(&BigInt::from(v));
        assert_eq!((c(1), c(2), c(3), c(4), c(5), c(8), c(9)), (0, 1, 2, 2, 3, 3, 4));
    }

    proptest! {
        #[test]
        fn matches_denominator_enumeration(
            a in -60i64..60, b in 1i64..40, c in -60i64..60, d in 1i64..40,
        ) {
            let (x, y) = (q(a, b), q(c, d));
            prop_assume!(x != y);
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            let got = simplest_rational_in(&lo, &hi);
            prop_assert!(lo <= got && got < hi);
            prop_assert_eq!(got, brute_simplest(&lo, &hi));
        }

        #[test]
        fn recovers_bounded_denominator_from_narrow_interval(
            n in -500i64..500, den in 1i64..50, s in 50i64..200, offset in 0i64..1000,
        ) {
            // Any window [t - e, t - e + w) with w < 1/S^2 around t = n/den.
            let t = q(n, den);
            let s2 = BigRational::from_integer(BigInt::from(s * s));
            let w = BigRational::new(BigInt::from(999), BigInt::from(1000)) / &s2;
            let e = &w * BigRational::new(BigInt::from(offset), BigInt::from(1000));
            let lo = ExactValue::from_rational(t.as_rational() - e);
            let hi = ExactValue::from_rational(lo.as_rational() + w);
            prop_assert_eq!(simplest_rational_in(&lo, &hi), t);
        }
    }
}
