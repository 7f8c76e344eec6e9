use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{simplicity_cmp, ExtendedReal, Rational, RealValue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("empty interval: lower end is not below upper end")]
pub struct EmptyInterval;

/// The rational of minimal bit size in the open interval `(lo, hi)`.
///
/// Stern-Brocot descent; runs of equal moves are taken in one exponential
/// search so wide or far-out intervals stay cheap.
pub fn simplest_between(lo: &ExtendedReal, hi: &ExtendedReal) -> Result<Rational, EmptyInterval> {
    if lo.compare(hi) != Ordering::Less {
        return Err(EmptyInterval);
    }
    let zero = Rational::zero();
    let lo_vs_zero = lo.compare_rational(&zero);
    let hi_vs_zero = hi.compare_rational(&zero);
    if lo_vs_zero == Ordering::Less && hi_vs_zero == Ordering::Greater {
        return Ok(zero);
    }
    if hi_vs_zero != Ordering::Greater {
        return Ok(-simplest_nonneg(&hi.negate(), &lo.negate()));
    }
    Ok(simplest_nonneg(lo, hi))
}

/// Requires `0 <= lo < hi`.
fn simplest_nonneg(lo: &ExtendedReal, hi: &ExtendedReal) -> Rational {
    if let ExtendedReal::Value(RealValue::Rational(l)) = lo {
        match hi {
            ExtendedReal::Value(RealValue::Rational(h)) => return simplest_rational_bounds(l, Some(h)),
            ExtendedReal::PosInf => return simplest_rational_bounds(l, None),
            _ => {}
        }
    }
    if let Some(r) = bracketed(lo, hi) {
        return r;
    }
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    let (mut c, mut d) = (BigInt::one(), BigInt::zero());
    loop {
        let med = Rational::new(&a + &c, &b + &d);
        if lo.compare_rational(&med) != Ordering::Less {
            // Mediant at or below lo: advance the left fraction toward c/d.
            let k = max_steps(|k| {
                let cand = Rational::new(&a + k * &c, &b + k * &d);
                lo.compare_rational(&cand) != Ordering::Less
            });
            a += &k * &c;
            b += &k * &d;
        } else if hi.compare_rational(&med) != Ordering::Greater {
            let k = max_steps(|k| {
                let cand = Rational::new(&c + k * &a, &d + k * &b);
                hi.compare_rational(&cand) != Ordering::Greater
            });
            c += &k * &a;
            d += &k * &b;
        } else {
            return med;
        }
    }
}

/// Replaces algebraic ends by the ends of their isolating intervals. When
/// the answers for the inner and the outer rational interval agree, the
/// answer in between is the same one. Gives up after some sixteen thousand bits
/// of refinement, as when an end is a disguised rational.
fn bracketed(lo: &ExtendedReal, hi: &ExtendedReal) -> Option<Rational> {
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    for round in 0..14 {
        let (lo_out, lo_in) = match &lo {
            ExtendedReal::Value(v) => v.bounds(),
            _ => return None,
        };
        let (hi_in, hi_out) = match &hi {
            ExtendedReal::Value(v) => {
                let (a, b) = v.bounds();
                (Some(a), Some(b))
            }
            ExtendedReal::PosInf => (None, None),
            ExtendedReal::NegInf => return None,
        };
        let inner_open = hi_in.as_ref().is_none_or(|h| lo_in < *h);
        if inner_open && !lo_out.is_negative() {
            let inner = simplest_rational_bounds(&lo_in, hi_in.as_ref());
            if inner == simplest_rational_bounds(&lo_out, hi_out.as_ref()) {
                return Some(inner);
            }
        }
        for end in [&mut lo, &mut hi] {
            if let ExtendedReal::Value(v) = end {
                let (a, b) = v.bounds();
                if a != b {
                    // Precision doubles each round.
                    *v = v.refine(&((b - a) / Rational::from_integer(BigInt::one() << (1usize << round))));
                }
            }
        }
    }
    None
}

/// Continued-fraction form of the descent for rational bounds, in plain
/// integer arithmetic. Requires `0 <= lo < hi`.
fn simplest_rational_bounds(lo: &Rational, hi: Option<&Rational>) -> Rational {
    let (mut ln, mut ld) = (lo.numer().clone(), lo.denom().clone());
    let mut hi = hi.map(|h| (h.numer().clone(), h.denom().clone()));
    let mut terms = Vec::new();
    loop {
        let f = ln.div_floor(&ld);
        let next = &f + 1;
        // `next` lies strictly inside unless hi <= f + 1.
        if hi.as_ref().is_none_or(|(hn, hd)| &next * hd < *hn) {
            terms.push(next);
            break;
        }
        let (hn, hd) = hi.take().expect("finite upper bound");
        terms.push(f.clone());
        // x = f + 1/y maps (lo, hi) onto (1/(hi - f), 1/(lo - f)).
        let lo_rem = &ln - &f * &ld;
        let new_lo = (hd.clone(), &hn - &f * &hd);
        hi = (!lo_rem.is_zero()).then(|| (ld.clone(), lo_rem));
        (ln, ld) = new_lo;
    }
    let (mut num, mut den) = (BigInt::one(), BigInt::zero());
    for t in terms.iter().rev() {
        (num, den) = (t * &num + &den, num);
    }
    Rational::new(num, den)
}

/// Largest `k >= 1` with `ok(k)`, given `ok(1)` and monotonicity.
fn max_steps(ok: impl Fn(&BigInt) -> bool) -> BigInt {
    let mut good = BigInt::one();
    let mut bad = BigInt::from(2);
    while ok(&bad) {
        good = bad.clone();
        bad *= 2;
    }
    while &bad - &good > BigInt::one() {
        let mid: BigInt = (&good + &bad) / 2;
        if ok(&mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

/// Minimal-bit-size rational in `(lo, hi)` that differs from every value in
/// `exclude`. Ties go to the smaller denominator, then smaller numerator.
pub fn rational_between(
    lo: &ExtendedReal,
    hi: &ExtendedReal,
    exclude: &[RealValue],
) -> Result<Rational, EmptyInterval> {
    let c = simplest_between(lo, hi)?;
    let Some(pos) = exclude.iter().position(|e| e.compare_rational(&c) == Ordering::Equal) else {
        return Ok(c);
    };
    let mut rest = exclude.to_vec();
    rest.remove(pos);
    let at = ExtendedReal::rational(c);
    let left = rational_between(lo, &at, &rest);
    let right = rational_between(&at, hi, &rest);
    match (left, right) {
        (Ok(l), Ok(r)) => Ok(if simplicity_cmp(&l, &r) == Ordering::Greater { r } else { l }),
        (Ok(v), Err(_)) | (Err(_), Ok(v)) => Ok(v),
        (Err(e), Err(_)) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{q, qi, RealAlgebraic, UPoly};

    fn ext(v: Rational) -> ExtendedReal {
        ExtendedReal::rational(v)
    }

    #[test]
    fn basic_cases() {
        assert_eq!(rational_between(&ext(qi(0)), &ext(qi(1)), &[]).unwrap(), q(1, 2));
        assert_eq!(rational_between(&ExtendedReal::NegInf, &ext(qi(5)), &[]).unwrap(), qi(0));
        assert_eq!(rational_between(&ext(q(141, 100)), &ext(q(142, 100)), &[]).unwrap(), q(17, 12));
        assert_eq!(rational_between(&ext(qi(1000)), &ExtendedReal::PosInf, &[]).unwrap(), qi(1001));
        assert_eq!(rational_between(&ext(qi(-3)), &ext(qi(-2)), &[]).unwrap(), q(-5, 2));
        assert_eq!(rational_between(&ext(qi(1)), &ext(qi(1)), &[]), Err(EmptyInterval));
    }

    #[test]
    fn exclusion_skips_to_next_simplest() {
        let ex = [RealValue::Rational(q(1, 2))];
        let r = rational_between(&ext(qi(0)), &ext(qi(1)), &ex).unwrap();
        assert_eq!(r, q(1, 3));
    }

    #[test]
    fn algebraic_endpoints() {
        let sqrt2 = RealAlgebraic::from_isolating(UPoly::from_ints(&[-2, 0, 1]), qi(1), qi(2));
        let r = rational_between(&ext(qi(0)), &ExtendedReal::Value(sqrt2.clone()), &[sqrt2.clone()]).unwrap();
        assert_eq!(r, qi(1));
        let r = rational_between(&ExtendedReal::Value(sqrt2), &ext(qi(2)), &[]).unwrap();
        assert_eq!(r, q(3, 2));
    }
}
