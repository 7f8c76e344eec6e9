use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::upoly::homogeneous_eval;
use super::{midpoint, Rational, Sign, UPoly};

/// An irrational (or not yet recognised as rational) real root, given by a
/// square-free defining polynomial and an open isolating interval.
#[derive(Clone, Debug)]
pub struct RealAlgebraic {
    poly: UPoly,
    lo: Rational,
    hi: Rational,
}

/// Exact real number.
#[derive(Clone, Debug)]
pub enum RealValue {
    Rational(Rational),
    Algebraic(RealAlgebraic),
}

impl RealAlgebraic {
    /// Wraps the unique root of `poly` in `(lo, hi)`. Degree-one polynomials
    /// collapse to their rational root.
    pub fn from_isolating(poly: UPoly, lo: Rational, hi: Rational) -> RealValue {
        debug_assert!(lo < hi);
        let poly = poly.primitive();
        if poly.degree() == 1 {
            let c = poly.coeffs();
            return RealValue::Rational(-(&c[0] / &c[1]));
        }
        debug_assert!(!poly.eval(&lo).is_zero() && !poly.eval(&hi).is_zero());
        RealValue::Algebraic(RealAlgebraic { poly, lo, hi })
    }

    pub fn poly(&self) -> &UPoly {
        &self.poly
    }

    pub fn interval(&self) -> (&Rational, &Rational) {
        (&self.lo, &self.hi)
    }

    fn sign_lo(&self) -> Sign {
        self.poly.sign_at_rational(&self.lo)
    }

    /// Halves the isolating interval. Lands on a rational if the midpoint is
    /// the root itself.
    fn bisect(&self) -> RealValue {
        let m = midpoint(&self.lo, &self.hi);
        let s = self.poly.sign_at_rational(&m);
        if s == Sign::Zero {
            return RealValue::Rational(m);
        }
        let (lo, hi) = if s == self.sign_lo() {
            (m, self.hi.clone())
        } else {
            (self.lo.clone(), m)
        };
        RealValue::Algebraic(RealAlgebraic { poly: self.poly.clone(), lo, hi })
    }

    /// Bisection down to `width` in scaled integers. Isolating intervals
    /// have power-of-two denominators, so both ends are kept as `k / 2^e`
    /// and no gcd is taken per step. `None` for other intervals.
    fn refine_dyadic(&self, width: &Rational) -> Option<RealValue> {
        let exponent = |d: &BigInt| (d.is_positive() && (d & (d - 1u32)).is_zero()).then(|| d.bits() - 1);
        let (el, eh) = (exponent(self.lo.denom())?, exponent(self.hi.denom())?);
        if !self.poly.coeffs().iter().all(|c| c.is_integer()) {
            return None;
        }
        let ints: Vec<BigInt> = self.poly.coeffs().iter().map(|c| c.numer().clone()).collect();
        let mut e = el.max(eh);
        let mut l = self.lo.numer() << (e - el);
        let mut h = self.hi.numer() << (e - eh);
        let sign_lo = self.sign_lo();
        while (&h - &l) * width.denom() > (width.numer() << e) {
            l <<= 1;
            h <<= 1;
            e += 1;
            let m: BigInt = (&l + &h) >> 1;
            let den = BigInt::one() << e;
            match Sign::of_int(&homogeneous_eval(&ints, &m, &den)) {
                Sign::Zero => return Some(RealValue::Rational(Rational::new(m, den))),
                s if s == sign_lo => l = m,
                _ => h = m,
            }
        }
        let den = BigInt::one() << e;
        Some(RealValue::Algebraic(RealAlgebraic {
            poly: self.poly.clone(),
            lo: Rational::new(l, den.clone()),
            hi: Rational::new(h, den),
        }))
    }

    fn compare_rational(&self, v: &Rational) -> Ordering {
        if *v <= self.lo {
            return Ordering::Greater;
        }
        if *v >= self.hi {
            return Ordering::Less;
        }
        let s = self.poly.sign_at_rational(v);
        if s == Sign::Zero {
            Ordering::Equal
        } else if s == self.sign_lo() {
            // root lies in (v, hi)
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    /// True iff `self` is a root of `p`. Relies on `gcd(p, defining)` being
    /// square-free and non-zero at the interval ends.
    fn is_root_of(&self, p: &UPoly) -> bool {
        if p.is_zero() {
            return true;
        }
        let g = p.gcd(&self.poly);
        if g.degree() == 0 {
            return false;
        }
        let a = g.sign_at_rational(&self.lo);
        let b = g.sign_at_rational(&self.hi);
        a != b
    }

    fn equals(&self, other: &RealAlgebraic) -> bool {
        if !self.is_root_of(&other.poly) {
            return false;
        }
        // self is a root of other's polynomial; it is `other` iff it lies in
        // other's isolating interval.
        self.compare_rational(&other.lo) == Ordering::Greater
            && self.compare_rational(&other.hi) == Ordering::Less
    }
}

impl RealValue {
    pub fn from_rational(v: Rational) -> Self {
        RealValue::Rational(v)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            RealValue::Rational(v) => Some(v),
            RealValue::Algebraic(_) => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, RealValue::Rational(_))
    }

    /// Enclosing rational bounds (degenerate for rationals).
    pub fn bounds(&self) -> (Rational, Rational) {
        match self {
            RealValue::Rational(v) => (v.clone(), v.clone()),
            RealValue::Algebraic(a) => (a.lo.clone(), a.hi.clone()),
        }
    }

    pub fn compare_rational(&self, v: &Rational) -> Ordering {
        match self {
            RealValue::Rational(a) => a.cmp(v),
            RealValue::Algebraic(a) => a.compare_rational(v),
        }
    }

    /// Exact comparison on the real line.
    pub fn compare(&self, other: &RealValue) -> Ordering {
        match (self, other) {
            (RealValue::Rational(a), _) => other.compare_rational(a).reverse(),
            (_, RealValue::Rational(b)) => self.compare_rational(b),
            (RealValue::Algebraic(a), RealValue::Algebraic(b)) => {
                if a.hi <= b.lo {
                    return Ordering::Less;
                }
                if b.hi <= a.lo {
                    return Ordering::Greater;
                }
                if a.equals(b) {
                    return Ordering::Equal;
                }
                // Distinct values: shrink the wider interval until they separate.
                let (mut x, mut y) = (self.clone(), other.clone());
                loop {
                    if x.is_rational() || y.is_rational() {
                        return x.compare(&y);
                    }
                    let (xl, xh) = x.bounds();
                    let (yl, yh) = y.bounds();
                    if xh <= yl {
                        return Ordering::Less;
                    }
                    if yh <= xl {
                        return Ordering::Greater;
                    }
                    if &xh - &xl >= &yh - &yl {
                        x = x.bisected();
                    } else {
                        y = y.bisected();
                    }
                }
            }
        }
    }

    fn bisected(&self) -> RealValue {
        match self {
            RealValue::Rational(_) => self.clone(),
            RealValue::Algebraic(a) => a.bisect(),
        }
    }

    /// Returns an equal value whose isolating interval is no wider than
    /// `width`.
    pub fn refine(&self, width: &Rational) -> RealValue {
        assert!(width.is_positive(), "refinement width must be positive");
        if let Some(v) = match self {
            RealValue::Algebraic(a) => a.refine_dyadic(width),
            RealValue::Rational(_) => None,
        } {
            return v;
        }
        let mut v = self.clone();
        while let RealValue::Algebraic(a) = &v {
            if &a.hi - &a.lo <= *width {
                break;
            }
            v = a.bisect();
        }
        v
    }

    /// Exact sign of `p` at this value.
    pub fn sign_of(&self, p: &UPoly) -> Sign {
        match self {
            RealValue::Rational(v) => p.sign_at_rational(v),
            RealValue::Algebraic(a) => {
                if p.is_zero() || a.is_root_of(p) {
                    return Sign::Zero;
                }
                // Nonzero: interval evaluation converges away from zero.
                let mut cur = self.clone();
                loop {
                    match &cur {
                        RealValue::Rational(v) => return p.sign_at_rational(v),
                        RealValue::Algebraic(b) => {
                            let (l, h) = p.interval_eval(&b.lo, &b.hi);
                            if l.is_positive() {
                                return Sign::Pos;
                            }
                            if h.is_negative() {
                                return Sign::Neg;
                            }
                            cur = b.bisect();
                        }
                    }
                }
            }
        }
    }

    pub fn negate(&self) -> RealValue {
        match self {
            RealValue::Rational(v) => RealValue::Rational(-v.clone()),
            RealValue::Algebraic(a) => {
                let c: Vec<Rational> = a
                    .poly
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                    .collect();
                RealAlgebraic::from_isolating(UPoly::new(c), -a.hi.clone(), -a.lo.clone())
            }
        }
    }

    /// 1-based index of this value among the real roots of its defining
    /// polynomial (always 1 for rationals, whose polynomial is `x - v`).
    pub fn root_index(&self) -> usize {
        match self {
            RealValue::Rational(_) => 1,
            RealValue::Algebraic(a) => {
                a.poly
                    .real_roots()
                    .iter()
                    .position(|r| r.compare(self) == Ordering::Equal)
                    .expect("value is a root of its defining polynomial")
                    + 1
            }
        }
    }

    /// Defining polynomial: `x - v` for rationals.
    pub fn defining_poly(&self) -> UPoly {
        match self {
            RealValue::Rational(v) => UPoly::linear_root(v),
            RealValue::Algebraic(a) => a.poly.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let r = match self {
            RealValue::Rational(v) => v.clone(),
            RealValue::Algebraic(_) => {
                let v = self.refine(&Rational::new(1.into(), (1u64 << 52).into()));
                let (l, h) = v.bounds();
                midpoint(&l, &h)
            }
        };
        r.to_f64().unwrap_or(f64::NAN)
    }
}

impl PartialEq for RealValue {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}

impl Eq for RealValue {}

impl PartialOrd for RealValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RealValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl From<Rational> for RealValue {
    fn from(v: Rational) -> Self {
        RealValue::Rational(v)
    }
}

impl fmt::Display for RealValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealValue::Rational(v) => write!(f, "{v}"),
            RealValue::Algebraic(a) => write!(f, "alg({}, ({}, {}))", a.poly, a.lo, a.hi),
        }
    }
}
