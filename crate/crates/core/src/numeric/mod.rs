//! Exact rational and real algebraic numbers.

mod algebraic;
mod between;
mod upoly;

pub use algebraic::{RealAlgebraic, RealValue};
pub use between::{rational_between, simplest_between, EmptyInterval};
pub use upoly::{sylvester_resultant, UPoly};

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Builds `num/den` from machine integers.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `bitlength(|num|) + bitlength(den)` with `bitlength(0) = 1`.
pub fn bit_size(v: &Rational) -> u64 {
    let num_bits = v.numer().abs().bits().max(1);
    num_bits + v.denom().bits()
}

/// Total order used to pick among candidate rationals: bit size, then
/// denominator, then absolute numerator, then value.
pub fn simplicity_cmp(a: &Rational, b: &Rational) -> Ordering {
    bit_size(a)
        .cmp(&bit_size(b))
        .then_with(|| a.denom().cmp(b.denom()))
        .then_with(|| a.numer().abs().cmp(&b.numer().abs()))
        .then_with(|| a.cmp(b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(v: &Rational) -> Sign {
        if v.is_zero() {
            Sign::Zero
        } else if v.is_positive() {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn of_int(v: &BigInt) -> Sign {
        if v.is_zero() {
            Sign::Zero
        } else if v.is_positive() {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }

    pub fn mul(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Pos,
            _ => Sign::Neg,
        }
    }

    pub fn to_ordering(self) -> Ordering {
        match self {
            Sign::Neg => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Pos => Ordering::Greater,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Neg => "-",
            Sign::Zero => "0",
            Sign::Pos => "+",
        })
    }
}

/// Interval endpoint on the extended real line.
#[derive(Clone, Debug)]
pub enum ExtendedReal {
    NegInf,
    Value(RealValue),
    PosInf,
}

impl ExtendedReal {
    pub fn rational(v: Rational) -> Self {
        ExtendedReal::Value(RealValue::Rational(v))
    }

    pub fn as_value(&self) -> Option<&RealValue> {
        match self {
            ExtendedReal::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn compare(&self, other: &ExtendedReal) -> Ordering {
        use ExtendedReal::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Value(a), Value(b)) => a.compare(b),
        }
    }

    /// Compares against a value on the finite line.
    pub fn compare_value(&self, v: &RealValue) -> Ordering {
        match self {
            ExtendedReal::NegInf => Ordering::Less,
            ExtendedReal::PosInf => Ordering::Greater,
            ExtendedReal::Value(a) => a.compare(v),
        }
    }

    pub fn compare_rational(&self, v: &Rational) -> Ordering {
        match self {
            ExtendedReal::NegInf => Ordering::Less,
            ExtendedReal::PosInf => Ordering::Greater,
            ExtendedReal::Value(a) => a.compare_rational(v),
        }
    }

    pub fn negate(&self) -> ExtendedReal {
        match self {
            ExtendedReal::NegInf => ExtendedReal::PosInf,
            ExtendedReal::PosInf => ExtendedReal::NegInf,
            ExtendedReal::Value(v) => ExtendedReal::Value(v.negate()),
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInf => f.write_str("-oo"),
            ExtendedReal::PosInf => f.write_str("+oo"),
            ExtendedReal::Value(v) => write!(f, "{v}"),
        }
    }
}

/// Rational midpoint.
pub(crate) fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / Rational::from_integer(BigInt::from(2))
}

pub(crate) fn rational_abs(v: &Rational) -> Rational {
    if v.is_negative() {
        -v.clone()
    } else {
        v.clone()
    }
}
