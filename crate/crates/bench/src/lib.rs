//! Fixed inputs shared by the benchmarks.

use nlcell::numeric::{qi, RealValue};
use nlcell::poly::parse_poly;
use nlcell::{Polynomial, VariableOrder};

pub fn poly(text: &str) -> Polynomial {
    parse_poly(text, &VariableOrder::numbered(3)).expect("benchmark polynomial")
}

/// Three degree-6 curves around the origin whose resultants dominate the
/// plain construction.
pub fn sextic_curves() -> Vec<Polynomial> {
    vec![
        poly("x2^6 + x1^6 - 64"),
        poly("(x2 - 1)^6 + x1^4*x2 - 90"),
        poly("x2^6 - 3*x1^2*x2^3 + x1^6 - 100"),
    ]
}

pub fn origin(n: usize) -> Vec<RealValue> {
    (0..n).map(|_| RealValue::Rational(qi(0))).collect()
}
