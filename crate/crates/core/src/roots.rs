//! Real roots of a polynomial over a sample prefix and indexed root
//! expressions `root(p, k)`.
//!
//! Prefix coordinates are rational, or at most one is algebraic. In the
//! algebraic case roots are found as candidates among the roots of
//! `res_y(m(y), p(y, x))` and confirmed by a Sturm count over `Q(alpha)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numeric::{simplest_between, ExtendedReal, Rational, RealValue, Sign, UPoly};
use crate::poly::{resultant, Polynomial, VariableOrder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("sample has {0} algebraic coordinates; at most one is supported")]
    TooManyAlgebraic(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootIsolation {
    Nullified,
    /// Strictly increasing.
    Roots(Vec<RealValue>),
}

/// `root(p, index)`: the `index`-th smallest real root of `p` in its main
/// variable once the lower variables are fixed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexedRoot {
    pub poly: Polynomial,
    pub index: usize,
}

impl IndexedRoot {
    pub fn new(poly: Polynomial, index: usize) -> Self {
        assert!(index >= 1, "root indices start at 1");
        IndexedRoot { poly, index }
    }

    pub fn level(&self) -> usize {
        self.poly.level()
    }

    pub fn display_with(&self, vars: &VariableOrder) -> String {
        format!("root({}, {})", self.poly.display_with(vars), self.index)
    }
}

impl fmt::Display for IndexedRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&VariableOrder::default()))
    }
}

/// Roots of `p` in variable `prefix.len()` with `x_1..x_k` fixed to `prefix`.
pub fn real_roots(p: &Polynomial, prefix: &[RealValue]) -> Result<RootIsolation, RootError> {
    let var = prefix.len();
    debug_assert!(p.level() <= var + 1);
    let (rest, alg) = specialize(p, prefix)?;
    match alg {
        None => {
            let u = rest.to_upoly(var).expect("only the main variable remains");
            if u.is_zero() {
                Ok(RootIsolation::Nullified)
            } else {
                Ok(RootIsolation::Roots(u.real_roots()))
            }
        }
        Some((i, alpha)) => {
            let coeffs: Vec<UPoly> = rest
                .coefficients(var)
                .iter()
                .map(|c| c.to_upoly(i).expect("only the algebraic variable remains"))
                .collect();
            Ok(roots_over_algebraic(coeffs, alpha))
        }
    }
}

/// Substitutes every rational coordinate. Returns the remaining polynomial and
/// the single algebraic coordinate, if any.
fn specialize<'a>(
    p: &Polynomial,
    prefix: &'a [RealValue],
) -> Result<(Polynomial, Option<(usize, &'a RealValue)>), RootError> {
    let used: Vec<(usize, &RealValue)> = prefix
        .iter()
        .enumerate()
        .filter(|(i, v)| !v.is_rational() && p.degree(*i) > 0)
        .collect();
    if used.len() > 1 {
        return Err(RootError::TooManyAlgebraic(used.len()));
    }
    let mut out = p.clone();
    for (i, v) in prefix.iter().enumerate() {
        if let Some(r) = v.as_rational() {
            if out.degree(i) > 0 {
                out = out.substitute(i, r);
            }
        }
    }
    Ok((out, used.first().copied()))
}

/// Exact sign of `p` at a point covering all its variables.
pub fn sign_at_point(p: &Polynomial, point: &[RealValue]) -> Result<Sign, RootError> {
    let (rest, alg) = specialize(p, point)?;
    Ok(match alg {
        None => Sign::of(&rest.constant_value().expect("point covers every variable")),
        Some((i, alpha)) => alpha.sign_of(&rest.to_upoly(i).expect("univariate after substitution")),
    })
}

/// Polynomial in the main variable whose coefficients are polynomials in the
/// algebraic coordinate `alpha`.
type AlgPoly = Vec<UPoly>;

fn alg_sign(alpha: &RealValue, c: &UPoly) -> Sign {
    alpha.sign_of(c)
}

/// Drops leading coefficients that vanish at `alpha`.
fn trim(f: &mut AlgPoly, alpha: &RealValue) {
    while let Some(c) = f.last() {
        if alg_sign(alpha, c) == Sign::Zero {
            f.pop();
        } else {
            break;
        }
    }
}

fn eval_at(f: &AlgPoly, x: &Rational) -> UPoly {
    let mut acc = UPoly::zero();
    for c in f.iter().rev() {
        acc = &acc.scale(x) + c;
    }
    acc
}

/// Divides by the positive rational content of all coefficients.
fn shrink(f: &AlgPoly) -> AlgPoly {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for c in f.iter().flat_map(|u| u.coeffs()) {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    if num.is_zero() {
        return f.clone();
    }
    let k = Rational::new(den, num.abs());
    f.iter().map(|u| u.scale(&k)).collect()
}

/// Signed pseudo-remainder: a positive multiple of `-(a mod b)` as
/// polynomials over `Q(alpha)`. `b` must be trimmed.
fn neg_rem(a: &AlgPoly, b: &AlgPoly, alpha: &RealValue, m: &UPoly) -> AlgPoly {
    let lcb = b.last().unwrap().clone();
    let lcb_sign = alg_sign(alpha, &lcb);
    let mut r = a.clone();
    trim(&mut r, alpha);
    let mut flips = 0usize;
    while r.len() >= b.len() && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        let mut next: AlgPoly = r.iter().map(|c| (c * &lcb).rem(m)).collect();
        for (k, bc) in b.iter().enumerate() {
            next[k + shift] = (&next[k + shift] - &(&lr * bc)).rem(m);
        }
        next.pop();
        r = next;
        trim(&mut r, alpha);
        flips += 1;
    }
    // r is lc(b)^flips times the remainder.
    let negate = !(lcb_sign == Sign::Neg && flips % 2 == 1);
    let r: AlgPoly = if negate { r.iter().map(|c| -c).collect() } else { r };
    shrink(&r)
}

fn sturm_sequence(f: &AlgPoly, alpha: &RealValue, m: &UPoly) -> Vec<AlgPoly> {
    let df: AlgPoly = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale(&Rational::from_integer(BigInt::from(k))))
        .collect();
    let mut df = df;
    trim(&mut df, alpha);
    let mut seq = vec![f.clone()];
    if df.is_empty() {
        return seq;
    }
    seq.push(df);
    loop {
        let n = seq.len();
        let r = neg_rem(&seq[n - 2], &seq[n - 1], alpha, m);
        if r.is_empty() {
            return seq;
        }
        seq.push(r);
    }
}

fn variations(signs: impl Iterator<Item = Sign>) -> usize {
    let mut last = Sign::Zero;
    let mut count = 0;
    for s in signs.filter(|s| *s != Sign::Zero) {
        if last != Sign::Zero && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn variations_at(seq: &[AlgPoly], x: &Rational, alpha: &RealValue) -> usize {
    variations(seq.iter().map(|s| alg_sign(alpha, &eval_at(s, x))))
}

fn roots_over_algebraic(coeffs: Vec<UPoly>, alpha: &RealValue) -> RootIsolation {
    let m = alpha.defining_poly();
    let mut f: AlgPoly = coeffs.iter().map(|c| c.rem(&m)).collect();
    trim(&mut f, alpha);
    if f.is_empty() {
        return RootIsolation::Nullified;
    }
    if f.len() == 1 {
        return RootIsolation::Roots(Vec::new());
    }
    // Factors of m shared by every coefficient belong to conjugates over which
    // p is nullified; they would make the resultant vanish identically.
    let mut g = m.clone();
    for c in &f {
        g = g.gcd(c);
    }
    let m = if g.degree() > 0 { m.exact_div(&g) } else { m };

    // Variables: 0 is alpha, 1 is the main variable.
    let big_f = f.iter().enumerate().fold(Polynomial::zero(), |acc, (k, c)| {
        let xk = Polynomial::var(1).pow(k as u32);
        &acc + &(&Polynomial::from_upoly(c, 0) * &xk)
    });
    let r = resultant(&Polynomial::from_upoly(&m, 0), &big_f, 0);
    let r = r.to_upoly(1).expect("resultant eliminates alpha");
    assert!(!r.is_zero(), "resultant vanishes despite removed common factor");

    let seq = sturm_sequence(&f, alpha, &m);
    let mut out = Vec::new();
    for cand in r.real_roots() {
        match &cand {
            RealValue::Rational(x) => {
                if alg_sign(alpha, &eval_at(&f, x)) == Sign::Zero {
                    out.push(cand);
                }
            }
            RealValue::Algebraic(_) => {
                let (lo, hi) = cand.bounds();
                let at = ExtendedReal::Value(cand.clone());
                let lo = simplest_between(&ExtendedReal::rational(lo), &at).unwrap();
                let hi = simplest_between(&at, &ExtendedReal::rational(hi)).unwrap();
                let count = variations_at(&seq, &lo, alpha) - variations_at(&seq, &hi, alpha);
                debug_assert!(count <= 1);
                if count == 1 {
                    out.push(cand);
                }
            }
        }
    }
    RootIsolation::Roots(out)
}

/// All roots of all `polys` (level `prefix.len() + 1`) over `prefix`, sorted
/// by value. Equal values are ordered by the polynomial's text. Nullified
/// polynomials contribute nothing.
pub fn ir_exps<'a>(
    polys: impl IntoIterator<Item = &'a Polynomial>,
    prefix: &[RealValue],
) -> Result<Vec<(IndexedRoot, RealValue)>, RootError> {
    let mut out: Vec<(IndexedRoot, RealValue, String)> = Vec::new();
    for p in polys {
        if let RootIsolation::Roots(rs) = real_roots(p, prefix)? {
            let text = p.to_string();
            for (k, v) in rs.into_iter().enumerate() {
                out.push((IndexedRoot::new(p.clone(), k + 1), v, text.clone()));
            }
        }
    }
    out.sort_by(|a, b| match a.1.compare(&b.1) {
        Ordering::Equal => a.2.cmp(&b.2).then(a.0.index.cmp(&b.0.index)),
        o => o,
    });
    Ok(out.into_iter().map(|(x, v, _)| (x, v)).collect())
}

/// Value of `root` over `prefix`; `None` when the polynomial is nullified or
/// has fewer real roots than the index.
pub fn eval_irexp(root: &IndexedRoot, prefix: &[RealValue]) -> Result<Option<RealValue>, RootError> {
    match real_roots(&root.poly, prefix)? {
        RootIsolation::Nullified => Ok(None),
        RootIsolation::Roots(rs) => Ok(rs.into_iter().nth(root.index - 1)),
    }
}
