use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{midpoint, rational_abs, Rational, RealAlgebraic, RealValue, Sign};

/// Dense univariate polynomial over the rationals, coefficients stored
/// lowest degree first with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UPoly::new(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        UPoly::new(vec![c])
    }

    /// `x - c`
    pub fn linear_root(c: &Rational) -> Self {
        UPoly::new(vec![-c.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at_rational(&self, x: &Rational) -> Sign {
        if self.coeffs.iter().all(|c| c.is_integer()) {
            let ints: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer().clone()).collect();
            return Sign::of_int(&homogeneous_eval(&ints, x.numer(), x.denom()));
        }
        Sign::of(&self.eval(x))
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, k: &Rational) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Polynomial long division over the rationals.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = d.degree();
        let lc = d.lc();
        if self.is_zero() || self.degree() < dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); self.degree() - dd + 1];
        for i in (dd..rem.len()).rev() {
            let f = &rem[i] / &lc;
            if f.is_zero() {
                continue;
            }
            for (k, dc) in d.coeffs.iter().enumerate() {
                let t = &f * dc;
                rem[i - dd + k] -= t;
            }
            quot[i - dd] = f;
        }
        rem.truncate(dd);
        (UPoly::new(quot), UPoly::new(rem))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.div_rem(d).1
    }

    pub fn exact_div(&self, d: &UPoly) -> UPoly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.lc();
        self.scale(&(Rational::one() / lc))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// Square-free part `p / gcd(p, p')`, primitive with positive leading
    /// coefficient.
    pub fn square_free(&self) -> UPoly {
        if self.degree() < 2 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).primitive()
    }

    /// Integer-coefficient primitive associate with positive leading
    /// coefficient.
    pub fn primitive(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        UPoly::new(ints.into_iter().map(|c| Rational::from_integer(c / &g)).collect())
    }

    /// `p(x + 1)`
    fn taylor_shift_one(&self) -> UPoly {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for k in (i..n.saturating_sub(1)).rev() {
                let t = c[k + 1].clone();
                c[k] += t;
            }
        }
        UPoly::new(c)
    }

    /// `p(a + (b - a) x)`
    fn affine(&self, a: &Rational, width: &Rational) -> UPoly {
        // Horner with polynomial accumulator.
        let lin = UPoly::new(vec![a.clone(), width.clone()]);
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &UPoly::constant(c.clone());
        }
        acc
    }

    pub fn sign_variations(&self) -> usize {
        let mut last = Sign::Zero;
        let mut count = 0;
        for c in &self.coeffs {
            let s = Sign::of(c);
            if s == Sign::Zero {
                continue;
            }
            if last != Sign::Zero && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Descartes bound on the number of roots in the open interval `(a, b)`.
    /// Exact when it returns 0 or 1.
    pub fn descartes_bound(&self, a: &Rational, b: &Rational) -> usize {
        let t = self.affine(a, &(b - a));
        // Pad the reversal to the full degree so roots at infinity do not
        // disappear.
        let n = self.degree();
        let mut c = t.coeffs.clone();
        c.resize(n + 1, Rational::zero());
        c.reverse();
        UPoly::new(c).taylor_shift_one().sign_variations()
    }

    /// Cauchy bound: every root has absolute value strictly below it.
    pub fn root_bound(&self) -> Rational {
        let lc = rational_abs(&self.lc());
        let mut m = Rational::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let r = rational_abs(c) / &lc;
            if r > m {
                m = r;
            }
        }
        m + Rational::one()
    }

    /// Encloses `{p(x) : x in [lo, hi]}`.
    pub fn interval_eval(&self, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
        let mut acc = (Rational::zero(), Rational::zero());
        for c in self.coeffs.iter().rev() {
            let prods = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
            let mut mn = prods[0].clone();
            let mut mx = prods[0].clone();
            for p in &prods[1..] {
                if *p < mn {
                    mn = p.clone();
                }
                if *p > mx {
                    mx = p.clone();
                }
            }
            acc = (mn + c, mx + c);
        }
        acc
    }

    /// All real roots, sorted, by Descartes bisection on the square-free part.
    pub fn real_roots(&self) -> Vec<RealValue> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut p = self.square_free();
        if p.degree() == 0 {
            return Vec::new();
        }
        let mut rational = Vec::new();
        if p.coeffs[0].is_zero() {
            p = UPoly::new(p.coeffs[1..].to_vec());
            rational.push(Rational::zero());
        }
        let ints: Vec<BigInt> = p.coeffs.iter().map(|c| c.numer().clone()).collect();
        if ints.len() == 2 {
            rational.push(Rational::new(-&ints[0], ints[1].clone()));
        }
        // A quadratic has rational roots iff its discriminant is a square.
        let quadratic_irrational = ints.len() == 3 && {
            let disc = &ints[1] * &ints[1] - BigInt::from(4) * &ints[0] * &ints[2];
            match disc.sign() {
                num_bigint::Sign::Minus => return rational.into_iter().map(RealValue::Rational).collect(),
                _ if disc.sqrt().pow(2) == disc => {
                    let root = disc.sqrt();
                    let den = BigInt::from(2) * &ints[2];
                    for r in [-&ints[1] - &root, -&ints[1] + &root] {
                        rational.push(Rational::new(r, den.clone()));
                    }
                    rational.sort();
                    rational.dedup();
                    return rational.into_iter().map(RealValue::Rational).collect();
                }
                _ => true,
            }
        };
        let (exact, isolated) = if ints.len() == 2 { (Vec::new(), Vec::new()) } else { isolate_nonzero(&ints) };
        rational.extend(exact);
        // Rational roots hiding inside isolating intervals.
        let mut algebraic = Vec::new();
        // A rational root times the leading coefficient is an integer, so
        // once the scaled interval is shorter than 1 it holds one candidate.
        let lc = rational_abs(&p.lc());
        for (mut a, mut b) in isolated {
            if quadratic_irrational {
                algebraic.push((a, b));
                continue;
            }
            // One endpoint can be an exact root found during bisection; the
            // other never is.
            let sb = p.sign_at_rational(&b);
            let (keep_right, reference) = if sb == Sign::Zero { (false, p.sign_at_rational(&a)) } else { (true, sb) };
            let mut hit = None;
            while (&b - &a) * &lc >= Rational::one() {
                let m = midpoint(&a, &b);
                let sm = p.sign_at_rational(&m);
                if sm == Sign::Zero {
                    hit = Some(m);
                    break;
                }
                if (sm == reference) == keep_right {
                    b = m;
                } else {
                    a = m;
                }
            }
            if let Some(m) = hit {
                rational.push(m);
                continue;
            }
            let candidate = (&b * &lc).ceil() - Rational::one();
            let c = candidate / &lc;
            if c > a && p.sign_at_rational(&c) == Sign::Zero {
                rational.push(c);
            } else {
                algebraic.push((a, b));
            }
        }
        for r in &rational {
            let lin = UPoly::linear_root(r);
            if p.rem(&lin).is_zero() {
                p = p.exact_div(&lin).primitive();
            }
        }
        let mut out: Vec<RealValue> = rational.into_iter().map(RealValue::Rational).collect();
        for (a, b) in algebraic {
            out.push(RealAlgebraic::from_isolating(p.clone(), a, b));
        }
        out.sort_by(|x, y| x.compare(y));
        out
    }

    pub fn display_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = rational_abs(c);
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mon = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mon.is_empty() {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&mon);
            } else {
                s.push_str(&format!("{a}*{mon}"));
            }
        }
        s
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_var("x"))
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut c = vec![Rational::zero(); n];
        for (i, v) in self.coeffs.iter().enumerate() {
            c[i] += v;
        }
        for (i, v) in o.coeffs.iter().enumerate() {
            c[i] += v;
        }
        UPoly::new(c)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        self + &(-o)
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UPoly::new(c)
    }
}

/// Resultant of two univariate polynomials as the determinant of their
/// Sylvester matrix, by Gaussian elimination over the rationals.
/// `p(num/den) * den^n` for integer coefficients, `den > 0`.
pub(crate) fn homogeneous_eval(a: &[BigInt], num: &BigInt, den: &BigInt) -> BigInt {
    let mut acc = a.last().cloned().unwrap_or_default();
    let mut dpow = BigInt::one();
    for c in a.iter().rev().skip(1) {
        dpow *= den;
        acc = acc * num + c * &dpow;
    }
    acc
}

/// `e` such that every root has absolute value below `2^e`, from the
/// Fujiwara bound `2 max |a_{n-i}/a_n|^(1/i)`.
fn root_bound_exponent(a: &[BigInt]) -> u64 {
    let n = a.len() - 1;
    let lead_bits = a[n].bits() as i64;
    let mut e: i64 = 0;
    for i in 1..=n {
        let c = &a[n - i];
        if c.is_zero() {
            continue;
        }
        let diff = c.bits() as i64 - lead_bits + 1;
        e = e.max(-(-diff).div_euclid(i as i64));
    }
    (e + 2) as u64
}

fn taylor_shift_one_int(c: &mut [BigInt]) {
    let n = c.len();
    for i in 0..n {
        for k in (i..n.saturating_sub(1)).rev() {
            let t = c[k + 1].clone();
            c[k] += t;
        }
    }
}

/// Sign variations of `(x + 1)^n q(1 / (x + 1))`, the Descartes bound for
/// the roots of `q` in `(0, 1)`.
fn unit_variations(q: &[BigInt]) -> usize {
    let mut r: Vec<BigInt> = q.iter().rev().cloned().collect();
    taylor_shift_one_int(&mut r);
    let mut last = Sign::Zero;
    let mut count = 0;
    for c in &r {
        let s = Sign::of_int(c);
        if s != Sign::Zero {
            if last != Sign::Zero && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Roots of `a(x)` in `(0, 2^e)`: exact rational hits and open isolating
/// intervals whose right endpoints are not roots, by bisection on integer
/// polynomials. `a(0)` must be nonzero.
fn isolate_positive(a: &[BigInt], e: u64) -> (Vec<Rational>, Vec<(Rational, Rational)>) {
    let scale = |c: &BigInt, d: i64| -> Rational {
        if d >= 0 {
            Rational::from_integer(c << d as u64)
        } else {
            Rational::new(c.clone(), BigInt::one() << (-d) as u64)
        }
    };
    // q(x) = a(2^e x); node (q, c, depth) covers (c, c + 1) * 2^(e - depth).
    let q0: Vec<BigInt> = a.iter().enumerate().map(|(i, c)| c << (e as usize * i)).collect();
    let mut exact = Vec::new();
    let mut isolated = Vec::new();
    let mut work = vec![(q0, BigInt::zero(), 0i64)];
    while let Some((q, c, depth)) = work.pop() {
        if q.len() < 2 {
            continue;
        }
        let shift = e as i64 - depth;
        // A root at the right endpoint would spoil sign-based refinement.
        let right_is_root = q.iter().sum::<BigInt>().is_zero();
        match unit_variations(&q) {
            0 => {}
            1 if !right_is_root => isolated.push((scale(&c, shift), scale(&(&c + 1), shift))),
            _ => {
                let n = q.len() - 1;
                let left: Vec<BigInt> = q.iter().enumerate().map(|(i, x)| x << (n - i)).collect();
                let mut right = left.clone();
                taylor_shift_one_int(&mut right);
                let cl = &c * 2;
                let cr = &cl + 1;
                if right[0].is_zero() {
                    exact.push(scale(&cr, shift - 1));
                    strip_zero_root(&mut right);
                }
                work.push((right, cr, depth + 1));
                work.push((left, cl, depth + 1));
            }
        }
    }
    (exact, isolated)
}

fn strip_zero_root(q: &mut Vec<BigInt>) {
    while q.len() > 1 && q[0].is_zero() {
        q.remove(0);
    }
}

/// Nonzero real roots of a square-free integer polynomial.
fn isolate_nonzero(a: &[BigInt]) -> (Vec<Rational>, Vec<(Rational, Rational)>) {
    let e = root_bound_exponent(a);
    let (mut exact, mut isolated) = isolate_positive(a, e);
    let mirrored: Vec<BigInt> = a.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect();
    let (ne, ni) = isolate_positive(&mirrored, e);
    exact.extend(ne.into_iter().map(|r| -r));
    isolated.extend(ni.into_iter().map(|(l, h)| (-h, -l)));
    (exact, isolated)
}

pub fn sylvester_resultant(p: &UPoly, q: &UPoly) -> Rational {
    if p.is_zero() || q.is_zero() {
        return Rational::zero();
    }
    let m = p.degree();
    let n = q.degree();
    if m == 0 && n == 0 {
        return Rational::one();
    }
    let size = m + n;
    let mut mat = vec![vec![Rational::zero(); size]; size];
    for r in 0..n {
        for (k, c) in p.coeffs.iter().rev().enumerate() {
            mat[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in q.coeffs.iter().rev().enumerate() {
            mat[n + r][r + k] = c.clone();
        }
    }
    determinant(mat)
}

pub(crate) fn determinant(mut mat: Vec<Vec<Rational>>) -> Rational {
    let n = mat.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !mat[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            mat.swap(piv, col);
            det = -det;
        }
        let pv = mat[col][col].clone();
        det *= &pv;
        for r in col + 1..n {
            if mat[r][col].is_zero() {
                continue;
            }
            let f = &mat[r][col] / &pv;
            for c in col..n {
                let t = &f * &mat[col][c];
                mat[r][c] -= t;
            }
        }
    }
    det
}
