//! Sparse multivariate polynomials over the rationals under a fixed variable
//! order `x1 < x2 < ... < xn` (variable `k` is stored as index `k - 1`).

mod parse;
mod resultant;

pub use parse::{parse_poly, ParsePolyError};
pub use resultant::{discriminant, resultant, DegenerateDiscriminant};

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::numeric::{Rational, UPoly};

/// Variable names in order; position `i` names variable index `i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VariableOrder {
    names: Vec<String>,
}

impl VariableOrder {
    pub fn new(names: Vec<String>) -> Self {
        VariableOrder { names }
    }

    /// `x1 .. xn`
    pub fn numbered(n: usize) -> Self {
        VariableOrder { names: (1..=n).map(|i| format!("x{i}")).collect() }
    }

    /// Appends a variable; `None` if the name is taken.
    pub fn push(&mut self, name: &str) -> Option<usize> {
        if self.index_of(name).is_some() {
            return None;
        }
        self.names.push(name.to_string());
        Some(self.names.len() - 1)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, idx: usize) -> String {
        self.names.get(idx).cloned().unwrap_or_else(|| format!("x{}", idx + 1))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Exponent vector without trailing zeros. Ordered lexicographically with
/// the highest variable most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn exp(&self, var: usize) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        let n = self.0.len().max(o.0.len());
        Monomial::new((0..n).map(|i| self.exp(i) + o.exp(i)).collect())
    }

    fn div(&self, o: &Monomial) -> Option<Monomial> {
        if o.0.len() > self.0.len() {
            return None;
        }
        let mut out = self.0.clone();
        for (i, e) in o.0.iter().enumerate() {
            out[i] = out[i].checked_sub(*e)?;
        }
        Some(Monomial::new(out))
    }

    fn with_exp(&self, var: usize, e: u32) -> Monomial {
        let mut v = self.0.clone();
        if v.len() <= var {
            v.resize(var + 1, 0);
        }
        v[var] = e;
        Monomial::new(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.0.len().max(other.0.len());
        for i in (0..n).rev() {
            match self.exp(i).cmp(&other.exp(i)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with rational coefficients; no zero coefficient is stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { terms }
    }

    pub fn from_int(c: i64) -> Self {
        Polynomial::constant(Rational::from_integer(BigInt::from(c)))
    }

    /// The variable with index `var` (0-based).
    pub fn var(var: usize) -> Self {
        Polynomial::monomial(Monomial::one().with_exp(var, 1), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in iter {
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Polynomial { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// `x_var - c`
    pub fn linear(var: usize, c: &Rational) -> Self {
        &Polynomial::var(var) - &Polynomial::constant(c.clone())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.level() == 0
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rational::zero))
    }

    /// Index of the highest variable plus one; 0 for constants.
    pub fn level(&self) -> usize {
        self.terms.keys().next_back().map_or(0, |m| m.level())
    }

    pub fn degree(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// Largest per-variable degree.
    pub fn max_degree(&self) -> u32 {
        (0..self.level()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Leading term in the monomial order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Coefficients `c_0 .. c_d` with respect to `var`.
    pub fn coefficients(&self, var: usize) -> Vec<Polynomial> {
        let d = self.degree(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            buckets[e].push((m.with_exp(var, 0), c.clone()));
        }
        buckets
            .into_iter()
            .map(|b| Polynomial { terms: b.into_iter().collect() })
            .collect()
    }

    /// Leading coefficient with respect to `var`.
    pub fn ldcf(&self, var: usize) -> Polynomial {
        self.coefficients(var).pop().unwrap_or_default()
    }

    pub fn from_coefficients(var: usize, coeffs: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let xk = Polynomial::monomial(Monomial::one().with_exp(var, k as u32), Rational::one());
            out = &out + &(c * &xk);
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(var);
            (e > 0).then(|| (m.with_exp(var, e - 1), c * Rational::from_integer(BigInt::from(e))))
        }))
    }

    pub fn scale(&self, k: &Rational) -> Polynomial {
        if k.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces `x_var` by the rational `v`.
    pub fn substitute(&self, var: usize, v: &Rational) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| {
            let e = m.exp(var);
            let f = pow_rational(v, e);
            (m.with_exp(var, 0), c * f)
        }))
    }

    /// Replaces `x_1 .. x_k` by the given rationals (`k = point.len()`).
    pub fn substitute_prefix(&self, point: &[Rational]) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| {
            let mut coeff = c.clone();
            let mut exps = m.0.clone();
            for (i, v) in point.iter().enumerate() {
                if i < exps.len() && exps[i] > 0 {
                    coeff *= pow_rational(v, exps[i]);
                    exps[i] = 0;
                }
            }
            (Monomial::new(exps), coeff)
        }))
    }

    /// Full evaluation; `point` must cover every occurring variable.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let r = self.substitute_prefix(point);
        r.constant_value().expect("evaluation point too short")
    }

    /// Univariate view in `var`, if no other variable occurs.
    pub fn to_upoly(&self, var: usize) -> Option<UPoly> {
        let d = self.degree(var) as usize;
        let mut c = vec![Rational::zero(); d + 1];
        for (m, v) in &self.terms {
            if m.0.iter().enumerate().any(|(i, e)| i != var && *e > 0) {
                return None;
            }
            c[m.exp(var) as usize] = v.clone();
        }
        Some(UPoly::new(c))
    }

    pub fn from_upoly(u: &UPoly, var: usize) -> Polynomial {
        Polynomial::from_terms(
            u.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::one().with_exp(var, k as u32), c.clone())),
        )
    }

    /// Exact quotient in the lex order, or `None` if `d` does not divide.
    pub fn exact_div(&self, d: &Polynomial) -> Option<Polynomial> {
        let (lm, lc) = d.leading_term()?;
        if d.terms.len() == 1 {
            let mut terms = BTreeMap::new();
            for (m, c) in &self.terms {
                terms.insert(m.div(lm)?, c / lc);
            }
            return Some(Polynomial { terms });
        }
        let mut rem = self.clone();
        let mut quot: Vec<(Monomial, Rational)> = Vec::new();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(lm)?;
            let qc = c / lc;
            for (dm, dc) in &d.terms {
                let key = dm.mul(&qm);
                let delta = dc * &qc;
                let entry = rem.terms.entry(key).or_insert_with(Rational::zero);
                *entry -= delta;
                if entry.is_zero() {
                    let key = dm.mul(&qm);
                    rem.terms.remove(&key);
                }
            }
            quot.push((qm, qc));
        }
        Some(Polynomial { terms: quot.into_iter().collect() })
    }

    /// Primitive integer associate whose leading term is positive. Keeps the
    /// real variety and all sign-invariance properties.
    pub fn normalize(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm = BigInt::one();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&(c * Rational::from_integer(lcm.clone())).to_integer());
        }
        if self.leading_term().unwrap().1.is_negative() {
            g = -g;
        }
        let k = Rational::new(lcm, g);
        self.scale(&k)
    }

    pub fn display_with(&self, vars: &VariableOrder) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = if neg { -c.clone() } else { c.clone() };
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mon: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { vars.name(i) } else { format!("{}^{}", vars.name(i), e) })
                .collect();
            if mon.is_empty() {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&mon.join("*"));
            } else {
                s.push_str(&format!("{}*{}", a, mon.join("*")));
            }
        }
        s
    }
}

fn pow_rational(v: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= v;
    }
    acc
}

impl Ord for Polynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level()
            .cmp(&other.level())
            .then_with(|| self.total_degree().cmp(&other.total_degree()))
            .then_with(|| {
                let a = self.terms.iter().rev();
                let b = other.terms.iter().rev();
                for (x, y) in a.zip(b) {
                    match x.0.cmp(y.0).then_with(|| x.1.cmp(y.1)) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                self.terms.len().cmp(&other.terms.len())
            })
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&VariableOrder::default()))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            let e = terms.entry(m.clone()).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(m);
            }
        }
        Polynomial { terms }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            let e = terms.entry(m.clone()).or_insert_with(Rational::zero);
            *e -= c;
            if e.is_zero() {
                terms.remove(m);
            }
        }
        Polynomial { terms }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero();
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        Polynomial { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}
