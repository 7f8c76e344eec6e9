//! Generators and independent oracles shared by the integration tests.
//!
//! The oracles only use exact rational evaluation, resultants and univariate
//! root isolation. They never call the cell construction or the solver.
#![allow(dead_code)]

use std::cmp::Ordering;

use nlcell::nlsat::{Constraint, Formula, Relation};
use nlcell::numeric::{q, qi, UPoly};
use nlcell::poly::{discriminant, resultant, Monomial};
use nlcell::roots::sign_at_point;
use nlcell::{CellDescription, Polynomial, Rational, RealValue, Sign, SymbolicInterval};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub type TestRng = rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Random polynomial of exactly level `level` with total degree at most
/// `deg` and small integer coefficients.
pub fn random_poly(rng: &mut TestRng, level: usize, deg: u32, max_terms: usize) -> Polynomial {
    loop {
        let mut terms = Vec::new();
        for _ in 0..rng.gen_range(1..=max_terms) {
            let mut exps = vec![0u32; level];
            let mut budget = rng.gen_range(0..=deg);
            for e in exps.iter_mut().rev() {
                let k = rng.gen_range(0..=budget);
                *e = k;
                budget -= k;
            }
            let c = loop {
                let c = rng.gen_range(-5i64..=5);
                if c != 0 {
                    break c;
                }
            };
            terms.push((Monomial::new(exps), qi(c)));
        }
        let top = rng.gen_range(1..=deg);
        let mut exps = vec![0u32; level];
        exps[level - 1] = top;
        terms.push((Monomial::new(exps), qi(rng.gen_range(1i64..=3))));
        let p = Polynomial::from_terms(terms);
        if p.level() == level {
            return p;
        }
    }
}

pub fn random_rational(rng: &mut TestRng, num: i64, den: i64) -> Rational {
    q(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

/// A random cell construction input: `n <= 3` variables, at most four
/// polynomials of degree at most four and a rational sample. Level-3
/// polynomials have total degree at most two so that iterated resultants
/// stay small.
pub fn random_instance(rng: &mut TestRng) -> (Vec<Polynomial>, Vec<RealValue>) {
    let n = rng.gen_range(1..=3);
    let count = rng.gen_range(1..=4);
    let polys = (0..count)
        .map(|i| {
            let level = if i == 0 { n } else { rng.gen_range(1..=n) };
            let deg = if level == 3 { 2 } else { 4 };
            random_poly(rng, level, deg, 3)
        })
        .collect();
    let sample = (0..n).map(|_| RealValue::Rational(random_rational(rng, 6, 4))).collect();
    (polys, sample)
}

pub fn rational_point(point: &[RealValue]) -> Option<Vec<Rational>> {
    point.iter().map(|v| v.as_rational().cloned()).collect()
}

/// Sign of `p` at `point`, by plain rational evaluation when possible.
pub fn sign_at(p: &Polynomial, point: &[RealValue]) -> Sign {
    let point = &point[..p.level().min(point.len())];
    match rational_point(point) {
        Some(r) => Sign::of(&p.eval(&r)),
        None => sign_at_point(p, point).expect("at most one algebraic coordinate"),
    }
}

/// A uniformly spread rational strictly between two reals; either end may
/// be missing.
pub fn rational_inside(rng: &mut TestRng, lo: Option<&RealValue>, hi: Option<&RealValue>) -> Rational {
    // Tighten irrational ends until the inner rational bounds are ordered.
    let mut width = qi(1);
    let (a, b) = loop {
        let a = lo.map(|v| v.refine(&width).bounds().1);
        let b = hi.map(|v| v.refine(&width).bounds().0);
        match (&a, &b) {
            (Some(x), Some(y)) if x >= y => {
                assert!(width > q(1, 1 << 62), "interval is empty");
                width /= qi(16);
            }
            _ => break (a, b),
        }
    };
    let t = q(rng.gen_range(1..1000), 1000);
    match (a, b) {
        (Some(a), Some(b)) => &a + (&b - &a) * t,
        (Some(a), None) => a + qi(rng.gen_range(0..8)) + t,
        (None, Some(b)) => b - qi(rng.gen_range(0..8)) - t,
        (None, None) => random_rational(rng, 40, 8),
    }
}

/// A random point of the cell, drawn level by level. `None` when a bound
/// cannot be evaluated over the drawn prefix, which happens only for sections
/// stacked on irrational coordinates.
pub fn point_in_cell(rng: &mut TestRng, cell: &CellDescription) -> Option<Vec<RealValue>> {
    let mut point: Vec<RealValue> = Vec::new();
    for interval in &cell.intervals {
        let v = match interval {
            SymbolicInterval::Section(r) => nlcell::roots::eval_irexp(r, &point).ok()??,
            SymbolicInterval::Sector { lower, upper } => {
                let lo = match lower {
                    Some(b) => Some(b.eval(&point).ok()??),
                    None => None,
                };
                let hi = match upper {
                    Some(b) => Some(b.eval(&point).ok()??),
                    None => None,
                };
                RealValue::Rational(rational_inside(rng, lo.as_ref(), hi.as_ref()))
            }
        };
        point.push(v);
    }
    Some(point)
}

/// Real roots of a univariate rational polynomial, sorted.
pub fn univariate_roots(p: &UPoly) -> Vec<RealValue> {
    let mut r = p.real_roots();
    r.sort_by(|a, b| a.compare(b));
    r
}

/// Rational points that meet every open region cut out by `roots`: one
/// below, one between each neighbouring pair and one above.
pub fn region_points(roots: &[RealValue]) -> Vec<Rational> {
    if roots.is_empty() {
        return vec![Rational::zero()];
    }
    let mut out = Vec::new();
    let first = roots[0].bounds().0;
    out.push(first - Rational::one());
    for w in roots.windows(2) {
        out.push(rational_strictly_between(&w[0], &w[1]));
    }
    let last = roots[roots.len() - 1].bounds().1;
    out.push(last + Rational::one());
    out
}

fn rational_strictly_between(a: &RealValue, b: &RealValue) -> Rational {
    assert_eq!(a.compare(b), Ordering::Less);
    let mut width = qi(1);
    loop {
        let (a2, b2) = (a.refine(&width), b.refine(&width));
        let (lo, hi) = (a2.bounds().1, b2.bounds().0);
        if lo < hi {
            return (lo + hi) / qi(2);
        }
        width /= qi(16);
    }
}

/// Evaluates a formula at a rational point by plain arithmetic. Extended
/// atoms are not supported.
pub fn eval_rational(f: &Formula, point: &[Rational]) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Not(g) => !eval_rational(g, point),
        Formula::And(gs) => gs.iter().all(|g| eval_rational(g, point)),
        Formula::Or(gs) => gs.iter().any(|g| eval_rational(g, point)),
        Formula::Atom(Constraint::Poly { p, rel }) => {
            let s = Sign::of(&p.eval(&point[..p.level().min(point.len())]));
            holds(*rel, s)
        }
        Formula::Atom(_) => panic!("extended atom in oracle input"),
    }
}

fn holds(rel: Relation, s: Sign) -> bool {
    match rel {
        Relation::Lt => s == Sign::Neg,
        Relation::Le => s != Sign::Pos,
        Relation::Eq => s == Sign::Zero,
        Relation::Ne => s != Sign::Zero,
        Relation::Ge => s != Sign::Neg,
        Relation::Gt => s == Sign::Pos,
    }
}

pub fn formula_polys(f: &Formula, out: &mut Vec<Polynomial>) {
    match f {
        Formula::Not(g) => formula_polys(g, out),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| formula_polys(g, out)),
        Formula::Atom(c) => out.extend(c.polys().into_iter().cloned()),
        _ => {}
    }
}

/// Satisfiability of an open formula (strict inequalities and disequations
/// only) in at most two variables. An open semi-algebraic set is non-empty
/// iff it meets a full-dimensional cell of a cylindrical decomposition, so it
/// suffices to try one rational point per open cell: `x1` avoids every root
/// of the full projection, `x2` avoids every root over that `x1`.
pub fn open_formula_sat(f: &Formula, n: usize) -> bool {
    let mut polys = Vec::new();
    formula_polys(f, &mut polys);
    let top: Vec<&Polynomial> = polys.iter().filter(|p| p.level() == 2).collect();
    let mut proj: Vec<Polynomial> = polys.iter().filter(|p| p.level() == 1).cloned().collect();
    if n >= 2 {
        for (i, p) in top.iter().enumerate() {
            proj.extend(p.coefficients(1));
            if let Ok(d) = discriminant(p, 1) {
                proj.push(d);
            }
            for r in &top[i + 1..] {
                proj.push(resultant(p, r, 1));
            }
        }
    }
    let mut roots = Vec::new();
    for p in &proj {
        if p.is_zero() || p.is_constant() {
            continue;
        }
        roots.extend(univariate_roots(&p.to_upoly(0).expect("level-1 projection")));
    }
    roots.sort_by(|a, b| a.compare(b));
    roots.dedup_by(|a, b| a.compare(b) == Ordering::Equal);
    for x1 in region_points(&roots) {
        if n == 1 {
            if eval_rational(f, &[x1.clone()]) {
                return true;
            }
            continue;
        }
        let mut fiber = Vec::new();
        for p in &top {
            let u = p.substitute(0, &x1);
            if !u.is_zero() {
                fiber.extend(univariate_roots(&u.to_upoly(1).expect("univariate in x2")));
            }
        }
        fiber.sort_by(|a, b| a.compare(b));
        fiber.dedup_by(|a, b| a.compare(b) == Ordering::Equal);
        for x2 in region_points(&fiber) {
            if eval_rational(f, &[x1.clone(), x2]) {
                return true;
            }
        }
    }
    false
}

/// Random open formula over `x1 .. xn`: a conjunction of clauses of strict
/// atoms and disequations.
pub fn random_open_formula(rng: &mut TestRng, n: usize) -> Formula {
    let clauses = rng.gen_range(1..=3);
    let mut out = Vec::new();
    for _ in 0..clauses {
        let width = rng.gen_range(1..=2);
        let mut lits = Vec::new();
        for _ in 0..width {
            let level = rng.gen_range(1..=n);
            let p = random_poly(rng, level, 3, 3);
            let rel = [Relation::Lt, Relation::Gt, Relation::Ne][rng.gen_range(0..3)];
            lits.push(Formula::atom(p, rel));
        }
        out.push(if lits.len() == 1 { lits.pop().unwrap() } else { Formula::Or(lits) });
    }
    Formula::And(out)
}

/// `bitlength(|num|) + bitlength(den)`, counting zero as one bit.
pub fn bits(v: &Rational) -> u64 {
    v.numer().abs().bits().max(1) + v.denom().bits()
}

/// Brute-force minimal bit size of a rational strictly between `lo` and
/// `hi` that is not excluded. For each denominator in increasing order the
/// numerators are walked outward from zero, since bit size grows with the
/// numerator's magnitude. Stops once no larger denominator can win.
pub fn brute_min_bits(lo: &Rational, hi: &Rational, exclude: &[Rational]) -> u64 {
    let mut best = u64::MAX;
    let mut d = BigInt::one();
    loop {
        if d.bits() >= best {
            return best;
        }
        let dq = Rational::from_integer(d.clone());
        let first: BigInt = (lo * &dq).floor().to_integer() + 1;
        let last: BigInt = (hi * &dq).ceil().to_integer() - 1;
        // Offsets from the in-range numerator nearest zero, walking away
        // from zero (both ways when zero itself is inside).
        let straddles = !first.is_positive() && !last.is_negative();
        let anchor = if first.is_positive() { first.clone() } else if last.is_negative() { last.clone() } else { BigInt::zero() };
        let step = if last.is_negative() { -BigInt::one() } else { BigInt::one() };
        let mut k = BigInt::zero();
        'walk: loop {
            let mut cands = vec![&anchor + &step * &k];
            if straddles && !k.is_zero() {
                cands.push(&anchor - &step * &k);
            }
            let mut any = false;
            for n in cands {
                if n < first || n > last {
                    continue;
                }
                any = true;
                let c = Rational::new(n, d.clone());
                if *c.denom() == d && !exclude.contains(&c) {
                    best = best.min(bits(&c));
                    break 'walk;
                }
            }
            if !any {
                break;
            }
            k += 1;
        }
        d += 1;
    }
}

/// Determinant by fraction-exact Gaussian elimination.
pub fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(r) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if r != c {
            m.swap(r, c);
            d = -d;
        }
        d *= &m[c][c];
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let v = &f * &m[c][k];
                m[r][k] -= v;
            }
        }
    }
    d
}

/// Resultant of two univariate polynomials (coefficients low to high) as
/// the determinant of their Sylvester matrix.
pub fn sylvester(f: &[Rational], g: &[Rational]) -> Rational {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    if size == 0 {
        return Rational::one();
    }
    let mut rows = Vec::new();
    for i in 0..n {
        let mut row = vec![Rational::zero(); size];
        for (k, c) in f.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Rational::zero(); size];
        for (k, c) in g.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    det(rows)
}
