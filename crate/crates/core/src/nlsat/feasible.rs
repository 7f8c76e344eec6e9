//! Exact solution sets of one variable as unions of intervals.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;

use super::constraint::{Constraint, Relation};
use crate::numeric::{rational_between, simplicity_cmp, ExtendedReal, Rational, RealValue, Sign};
use crate::roots::{real_roots, sign_at_point, RootError, RootIsolation};

#[derive(Debug, Clone)]
pub struct Interval {
    pub lo: ExtendedReal,
    pub lo_closed: bool,
    pub hi: ExtendedReal,
    pub hi_closed: bool,
}

impl Interval {
    pub fn open(lo: ExtendedReal, hi: ExtendedReal) -> Self {
        Interval { lo, lo_closed: false, hi, hi_closed: false }
    }

    pub fn point(v: RealValue) -> Self {
        Interval { lo: ExtendedReal::Value(v.clone()), lo_closed: true, hi: ExtendedReal::Value(v), hi_closed: true }
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.compare(&self.hi) {
            Ordering::Less => false,
            Ordering::Equal => !(self.lo_closed && self.hi_closed && self.lo.as_value().is_some()),
            Ordering::Greater => true,
        }
    }

    pub fn is_point(&self) -> bool {
        !self.is_empty() && self.lo.compare(&self.hi) == Ordering::Equal
    }

    pub fn contains(&self, v: &RealValue) -> bool {
        let above = match self.lo.compare_value(v) {
            Ordering::Less => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Greater => false,
        };
        let below = match self.hi.compare_value(v) {
            Ordering::Greater => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Less => false,
        };
        above && below
    }

    fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = match self.lo.compare(&other.lo) {
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.compare(&other.hi) {
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Interval { lo, lo_closed, hi, hi_closed }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo);
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Sorted, disjoint and non-adjacent intervals.
#[derive(Debug, Clone)]
pub struct FeasibleSet {
    intervals: Vec<Interval>,
}

impl FeasibleSet {
    pub fn empty() -> Self {
        FeasibleSet { intervals: Vec::new() }
    }

    pub fn full() -> Self {
        FeasibleSet { intervals: vec![Interval::open(ExtendedReal::NegInf, ExtendedReal::PosInf)] }
    }

    pub fn from_intervals(intervals: Vec<Interval>) -> Self {
        let mut v: Vec<Interval> = intervals.into_iter().filter(|i| !i.is_empty()).collect();
        v.sort_by(|a, b| a.lo.compare(&b.lo).then_with(|| b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Interval> = Vec::with_capacity(v.len());
        for iv in v {
            if let Some(last) = out.last_mut() {
                let touches = match last.hi.compare(&iv.lo) {
                    Ordering::Greater => true,
                    Ordering::Equal => last.hi_closed || iv.lo_closed,
                    Ordering::Less => false,
                };
                if touches {
                    match last.hi.compare(&iv.hi) {
                        Ordering::Less => {
                            last.hi = iv.hi;
                            last.hi_closed = iv.hi_closed;
                        }
                        Ordering::Equal => last.hi_closed |= iv.hi_closed,
                        Ordering::Greater => {}
                    }
                    continue;
                }
            }
            out.push(iv);
        }
        FeasibleSet { intervals: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, v: &RealValue) -> bool {
        self.intervals.iter().any(|i| i.contains(v))
    }

    pub fn intersect(&self, other: &FeasibleSet) -> FeasibleSet {
        let mut parts = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                let c = a.intersect(b);
                if !c.is_empty() {
                    parts.push(c);
                }
            }
        }
        FeasibleSet::from_intervals(parts)
    }

    pub fn complement(&self) -> FeasibleSet {
        let mut parts = Vec::new();
        let mut lo = ExtendedReal::NegInf;
        let mut lo_closed = false;
        for iv in &self.intervals {
            parts.push(Interval { lo: lo.clone(), lo_closed, hi: iv.lo.clone(), hi_closed: !iv.lo_closed });
            lo = iv.hi.clone();
            lo_closed = !iv.hi_closed;
        }
        parts.push(Interval { lo, lo_closed, hi: ExtendedReal::PosInf, hi_closed: false });
        FeasibleSet::from_intervals(parts)
    }

    /// The preferred member: `0` when possible, else the rational of least
    /// bit size, else a forced algebraic point. `None` only when empty.
    pub fn decide_value(&self) -> Option<RealValue> {
        let zero = RealValue::Rational(Rational::zero());
        if self.contains(&zero) {
            return Some(zero);
        }
        let mut best: Option<Rational> = None;
        let mut offer = |c: Rational| {
            if best.as_ref().map_or(true, |b| simplicity_cmp(&c, b) == Ordering::Less) {
                best = Some(c);
            }
        };
        for iv in &self.intervals {
            if !iv.is_point() {
                if let Ok(c) = rational_between(&iv.lo, &iv.hi, &[]) {
                    offer(c);
                }
            }
            for (end, closed) in [(&iv.lo, iv.lo_closed), (&iv.hi, iv.hi_closed)] {
                if let (true, Some(RealValue::Rational(c))) = (closed, end.as_value()) {
                    offer(c.clone());
                }
            }
        }
        if let Some(c) = best {
            return Some(RealValue::Rational(c));
        }
        self.intervals.first().and_then(|iv| iv.lo.as_value().cloned())
    }
}

impl fmt::Display for FeasibleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self.intervals.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(" u "))
    }
}

/// Solution set in the variable `x_{prefix.len()+1}` of a constraint of that
/// level once the lower variables are fixed to `prefix`.
pub fn constraint_set(c: &Constraint, prefix: &[RealValue]) -> Result<FeasibleSet, RootError> {
    match c {
        Constraint::Poly { p, rel } => poly_set(p, *rel, prefix),
        Constraint::Root { var, rel, bound } => {
            debug_assert_eq!(*var, prefix.len());
            match bound.eval(prefix)? {
                None => Ok(FeasibleSet::empty()),
                Some(v) => Ok(relation_set(*rel, v)),
            }
        }
    }
}

fn relation_set(rel: Relation, v: RealValue) -> FeasibleSet {
    let at = ExtendedReal::Value(v.clone());
    let below = Interval { lo: ExtendedReal::NegInf, lo_closed: false, hi: at.clone(), hi_closed: false };
    let above = Interval { lo: at, lo_closed: false, hi: ExtendedReal::PosInf, hi_closed: false };
    let point = FeasibleSet::from_intervals(vec![Interval::point(v)]);
    let set = |ivs: Vec<Interval>| FeasibleSet::from_intervals(ivs);
    match rel {
        Relation::Lt => set(vec![below]),
        Relation::Gt => set(vec![above]),
        Relation::Eq => point,
        Relation::Ne => set(vec![below, above]),
        Relation::Le => set(vec![below, point.intervals[0].clone()]),
        Relation::Ge => set(vec![above, point.intervals[0].clone()]),
    }
}

fn poly_set(p: &crate::poly::Polynomial, rel: Relation, prefix: &[RealValue]) -> Result<FeasibleSet, RootError> {
    let roots = match real_roots(p, prefix)? {
        RootIsolation::Nullified => {
            return Ok(if rel.holds(Sign::Zero) { FeasibleSet::full() } else { FeasibleSet::empty() });
        }
        RootIsolation::Roots(r) => r,
    };
    let mut parts = Vec::new();
    let mut lo = ExtendedReal::NegInf;
    let mut point = prefix.to_vec();
    for k in 0..=roots.len() {
        let hi = roots.get(k).map_or(ExtendedReal::PosInf, |r| ExtendedReal::Value(r.clone()));
        let probe = rational_between(&lo, &hi, &[]).expect("distinct roots leave a gap");
        point.push(RealValue::Rational(probe));
        let s = sign_at_point(p, &point)?;
        point.pop();
        if rel.holds(s) {
            parts.push(Interval::open(lo.clone(), hi.clone()));
        }
        if let (Some(r), true) = (roots.get(k), rel.holds(Sign::Zero)) {
            parts.push(Interval::point(r.clone()));
        }
        lo = hi;
    }
    Ok(FeasibleSet::from_intervals(parts))
}
