//! Approximating cell construction: when a high-degree polynomial would bound
//! a sector, an auxiliary polynomial with a root strictly between the sample
//! and that bound takes its place, trading a smaller cell for cheaper
//! resultants.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::numeric::{
    q, rational_between, simplest_between, EmptyInterval, ExtendedReal, Rational, RealValue, Sign,
};
use crate::poly::Polynomial;
use crate::roots::{eval_irexp, ir_exps, sign_at_point, IndexedRoot, RootError};
use crate::scc::{
    construct, delineability_polys, AuxRecord, Barriers, Bound, CellDescription, PiecewiseRoot, SccFailure,
    SymbolicInterval,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Baseline,
    Simple,
    Taylor,
    Pwl,
    Outside,
}

impl Variant {
    fn label(self) -> &'static str {
        match self {
            Variant::Baseline => "baseline",
            Variant::Simple => "simple",
            Variant::Taylor => "taylor",
            Variant::Pwl => "pwl",
            Variant::Outside => "outside",
        }
    }
}

/// When a bound of degree `deg` in its main variable is approximated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Criterion {
    /// `deg >= threshold`.
    Fixed(u32),
    /// `deg >= c * n_cells + d`.
    Dynamic { c: Rational, d: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxConfig {
    pub variant: Variant,
    pub criterion: Criterion,
    /// At most this many approximated cells per run.
    pub max_apx_cells: Option<usize>,
    pub pwl_pieces: usize,
    /// Interval width for rational gradient approximations.
    pub taylor_precision: Rational,
}

impl Default for ApproxConfig {
    fn default() -> Self {
        Self::baseline()
    }
}

impl ApproxConfig {
    fn with(variant: Variant, criterion: Criterion, max_apx_cells: Option<usize>) -> Self {
        ApproxConfig {
            variant,
            criterion,
            max_apx_cells,
            pwl_pieces: 2,
            taylor_precision: Rational::new(BigInt::one(), BigInt::one() << 20),
        }
    }

    fn dynamic_criterion() -> Criterion {
        Criterion::Dynamic { c: q(1, 5), d: q(3, 1) }
    }

    pub fn baseline() -> Self {
        Self::with(Variant::Baseline, Criterion::Fixed(u32::MAX), None)
    }

    /// Approximates bounds of degree `>= j`, in at most 50 cells.
    pub fn simple(j: u32) -> Self {
        Self::with(Variant::Simple, Criterion::Fixed(j), Some(50))
    }

    pub fn dynamic() -> Self {
        Self::with(Variant::Simple, Self::dynamic_criterion(), None)
    }

    pub fn taylor() -> Self {
        Self::with(Variant::Taylor, Self::dynamic_criterion(), None)
    }

    pub fn pwl(pieces: usize) -> Self {
        assert!(pieces >= 1);
        ApproxConfig { pwl_pieces: pieces, ..Self::with(Variant::Pwl, Self::dynamic_criterion(), None) }
    }

    pub fn outside() -> Self {
        Self::with(Variant::Outside, Self::dynamic_criterion(), None)
    }

    /// Replaces the criterion by the dynamic one with the given constants.
    pub fn with_dynamic(mut self, c: Rational, d: Rational) -> Self {
        self.criterion = Criterion::Dynamic { c, d };
        self
    }

    pub fn with_budget(mut self, max_apx_cells: Option<usize>) -> Self {
        self.max_apx_cells = max_apx_cells;
        self
    }
}

impl fmt::Display for ApproxConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.variant, &self.criterion) {
            (Variant::Baseline, _) => f.write_str("baseline"),
            (Variant::Simple, Criterion::Fixed(j)) => write!(f, "simple-{j}"),
            (Variant::Simple, Criterion::Dynamic { .. }) => f.write_str("dynamic"),
            (Variant::Pwl, _) => write!(f, "pwl-{}", self.pwl_pieces),
            (v, _) => f.write_str(v.label()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown variant '{0}' (expected baseline, simple-J, dynamic, taylor, pwl-K or outside)")]
pub struct UnknownVariant(pub String);

impl FromStr for ApproxConfig {
    type Err = UnknownVariant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || UnknownVariant(s.to_string());
        let lower = s.to_ascii_lowercase();
        let num = |prefix: &str| -> Option<u32> { lower.strip_prefix(prefix)?.parse().ok() };
        match lower.as_str() {
            "baseline" => Ok(Self::baseline()),
            "dynamic" => Ok(Self::dynamic()),
            "taylor" => Ok(Self::taylor()),
            "outside" => Ok(Self::outside()),
            _ => {
                if let Some(j) = num("simple-") {
                    Ok(Self::simple(j))
                } else if let Some(k) = num("pwl-").filter(|k| *k >= 1) {
                    Ok(Self::pwl(k as usize))
                } else {
                    Err(bad())
                }
            }
        }
    }
}

/// Per-run bookkeeping: how many cells received auxiliary polynomials.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ApxState {
    n_cells: usize,
    max_fired_degree: u32,
}

impl ApxState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    /// Counts one approximated cell and checks the termination bounds.
    pub(crate) fn record_cell(&mut self, cfg: &ApproxConfig, degree: u32) {
        self.n_cells += 1;
        self.max_fired_degree = self.max_fired_degree.max(degree);
        if let Some(n) = cfg.max_apx_cells {
            assert!(self.n_cells <= n, "approximated-cell budget exceeded");
        }
        if let Criterion::Dynamic { c, d } = &cfg.criterion {
            if c.is_positive() {
                let slack = (Rational::from_integer(self.max_fired_degree.into()) - d) / c;
                let bound = slack.floor().to_integer().to_usize().unwrap_or(0) + 1;
                assert!(self.n_cells <= bound, "dynamic criterion fired more often than its degree bound allows");
            }
        }
    }
}

/// Whether a bound polynomial of level `j` should be approximated.
pub fn apx_criteria(bound_poly: &Polynomial, j: usize, cfg: &ApproxConfig, state: &ApxState) -> bool {
    if cfg.variant == Variant::Baseline {
        return false;
    }
    degree_meets(bound_poly.degree(j - 1), cfg, state)
}

fn degree_meets(deg: u32, cfg: &ApproxConfig, state: &ApxState) -> bool {
    if cfg.max_apx_cells.is_some_and(|n| state.n_cells >= n) {
        return false;
    }
    match &cfg.criterion {
        Criterion::Fixed(t) => deg >= *t,
        Criterion::Dynamic { c, d } => {
            let n = Rational::from_integer(BigInt::from(state.n_cells));
            Rational::from_integer(BigInt::from(deg)) >= c * n + d
        }
    }
}

fn ext(v: &RealValue) -> ExtendedReal {
    ExtendedReal::Value(v.clone())
}

/// Simplest rational strictly between `s_j` and the bound value `b` that is
/// not a root value.
pub fn approximation_point(b: &RealValue, s_j: &RealValue, excludes: &[RealValue]) -> Result<Rational, EmptyInterval> {
    let (lo, hi) = if b < s_j { (b, s_j) } else { (s_j, b) };
    rational_between(&ext(lo), &ext(hi), excludes)
}

/// `x_j - c` with `c` from [`approximation_point`].
pub fn apx_simple(b: &RealValue, s_j: &RealValue, excludes: &[RealValue], j: usize) -> Result<Polynomial, EmptyInterval> {
    let c = approximation_point(b, s_j, excludes)?;
    Ok(Polynomial::linear(j - 1, &c))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApxFallback {
    #[error("gradient in the main variable vanishes at the bound")]
    ZeroGradient,
    #[error("lower coordinate is irrational")]
    IrrationalCoordinate,
    #[error("no delineable neighbourhood around the sample")]
    DegenerateRegion,
    #[error("bound and neighbour values coincide")]
    Degenerate,
    #[error(transparent)]
    Root(#[from] RootError),
}

type Interval = (Rational, Rational);

fn imul(a: &Interval, b: &Interval) -> Interval {
    let c = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let lo = c.iter().min().unwrap().clone();
    let hi = c.iter().max().unwrap().clone();
    (lo, hi)
}

/// Interval enclosure of `p` over a box.
fn interval_eval(p: &Polynomial, bx: &[Interval]) -> Interval {
    let mut acc = (Rational::zero(), Rational::zero());
    for (m, c) in p.terms() {
        let mut t = (c.clone(), c.clone());
        for (i, e) in m.exps().iter().enumerate() {
            for _ in 0..*e {
                t = imul(&t, &bx[i]);
            }
        }
        acc = (&acc.0 + &t.0, &acc.1 + &t.1);
    }
    acc
}

fn rational_point(r: &[RealValue]) -> Option<Vec<Rational>> {
    r.iter().map(|v| v.as_rational().cloned()).collect()
}

/// `dp/dx_k(r)` for `k` in `wanted`: exact at rational points, otherwise the
/// simplest rational in an enclosure no wider than `precision`.
fn gradients(p: &Polynomial, r: &[RealValue], wanted: &[usize], precision: &Rational) -> Vec<Rational> {
    let derivs: Vec<Polynomial> = wanted.iter().map(|&k| p.derivative(k)).collect();
    if let Some(pt) = rational_point(r) {
        return derivs.iter().map(|d| d.eval(&pt)).collect();
    }
    let mut width = precision.clone();
    loop {
        let refined: Vec<RealValue> = r.iter().map(|v| v.refine(&width)).collect();
        let bx: Vec<Interval> = refined.iter().map(|v| v.bounds()).collect();
        let encl: Vec<Interval> = derivs.iter().map(|d| interval_eval(d, &bx)).collect();
        if encl.iter().all(|(lo, hi)| hi - lo <= *precision) {
            return encl
                .into_iter()
                .map(|(lo, hi)| {
                    if lo == hi {
                        lo
                    } else {
                        simplest_between(&ExtendedReal::rational(lo), &ExtendedReal::rational(hi)).unwrap()
                    }
                })
                .collect();
        }
        width /= Rational::from_integer(BigInt::from(4));
    }
}

/// Linear polynomial through `(s_prefix, c)` with the gradient of `p` at
/// `(s_prefix, b)`. Irrational lower coordinates are left out.
pub fn apx_taylor(
    p: &Polynomial,
    prefix: &[RealValue],
    b: &RealValue,
    c: &Rational,
    precision: &Rational,
) -> Result<Polynomial, ApxFallback> {
    let j = prefix.len() + 1;
    let mut r = prefix.to_vec();
    r.push(b.clone());
    let dj = p.derivative(j - 1);
    // Certify a nonzero main gradient before approximating it.
    let algebraic = r.iter().filter(|v| !v.is_rational()).count();
    if algebraic <= 1 {
        if sign_at_point(&dj, &r)? == Sign::Zero {
            return Err(ApxFallback::ZeroGradient);
        }
    } else {
        let mut width = precision.clone();
        let mut certified = false;
        for _ in 0..40 {
            let bx: Vec<Interval> = r.iter().map(|v| v.refine(&width).bounds()).collect();
            let (lo, hi) = interval_eval(&dj, &bx);
            if lo.is_positive() || hi.is_negative() {
                certified = true;
                break;
            }
            width /= Rational::from_integer(BigInt::from(4));
        }
        if !certified {
            return Err(ApxFallback::ZeroGradient);
        }
    }
    let mut wanted: Vec<usize> = (0..j - 1).filter(|&k| prefix[k].is_rational()).collect();
    wanted.push(j - 1);
    let mut g = gradients(p, &r, &wanted, precision);
    let gj = g.pop().unwrap();
    if gj.is_zero() {
        return Err(ApxFallback::ZeroGradient);
    }
    let mut out = Polynomial::linear(j - 1, c).scale(&gj);
    for (k, gk) in wanted.iter().zip(&g) {
        if !gk.is_zero() {
            let sk = prefix[*k].as_rational().unwrap();
            out = &out + &Polynomial::linear(*k, sk).scale(gk);
        }
    }
    Ok(out)
}

/// Which side of the sample a bound lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

/// Refines `a` and `b` (with `a < b`) until their rational enclosures are
/// disjoint; returns `(upper end of a, lower end of b)`.
fn separate(a: &RealValue, b: &RealValue) -> (Rational, Rational) {
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        let (_, ah) = a.bounds();
        let (bl, _) = b.bounds();
        if ah < bl {
            return (ah, bl);
        }
        let (al, _) = a.bounds();
        let (_, bh) = b.bounds();
        let w = (&bh - &al) / Rational::from_integer(BigInt::from(8));
        a = a.refine(&w);
        b = b.refine(&w);
    }
}

/// Piecewise linear under-approximation of the bound `root(p, index)` over
/// `x_{j-1}`, with `pieces` pieces around the sample.
pub fn apx_pwl(
    root: &IndexedRoot,
    sample: &[RealValue],
    b: &RealValue,
    side: Side,
    pieces: usize,
) -> Result<PiecewiseRoot, ApxFallback> {
    let p = &root.poly;
    let j = p.level();
    if j < 2 {
        return Err(ApxFallback::DegenerateRegion);
    }
    let s_prev = sample[j - 2].as_rational().cloned().ok_or(ApxFallback::IrrationalCoordinate)?;
    let s_j = &sample[j - 1];
    let below = &sample[..j - 2];

    // Neighbourhood of s_{j-1} on which p stays delineable.
    let del: Vec<Polynomial> = delineability_polys(p, &sample[..j - 1])
        .map_err(|_| ApxFallback::DegenerateRegion)?
        .into_iter()
        .filter(|q| q.level() == j - 1)
        .collect();
    let at = RealValue::Rational(s_prev.clone());
    let mut d_lo = ExtendedReal::NegInf;
    let mut d_hi = ExtendedReal::PosInf;
    for (_, v) in ir_exps(&del, below)? {
        match v.compare(&at) {
            Ordering::Equal => return Err(ApxFallback::DegenerateRegion),
            Ordering::Less => d_lo = ExtendedReal::Value(v),
            Ordering::Greater => {
                if matches!(d_hi, ExtendedReal::PosInf) {
                    d_hi = ExtendedReal::Value(v);
                }
            }
        }
    }
    let sp = ExtendedReal::rational(s_prev.clone());
    let one = Rational::one();
    let left_end = match &d_lo {
        ExtendedReal::Value(_) => rational_between(&d_lo, &sp, &[]).unwrap(),
        _ => &s_prev - &one,
    };
    let right_end = match &d_hi {
        ExtendedReal::Value(_) => rational_between(&sp, &d_hi, &[]).unwrap(),
        _ => &s_prev + &one,
    };
    let n_left = pieces / 2;
    let n_right = pieces - n_left;
    let mut supports = Vec::new();
    for i in (1..=n_left).rev() {
        let t = Rational::new(BigInt::from(i), BigInt::from(n_left));
        supports.push(&s_prev - &((&s_prev - &left_end) * t));
    }
    supports.push(s_prev.clone());
    for i in 1..=n_right {
        let t = Rational::new(BigInt::from(i), BigInt::from(n_right));
        supports.push(&s_prev + &((&right_end - &s_prev) * t));
    }
    if supports.len() < 2 {
        return Err(ApxFallback::DegenerateRegion);
    }

    // Offset from the gap between sample and bound.
    let gap = match side {
        Side::Upper => {
            let (sh, bl) = separate(s_j, b);
            bl - sh
        }
        Side::Lower => {
            let (bh, sl) = separate(b, s_j);
            sl - bh
        }
    };
    let delta = gap / Rational::from_integer(BigInt::from(2));
    let mut values = Vec::with_capacity(supports.len());
    for d in &supports {
        let mut pt = below.to_vec();
        pt.push(RealValue::Rational(d.clone()));
        let xi = eval_irexp(root, &pt)?.ok_or(ApxFallback::DegenerateRegion)?;
        let xi = xi.refine(&(&delta / Rational::from_integer(BigInt::from(2))));
        let (lo, hi) = xi.bounds();
        let v = match side {
            Side::Upper => simplest_between(&ExtendedReal::rational(&lo - &delta), &ExtendedReal::rational(lo)),
            Side::Lower => simplest_between(&ExtendedReal::rational(hi.clone()), &ExtendedReal::rational(&hi + &delta)),
        }
        .unwrap();
        values.push(v);
    }
    let xj = j - 1;
    let xprev = j - 2;
    let pieces: Vec<Polynomial> = (0..supports.len() - 1)
        .map(|l| {
            let run = &supports[l + 1] - &supports[l];
            let rise = &values[l + 1] - &values[l];
            let a = Polynomial::linear(xj, &values[l]).scale(&run);
            let b = Polynomial::linear(xprev, &supports[l]).scale(&rise);
            (&a - &b).normalize()
        })
        .collect();
    Ok(PiecewiseRoot { supports, pieces })
}

/// `x_j - c` with `c` strictly between a bound value and a root beyond it.
pub fn apx_outside(
    bound: &RealValue,
    neighbor: &RealValue,
    excludes: &[RealValue],
    j: usize,
) -> Result<(Polynomial, Rational), ApxFallback> {
    let (lo, hi) = match bound.compare(neighbor) {
        Ordering::Equal => return Err(ApxFallback::Degenerate),
        Ordering::Less => (bound, neighbor),
        Ordering::Greater => (neighbor, bound),
    };
    let c = rational_between(&ext(lo), &ext(hi), excludes).map_err(|_| ApxFallback::Degenerate)?;
    Ok((Polynomial::linear(j - 1, &c), c))
}

/// Changes to one level requested by the approximation layer.
#[derive(Debug, Default)]
pub(crate) struct LevelAdjust {
    /// Joins `P_j` before the interval is re-picked.
    pub aux: Vec<Polynomial>,
    /// Compound bounds replacing the picked ones.
    pub lower: Option<Bound>,
    pub upper: Option<Bound>,
    pub barriers: Barriers,
    /// Largest bound degree that triggered.
    pub degree: u32,
    pub records: Vec<AuxRecord>,
}

pub(crate) fn adjust_level(
    cfg: &ApproxConfig,
    state: &ApxState,
    j: usize,
    roots: &[(IndexedRoot, RealValue)],
    interval: &SymbolicInterval,
    sample: &[RealValue],
) -> Result<Option<LevelAdjust>, RootError> {
    if cfg.variant == Variant::Baseline {
        return Ok(None);
    }
    let SymbolicInterval::Sector { lower, upper } = interval else {
        return Ok(None);
    };
    let prefix = &sample[..j - 1];
    let s_j = &sample[j - 1];
    let excludes: Vec<RealValue> = roots.iter().map(|(_, v)| v.clone()).collect();
    let mut adj = LevelAdjust::default();
    let mut fired = false;

    for (bound, side) in [(lower, Side::Lower), (upper, Side::Upper)] {
        let Some(Bound::Root(xi)) = bound else { continue };
        let b = roots.iter().find(|(r, _)| r == xi).map(|(_, v)| v.clone()).expect("bound among roots");
        let deg = xi.poly.degree(j - 1);
        let record = |poly: Polynomial, variant: Variant| AuxRecord {
            level: j,
            variant: variant.label(),
            poly,
            replaced: Some(xi.clone()),
        };

        if cfg.variant == Variant::Outside {
            let beyond = |v: &RealValue| match side {
                Side::Lower => *v < b,
                Side::Upper => *v > b,
            };
            let candidates: Vec<&(IndexedRoot, RealValue)> = roots.iter().filter(|(_, v)| beyond(v)).collect();
            let nearest = match side {
                Side::Lower => candidates.into_iter().rev().find(|(r, _)| r.poly != xi.poly),
                Side::Upper => candidates.into_iter().find(|(r, _)| r.poly != xi.poly),
            };
            let Some((nb, nv)) = nearest else { continue };
            let nb_deg = nb.poly.degree(j - 1);
            if deg < 2 || nb_deg < 2 || !degree_meets(deg.max(nb_deg), cfg, state) {
                continue;
            }
            let Ok((poly, c)) = apx_outside(&b, nv, &excludes, j) else { continue };
            adj.records.push(record(poly.clone(), Variant::Outside));
            match side {
                Side::Lower => adj.barriers.lower = Some((poly, c)),
                Side::Upper => adj.barriers.upper = Some((poly, c)),
            }
            adj.degree = adj.degree.max(deg.max(nb_deg));
            fired = true;
            continue;
        }

        if !apx_criteria(&xi.poly, j, cfg, state) {
            continue;
        }
        let Ok(c) = approximation_point(&b, s_j, &excludes) else { continue };
        let simple = Polynomial::linear(j - 1, &c);
        fired = true;
        adj.degree = adj.degree.max(deg);
        match cfg.variant {
            Variant::Taylor => match apx_taylor(&xi.poly, prefix, &b, &c, &cfg.taylor_precision) {
                Ok(t) => {
                    adj.records.push(record(t.clone(), Variant::Taylor));
                    adj.aux.push(t);
                }
                Err(_) => {
                    adj.records.push(record(simple.clone(), Variant::Simple));
                    adj.aux.push(simple);
                }
            },
            Variant::Pwl => match apx_pwl(xi, sample, &b, side, cfg.pwl_pieces) {
                Ok(pw) => {
                    for piece in &pw.pieces {
                        adj.records.push(record(piece.clone(), Variant::Pwl));
                    }
                    match side {
                        Side::Lower => adj.lower = Some(Bound::Piecewise(pw)),
                        Side::Upper => adj.upper = Some(Bound::Piecewise(pw)),
                    }
                }
                Err(_) => {
                    adj.records.push(record(simple.clone(), Variant::Simple));
                    adj.aux.push(simple);
                }
            },
            _ => {
                adj.records.push(record(simple.clone(), Variant::Simple));
                adj.aux.push(simple);
            }
        }
    }
    Ok(fired.then_some(adj))
}

/// Levelwise construction with auxiliary polynomials per `cfg`; updates the
/// run's approximated-cell count.
pub fn apx_scc(
    polys: &[Polynomial],
    sample: &[RealValue],
    cfg: &ApproxConfig,
    state: &mut ApxState,
) -> Result<CellDescription, SccFailure> {
    construct(polys, sample, Some((cfg, state)))
}
