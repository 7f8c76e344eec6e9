//! Levelwise single cell construction.
//!
//! Given polynomials `P` and a sample `s`, builds symbolic intervals
//! `I_i, ..., I_1` top-down so that every polynomial of `P` is sign-invariant
//! on the cell they describe. Each level picks the closest roots around the
//! sample as bounds, then projects delineability and ordering conditions onto
//! the level below.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::apx::{self, ApproxConfig, ApxState, LevelAdjust};
use crate::numeric::{Rational, RealValue, Sign};
use crate::poly::{resultant, Polynomial, VariableOrder};
use crate::roots::{eval_irexp, ir_exps, real_roots, sign_at_point, IndexedRoot, RootError, RootIsolation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SccFailure {
    #[error("polynomial {0} is nullified over the sample")]
    Nullified(Polynomial),
    #[error("resultant of {0} and {1} vanishes identically")]
    ZeroResultant(Polynomial, Polynomial),
    #[error(transparent)]
    Root(#[from] RootError),
}

/// Piecewise linear root function in `x_j` over `x_{j-1}`. Piece `l` is used
/// for `supports[l] <= x_{j-1} <= supports[l+1]`; the outer pieces extend to
/// infinity. Consecutive pieces agree at their common support point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PiecewiseRoot {
    pub supports: Vec<Rational>,
    pub pieces: Vec<Polynomial>,
}

impl PiecewiseRoot {
    fn level(&self) -> usize {
        self.pieces[0].level()
    }

    fn piece_for(&self, x: &RealValue) -> usize {
        let last = self.pieces.len() - 1;
        (0..last)
            .find(|&l| x.compare_rational(&self.supports[l + 1]) != Ordering::Greater)
            .unwrap_or(last)
    }

    pub fn eval(&self, prefix: &[RealValue]) -> Result<Option<RealValue>, RootError> {
        let x = &prefix[self.level() - 2];
        let piece = &self.pieces[self.piece_for(x)];
        eval_irexp(&IndexedRoot::new(piece.clone(), 1), prefix)
    }

    pub fn display_with(&self, vars: &VariableOrder) -> String {
        let sup: Vec<String> = self.supports.iter().map(|d| d.to_string()).collect();
        let pieces: Vec<String> = self.pieces.iter().map(|p| p.display_with(vars)).collect();
        format!(
            "pwl({}; [{}]; {})",
            vars.name(self.level() - 2),
            sup.join(", "),
            pieces.join("; ")
        )
    }
}

/// A sector bound: an indexed root or a piecewise linear root function.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    Root(IndexedRoot),
    Piecewise(PiecewiseRoot),
}

impl Bound {
    pub fn eval(&self, prefix: &[RealValue]) -> Result<Option<RealValue>, RootError> {
        match self {
            Bound::Root(r) => eval_irexp(r, prefix),
            Bound::Piecewise(p) => p.eval(prefix),
        }
    }

    pub fn polys(&self) -> Vec<&Polynomial> {
        match self {
            Bound::Root(r) => vec![&r.poly],
            Bound::Piecewise(p) => p.pieces.iter().collect(),
        }
    }

    pub fn display_with(&self, vars: &VariableOrder) -> String {
        match self {
            Bound::Root(r) => r.display_with(vars),
            Bound::Piecewise(p) => p.display_with(vars),
        }
    }
}

impl From<IndexedRoot> for Bound {
    fn from(r: IndexedRoot) -> Self {
        Bound::Root(r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolicInterval {
    Section(IndexedRoot),
    /// Open interval; a missing bound is infinite. `Sector { None, None }`
    /// is the whole line.
    Sector { lower: Option<Bound>, upper: Option<Bound> },
}

impl SymbolicInterval {
    pub fn whole_line() -> Self {
        SymbolicInterval::Sector { lower: None, upper: None }
    }

    pub fn display_with(&self, var: &str, vars: &VariableOrder) -> String {
        match self {
            SymbolicInterval::Section(r) => format!("{var} = {}", r.display_with(vars)),
            SymbolicInterval::Sector { lower: None, upper: None } => "true".into(),
            SymbolicInterval::Sector { lower: Some(l), upper: None } => {
                format!("{var} > {}", l.display_with(vars))
            }
            SymbolicInterval::Sector { lower: None, upper: Some(u) } => {
                format!("{var} < {}", u.display_with(vars))
            }
            SymbolicInterval::Sector { lower: Some(l), upper: Some(u) } => {
                format!("{} < {var} < {}", l.display_with(vars), u.display_with(vars))
            }
        }
    }

    /// Whether `x` lies in the concrete interval over `prefix`; `None` if a
    /// bound is undefined there.
    pub fn contains(&self, prefix: &[RealValue], x: &RealValue) -> Result<Option<bool>, RootError> {
        match self {
            SymbolicInterval::Section(r) => Ok(eval_irexp(r, prefix)?.map(|v| v == *x)),
            SymbolicInterval::Sector { lower, upper } => {
                let mut inside = true;
                if let Some(l) = lower {
                    match l.eval(prefix)? {
                        None => return Ok(None),
                        Some(v) => inside &= v < *x,
                    }
                }
                if let Some(u) = upper {
                    match u.eval(prefix)? {
                        None => return Ok(None),
                        Some(v) => inside &= *x < v,
                    }
                }
                Ok(Some(inside))
            }
        }
    }
}

/// Counters describing the projection work spent on one cell.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CellStats {
    pub resultants: usize,
    /// Largest total degree of a raw (unnormalized) resultant or discriminant.
    pub max_resultant_degree: u32,
    pub discriminants: usize,
    /// Sum over resultants of `deg(p, x_j) * deg(q, x_j)`, a proxy for the
    /// number of polynomial multiplications.
    pub mult_proxy: u64,
    pub aux_polys: usize,
}

/// An auxiliary polynomial inserted by the approximation layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxRecord {
    pub level: usize,
    pub variant: &'static str,
    pub poly: Polynomial,
    pub replaced: Option<IndexedRoot>,
}

#[derive(Debug, Clone)]
pub struct CellDescription {
    /// `I_1 .. I_i`.
    pub intervals: Vec<SymbolicInterval>,
    pub sample: Vec<RealValue>,
    pub stats: CellStats,
    pub aux: Vec<AuxRecord>,
}

impl CellDescription {
    /// The zero-dimensional cell.
    pub fn empty() -> Self {
        CellDescription { intervals: Vec::new(), sample: Vec::new(), stats: CellStats::default(), aux: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    /// One interval per line, `I_1` first.
    pub fn display_with(&self, vars: &VariableOrder) -> String {
        self.intervals
            .iter()
            .enumerate()
            .map(|(j, iv)| iv.display_with(&vars.name(j), vars))
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// `Some(true)` iff `r` lies in the cell; `None` when a bound is undefined
    /// at `r`, which only happens outside the cell.
    pub fn contains(&self, r: &[RealValue]) -> Result<Option<bool>, RootError> {
        assert_eq!(r.len(), self.intervals.len());
        for (j, iv) in self.intervals.iter().enumerate() {
            match iv.contains(&r[..j], &r[j])? {
                Some(true) => continue,
                other => return Ok(other),
            }
        }
        Ok(Some(true))
    }
}

impl fmt::Display for CellDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&VariableOrder::default()))
    }
}

pub fn cell_contains(cell: &CellDescription, r: &[RealValue]) -> Result<Option<bool>, RootError> {
    cell.contains(r)
}

/// Symbolic interval around `s_j` from the sorted roots. When several roots
/// share the bounding value, the polynomial of lowest degree in `x_j` wins.
pub fn pick_interval(roots: &[(IndexedRoot, RealValue)], s_j: &RealValue) -> SymbolicInterval {
    let cheapest = |pred: &dyn Fn(&RealValue) -> bool| -> Option<IndexedRoot> {
        roots
            .iter()
            .filter(|(_, v)| pred(v))
            .min_by_key(|(r, _)| r.poly.degree(r.level() - 1))
            .map(|(r, _)| r.clone())
    };
    if let Some(r) = cheapest(&|v| v == s_j) {
        return SymbolicInterval::Section(r);
    }
    let below = roots.iter().rev().find(|(_, v)| v < s_j).map(|(_, v)| v.clone());
    let above = roots.iter().find(|(_, v)| v > s_j).map(|(_, v)| v.clone());
    SymbolicInterval::Sector {
        lower: below.and_then(|b| cheapest(&|v| *v == b)).map(Bound::Root),
        upper: above.and_then(|b| cheapest(&|v| *v == b)).map(Bound::Root),
    }
}

/// Discriminant, leading coefficient, and the first coefficient (from the
/// top) not vanishing at `prefix`. Constants are dropped.
pub fn delineability_polys(p: &Polynomial, prefix: &[RealValue]) -> Result<Vec<Polynomial>, SccFailure> {
    Ok(delineability(p, prefix)?.0)
}

/// Also returns the raw discriminant degree, if one was computed.
pub(crate) fn delineability(p: &Polynomial, prefix: &[RealValue]) -> Result<(Vec<Polynomial>, Option<u32>), SccFailure> {
    let var = p.level() - 1;
    let mut out = BTreeSet::new();
    let mut disc_degree = None;
    if p.degree(var) >= 2 {
        let dp = p.derivative(var);
        let raw = resultant(p, &dp, var);
        if raw.is_zero() {
            return Err(SccFailure::ZeroResultant(p.clone(), dp));
        }
        disc_degree = Some(raw.total_degree());
        out.insert(raw.normalize());
    }
    let coeffs = p.coefficients(var);
    out.insert(coeffs.last().unwrap().normalize());
    for c in coeffs.iter().rev() {
        if sign_at_point(c, prefix)? != Sign::Zero {
            out.insert(c.normalize());
            break;
        }
    }
    Ok((out.into_iter().filter(|q| !q.is_constant()).collect(), disc_degree))
}

/// Root polynomials on both sides of the cell kept ordered against a bound.
/// A barrier is an auxiliary `x_j - c` with `c` beyond that side's bound;
/// roots past the barrier are paired with it rather than with the bound.
#[derive(Debug, Clone, Default)]
pub struct Barriers {
    pub lower: Option<(Polynomial, Rational)>,
    pub upper: Option<(Polynomial, Rational)>,
}

/// Resultant pairs keeping every root on its side of the nearest bound, plus
/// the pair of both bounds. Pairs are unordered and never contain the same
/// polynomial twice.
pub fn ordering_resultants(
    roots: &[(IndexedRoot, RealValue)],
    interval: &SymbolicInterval,
    s_j: &RealValue,
    barriers: &Barriers,
) -> Vec<(Polynomial, Polynomial)> {
    let mut pairs: BTreeSet<(Polynomial, Polynomial)> = BTreeSet::new();
    let mut add = |a: &Polynomial, b: &Polynomial| {
        if a != b {
            let (x, y) = if a < b { (a, b) } else { (b, a) };
            pairs.insert((x.clone(), y.clone()));
        }
    };
    match interval {
        SymbolicInterval::Section(sec) => {
            for (r, _) in roots {
                add(&r.poly, &sec.poly);
            }
        }
        SymbolicInterval::Sector { lower, upper } => {
            let side = |bound: &Option<Bound>,
                        barrier: &Option<(Polynomial, Rational)>,
                        below: bool,
                        add: &mut dyn FnMut(&Polynomial, &Polynomial)| {
                let Some(b) = bound else { return };
                let beyond = |v: &RealValue| if below { v < s_j } else { v > s_j };
                for (r, v) in roots.iter().filter(|(_, v)| beyond(v)) {
                    let past_barrier = barrier.as_ref().is_some_and(|(_, c)| {
                        let o = v.compare_rational(c);
                        if below {
                            o == Ordering::Less
                        } else {
                            o == Ordering::Greater
                        }
                    });
                    match (past_barrier, barrier) {
                        (true, Some((bp, _))) => add(&r.poly, bp),
                        _ => {
                            for bp in b.polys() {
                                add(&r.poly, bp);
                            }
                        }
                    }
                }
                if let Some((bp, _)) = barrier {
                    for p in b.polys() {
                        add(p, bp);
                    }
                }
            };
            side(lower, &barriers.lower, true, &mut add);
            side(upper, &barriers.upper, false, &mut add);
            if let (Some(l), Some(u)) = (lower, upper) {
                for a in l.polys() {
                    for b in u.polys() {
                        add(a, b);
                    }
                }
            }
        }
    }
    pairs.into_iter().collect()
}

/// Plain levelwise construction; `Err` is the FAIL outcome.
pub fn levelwise_scc(polys: &[Polynomial], sample: &[RealValue]) -> Result<CellDescription, SccFailure> {
    construct(polys, sample, None)
}

/// Shared loop of the plain and the approximating construction.
pub(crate) fn construct(
    polys: &[Polynomial],
    sample: &[RealValue],
    mut apx: Option<(&ApproxConfig, &mut ApxState)>,
) -> Result<CellDescription, SccFailure> {
    let n = sample.len();
    let mut levels: Vec<BTreeSet<Polynomial>> = vec![BTreeSet::new(); n + 1];
    for p in polys {
        let l = p.level();
        assert!(l <= n, "polynomial {p} has level above the sample dimension");
        if l > 0 {
            levels[l].insert(p.normalize());
        }
    }
    let mut stats = CellStats::default();
    let mut intervals = vec![SymbolicInterval::whole_line(); n];
    let mut aux_log = Vec::new();
    let mut fired_degree: Option<u32> = None;

    for j in (1..=n).rev() {
        let prefix = &sample[..j - 1];
        let s_j = &sample[j - 1];
        let mut pj = std::mem::take(&mut levels[j]);
        for p in &pj {
            if real_roots(p, prefix)? == RootIsolation::Nullified {
                return Err(SccFailure::Nullified(p.clone()));
            }
        }
        let mut roots = ir_exps(&pj, prefix)?;
        let mut interval = pick_interval(&roots, s_j);
        let mut barriers = Barriers::default();
        let mut aux_here: Vec<Polynomial> = Vec::new();

        if let Some((cfg, state)) = apx.as_mut() {
            if let Some(adj) = apx::adjust_level(cfg, state, j, &roots, &interval, sample)? {
                let LevelAdjust { aux, lower, upper, barriers: b, degree, records } = adj;
                fired_degree = Some(fired_degree.map_or(degree, |d| d.max(degree)));
                for a in &aux {
                    pj.insert(a.normalize());
                }
                aux_here.extend(aux.iter().map(|a| a.normalize()));
                aux_here.extend(b.lower.iter().chain(b.upper.iter()).map(|(p, _)| p.clone()));
                for bound in lower.iter().chain(upper.iter()) {
                    aux_here.extend(bound.polys().into_iter().cloned());
                }
                stats.aux_polys += records.len();
                aux_log.extend(records);
                if !aux.is_empty() {
                    roots = ir_exps(&pj, prefix)?;
                    interval = pick_interval(&roots, s_j);
                }
                if let SymbolicInterval::Sector { lower: lo, upper: up } = &mut interval {
                    if lower.is_some() {
                        *lo = lower;
                    }
                    if upper.is_some() {
                        *up = upper;
                    }
                }
                barriers = b;
            }
        }

        if j > 1 {
            let add_below = |q: Polynomial, levels: &mut Vec<BTreeSet<Polynomial>>| {
                let l = q.level();
                if l > 0 {
                    debug_assert!(l < j);
                    levels[l].insert(q);
                }
            };
            for p in &pj {
                let (polys, disc_degree) = delineability(p, prefix)?;
                if let Some(d) = disc_degree {
                    stats.discriminants += 1;
                    stats.max_resultant_degree = stats.max_resultant_degree.max(d);
                }
                for q in polys {
                    add_below(q, &mut levels);
                }
            }
            let var = j - 1;
            for (a, b) in ordering_resultants(&roots, &interval, s_j, &barriers) {
                let raw = resultant(&a, &b, var);
                if raw.is_zero() {
                    return Err(SccFailure::ZeroResultant(a, b));
                }
                stats.resultants += 1;
                stats.max_resultant_degree = stats.max_resultant_degree.max(raw.total_degree());
                stats.mult_proxy += u64::from(a.degree(var)) * u64::from(b.degree(var));
                check_degree_bound(&a, &b, &raw, &aux_here);
                add_below(raw.normalize(), &mut levels);
            }
        }
        intervals[j - 1] = interval;
    }

    if let (Some((cfg, state)), Some(degree)) = (apx.as_mut(), fired_degree) {
        state.record_cell(cfg, degree);
    }
    Ok(CellDescription { intervals, sample: sample.to_vec(), stats, aux: aux_log })
}

/// A resultant against an auxiliary polynomial never exceeds the degree of
/// the other operand: per variable for `x_j - c`, in total degree for the
/// multivariate linear forms.
fn check_degree_bound(a: &Polynomial, b: &Polynomial, raw: &Polynomial, aux: &[Polynomial]) {
    for (x, other) in [(a, b), (b, a)] {
        if !aux.contains(x) {
            continue;
        }
        let main = x.level().saturating_sub(1);
        let univariate_linear = x.total_degree() == 1 && (0..main).all(|v| x.degree(v) == 0);
        if univariate_linear {
            for v in 0..raw.level() {
                assert!(
                    raw.degree(v) <= other.degree(v),
                    "resultant with {x} exceeds the degree of {other} in variable {v}"
                );
            }
        } else {
            assert!(
                raw.total_degree() <= other.total_degree(),
                "resultant with {x} exceeds the total degree of {other}"
            );
        }
    }
}
