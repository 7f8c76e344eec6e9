//! Explanations of an infeasible level: `!C or !I_1 or .. or !I_{j-1}`.

use std::collections::BTreeSet;

use super::cnf::{AtomTable, Clause, Lit};
use super::constraint::{Constraint, Relation};
use crate::apx::{apx_scc, ApproxConfig, ApxState};
use crate::numeric::RealValue;
use crate::poly::{resultant, Polynomial};
use crate::roots::{ir_exps, real_roots, IndexedRoot, RootIsolation};
use crate::scc::{delineability, Bound, CellDescription, CellStats, SccFailure, SymbolicInterval};

#[derive(Debug, Clone)]
pub struct Explanation {
    pub clause: Clause,
    /// The excluded cell over `x_1 .. x_{j-1}`; `None` for a point exclusion.
    pub cell: Option<CellDescription>,
    pub stats: CellStats,
}

/// Projection of the whole fiber at level `j = prefix.len() + 1`: the
/// polynomials of `polys` keep their roots delineable and ordered over the
/// cell built from the result.
fn full_fiber(polys: &BTreeSet<Polynomial>, prefix: &[RealValue], stats: &mut CellStats) -> Result<Vec<Polynomial>, SccFailure> {
    let var = prefix.len();
    let mut below = BTreeSet::new();
    for p in polys {
        if real_roots(p, prefix)? == RootIsolation::Nullified {
            return Err(SccFailure::Nullified(p.clone()));
        }
        let (ps, disc) = delineability(p, prefix)?;
        if let Some(d) = disc {
            stats.discriminants += 1;
            stats.max_resultant_degree = stats.max_resultant_degree.max(d);
        }
        below.extend(ps);
    }
    let roots = ir_exps(polys, prefix)?;
    let mut paired = BTreeSet::new();
    for w in roots.windows(2) {
        let (a, b) = (&w[0].0.poly, &w[1].0.poly);
        if a == b || !paired.insert(if a < b { (a, b) } else { (b, a) }) {
            continue;
        }
        let raw = resultant(a, b, var);
        if raw.is_zero() {
            return Err(SccFailure::ZeroResultant(a.clone(), b.clone()));
        }
        stats.resultants += 1;
        stats.max_resultant_degree = stats.max_resultant_degree.max(raw.total_degree());
        stats.mult_proxy += u64::from(a.degree(var)) * u64::from(b.degree(var));
        below.insert(raw.normalize());
    }
    Ok(below.into_iter().filter(|q| !q.is_constant()).collect())
}

fn root_lit(table: &mut AtomTable, var: usize, rel: Relation, bound: Bound) -> Lit {
    table.intern(Constraint::Root { var, rel, bound }).expect("extended constraints are never constant")
}

/// Literals whose conjunction is the cell.
pub fn cell_literals(cell: &CellDescription, table: &mut AtomTable) -> Vec<Lit> {
    let mut out = Vec::new();
    for (k, iv) in cell.intervals.iter().enumerate() {
        match iv {
            SymbolicInterval::Section(r) => out.push(root_lit(table, k, Relation::Eq, Bound::Root(r.clone()))),
            SymbolicInterval::Sector { lower, upper } => {
                if let Some(b) = lower {
                    out.push(root_lit(table, k, Relation::Gt, b.clone()));
                }
                if let Some(b) = upper {
                    out.push(root_lit(table, k, Relation::Lt, b.clone()));
                }
            }
        }
    }
    out
}

/// Sections pinning `x_1 .. x_k` to the given values.
pub fn point_literals(point: &[RealValue], table: &mut AtomTable) -> Vec<Lit> {
    point
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let p = Polynomial::from_upoly(&v.defining_poly(), k).normalize();
            match v {
                RealValue::Rational(_) => table.intern(Constraint::poly(p, Relation::Eq)).expect("level k+1 polynomial"),
                RealValue::Algebraic(_) => {
                    root_lit(table, k, Relation::Eq, Bound::Root(IndexedRoot::new(p, v.root_index())))
                }
            }
        })
        .collect()
}

/// Clause excluding a cell around `prefix` on which the core literals stay
/// jointly unsatisfiable. `Err` is the construction FAIL; the caller then
/// falls back to [`point_exclusion`].
pub fn explain(
    core: &[Lit],
    table: &mut AtomTable,
    prefix: &[RealValue],
    cfg: &ApproxConfig,
    state: &mut ApxState,
) -> Result<Explanation, SccFailure> {
    let mut top = BTreeSet::new();
    for l in core {
        let c = table.constraint(l.atom).expect("core literals are theory literals");
        debug_assert_eq!(c.level(), prefix.len() + 1);
        top.extend(c.polys().into_iter().map(|p| p.normalize()));
    }
    let mut clause: Clause = core.iter().map(|l| l.negate()).collect();
    let mut stats = CellStats::default();
    if prefix.is_empty() {
        return Ok(Explanation { clause, cell: Some(CellDescription::empty()), stats });
    }
    let below = full_fiber(&top, prefix, &mut stats)?;
    let cell = apx_scc(&below, prefix, cfg, state)?;
    stats.resultants += cell.stats.resultants;
    stats.discriminants += cell.stats.discriminants;
    stats.max_resultant_degree = stats.max_resultant_degree.max(cell.stats.max_resultant_degree);
    stats.mult_proxy += cell.stats.mult_proxy;
    stats.aux_polys += cell.stats.aux_polys;
    clause.extend(cell_literals(&cell, table).into_iter().map(Lit::negate));
    Ok(Explanation { clause, cell: Some(cell), stats })
}

/// `!C or x_1 != s_1 or .. or x_{j-1} != s_{j-1}`.
pub fn point_exclusion(core: &[Lit], table: &mut AtomTable, prefix: &[RealValue]) -> Explanation {
    let mut clause: Clause = core.iter().map(|l| l.negate()).collect();
    clause.extend(point_literals(prefix, table).into_iter().map(Lit::negate));
    Explanation { clause, cell: None, stats: CellStats::default() }
}
