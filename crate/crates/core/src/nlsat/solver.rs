//! Model-constructing search: Boolean decisions and propagation interleaved
//! with assignments to `x_1, x_2, ..` in order, with explanations learned
//! whenever a variable has no consistent value.

use std::collections::HashMap;
use std::fmt;
use std::time::{Duration, Instant};

use super::cnf::{to_cnf, AtomTable, Clause, Lit};
use super::constraint::Formula;
use super::explain::{explain, point_exclusion, Explanation};
use super::feasible::{constraint_set, FeasibleSet};
use crate::apx::{ApproxConfig, ApxState};
use crate::numeric::RealValue;
use crate::roots::RootError;
use crate::scc::SccFailure;

#[derive(Debug, Clone)]
pub struct Limits {
    pub max_steps: Option<u64>,
    pub timeout: Option<Duration>,
    /// Point-exclusion fallbacks allowed before giving up.
    pub fallback_budget: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_steps: None, timeout: None, fallback_budget: 100 }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SolverConfig {
    pub approx: ApproxConfig,
    pub limits: Limits,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnknownReason {
    StepBudget,
    Timeout,
    FallbackBudget,
    Precision(RootError),
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnknownReason::StepBudget => f.write_str("step budget exhausted"),
            UnknownReason::Timeout => f.write_str("timeout"),
            UnknownReason::FallbackBudget => f.write_str("fallback budget exhausted"),
            UnknownReason::Precision(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum SolveResult {
    /// Values of `x_1 .. x_n`.
    Sat(Vec<RealValue>),
    Unsat,
    Unknown(UnknownReason),
}

impl SolveResult {
    pub fn verdict(&self) -> &'static str {
        match self {
            SolveResult::Sat(_) => "sat",
            SolveResult::Unsat => "unsat",
            SolveResult::Unknown(_) => "unknown",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub scc_calls: u64,
    pub apx_cells: u64,
    pub fallbacks: u64,
    pub max_resultant_degree: u32,
    pub mult_proxy: u64,
    pub learned_clauses: u64,
    pub conflicts: u64,
    pub decisions: u64,
    pub steps: u64,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub result: SolveResult,
    pub stats: SolverStats,
}

/// A learned explanation together with the trail value of its core, kept
/// for inspection by tests.
#[derive(Debug, Clone)]
pub struct LearnedExplanation {
    pub core: Vec<Lit>,
    pub explanation: Explanation,
}

enum Stop {
    Unknown(UnknownReason),
}

impl From<RootError> for Stop {
    fn from(e: RootError) -> Self {
        Stop::Unknown(UnknownReason::Precision(e))
    }
}

#[derive(Debug, Clone, Copy)]
struct Assigned {
    value: bool,
    dlevel: usize,
    reason: Option<usize>,
    pos: usize,
}

#[derive(Debug, Clone, Copy)]
enum Entry {
    Lit(usize),
    Value,
}

pub struct Solver {
    formula: Formula,
    pub table: AtomTable,
    clauses: Vec<Clause>,
    atom_level: Vec<usize>,
    n: usize,
    assign: Vec<Option<Assigned>>,
    trail: Vec<Entry>,
    level_starts: Vec<usize>,
    values: Vec<RealValue>,
    var_dlevel: Vec<usize>,
    semantic: HashMap<usize, bool>,
    /// Feasible set of each theory atom over the current prefix.
    regions: HashMap<usize, FeasibleSet>,
    cfg: SolverConfig,
    apx: ApxState,
    pub stats: SolverStats,
    /// Every explanation learned so far, when recording is enabled.
    pub record: Option<Vec<LearnedExplanation>>,
    started: Instant,
}

/// Decides `formula` over `x_1 .. x_n` where `n` is at least the formula's
/// level.
pub fn solve(formula: &Formula, n: usize, cfg: &SolverConfig) -> Outcome {
    let mut s = Solver::new(formula, n, cfg.clone());
    let result = s.run();
    Outcome { result, stats: s.stats.clone() }
}

impl Solver {
    pub fn new(formula: &Formula, n: usize, cfg: SolverConfig) -> Self {
        let mut table = AtomTable::new();
        let cnf = to_cnf(formula, &mut table);
        let mut s = Solver {
            formula: formula.clone(),
            table,
            clauses: Vec::new(),
            atom_level: Vec::new(),
            n: n.max(formula.level()),
            assign: Vec::new(),
            trail: Vec::new(),
            level_starts: Vec::new(),
            values: Vec::new(),
            var_dlevel: Vec::new(),
            semantic: HashMap::new(),
            regions: HashMap::new(),
            cfg,
            apx: ApxState::new(),
            stats: SolverStats::default(),
            record: None,
            started: Instant::now(),
        };
        for c in cnf {
            s.add_clause(c);
        }
        s
    }

    pub fn apx_state(&self) -> &ApxState {
        &self.apx
    }

    fn sync_atoms(&mut self) {
        for a in self.atom_level.len()..self.table.len() {
            self.atom_level.push(self.table.constraint(a).map_or(0, |c| c.level()));
            self.assign.push(None);
        }
    }

    fn add_clause(&mut self, mut c: Clause) {
        self.sync_atoms();
        c.sort();
        c.dedup();
        self.clauses.push(c);
    }

    fn dlevel(&self) -> usize {
        self.level_starts.len()
    }

    fn value(&mut self, l: Lit) -> Result<Option<bool>, RootError> {
        if let Some(a) = self.assign[l.atom] {
            return Ok(Some(a.value == l.positive));
        }
        let lvl = self.atom_level[l.atom];
        if lvl == 0 || lvl > self.values.len() {
            return Ok(None);
        }
        let v = match self.semantic.get(&l.atom) {
            Some(&v) => v,
            None => {
                let c = self.table.constraint(l.atom).expect("theory atom");
                let v = c.eval(&self.values)?;
                self.semantic.insert(l.atom, v);
                v
            }
        };
        Ok(Some(v == l.positive))
    }

    /// Decision level at which a false literal became false.
    fn lit_dlevel(&self, l: Lit) -> usize {
        match self.assign[l.atom] {
            Some(a) => a.dlevel,
            None => self.var_dlevel[self.atom_level[l.atom] - 1],
        }
    }

    fn push_lit(&mut self, l: Lit, reason: Option<usize>) {
        self.assign[l.atom] =
            Some(Assigned { value: l.positive, dlevel: self.dlevel(), reason, pos: self.trail.len() });
        self.trail.push(Entry::Lit(l.atom));
    }

    fn push_value(&mut self, v: RealValue) {
        self.level_starts.push(self.trail.len());
        self.var_dlevel.push(self.dlevel());
        self.values.push(v);
        self.trail.push(Entry::Value);
    }

    fn backtrack(&mut self, level: usize) {
        if level >= self.dlevel() {
            return;
        }
        let keep = self.level_starts[level];
        while self.trail.len() > keep {
            match self.trail.pop().unwrap() {
                Entry::Lit(a) => self.assign[a] = None,
                Entry::Value => {
                    self.values.pop();
                    self.var_dlevel.pop();
                }
            }
        }
        self.level_starts.truncate(level);
        // A cached truth value depends only on the values up to its level.
        let assigned = self.values.len();
        let levels = &self.atom_level;
        self.semantic.retain(|a, _| levels[*a] <= assigned);
        self.regions.retain(|a, _| levels[*a] <= assigned + 1);
    }

    /// Unit propagation to fixpoint; returns a falsified clause.
    fn propagate(&mut self) -> Result<Option<usize>, RootError> {
        loop {
            let mut changed = false;
            for ci in 0..self.clauses.len() {
                let mut unassigned = None;
                let mut open = 0;
                let mut satisfied = false;
                for k in 0..self.clauses[ci].len() {
                    let l = self.clauses[ci][k];
                    match self.value(l)? {
                        Some(true) => {
                            satisfied = true;
                            break;
                        }
                        Some(false) => {}
                        None => {
                            open += 1;
                            unassigned = Some(l);
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                match open {
                    0 => return Ok(Some(ci)),
                    1 => {
                        self.push_lit(unassigned.unwrap(), Some(ci));
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return Ok(None);
            }
        }
    }

    fn pick_decision(&mut self) -> Result<Option<Lit>, RootError> {
        let stage = self.values.len() + 1;
        for ci in 0..self.clauses.len() {
            let mut first = None;
            let mut satisfied = false;
            let mut beyond = false;
            for k in 0..self.clauses[ci].len() {
                let l = self.clauses[ci][k];
                match self.value(l)? {
                    Some(true) => {
                        satisfied = true;
                        break;
                    }
                    None if self.atom_level[l.atom] > stage => beyond = true,
                    None if first.is_none() => first = Some(l),
                    _ => {}
                }
            }
            // A clause waits for its highest undetermined variable, not for
            // literals that are already false.
            if !satisfied && !beyond && first.is_some() {
                return Ok(first);
            }
        }
        Ok(None)
    }

    fn check_limits(&mut self) -> Result<(), Stop> {
        self.stats.steps += 1;
        if self.cfg.limits.max_steps.is_some_and(|m| self.stats.steps > m) {
            return Err(Stop::Unknown(UnknownReason::StepBudget));
        }
        if self.cfg.limits.timeout.is_some_and(|t| self.started.elapsed() > t) {
            return Err(Stop::Unknown(UnknownReason::Timeout));
        }
        Ok(())
    }

    pub fn run(&mut self) -> SolveResult {
        self.started = Instant::now();
        let result = match self.search() {
            Ok(r) => r,
            Err(Stop::Unknown(reason)) => SolveResult::Unknown(reason),
        };
        self.stats.apx_cells = self.apx.n_cells() as u64;
        result
    }

    fn search(&mut self) -> Result<SolveResult, Stop> {
        if self.clauses.iter().any(|c| c.is_empty()) {
            return Ok(SolveResult::Unsat);
        }
        loop {
            self.check_limits()?;
            if let Some(ci) = self.propagate()? {
                self.stats.conflicts += 1;
                let c = self.clauses[ci].clone();
                if !self.resolve(c)? {
                    return Ok(SolveResult::Unsat);
                }
                continue;
            }
            if let Some(l) = self.pick_decision()? {
                self.stats.decisions += 1;
                self.level_starts.push(self.trail.len());
                self.push_lit(l, None);
                continue;
            }
            let stage = self.values.len() + 1;
            if stage > self.n {
                return self.finish();
            }
            let asserted: Vec<Lit> = (0..self.assign.len())
                .filter(|&a| self.atom_level[a] == stage)
                .filter_map(|a| self.assign[a].map(|s| Lit { atom: a, positive: s.value }))
                .collect();
            let mut sets = Vec::with_capacity(asserted.len());
            for l in &asserted {
                let s = match self.regions.get(&l.atom) {
                    Some(s) => s.clone(),
                    None => {
                        let s = constraint_set(self.table.constraint(l.atom).unwrap(), &self.values)?;
                        self.regions.insert(l.atom, s.clone());
                        s
                    }
                };
                sets.push(if l.positive { s } else { s.complement() });
            }
            let feasible = sets.iter().fold(FeasibleSet::full(), |acc, s| acc.intersect(s));
            if let Some(v) = feasible.decide_value() {
                self.push_value(v);
                continue;
            }
            self.stats.conflicts += 1;
            let core = minimal_core(&asserted, &sets);
            let clause = self.learn_explanation(core)?;
            if !self.resolve(clause)? {
                return Ok(SolveResult::Unsat);
            }
        }
    }

    fn finish(&mut self) -> Result<SolveResult, Stop> {
        assert!(self.formula.eval(&self.values)?, "model fails exact re-evaluation");
        Ok(SolveResult::Sat(self.values.clone()))
    }

    fn learn_explanation(&mut self, core: Vec<Lit>) -> Result<Clause, Stop> {
        let prefix = self.values.clone();
        self.stats.scc_calls += 1;
        let e = match explain(&core, &mut self.table, &prefix, &self.cfg.approx, &mut self.apx) {
            Ok(e) => e,
            Err(SccFailure::Root(err)) => return Err(err.into()),
            Err(_) => {
                self.stats.fallbacks += 1;
                if self.stats.fallbacks > self.cfg.limits.fallback_budget as u64 {
                    return Err(Stop::Unknown(UnknownReason::FallbackBudget));
                }
                point_exclusion(&core, &mut self.table, &prefix)
            }
        };
        if let Some(max) = self.cfg.approx.max_apx_cells {
            assert!(self.apx.n_cells() <= max, "approximated cells exceed the budget");
        }
        self.stats.max_resultant_degree = self.stats.max_resultant_degree.max(e.stats.max_resultant_degree);
        self.stats.mult_proxy += e.stats.mult_proxy;
        let clause = e.clause.clone();
        if let Some(rec) = self.record.as_mut() {
            rec.push(LearnedExplanation { core, explanation: e });
        }
        self.add_clause(clause.clone());
        self.stats.learned_clauses += 1;
        for &l in &clause {
            assert_eq!(self.value(l)?, Some(false), "learned clause must be false under the trail");
        }
        Ok(clause)
    }

    /// Conflict analysis and backjumping for a clause false under the
    /// trail. `false` means the conflict is at the root level.
    fn resolve(&mut self, conflict: Clause) -> Result<bool, Stop> {
        let mut c = conflict;
        let original = c.clone();
        loop {
            c.sort();
            c.dedup();
            if c.is_empty() {
                return Ok(false);
            }
            let levels: Vec<usize> = c.iter().map(|&l| self.lit_dlevel(l)).collect();
            let top = *levels.iter().max().unwrap();
            if top == 0 {
                return Ok(false);
            }
            let at_top: Vec<usize> = (0..c.len()).filter(|&i| levels[i] == top).collect();
            if at_top.len() == 1 {
                let back = levels.iter().copied().filter(|&d| d < top).max().unwrap_or(0);
                self.backtrack(back);
                self.learn(c, &original);
                return Ok(true);
            }
            let pivot = at_top
                .iter()
                .filter_map(|&i| self.assign[c[i].atom].filter(|a| a.reason.is_some()).map(|a| (a.pos, i)))
                .max();
            match pivot {
                Some((_, i)) => {
                    let atom = c[i].atom;
                    let reason = self.assign[atom].unwrap().reason.unwrap();
                    c.retain(|l| l.atom != atom);
                    c.extend(self.clauses[reason].iter().filter(|l| l.atom != atom));
                }
                None => {
                    self.backtrack(top - 1);
                    self.learn(c, &original);
                    return Ok(true);
                }
            }
        }
    }

    fn learn(&mut self, mut c: Clause, original: &Clause) {
        c.sort();
        let mut o = original.clone();
        o.sort();
        o.dedup();
        if c != o {
            self.add_clause(c);
            self.stats.learned_clauses += 1;
        }
    }
}

/// Greedily drops literals whose removal keeps the intersection empty.
fn minimal_core(lits: &[Lit], sets: &[FeasibleSet]) -> Vec<Lit> {
    let mut keep = vec![true; lits.len()];
    for i in 0..lits.len() {
        keep[i] = false;
        let rest = sets
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .fold(FeasibleSet::full(), |acc, (s, _)| acc.intersect(s));
        if !rest.is_empty() {
            keep[i] = true;
        }
    }
    lits.iter().zip(&keep).filter(|(_, &k)| k).map(|(l, _)| *l).collect()
}
