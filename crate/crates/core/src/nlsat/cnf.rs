//! Atoms, literals and the clausal form of a formula.

use std::collections::HashMap;
use std::fmt;

use num_traits::Signed;

use super::constraint::{Constraint, Formula, Relation};
use crate::numeric::Sign;
use crate::poly::VariableOrder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub atom: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(atom: usize) -> Self {
        Lit { atom, positive: true }
    }

    pub fn neg(atom: usize) -> Self {
        Lit { atom, positive: false }
    }

    pub fn negate(self) -> Self {
        Lit { atom: self.atom, positive: !self.positive }
    }
}

pub type Clause = Vec<Lit>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    /// Fresh Boolean variable introduced by the clausal encoding.
    Selector,
    Theory(Constraint),
}

/// Interned atoms. Polynomial constraints are stored with a primitive
/// integer polynomial and one of `<`, `<=`, `=`; the other relations become
/// negative literals. Extended constraints keep their relation since an
/// undefined bound makes both `x < b` and `x >= b` false.
#[derive(Debug, Clone, Default)]
pub struct AtomTable {
    atoms: Vec<Atom>,
    index: HashMap<Constraint, usize>,
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn get(&self, atom: usize) -> &Atom {
        &self.atoms[atom]
    }

    pub fn constraint(&self, atom: usize) -> Option<&Constraint> {
        match &self.atoms[atom] {
            Atom::Theory(c) => Some(c),
            Atom::Selector => None,
        }
    }

    pub fn fresh_selector(&mut self) -> usize {
        self.atoms.push(Atom::Selector);
        self.atoms.len() - 1
    }

    /// Literal equivalent to `c`, or the constant truth value of a
    /// constraint over a constant polynomial.
    pub fn intern(&mut self, c: Constraint) -> Result<Lit, bool> {
        let (key, positive) = match c {
            Constraint::Poly { p, rel } => {
                if let Some(v) = p.constant_value() {
                    return Err(rel.holds(Sign::of(&v)));
                }
                let flipped = p.leading_term().is_some_and(|(_, c)| c.is_negative());
                let rel = if flipped { rel.flip() } else { rel };
                let (rel, positive) = match rel {
                    Relation::Gt | Relation::Ge | Relation::Ne => (rel.negate(), false),
                    r => (r, true),
                };
                (Constraint::Poly { p: p.normalize(), rel }, positive)
            }
            root => (root, true),
        };
        let atom = match self.index.get(&key) {
            Some(&a) => a,
            None => {
                self.atoms.push(Atom::Theory(key.clone()));
                self.index.insert(key, self.atoms.len() - 1);
                self.atoms.len() - 1
            }
        };
        Ok(Lit { atom, positive })
    }

    pub fn lit_display(&self, l: Lit, vars: &VariableOrder) -> String {
        let body = match &self.atoms[l.atom] {
            Atom::Selector => format!("b{}", l.atom),
            Atom::Theory(c) => c.display_with(vars),
        };
        if l.positive {
            body
        } else {
            format!("!({body})")
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.positive { "" } else { "!" }, self.atom)
    }
}

enum Nnf {
    Const(bool),
    Lit(Lit),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

fn nnf(f: &Formula, negated: bool, table: &mut AtomTable) -> Nnf {
    match f {
        Formula::True => Nnf::Const(!negated),
        Formula::False => Nnf::Const(negated),
        Formula::Not(g) => nnf(g, !negated, table),
        Formula::Atom(c) => {
            let c = match (c, negated) {
                (Constraint::Poly { p, rel }, true) => Constraint::Poly { p: p.clone(), rel: rel.negate() },
                _ => c.clone(),
            };
            let root_negated = negated && matches!(c, Constraint::Root { .. });
            match table.intern(c) {
                Ok(l) if root_negated => Nnf::Lit(l.negate()),
                Ok(l) => Nnf::Lit(l),
                Err(b) => Nnf::Const(b),
            }
        }
        Formula::And(gs) | Formula::Or(gs) => {
            let kids = gs.iter().map(|g| nnf(g, negated, table)).collect();
            if matches!(f, Formula::And(_)) != negated {
                Nnf::And(kids)
            } else {
                Nnf::Or(kids)
            }
        }
    }
}

/// Equisatisfiable clause set. A selector is introduced only for a
/// conjunction nested inside a disjunction, and only its positive
/// implication is encoded.
pub fn to_cnf(f: &Formula, table: &mut AtomTable) -> Vec<Clause> {
    let g = nnf(f, false, table);
    let mut out = Vec::new();
    clausify(&g, table, &mut out);
    out
}

fn clausify(f: &Nnf, table: &mut AtomTable, out: &mut Vec<Clause>) {
    match f {
        Nnf::Const(true) => {}
        Nnf::Const(false) => out.push(Vec::new()),
        Nnf::Lit(l) => out.push(vec![*l]),
        Nnf::And(gs) => gs.iter().for_each(|g| clausify(g, table, out)),
        Nnf::Or(_) => {
            let mut clause = Vec::new();
            if disjuncts(f, table, out, &mut clause) {
                clause.sort();
                clause.dedup();
                out.push(clause);
            }
        }
    }
}

/// Collects the literals of a disjunction; `false` when it is trivially true.
fn disjuncts(f: &Nnf, table: &mut AtomTable, out: &mut Vec<Clause>, clause: &mut Clause) -> bool {
    match f {
        Nnf::Const(b) => !b,
        Nnf::Lit(l) => {
            clause.push(*l);
            true
        }
        Nnf::Or(gs) => gs.iter().all(|g| disjuncts(g, table, out, clause)),
        Nnf::And(_) => {
            let mut inner = Vec::new();
            clausify(f, table, &mut inner);
            if inner.is_empty() {
                return false;
            }
            let sel = table.fresh_selector();
            for mut c in inner {
                c.insert(0, Lit::neg(sel));
                out.push(c);
            }
            clause.push(Lit::pos(sel));
            true
        }
    }
}
