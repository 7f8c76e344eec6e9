mod cnf;
mod constraint;
mod explain;
mod feasible;
mod solver;

pub use cnf::{to_cnf, Atom, AtomTable, Clause, Lit};
pub use constraint::{Constraint, Formula, Relation};
pub use explain::{cell_literals, explain, point_exclusion, point_literals, Explanation};
pub use feasible::{constraint_set, FeasibleSet, Interval};
pub use solver::{solve, Limits, LearnedExplanation, Outcome, SolveResult, Solver, SolverConfig, SolverStats, UnknownReason};
