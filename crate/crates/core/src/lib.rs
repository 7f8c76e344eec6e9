//! Exact satisfiability checking for quantifier-free non-linear real
//! arithmetic.
//!
//! The engine is a small MCSAT-style search ([`nlsat`]) whose theory
//! conflicts are explained by levelwise single cell construction ([`scc`]).
//! The [`apx`] layer can insert auxiliary linear polynomials during the
//! construction so that cheap resultants replace expensive ones.

pub mod apx;
pub mod nlsat;
pub mod numeric;
pub mod poly;
pub mod roots;
pub mod scc;
pub mod smtlib;

pub use apx::{ApproxConfig, ApxState, Variant};
pub use nlsat::{solve, Constraint, Formula, Limits, Relation, SolveResult, SolverConfig, SolverStats};
pub use numeric::{ExtendedReal, Rational, RealAlgebraic, RealValue, Sign};
pub use poly::{Polynomial, VariableOrder};
pub use roots::{IndexedRoot, RootError, RootIsolation};
pub use scc::{Bound, CellDescription, CellStats, SymbolicInterval};
