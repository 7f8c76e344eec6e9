use std::fmt;

use crate::numeric::{RealValue, Sign};
use crate::poly::{Polynomial, VariableOrder};
use crate::roots::{sign_at_point, RootError};
use crate::scc::Bound;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl Relation {
    pub fn negate(self) -> Relation {
        match self {
            Relation::Lt => Relation::Ge,
            Relation::Le => Relation::Gt,
            Relation::Eq => Relation::Ne,
            Relation::Ne => Relation::Eq,
            Relation::Ge => Relation::Lt,
            Relation::Gt => Relation::Le,
        }
    }

    /// The relation with both sides swapped (`a < b` iff `b > a`).
    pub fn flip(self) -> Relation {
        match self {
            Relation::Lt => Relation::Gt,
            Relation::Le => Relation::Ge,
            Relation::Gt => Relation::Lt,
            Relation::Ge => Relation::Le,
            r => r,
        }
    }

    pub fn holds(self, s: Sign) -> bool {
        match self {
            Relation::Lt => s == Sign::Neg,
            Relation::Le => s != Sign::Pos,
            Relation::Eq => s == Sign::Zero,
            Relation::Ne => s != Sign::Zero,
            Relation::Ge => s != Sign::Neg,
            Relation::Gt => s == Sign::Pos,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ne => "!=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// `p ~ 0`, or the extended form `x_var ~ bound`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    Poly { p: Polynomial, rel: Relation },
    Root { var: usize, rel: Relation, bound: Bound },
}

impl Constraint {
    pub fn poly(p: Polynomial, rel: Relation) -> Self {
        Constraint::Poly { p, rel }
    }

    /// Number of leading variables needed to evaluate the constraint.
    pub fn level(&self) -> usize {
        match self {
            Constraint::Poly { p, .. } => p.level(),
            Constraint::Root { var, .. } => var + 1,
        }
    }

    pub fn polys(&self) -> Vec<&Polynomial> {
        match self {
            Constraint::Poly { p, .. } => vec![p],
            Constraint::Root { bound, .. } => bound.polys(),
        }
    }

    /// Truth value at a point covering the constraint's variables. An
    /// extended constraint whose bound is undefined is false.
    pub fn eval(&self, point: &[RealValue]) -> Result<bool, RootError> {
        match self {
            Constraint::Poly { p, rel } => Ok(rel.holds(sign_at_point(p, &point[..p.level().min(point.len())])?)),
            Constraint::Root { var, rel, bound } => {
                let Some(v) = bound.eval(&point[..*var])? else {
                    return Ok(false);
                };
                let s = match point[*var].compare(&v) {
                    std::cmp::Ordering::Less => Sign::Neg,
                    std::cmp::Ordering::Equal => Sign::Zero,
                    std::cmp::Ordering::Greater => Sign::Pos,
                };
                Ok(rel.holds(s))
            }
        }
    }

    pub fn display_with(&self, vars: &VariableOrder) -> String {
        match self {
            Constraint::Poly { p, rel } => format!("{} {} 0", p.display_with(vars), rel),
            Constraint::Root { var, rel, bound } => {
                format!("{} {} {}", vars.name(*var), rel, bound.display_with(vars))
            }
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&VariableOrder::default()))
    }
}

/// Quantifier-free formula over constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Atom(Constraint),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn atom(p: Polynomial, rel: Relation) -> Self {
        Formula::Atom(Constraint::poly(p, rel))
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn eval(&self, point: &[RealValue]) -> Result<bool, RootError> {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(c) => c.eval(point)?,
            Formula::Not(f) => !f.eval(point)?,
            Formula::And(fs) => {
                for f in fs {
                    if !f.eval(point)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(fs) => {
                for f in fs {
                    if f.eval(point)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    /// Highest variable level occurring in the formula.
    pub fn level(&self) -> usize {
        match self {
            Formula::True | Formula::False => 0,
            Formula::Atom(c) => c.level(),
            Formula::Not(f) => f.level(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(|f| f.level()).max().unwrap_or(0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::qi;
    use crate::poly::parse_poly;
    use crate::roots::IndexedRoot;

    fn p(s: &str) -> Polynomial {
        parse_poly(s, &VariableOrder::numbered(2)).unwrap()
    }

    #[test]
    fn relation_algebra() {
        for r in [Relation::Lt, Relation::Le, Relation::Eq, Relation::Ne, Relation::Ge, Relation::Gt] {
            assert_eq!(r.negate().negate(), r);
            for s in [Sign::Neg, Sign::Zero, Sign::Pos] {
                assert_eq!(r.negate().holds(s), !r.holds(s));
                assert_eq!(r.flip().holds(s.negate()), r.holds(s));
            }
        }
    }

    #[test]
    fn undefined_root_is_false() {
        let c = Constraint::Root {
            var: 1,
            rel: Relation::Gt,
            bound: Bound::Root(IndexedRoot::new(p("x2^2 - x1"), 1)),
        };
        let pt = |a: i64, b: i64| [RealValue::Rational(qi(a)), RealValue::Rational(qi(b))];
        assert!(!c.eval(&pt(-1, 5)).unwrap());
        assert!(c.eval(&pt(4, 0)).unwrap());
        assert!(!c.eval(&pt(4, -3)).unwrap());
    }
}
