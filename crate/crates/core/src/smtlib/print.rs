use num_traits::{One, Signed, Zero};

use super::{parse_number, parse_sexprs, ErrorKind, Pos, SExpr, Script, SmtError};
use crate::nlsat::{Constraint, Formula, Relation, SolveResult};
use crate::numeric::{RealValue, Rational};
use crate::poly::{Polynomial, VariableOrder};
use crate::roots::{real_roots, RootIsolation};

/// Plain SMT-LIB symbols print as-is; anything else is quoted with `|`.
fn symbol(name: &str) -> String {
    let simple = !name.is_empty()
        && !name.starts_with(|c: char| c.is_ascii_digit())
        && name.chars().all(|c| c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c));
    if simple {
        name.to_string()
    } else {
        format!("|{name}|")
    }
}

/// `3`, `(- 3)`, `(/ 1 2)`, `(- (/ 1 2))`.
pub fn print_rational(v: &Rational) -> String {
    let a = v.abs();
    let body = if a.is_integer() { a.numer().to_string() } else { format!("(/ {} {})", a.numer(), a.denom()) };
    if v.is_negative() {
        format!("(- {body})")
    } else {
        body
    }
}

pub fn print_polynomial(p: &Polynomial, vars: &VariableOrder) -> String {
    let terms: Vec<String> = p
        .terms()
        .rev()
        .map(|(m, c)| {
            let mut factors = Vec::new();
            if !c.is_one() || m.level() == 0 {
                factors.push(print_rational(c));
            }
            for (v, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    factors.push(symbol(&vars.name(v)));
                }
            }
            if factors.len() == 1 {
                factors.pop().unwrap()
            } else {
                format!("(* {})", factors.join(" "))
            }
        })
        .collect();
    match terms.len() {
        0 => "0".to_string(),
        1 => terms[0].clone(),
        _ => format!("(+ {})", terms.join(" ")),
    }
}

fn relation_head(rel: Relation) -> &'static str {
    match rel {
        Relation::Ne => "distinct",
        r => r.symbol(),
    }
}

pub fn print_formula(f: &Formula, vars: &VariableOrder) -> String {
    let join = |head: &str, fs: &[Formula]| {
        let parts: Vec<String> = fs.iter().map(|g| print_formula(g, vars)).collect();
        format!("({head} {})", parts.join(" "))
    };
    match f {
        Formula::True => "true".into(),
        Formula::False => "false".into(),
        Formula::Not(g) => format!("(not {})", print_formula(g, vars)),
        Formula::And(fs) if fs.is_empty() => "true".into(),
        Formula::Or(fs) if fs.is_empty() => "false".into(),
        Formula::And(fs) => join("and", fs),
        Formula::Or(fs) => join("or", fs),
        Formula::Atom(Constraint::Poly { p, rel }) => {
            format!("({} {} 0)", relation_head(*rel), print_polynomial(p, vars))
        }
        Formula::Atom(Constraint::Root { var, rel, bound }) => {
            format!("({} {} {})", relation_head(*rel), symbol(&vars.name(*var)), bound.display_with(vars))
        }
    }
}

/// Declarations followed by one assertion per formula of the script.
pub fn print_script(s: &Script) -> String {
    let mut out = String::from("(set-logic QF_NRA)\n");
    for name in s.vars.names() {
        out += &format!("(declare-fun {} () Real)\n", symbol(name));
    }
    for f in &s.assertions {
        out += &format!("(assert {})\n", print_formula(f, &s.vars));
    }
    out += "(check-sat)\n";
    out
}

/// Rationals as terms; irrational values as `(root <poly in x> <k> (<lo> <hi>))`.
pub fn print_value(v: &RealValue) -> String {
    match v {
        RealValue::Rational(r) => print_rational(r),
        RealValue::Algebraic(_) => {
            let (lo, hi) = v.bounds();
            let p = Polynomial::from_upoly(&v.defining_poly(), 0).normalize();
            let vars = VariableOrder::new(vec!["x".into()]);
            format!(
                "(root {} {} ({} {}))",
                print_polynomial(&p, &vars),
                v.root_index(),
                print_rational(&lo),
                print_rational(&hi)
            )
        }
    }
}

fn value_err<T>(pos: Pos, m: &str) -> Result<T, SmtError> {
    Err(SmtError { pos, kind: ErrorKind::Syntax(m.to_string()) })
}

fn rational_value(e: &SExpr) -> Result<Rational, SmtError> {
    let vars = VariableOrder::default();
    let p = super::arith_term(e, &vars)?;
    match p.constant_value() {
        Some(v) => Ok(v),
        None => value_err(e.pos(), "expected a rational constant"),
    }
}

/// Inverse of [`print_value`].
pub fn parse_value(text: &str) -> Result<RealValue, SmtError> {
    let es = parse_sexprs(text)?;
    let [e] = es.as_slice() else {
        return value_err(Pos { line: 1, col: 1 }, "expected one value");
    };
    if let SExpr::List(items, pos) = e {
        if items.first().and_then(SExpr::symbol) == Some("root") {
            let [_, poly, idx, SExpr::List(iv, _)] = items.as_slice() else {
                return value_err(*pos, "malformed root value");
            };
            let vars = VariableOrder::new(vec!["x".into()]);
            let p = super::arith_term(poly, &vars)?;
            let k = idx.symbol().and_then(parse_number).filter(|k| k.is_integer() && !k.is_zero());
            let (Some(k), [lo, hi]) = (k, iv.as_slice()) else {
                return value_err(*pos, "malformed root value");
            };
            let (lo, hi) = (rational_value(lo)?, rational_value(hi)?);
            let Ok(RootIsolation::Roots(roots)) = real_roots(&p, &[]) else {
                return value_err(poly.pos(), "expected a nonzero univariate polynomial");
            };
            let k: usize = k.to_integer().try_into().unwrap_or(usize::MAX);
            return match roots.get(k - 1) {
                Some(r) if r.compare_rational(&lo).is_gt() && r.compare_rational(&hi).is_lt() => Ok(r.clone()),
                Some(r) if r.is_rational() && (r.compare_rational(&lo).is_ge() && r.compare_rational(&hi).is_le()) => {
                    Ok(r.clone())
                }
                _ => value_err(*pos, "root index or interval does not match the polynomial"),
            };
        }
    }
    Ok(RealValue::Rational(rational_value(e)?))
}

/// `sat` / `unsat` / `unknown` on one line, then the model when requested.
pub fn print_result(result: &SolveResult, vars: &VariableOrder, with_model: bool) -> String {
    let mut out = format!("{}\n", result.verdict());
    if let (SolveResult::Sat(model), true) = (result, with_model) {
        out += "(\n";
        for (i, v) in model.iter().enumerate() {
            out += &format!("  (define-fun {} () Real {})\n", symbol(&vars.name(i)), print_value(v));
        }
        out += ")\n";
    }
    out
}
