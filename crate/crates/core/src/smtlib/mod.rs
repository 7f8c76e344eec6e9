//! SMT-LIB2 front end for the QF_NRA fragment without `let` and `ite`.

mod print;
mod sexpr;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::nlsat::{Formula, Relation};
use crate::numeric::Rational;
use crate::poly::{Polynomial, VariableOrder};

pub use print::{parse_value, print_formula, print_polynomial, print_rational, print_result, print_script, print_value};
pub use sexpr::{parse_sexprs, Pos, SExpr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax(String),
    /// A construct outside the supported fragment, named as in the input.
    Unsupported(String),
    Undeclared(String),
    Redeclared(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct SmtError {
    pub pos: Pos,
    pub kind: ErrorKind,
}

impl fmt::Display for SmtError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ErrorKind::Syntax(m) => write!(f, "{}: syntax error: {m}", self.pos),
            ErrorKind::Unsupported(c) => write!(f, "{}: unsupported feature: {c}", self.pos),
            ErrorKind::Undeclared(n) => write!(f, "{}: undeclared symbol '{n}'", self.pos),
            ErrorKind::Redeclared(n) => write!(f, "{}: symbol '{n}' declared twice", self.pos),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    SetLogic(String),
    SetInfo,
    SetOption,
    Declare(String),
    /// Index into [`Script::assertions`].
    Assert(usize),
    CheckSat,
    GetModel,
    Exit,
}

#[derive(Debug, Clone, Default)]
pub struct Script {
    pub logic: Option<String>,
    /// Declaration order is the variable order.
    pub vars: VariableOrder,
    pub assertions: Vec<Formula>,
    pub commands: Vec<Command>,
}

impl Script {
    /// Conjunction of all assertions.
    pub fn formula(&self) -> Formula {
        match self.assertions.len() {
            0 => Formula::True,
            1 => self.assertions[0].clone(),
            _ => Formula::And(self.assertions.clone()),
        }
    }
}

fn err<T>(pos: Pos, kind: ErrorKind) -> Result<T, SmtError> {
    Err(SmtError { pos, kind })
}

fn syntax<T>(pos: Pos, msg: &str) -> Result<T, SmtError> {
    err(pos, ErrorKind::Syntax(msg.to_string()))
}

fn unsupported<T>(pos: Pos, what: &str) -> Result<T, SmtError> {
    err(pos, ErrorKind::Unsupported(what.to_string()))
}

pub fn parse(text: &str) -> Result<Script, SmtError> {
    let mut script = Script::default();
    for cmd in parse_sexprs(text)? {
        let SExpr::List(items, pos) = &cmd else {
            return syntax(cmd.pos(), "expected a command");
        };
        let Some(head) = items.first().and_then(SExpr::symbol) else {
            return syntax(*pos, "expected a command name");
        };
        let args = &items[1..];
        let c = match head {
            "set-logic" => {
                let logic = args.first().and_then(SExpr::symbol).map(str::to_string);
                match logic {
                    Some(l) if l == "QF_NRA" => {
                        script.logic = Some(l.clone());
                        Command::SetLogic(l)
                    }
                    Some(l) => return unsupported(*pos, &format!("logic {l}")),
                    None => return syntax(*pos, "set-logic expects a symbol"),
                }
            }
            "set-info" => Command::SetInfo,
            "set-option" => Command::SetOption,
            "declare-fun" | "declare-const" => {
                let (name, sort) = match (head, args) {
                    ("declare-fun", [n, SExpr::List(params, ppos), s]) => {
                        if !params.is_empty() {
                            return unsupported(*ppos, "function symbols with arguments");
                        }
                        (n, s)
                    }
                    ("declare-const", [n, s]) => (n, s),
                    _ => return syntax(*pos, &format!("malformed {head}")),
                };
                let Some(name) = name.symbol() else {
                    return syntax(name.pos(), "expected a symbol");
                };
                match sort.symbol() {
                    Some("Real") => {}
                    Some(other) => return unsupported(sort.pos(), &format!("{other} sort")),
                    None => return unsupported(sort.pos(), "compound sorts"),
                }
                if script.vars.push(name).is_none() {
                    return err(args[0].pos(), ErrorKind::Redeclared(name.to_string()));
                }
                Command::Declare(name.to_string())
            }
            "assert" => {
                let [t] = args else {
                    return syntax(*pos, "assert takes one term");
                };
                script.assertions.push(bool_term(t, &script.vars)?);
                Command::Assert(script.assertions.len() - 1)
            }
            "check-sat" => Command::CheckSat,
            "get-model" => Command::GetModel,
            "exit" => Command::Exit,
            other => return unsupported(items[0].pos(), other),
        };
        script.commands.push(c);
    }
    Ok(script)
}

/// Parses one Boolean term over the given variables.
pub fn parse_term(text: &str, vars: &VariableOrder) -> Result<Formula, SmtError> {
    let es = parse_sexprs(text)?;
    match es.as_slice() {
        [t] => bool_term(t, vars),
        _ => syntax(Pos { line: 1, col: 1 }, "expected exactly one term"),
    }
}

const UNSUPPORTED_HEADS: [&str; 8] = ["let", "ite", "forall", "exists", "!", "to_real", "to_int", "match"];

fn bool_term(e: &SExpr, vars: &VariableOrder) -> Result<Formula, SmtError> {
    match e {
        SExpr::Atom(s, pos) => match s.as_str() {
            "true" => Ok(Formula::True),
            "false" => Ok(Formula::False),
            _ if vars.index_of(s).is_some() => syntax(*pos, &format!("'{s}' is Real, expected a Boolean term")),
            _ => err(*pos, ErrorKind::Undeclared(s.clone())),
        },
        SExpr::Str(_, pos) => syntax(*pos, "unexpected string literal"),
        SExpr::List(items, pos) => {
            let Some(head) = items.first().and_then(SExpr::symbol) else {
                return syntax(*pos, "expected an operator");
            };
            let args = &items[1..];
            let bools = || args.iter().map(|a| bool_term(a, vars)).collect::<Result<Vec<_>, _>>();
            match head {
                "and" if args.is_empty() => Ok(Formula::True),
                "or" if args.is_empty() => Ok(Formula::False),
                "and" => Ok(Formula::And(bools()?)),
                "or" => Ok(Formula::Or(bools()?)),
                "not" => match args {
                    [a] => Ok(Formula::not(bool_term(a, vars)?)),
                    _ => syntax(*pos, "not takes one argument"),
                },
                "=>" => {
                    let mut fs = bools()?;
                    let Some(mut acc) = fs.pop() else {
                        return syntax(*pos, "=> needs arguments");
                    };
                    while let Some(f) = fs.pop() {
                        acc = Formula::Or(vec![Formula::not(f), acc]);
                    }
                    Ok(acc)
                }
                "<" | "<=" | "=" | ">=" | ">" => {
                    let rel = match head {
                        "<" => Relation::Lt,
                        "<=" => Relation::Le,
                        "=" => Relation::Eq,
                        ">=" => Relation::Ge,
                        _ => Relation::Gt,
                    };
                    if args.len() < 2 {
                        return syntax(*pos, &format!("{head} needs at least two arguments"));
                    }
                    let ps = args.iter().map(|a| arith_term(a, vars)).collect::<Result<Vec<_>, _>>()?;
                    let mut atoms: Vec<Formula> = ps.windows(2).map(|w| Formula::atom(&w[0] - &w[1], rel)).collect();
                    Ok(if atoms.len() == 1 { atoms.pop().unwrap() } else { Formula::And(atoms) })
                }
                "distinct" => {
                    if args.len() < 2 {
                        return syntax(*pos, "distinct needs at least two arguments");
                    }
                    let ps = args.iter().map(|a| arith_term(a, vars)).collect::<Result<Vec<_>, _>>()?;
                    let mut atoms = Vec::new();
                    for i in 0..ps.len() {
                        for k in i + 1..ps.len() {
                            atoms.push(Formula::atom(&ps[i] - &ps[k], Relation::Ne));
                        }
                    }
                    Ok(if atoms.len() == 1 { atoms.pop().unwrap() } else { Formula::And(atoms) })
                }
                h if UNSUPPORTED_HEADS.contains(&h) => unsupported(items[0].pos(), h),
                h => syntax(items[0].pos(), &format!("unknown Boolean operator '{h}'")),
            }
        }
    }
}

/// Numerals and decimals as exact rationals.
pub fn parse_number(s: &str) -> Option<Rational> {
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    let digits_ok = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    if int.is_empty() || !digits_ok(int) || !digits_ok(frac) || (s.contains('.') && frac.is_empty()) {
        return None;
    }
    let num: BigInt = format!("{int}{frac}").parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Some(Rational::new(num, den))
}

fn arith_term(e: &SExpr, vars: &VariableOrder) -> Result<Polynomial, SmtError> {
    match e {
        SExpr::Atom(s, pos) => {
            if let Some(v) = parse_number(s) {
                return Ok(Polynomial::constant(v));
            }
            match vars.index_of(s) {
                Some(i) => Ok(Polynomial::var(i)),
                None if s == "true" || s == "false" => syntax(*pos, "expected a Real term"),
                None => err(*pos, ErrorKind::Undeclared(s.clone())),
            }
        }
        SExpr::Str(_, pos) => syntax(*pos, "unexpected string literal"),
        SExpr::List(items, pos) => {
            let Some(head) = items.first().and_then(SExpr::symbol) else {
                return syntax(*pos, "expected an operator");
            };
            let args = items[1..].iter().map(|a| arith_term(a, vars));
            match head {
                "+" => args.sum_polys(Polynomial::zero()),
                "*" => {
                    let mut acc = Polynomial::one();
                    for a in args {
                        acc = &acc * &a?;
                    }
                    Ok(acc)
                }
                "-" => {
                    let mut ps = args.collect::<Result<Vec<_>, _>>()?;
                    match ps.len() {
                        0 => syntax(*pos, "- needs arguments"),
                        1 => Ok(-&ps[0]),
                        _ => {
                            let first = ps.remove(0);
                            Ok(ps.iter().fold(first, |acc, p| &acc - p))
                        }
                    }
                }
                "/" => {
                    let ps = args.collect::<Result<Vec<_>, _>>()?;
                    if ps.len() < 2 {
                        return syntax(*pos, "/ needs at least two arguments");
                    }
                    let mut acc = ps[0].clone();
                    for (p, src) in ps[1..].iter().zip(&items[2..]) {
                        let Some(d) = p.constant_value() else {
                            return unsupported(src.pos(), "non-literal division");
                        };
                        if d.is_zero() {
                            return syntax(src.pos(), "division by zero");
                        }
                        acc = acc.scale(&(Rational::one() / d));
                    }
                    Ok(acc)
                }
                h if UNSUPPORTED_HEADS.contains(&h) => unsupported(items[0].pos(), h),
                h => syntax(items[0].pos(), &format!("unknown arithmetic operator '{h}'")),
            }
        }
    }
}

trait SumPolys {
    fn sum_polys(self, init: Polynomial) -> Result<Polynomial, SmtError>;
}

impl<I: Iterator<Item = Result<Polynomial, SmtError>>> SumPolys for I {
    fn sum_polys(self, init: Polynomial) -> Result<Polynomial, SmtError> {
        let mut acc = init;
        for p in self {
            acc = &acc + &p?;
        }
        Ok(acc)
    }
}
