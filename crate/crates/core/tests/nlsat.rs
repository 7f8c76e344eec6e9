mod common;

use std::cmp::Ordering;

use common::*;
use nlcell::nlsat::{constraint_set, explain, point_exclusion, to_cnf, Atom, AtomTable, Clause, FeasibleSet, Lit, Solver};
use nlcell::numeric::{q, qi, RealAlgebraic, UPoly};
use nlcell::poly::parse_poly;
use nlcell::scc::SccFailure;
use nlcell::{
    ApproxConfig, ApxState, Constraint, ExtendedReal, Formula, Polynomial, RealValue, Relation, SolveResult, SolverConfig,
    VariableOrder,
};
use rand::Rng;

fn p(s: &str) -> Polynomial {
    parse_poly(s, &VariableOrder::numbered(3)).unwrap()
}

fn atom(s: &str, rel: Relation) -> Formula {
    Formula::atom(p(s), rel)
}

fn r(v: i64) -> RealValue {
    RealValue::Rational(qi(v))
}

fn sqrt2() -> RealValue {
    RealAlgebraic::from_isolating(UPoly::from_ints(&[-2, 0, 1]), qi(1), qi(2))
}

fn lit_of(table: &mut AtomTable, f: &Formula) -> Lit {
    let Formula::Atom(c) = f else { panic!() };
    table.intern(c.clone()).unwrap()
}

/// Whether `clauses` are satisfiable once the theory atoms are fixed by
/// `fixed`, trying every value of the selector atoms.
fn cnf_sat(clauses: &[Clause], table: &AtomTable, fixed: &dyn Fn(usize) -> bool) -> bool {
    let selectors: Vec<usize> = (0..table.len()).filter(|&a| matches!(table.get(a), Atom::Selector)).collect();
    (0u32..1 << selectors.len()).any(|mask| {
        let value = |a: usize| match selectors.iter().position(|&s| s == a) {
            Some(i) => mask >> i & 1 == 1,
            None => fixed(a),
        };
        clauses.iter().all(|c| c.iter().any(|l| value(l.atom) == l.positive))
    })
}

#[test]
fn clausal_form_small_cases() {
    let (a, b) = (atom("x1 - 1", Relation::Lt), atom("x2 - 1", Relation::Lt));
    let mut t = AtomTable::new();
    let cnf = to_cnf(&Formula::Or(vec![a.clone(), b.clone()]), &mut t);
    let (la, lb) = (lit_of(&mut t, &a), lit_of(&mut t, &b));
    assert_eq!(cnf.len(), 1);
    let mut c = cnf[0].clone();
    c.sort();
    assert_eq!(c, vec![la, lb]);

    let mut t = AtomTable::new();
    let cnf = to_cnf(&Formula::not(Formula::And(vec![a.clone(), b.clone()])), &mut t);
    let (la, lb) = (lit_of(&mut t, &a), lit_of(&mut t, &b));
    assert_eq!(cnf.len(), 1);
    let mut c = cnf[0].clone();
    c.sort();
    assert_eq!(c, vec![la.negate(), lb.negate()]);
}

/// Truth value of `f` with each theory atom read from `fixed`.
fn abstract_eval(f: &Formula, table: &mut AtomTable, fixed: &dyn Fn(usize) -> bool) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Not(g) => !abstract_eval(g, table, fixed),
        Formula::And(gs) => gs.iter().all(|g| abstract_eval(g, table, fixed)),
        Formula::Or(gs) => gs.iter().any(|g| abstract_eval(g, table, fixed)),
        Formula::Atom(c) => {
            let l = table.intern(c.clone()).unwrap();
            fixed(l.atom) == l.positive
        }
    }
}

#[test]
fn clausal_form_matches_truth_tables() {
    let a = atom("x1", Relation::Gt);
    let b = atom("x2", Relation::Le);
    let c = atom("x3 - x1", Relation::Eq);
    let d = atom("x2 + x1", Relation::Ne);
    let ab = Formula::And(vec![a.clone(), b.clone()]);
    let formulas = vec![
        Formula::Or(vec![ab.clone(), c.clone()]),
        Formula::And(vec![Formula::Or(vec![ab.clone(), c.clone()]), Formula::Or(vec![ab.clone(), Formula::not(c.clone())])]),
        Formula::not(Formula::Or(vec![Formula::And(vec![a.clone(), Formula::not(d.clone())]), Formula::And(vec![b.clone(), c.clone()])])),
        Formula::Or(vec![Formula::And(vec![ab.clone(), d.clone()]), Formula::not(ab.clone()), Formula::And(vec![c.clone(), d.clone()])]),
    ];
    for f in formulas {
        let mut t = AtomTable::new();
        let cnf = to_cnf(&f, &mut t);
        let theory: Vec<usize> = (0..t.len()).filter(|&x| matches!(t.get(x), Atom::Theory(_))).collect();
        assert!(theory.len() <= 4);
        for mask in 0u32..1 << theory.len() {
            let fixed = |x: usize| theory.iter().position(|&y| y == x).is_some_and(|i| mask >> i & 1 == 1);
            let expect = abstract_eval(&f, &mut t.clone(), &fixed);
            assert_eq!(cnf_sat(&cnf, &t, &fixed), expect, "{f:?} under {mask:b}");
        }
    }
}

fn set_of(c: Constraint, prefix: &[RealValue]) -> FeasibleSet {
    constraint_set(&c, prefix).unwrap()
}

#[test]
fn feasible_sets() {
    let disk = Constraint::poly(p("x1^2 + x2^2 - 1"), Relation::Lt);
    assert!(set_of(disk, &[r(2)]).is_empty());

    let up = set_of(Constraint::poly(p("x2"), Relation::Gt), &[r(0)]);
    assert_eq!(up.intervals().len(), 1);
    let iv = &up.intervals()[0];
    assert!(!iv.lo_closed && iv.lo.compare_value(&r(0)) == Ordering::Equal && matches!(iv.hi, ExtendedReal::PosInf));
    assert_eq!(up.decide_value().unwrap(), r(1));

    let below = set_of(Constraint::poly(p("x2^2 - 2"), Relation::Lt), &[r(0)]);
    let nonneg = set_of(Constraint::poly(p("x2"), Relation::Ge), &[r(0)]);
    let both = below.intersect(&nonneg);
    assert_eq!(both.intervals().len(), 1);
    let iv = &both.intervals()[0];
    assert!(iv.lo_closed && !iv.hi_closed);
    assert_eq!(iv.lo.compare_value(&r(0)), Ordering::Equal);
    assert_eq!(iv.hi.compare_value(&sqrt2()), Ordering::Equal);
    assert_eq!(both.decide_value().unwrap(), r(0));

    assert_eq!(FeasibleSet::full().decide_value().unwrap(), r(0));
    let point = set_of(Constraint::poly(p("x2^2 - 2"), Relation::Eq), &[r(0)])
        .intersect(&set_of(Constraint::poly(p("x2"), Relation::Gt), &[r(0)]));
    assert_eq!(point.decide_value().unwrap().compare(&sqrt2()), Ordering::Equal);
}

#[test]
fn linear_cores_ignore_the_variant() {
    let mut rng = rng(60);
    for _ in 0..50 {
        let mut table = AtomTable::new();
        // Two parallel half-planes facing away from each other.
        let a = random_rational(&mut rng, 5, 3);
        let k = random_rational(&mut rng, 5, 3);
        let upper = &(&Polynomial::var(1) - &Polynomial::var(0).scale(&k)) - &Polynomial::constant(a.clone());
        let lower = &(&Polynomial::var(1) - &Polynomial::var(0).scale(&k)) - &Polynomial::constant(&a + qi(1));
        let core = vec![
            table.intern(Constraint::poly(upper, Relation::Lt)).unwrap(),
            table.intern(Constraint::poly(lower, Relation::Gt)).unwrap(),
        ];
        let prefix = [RealValue::Rational(random_rational(&mut rng, 5, 3))];
        let base = explain(&core, &mut table, &prefix, &ApproxConfig::baseline(), &mut ApxState::new()).unwrap();
        for v in ["simple-2", "dynamic", "taylor", "pwl-2", "outside"] {
            let e = explain(&core, &mut table, &prefix, &v.parse().unwrap(), &mut ApxState::new()).unwrap();
            assert_eq!(e.clause, base.clause, "{v}");
        }
    }
}

#[test]
fn nullified_cores_exclude_only_the_point() {
    let mut table = AtomTable::new();
    let core = vec![table.intern(Constraint::poly(p("x1*x2"), Relation::Gt)).unwrap()];
    let prefix = [r(0)];
    let err = explain(&core, &mut table, &prefix, &ApproxConfig::baseline(), &mut ApxState::new()).unwrap_err();
    assert!(matches!(err, SccFailure::Nullified(_)));
    let e = point_exclusion(&core, &mut table, &prefix);
    assert!(e.cell.is_none());
    let rest: Vec<Lit> = e.clause.iter().filter(|l| !core.contains(&l.negate())).copied().collect();
    // The remaining literals are false exactly at x1 = 0.
    for k in -20..=20 {
        let x = [RealValue::Rational(q(k, 7))];
        let holds = rest.iter().any(|l| table.constraint(l.atom).unwrap().eval(&x).unwrap() == l.positive);
        assert_eq!(holds, k != 0, "at x1 = {k}/7");
    }
}

fn run(f: &Formula, n: usize, variant: &str) -> (SolveResult, Solver) {
    let cfg = SolverConfig { approx: variant.parse().unwrap(), ..Default::default() };
    let mut s = Solver::new(f, n, cfg);
    s.record = Some(Vec::new());
    let res = s.run();
    (res, s)
}

#[test]
fn worked_verdicts() {
    let disk_or_up = Formula::Or(vec![atom("x1^2 + x2^2 - 1", Relation::Lt), atom("x2", Relation::Gt)]);
    let neg_square = atom("x1^2", Relation::Lt);
    let root_two = Formula::And(vec![atom("x1^2 - 2", Relation::Eq), atom("x1", Relation::Gt)]);
    for v in ["baseline", "simple-3", "dynamic", "taylor", "pwl-2", "outside"] {
        let (res, _) = run(&disk_or_up, 2, v);
        let SolveResult::Sat(m) = res else { panic!("{v}: {res:?}") };
        assert!(eval_rational(&disk_or_up, &rational_point(&m).unwrap()));
        assert!(matches!(run(&neg_square, 1, v).0, SolveResult::Unsat));
        let SolveResult::Sat(m) = run(&root_two, 1, v).0 else { panic!() };
        assert_eq!(m[0].compare(&sqrt2()), Ordering::Equal);
    }
}

/// Random formulas mixing equations, weak and strict inequalities in up to
/// three variables.
fn random_formula(rng: &mut TestRng) -> (Formula, usize) {
    let n = rng.gen_range(1..=3);
    let rels = [Relation::Lt, Relation::Le, Relation::Eq, Relation::Ne, Relation::Ge, Relation::Gt];
    let clauses = (0..rng.gen_range(2..=4))
        .map(|_| {
            let lits = (0..rng.gen_range(1..=2))
                .map(|_| {
                    let level = rng.gen_range(1..=n);
                    let deg = if level == 3 { 2 } else { 3 };
                    Formula::atom(random_poly(rng, level, deg, 3), rels[rng.gen_range(0..6)])
                })
                .collect();
            Formula::Or(lits)
        })
        .collect();
    (Formula::And(clauses), n)
}

#[test]
fn learned_clauses_only_cut_conflicting_points() {
    let mut rng = rng(61);
    let mut checked = 0;
    for i in 0..500 {
        let (f, n) = random_formula(&mut rng);
        let variant = ["baseline", "simple-2", "dynamic", "taylor", "pwl-2", "outside"][i % 6];
        let (res, s) = run(&f, n, variant);
        if let SolveResult::Sat(m) = &res {
            assert!(f.eval(m).unwrap(), "model of {f:?}");
        }
        for learned in s.record.as_ref().unwrap() {
            let Some(cell) = &learned.explanation.cell else { continue };
            for _ in 0..100 {
                let Some(mut pt) = point_in_cell(&mut rng, cell) else { continue };
                pt.push(RealValue::Rational(random_rational(&mut rng, 40, 8)));
                let violated = learned.core.iter().any(|l| s.table.constraint(l.atom).unwrap().eval(&pt).unwrap() != l.positive);
                assert!(violated, "{variant}: core satisfied at {pt:?} inside {cell}");
                checked += 1;
            }
        }
    }
    assert!(checked > 10_000, "only {checked} points checked");
}
