mod common;

use common::*;
use nlcell::nlsat::{explain, AtomTable};
use nlcell::numeric::{q, qi};
use nlcell::poly::parse_poly;
use nlcell::roots::ir_exps;
use nlcell::scc::{cell_contains, delineability_polys, levelwise_scc, ordering_resultants, pick_interval, Barriers, SccFailure};
use nlcell::{ApproxConfig, ApxState, Bound, Constraint, Polynomial, Rational, RealValue, Relation, SymbolicInterval, VariableOrder};
use num_traits::Zero;

fn p(s: &str) -> Polynomial {
    parse_poly(s, &VariableOrder::numbered(3)).unwrap()
}

fn r(v: Rational) -> RealValue {
    RealValue::Rational(v)
}

fn show(iv: &SymbolicInterval, var: &str) -> String {
    iv.display_with(var, &VariableOrder::numbered(3))
}

/// Discriminant of `f` in `x2` at `x1 = t` by the Sylvester determinant.
fn disc_at(f: &Polynomial, t: &Rational) -> Rational {
    let u = f.substitute(0, t);
    let c = |g: &Polynomial| -> Vec<Rational> { g.coefficients(1).iter().map(|c| c.constant_value().unwrap()).collect() };
    sylvester(&c(&u), &c(&u.derivative(1)))
}

/// `g` is a constant multiple of the oracle discriminant of `f`.
fn is_disc_multiple(g: &Polynomial, f: &Polynomial) -> bool {
    let mut ratio = None;
    (-6..=6).all(|k| {
        let t = q(k, 5);
        // The determinant describes the discriminant only where the degree holds.
        if f.ldcf(1).eval(&[t.clone()]).is_zero() {
            return true;
        }
        let (a, b) = (disc_at(f, &t), g.eval(&[t]));
        if a.is_zero() || b.is_zero() {
            return a.is_zero() && b.is_zero();
        }
        let k = a / b;
        ratio.get_or_insert_with(|| k.clone()) == &k
    })
}

#[test]
fn interval_around_a_sample() {
    // Roots at -1, 0, 1/2 and 1.
    let polys = [p("x2 + 1"), p("x2"), p("2*x2 - 1"), p("x2 - 1")];
    let pre = [r(qi(0))];
    let roots = ir_exps(&polys, &pre).unwrap();
    let iv = pick_interval(&roots, &r(q(-2, 3)));
    assert_eq!(show(&iv, "x2"), "root(x2 + 1, 1) < x2 < root(x2, 1)");
    assert_eq!(pick_interval(&[], &r(qi(7))), SymbolicInterval::whole_line());
    let iv = pick_interval(&roots, &r(q(1, 2)));
    assert_eq!(show(&iv, "x2"), "x2 = root(2*x2 - 1, 1)");
}

#[test]
fn delineability_of_small_polynomials() {
    let f = p("x2^2 - x1");
    let d = delineability_polys(&f, &[r(qi(3))]).unwrap();
    assert_eq!(d.len(), 1);
    assert!(is_disc_multiple(&d[0], &f));
    assert_eq!(d, vec![p("x1")]);

    let g = p("x1*x2 + 1");
    // Degree one: the discriminant is the leading coefficient itself.
    assert!(is_disc_multiple(&p("x1"), &g));
    assert_eq!(delineability_polys(&g, &[r(qi(2))]).unwrap(), vec![p("x1")]);

    // At x1 = 0 the leading coefficient vanishes and the x2 coefficient 1
    // is the first non-vanishing one, which is a constant. The discriminant
    // is -x1, so it merges with the leading coefficient.
    let h = p("x1*x2^2 + x2");
    assert!(is_disc_multiple(&p("x1"), &h));
    assert_eq!(delineability_polys(&h, &[r(qi(0))]).unwrap(), vec![p("x1")]);
    let k = p("x1*x2^2 + x2 + 1");
    let d = delineability_polys(&k, &[r(qi(0))]).unwrap();
    assert_eq!(d.len(), 2);
    assert!(d.contains(&p("x1")));
    assert!(is_disc_multiple(d.iter().find(|g| **g != p("x1")).unwrap(), &k));
}

#[test]
fn ordering_pairs_follow_the_bounds() {
    // Sample 0: bounded below by p2 at -1 and above by p3 at 1. The roots of
    // p1 (3) and p2 (4) lie above the upper bound.
    let (p1, p2, p3) = (p("x2 - 3"), p("x2^2 - 3*x2 - 4"), p("x2 - 1"));
    let pre = [r(qi(0))];
    let roots = ir_exps([&p1, &p2, &p3], &pre).unwrap();
    let s = r(qi(0));
    let iv = pick_interval(&roots, &s);
    let SymbolicInterval::Sector { lower: Some(Bound::Root(l)), upper: Some(Bound::Root(u)) } = &iv else { panic!("{iv:?}") };
    assert_eq!((&l.poly, &u.poly), (&p2, &p3));
    let mut pairs = ordering_resultants(&roots, &iv, &s, &Barriers::default());
    let norm = |a: &Polynomial, b: &Polynomial| if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    let mut expect = vec![norm(&p1, &p3), norm(&p2, &p3)];
    pairs.sort();
    expect.sort();
    assert_eq!(pairs, expect);

    // A lone lower bound has nobody to be ordered against.
    let lone = ir_exps([&p("x2 + 5")], &pre).unwrap();
    let iv = pick_interval(&lone, &s);
    assert!(ordering_resultants(&lone, &iv, &s, &Barriers::default()).is_empty());

    // A section is paired with every other root polynomial.
    let qpoly = p("x2 - 2");
    let roots = ir_exps([&p3, &qpoly], &pre).unwrap();
    let iv = pick_interval(&roots, &r(qi(1)));
    assert!(matches!(iv, SymbolicInterval::Section(_)));
    assert_eq!(ordering_resultants(&roots, &iv, &r(qi(1)), &Barriers::default()), vec![norm(&p3, &qpoly)]);
}

#[test]
fn worked_cells() {
    let cell = levelwise_scc(&[p("x1^2 + x2^2 - 1")], &[r(qi(2)), r(qi(0))]).unwrap();
    assert_eq!(show(&cell.intervals[1], "x2"), "true");
    assert_eq!(show(&cell.intervals[0], "x1"), "x1 > root(x1^2 - 1, 2)");
    assert_eq!(cell_contains(&cell, &[r(qi(3)), r(qi(0))]).unwrap(), Some(true));
    assert_eq!(cell_contains(&cell, &[r(qi(0)), r(qi(0))]).unwrap(), Some(false));
    assert_eq!(cell_contains(&cell, &cell.sample).unwrap(), Some(true));

    let line = p("x2 - x1");
    let cell = levelwise_scc(&[line.clone()], &[r(qi(0)), r(qi(1))]).unwrap();
    assert_eq!(show(&cell.intervals[1], "x2"), "x2 > root(x2 - x1, 1)");
    assert_eq!(show(&cell.intervals[0], "x1"), "true");
    // Positive above the line, everywhere.
    let mut rng = rng(40);
    for _ in 0..100 {
        let pt = point_in_cell(&mut rng, &cell).unwrap();
        assert!(line.eval(&rational_point(&pt).unwrap()) > qi(0));
    }

    assert!(matches!(levelwise_scc(&[p("x1*x2")], &[r(qi(0)), r(qi(1))]), Err(SccFailure::Nullified(_))));
}

#[test]
fn section_contributes_one_literal() {
    // x2^2 + x1^2 - 2 < 0 has no solution over x1 = sqrt 2; the excluded
    // cell is the section through that point.
    let mut table = AtomTable::new();
    let lit = table.intern(Constraint::poly(p("x2^2 + x1^2 - 2"), Relation::Lt)).unwrap();
    let sqrt2 = nlcell::RealAlgebraic::from_isolating(nlcell::numeric::UPoly::from_ints(&[-2, 0, 1]), qi(1), qi(2));
    let e = explain(&[lit], &mut table, &[sqrt2], &ApproxConfig::baseline(), &mut ApxState::new()).unwrap();
    let cell = e.cell.unwrap();
    assert!(matches!(cell.intervals[0], SymbolicInterval::Section(_)));
    assert_eq!(e.clause.len(), 2);
    let eq = table.constraint(e.clause[1].atom).unwrap();
    assert!(!e.clause[1].positive, "{eq:?}");

    // A cell that is the whole line excludes the core alone.
    let mut table = AtomTable::new();
    let lit = table.intern(Constraint::poly(p("x2^2 + x1^2 + 1"), Relation::Lt)).unwrap();
    let e = explain(&[lit], &mut table, &[r(qi(0))], &ApproxConfig::baseline(), &mut ApxState::new()).unwrap();
    assert_eq!(e.clause, vec![lit.negate()]);
}

#[test]
fn cells_contain_their_sample_and_are_deterministic() {
    let mut rng = rng(41);
    let mut built = 0;
    for _ in 0..300 {
        let (polys, sample) = random_instance(&mut rng);
        let Ok(cell) = levelwise_scc(&polys, &sample) else { continue };
        built += 1;
        assert_eq!(cell_contains(&cell, &sample).unwrap(), Some(true));
        assert_eq!(levelwise_scc(&polys, &sample).unwrap().to_string(), cell.to_string());
        // Local cylindricity: every bound is defined over drawn points.
        for _ in 0..20 {
            assert!(point_in_cell(&mut rng, &cell).is_some(), "undefined bound in {cell}");
        }
        // Bounded sectors always carry the pair of their two bounds.
        for (j, iv) in cell.intervals.iter().enumerate() {
            if let SymbolicInterval::Sector { lower: Some(l), upper: Some(u) } = iv {
                let roots = ir_exps(l.polys().into_iter().chain(u.polys()), &sample[..j]).unwrap();
                let pairs = ordering_resultants(&roots, iv, &sample[j], &Barriers::default());
                for a in l.polys() {
                    for b in u.polys() {
                        if a != b {
                            assert!(pairs.iter().any(|(x, y)| (x == a && y == b) || (x == b && y == a)));
                        }
                    }
                }
            }
        }
    }
    assert!(built > 200, "only {built} cells built");
}
