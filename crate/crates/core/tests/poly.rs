mod common;

use common::*;
use nlcell::numeric::{q, qi};
use nlcell::poly::{discriminant, parse_poly, resultant};
use nlcell::{Polynomial, Rational, VariableOrder};
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

fn p(s: &str) -> Polynomial {
    parse_poly(s, &VariableOrder::numbered(3)).unwrap()
}

/// Coefficients of a polynomial in `var` that is constant in every other
/// variable, lowest degree first.
fn coeffs(u: &Polynomial, var: usize) -> Vec<Rational> {
    u.coefficients(var).iter().map(|c| c.constant_value().expect("univariate")).collect()
}

/// Checks that `got` agrees with the Sylvester determinant of `a` and `b`
/// specialised at enough values of `x1` to pin down a polynomial of degree
/// `max_deg` in `x1` (both sides are univariate in `x1` here).
fn agrees_with_sylvester(got: &Polynomial, a: &Polynomial, b: &Polynomial, var: usize, max_deg: i64) {
    assert!(got.degree(0) as i64 <= max_deg);
    for t in -max_deg - 1..=max_deg + 1 {
        let t = q(t, 3);
        let (sa, sb) = (a.substitute(0, &t), b.substitute(0, &t));
        assert_eq!(got.eval(&[t.clone()]), sylvester(&coeffs(&sa, var), &coeffs(&sb, var)), "at x1 = {t}");
    }
}

#[test]
fn resultant_of_line_and_quadratic() {
    let (a, b) = (p("x2 - x1"), p("x2^2 - 2"));
    let r = resultant(&a, &b, 1);
    agrees_with_sylvester(&r, &a, &b, 1, 2);
    assert_eq!(r.normalize(), p("x1^2 - 2"));
}

#[test]
fn resultant_of_circle_and_axis() {
    let (a, b) = (p("x1^2 + x2^2 - 1"), p("x2"));
    let r = resultant(&a, &b, 1);
    agrees_with_sylvester(&r, &a, &b, 1, 2);
    assert_eq!(r.normalize(), p("x1^2 - 1"));
}

#[test]
fn resultant_with_a_constant() {
    let (a, b) = (p("x2^2 + x1"), p("5"));
    let r = resultant(&a, &b, 1);
    // lc(q)^deg(p) with q constant.
    let expect = qi(5).pow(a.degree(1) as i32);
    assert_eq!(r.constant_value(), Some(expect.clone()));
    assert_eq!(sylvester(&coeffs(&a.substitute(0, &qi(1)), 1), &[qi(5)]), expect);
}

#[test]
fn discriminant_of_general_quadratic() {
    // x3^2 + b x3 + c with b = x1, c = x2.
    let f = p("x3^2 + x1*x3 + x2");
    let d = discriminant(&f, 2).unwrap();
    let mut rng = rng(1);
    let mut ratio = None;
    for _ in 0..20 {
        let (b, c) = (random_rational(&mut rng, 9, 4), random_rational(&mut rng, 9, 4));
        let s = f.substitute_prefix(&[b.clone(), c.clone()]);
        let raw = sylvester(&coeffs(&s, 2), &coeffs(&s.derivative(2), 2));
        let ours = d.eval(&[b, c]);
        // Same zero set and one constant ratio throughout.
        assert_eq!(raw.is_zero(), ours.is_zero());
        if !raw.is_zero() {
            let k = &raw / &ours;
            assert_eq!(ratio.get_or_insert_with(|| k.clone()), &k);
        }
    }
    assert_eq!(d, p("4*x2 - x1^2").normalize());
}

#[test]
fn discriminant_of_parabola() {
    let f = p("x2^2 - x1");
    let d = discriminant(&f, 1).unwrap();
    let raw = resultant(&f, &f.derivative(1), 1);
    agrees_with_sylvester(&raw, &f, &f.derivative(1), 1, 1);
    assert_eq!(raw, p("-4*x1"));
    assert_eq!(d, p("x1"));
    assert!(discriminant(&p("x1 - 5"), 0).unwrap().is_constant());
}

#[test]
fn shared_roots_annihilate_the_resultant() {
    let mut rng = rng(21);
    for _ in 0..200 {
        let a = random_rational(&mut rng, 5, 3);
        let lin = &Polynomial::var(1) - &Polynomial::constant(a);
        let u = random_poly(&mut rng, 2, 2, 3);
        let v = random_poly(&mut rng, 2, 2, 3);
        let (f, g) = (&lin * &u, &lin * &v);
        let r = resultant(&f, &g, 1);
        let sq = &(&lin * &lin) * &u;
        let d = discriminant(&sq, 1);
        for _ in 0..5 {
            let s = [random_rational(&mut rng, 5, 3)];
            assert!(r.eval(&s).is_zero(), "res({f}, {g}) at {s:?}");
            if let Ok(d) = &d {
                assert!(d.eval(&s).is_zero(), "disc({sq}) at {s:?}");
            }
        }
    }
}

#[test]
fn normalize_is_idempotent_and_keeps_zeros() {
    let mut rng = rng(22);
    for _ in 0..300 {
        let f = random_poly(&mut rng, 2, 3, 4).scale(&random_rational(&mut rng, 7, 5));
        if f.is_zero() {
            continue;
        }
        let n = f.normalize();
        assert_eq!(n.normalize(), n);
        for _ in 0..5 {
            let pt = [random_rational(&mut rng, 4, 3), random_rational(&mut rng, 4, 3)];
            assert_eq!(f.eval(&pt).is_zero(), n.eval(&pt).is_zero());
        }
        // Through an actual root in x2, when one is rational.
        let pt = [qi(1), qi(0)];
        let u = f.substitute(0, &pt[0]);
        if let Some(r) = u.to_upoly(1).and_then(|u| u.real_roots().into_iter().find_map(|r| r.as_rational().cloned())) {
            assert!(n.eval(&[qi(1), r]).is_zero());
        }
    }
}

fn poly_strategy() -> impl Strategy<Value = Polynomial> {
    any::<u64>().prop_map(|seed| {
        let mut r = rng(seed);
        let level = r.gen_range(1..=3);
        random_poly(&mut r, level, 3, 4)
    })
}

proptest! {
    #[test]
    fn ring_laws(a in poly_strategy(), b in poly_strategy(), c in poly_strategy(), x in -5i64..5, y in -5i64..5, z in 1i64..5) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        let pt = [qi(x), q(y, z), q(x + y, z)];
        prop_assert_eq!((&a * &b).eval(&pt), a.eval(&pt) * b.eval(&pt));
        prop_assert_eq!((&a - &b).eval(&pt), a.eval(&pt) - b.eval(&pt));
    }

    #[test]
    fn parse_display_round_trip(a in poly_strategy()) {
        prop_assert_eq!(p(&a.to_string()), a);
    }
}
