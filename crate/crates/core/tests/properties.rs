//! Property tests for the exact core: rationals, inequalities, boxes, the
//! simplex solver and the greedy inequality machinery.

mod common;

use lnat::fixtures::lnat_fixtures;
use lnat::fnzoo::{dilate, make_gen_int_mixing};
use lnat::lattice::{chain, DiscreteBox, LinearInequality, Permutation};
use lnat::lp::{solve, LpProblem, LpStatus, RowKind};
use lnat::rat::{dot, rat, to_rationals, zero, Rational};
use lnat::sepi::{build_sepi, greedy_cube, separate_in_box};
use num_traits::One;
use proptest::prelude::*;

use common::{fractional_point, rational_in, rng};

fn small_rat() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn rat_vec(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(small_rat(), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn field_laws(a in small_rat(), b in small_rat(), c in small_rat()) {
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        if b != zero() {
            prop_assert_eq!((&a / &b) * &b, a.clone());
        }
    }

    #[test]
    fn canonical_form_is_idempotent_and_scale_free(
        w in small_rat(), y in rat_vec(2), x in rat_vec(3), c in small_rat(), s in 1i64..20, d in 1i64..7,
    ) {
        let ineq = LinearInequality::new(w, y, x, c);
        prop_assume!(ineq.canonicalize().is_ok());
        let canon = ineq.canonicalize().unwrap();
        prop_assert_eq!(canon.canonicalize().unwrap(), canon.clone());
        let k = rat(s, d);
        let scaled = LinearInequality::new(
            &ineq.w_coef * &k,
            ineq.y_coef.iter().map(|v| v * &k).collect(),
            ineq.x_coef.iter().map(|v| v * &k).collect(),
            &ineq.constant * &k,
        );
        prop_assert!(scaled.same_halfspace(&ineq));
    }

    #[test]
    fn halfspace_equality_matches_pointwise_behaviour(
        a in rat_vec(3), b in rat_vec(3), c1 in small_rat(), c2 in small_rat(), seed in any::<u64>(),
    ) {
        let p = LinearInequality::new(Rational::one(), vec![], a, c1);
        let q = LinearInequality::new(Rational::one(), vec![], b, c2);
        let mut r = rng(seed);
        let mut agree = true;
        for _ in 0..100 {
            let x: Vec<Rational> = (0..3).map(|_| rational_in(&mut r, -5, 5, 6)).collect();
            let w = rational_in(&mut r, -20, 20, 6);
            let in_p = p.violation(&w, &[], &x) <= zero();
            let in_q = q.violation(&w, &[], &x) <= zero();
            agree &= in_p == in_q;
        }
        if p.same_halfspace(&q) {
            prop_assert!(agree);
        } else {
            // with unit w-coefficients the forms differ in (a, c); step along
            // a - b far enough that q's right-hand side exceeds p's, and put
            // w on p's boundary there
            let diff: Vec<Rational> = p.x_coef.iter().zip(&q.x_coef).map(|(u, v)| v - u).collect();
            let norm = dot(&diff, &diff);
            let gap = &q.constant - &p.constant;
            let t = if norm == zero() { zero() } else { (rat(1, 1) - gap.clone()) / &norm };
            let x: Vec<Rational> = diff.iter().map(|d| d * &t).collect();
            let (rp, rq) = (p.rhs(&x), q.rhs(&x));
            let (w, inside, outside) = if rq > rp { (rp, &p, &q) } else { (rq, &q, &p) };
            prop_assert!(inside.violation(&w, &[], &x) <= zero());
            prop_assert!(outside.violation(&w, &[], &x) > zero());
        }
    }

    #[test]
    fn lattice_count_is_the_product_of_sides(lo in prop::collection::vec(-3i64..3, 1..4), len in prop::collection::vec(0i64..4, 3)) {
        let hi: Vec<i64> = lo.iter().zip(&len).map(|(l, s)| l + s).collect();
        let bx = DiscreteBox::finite(&lo, &hi).unwrap();
        let want: u128 = lo.iter().zip(&hi).map(|(l, u)| (u - l + 1) as u128).product();
        prop_assert_eq!(bx.num_points().unwrap(), want);
        prop_assert_eq!(bx.lattice().unwrap().count() as u128, want);
    }

    #[test]
    fn greedy_weights_reconstruct_the_point(seed in any::<u64>()) {
        let mut r = rng(seed);
        for fx in lnat_fixtures() {
            let x = fractional_point(&mut r, &fx.bx);
            let (p, delta, lambda) = greedy_cube(&fx.bx, &x).unwrap();
            prop_assert!(lambda.iter().all(|l| *l >= zero()));
            prop_assert_eq!(lambda.iter().sum::<Rational>(), Rational::one());
            let pts = chain(&p, &delta);
            let mut back = vec![zero(); x.len()];
            for (z, l) in pts.iter().zip(&lambda) {
                for (b, &zi) in back.iter_mut().zip(z) {
                    *b += l * Rational::from_integer(zi.into());
                }
            }
            prop_assert_eq!(back, x);
        }
    }

    #[test]
    fn greedy_inequality_is_tight_on_its_chain(seed in any::<u64>()) {
        let mut r = rng(seed);
        for fx in lnat_fixtures() {
            let Some(inner) = fx.bx.inner() else { continue };
            let pts: Vec<_> = inner.lattice().unwrap().collect();
            let p = &pts[rand::Rng::random_range(&mut r, 0..pts.len())];
            let perms = Permutation::all(fx.bx.dim());
            let d = &perms[rand::Rng::random_range(&mut r, 0..perms.len())];
            let s = build_sepi(&fx.f, p, d).unwrap();
            for z in chain(p, d) {
                prop_assert_eq!(s.rhs_int(&z), fx.f.eval(&z));
            }
            // and valid everywhere on the box
            for z in fx.bx.lattice().unwrap() {
                prop_assert!(s.rhs_int(&z) <= fx.f.eval(&z));
            }
        }
    }

    #[test]
    fn identity_dilation_changes_nothing(x in prop::collection::vec(-20i64..20, 3)) {
        let f = make_gen_int_mixing(vec![rat(4, 5), rat(1, 2), rat(1, 5)]);
        let g = dilate(vec![0, 0, 0], 1, &f).unwrap();
        prop_assert_eq!(g.eval(&x), f.eval(&x));
    }

    #[test]
    fn optimal_lp_solutions_certify_themselves(
        c in rat_vec(3),
        rows in prop::collection::vec((rat_vec(3), small_rat(), 0u8..3), 1..6),
    ) {
        let mut lp = LpProblem::maximize(c);
        for (a, b, kind) in rows {
            let kind = match kind { 0 => RowKind::Le, 1 => RowKind::Ge, _ => RowKind::Eq };
            lp.add_row(a, kind, b);
        }
        lp.add_row(vec![Rational::one(); 3], RowKind::Le, rat(100, 1));
        let sol = solve(&lp).unwrap();
        if sol.status == LpStatus::Optimal {
            prop_assert_eq!(sol.verify(&lp), Ok(()));
            prop_assert_eq!(dot(&lp.objective, &sol.x), sol.objective);
        } else {
            // bounded by the extra row, so only infeasibility is possible
            prop_assert_eq!(sol.status, LpStatus::Infeasible);
        }
    }
}

#[test]
fn integral_points_are_never_cut() {
    for fx in lnat_fixtures() {
        for x in fx.bx.lattice().unwrap() {
            let cert = separate_in_box(&fx.f, &fx.bx, &to_rationals(&x), &fx.f.eval(&x)).unwrap();
            assert_eq!(cert.violation, zero(), "{} at {x:?}", fx.name);
        }
    }
}
