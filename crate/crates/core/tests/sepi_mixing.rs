mod common;

use std::collections::BTreeSet;

use lnat::checkers::{
    is_integrally_convex, is_l_convex, is_lattice_submodular, is_lnat_convex, is_translation_submodular,
};
use lnat::fixtures::{lnat_fixtures, non_lnat_fixtures};
use lnat::fnzoo::{from_fn, make_max_residual, max_affine_pair};
use lnat::lattice::{DiscreteBox, Permutation};
use lnat::lp::{minimize_over_inequalities, InequalityMin};
use lnat::mixing::{all_mixing_inequalities, build_k, sepi_from_mixing, Form, MixingInstance};
use lnat::oracle::{hull_min, lattice_min, HullModel};
use lnat::rat::{int, rat, zero, Rational};
use lnat::sepi::{assemble_hull_lp, build_sepi, minimize_cutting_plane, HULL_BUDGET};
use num_traits::Zero;
use rand::Rng;

use common::{ints, rational_in, rng};

#[test]
fn cutting_planes_match_exhaustive_minimum() {
    let mut r = rng(21);
    for fx in lnat_fixtures().iter().filter(|fx| fx.bx.dim() <= 3) {
        for _ in 0..8 {
            let c_w = rational_in(&mut r, 0, 2, 4) + rat(1, 3);
            let c_x: Vec<Rational> = (0..fx.bx.dim()).map(|_| rational_in(&mut r, -5, 5, 3)).collect();
            let res = minimize_cutting_plane(&fx.f, &fx.bx, &c_x, &c_w, &[]).unwrap();
            let (brute, _) = lattice_min(&fx.f, &c_w, &c_x, &fx.bx).unwrap();
            assert_eq!(res.optimum, brute, "{}", fx.name);
            if let Some(x) = &res.argmin {
                let v = &c_w * fx.f.eval(x) + lnat::rat::dot_int(&c_x, x);
                assert_eq!(v, brute, "{}: reported argmin", fx.name);
            }
        }
    }
}

#[test]
fn enumerated_hull_agrees_with_inequality_description() {
    let mut r = rng(22);
    for fx in lnat_fixtures().iter().filter(|fx| fx.bx.dim() <= 3) {
        let model = HullModel::epigraph(&fx.f, &fx.bx).unwrap();
        let hull = assemble_hull_lp(&fx.f, &fx.bx, HULL_BUDGET).unwrap();
        for _ in 0..25 {
            let c_w = rational_in(&mut r, 0, 2, 4) + rat(1, 5);
            let c_x: Vec<Rational> = (0..fx.bx.dim()).map(|_| rational_in(&mut r, -4, 4, 5)).collect();
            let mut c = vec![c_w.clone()];
            c.extend(c_x.iter().cloned());
            let brute = hull_min(&c, &model).unwrap().value;
            let InequalityMin::Optimal { value, .. } = minimize_over_inequalities(&hull, &c_w, &[], &c_x).unwrap() else {
                panic!("{}: LP not optimal", fx.name);
            };
            assert_eq!(value, brute, "{}", fx.name);
        }
    }
}

fn q_instance(n: usize) -> MixingInstance {
    let q = [rat(4, 5), rat(1, 2), rat(1, 5), rat(1, 10)];
    MixingInstance::new(q[..n].to_vec()).unwrap()
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..(1 << n)).map(move |m| (0..n).filter(|i| m >> i & 1 == 1).collect())
}

#[test]
fn build_k_inverts_sepi_from_mixing() {
    for n in 1..=4 {
        let m = q_instance(n);
        for k in subsets(n).filter(|k| !k.is_empty()) {
            for form in [Form::A, Form::B] {
                let (p, d) = sepi_from_mixing(&m, &k, form).unwrap();
                assert_eq!(build_k(&m, &p, &d).unwrap(), (k.clone(), form), "n = {n}");
            }
        }
        // K empty is the point p = 1 and gives w >= 0
        let ones = vec![1; n];
        assert_eq!(build_k(&m, &ones, &Permutation::identity(n)).unwrap(), (vec![], Form::Empty));
    }
}

#[test]
fn finitely_many_distinct_greedy_inequalities() {
    for n in 1..=4 {
        let m = q_instance(n);
        let f = m.function();
        let want: BTreeSet<String> =
            all_mixing_inequalities(&m).unwrap().iter().map(|q| format!("{}", q.canonicalize().unwrap())).collect();
        let bx = DiscreteBox::cube(n, -3, 3).unwrap();
        let mut got = BTreeSet::new();
        for p in bx.lattice().unwrap() {
            for d in Permutation::all(n) {
                got.insert(format!("{}", build_sepi(&f, &p, &d).unwrap().canonicalize().unwrap()));
            }
        }
        assert_eq!(got, want, "n = {n}");
    }
}

#[test]
fn mixing_inequalities_describe_the_hull() {
    let mut r = rng(23);
    for n in 1..=3 {
        let m = q_instance(n);
        let ineqs = all_mixing_inequalities(&m).unwrap();
        let grid = DiscreteBox::cube(n, -4, 4).unwrap();
        for _ in 0..20 {
            // c_x >= 0 and c_w >= sum c_x keep the minimum finite
            let c_x: Vec<Rational> = (0..n).map(|_| rational_in(&mut r, 0, 1, 4)).collect();
            let c_w = c_x.iter().sum::<Rational>() + rational_in(&mut r, 0, 1, 4) + rat(1, 10);
            let InequalityMin::Optimal { value, .. } = minimize_over_inequalities(&ineqs, &c_w, &[], &c_x).unwrap() else {
                panic!("LP not optimal");
            };
            let f = m.function().restrict(&grid).unwrap();
            assert_eq!(value, lattice_min(&f, &c_w, &c_x, &grid).unwrap().0, "n = {n}");
        }
    }
}

#[test]
fn lnat_is_integral_convexity_plus_submodularity() {
    for fx in lnat_fixtures().into_iter().chain(non_lnat_fixtures()) {
        let a = is_lnat_convex(&fx.f, &fx.bx).unwrap();
        let ic = is_integrally_convex(&fx.f, &fx.bx).unwrap();
        let sub = is_lattice_submodular(&fx.f, &fx.bx).unwrap();
        assert_eq!(a.passed, ic.passed && sub.passed, "{}", fx.name);
        for rep in [&a, &ic, &sub] {
            if let Some(w) = &rep.witness {
                assert!(w.confirm(&fx.f), "{}: witness does not reproduce", fx.name);
            }
        }
    }
}

#[test]
fn l_convex_implies_lnat() {
    let bx = DiscreteBox::cube(3, 0, 2).unwrap();
    let pair = max_affine_pair(ints(&[1, 0, 0]), int(0), ints(&[0, 1, 0]), int(0), bx.clone()).unwrap();
    let res = make_max_residual(vec![rat(4, 5), rat(1, 2), rat(1, 5)]).restrict(&bx).unwrap();
    let mut count = 0;
    for f in lnat_fixtures().into_iter().map(|fx| (fx.f, fx.bx)).chain([(pair, bx.clone()), (res, bx)]) {
        if is_l_convex(&f.0, &f.1).unwrap().passed {
            count += 1;
            assert!(is_lnat_convex(&f.0, &f.1).unwrap().passed);
            assert!(is_translation_submodular(&f.0, &f.1).unwrap().passed);
        }
    }
    assert!(count >= 2);
}

#[test]
fn aggregated_weight_functions_are_submodular() {
    let mut r = rng(24);
    let bx = DiscreteBox::cube(3, 0, 2).unwrap();
    for _ in 0..20 {
        let u: Vec<Rational> = (0..3).map(|_| rational_in(&mut r, 0, 2, 3)).collect();
        let total: Rational = u.iter().sum();
        let u0 = &total * rat(r.random_range(0..=4), 4);
        let f = from_fn(bx.clone(), |x| {
            (0..3)
                .map(|j| {
                    let mut v = &u0 * int(x[j]);
                    for i in 0..3 {
                        if x[i] > x[j] {
                            v += &u[i] * int(x[i] - x[j]);
                        }
                    }
                    v
                })
                .min()
                .unwrap()
        })
        .unwrap();
        assert!(is_lattice_submodular(&f, &bx).unwrap().passed, "u0 = {u0}, u = {u:?}");
    }
}

#[test]
fn hull_min_checks_the_vertical_ray() {
    let fx = &lnat_fixtures()[0];
    let model = HullModel::epigraph(&fx.f, &fx.bx).unwrap();
    let mut c = vec![int(-1)];
    c.extend(vec![zero(); fx.bx.dim()]);
    assert!(hull_min(&c, &model).is_err());
    c[0] = Rational::zero();
    assert!(hull_min(&c, &model).is_ok());
}
