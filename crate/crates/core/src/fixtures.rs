//! Named test instances shared by the test suites and the CLI.

use crate::fnzoo::{
    abs_table, add, dilate, from_fn, make_bivariate_diff, make_gen_int_mixing, make_max_component, make_max_residual,
    make_nonconvex_demo, make_quadratic, max_affine_pair, scale, square_table, FunctionOracle,
};
use crate::lattice::DiscreteBox;
use crate::misepi::MixedInstance;
use crate::rat::{int, rat, Rational};

/// A function on a finite working box, with its expected L♮ status.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub f: FunctionOracle,
    pub bx: DiscreteBox,
    pub lnat: bool,
}

fn fixture(name: &'static str, f: FunctionOracle, bx: DiscreteBox, lnat: bool) -> Fixture {
    let f = f.restrict(&bx).expect("working box inside the domain");
    Fixture { name, f, bx, lnat }
}

fn cube(n: usize, lo: i64, hi: i64) -> DiscreteBox {
    DiscreteBox::cube(n, lo, hi).expect("valid box")
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

/// L♮-convex fixtures; all have `n <= 3` and at most four points per side.
pub fn lnat_fixtures() -> Vec<Fixture> {
    let q3 = vec![rat(4, 5), rat(1, 2), rat(1, 5)];
    let sq = make_bivariate_diff(square_table(-3, 3), cube(2, 0, 3)).expect("convex table");
    let ab = make_bivariate_diff(abs_table(-2, 2), cube(2, 0, 2)).expect("convex table");
    let quad2 = make_quadratic(vec![ints(&[2, -1]), ints(&[-1, 2])], vec![int(-3), int(1)], cube(2, 0, 3)).expect("M-matrix");
    let quad3 = make_quadratic(
        vec![ints(&[2, -1, 0]), ints(&[-1, 3, -1]), ints(&[0, -1, 1])],
        vec![int(-2), int(-1), rat(1, 2)],
        cube(3, 0, 2),
    )
    .expect("M-matrix");
    let pair = max_affine_pair(ints(&[1, 0, 0]), int(0), ints(&[0, 1, 0]), rat(1, 2), cube(3, 0, 2)).expect("pair");
    vec![
        fixture("gen-int-mixing", make_gen_int_mixing(q3.clone()), cube(3, -1, 2), true),
        fixture("max-residual", make_max_residual(q3), cube(3, 0, 2), true),
        fixture("max-component", make_max_component(3), cube(3, 0, 2), true),
        fixture("bivariate-square", sq.clone(), cube(2, 0, 3), true),
        fixture("bivariate-abs", ab.clone(), cube(2, 0, 2), true),
        fixture("quadratic-2", quad2.clone(), cube(2, 0, 3), true),
        fixture("quadratic-3", quad3, cube(3, 0, 2), true),
        fixture("affine-pair", pair, cube(3, 0, 2), true),
        fixture("nonconvex-demo", make_nonconvex_demo(), DiscreteBox::finite(&[0, 0], &[2, 1]).expect("box"), true),
        fixture("scaled-abs", scale(rat(3, 2), &ab).expect("positive"), cube(2, 0, 2), true),
        fixture("sum-square-quadratic", add(&sq, &quad2).expect("same box"), cube(2, 0, 3), true),
        fixture("dilated-square", dilate(vec![3, 3], -1, &sq).expect("nonzero"), cube(2, 0, 3), true),
        fixture("univariate-convex", from_fn(cube(1, 0, 3), |x| int((2 * x[0] - 3).abs())).expect("finite"), cube(1, 0, 3), true),
    ]
}

/// Functions that fail L♮-convexity for different reasons.
pub fn non_lnat_fixtures() -> Vec<Fixture> {
    vec![
        // integrally convex but supermodular
        fixture("supermodular-product", from_fn(cube(2, 0, 2), |x| int(x[0] * x[1])).expect("finite"), cube(2, 0, 2), false),
        // one variable: always submodular, not convex
        fixture("univariate-bump", from_fn(cube(1, 0, 2), |x| int(x[0] % 2)).expect("finite"), cube(1, 0, 2), false),
        fixture("concave-square", from_fn(cube(2, 0, 2), |x| int(-(x[0] - x[1]).pow(2))).expect("finite"), cube(2, 0, 2), false),
        fixture("x-minus-y-product", from_fn(cube(2, 0, 2), |x| int(x[0] * x[0] + x[1] * x[1] + x[0] * x[1])).expect("finite"), cube(2, 0, 2), false),
    ]
}

pub fn all_fixtures() -> Vec<Fixture> {
    let mut v = lnat_fixtures();
    v.extend(non_lnat_fixtures());
    v
}

/// A mixed-integer instance with a finite working box.
#[derive(Debug, Clone)]
pub struct MixedFixture {
    pub name: &'static str,
    pub inst: MixedInstance,
    pub workbox: DiscreteBox,
}

fn rats(v: &[(i64, i64)]) -> Vec<Rational> {
    v.iter().map(|&(a, b)| rat(a, b)).collect()
}

/// The four-dimensional binary instance with a known facet.
pub fn mcmix_paper() -> MixedInstance {
    MixedInstance::mcmix(rats(&[(2, 1), (1, 2), (4, 1), (11, 4)]), rats(&[(3, 1), (1, 1), (4, 1), (5, 2)])).expect("c >= 0")
}

/// The four-dimensional continuous mixing instance used for cycles.
pub fn cmix_paper() -> MixedInstance {
    MixedInstance::cmix(rats(&[(4, 5), (1, 2), (1, 5), (1, 10)])).expect("q in [0, 1)")
}

/// Small instances with `n <= 3` for hull comparisons.
pub fn mixed_fixtures() -> Vec<MixedFixture> {
    let c = |q: &[(i64, i64)], lo, hi| MixedFixture {
        name: "",
        inst: MixedInstance::cmix(rats(q)).expect("q in [0, 1)"),
        workbox: cube(q.len(), lo, hi),
    };
    let m = |q: &[(i64, i64)], cc: &[(i64, i64)]| MixedFixture {
        name: "",
        inst: MixedInstance::mcmix(rats(q), rats(cc)).expect("c >= 0"),
        workbox: cube(q.len(), 0, 1),
    };
    let mut v = vec![
        MixedFixture { name: "cmix-1", ..c(&[(1, 3)], -1, 2) },
        MixedFixture { name: "cmix-2", ..c(&[(4, 5), (3, 10)], -1, 1) },
        MixedFixture { name: "cmix-3", ..c(&[(4, 5), (1, 2), (1, 5)], -1, 1) },
        MixedFixture { name: "cmix-3-ties", ..c(&[(1, 2), (1, 2), (0, 1)], 0, 2) },
        MixedFixture { name: "mcmix-2", ..m(&[(2, 1), (1, 2)], &[(3, 1), (1, 1)]) },
        MixedFixture { name: "mcmix-3", ..m(&[(2, 1), (1, 2), (4, 1)], &[(3, 1), (1, 1), (4, 1)]) },
        MixedFixture { name: "mcmix-3-b", ..m(&[(1, 1), (5, 2), (3, 2)], &[(2, 1), (7, 2), (1, 2)]) },
    ];
    v.push(MixedFixture { name: "mcmix-paper", inst: mcmix_paper(), workbox: cube(4, 0, 1) });
    v
}
