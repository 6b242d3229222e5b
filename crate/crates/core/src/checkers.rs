//! Exhaustive finite-box verifiers.
//!
//! Each check enumerates all lattice pairs of a finite box, so witnesses are
//! exact and reproducible: pairs are visited in lexicographic order and the
//! first violation wins. Values are tabulated once per call.

use std::collections::HashMap;

use num_traits::Zero;

use crate::fnzoo::FunctionOracle;
use crate::lattice::{join, meet, DiscreteBox, LatticePoint, Permutation};
use crate::lp::{self, LpProblem, LpStatus, RowKind};
use crate::rat::{floor_i64, int, rat, zero, Rational};
use crate::Error;

/// Largest box accepted by [`is_integrally_convex`].
pub const INTEGRAL_CONVEXITY_LIMIT: u128 = 625;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    MidpointConvex,
    LatticeSubmodular,
    TranslationSubmodular,
    LConvex,
    IntegrallyConvex,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::MidpointConvex => "midpoint-convex",
            Property::LatticeSubmodular => "lattice-submodular",
            Property::TranslationSubmodular => "translation-submodular",
            Property::LConvex => "L-convex",
            Property::IntegrallyConvex => "integrally-convex",
        }
    }
}

/// Which inequality a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// `f(x) + f(y) < f(ceil m) + f(floor m)`, `m = (x+y)/2`.
    Midpoint,
    /// `f(x) + f(y) < f(x v y) + f(x ^ y)`.
    Lattice,
    /// `f(x) + f(y) < f((x - a1) v y) + f(x ^ (y + a1))`.
    Translation,
    /// `f(x + 1) - f(x) != f(y + 1) - f(y)`.
    Increment,
    /// `f(x) + f(y) < 2 fbar((x+y)/2)`.
    ExtensionMidpoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub violation: Violation,
    pub x: LatticePoint,
    pub y: LatticePoint,
    pub alpha: Option<i64>,
    /// The side that should be larger (for `Increment`: the increment at `x`).
    pub lhs: Rational,
    pub rhs: Rational,
}

impl Witness {
    /// Re-evaluates the witness from scratch.
    pub fn confirm(&self, f: &FunctionOracle) -> bool {
        let (x, y) = (&self.x, &self.y);
        let (lhs, rhs) = match self.violation {
            Violation::Midpoint => {
                let (hi, lo) = mid_round(x, y);
                (f.eval(x) + f.eval(y), f.eval(&hi) + f.eval(&lo))
            }
            Violation::Lattice => (f.eval(x) + f.eval(y), f.eval(&join(x, y)) + f.eval(&meet(x, y))),
            Violation::Translation => {
                let a = self.alpha.unwrap_or(0);
                let (s, t) = translated(x, y, a);
                (f.eval(x) + f.eval(y), f.eval(&s) + f.eval(&t))
            }
            Violation::Increment => {
                let inc = |p: &[i64]| f.eval(&p.iter().map(|v| v + 1).collect::<Vec<_>>()) - f.eval(p);
                return inc(x) != inc(y) && inc(x) == self.lhs && inc(y) == self.rhs;
            }
            Violation::ExtensionMidpoint => {
                let m: Vec<Rational> = x.iter().zip(y).map(|(a, b)| rat(a + b, 2)).collect();
                let Ok(hull) = DiscreteBox::finite(&meet(x, y), &join(x, y)) else { return false };
                let Ok(v) = continuous_extension(f, &hull, &m) else { return false };
                (f.eval(x) + f.eval(y), &v + &v)
            }
        };
        lhs < rhs && lhs == self.lhs && rhs == self.rhs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub property: Property,
    pub passed: bool,
    pub witness: Option<Witness>,
    /// For L-convexity: the common increment `r` of `f(x + 1) = f(x) + r`.
    pub increment: Option<Rational>,
}

impl CheckReport {
    fn pass(property: Property) -> Self {
        Self { property, passed: true, witness: None, increment: None }
    }

    fn fail(property: Property, w: Witness) -> Self {
        Self { property, passed: false, witness: Some(w), increment: None }
    }
}

/// Values of `f` tabulated over a finite box.
struct Grid {
    bx: DiscreteBox,
    pts: Vec<LatticePoint>,
    vals: Vec<Rational>,
}

impl Grid {
    fn new(f: &FunctionOracle, bx: &DiscreteBox) -> Result<Self, Error> {
        if !bx.is_finite() {
            return Err(Error::UnboundedBox);
        }
        if !bx.is_subset_of(f.domain()) {
            return Err(Error::DomainMismatch(format!("{bx} is not inside {}", f.domain())));
        }
        let pts: Vec<LatticePoint> = bx.lattice()?.collect();
        let vals = pts.iter().map(|p| f.eval(p)).collect();
        Ok(Self { bx: bx.clone(), pts, vals })
    }

    fn at(&self, x: &[i64]) -> &Rational {
        &self.vals[self.bx.index_of(x).expect("point inside grid")]
    }

    fn get(&self, x: &[i64]) -> Option<&Rational> {
        self.bx.index_of(x).map(|k| &self.vals[k])
    }

    /// Visits unordered pairs `i <= j` until `visit` returns a witness.
    fn find_pair(&self, mut visit: impl FnMut(usize, usize) -> Option<Witness>) -> Option<Witness> {
        for i in 0..self.pts.len() {
            for j in i..self.pts.len() {
                if let Some(w) = visit(i, j) {
                    return Some(w);
                }
            }
        }
        None
    }
}

fn mid_round(x: &[i64], y: &[i64]) -> (LatticePoint, LatticePoint) {
    let hi = x.iter().zip(y).map(|(a, b)| (a + b).div_euclid(2) + (a + b).rem_euclid(2)).collect();
    let lo = x.iter().zip(y).map(|(a, b)| (a + b).div_euclid(2)).collect();
    (hi, lo)
}

fn translated(x: &[i64], y: &[i64], a: i64) -> (LatticePoint, LatticePoint) {
    let s = x.iter().zip(y).map(|(xi, yi)| (xi - a).max(*yi)).collect();
    let t = x.iter().zip(y).map(|(xi, yi)| (*xi).min(yi + a)).collect();
    (s, t)
}

/// Discrete midpoint convexity over every pair of the box.
pub fn is_lnat_convex(f: &FunctionOracle, bx: &DiscreteBox) -> Result<CheckReport, Error> {
    let g = Grid::new(f, bx)?;
    let w = g.find_pair(|i, j| {
        let (x, y) = (&g.pts[i], &g.pts[j]);
        let (hi, lo) = mid_round(x, y);
        let lhs = &g.vals[i] + &g.vals[j];
        let rhs = g.at(&hi) + g.at(&lo);
        (lhs < rhs).then(|| Witness { violation: Violation::Midpoint, x: x.clone(), y: y.clone(), alpha: None, lhs, rhs })
    });
    Ok(w.map_or(CheckReport::pass(Property::MidpointConvex), |w| CheckReport::fail(Property::MidpointConvex, w)))
}

pub fn is_lattice_submodular(f: &FunctionOracle, bx: &DiscreteBox) -> Result<CheckReport, Error> {
    let g = Grid::new(f, bx)?;
    let w = lattice_witness(&g);
    Ok(w.map_or(CheckReport::pass(Property::LatticeSubmodular), |w| CheckReport::fail(Property::LatticeSubmodular, w)))
}

fn lattice_witness(g: &Grid) -> Option<Witness> {
    g.find_pair(|i, j| {
        let (x, y) = (&g.pts[i], &g.pts[j]);
        let lhs = &g.vals[i] + &g.vals[j];
        let rhs = g.at(&join(x, y)) + g.at(&meet(x, y));
        (lhs < rhs).then(|| Witness { violation: Violation::Lattice, x: x.clone(), y: y.clone(), alpha: None, lhs, rhs })
    })
}

/// Translation submodularity for every shift `alpha` up to the box diameter.
pub fn is_translation_submodular(f: &FunctionOracle, bx: &DiscreteBox) -> Result<CheckReport, Error> {
    let g = Grid::new(f, bx)?;
    let (lo, hi) = bx.finite_bounds()?;
    let diam = lo.iter().zip(&hi).map(|(l, u)| u - l).max().unwrap_or(0);
    let n = g.pts.len();
    // ordered pairs: the inequality is not symmetric in x and y
    for alpha in 0..=diam {
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (&g.pts[i], &g.pts[j]);
                let (s, t) = translated(x, y, alpha);
                let (Some(fs), Some(ft)) = (g.get(&s), g.get(&t)) else { continue };
                let lhs = &g.vals[i] + &g.vals[j];
                let rhs = fs + ft;
                if lhs < rhs {
                    let w = Witness {
                        violation: Violation::Translation,
                        x: x.clone(),
                        y: y.clone(),
                        alpha: Some(alpha),
                        lhs,
                        rhs,
                    };
                    return Ok(CheckReport::fail(Property::TranslationSubmodular, w));
                }
            }
        }
    }
    Ok(CheckReport::pass(Property::TranslationSubmodular))
}

/// Lattice submodular with a constant increment along the all-ones vector.
pub fn is_l_convex(f: &FunctionOracle, bx: &DiscreteBox) -> Result<CheckReport, Error> {
    let g = Grid::new(f, bx)?;
    let mut base: Option<(usize, Rational)> = None;
    for (i, x) in g.pts.iter().enumerate() {
        let up: Vec<i64> = x.iter().map(|v| v + 1).collect();
        let Some(fu) = g.get(&up) else { continue };
        let inc = fu - &g.vals[i];
        match &base {
            None => base = Some((i, inc)),
            Some((b, r)) if *r != inc => {
                let w = Witness {
                    violation: Violation::Increment,
                    x: g.pts[*b].clone(),
                    y: x.clone(),
                    alpha: None,
                    lhs: r.clone(),
                    rhs: inc,
                };
                return Ok(CheckReport::fail(Property::LConvex, w));
            }
            _ => {}
        }
    }
    let Some((_, r)) = base else { return Err(Error::NoInteriorPair) };
    if let Some(w) = lattice_witness(&g) {
        return Ok(CheckReport::fail(Property::LConvex, w));
    }
    Ok(CheckReport { increment: Some(r), ..CheckReport::pass(Property::LConvex) })
}

/// `N(y) = { z integer : |y_i - z_i| < 1 }`, clipped to the box.
fn neighborhood(bx: &DiscreteBox, y: &[Rational]) -> Vec<LatticePoint> {
    let mut pts: Vec<LatticePoint> = vec![vec![]];
    for yi in y {
        let fl = floor_i64(yi);
        let choices: Vec<i64> = if yi.is_integer() { vec![fl] } else { vec![fl, fl + 1] };
        pts = pts
            .into_iter()
            .flat_map(|p| {
                choices.iter().map(move |&c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    pts.retain(|p| bx.contains(p));
    pts
}

/// Local convex extension: `min sum lambda_z f(z)` over convex combinations
/// of `N(y)` that reproduce `y`.
pub fn continuous_extension(f: &FunctionOracle, bx: &DiscreteBox, y: &[Rational]) -> Result<Rational, Error> {
    if !bx.is_finite() {
        return Err(Error::UnboundedBox);
    }
    if y.len() != bx.dim() {
        return Err(Error::DimensionMismatch(format!("point of length {} in a {}-box", y.len(), bx.dim())));
    }
    if !bx.contains_relaxed(y) {
        return Err(Error::PointOutsideBox);
    }
    let nb = neighborhood(bx, y);
    if nb.len() == 1 {
        return Ok(f.eval(&nb[0]));
    }
    let mut p = LpProblem::minimize(nb.iter().map(|z| f.eval(z)).collect());
    for i in 0..y.len() {
        p.add_row(nb.iter().map(|z| int(z[i])).collect(), RowKind::Eq, y[i].clone());
    }
    p.add_row(vec![int(1); nb.len()], RowKind::Eq, int(1));
    let s = lp::solve(&p)?;
    match s.status {
        LpStatus::Optimal => Ok(s.objective),
        // N(y) always spans y inside the relaxed box
        _ => unreachable!("local extension LP must be feasible and bounded"),
    }
}

/// Lovász extension on the unit cube `p + [0,1]^n` inside `f`'s domain.
pub fn lovasz_extension_at(f: &FunctionOracle, p: &[i64], y: &[Rational]) -> Result<Rational, Error> {
    let n = p.len();
    if y.len() != n || f.dim() != n {
        return Err(Error::DimensionMismatch("point and cube dimensions differ".into()));
    }
    let up: Vec<i64> = p.iter().map(|v| v + 1).collect();
    if !f.domain().contains(p) || !f.domain().contains(&up) {
        return Err(Error::DomainMismatch("cube not inside the domain".into()));
    }
    let r: Vec<Rational> = y.iter().zip(p).map(|(yi, &pi)| yi - int(pi)).collect();
    if r.iter().any(|v| *v < zero() || *v > int(1)) {
        return Err(Error::DomainMismatch("point outside the cube".into()));
    }
    let delta = Permutation::sort_descending(&r);
    let mut cur = p.to_vec();
    let mut prev = f.eval(&cur);
    let mut val = prev.clone();
    for k in 0..n {
        let i = delta.at(k);
        cur[i] += 1;
        let next = f.eval(&cur);
        if !r[i].is_zero() {
            val += (&next - &prev) * &r[i];
        }
        prev = next;
    }
    Ok(val)
}

/// Lovász extension of a function whose domain is a unit cube.
pub fn lovasz_extension(f: &FunctionOracle, y: &[Rational]) -> Result<Rational, Error> {
    let (lo, hi) = f.domain().finite_bounds().map_err(|_| Error::DomainMismatch("domain is unbounded".into()))?;
    if lo.iter().zip(&hi).any(|(l, u)| u - l != 1) {
        return Err(Error::DomainMismatch(format!("{} is not a unit cube", f.domain())));
    }
    lovasz_extension_at(f, &lo, y)
}

/// Midpoint convexity of the local extension over every lattice pair:
/// `fbar((a+b)/2) <= (f(a) + f(b))/2`. Pairs at sup-distance one satisfy it
/// trivially and are skipped.
pub fn is_integrally_convex(f: &FunctionOracle, bx: &DiscreteBox) -> Result<CheckReport, Error> {
    if !bx.is_finite() {
        return Err(Error::UnboundedBox);
    }
    let count = bx.num_points()?;
    if count > INTEGRAL_CONVEXITY_LIMIT {
        return Err(Error::BoxTooLarge(format!("{count} points exceed {INTEGRAL_CONVEXITY_LIMIT}")));
    }
    let g = Grid::new(f, bx)?;
    let mut cache: HashMap<Vec<i64>, Rational> = HashMap::new();
    let mut err = None;
    let w = g.find_pair(|i, j| {
        let (a, b) = (&g.pts[i], &g.pts[j]);
        if a.iter().zip(b).all(|(s, t)| (s - t).abs() <= 1) {
            return None;
        }
        let sum: Vec<i64> = a.iter().zip(b).map(|(s, t)| s + t).collect();
        let v = match cache.get(&sum) {
            Some(v) => v.clone(),
            None => {
                let m: Vec<Rational> = sum.iter().map(|&s| rat(s, 2)).collect();
                match continuous_extension(f, bx, &m) {
                    Ok(v) => {
                        cache.insert(sum, v.clone());
                        v
                    }
                    Err(e) => {
                        err = Some(e);
                        return None;
                    }
                }
            }
        };
        let lhs = &g.vals[i] + &g.vals[j];
        let rhs = &v + &v;
        (lhs < rhs).then(|| Witness {
            violation: Violation::ExtensionMidpoint,
            x: a.clone(),
            y: b.clone(),
            alpha: None,
            lhs,
            rhs,
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(w.map_or(CheckReport::pass(Property::IntegrallyConvex), |w| CheckReport::fail(Property::IntegrallyConvex, w)))
}

/// Runs the check for `property`.
pub fn check(property: Property, f: &FunctionOracle, bx: &DiscreteBox) -> Result<CheckReport, Error> {
    match property {
        Property::MidpointConvex => is_lnat_convex(f, bx),
        Property::LatticeSubmodular => is_lattice_submodular(f, bx),
        Property::TranslationSubmodular => is_translation_submodular(f, bx),
        Property::LConvex => is_l_convex(f, bx),
        Property::IntegrallyConvex => is_integrally_convex(f, bx),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fnzoo::*;

    fn cube(n: usize, lo: i64, hi: i64) -> DiscreteBox {
        DiscreteBox::cube(n, lo, hi).unwrap()
    }

    #[test]
    fn demo_is_lnat() {
        let f = make_nonconvex_demo();
        assert!(is_lnat_convex(&f, f.domain()).unwrap().passed);
        assert!(is_integrally_convex(&f, f.domain()).unwrap().passed);
    }

    #[test]
    fn supermodular_fails_with_witness() {
        let bx = cube(2, 0, 1);
        // -x1 x2 is submodular, hence L-natural on the unit square
        let f = from_fn(bx.clone(), |x| -int(x[0] * x[1])).unwrap();
        assert!(is_lnat_convex(&f, &bx).unwrap().passed);
        let g = from_fn(bx.clone(), |x| int(x[0] * x[1])).unwrap();
        let r = is_lnat_convex(&g, &bx).unwrap();
        assert!(!r.passed);
        let w = r.witness.unwrap();
        assert_eq!((w.x.clone(), w.y.clone()), (vec![0, 1], vec![1, 0]));
        assert!(w.confirm(&g));
        let r = is_lattice_submodular(&g, &bx).unwrap();
        assert!(!r.passed && r.witness.unwrap().confirm(&g));
        let r = is_translation_submodular(&g, &bx).unwrap();
        assert_eq!(r.witness.as_ref().unwrap().alpha, Some(0));
        assert!(r.witness.unwrap().confirm(&g));
    }

    #[test]
    fn l_convexity() {
        let m = make_max_component(3);
        let r = is_l_convex(&m, &cube(3, 0, 3)).unwrap();
        assert!(r.passed);
        assert_eq!(r.increment, Some(int(1)));
        let q = vec![rat(4, 5), rat(1, 2)];
        let r = is_l_convex(&make_gen_int_mixing(q.clone()), &cube(2, -1, 1)).unwrap();
        assert!(!r.passed);
        assert!(r.witness.unwrap().confirm(&make_gen_int_mixing(q.clone())));
        let r = is_l_convex(&make_max_residual(q), &cube(2, -1, 1)).unwrap();
        assert_eq!(r.increment, Some(int(-1)));
        assert_eq!(is_l_convex(&m, &cube(3, 0, 0)), Err(Error::NoInteriorPair));
    }

    #[test]
    fn translation_submodular_mixing() {
        let f = make_gen_int_mixing(vec![rat(4, 5), rat(1, 2)]);
        assert!(is_translation_submodular(&f, &cube(2, -2, 2)).unwrap().passed);
    }

    #[test]
    fn extensions() {
        let f = make_nonconvex_demo();
        assert_eq!(continuous_extension(&f, f.domain(), &[int(2), int(1)]).unwrap(), int(39));
        // edge midpoint between (1,0) and (2,0)
        assert_eq!(continuous_extension(&f, f.domain(), &[rat(3, 2), int(0)]).unwrap(), int(25));
        let bx = cube(2, 0, 1);
        let g = from_fn(bx.clone(), |x| int(x[0].max(x[1]))).unwrap();
        let y = [rat(1, 3), rat(3, 4)];
        assert_eq!(lovasz_extension(&g, &y).unwrap(), rat(3, 4));
        assert_eq!(continuous_extension(&g, &bx, &y).unwrap(), rat(3, 4));
        assert!(matches!(lovasz_extension(&f, &y), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn dip_is_not_integrally_convex() {
        let bx = DiscreteBox::finite(&[0], &[2]).unwrap();
        let f = tabulated(bx.clone(), vec![int(0), int(2), int(1)]).unwrap();
        let r = is_integrally_convex(&f, &bx).unwrap();
        assert!(!r.passed);
        let w = r.witness.unwrap();
        assert_eq!((w.x.clone(), w.y.clone()), (vec![0], vec![2]));
        assert!(w.confirm(&f));
        let big = make_max_component(5);
        assert!(matches!(is_integrally_convex(&big, &cube(5, 0, 3)), Err(Error::BoxTooLarge(_))));
    }
}
