//! Greedy epigraph inequalities for L♮-convex functions.
//!
//! For `p` with `p, p + 1` in the domain and an ordering `delta`, the chain
//! `p = p^0 < p^1 < ... < p^n = p + 1` (one coordinate raised per step) gives
//! the inequality
//!
//! ```text
//! w >= f(p) + sum_i [f(p^i) - f(p^(i-1))] (x - p)_delta(i)
//! ```
//!
//! which is tight at every chain point. Separation picks the unit cube
//! containing the query point and orders coordinates by fractional part.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use crate::fnzoo::FunctionOracle;
use crate::lattice::{chain, DiscreteBox, LatticePoint, LinearInequality, Permutation};
use crate::linalg::affine_rank;
use crate::lp::{minimize_over_inequalities, InequalityMin};
use crate::rat::{floor_i64, int, zero, Rational};
use crate::Error;

/// Default cap on `(n+1)! * |inner box|` for hull assembly.
pub const HULL_BUDGET: u128 = 2_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SepiCertificate {
    pub p: LatticePoint,
    pub delta: Permutation,
    pub inequality: LinearInequality,
    /// `rhs(x̂) - ŵ`; positive iff the query point is cut off.
    pub violation: Rational,
    /// Convex weights of the chain points reproducing `x̂`.
    pub lambda: Vec<Rational>,
}

impl SepiCertificate {
    pub fn is_violated(&self) -> bool {
        self.violation.is_positive()
    }
}

fn in_inner(bx: &DiscreteBox, p: &[i64]) -> bool {
    let up: Vec<i64> = p.iter().map(|v| v + 1).collect();
    bx.contains(p) && bx.contains(&up)
}

fn check_inner(bx: &DiscreteBox, p: &[i64]) -> Result<(), Error> {
    if p.len() != bx.dim() {
        return Err(Error::DimensionMismatch(format!("p has length {}, box has dimension {}", p.len(), bx.dim())));
    }
    if !in_inner(bx, p) {
        return Err(Error::PointNotInInnerBox(p.to_vec()));
    }
    Ok(())
}

/// The inequality for `(p, delta)` built from `f`'s values on the chain.
pub fn build_sepi(f: &FunctionOracle, p: &[i64], delta: &Permutation) -> Result<LinearInequality, Error> {
    check_inner(f.domain(), p)?;
    if delta.len() != p.len() {
        return Err(Error::DimensionMismatch("permutation length differs from p".into()));
    }
    let pts = chain(p, delta);
    let vals: Vec<Rational> = pts.iter().map(|z| f.eval(z)).collect();
    Ok(sepi_from_chain_values(p, delta, &vals))
}

/// Assembles the inequality from the `n + 1` chain values `f(p^0..p^n)`.
pub fn sepi_from_chain_values(p: &[i64], delta: &Permutation, vals: &[Rational]) -> LinearInequality {
    let n = p.len();
    let mut s = vec![zero(); n];
    for k in 0..n {
        s[delta.at(k)] = &vals[k + 1] - &vals[k];
    }
    let mut c = vals[0].clone();
    for (si, &pi) in s.iter().zip(p) {
        if pi != 0 {
            c -= si * int(pi);
        }
    }
    LinearInequality::epigraph(s, c)
}

/// Cube origin and ordering chosen by the greedy rule for `x̂` in `bx`.
pub fn greedy_cube(bx: &DiscreteBox, xhat: &[Rational]) -> Result<(LatticePoint, Permutation, Vec<Rational>), Error> {
    if xhat.len() != bx.dim() {
        return Err(Error::DimensionMismatch(format!("point of length {} in a {}-box", xhat.len(), bx.dim())));
    }
    if !bx.contains_relaxed(xhat) {
        return Err(Error::PointOutsideBox);
    }
    let p: LatticePoint = xhat
        .iter()
        .zip(bx.upper())
        .map(|(x, u)| match u.finite() {
            Some(u) if *x == int(u) => u - 1,
            _ => floor_i64(x),
        })
        .collect();
    check_inner(bx, &p)?;
    let r: Vec<Rational> = xhat.iter().zip(&p).map(|(x, &pi)| x - int(pi)).collect();
    let delta = Permutation::sort_descending(&r);
    let lambda = chain_weights(&r, &delta);
    Ok((p, delta, lambda))
}

/// `lambda_0 = 1 - r_delta(1)`, `lambda_k = r_delta(k) - r_delta(k+1)`,
/// `lambda_n = r_delta(n)`.
pub fn chain_weights(r: &[Rational], delta: &Permutation) -> Vec<Rational> {
    let n = r.len();
    let sorted: Vec<&Rational> = (0..n).map(|k| &r[delta.at(k)]).collect();
    let mut lam = Vec::with_capacity(n + 1);
    lam.push(if n == 0 { Rational::one() } else { Rational::one() - sorted[0] });
    for k in 1..n {
        lam.push(sorted[k - 1] - sorted[k]);
    }
    if n > 0 {
        lam.push(sorted[n - 1].clone());
    }
    lam
}

/// Exact separation over `f`'s own domain.
pub fn separate_fractional_greedy(
    f: &FunctionOracle,
    xhat: &[Rational],
    what: &Rational,
) -> Result<SepiCertificate, Error> {
    separate_in_box(f, f.domain(), xhat, what)
}

/// Exact separation with cubes taken inside `bx` (a sub-box of the domain).
pub fn separate_in_box(
    f: &FunctionOracle,
    bx: &DiscreteBox,
    xhat: &[Rational],
    what: &Rational,
) -> Result<SepiCertificate, Error> {
    let (p, delta, lambda) = greedy_cube(bx, xhat)?;
    let inequality = build_sepi(f, &p, &delta)?;
    let violation = inequality.rhs(xhat) - what;
    Ok(SepiCertificate { p, delta, inequality, violation, lambda })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Validity {
    pub valid: bool,
    /// First lattice point (lexicographic) with `f(x) < rhs(x)`.
    pub witness: Option<LatticePoint>,
}

/// `f(x) >= rhs(x)` at every lattice point of `bx`.
pub fn verify_validity(f: &FunctionOracle, ineq: &LinearInequality, bx: &DiscreteBox) -> Result<Validity, Error> {
    if !bx.is_finite() {
        return Err(Error::UnboundedBox);
    }
    for x in bx.lattice()? {
        let lhs = &ineq.w_coef * f.eval(&x);
        if lhs < ineq.rhs_int(&x) {
            return Ok(Validity { valid: false, witness: Some(x) });
        }
    }
    Ok(Validity { valid: true, witness: None })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FacetCertificate {
    /// Points in `(x, w)` space; for MISEPIs in `(w, y, x)` space.
    pub points: Vec<Vec<Rational>>,
    /// A point of the set strictly above the inequality, if one is part of
    /// the certificate.
    pub lifted: Option<Vec<Rational>>,
    pub all_tight: bool,
    pub rank: usize,
    pub required_rank: usize,
    pub rank_check: bool,
}

/// Chain points `(p^k, f(p^k))` plus `(p, f(p) + 1)`: the first `n + 1` are
/// tight, and together they span an `(n+1)`-dimensional affine hull.
pub fn facet_certificate(f: &FunctionOracle, p: &[i64], delta: &Permutation) -> Result<FacetCertificate, Error> {
    let ineq = build_sepi(f, p, delta)?;
    let n = p.len();
    let embed = |x: &[i64], w: Rational| -> Vec<Rational> {
        let mut v: Vec<Rational> = x.iter().map(|&c| int(c)).collect();
        v.push(w);
        v
    };
    let mut points = Vec::with_capacity(n + 2);
    let mut all_tight = true;
    for z in chain(p, delta) {
        let fz = f.eval(&z);
        all_tight &= ineq.rhs_int(&z) == fz;
        points.push(embed(&z, fz));
    }
    let lifted = embed(p, f.eval(p) + Rational::one());
    all_tight &= ineq.rhs_int(p) < lifted[n];
    let mut all = points.clone();
    all.push(lifted.clone());
    let rank = affine_rank(&all);
    Ok(FacetCertificate {
        points,
        lifted: Some(lifted),
        all_tight,
        rank,
        required_rank: n + 1,
        rank_check: all_tight && rank == n + 1,
    })
}

/// Bound rows `l <= x <= u` of a finite box (with `m` zero `y`-coefficients).
pub fn box_bounds(bx: &DiscreteBox, m: usize) -> Result<Vec<LinearInequality>, Error> {
    let (lo, hi) = bx.finite_bounds()?;
    let n = bx.dim();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        out.push(LinearInequality::lower_bound(m, n, i, lo[i]));
        out.push(LinearInequality::upper_bound(m, n, i, hi[i]));
    }
    Ok(out)
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Every distinct inequality over cubes of `workbox` and all orderings,
/// followed by the box bounds. Canonical duplicates are dropped; the first
/// occurrence (lexicographic `p`, then `delta`) is kept.
pub fn assemble_hull_lp(
    f: &FunctionOracle,
    workbox: &DiscreteBox,
    budget: u128,
) -> Result<Vec<LinearInequality>, Error> {
    if !workbox.is_finite() {
        return Err(Error::UnboundedBox);
    }
    if !workbox.is_subset_of(f.domain()) {
        return Err(Error::DomainMismatch(format!("{workbox} is not inside {}", f.domain())));
    }
    let n = workbox.dim();
    let mut out = Vec::new();
    if let Some(inner) = workbox.inner() {
        let work = factorial(n + 1).saturating_mul(inner.num_points()?);
        if work > budget {
            return Err(Error::BoxTooLarge(format!("{work} (p, delta) pairs exceed budget {budget}")));
        }
        let perms = Permutation::all(n);
        let mut seen = HashSet::new();
        for p in inner.lattice()? {
            for d in &perms {
                let s = build_sepi(f, &p, d)?;
                if seen.insert(s.canonicalize()?) {
                    out.push(s);
                }
            }
        }
    }
    out.extend(box_bounds(workbox, 0)?);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CuttingPlaneResult {
    pub optimum: Rational,
    /// Optimal point of the final relaxation.
    pub x: Vec<Rational>,
    pub w: Rational,
    /// An integral optimal point, when one could be read off the final cut.
    pub argmin: Option<LatticePoint>,
    pub cuts: Vec<LinearInequality>,
    pub rounds: usize,
}

/// Cutting-plane minimization of `c_x.x + c_w w` over the epigraph of `f`
/// restricted to `workbox` and `extras`.
///
/// Returns the exact optimum of the final LP relaxation. Without extras
/// this is the minimum over lattice points; with extras that cut off
/// lattice optima it is the relaxation value.
pub fn minimize_cutting_plane(
    f: &FunctionOracle,
    workbox: &DiscreteBox,
    c_x: &[Rational],
    c_w: &Rational,
    extras: &[LinearInequality],
) -> Result<CuttingPlaneResult, Error> {
    let n = workbox.dim();
    if c_x.len() != n {
        return Err(Error::DimensionMismatch(format!("objective has {} x-coefficients, box has {n}", c_x.len())));
    }
    if c_w.is_negative() {
        return Err(Error::UnboundedObjective("w-coefficient must be nonnegative".into()));
    }
    if !workbox.is_subset_of(f.domain()) {
        return Err(Error::DomainMismatch(format!("{workbox} is not inside {}", f.domain())));
    }
    let (lo, hi) = workbox.finite_bounds()?;
    let bounds = box_bounds(workbox, 0)?;
    let mut cuts: Vec<LinearInequality> = Vec::new();
    let mut seen = HashSet::new();
    let top: Vec<i64> = hi.iter().map(|u| u - 1).collect();
    for p in [lo.clone(), top] {
        if in_inner(workbox, &p) {
            let s = build_sepi(f, &p, &Permutation::identity(n))?;
            if seen.insert(s.canonicalize()?) {
                cuts.push(s);
            }
        }
    }
    let mut rounds = 0;
    loop {
        rounds += 1;
        let system: Vec<LinearInequality> = cuts.iter().chain(&bounds).chain(extras).cloned().collect();
        let (value, w, x) = match minimize_over_inequalities(&system, c_w, &[], c_x)? {
            InequalityMin::Optimal { value, w, x, .. } => (value, w, x),
            InequalityMin::Infeasible => return Err(Error::InfeasibleExtras),
            InequalityMin::Unbounded => {
                return Err(Error::UnboundedObjective("relaxation is unbounded".into()));
            }
        };
        let cert = separate_in_box(f, workbox, &x, &w)?;
        if cert.is_violated() {
            let canon = cert.inequality.canonicalize()?;
            if !seen.insert(canon) {
                unreachable!("a pooled cut cannot be violated by the LP optimum");
            }
            cuts.push(cert.inequality);
            continue;
        }
        let argmin = integral_argmin(f, &cert, extras, c_x, c_w, &value);
        return Ok(CuttingPlaneResult { optimum: value, x, w, argmin, cuts, rounds });
    }
}

/// A chain point of the final cut that attains `value` and meets `extras`.
fn integral_argmin(
    f: &FunctionOracle,
    cert: &SepiCertificate,
    extras: &[LinearInequality],
    c_x: &[Rational],
    c_w: &Rational,
    value: &Rational,
) -> Option<LatticePoint> {
    chain(&cert.p, &cert.delta).into_iter().zip(&cert.lambda).find_map(|(z, lam)| {
        if lam.is_zero() {
            return None;
        }
        let fz = f.eval(&z);
        let xz: Vec<Rational> = z.iter().map(|&v| int(v)).collect();
        let obj = crate::rat::dot(c_x, &xz) + c_w * &fz;
        let feasible = extras.iter().all(|e| !e.violation(&fz, &[], &xz).is_positive());
        (feasible && obj == *value).then_some(z)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fnzoo::*;
    use crate::rat::rat;

    fn mix() -> FunctionOracle {
        make_gen_int_mixing(vec![rat(4, 5), rat(1, 2), rat(1, 5)])
    }

    fn ident(n: usize) -> Permutation {
        Permutation::identity(n)
    }

    #[test]
    fn mixing_example_sepis() {
        let f = mix();
        let a = build_sepi(&f, &[0, 0, 1], &ident(3)).unwrap();
        assert_eq!(a, LinearInequality::epigraph(vec![rat(-3, 10), rat(-1, 2), zero()], rat(4, 5)));
        let b = build_sepi(&f, &[-1, -1, 1], &ident(3)).unwrap();
        assert_eq!(b, LinearInequality::epigraph(vec![rat(-3, 10), rat(-7, 10), zero()], rat(4, 5)));
        let c = build_sepi(&f, &[-2, -3, -1], &Permutation::from_one_based(&[3, 2, 1]).unwrap()).unwrap();
        assert!(b.same_halfspace(&c));
    }

    #[test]
    fn greedy_choices() {
        let bx = DiscreteBox::cube(2, 0, 2).unwrap();
        let f = make_max_component(2).restrict(&bx).unwrap();
        let c = separate_fractional_greedy(&f, &[rat(3, 10), rat(7, 10)], &int(1000)).unwrap();
        assert_eq!(c.p, vec![0, 0]);
        assert_eq!(c.delta.one_based(), vec![2, 1]);
        assert!(!c.is_violated());
        let c = separate_fractional_greedy(&f, &[int(2), rat(1, 2)], &int(0)).unwrap();
        assert_eq!(c.p, vec![1, 0]);
        assert_eq!(c.lambda.iter().cloned().sum::<Rational>(), int(1));
        assert!(matches!(separate_fractional_greedy(&f, &[int(3), int(0)], &int(0)), Err(Error::PointOutsideBox)));
    }

    #[test]
    fn abs_facets_and_hull() {
        let bx = DiscreteBox::finite(&[-2], &[2]).unwrap();
        let f = from_fn(bx, |x| int(x[0].abs())).unwrap();
        let cert = facet_certificate(&f, &[0], &ident(1)).unwrap();
        assert_eq!(cert.points, vec![vec![int(0), int(0)], vec![int(1), int(1)]]);
        assert_eq!(cert.rank, 2);
        assert!(cert.rank_check);
        let wb = DiscreteBox::finite(&[-1], &[1]).unwrap();
        let hull = assemble_hull_lp(&f, &wb, HULL_BUDGET).unwrap();
        assert_eq!(hull.len(), 4);
        assert_eq!(hull[0], LinearInequality::epigraph(vec![int(-1)], int(0)));
        assert_eq!(hull[1], LinearInequality::epigraph(vec![int(1)], int(0)));
    }

    #[test]
    fn mixing_facet_rank() {
        let cert = facet_certificate(&mix(), &[0, 0, 1], &ident(3)).unwrap();
        assert_eq!(cert.rank, 4);
        assert!(cert.rank_check);
    }

    #[test]
    fn constant_hull_is_one_cut() {
        let bx = DiscreteBox::cube(2, 0, 2).unwrap();
        let f = from_fn(bx.clone(), |_| rat(3, 2)).unwrap();
        let hull = assemble_hull_lp(&f, &bx, HULL_BUDGET).unwrap();
        assert_eq!(hull.len(), 1 + 4);
        assert_eq!(hull[0], LinearInequality::epigraph(vec![zero(), zero()], rat(3, 2)));
    }

    #[test]
    fn validity_of_non_lnat_sepi() {
        let bx = DiscreteBox::cube(2, 0, 2).unwrap();
        let f = from_fn(bx.clone(), |x| int(x[0] * x[1])).unwrap();
        let mut any_invalid = false;
        for p in bx.inner().unwrap().lattice().unwrap() {
            for d in Permutation::all(2) {
                let s = build_sepi(&f, &p, &d).unwrap();
                any_invalid |= !verify_validity(&f, &s, &bx).unwrap().valid;
            }
        }
        assert!(any_invalid);
    }

    #[test]
    fn cutting_plane_examples() {
        let f = mix();
        let bx = DiscreteBox::cube(3, 0, 1).unwrap();
        let zero3 = vec![zero(); 3];
        let r = minimize_cutting_plane(&f, &bx, &zero3, &int(1), &[]).unwrap();
        assert_eq!(r.optimum, zero());
        assert_eq!(r.argmin, Some(vec![1, 1, 1]));
        let budget = LinearInequality::new(zero(), vec![], vec![int(1); 3], int(-1));
        let r = minimize_cutting_plane(&f, &bx, &zero3, &int(1), &[budget]).unwrap();
        assert_eq!(r.optimum, rat(1, 2));
        let demo = make_nonconvex_demo();
        let r = minimize_cutting_plane(&demo, demo.domain(), &[zero(), zero()], &int(1), &[]).unwrap();
        assert_eq!(r.optimum, int(-1));
        assert_eq!(r.argmin, Some(vec![0, 1]));
    }
}
