//! The mixed-integer extension `H(x, y) = max_i h^i(x) - y_i` with `y >= 0`.
//!
//! The epigraph hull is cut out by inequalities `u0 w + u.y >= s.x + s0`
//! where `(s, s0)` is the greedy epigraph inequality of the aggregated
//! function
//!
//! ```text
//! F_{u0,u}(x) = min_j  u0 h^j(x) + sum_i u_i max(0, h^i(x) - h^j(x))
//! ```
//!
//! over weights `u0 <= sum u`, `(u0, u) >= 0`. Exact separation runs the
//! greedy cube rule on `x̂` and then a small LP over the weights; the weights
//! that can be optimal form the finite family `B^{-1} 1` over invertible
//! 0/1 matrices `B`.
//!
//! Two structured families are built in: the continuous mixing set
//! (`h^i = q_i - x_i` on `Z^n`) and its binary multi-capacity variant
//! (`h^i = q_i - c_i x_i` on `{0,1}^n`).
//!
//! Descending orders of `h`-values break ties by ascending index.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::checkers::is_lnat_convex;
use crate::fnzoo::{custom, from_fn, FunctionOracle};
use crate::lattice::{chain, DiscreteBox, LatticePoint, LinearInequality, Permutation};
use crate::linalg::{affine_rank, solve as solve_linear};
use crate::lp::{minimize_over_inequalities, solve, InequalityMin, LpProblem, LpStatus, RowKind};
use crate::rat::{int, zero, Rational};
use crate::sepi::{box_bounds, build_sepi, greedy_cube, FacetCertificate};
use crate::Error;

/// Default cap on `n` for enumerating the weight family.
pub const U_PRIME_GUARD: usize = 4;
/// Default cap on `|U'| * |inner box| * n!` for hull assembly.
pub const MIXED_HULL_BUDGET: u128 = 2_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `h^i = q_i - x_i` on `Z^n`.
    Cmix { q: Vec<Rational> },
    /// `h^i = q_i - c_i x_i` on `{0,1}^n`.
    Mcmix { q: Vec<Rational>, c: Vec<Rational> },
    /// Arbitrary component oracles on a common box.
    General,
}

#[derive(Clone)]
pub struct MixedInstance {
    family: Family,
    bx: DiscreteBox,
    hs: Vec<FunctionOracle>,
}

impl std::fmt::Debug for MixedInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MixedInstance").field("family", &self.family).field("box", &self.bx).finish()
    }
}

impl MixedInstance {
    /// Continuous mixing set; every `q_i` must lie in `[0, 1)`.
    pub fn cmix(q: Vec<Rational>) -> Result<Self, Error> {
        if q.is_empty() {
            return Err(Error::InvalidInstance("q is empty".into()));
        }
        if let Some(i) = q.iter().position(|v| v.is_negative() || *v >= Rational::one()) {
            return Err(Error::InvalidInstance(format!("q_{} = {} is outside [0, 1)", i + 1, q[i])));
        }
        let n = q.len();
        Ok(MixedInstance { family: Family::Cmix { q }, bx: DiscreteBox::unbounded(n), hs: Vec::new() })
    }

    /// Binary multi-capacity continuous mixing set; `c >= 0`.
    pub fn mcmix(q: Vec<Rational>, c: Vec<Rational>) -> Result<Self, Error> {
        if q.is_empty() || q.len() != c.len() {
            return Err(Error::InvalidInstance(format!("q has length {}, c has length {}", q.len(), c.len())));
        }
        if let Some(i) = c.iter().position(Signed::is_negative) {
            return Err(Error::InvalidInstance(format!("c_{} = {} is negative", i + 1, c[i])));
        }
        let n = q.len();
        let bx = DiscreteBox::cube(n, 0, 1)?;
        Ok(MixedInstance { family: Family::Mcmix { q, c }, bx, hs: Vec::new() })
    }

    /// Components given as oracles over one common box. The structural
    /// assumptions are verified by [`check_assumption`] before any hull is
    /// assembled.
    pub fn general(hs: Vec<FunctionOracle>) -> Result<Self, Error> {
        let first = hs.first().ok_or_else(|| Error::InvalidInstance("no components".into()))?;
        let bx = first.domain().clone();
        for h in &hs {
            if *h.domain() != bx {
                return Err(Error::DomainMismatch(format!("{} vs {}", h.domain(), bx)));
            }
        }
        if bx.dim() != hs.len() {
            return Err(Error::DimensionMismatch(format!("{} components over a {}-dimensional box", hs.len(), bx.dim())));
        }
        Ok(MixedInstance { family: Family::General, bx, hs })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn dim(&self) -> usize {
        self.bx.dim()
    }

    pub fn domain(&self) -> &DiscreteBox {
        &self.bx
    }

    /// `(h^1(x), ..., h^n(x))`; `x` is not range-checked.
    pub fn h_values(&self, x: &[i64]) -> Vec<Rational> {
        match &self.family {
            Family::Cmix { q } => q.iter().zip(x).map(|(qi, &xi)| qi - int(xi)).collect(),
            Family::Mcmix { q, c } => q.iter().zip(c).zip(x).map(|((qi, ci), &xi)| qi - ci * int(xi)).collect(),
            Family::General => self.hs.iter().map(|h| h.eval(x)).collect(),
        }
    }

    /// `h^i` as an oracle on the instance box.
    pub fn component(&self, i: usize) -> FunctionOracle {
        match &self.family {
            Family::General => self.hs[i].clone(),
            _ => {
                let me = self.clone();
                custom(&format!("h{}", i + 1), self.bx.clone(), move |x| me.h_values(x).swap_remove(i))
            }
        }
    }

    fn check_x(&self, x: &[i64]) -> Result<(), Error> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!("x has length {}, expected {}", x.len(), self.dim())));
        }
        if !self.bx.contains(x) {
            return Err(Error::DomainViolation(format!("{x:?} is outside {}", self.bx)));
        }
        Ok(())
    }
}

fn check_y(y: &[Rational], n: usize) -> Result<(), Error> {
    if y.len() != n {
        return Err(Error::DimensionMismatch(format!("y has length {}, expected {n}", y.len())));
    }
    if let Some(i) = y.iter().position(Signed::is_negative) {
        return Err(Error::DomainViolation(format!("y_{} = {} is negative", i + 1, y[i])));
    }
    Ok(())
}

/// `H(x, y) = max_i h^i(x) - y_i`.
pub fn eval_h(inst: &MixedInstance, x: &[i64], y: &[Rational]) -> Result<Rational, Error> {
    inst.check_x(x)?;
    check_y(y, inst.dim())?;
    Ok(inst.h_values(x).into_iter().zip(y).map(|(h, yi)| h - yi).max().expect("n >= 1"))
}

/// The `n` points `(h^j(x), max(0, h^i(x) - h^j(x))_i)` generating the
/// fibre over `x` together with [`fibre_rays`].
pub fn generators_d(inst: &MixedInstance, x: &[i64]) -> Result<Vec<(Rational, Vec<Rational>)>, Error> {
    inst.check_x(x)?;
    Ok(fibre_generators(&inst.h_values(x)))
}

fn fibre_generators(h: &[Rational]) -> Vec<(Rational, Vec<Rational>)> {
    h.iter()
        .map(|hj| (hj.clone(), h.iter().map(|hi| (hi - hj).max(zero())).collect()))
        .collect()
}

/// Recession directions `(-1, 1)`, `(1, 0)` and `(0, e_i)` in `(w, y)`.
pub fn fibre_rays(n: usize) -> Vec<(Rational, Vec<Rational>)> {
    let mut rays = vec![(-Rational::one(), vec![Rational::one(); n]), (Rational::one(), vec![zero(); n])];
    for i in 0..n {
        let mut e = vec![zero(); n];
        e[i] = Rational::one();
        rays.push((zero(), e));
    }
    rays
}

/// A weight pair `(u0, u)` with `0 <= u0 <= sum u`, `u >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector {
    pub u0: Rational,
    pub u: Vec<Rational>,
}

impl WeightVector {
    pub fn new(u0: Rational, u: Vec<Rational>) -> Result<Self, Error> {
        if u0.is_negative() {
            return Err(Error::NotInU(format!("u0 = {u0} is negative")));
        }
        if let Some(i) = u.iter().position(Signed::is_negative) {
            return Err(Error::NotInU(format!("u_{} = {} is negative", i + 1, u[i])));
        }
        let total: Rational = u.iter().sum();
        if u0 > total {
            return Err(Error::NotInU(format!("u0 = {u0} exceeds sum u = {total}")));
        }
        Ok(WeightVector { u0, u })
    }

    /// `(1, e_j)`.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut u = vec![zero(); n];
        u[j] = Rational::one();
        WeightVector { u0: Rational::one(), u }
    }

    /// `(k, 1^S)`.
    pub fn indicator(n: usize, support: &[usize], k: i64) -> Result<Self, Error> {
        let mut u = vec![zero(); n];
        for &i in support {
            u[i] = Rational::one();
        }
        WeightVector::new(int(k), u)
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }
}

/// Result of the greedy evaluation of `F_{u0,u}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FEval {
    pub value: Rational,
    /// Indices sorted by descending `h` (ties: ascending index).
    pub order: Vec<usize>,
    /// 1-based position `j*` in `order`; `None` when `u0 = 0`.
    pub j_star: Option<usize>,
    /// Whether the cumulative weight up to `j*` equals `u0` exactly.
    pub boundary: bool,
}

impl FEval {
    /// Index `(j*)` in the original labelling, 0-based.
    pub fn argmin_index(&self) -> Option<usize> {
        self.j_star.map(|j| self.order[j - 1])
    }
}

fn check_weights(wt: &WeightVector, n: usize) -> Result<(), Error> {
    if wt.dim() != n {
        return Err(Error::DimensionMismatch(format!("u has length {}, expected {n}", wt.dim())));
    }
    WeightVector::new(wt.u0.clone(), wt.u.clone()).map(|_| ())
}

/// Greedy evaluation: walk `h` in descending order until the accumulated
/// weight reaches `u0`.
pub fn eval_f(wt: &WeightVector, h: &[Rational]) -> Result<FEval, Error> {
    check_weights(wt, h.len())?;
    let order = Permutation::sort_descending(h).order().to_vec();
    if wt.u0.is_zero() {
        return Ok(FEval { value: zero(), order, j_star: None, boundary: false });
    }
    let mut cum = zero();
    for (pos, &i) in order.iter().enumerate() {
        cum += &wt.u[i];
        if cum >= wt.u0 {
            let hj = &h[i];
            let mut value = &wt.u0 * hj;
            for &l in &order[..pos] {
                value += &wt.u[l] * (&h[l] - hj);
            }
            let boundary = cum == wt.u0;
            return Ok(FEval { value, order, j_star: Some(pos + 1), boundary });
        }
    }
    unreachable!("u0 <= sum u guarantees a crossing")
}

/// `min_j u0 h_j + sum_i u_i max(0, h_i - h_j)` by direct enumeration.
pub fn eval_f_brute(wt: &WeightVector, h: &[Rational]) -> Result<Rational, Error> {
    check_weights(wt, h.len())?;
    Ok(h.iter()
        .map(|hj| {
            let mut v = &wt.u0 * hj;
            for (ui, hi) in wt.u.iter().zip(h) {
                if hi > hj {
                    v += ui * (hi - hj);
                }
            }
            v
        })
        .min()
        .expect("n >= 1"))
}

/// `F_{u0,u}` as an oracle on `bx` (which must lie inside the instance box).
pub fn f_oracle(inst: &MixedInstance, wt: &WeightVector, bx: &DiscreteBox) -> Result<FunctionOracle, Error> {
    check_weights(wt, inst.dim())?;
    if !bx.is_subset_of(&inst.bx) {
        return Err(Error::DomainMismatch(format!("{bx} is not inside {}", inst.bx)));
    }
    let (me, w) = (inst.clone(), wt.clone());
    Ok(custom("F", bx.clone(), move |x| eval_f(&w, &me.h_values(x)).expect("validated weights").value))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Misepi {
    pub weights: WeightVector,
    pub p: LatticePoint,
    pub delta: Permutation,
    /// `u0 w + u.y >= s.x + s0`.
    pub inequality: LinearInequality,
}

/// The inequality for weights `wt` anchored at the cube `(p, delta)`.
pub fn build_misepi(inst: &MixedInstance, wt: &WeightVector, p: &[i64], delta: &Permutation) -> Result<Misepi, Error> {
    let f = f_oracle(inst, wt, &inst.bx)?;
    let sepi = build_sepi(&f, p, delta)?;
    let inequality = LinearInequality::new(wt.u0.clone(), wt.u.clone(), sepi.x_coef, sepi.constant);
    Ok(Misepi { weights: wt.clone(), p: p.to_vec(), delta: delta.clone(), inequality })
}

/// Stage-1 cube plus the stage-2 weight LP for a query point.
#[derive(Debug, Clone, PartialEq)]
pub struct Separation {
    pub p: LatticePoint,
    pub delta: Permutation,
    pub lambda: Vec<Rational>,
    /// Optimal `u` with `u0 = 1`.
    pub u: Vec<Rational>,
    /// Largest violation over all inequalities with `u0 = 1` at `(p, delta)`.
    pub value: Rational,
}

/// Solves the separation problem with cubes taken inside `bx`.
pub fn solve_separation(
    inst: &MixedInstance,
    bx: &DiscreteBox,
    w: &Rational,
    y: &[Rational],
    x: &[Rational],
) -> Result<Separation, Error> {
    let n = inst.dim();
    check_y(y, n)?;
    if !bx.is_subset_of(&inst.bx) {
        return Err(Error::DomainMismatch(format!("{bx} is not inside {}", inst.bx)));
    }
    let (p, delta, lambda) = greedy_cube(bx, x)?;
    let active: Vec<(Rational, Vec<Rational>)> = chain(&p, &delta)
        .iter()
        .zip(&lambda)
        .filter(|(_, l)| !l.is_zero())
        .map(|(z, l)| (l.clone(), inst.h_values(z)))
        .collect();
    // variables: nu^k_i for each active level, then u_i
    let nk = active.len();
    let nv = nk * n + n;
    let mut obj = Vec::with_capacity(nv);
    for (l, h) in &active {
        obj.extend(h.iter().map(|hi| l * hi));
    }
    obj.extend(y.iter().map(|yi| -yi));
    let mut lp = LpProblem::maximize(obj);
    for k in 0..nk {
        let mut row = vec![zero(); nv];
        for i in 0..n {
            row[k * n + i] = Rational::one();
        }
        lp.add_row(row, RowKind::Eq, Rational::one());
        for i in 0..n {
            let mut row = vec![zero(); nv];
            row[k * n + i] = Rational::one();
            row[nk * n + i] = -Rational::one();
            lp.add_row(row, RowKind::Le, zero());
        }
    }
    let sol = solve(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::MalformedProblem(format!("separation LP ended {:?}", sol.status)));
    }
    let u = sol.x[nk * n..].to_vec();
    Ok(Separation { p, delta, lambda, u, value: sol.objective - w })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MisepiCut {
    pub misepi: Misepi,
    pub violation: Rational,
    pub lambda: Vec<Rational>,
}

/// A maximally violated inequality with `u0 = 1`, if any is violated.
pub fn separate_misepi(
    inst: &MixedInstance,
    w: &Rational,
    y: &[Rational],
    x: &[Rational],
) -> Result<Option<MisepiCut>, Error> {
    separate_misepi_in_box(inst, &inst.bx.clone(), w, y, x)
}

pub fn separate_misepi_in_box(
    inst: &MixedInstance,
    bx: &DiscreteBox,
    w: &Rational,
    y: &[Rational],
    x: &[Rational],
) -> Result<Option<MisepiCut>, Error> {
    let sep = solve_separation(inst, bx, w, y, x)?;
    if !sep.value.is_positive() {
        return Ok(None);
    }
    let wt = WeightVector::new(Rational::one(), sep.u)?;
    let misepi = build_misepi(inst, &wt, &sep.p, &sep.delta)?;
    let violation = misepi.inequality.violation(w, y, x);
    debug_assert_eq!(violation, sep.value);
    Ok(Some(MisepiCut { misepi, violation, lambda: sep.lambda }))
}

/// A weight vector of the finite family together with one generating matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct UPrimeEntry {
    pub weights: WeightVector,
    /// Support `M`, ascending.
    pub support: Vec<usize>,
    /// Rows of a matrix `B` with `B u^M = 1`.
    pub matrix: Vec<Vec<u8>>,
}

/// Every `u = B^{-1} 1 >= 0` over nonempty supports `M` and invertible 0/1
/// matrices `B`, zero off `M`, each paired with `u0 = 1`. Sorted and
/// deduplicated.
pub fn enumerate_u_prime(n: usize) -> Result<Vec<WeightVector>, Error> {
    Ok(enumerate_u_prime_with(n, U_PRIME_GUARD, false)?.into_iter().map(|e| e.weights).collect())
}

/// As [`enumerate_u_prime`], with an explicit guard and optionally keeping
/// only matrices whose rows have equal sums.
pub fn enumerate_u_prime_with(n: usize, guard: usize, equal_row_sums: bool) -> Result<Vec<UPrimeEntry>, Error> {
    if n > guard {
        return Err(Error::TooLarge(format!("weight enumeration for n = {n} exceeds the guard {guard}")));
    }
    let mut found: BTreeSet<Vec<Rational>> = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let m = support.len();
        // B u = 1 is invariant under row permutations, so row sets suffice
        let rows: Vec<u32> = (1..(1u32 << m)).collect();
        for pick in combinations(rows.len(), m) {
            let chosen: Vec<u32> = pick.iter().map(|&k| rows[k]).collect();
            if equal_row_sums && chosen.iter().any(|r| r.count_ones() != chosen[0].count_ones()) {
                continue;
            }
            let b: Vec<Vec<Rational>> = chosen
                .iter()
                .map(|r| (0..m).map(|j| int((r >> j & 1) as i64)).collect())
                .collect();
            let Some(um) = solve_linear(&b, &vec![Rational::one(); m]) else { continue };
            if um.iter().any(Signed::is_negative) {
                continue;
            }
            let mut u = vec![zero(); n];
            for (&i, v) in support.iter().zip(um) {
                u[i] = v;
            }
            if found.insert(u.clone()) {
                let matrix = chosen.iter().map(|r| (0..m).map(|j| (r >> j & 1) as u8).collect()).collect();
                out.push(UPrimeEntry { weights: WeightVector { u0: Rational::one(), u }, support: support.clone(), matrix });
            }
        }
    }
    out.sort_by(|a, b| a.weights.u.cmp(&b.weights.u));
    Ok(out)
}

fn combinations(k: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            if k - i < m - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, k, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k, m, &mut Vec::with_capacity(m), &mut out);
    out
}

/// `u = B^{-1} 1` for a square 0/1 matrix, if `B` is invertible.
pub fn weights_from_matrix(b: &[Vec<u8>]) -> Option<Vec<Rational>> {
    let rows: Vec<Vec<Rational>> = b.iter().map(|r| r.iter().map(|&v| int(v as i64)).collect()).collect();
    solve_linear(&rows, &vec![Rational::one(); b.len()])
}

fn embed(w: &Rational, y: &[Rational], x: &[i64]) -> Vec<Rational> {
    let mut v = Vec::with_capacity(1 + y.len() + x.len());
    v.push(w.clone());
    v.extend(y.iter().cloned());
    v.extend(x.iter().map(|&c| int(c)));
    v
}

fn in_epigraph(h: &[Rational], w: &Rational, y: &[Rational]) -> bool {
    y.iter().all(|v| !v.is_negative()) && h.iter().zip(y).all(|(hi, yi)| w >= &(hi - yi))
}

/// Tight points of the inequality in `(w, y, x)` space: one per chain
/// level, one per zero weight, and one extra per boundary level. The
/// inequality is a facet when these span an affine space of dimension `2n`.
pub fn facet_certificate_misepi(
    inst: &MixedInstance,
    wt: &WeightVector,
    p: &[i64],
    delta: &Permutation,
) -> Result<FacetCertificate, Error> {
    let n = inst.dim();
    if !wt.u0.is_positive() {
        return Err(Error::NotInU("a facet certificate needs u0 > 0".into()));
    }
    let mis = build_misepi(inst, wt, p, delta)?;
    let ineq = &mis.inequality;
    let levels = chain(p, delta);
    let hs: Vec<Vec<Rational>> = levels.iter().map(|z| inst.h_values(z)).collect();
    for (k, h) in hs.iter().enumerate() {
        let distinct: HashSet<&Rational> = h.iter().collect();
        if distinct.len() != n {
            return Err(Error::DistinctnessViolated(k));
        }
    }
    let fibre = |h: &[Rational], t: &Rational| -> Vec<Rational> { h.iter().map(|hi| (hi - t).max(zero())).collect() };
    let mut points = Vec::new();
    let mut extra = Vec::new();
    let mut base = None;
    for (z, h) in levels.iter().zip(&hs) {
        let ev = eval_f(wt, h)?;
        let js = ev.j_star.expect("u0 > 0");
        let wk = h[ev.order[js - 1]].clone();
        let yk = fibre(h, &wk);
        if base.is_none() {
            base = Some((wk.clone(), yk.clone()));
        }
        points.push(embed(&wk, &yk, z));
        if ev.boundary && js < n {
            let wt_k = h[ev.order[js]].clone();
            extra.push(embed(&wt_k, &fibre(h, &wt_k), z));
        }
    }
    if extra.is_empty() {
        return Err(Error::NoBoundaryLevels);
    }
    let (w0, y0) = base.expect("chain is nonempty");
    for i in (0..n).filter(|&i| wt.u[i].is_zero()) {
        let mut y = y0.clone();
        y[i] += Rational::one();
        points.push(embed(&w0, &y, p));
    }
    points.extend(extra);
    let all_tight = points.iter().all(|pt| {
        let (w, y) = (&pt[0], &pt[1..=n]);
        let x: Vec<i64> = pt[n + 1..].iter().map(|v| v.to_integer().try_into().expect("small lattice point")).collect();
        ineq.violation(w, y, &pt[n + 1..]).is_zero() && in_epigraph(&inst.h_values(&x), w, y)
    });
    let rank = affine_rank(&points);
    Ok(FacetCertificate { points, lifted: None, all_tight, rank, required_rank: 2 * n, rank_check: all_tight && rank == 2 * n })
}

/// The `2n + 2` points `(max h(p^k), 0, p^k)`, `(max h(p) + 1, 0, p)` and
/// `(max h(p), e_j, p)`; they lie in the epigraph and have affine rank
/// `2n + 1` whenever the unit cube at `p` is inside the domain.
pub fn full_dim_check(inst: &MixedInstance, p: &[i64], delta: &Permutation) -> Result<FacetCertificate, Error> {
    let n = inst.dim();
    let up: Vec<i64> = p.iter().map(|v| v + 1).collect();
    if p.len() != n || !inst.bx.contains(p) || !inst.bx.contains(&up) {
        return Err(Error::PointNotInInnerBox(p.to_vec()));
    }
    let top = |z: &[i64]| inst.h_values(z).into_iter().max().expect("n >= 1");
    let zeros = vec![zero(); n];
    let mut points: Vec<Vec<Rational>> = chain(p, delta).iter().map(|z| embed(&top(z), &zeros, z)).collect();
    let t0 = top(p);
    points.push(embed(&(&t0 + Rational::one()), &zeros, p));
    for j in 0..n {
        let mut y = zeros.clone();
        y[j] = Rational::one();
        points.push(embed(&t0, &y, p));
    }
    let all_tight = points.iter().all(|pt| {
        let x: Vec<i64> = pt[n + 1..].iter().map(|v| v.to_integer().try_into().expect("small lattice point")).collect();
        in_epigraph(&inst.h_values(&x), &pt[0], &pt[1..=n])
    });
    let rank = affine_rank(&points);
    Ok(FacetCertificate {
        points,
        lifted: None,
        all_tight,
        rank,
        required_rank: 2 * n + 1,
        rank_check: all_tight && rank == 2 * n + 1,
    })
}

/// An elementary cycle in the comparison digraph of a continuous mixing
/// instance (0-based arcs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSpec {
    arcs: Vec<(usize, usize)>,
    nodes: Vec<usize>,
    backward: Vec<usize>,
    pred: HashMap<usize, usize>,
}

impl CycleSpec {
    /// Validates `arcs` against `q`: a single self-loop, or a cycle through
    /// distinct nodes with distinct `q` along every arc.
    pub fn new(q: &[Rational], arcs: Vec<(usize, usize)>) -> Result<Self, Error> {
        let n = q.len();
        if arcs.is_empty() {
            return Err(Error::NotElementary("no arcs".into()));
        }
        if let Some(&(j, k)) = arcs.iter().find(|&&(j, k)| j >= n || k >= n) {
            return Err(Error::NotElementary(format!("arc ({}, {}) leaves the node set 1..{n}", j + 1, k + 1)));
        }
        for &(j, k) in &arcs {
            if j != k && q[j] == q[k] {
                return Err(Error::InvalidArc(j + 1, k + 1));
            }
        }
        if arcs.iter().any(|&(j, k)| j == k) {
            if arcs.len() != 1 {
                return Err(Error::NotElementary("a self-loop must be the whole cycle".into()));
            }
            let j = arcs[0].0;
            return Ok(CycleSpec { arcs, nodes: vec![j], backward: Vec::new(), pred: HashMap::from([(j, j)]) });
        }
        let mut succ = HashMap::new();
        let mut pred = HashMap::new();
        for &(j, k) in &arcs {
            if succ.insert(j, k).is_some() || pred.insert(k, j).is_some() {
                return Err(Error::NotElementary(format!("node {} has degree above one", if succ.len() < arcs.len() { j + 1 } else { k + 1 })));
            }
        }
        if succ.len() != pred.len() || succ.keys().any(|j| !pred.contains_key(j)) {
            return Err(Error::NotElementary("in- and out-degrees differ".into()));
        }
        let start = arcs[0].0;
        let (mut cur, mut steps) = (succ[&start], 1);
        while cur != start {
            cur = succ[&cur];
            steps += 1;
        }
        if steps != arcs.len() {
            return Err(Error::NotElementary("arcs form more than one cycle".into()));
        }
        let mut nodes: Vec<usize> = succ.keys().copied().collect();
        nodes.sort_unstable();
        let backward = nodes.iter().copied().filter(|&j| q[j] < q[succ[&j]]).collect();
        Ok(CycleSpec { arcs, nodes, backward, pred })
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// `N(C)`, ascending.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    /// `L(C)`: tails of arcs pointing to a larger `q`, ascending.
    pub fn backward(&self) -> &[usize] {
        &self.backward
    }

    pub fn is_self_loop(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].0 == self.arcs[0].1
    }
}

fn cmix_q(inst: &MixedInstance) -> Result<&[Rational], Error> {
    match inst.family() {
        Family::Cmix { q } => Ok(q),
        _ => Err(Error::InvalidInstance("cycle inequalities need a continuous mixing instance".into())),
    }
}

/// Sum of the per-arc terms of the cycle, as `a w + b.y >= s.x + s0`.
pub fn cycle_inequality(inst: &MixedInstance, c: &CycleSpec) -> Result<LinearInequality, Error> {
    let q = cmix_q(inst)?;
    let n = q.len();
    let (mut w, mut y, mut x, mut s0) = (zero(), vec![zero(); n], vec![zero(); n], zero());
    for &(j, k) in &c.arcs {
        y[j] += Rational::one();
        if j == k {
            w += Rational::one();
            s0 += &q[j];
            x[j] -= Rational::one();
        } else if q[j] < q[k] {
            w += Rational::one();
            s0 += &q[k];
            x[j] += &q[k] - &q[j] - Rational::one();
        } else {
            x[j] += &q[k] - &q[j];
        }
    }
    Ok(LinearInequality::new(w, y, x, s0))
}

/// Weights and cube whose inequality reproduces the cycle inequality.
pub fn misepi_from_cycle(inst: &MixedInstance, c: &CycleSpec) -> Result<(WeightVector, LatticePoint, Permutation), Error> {
    let q = cmix_q(inst)?;
    let n = q.len();
    if c.is_self_loop() {
        return Ok((WeightVector::unit(n, c.nodes[0]), vec![0; n], Permutation::identity(n)));
    }
    let u0 = int(c.backward.len() as i64);
    let wt = WeightVector::new(u0, (0..n).map(|i| if c.nodes.contains(&i) { Rational::one() } else { zero() }).collect())?;
    let p = (0..n)
        .map(|i| if c.backward.contains(&i) { -1 } else if c.nodes.contains(&i) { 0 } else { 2 })
        .collect();
    let mut by_q = c.nodes.clone();
    by_q.sort_by(|&a, &b| q[b].cmp(&q[a]));
    let mut order: Vec<usize> = by_q.iter().map(|v| c.pred[v]).collect();
    order.extend((0..n).filter(|i| !c.nodes.contains(i)));
    Ok((wt, p, Permutation::new(order)?))
}

/// Every elementary cycle of the comparison digraph on `q`, self-loops
/// first, then by node set and cyclic order.
pub fn all_elementary_cycles(q: &[Rational]) -> Result<Vec<CycleSpec>, Error> {
    let n = q.len();
    let mut out: Vec<CycleSpec> = (0..n).map(|j| CycleSpec::new(q, vec![(j, j)])).collect::<Result<_, _>>()?;
    for mask in 1u32..(1 << n) {
        let nodes: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if nodes.len() < 2 {
            continue;
        }
        // fix the smallest node first; permute the rest
        for rest in Permutation::all(nodes.len() - 1) {
            let mut cyc = vec![nodes[0]];
            cyc.extend(rest.order().iter().map(|&k| nodes[k + 1]));
            if nodes.len() == 2 && !out.is_empty() && cyc[1] < cyc[0] {
                continue;
            }
            let arcs: Vec<(usize, usize)> = (0..cyc.len()).map(|t| (cyc[t], cyc[(t + 1) % cyc.len()])).collect();
            match CycleSpec::new(q, arcs) {
                Ok(c) => out.push(c),
                Err(Error::InvalidArc(..)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

/// A linear objective `c_w w + c_y.y + c_x.x`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedObjective {
    pub c_w: Rational,
    pub c_y: Vec<Rational>,
    pub c_x: Vec<Rational>,
}

impl MixedObjective {
    /// Rejects objectives that decrease along a recession direction of the
    /// epigraph (`(1, 0, 0)`, `(-1, 1, 0)`, `(0, e_i, 0)`), and requires a
    /// positive `w`-coefficient.
    pub fn check(&self, n: usize) -> Result<(), Error> {
        if self.c_y.len() != n || self.c_x.len() != n {
            return Err(Error::DimensionMismatch(format!("objective lengths {}/{} for n = {n}", self.c_y.len(), self.c_x.len())));
        }
        if !self.c_w.is_positive() {
            return Err(Error::UnboundedObjective("the w-coefficient must be positive".into()));
        }
        if self.c_y.iter().any(Signed::is_negative) {
            return Err(Error::UnboundedObjective("negative y-coefficient along ray (0, e_i, 0)".into()));
        }
        if self.c_y.iter().sum::<Rational>() < self.c_w {
            return Err(Error::UnboundedObjective("sum of y-coefficients below the w-coefficient (ray (-1, 1, 0))".into()));
        }
        Ok(())
    }
}

/// Cheapest `(w, y)` over the fibre at `x`: by the ray check, one of the
/// `n` generators.
fn fibre_min(obj: &MixedObjective, h: &[Rational]) -> (Rational, Rational, Vec<Rational>) {
    fibre_generators(h)
        .into_iter()
        .map(|(w, y)| (&obj.c_w * &w + crate::rat::dot(&obj.c_y, &y), w, y))
        .min_by(|a, b| a.0.cmp(&b.0))
        .expect("n >= 1")
}

/// Outcome of the structural checks a general instance must pass.
#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionReport {
    pub holds: bool,
    /// First offending function, e.g. `"h2"` or `"g(1,3)"` (`max(0, h^1 - h^3)`).
    pub failure: Option<String>,
}

/// For general instances on finite boxes: every `h^j` and every
/// `max(0, h^i - h^j)` must be L♮-convex. Structured families pass by
/// construction.
pub fn check_assumption(inst: &MixedInstance, bx: &DiscreteBox) -> Result<AssumptionReport, Error> {
    if inst.family != Family::General {
        return Ok(AssumptionReport { holds: true, failure: None });
    }
    let n = inst.dim();
    for j in 0..n {
        if !is_lnat_convex(&inst.hs[j].restrict(bx)?, bx)?.passed {
            return Ok(AssumptionReport { holds: false, failure: Some(format!("h{}", j + 1)) });
        }
    }
    for j in 0..n {
        for i in (0..n).filter(|&i| i != j) {
            let g = from_fn(bx.clone(), |x| (inst.hs[i].eval(x) - inst.hs[j].eval(x)).max(zero()))?;
            if !is_lnat_convex(&g, bx)?.passed {
                return Ok(AssumptionReport { holds: false, failure: Some(format!("g({},{})", i + 1, j + 1)) });
            }
        }
    }
    Ok(AssumptionReport { holds: true, failure: None })
}

fn require_structure(inst: &MixedInstance, bx: &DiscreteBox, weights: &[WeightVector]) -> Result<(), Error> {
    if inst.family != Family::General {
        return Ok(());
    }
    let rep = check_assumption(inst, bx)?;
    if let Some(f) = rep.failure {
        return Err(Error::InvalidInstance(format!("{f} is not L♮-convex on {bx}")));
    }
    for wt in weights {
        if !is_lnat_convex(&f_oracle(inst, wt, bx)?, bx)?.passed {
            return Err(Error::InvalidInstance(format!("F for u = {:?} is not L♮-convex on {bx}", wt.u)));
        }
    }
    Ok(())
}

/// Bounds `x` in `bx` and `y >= 0` as inequalities over `(w, y, x)`.
pub fn trivial_rows(bx: &DiscreteBox) -> Result<Vec<LinearInequality>, Error> {
    let n = bx.dim();
    let mut rows: Vec<LinearInequality> = (0..n).map(|i| LinearInequality::y_nonneg(n, n, i)).collect();
    rows.extend(box_bounds(bx, n)?);
    Ok(rows)
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Every distinct inequality for `u` in the finite weight family, all cubes
/// of `workbox` and all orderings, followed by `y >= 0` and the box bounds.
pub fn assemble_misepi_hull(inst: &MixedInstance, workbox: &DiscreteBox, budget: u128) -> Result<Vec<LinearInequality>, Error> {
    if !workbox.is_finite() {
        return Err(Error::UnboundedBox);
    }
    if !workbox.is_subset_of(&inst.bx) {
        return Err(Error::DomainMismatch(format!("{workbox} is not inside {}", inst.bx)));
    }
    let n = inst.dim();
    let family = enumerate_u_prime(n)?;
    require_structure(inst, workbox, &family)?;
    let mut out = Vec::new();
    if let Some(inner) = workbox.inner() {
        let work = factorial(n).saturating_mul(inner.num_points()?).saturating_mul(family.len() as u128);
        if work > budget {
            return Err(Error::BoxTooLarge(format!("{work} (u, p, delta) triples exceed budget {budget}")));
        }
        let perms = Permutation::all(n);
        let mut seen = HashSet::new();
        for wt in &family {
            let f = f_oracle(inst, wt, workbox)?;
            for p in inner.lattice()? {
                for d in &perms {
                    let s = build_sepi(&f, &p, d)?;
                    let ineq = LinearInequality::new(wt.u0.clone(), wt.u.clone(), s.x_coef, s.constant);
                    if seen.insert(ineq.canonicalize()?) {
                        out.push(ineq);
                    }
                }
            }
        }
    }
    out.extend(trivial_rows(workbox)?);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedMinResult {
    pub optimum: Rational,
    pub w: Rational,
    pub y: Vec<Rational>,
    pub x: Vec<Rational>,
    /// An integral optimal `x`, when one could be read off the final cube.
    pub argmin: Option<LatticePoint>,
    pub cuts: Vec<LinearInequality>,
    pub rounds: usize,
}

/// Cutting-plane minimization over the epigraph of `H` restricted to
/// `workbox` and `extras`. Returns the exact optimum of the final LP.
pub fn minimize_h(
    inst: &MixedInstance,
    workbox: &DiscreteBox,
    obj: &MixedObjective,
    extras: &[LinearInequality],
) -> Result<MixedMinResult, Error> {
    let n = inst.dim();
    obj.check(n)?;
    if !workbox.is_finite() {
        return Err(Error::UnboundedBox);
    }
    if !workbox.is_subset_of(&inst.bx) {
        return Err(Error::DomainMismatch(format!("{workbox} is not inside {}", inst.bx)));
    }
    require_structure(inst, workbox, &[])?;
    let base = trivial_rows(workbox)?;
    let (lo, hi) = workbox.finite_bounds()?;
    let mut cuts = Vec::new();
    let mut seen = HashSet::new();
    // (1, e_j) cuts at the two extreme cubes keep the first LP bounded
    let top: Vec<i64> = hi.iter().map(|u| u - 1).collect();
    for p in [lo.clone(), top] {
        if !workbox.contains_cube(&p) {
            continue;
        }
        for j in 0..n {
            let m = build_misepi(inst, &WeightVector::unit(n, j), &p, &Permutation::identity(n))?;
            if seen.insert(m.inequality.canonicalize()?) {
                cuts.push(m.inequality);
            }
        }
    }
    if cuts.is_empty() {
        // a single lattice point: no cube fits, solve the fibre directly
        let (value, w, y) = fibre_min(obj, &inst.h_values(&lo));
        let x: Vec<Rational> = lo.iter().map(|&v| int(v)).collect();
        let optimum = value + crate::rat::dot(&obj.c_x, &x);
        if extras.iter().any(|e| e.violation(&w, &y, &x).is_positive()) {
            return Err(Error::InfeasibleExtras);
        }
        return Ok(MixedMinResult { optimum, w, y, x, argmin: Some(lo), cuts, rounds: 0 });
    }
    let mut rounds = 0;
    loop {
        rounds += 1;
        let system: Vec<LinearInequality> = cuts.iter().chain(&base).chain(extras).cloned().collect();
        let (value, w, y, x) = match minimize_over_inequalities(&system, &obj.c_w, &obj.c_y, &obj.c_x)? {
            InequalityMin::Optimal { value, w, y, x } => (value, w, y, x),
            InequalityMin::Infeasible => return Err(Error::InfeasibleExtras),
            InequalityMin::Unbounded => return Err(Error::UnboundedObjective("relaxation is unbounded".into())),
        };
        if let Some(cut) = separate_misepi_in_box(inst, workbox, &w, &y, &x)? {
            let ineq = cut.misepi.inequality;
            require_structure(inst, workbox, std::slice::from_ref(&cut.misepi.weights))?;
            if !seen.insert(ineq.canonicalize()?) {
                unreachable!("a pooled cut cannot be violated by the LP optimum");
            }
            cuts.push(ineq);
            continue;
        }
        let argmin = if extras.is_empty() {
            let (p, delta, lambda) = greedy_cube(workbox, &x)?;
            chain(&p, &delta).into_iter().zip(&lambda).find_map(|(z, l)| {
                if l.is_zero() {
                    return None;
                }
                let zr: Vec<Rational> = z.iter().map(|&v| int(v)).collect();
                let v = fibre_min(obj, &inst.h_values(&z)).0 + crate::rat::dot(&obj.c_x, &zr);
                (v == value).then_some(z)
            })
        } else {
            x.iter().all(|v| v.is_integer()).then(|| x.iter().map(|v| v.to_integer().try_into().expect("small")).collect())
        };
        return Ok(MixedMinResult { optimum: value, w, y, x, argmin, cuts, rounds });
    }
}

/// Shared handle used by callers that evaluate many weights at once.
pub type SharedInstance = Arc<MixedInstance>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn r(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(a, b)| rat(a, b)).collect()
    }

    fn cmix4() -> MixedInstance {
        MixedInstance::cmix(r(&[(4, 5), (1, 2), (1, 5), (1, 10)])).unwrap()
    }

    fn mcmix4() -> MixedInstance {
        MixedInstance::mcmix(r(&[(2, 1), (1, 2), (4, 1), (11, 4)]), r(&[(3, 1), (1, 1), (4, 1), (5, 2)])).unwrap()
    }

    #[test]
    fn h_and_generators() {
        let inst = MixedInstance::cmix(r(&[(4, 5), (1, 2)])).unwrap();
        assert_eq!(eval_h(&inst, &[0, 0], &[zero(), zero()]).unwrap(), rat(4, 5));
        let g = generators_d(&inst, &[0, 0]).unwrap();
        assert_eq!(g[0], (rat(4, 5), vec![zero(), zero()]));
        assert_eq!(g[1], (rat(1, 2), vec![rat(3, 10), zero()]));
        for (w, y) in &g {
            assert!(eval_h(&inst, &[0, 0], y).unwrap() <= *w);
        }
        assert_eq!(eval_h(&mcmix4(), &[0; 4], &[zero(), zero(), zero(), zero()]).unwrap(), int(4));
        assert!(matches!(eval_h(&inst, &[0, 0], &[int(-1), zero()]), Err(Error::DomainViolation(_))));
        assert!(matches!(eval_h(&mcmix4(), &[2, 0, 0, 0], &vec![zero(); 4]), Err(Error::DomainViolation(_))));
    }

    #[test]
    fn f_examples() {
        let wt = WeightVector::new(int(1), r(&[(3, 10), (6, 5), (7, 10)])).unwrap();
        let e = eval_f(&wt, &r(&[(4, 5), (1, 2), (1, 10)])).unwrap();
        assert_eq!((e.j_star, e.value.clone()), (Some(2), rat(59, 100)));
        let e = eval_f(&wt, &r(&[(-1, 5), (-1, 2), (1, 10)])).unwrap();
        assert_eq!((e.j_star, e.value.clone(), e.boundary), (Some(2), rat(1, 100), true));
        // u_(1) = 1.2 already covers u0: first position
        let e = eval_f(&wt, &r(&[(-1, 5), (1, 2), (1, 10)])).unwrap();
        assert_eq!(e.j_star, Some(1));
        let wt = WeightVector::indicator(4, &[0, 2, 3], 2).unwrap();
        assert_eq!(eval_f(&wt, &r(&[(4, 5), (-3, 2), (6, 5), (11, 10)])).unwrap().value, rat(23, 10));
        assert!(matches!(WeightVector::new(int(3), vec![int(1), int(1)]), Err(Error::NotInU(_))));
    }

    #[test]
    fn cycle_example() {
        let inst = cmix4();
        let c = CycleSpec::new(inst_q(&inst), vec![(0, 3), (3, 2), (2, 0)]).unwrap();
        let (wt, p, delta) = misepi_from_cycle(&inst, &c).unwrap();
        assert_eq!(wt, WeightVector::indicator(4, &[0, 2, 3], 2).unwrap());
        assert_eq!(p, vec![0, 2, -1, -1]);
        assert_eq!(delta.one_based(), vec![3, 4, 1, 2]);
        let vals: Vec<Rational> =
            chain(&p, &delta).iter().map(|z| eval_f(&wt, &inst.h_values(z)).unwrap().value).collect();
        assert_eq!(vals, r(&[(23, 10), (19, 10), (1, 1), (3, 10), (3, 10)]));
        let m = build_misepi(&inst, &wt, &p, &delta).unwrap();
        let expected = LinearInequality::new(
            int(2),
            vec![int(1), zero(), int(1), int(1)],
            r(&[(-7, 10), (0, 1), (-2, 5), (-9, 10)]),
            int(1),
        );
        assert_eq!(m.inequality, expected);
        assert_eq!(cycle_inequality(&inst, &c).unwrap(), expected);
    }

    fn inst_q(inst: &MixedInstance) -> &[Rational] {
        match inst.family() {
            Family::Cmix { q } => q,
            _ => unreachable!(),
        }
    }

    #[test]
    fn self_loop_and_two_cycle() {
        let inst = cmix4();
        let q = inst_q(&inst).to_vec();
        let c = CycleSpec::new(&q, vec![(1, 1)]).unwrap();
        let ineq = cycle_inequality(&inst, &c).unwrap();
        assert_eq!(ineq, LinearInequality::new(int(1), vec![zero(), int(1), zero(), zero()], vec![zero(), int(-1), zero(), zero()], rat(1, 2)));
        let (wt, p, d) = misepi_from_cycle(&inst, &c).unwrap();
        assert_eq!(build_misepi(&inst, &wt, &p, &d).unwrap().inequality, ineq);

        let c = CycleSpec::new(&q, vec![(0, 1), (1, 0)]).unwrap();
        let ineq = cycle_inequality(&inst, &c).unwrap();
        // w + y1 + y2 >= q1 + (q1 - q2 - 1) x2 + (q2 - q1) x1
        assert_eq!(ineq, LinearInequality::new(int(1), vec![int(1), int(1), zero(), zero()], r(&[(-3, 10), (-7, 10), (0, 1), (0, 1)]), rat(4, 5)));
        let (wt, p, d) = misepi_from_cycle(&inst, &c).unwrap();
        assert!(build_misepi(&inst, &wt, &p, &d).unwrap().inequality.same_halfspace(&ineq));
    }

    #[test]
    fn invalid_cycles() {
        let q = r(&[(1, 2), (1, 2), (1, 5)]);
        assert_eq!(CycleSpec::new(&q, vec![(0, 1), (1, 0)]).unwrap_err(), Error::InvalidArc(1, 2));
        assert!(matches!(CycleSpec::new(&q, vec![(0, 2), (2, 1)]), Err(Error::NotElementary(_))));
        assert!(matches!(CycleSpec::new(&q, vec![(0, 0), (2, 2)]), Err(Error::NotElementary(_))));
    }

    #[test]
    fn all_cycles_round_trip() {
        let inst = cmix4();
        let cycles = all_elementary_cycles(inst_q(&inst)).unwrap();
        // 4 loops, 6 two-cycles, 4 * 2 three-cycles, 6 four-cycles
        assert_eq!(cycles.len(), 4 + 6 + 8 + 6);
        for c in &cycles {
            let (wt, p, d) = misepi_from_cycle(&inst, c).unwrap();
            let m = build_misepi(&inst, &wt, &p, &d).unwrap();
            assert!(m.inequality.same_halfspace(&cycle_inequality(&inst, c).unwrap()), "{c:?}");
        }
    }

    #[test]
    fn u_prime_small() {
        let one = enumerate_u_prime(1).unwrap();
        assert_eq!(one, vec![WeightVector { u0: int(1), u: vec![int(1)] }]);
        let two: Vec<Vec<Rational>> = enumerate_u_prime(2).unwrap().into_iter().map(|w| w.u).collect();
        assert_eq!(two, vec![vec![int(0), int(1)], vec![int(1), int(0)], vec![int(1), int(1)]]);
        assert!(matches!(enumerate_u_prime(5), Err(Error::TooLarge(_))));
    }

    #[test]
    fn mcmix_facet_example() {
        let inst = mcmix4();
        let b = vec![vec![1, 1, 0, 0], vec![1, 0, 1, 0], vec![1, 0, 0, 1], vec![0, 1, 1, 1]];
        let u = weights_from_matrix(&b).unwrap();
        assert_eq!(u, r(&[(2, 3), (1, 3), (1, 3), (1, 3)]));
        assert!(enumerate_u_prime(4).unwrap().iter().any(|w| w.u == u));
        let wt = WeightVector::new(int(1), u.clone()).unwrap();
        let delta = Permutation::from_one_based(&[4, 3, 2, 1]).unwrap();
        let m = build_misepi(&inst, &wt, &[0; 4], &delta).unwrap();
        let expected = LinearInequality::new(int(1), u, r(&[(-3, 2), (-1, 12), (-7, 6), (-1, 4)]), rat(35, 12));
        assert_eq!(m.inequality, expected);
        let cert = facet_certificate_misepi(&inst, &wt, &[0; 4], &delta).unwrap();
        assert!(cert.all_tight);
        assert_eq!(cert.rank, 8);
        assert!(cert.rank_check);
        assert!(full_dim_check(&inst, &[0; 4], &delta).unwrap().rank_check);
    }

    #[test]
    fn top_level_indicator_is_facet() {
        let inst = cmix4();
        let (p, delta) = (vec![0, 0, 0, 0], Permutation::identity(4));
        let mut m: Vec<usize> = chain(&p, &delta)
            .iter()
            .map(|z| Permutation::sort_descending(&inst.h_values(z)).at(0))
            .collect();
        m.sort_unstable();
        m.dedup();
        let wt = WeightVector::indicator(4, &m, 1).unwrap();
        assert!(facet_certificate_misepi(&inst, &wt, &p, &delta).unwrap().rank_check);
        let tied = MixedInstance::cmix(r(&[(1, 2), (1, 2)])).unwrap();
        assert_eq!(
            facet_certificate_misepi(&tied, &WeightVector::unit(2, 0), &[0, 0], &Permutation::identity(2)).unwrap_err(),
            Error::DistinctnessViolated(0)
        );
    }

    #[test]
    fn weight_special_cases() {
        let inst = cmix4();
        let m = build_misepi(&inst, &WeightVector::new(zero(), vec![zero(), int(1), zero(), zero()]).unwrap(), &[0; 4], &Permutation::identity(4)).unwrap();
        assert_eq!(m.inequality, LinearInequality::y_nonneg(4, 4, 1));
        let m = build_misepi(&inst, &WeightVector::unit(4, 2), &[3, -1, 0, 5], &Permutation::from_one_based(&[2, 4, 1, 3]).unwrap()).unwrap();
        assert_eq!(m.inequality, LinearInequality::new(int(1), vec![zero(), zero(), int(1), zero()], vec![zero(), zero(), int(-1), zero()], rat(1, 5)));
    }

    #[test]
    fn separation_inside_and_outside() {
        let inst = MixedInstance::cmix(r(&[(4, 5), (1, 2)])).unwrap();
        let x = vec![rat(1, 2), rat(1, 2)];
        // well above the hull
        assert!(separate_misepi(&inst, &int(5), &[zero(), zero()], &x).unwrap().is_none());
        let cut = separate_misepi(&inst, &zero(), &[zero(), zero()], &x).unwrap().unwrap();
        assert!(cut.violation.is_positive());
        assert_eq!(cut.misepi.weights.u0, int(1));
        // integral point: the single-level LP reduces to F at x
        let xi = vec![int(0), int(0)];
        let sep = solve_separation(&inst, &inst.domain().clone(), &zero(), &[zero(), zero()], &xi).unwrap();
        let wt = WeightVector::new(int(1), sep.u.clone()).unwrap();
        assert_eq!(sep.value, eval_f(&wt, &inst.h_values(&[0, 0])).unwrap().value);
    }

    #[test]
    fn minimize_small() {
        let inst = MixedInstance::cmix(r(&[(4, 5), (1, 2)])).unwrap();
        let bx = DiscreteBox::cube(2, 0, 1).unwrap();
        let obj = MixedObjective { c_w: int(1), c_y: vec![int(1), int(1)], c_x: vec![zero(), zero()] };
        let res = minimize_h(&inst, &bx, &obj, &[]).unwrap();
        // at x = (1, 1) the cheapest fibre point has value max h = -1/5
        assert_eq!(res.optimum, rat(-1, 5));
        assert_eq!(res.argmin, Some(vec![1, 1]));
        let bad = MixedObjective { c_w: zero(), ..obj.clone() };
        assert!(matches!(minimize_h(&inst, &bx, &bad, &[]), Err(Error::UnboundedObjective(_))));
    }

    #[test]
    fn general_assumption_check() {
        let bx = DiscreteBox::cube(2, 0, 2).unwrap();
        let h1 = from_fn(bx.clone(), |x| int(3 - x[0])).unwrap();
        let h2 = from_fn(bx.clone(), |x| int(2 - x[1])).unwrap();
        let ok = MixedInstance::general(vec![h1.clone(), h2]).unwrap();
        assert!(check_assumption(&ok, &bx).unwrap().holds);
        let h3 = from_fn(bx.clone(), |x| int(x[0] * x[1])).unwrap();
        let bad = MixedInstance::general(vec![h1, h3]).unwrap();
        let rep = check_assumption(&bad, &bx).unwrap();
        assert!(!rep.holds);
        assert_eq!(rep.failure.as_deref(), Some("h2"));
        assert!(matches!(assemble_misepi_hull(&bad, &bx, MIXED_HULL_BUDGET), Err(Error::InvalidInstance(_))));
    }
}
