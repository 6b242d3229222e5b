//! Brute-force reference answers.
//!
//! Everything here enumerates lattice points of a finite box and never calls
//! the greedy machinery it is meant to check: separation is a plain LP over
//! all points, hulls are explicit generator/ray lists, and mixed-integer
//! minima come from the finitely many candidate fibre points.

use num_traits::{One, Signed};

use crate::fnzoo::FunctionOracle;
use crate::jointepi::{JointInstance, JointPoint};
use crate::lattice::{DiscreteBox, LatticePoint};
use crate::lp::{membership, solve, LpProblem, LpStatus, RowKind};
use crate::misepi::{MixedInstance, MixedObjective};
use crate::rat::{dot, int, to_rationals, zero, Rational};
use crate::Error;

/// Largest number of lattice points any oracle will enumerate.
pub const ORACLE_BUDGET: u128 = 100_000;

fn points(bx: &DiscreteBox) -> Result<Vec<LatticePoint>, Error> {
    if !bx.is_finite() {
        return Err(Error::UnboundedBox);
    }
    let count = bx.num_points()?;
    if count > ORACLE_BUDGET {
        return Err(Error::BoxTooLarge(format!("{count} lattice points exceed the oracle budget {ORACLE_BUDGET}")));
    }
    Ok(bx.lattice()?.collect())
}

/// `max { pi0 + x̂.pi : pi0 + x.pi <= f(x) for all lattice x in workbox } - ŵ`,
/// i.e. the largest violation of any valid affine minorant at `(x̂, ŵ)`.
pub fn separation_lp_optimum(
    f: &FunctionOracle,
    xhat: &[Rational],
    what: &Rational,
    workbox: &DiscreteBox,
) -> Result<Rational, Error> {
    let n = workbox.dim();
    if xhat.len() != n {
        return Err(Error::DimensionMismatch(format!("point of length {} in a {n}-box", xhat.len())));
    }
    let pts = points(workbox)?;
    if !workbox.contains_relaxed(xhat) {
        return Err(Error::PointOutsideBox);
    }
    // variables: pi_1..pi_n, pi0, all free
    let mut obj = xhat.to_vec();
    obj.push(Rational::one());
    let mut lp = LpProblem::maximize(obj);
    for j in 0..=n {
        lp.set_free(j);
    }
    for x in &pts {
        let mut row = to_rationals(x);
        row.push(Rational::one());
        lp.add_row(row, RowKind::Le, f.eval(x));
    }
    let sol = solve(&lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.objective - what),
        s => Err(Error::MalformedProblem(format!("separation LP ended {s:?}"))),
    }
}

/// A polyhedron given as `conv(generators) + cone(rays)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HullModel {
    pub generators: Vec<Vec<Rational>>,
    pub rays: Vec<Vec<Rational>>,
    pub source: DiscreteBox,
}

fn unit(d: usize, i: usize) -> Vec<Rational> {
    let mut e = vec![zero(); d];
    e[i] = Rational::one();
    e
}

impl HullModel {
    /// Epigraph of `f` on `workbox`, coordinates `(w, x)`.
    pub fn epigraph(f: &FunctionOracle, workbox: &DiscreteBox) -> Result<Self, Error> {
        if !workbox.is_subset_of(f.domain()) {
            return Err(Error::DomainMismatch(format!("{workbox} is not inside {}", f.domain())));
        }
        let generators = points(workbox)?
            .iter()
            .map(|x| {
                let mut g = vec![f.eval(x)];
                g.extend(to_rationals(x));
                g
            })
            .collect();
        Ok(HullModel { generators, rays: vec![unit(1 + workbox.dim(), 0)], source: workbox.clone() })
    }

    /// Epigraph of `max_i h^i(x) - y_i` with `y >= 0` on `workbox`,
    /// coordinates `(w, y, x)`. Over each `x` the fibre is generated by the
    /// points `w = h^j`, `y_i = max(0, h^i - h^j)`.
    pub fn mixed(inst: &MixedInstance, workbox: &DiscreteBox) -> Result<Self, Error> {
        if !workbox.is_subset_of(inst.domain()) {
            return Err(Error::DomainMismatch(format!("{workbox} is not inside {}", inst.domain())));
        }
        let n = inst.dim();
        let mut generators = Vec::new();
        for x in points(workbox)? {
            let h = inst.h_values(&x);
            for hj in &h {
                let mut g = vec![hj.clone()];
                g.extend(h.iter().map(|hi| if hi > hj { hi - hj } else { zero() }));
                g.extend(to_rationals(&x));
                generators.push(g);
            }
        }
        let d = 1 + 2 * n;
        let mut shift = vec![zero(); d];
        shift[0] = -Rational::one();
        for v in &mut shift[1..=n] {
            *v = Rational::one();
        }
        let mut rays = vec![unit(d, 0), shift];
        rays.extend((1..=n).map(|i| unit(d, i)));
        Ok(HullModel { generators, rays, source: workbox.clone() })
    }

    /// The joint epigraph over `workbox`: coordinates `(w, x)` with one `w`
    /// per function, or `(eta, w, x)` for linked instances.
    pub fn joint(inst: &JointInstance, workbox: &DiscreteBox) -> Result<Self, Error> {
        if !workbox.is_subset_of(inst.common_box()) {
            return Err(Error::DomainMismatch(format!("{workbox} is not inside {}", inst.common_box())));
        }
        let (k, n) = (inst.k(), inst.dim());
        let gs = inst.gs();
        let generators = points(workbox)?
            .iter()
            .map(|x| {
                let mut g = Vec::new();
                if let Some(gs) = gs {
                    g.extend(gs.iter().map(|gi| gi.eval(x)));
                }
                g.extend(inst.fs().iter().map(|fi| fi.eval(x)));
                g.extend(to_rationals(x));
                g
            })
            .collect();
        let rays = match gs {
            None => (0..k).map(|i| unit(k + n, i)).collect(),
            Some(_) => {
                let d = 2 * k + n;
                let mut rays: Vec<Vec<Rational>> = (0..k)
                    .map(|i| {
                        let mut r = unit(d, i);
                        r[k + i] = Rational::one();
                        r
                    })
                    .collect();
                rays.push((0..d).map(|j| if j < k { Rational::one() } else { zero() }).collect());
                rays.push((0..d).map(|j| if (k..2 * k).contains(&j) { Rational::one() } else { zero() }).collect());
                rays
            }
        };
        Ok(HullModel { generators, rays, source: workbox.clone() })
    }

    pub fn dim(&self) -> usize {
        self.generators.first().map_or(0, Vec::len)
    }

    pub fn contains(&self, point: &[Rational]) -> Result<bool, Error> {
        membership(point, &self.generators, &self.rays)
    }
}

/// Exact minimum of `c.z` over the model, with a minimizing generator.
#[derive(Debug, Clone, PartialEq)]
pub struct HullMin {
    pub value: Rational,
    pub generator: Vec<Rational>,
}

/// Linear minimum over `conv(generators) + cone(rays)`. Bounded exactly when
/// `c` is nonnegative on every ray, and then attained at a generator.
pub fn hull_min(c: &[Rational], model: &HullModel) -> Result<HullMin, Error> {
    if c.len() != model.dim() {
        return Err(Error::DimensionMismatch(format!("objective of length {} for a {}-dimensional model", c.len(), model.dim())));
    }
    if let Some(r) = model.rays.iter().find(|r| dot(c, r).is_negative()) {
        return Err(Error::UnboundedObjective(format!("objective decreases along ray {}", fmt_vec(r))));
    }
    model
        .generators
        .iter()
        .map(|g| (dot(c, g), g))
        .min_by(|a, b| a.0.cmp(&b.0))
        .map(|(value, g)| HullMin { value, generator: g.clone() })
        .ok_or_else(|| Error::InvalidInstance("model has no generators".into()))
}

fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedIntMin {
    pub value: Rational,
    pub w: Rational,
    pub y: Vec<Rational>,
    pub x: LatticePoint,
}

/// `min c_w w + c_y.y + c_x.x` over `w >= h^i(x) - y_i`, `y >= 0`, `x` in
/// `workbox`, by trying every lattice `x` and every candidate fibre point.
pub fn mixed_integer_min(inst: &MixedInstance, obj: &MixedObjective, workbox: &DiscreteBox) -> Result<MixedIntMin, Error> {
    let n = inst.dim();
    if obj.c_y.len() != n || obj.c_x.len() != n {
        return Err(Error::DimensionMismatch(format!("objective lengths {}/{} for n = {n}", obj.c_y.len(), obj.c_x.len())));
    }
    if obj.c_w.is_negative() || obj.c_y.iter().any(Signed::is_negative) {
        return Err(Error::UnboundedObjective("negative w- or y-coefficient".into()));
    }
    let total: Rational = obj.c_y.iter().sum();
    if total < obj.c_w {
        // lowering w by t and raising every y_i by t stays feasible
        return Err(Error::UnboundedObjective(format!("sum of y-coefficients {total} is below the w-coefficient {}", obj.c_w)));
    }
    if !workbox.is_subset_of(inst.domain()) {
        return Err(Error::DomainMismatch(format!("{workbox} is not inside {}", inst.domain())));
    }
    let mut best: Option<MixedIntMin> = None;
    for x in points(workbox)? {
        let h = inst.h_values(&x);
        let cx = crate::rat::dot_int(&obj.c_x, &x);
        for hj in &h {
            let y: Vec<Rational> = h.iter().map(|hi| if hi > hj { hi - hj } else { zero() }).collect();
            let value = &obj.c_w * hj + dot(&obj.c_y, &y) + &cx;
            if best.as_ref().is_none_or(|b| value < b.value) {
                best = Some(MixedIntMin { value, w: hj.clone(), y, x: x.clone() });
            }
        }
    }
    best.ok_or(Error::UnboundedBox)
}

/// `min c_w max_i h^i(x) + c_x.x` with `y` pinned to zero.
pub fn mixed_integer_min_y_zero(
    inst: &MixedInstance,
    c_w: &Rational,
    c_x: &[Rational],
    workbox: &DiscreteBox,
) -> Result<Rational, Error> {
    if c_w.is_negative() {
        return Err(Error::UnboundedObjective("negative w-coefficient".into()));
    }
    points(workbox)?
        .iter()
        .map(|x| c_w * inst.h_values(x).into_iter().max().expect("n >= 1") + crate::rat::dot_int(c_x, x))
        .min()
        .ok_or(Error::UnboundedBox)
}

/// Membership of `pt` in the enumerated hull of the joint epigraph.
pub fn joint_enumerated_membership(inst: &JointInstance, pt: &JointPoint, workbox: &DiscreteBox) -> Result<bool, Error> {
    let model = HullModel::joint(inst, workbox)?;
    let mut z = Vec::new();
    match (&pt.eta, inst.is_linked()) {
        (Some(eta), true) => z.extend(eta.iter().cloned()),
        (None, false) => {}
        _ => return Err(Error::DimensionMismatch("eta must be given exactly for linked instances".into())),
    }
    z.extend(pt.w.iter().cloned());
    z.extend(pt.x.iter().cloned());
    if z.len() != model.dim() {
        return Err(Error::DimensionMismatch(format!("point of length {} for a {}-dimensional hull", z.len(), model.dim())));
    }
    model.contains(&z)
}

/// Lattice minimum of `c_w f(x) + c_x.x` over `workbox`.
pub fn lattice_min(f: &FunctionOracle, c_w: &Rational, c_x: &[Rational], workbox: &DiscreteBox) -> Result<(Rational, LatticePoint), Error> {
    if c_w.is_negative() {
        return Err(Error::UnboundedObjective("negative w-coefficient".into()));
    }
    points(workbox)?
        .into_iter()
        .map(|x| (c_w * f.eval(&x) + crate::rat::dot_int(c_x, &x), x))
        .min_by(|a, b| a.0.cmp(&b.0))
        .ok_or(Error::UnboundedBox)
}

/// Integer vector helper for callers building objectives.
pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}
