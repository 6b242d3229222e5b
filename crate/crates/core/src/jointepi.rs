//! Joint epigraphs: several L♮-convex functions sharing the integer
//! variables `x`.
//!
//! For `Q = {(w, x) : w_i >= f_i(x)}` the convex hull is the intersection
//! of the individual epigraph hulls, because the greedy cube for `x̂`
//! depends only on `x̂` — every function is cut with the same `(p, δ)`.
//! The linked variant adds upper bounds `η_i >= g_i(x)` and the equalities
//! `η_i - w_i = η_j - w_j`; the same holds there provided `g_i - f_i` does
//! not depend on `i`.

use crate::fnzoo::FunctionOracle;
use crate::lattice::{DiscreteBox, LatticePoint};
use crate::lp::membership;
use crate::rat::{int, zero, Rational};
use crate::sepi::{build_sepi, greedy_cube, SepiCertificate};
use crate::Error;

#[derive(Debug, Clone)]
pub struct JointInstance {
    fs: Vec<FunctionOracle>,
    gs: Option<Vec<FunctionOracle>>,
}

impl JointInstance {
    /// Instance of `Q`.
    pub fn new(fs: Vec<FunctionOracle>) -> Result<Self, Error> {
        check_common(&fs, None)?;
        Ok(JointInstance { fs, gs: None })
    }

    /// Instance of `Q'`; on a finite box the common difference `g_i - f_i`
    /// is verified up front.
    pub fn linked(fs: Vec<FunctionOracle>, gs: Vec<FunctionOracle>) -> Result<Self, Error> {
        let inst = Self::linked_unchecked(fs, gs)?;
        if inst.common_box().is_finite() {
            if let LinkCheck { linked: false, witness: Some(w) } = verify_linked(&inst)? {
                return Err(Error::InvalidInstance(format!(
                    "g_{} - f_{} differs from g_1 - f_1 at {:?}",
                    w.i + 1,
                    w.i + 1,
                    w.x
                )));
            }
        }
        Ok(inst)
    }

    /// Like [`JointInstance::linked`] but without the difference check.
    pub fn linked_unchecked(fs: Vec<FunctionOracle>, gs: Vec<FunctionOracle>) -> Result<Self, Error> {
        if fs.len() != gs.len() {
            return Err(Error::InvalidInstance(format!("{} functions f but {} functions g", fs.len(), gs.len())));
        }
        check_common(&fs, Some(&gs))?;
        Ok(JointInstance { fs, gs: Some(gs) })
    }

    pub fn k(&self) -> usize {
        self.fs.len()
    }

    pub fn dim(&self) -> usize {
        self.fs[0].dim()
    }

    pub fn is_linked(&self) -> bool {
        self.gs.is_some()
    }

    pub fn fs(&self) -> &[FunctionOracle] {
        &self.fs
    }

    pub fn gs(&self) -> Option<&[FunctionOracle]> {
        self.gs.as_deref()
    }

    pub fn common_box(&self) -> &DiscreteBox {
        self.fs[0].domain()
    }
}

fn check_common(fs: &[FunctionOracle], gs: Option<&[FunctionOracle]>) -> Result<(), Error> {
    let first = fs.first().ok_or_else(|| Error::InvalidInstance("no functions".into()))?;
    let bx = first.domain();
    for g in fs.iter().chain(gs.unwrap_or(&[])) {
        if g.domain() != bx {
            return Err(Error::DomainMismatch(format!("{} vs {}", g.domain(), bx)));
        }
    }
    Ok(())
}

/// A query point `(η, w, x̂)`; `eta` is present exactly for linked instances.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPoint {
    pub eta: Option<Vec<Rational>>,
    pub w: Vec<Rational>,
    pub x: Vec<Rational>,
}

impl JointPoint {
    pub fn new(w: Vec<Rational>, x: Vec<Rational>) -> Self {
        JointPoint { eta: None, w, x }
    }

    pub fn linked(eta: Vec<Rational>, w: Vec<Rational>, x: Vec<Rational>) -> Self {
        JointPoint { eta: Some(eta), w, x }
    }
}

fn check_point(inst: &JointInstance, pt: &JointPoint) -> Result<(), Error> {
    let k = inst.k();
    if pt.w.len() != k {
        return Err(Error::DimensionMismatch(format!("w has length {}, expected {k}", pt.w.len())));
    }
    if pt.x.len() != inst.dim() {
        return Err(Error::DimensionMismatch(format!("x has length {}, expected {}", pt.x.len(), inst.dim())));
    }
    match (&pt.eta, inst.is_linked()) {
        (Some(e), true) if e.len() == k => Ok(()),
        (None, false) => Ok(()),
        (Some(_), true) => Err(Error::DimensionMismatch(format!("eta must have length {k}"))),
        (Some(_), false) => Err(Error::DimensionMismatch("eta given for an unlinked instance".into())),
        (None, true) => Err(Error::DimensionMismatch("linked instance needs eta".into())),
    }
}

/// Which epigraph a cut belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    F(usize),
    G(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointCut {
    pub target: Target,
    pub certificate: SepiCertificate,
}

/// Runs the greedy rule once for `x̂` and cuts every epigraph with the
/// shared `(p, δ)`. Only violated cuts are returned, `f`-cuts first.
pub fn separate_joint(inst: &JointInstance, pt: &JointPoint) -> Result<Vec<JointCut>, Error> {
    check_point(inst, pt)?;
    let (p, delta, lambda) = greedy_cube(inst.common_box(), &pt.x)?;
    let mut targets: Vec<(Target, &FunctionOracle, &Rational)> =
        inst.fs.iter().zip(&pt.w).enumerate().map(|(i, (f, w))| (Target::F(i), f, w)).collect();
    if let (Some(gs), Some(eta)) = (&inst.gs, &pt.eta) {
        targets.extend(gs.iter().zip(eta).enumerate().map(|(i, (g, e))| (Target::G(i), g, e)));
    }
    let mut cuts = Vec::new();
    for (target, f, value) in targets {
        let inequality = build_sepi(f, &p, &delta)?;
        let violation = inequality.rhs(&pt.x) - value;
        let certificate = SepiCertificate {
            p: p.clone(),
            delta: delta.clone(),
            inequality,
            violation,
            lambda: lambda.clone(),
        };
        if certificate.is_violated() {
            cuts.push(JointCut { target, certificate });
        }
    }
    Ok(cuts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkWitness {
    pub x: LatticePoint,
    /// Index whose difference disagrees with the first pair's.
    pub i: usize,
    pub first: Rational,
    pub other: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkCheck {
    pub linked: bool,
    pub witness: Option<LinkWitness>,
}

/// Checks pointwise over the box that `g_i - f_i` is the same for every `i`.
/// Unlinked instances trivially pass.
pub fn verify_linked(inst: &JointInstance) -> Result<LinkCheck, Error> {
    let bx = inst.common_box();
    if !bx.is_finite() {
        return Err(Error::UnboundedBox);
    }
    let Some(gs) = &inst.gs else {
        return Ok(LinkCheck { linked: true, witness: None });
    };
    for x in bx.lattice()? {
        let first = gs[0].eval(&x) - inst.fs[0].eval(&x);
        for i in 1..inst.k() {
            let other = gs[i].eval(&x) - inst.fs[i].eval(&x);
            if other != first {
                return Ok(LinkCheck { linked: false, witness: Some(LinkWitness { x, i, first, other }) });
            }
        }
    }
    Ok(LinkCheck { linked: true, witness: None })
}

/// Is `(value, x̂)` in the convex hull of `f`'s epigraph restricted to
/// `workbox`? Decided by LP over the points `(f(x), x)` and the ray `(1, 0)`.
pub fn epigraph_hull_membership(
    f: &FunctionOracle,
    workbox: &DiscreteBox,
    value: &Rational,
    x: &[Rational],
) -> Result<bool, Error> {
    if !workbox.is_finite() {
        return Err(Error::UnboundedBox);
    }
    if !workbox.is_subset_of(f.domain()) {
        return Err(Error::DomainMismatch(format!("{workbox} is not inside {}", f.domain())));
    }
    if !workbox.contains_relaxed(x) {
        return Ok(false);
    }
    let n = x.len();
    let mut point = Vec::with_capacity(n + 1);
    point.push(value.clone());
    point.extend(x.iter().cloned());
    let gens: Vec<Vec<Rational>> = workbox
        .lattice()?
        .map(|z| {
            let mut g = Vec::with_capacity(n + 1);
            g.push(f.eval(&z));
            g.extend(z.iter().map(|&v| int(v)));
            g
        })
        .collect();
    let mut ray = vec![zero(); n + 1];
    ray[0] = Rational::from_integer(1.into());
    membership(&point, &gens, &[ray])
}

/// Membership in the intersection of the individual epigraph hulls (plus
/// the difference equalities when linked).
pub fn joint_hull_membership(inst: &JointInstance, pt: &JointPoint, workbox: &DiscreteBox) -> Result<bool, Error> {
    check_point(inst, pt)?;
    if !workbox.is_finite() {
        return Err(Error::UnboundedBox);
    }
    if workbox.dim() != inst.dim() {
        return Err(Error::DimensionMismatch("workbox dimension differs from the instance".into()));
    }
    if let Some(eta) = &pt.eta {
        let d0 = &eta[0] - &pt.w[0];
        if eta.iter().zip(&pt.w).any(|(e, w)| e - w != d0) {
            return Ok(false);
        }
    }
    for (f, w) in inst.fs.iter().zip(&pt.w) {
        if !epigraph_hull_membership(f, workbox, w, &pt.x)? {
            return Ok(false);
        }
    }
    if let (Some(gs), Some(eta)) = (&inst.gs, &pt.eta) {
        for (g, e) in gs.iter().zip(eta) {
            if !epigraph_hull_membership(g, workbox, e, &pt.x)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fnzoo::{make_gen_int_mixing, scale, tabulated};
    use crate::rat::rat;
    use crate::sepi::separate_fractional_greedy;

    fn mix(q: &[(i64, i64)]) -> FunctionOracle {
        make_gen_int_mixing(q.iter().map(|&(a, b)| rat(a, b)).collect())
    }

    #[test]
    fn single_function_matches_plain_separation() {
        let f = mix(&[(4, 5), (1, 2), (1, 5)]);
        let x = vec![rat(1, 3), rat(7, 4), rat(-1, 2)];
        let inst = JointInstance::new(vec![f.clone()]).unwrap();
        let cuts = separate_joint(&inst, &JointPoint::new(vec![zero()], x.clone())).unwrap();
        let plain = separate_fractional_greedy(&f, &x, &zero()).unwrap();
        assert_eq!(cuts.len(), 1);
        assert_eq!(cuts[0].certificate, plain);
    }

    #[test]
    fn two_mixing_functions_share_the_cube() {
        let inst = JointInstance::new(vec![mix(&[(4, 5), (1, 2)]), mix(&[(3, 5), (2, 5)])]).unwrap();
        let pt = JointPoint::new(vec![zero(), zero()], vec![rat(1, 2), rat(1, 2)]);
        let cuts = separate_joint(&inst, &pt).unwrap();
        assert_eq!(cuts.len(), 2);
        assert_eq!(cuts[0].certificate.p, cuts[1].certificate.p);
        assert_eq!(cuts[0].certificate.delta, cuts[1].certificate.delta);
        // chain (0,0),(1,0),(1,1) with weights 1/2, 0, 1/2
        assert_eq!(cuts[0].certificate.violation, rat(2, 5));
        assert_eq!(cuts[1].certificate.violation, rat(3, 10));

        let tight = JointPoint::new(
            cuts.iter().map(|c| c.certificate.inequality.rhs(&pt.x)).collect(),
            pt.x.clone(),
        );
        assert!(separate_joint(&inst, &tight).unwrap().is_empty());
    }

    #[test]
    fn outside_box_is_rejected() {
        let bx = DiscreteBox::cube(1, 0, 1).unwrap();
        let f = tabulated(bx, vec![int(0), int(1)]).unwrap();
        let inst = JointInstance::new(vec![f]).unwrap();
        let err = separate_joint(&inst, &JointPoint::new(vec![zero()], vec![rat(3, 2)])).unwrap_err();
        assert_eq!(err, Error::PointOutsideBox);
    }

    #[test]
    fn linked_detection() {
        let bx = DiscreteBox::cube(2, 0, 1).unwrap();
        let f1 = tabulated(bx.clone(), vec![int(0), int(1), int(1), int(1)]).unwrap();
        let f2 = tabulated(bx.clone(), vec![int(2), int(0), int(1), int(3)]).unwrap();
        let same = JointInstance::linked(vec![f1.clone(), f2.clone()], vec![f1.clone(), f2.clone()]).unwrap();
        assert!(verify_linked(&same).unwrap().linked);

        let shift = |f: &FunctionOracle, c: i64| {
            let vals = f.domain().lattice().unwrap().map(|x| f.eval(&x) + int(c)).collect();
            tabulated(f.domain().clone(), vals).unwrap()
        };
        let shifted = JointInstance::linked(vec![f1.clone(), f2.clone()], vec![shift(&f1, 3), shift(&f2, 3)]).unwrap();
        assert!(verify_linked(&shifted).unwrap().linked);

        let g2 = scale(int(2), &f2).unwrap();
        let bad = JointInstance::linked_unchecked(vec![f1.clone(), f2.clone()], vec![f1.clone(), g2.clone()]).unwrap();
        let check = verify_linked(&bad).unwrap();
        assert!(!check.linked);
        let w = check.witness.unwrap();
        assert_eq!((w.x.clone(), w.i), (vec![0, 0], 1));
        assert_eq!((w.first, w.other), (int(0), int(2)));
        assert!(matches!(JointInstance::linked(vec![f1, f2.clone()], vec![f2.clone(), g2]), Err(Error::InvalidInstance(_))));
    }

    #[test]
    fn membership_cases() {
        let bx = DiscreteBox::cube(2, 0, 2).unwrap();
        let f1 = mix(&[(4, 5), (1, 2)]).restrict(&bx).unwrap();
        let f2 = mix(&[(3, 5), (2, 5)]).restrict(&bx).unwrap();
        let inst = JointInstance::new(vec![f1.clone(), f2.clone()]).unwrap();
        let at = |x: &[i64]| JointPoint::new(vec![f1.eval(x), f2.eval(x)], x.iter().map(|&v| int(v)).collect());
        assert!(joint_hull_membership(&inst, &at(&[1, 0]), &bx).unwrap());
        assert!(joint_hull_membership(&inst, &at(&[2, 2]), &bx).unwrap());

        // below the extension value of f1 at a fractional point
        let x = vec![rat(1, 2), rat(1, 2)];
        let lov = crate::checkers::continuous_extension(&f1, &bx, &x).unwrap();
        let lov2 = crate::checkers::continuous_extension(&f2, &bx, &x).unwrap();
        let below = JointPoint::new(vec![lov.clone() - rat(1, 100), lov2.clone()], x.clone());
        assert!(!joint_hull_membership(&inst, &below, &bx).unwrap());
        assert!(joint_hull_membership(&inst, &JointPoint::new(vec![lov, lov2], x), &bx).unwrap());
    }

    #[test]
    fn linked_membership_needs_equal_differences() {
        let bx = DiscreteBox::cube(1, 0, 1).unwrap();
        let f1 = tabulated(bx.clone(), vec![int(0), int(1)]).unwrap();
        let f2 = tabulated(bx.clone(), vec![int(1), int(0)]).unwrap();
        let inst = JointInstance::linked(vec![f1.clone(), f2.clone()], vec![f1, f2]).unwrap();
        let x = vec![int(0)];
        let ok = JointPoint::linked(vec![int(1), int(2)], vec![int(0), int(1)], x.clone());
        assert!(joint_hull_membership(&inst, &ok, &bx).unwrap());
        let off = JointPoint::linked(vec![int(1), int(3)], vec![int(0), int(1)], x);
        assert!(!joint_hull_membership(&inst, &off, &bx).unwrap());
    }
}
