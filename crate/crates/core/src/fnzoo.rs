//! Function oracles with a known structural class.
//!
//! Every oracle carries the box it is defined on and a [`Kind`] describing
//! how it evaluates. Constructors validate their convexity preconditions
//! eagerly, so an oracle that exists is an honest fixture.

use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use crate::lattice::{Bound, DiscreteBox};
use crate::rat::{dot_int, int, zero, Rational};
use crate::Error;

/// A univariate function tabulated on `start, start + 1, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnivariateTable {
    pub start: i64,
    pub values: Vec<Rational>,
}

impl UnivariateTable {
    pub fn new(start: i64, values: Vec<Rational>) -> Self {
        Self { start, values }
    }

    pub fn from_fn(lo: i64, hi: i64, f: impl Fn(i64) -> Rational) -> Self {
        Self { start: lo, values: (lo..=hi).map(f).collect() }
    }

    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn get(&self, t: i64) -> Option<&Rational> {
        let k = t.checked_sub(self.start)?;
        usize::try_from(k).ok().and_then(|k| self.values.get(k))
    }

    /// `f(t-1) + f(t+1) >= 2 f(t)` on the tabulated range; returns the first
    /// violating `t`.
    pub fn convexity_violation(&self) -> Option<i64> {
        self.values.windows(3).position(|w| &w[0] + &w[2] < &w[1] + &w[1]).map(|k| self.start + k as i64 + 1)
    }
}

#[derive(Clone)]
pub enum Kind {
    /// Values in lexicographic order of the (finite) box.
    Tabulated(Vec<Rational>),
    /// `max(0, max_i q_i - x_i)`.
    GenIntMixing(Vec<Rational>),
    /// `max_i q_i - x_i` (no truncation at zero); L-convex with `r = -1`.
    MaxResidual(Vec<Rational>),
    /// `max_i x_i`.
    MaxComponent,
    /// `f(x_1 - x_2)` for a discretely convex univariate `f`.
    BivariateDiff(UnivariateTable),
    /// `x^T Q x + b^T x`.
    Quadratic { q: Vec<Vec<Rational>>, b: Vec<Rational> },
    /// `max(a.x + a0, b.x + b0)`.
    AffineMaxPair { a: Vec<Rational>, a0: Rational, b: Vec<Rational>, b0: Rational },
    /// `alpha * g(x)`.
    Scaled(Rational, Arc<FunctionOracle>),
    /// `g(a + beta x)`.
    Dilated { a: Vec<i64>, beta: i64, inner: Arc<FunctionOracle> },
    Sum(Arc<FunctionOracle>, Arc<FunctionOracle>),
    Custom { name: String, eval: Arc<dyn Fn(&[i64]) -> Rational + Send + Sync> },
}

impl fmt::Debug for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Tabulated(v) => write!(f, "Tabulated({} values)", v.len()),
            Kind::GenIntMixing(q) => f.debug_tuple("GenIntMixing").field(q).finish(),
            Kind::MaxResidual(q) => f.debug_tuple("MaxResidual").field(q).finish(),
            Kind::MaxComponent => write!(f, "MaxComponent"),
            Kind::BivariateDiff(t) => f.debug_tuple("BivariateDiff").field(t).finish(),
            Kind::Quadratic { q, b } => f.debug_struct("Quadratic").field("q", q).field("b", b).finish(),
            Kind::AffineMaxPair { a, a0, b, b0 } => f
                .debug_struct("AffineMaxPair")
                .field("a", a)
                .field("a0", a0)
                .field("b", b)
                .field("b0", b0)
                .finish(),
            Kind::Scaled(s, g) => f.debug_tuple("Scaled").field(s).field(g).finish(),
            Kind::Dilated { a, beta, inner } => {
                f.debug_struct("Dilated").field("a", a).field("beta", beta).field("inner", inner).finish()
            }
            Kind::Sum(g, h) => f.debug_tuple("Sum").field(g).field(h).finish(),
            Kind::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

/// Coarse structural tag, as reported to users.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tag {
    Tabulated,
    GenIntMixing,
    MaxResidual,
    MaxComponent,
    BivariateConvexDiff,
    QuadraticMMatrix,
    AffineMaxPair,
    Composite,
    Custom,
}

#[derive(Debug, Clone)]
pub struct FunctionOracle {
    bx: DiscreteBox,
    kind: Kind,
}

impl FunctionOracle {
    pub fn domain(&self) -> &DiscreteBox {
        &self.bx
    }

    pub fn dim(&self) -> usize {
        self.bx.dim()
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn tag(&self) -> Tag {
        match self.kind {
            Kind::Tabulated(_) => Tag::Tabulated,
            Kind::GenIntMixing(_) => Tag::GenIntMixing,
            Kind::MaxResidual(_) => Tag::MaxResidual,
            Kind::MaxComponent => Tag::MaxComponent,
            Kind::BivariateDiff(_) => Tag::BivariateConvexDiff,
            Kind::Quadratic { .. } => Tag::QuadraticMMatrix,
            Kind::AffineMaxPair { .. } => Tag::AffineMaxPair,
            Kind::Scaled(..) | Kind::Dilated { .. } | Kind::Sum(..) => Tag::Composite,
            Kind::Custom { .. } => Tag::Custom,
        }
    }

    /// Evaluates at `x`, which must lie in the domain.
    pub fn eval(&self, x: &[i64]) -> Rational {
        debug_assert!(self.bx.contains(x), "{x:?} outside {}", self.bx);
        match &self.kind {
            Kind::Tabulated(v) => v[self.bx.index_of(x).expect("point outside tabulated box")].clone(),
            Kind::GenIntMixing(q) => {
                q.iter().zip(x).map(|(qi, &xi)| qi - int(xi)).fold(zero(), |m, v| if v > m { v } else { m })
            }
            Kind::MaxResidual(q) => q
                .iter()
                .zip(x)
                .map(|(qi, &xi)| qi - int(xi))
                .reduce(|m, v| if v > m { v } else { m })
                .expect("nonempty"),
            Kind::MaxComponent => int(*x.iter().max().expect("nonempty")),
            Kind::BivariateDiff(t) => t.get(x[0] - x[1]).expect("difference outside table").clone(),
            Kind::Quadratic { q, b } => {
                let mut v = dot_int(b, x);
                for (i, row) in q.iter().enumerate() {
                    if x[i] == 0 {
                        continue;
                    }
                    v += dot_int(row, x) * int(x[i]);
                }
                v
            }
            Kind::AffineMaxPair { a, a0, b, b0 } => {
                let va = dot_int(a, x) + a0;
                let vb = dot_int(b, x) + b0;
                if va >= vb {
                    va
                } else {
                    vb
                }
            }
            Kind::Scaled(s, g) => s * g.eval(x),
            Kind::Dilated { a, beta, inner } => {
                let z: Vec<i64> = a.iter().zip(x).map(|(ai, xi)| ai + beta * xi).collect();
                inner.eval(&z)
            }
            Kind::Sum(g, h) => g.eval(x) + h.eval(x),
            Kind::Custom { eval, .. } => eval(x),
        }
    }

    /// Same function, restricted to a smaller box.
    pub fn restrict(&self, bx: &DiscreteBox) -> Result<FunctionOracle, Error> {
        if !bx.is_subset_of(&self.bx) {
            return Err(Error::DomainMismatch(format!("{bx} is not inside {}", self.bx)));
        }
        Ok(match &self.kind {
            Kind::Tabulated(_) => {
                let values = bx.lattice()?.map(|x| self.eval(&x)).collect();
                FunctionOracle { bx: bx.clone(), kind: Kind::Tabulated(values) }
            }
            k => FunctionOracle { bx: bx.clone(), kind: k.clone() },
        })
    }

    /// Table of values over a finite box, in lexicographic order.
    pub fn tabulate(&self) -> Result<FunctionOracle, Error> {
        let values = self.bx.lattice()?.map(|x| self.eval(&x)).collect();
        Ok(FunctionOracle { bx: self.bx.clone(), kind: Kind::Tabulated(values) })
    }
}

fn check_dim(what: &str, got: usize, want: usize) -> Result<(), Error> {
    if got != want {
        return Err(Error::DimensionMismatch(format!("{what} has length {got}, expected {want}")));
    }
    Ok(())
}

pub fn tabulated(bx: DiscreteBox, values: Vec<Rational>) -> Result<FunctionOracle, Error> {
    let count = bx.num_points()?;
    if count != values.len() as u128 {
        return Err(Error::DimensionMismatch(format!("{} values for a box of {count} points", values.len())));
    }
    Ok(FunctionOracle { bx, kind: Kind::Tabulated(values) })
}

/// Tabulates `f` over a finite box.
pub fn from_fn(bx: DiscreteBox, f: impl Fn(&[i64]) -> Rational) -> Result<FunctionOracle, Error> {
    let values = bx.lattice()?.map(|x| f(&x)).collect();
    Ok(FunctionOracle { bx, kind: Kind::Tabulated(values) })
}

/// A closure-backed oracle; no structural guarantees.
pub fn custom(
    name: &str,
    bx: DiscreteBox,
    f: impl Fn(&[i64]) -> Rational + Send + Sync + 'static,
) -> FunctionOracle {
    FunctionOracle { bx, kind: Kind::Custom { name: name.to_string(), eval: Arc::new(f) } }
}

pub fn make_gen_int_mixing(q: Vec<Rational>) -> FunctionOracle {
    FunctionOracle { bx: DiscreteBox::unbounded(q.len()), kind: Kind::GenIntMixing(q) }
}

pub fn make_max_residual(q: Vec<Rational>) -> FunctionOracle {
    FunctionOracle { bx: DiscreteBox::unbounded(q.len()), kind: Kind::MaxResidual(q) }
}

pub fn make_max_component(n: usize) -> FunctionOracle {
    FunctionOracle { bx: DiscreteBox::unbounded(n), kind: Kind::MaxComponent }
}

/// `g(x) = f(x_1 - x_2)` on `bx`. The table must cover every difference
/// reachable in the box and be discretely convex.
pub fn make_bivariate_diff(table: UnivariateTable, bx: DiscreteBox) -> Result<FunctionOracle, Error> {
    check_dim("box", bx.dim(), 2)?;
    if table.values.is_empty() {
        return Err(Error::DomainMismatch("empty table".into()));
    }
    if let Some(t) = table.convexity_violation() {
        return Err(Error::NotDiscretelyConvex(t));
    }
    let (lo, hi) = bx.finite_bounds()?;
    let (dmin, dmax) = (lo[0] - hi[1], hi[0] - lo[1]);
    if dmin < table.start || dmax > table.end() {
        return Err(Error::DomainMismatch(format!(
            "differences range over [{dmin},{dmax}] but the table covers [{},{}]",
            table.start,
            table.end()
        )));
    }
    Ok(FunctionOracle { bx, kind: Kind::BivariateDiff(table) })
}

/// `x^T Q x + b^T x` with `Q` a symmetric, diagonally dominant M-matrix.
pub fn make_quadratic(q: Vec<Vec<Rational>>, b: Vec<Rational>, bx: DiscreteBox) -> Result<FunctionOracle, Error> {
    let n = bx.dim();
    check_dim("Q", q.len(), n)?;
    check_dim("b", b.len(), n)?;
    for (i, row) in q.iter().enumerate() {
        check_dim("Q row", row.len(), n)?;
        let mut off = zero();
        for (j, v) in row.iter().enumerate() {
            if i == j {
                continue;
            }
            if *v != q[j][i] {
                return Err(Error::NotMMatrix(format!("Q[{i}][{j}] != Q[{j}][{i}]")));
            }
            if v.is_positive() {
                return Err(Error::NotMMatrix(format!("positive off-diagonal Q[{i}][{j}]")));
            }
            off -= v;
        }
        if row[i] < off {
            return Err(Error::NotMMatrix(format!("row {i} is not diagonally dominant")));
        }
    }
    Ok(FunctionOracle { bx, kind: Kind::Quadratic { q, b } })
}

/// `10 x_1^2 - x_2^2` on `[0,2] x [0,1]`: nonconvex as a polynomial, yet
/// L♮-convex on this box.
pub fn make_nonconvex_demo() -> FunctionOracle {
    let bx = DiscreteBox::finite(&[0, 0], &[2, 1]).expect("valid box");
    from_fn(bx, |x| int(10 * x[0] * x[0] - x[1] * x[1])).expect("finite box")
}

/// `alpha * g` for `alpha > 0`.
pub fn scale(alpha: Rational, g: &FunctionOracle) -> Result<FunctionOracle, Error> {
    if !alpha.is_positive() {
        return Err(Error::InvalidInstance("scale factor must be positive".into()));
    }
    Ok(FunctionOracle { bx: g.bx.clone(), kind: Kind::Scaled(alpha, Arc::new(g.clone())) })
}

/// `x -> g(a + beta x)` on the preimage of `g`'s box.
pub fn dilate(a: Vec<i64>, beta: i64, g: &FunctionOracle) -> Result<FunctionOracle, Error> {
    check_dim("a", a.len(), g.dim())?;
    if beta == 0 {
        return Err(Error::InvalidInstance("dilation factor must be nonzero".into()));
    }
    // preimage of [l, u] under t -> a + beta t
    let pre = |ai: i64, l: Bound, u: Bound| -> (Bound, Bound) {
        let lo_of = |b: Bound| match b {
            Bound::Finite(v) => Bound::Finite(div_ceil(v - ai, beta)),
            _ => Bound::NegInf,
        };
        let hi_of = |b: Bound| match b {
            Bound::Finite(v) => Bound::Finite(div_floor(v - ai, beta)),
            _ => Bound::PosInf,
        };
        if beta > 0 {
            (lo_of(l), hi_of(u))
        } else {
            (lo_of(u), hi_of(l))
        }
    };
    let (mut lo, mut hi) = (Vec::new(), Vec::new());
    for i in 0..g.dim() {
        let (l, u) = pre(a[i], g.bx.lower()[i], g.bx.upper()[i]);
        lo.push(l);
        hi.push(u);
    }
    let bx = DiscreteBox::new(lo, hi)?;
    Ok(FunctionOracle { bx, kind: Kind::Dilated { a, beta, inner: Arc::new(g.clone()) } })
}

fn div_floor(a: i64, b: i64) -> i64 {
    let d = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        d - 1
    } else {
        d
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

/// `g + h`; both must share the same box.
pub fn add(g: &FunctionOracle, h: &FunctionOracle) -> Result<FunctionOracle, Error> {
    if g.bx != h.bx {
        return Err(Error::DomainMismatch(format!("{} vs {}", g.bx, h.bx)));
    }
    Ok(FunctionOracle { bx: g.bx.clone(), kind: Kind::Sum(Arc::new(g.clone()), Arc::new(h.clone())) })
}

/// Support of `a - b` when it has the shape `alpha 1^i - beta 1^j` with
/// `alpha, beta >= 0`; returns `(alpha, beta)`.
pub fn affine_pair_structure(a: &[Rational], b: &[Rational]) -> Option<(Rational, Rational)> {
    let d: Vec<Rational> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let pos: Vec<&Rational> = d.iter().filter(|v| v.is_positive()).collect();
    let neg: Vec<&Rational> = d.iter().filter(|v| v.is_negative()).collect();
    if pos.len() > 1 || neg.len() > 1 {
        return None;
    }
    Some((pos.first().map_or(zero(), |v| (*v).clone()), neg.first().map_or(zero(), |v| -(*v).clone())))
}

/// `max(a.x + a0, b.x + b0)`, lattice submodular when `a - b` has at most one
/// positive and one negative entry.
pub fn max_affine_pair(
    a: Vec<Rational>,
    a0: Rational,
    b: Vec<Rational>,
    b0: Rational,
    bx: DiscreteBox,
) -> Result<FunctionOracle, Error> {
    check_dim("a", a.len(), bx.dim())?;
    check_dim("b", b.len(), bx.dim())?;
    if affine_pair_structure(&a, &b).is_none() {
        return Err(Error::BadStructure("a - b must be alpha 1^i - beta 1^j with alpha, beta >= 0".into()));
    }
    Ok(FunctionOracle { bx, kind: Kind::AffineMaxPair { a, a0, b, b0 } })
}

/// Whether an affine pair additionally has `f(x + 1) = f(x) + r`
/// (`a.1 = b.1`, i.e. `alpha = beta`).
pub fn affine_pair_is_l_convex(a: &[Rational], b: &[Rational]) -> bool {
    matches!(affine_pair_structure(a, b), Some((al, be)) if al == be)
}

/// Discretely convex univariate table of `t -> t^2` over `[lo, hi]`.
pub fn square_table(lo: i64, hi: i64) -> UnivariateTable {
    UnivariateTable::from_fn(lo, hi, |t| int(t * t))
}

pub fn abs_table(lo: i64, hi: i64) -> UnivariateTable {
    UnivariateTable::from_fn(lo, hi, |t| int(t.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn q3() -> Vec<Rational> {
        vec![rat(4, 5), rat(1, 2), rat(1, 5)]
    }

    #[test]
    fn gen_int_mixing_values() {
        let f = make_gen_int_mixing(q3());
        assert_eq!(f.eval(&[0, 0, 1]), rat(4, 5));
        assert_eq!(f.eval(&[1, 1, 1]), zero());
        assert_eq!(f.eval(&[5, 5, 5]), zero());
        assert_eq!(f.eval(&[-1, 0, 0]), rat(9, 5));
    }

    #[test]
    fn bivariate_diff() {
        let bx = DiscreteBox::cube(2, 0, 5).unwrap();
        let f = make_bivariate_diff(square_table(-5, 5), bx.clone()).unwrap();
        assert_eq!(f.eval(&[3, 1]), int(4));
        let f = make_bivariate_diff(abs_table(-5, 5), bx).unwrap();
        assert_eq!(f.eval(&[0, 5]), int(5));
        let cube = UnivariateTable::from_fn(0, 3, |t| int(t * t * t));
        let f = make_bivariate_diff(cube, DiscreteBox::finite(&[0, 0], &[3, 0]).unwrap()).unwrap();
        assert_eq!(f.eval(&[2, 0]), int(8));
        let dip = UnivariateTable::new(0, vec![int(0), int(2), int(1)]);
        assert_eq!(
            make_bivariate_diff(dip, DiscreteBox::finite(&[0, 0], &[2, 0]).unwrap()).unwrap_err(),
            Error::NotDiscretelyConvex(1)
        );
        let short = square_table(-1, 1);
        assert!(matches!(
            make_bivariate_diff(short, DiscreteBox::cube(2, 0, 2).unwrap()),
            Err(Error::DomainMismatch(_))
        ));
    }

    #[test]
    fn quadratics() {
        let bx = DiscreteBox::cube(2, -3, 3).unwrap();
        let f = make_quadratic(vec![vec![int(1), int(0)], vec![int(0), int(1)]], vec![int(0), int(0)], bx.clone())
            .unwrap();
        assert_eq!(f.eval(&[1, 2]), int(5));
        let f = make_quadratic(vec![vec![int(2), int(-1)], vec![int(-1), int(2)]], vec![int(0), int(0)], bx.clone())
            .unwrap();
        assert_eq!(f.eval(&[1, 1]), int(2));
        let bad = make_quadratic(vec![vec![int(2), int(1)], vec![int(1), int(2)]], vec![int(0), int(0)], bx);
        assert!(matches!(bad, Err(Error::NotMMatrix(_))));
    }

    #[test]
    fn demo_and_combinators() {
        let d = make_nonconvex_demo();
        assert_eq!(d.eval(&[2, 1]), int(39));
        assert_eq!(d.eval(&[0, 0]), int(0));
        let m = make_max_component(2);
        assert_eq!(scale(int(2), &m).unwrap().eval(&[1, 3]), int(6));
        let id = dilate(vec![0, 0], 1, &d).unwrap();
        assert_eq!(id.domain(), d.domain());
        for x in d.domain().lattice().unwrap() {
            assert_eq!(id.eval(&x), d.eval(&x));
        }
        let flipped = dilate(vec![2, 1], -1, &d).unwrap();
        assert_eq!(flipped.domain(), &DiscreteBox::finite(&[0, 0], &[2, 1]).unwrap());
        assert_eq!(flipped.eval(&[0, 0]), d.eval(&[2, 1]));
        let s = add(&d, &d).unwrap();
        assert_eq!(s.eval(&[2, 1]), int(78));
        assert!(scale(int(0), &m).is_err());
    }

    #[test]
    fn affine_pairs() {
        let bx = DiscreteBox::cube(3, 0, 2).unwrap();
        let a = vec![int(1), int(-1), int(0)];
        let b = vec![int(0), int(0), int(0)];
        assert!(affine_pair_is_l_convex(&a, &b));
        let f = max_affine_pair(a, int(0), b, rat(1, 2), bx.clone()).unwrap();
        assert_eq!(f.eval(&[2, 0, 1]), int(2));
        let bad = max_affine_pair(vec![int(1), int(1), int(0)], int(0), vec![int(0); 3], int(0), bx);
        assert!(matches!(bad, Err(Error::BadStructure(_))));
    }

    #[test]
    fn dilate_preimage_rounding() {
        let g = make_max_component(1).restrict(&DiscreteBox::finite(&[-3], &[4]).unwrap()).unwrap();
        let h = dilate(vec![1], 2, &g).unwrap();
        assert_eq!(h.domain(), &DiscreteBox::finite(&[-2], &[1]).unwrap());
        assert_eq!(div_floor(-3, 2), -2);
        assert_eq!(div_ceil(-3, 2), -1);
        assert_eq!(div_floor(3, -2), -2);
    }
}
