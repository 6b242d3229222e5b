//! Integer boxes, permutations and linear inequalities.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::{denominator_lcm, dot, fmt_compact, int, zero, Rational};
use crate::Error;

pub type LatticePoint = Vec<i64>;
pub type FractionalPoint = Vec<Rational>;

/// One side of a coordinate range. Infinite bounds are explicit values, so
/// `PosInf - 1` stays `PosInf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bound {
    NegInf,
    Finite(i64),
    PosInf,
}

impl Bound {
    pub fn finite(self) -> Option<i64> {
        match self {
            Bound::Finite(v) => Some(v),
            _ => None,
        }
    }

    fn shift(self, d: i64) -> Bound {
        match self {
            Bound::Finite(v) => Bound::Finite(v + d),
            b => b,
        }
    }

    fn le_int(self, v: i64) -> bool {
        match self {
            Bound::NegInf => true,
            Bound::Finite(b) => b <= v,
            Bound::PosInf => false,
        }
    }

    fn ge_int(self, v: i64) -> bool {
        match self {
            Bound::NegInf => false,
            Bound::Finite(b) => b >= v,
            Bound::PosInf => true,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => write!(f, "-inf"),
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::PosInf => write!(f, "inf"),
        }
    }
}

/// A product of integer intervals `lower_i <= x_i <= upper_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiscreteBox {
    lower: Vec<Bound>,
    upper: Vec<Bound>,
}

impl DiscreteBox {
    pub fn new(lower: Vec<Bound>, upper: Vec<Bound>) -> Result<Self, Error> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::DimensionMismatch(format!(
                "box bounds of lengths {} and {}",
                lower.len(),
                upper.len()
            )));
        }
        for (i, (&l, &u)) in lower.iter().zip(&upper).enumerate() {
            let ok = match (l, u) {
                (Bound::PosInf, _) | (_, Bound::NegInf) => false,
                (Bound::Finite(a), Bound::Finite(b)) => a <= b,
                _ => true,
            };
            if !ok {
                return Err(Error::InvalidBox(format!("coordinate {}: [{l}, {u}]", i + 1)));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn finite(lower: &[i64], upper: &[i64]) -> Result<Self, Error> {
        Self::new(
            lower.iter().map(|&v| Bound::Finite(v)).collect(),
            upper.iter().map(|&v| Bound::Finite(v)).collect(),
        )
    }

    /// `[lo, hi]^n`.
    pub fn cube(n: usize, lo: i64, hi: i64) -> Result<Self, Error> {
        Self::finite(&vec![lo; n], &vec![hi; n])
    }

    /// All of `Z^n`.
    pub fn unbounded(n: usize) -> Self {
        Self { lower: vec![Bound::NegInf; n], upper: vec![Bound::PosInf; n] }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[Bound] {
        &self.lower
    }

    pub fn upper(&self) -> &[Bound] {
        &self.upper
    }

    pub fn is_finite(&self) -> bool {
        self.lower.iter().chain(&self.upper).all(|b| b.finite().is_some())
    }

    pub fn finite_bounds(&self) -> Result<(Vec<i64>, Vec<i64>), Error> {
        let lo: Option<Vec<i64>> = self.lower.iter().map(|b| b.finite()).collect();
        let hi: Option<Vec<i64>> = self.upper.iter().map(|b| b.finite()).collect();
        match (lo, hi) {
            (Some(l), Some(u)) => Ok((l, u)),
            _ => Err(Error::UnboundedBox),
        }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (l, u))| l.le_int(v) && u.ge_int(v))
    }

    /// Membership in the continuous relaxation (closed bounds).
    pub fn contains_relaxed(&self, x: &[Rational]) -> bool {
        x.len() == self.dim()
            && x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (l, u))| {
                let lo_ok = match l {
                    Bound::Finite(b) => *v >= int(*b),
                    _ => true,
                };
                let hi_ok = match u {
                    Bound::Finite(b) => *v <= int(*b),
                    _ => true,
                };
                lo_ok && hi_ok
            })
    }

    /// The box of admissible cube origins: upper bounds decreased by one.
    /// `None` when some coordinate has a single value.
    pub fn inner(&self) -> Option<DiscreteBox> {
        let upper: Vec<Bound> = self.upper.iter().map(|b| b.shift(-1)).collect();
        DiscreteBox::new(self.lower.clone(), upper).ok()
    }

    /// `p` and `p + 1` both lie in the box.
    pub fn contains_cube(&self, p: &[i64]) -> bool {
        self.contains(p) && self.contains(&p.iter().map(|v| v + 1).collect::<Vec<_>>())
    }

    pub fn num_points(&self) -> Result<u128, Error> {
        let (lo, hi) = self.finite_bounds()?;
        Ok(lo.iter().zip(&hi).map(|(l, u)| (u - l + 1) as u128).product())
    }

    /// Lexicographic enumeration of every lattice point.
    pub fn lattice(&self) -> Result<LatticeIter, Error> {
        let (lo, hi) = self.finite_bounds()?;
        Ok(LatticeIter { next: Some(lo.clone()), lo, hi })
    }

    /// Lexicographic rank of `x` among the box points (finite boxes only).
    pub fn index_of(&self, x: &[i64]) -> Option<usize> {
        if !self.contains(x) {
            return None;
        }
        let (lo, hi) = self.finite_bounds().ok()?;
        let mut idx = 0usize;
        for i in 0..x.len() {
            idx = idx * (hi[i] - lo[i] + 1) as usize + (x[i] - lo[i]) as usize;
        }
        Some(idx)
    }

    pub fn is_subset_of(&self, other: &DiscreteBox) -> bool {
        self.dim() == other.dim()
            && (0..self.dim()).all(|i| {
                let lo_ok = match (self.lower[i], other.lower[i]) {
                    (_, Bound::NegInf) => true,
                    (Bound::Finite(a), Bound::Finite(b)) => a >= b,
                    _ => false,
                };
                let hi_ok = match (self.upper[i], other.upper[i]) {
                    (_, Bound::PosInf) => true,
                    (Bound::Finite(a), Bound::Finite(b)) => a <= b,
                    _ => false,
                };
                lo_ok && hi_ok
            })
    }
}

impl fmt::Display for DiscreteBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.lower.iter().zip(&self.upper).map(|(l, u)| format!("[{l},{u}]")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// The shifted unit cube `{p, ..., p + 1}`.
pub fn unit_hypercube(p: &[i64]) -> DiscreteBox {
    let hi: Vec<i64> = p.iter().map(|v| v + 1).collect();
    DiscreteBox::finite(p, &hi).expect("unit cube of a nonempty point")
}

pub struct LatticeIter {
    lo: Vec<i64>,
    hi: Vec<i64>,
    next: Option<Vec<i64>>,
}

impl Iterator for LatticeIter {
    type Item = LatticePoint;

    fn next(&mut self) -> Option<LatticePoint> {
        let cur = self.next.take()?;
        let mut nxt = cur.clone();
        let mut i = nxt.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if nxt[i] < self.hi[i] {
                nxt[i] += 1;
                self.next = Some(nxt);
                break;
            }
            nxt[i] = self.lo[i];
        }
        Some(cur)
    }
}

pub fn join(x: &[i64], y: &[i64]) -> LatticePoint {
    x.iter().zip(y).map(|(a, b)| *a.max(b)).collect()
}

pub fn meet(x: &[i64], y: &[i64]) -> LatticePoint {
    x.iter().zip(y).map(|(a, b)| *a.min(b)).collect()
}

/// A bijection of `{0..n-1}`; `order[k]` is the element placed at step `k`.
/// Displayed 1-based, as `(3,4,1,2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    order: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self, Error> {
        let n = order.len();
        let mut inverse = vec![usize::MAX; n];
        for (k, &i) in order.iter().enumerate() {
            if i >= n || inverse[i] != usize::MAX {
                return Err(Error::InvalidPermutation(format!("{order:?}")));
            }
            inverse[i] = k;
        }
        Ok(Self { order, inverse })
    }

    /// From 1-based entries, e.g. `(1,7,6,2,9,3,8,5,4)`.
    pub fn from_one_based(order: &[usize]) -> Result<Self, Error> {
        if order.contains(&0) {
            return Err(Error::InvalidPermutation(format!("{order:?}")));
        }
        Self::new(order.iter().map(|i| i - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::new((0..n).collect()).unwrap()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Element at step `k` (0-based).
    pub fn at(&self, k: usize) -> usize {
        self.order[k]
    }

    /// Step at which element `i` appears (0-based).
    pub fn position(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.order.iter().map(|i| i + 1).collect()
    }

    /// Stable descending order of `vals`, ties by ascending index.
    pub fn sort_descending(vals: &[Rational]) -> Self {
        let mut idx: Vec<usize> = (0..vals.len()).collect();
        idx.sort_by(|&a, &b| vals[b].cmp(&vals[a]).then(a.cmp(&b)));
        Self::new(idx).unwrap()
    }

    /// Every permutation of `n` elements, lexicographic.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation::new(cur.clone()).unwrap());
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The chain `p^0 = p, p^k = p^{k-1} + e_{delta(k)}`, `k = 0..n`.
pub fn chain(p: &[i64], delta: &Permutation) -> Vec<LatticePoint> {
    let mut pts = Vec::with_capacity(p.len() + 1);
    let mut cur = p.to_vec();
    pts.push(cur.clone());
    for k in 0..delta.len() {
        cur[delta.at(k)] += 1;
        pts.push(cur.clone());
    }
    pts
}

/// `w_coef * w + y_coef . y >= x_coef . x + constant`.
///
/// The pure-integer setting leaves `y_coef` empty. Bound rows such as
/// `x_i >= l` are stored with `w_coef = 0` as `0 >= -x_i + l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearInequality {
    pub w_coef: Rational,
    pub y_coef: Vec<Rational>,
    pub x_coef: Vec<Rational>,
    pub constant: Rational,
}

impl LinearInequality {
    pub fn new(
        w_coef: Rational,
        y_coef: Vec<Rational>,
        x_coef: Vec<Rational>,
        constant: Rational,
    ) -> Self {
        Self { w_coef, y_coef, x_coef, constant }
    }

    /// `w >= x_coef . x + constant`.
    pub fn epigraph(x_coef: Vec<Rational>, constant: Rational) -> Self {
        Self::new(Rational::one(), Vec::new(), x_coef, constant)
    }

    /// `x_i >= l`.
    pub fn lower_bound(m: usize, n: usize, i: usize, l: i64) -> Self {
        let mut x = vec![zero(); n];
        x[i] = -Rational::one();
        Self::new(zero(), vec![zero(); m], x, int(l))
    }

    /// `x_i <= u`.
    pub fn upper_bound(m: usize, n: usize, i: usize, u: i64) -> Self {
        let mut x = vec![zero(); n];
        x[i] = Rational::one();
        Self::new(zero(), vec![zero(); m], x, int(-u))
    }

    /// `y_i >= 0`.
    pub fn y_nonneg(m: usize, n: usize, i: usize) -> Self {
        let mut y = vec![zero(); m];
        y[i] = Rational::one();
        Self::new(zero(), y, vec![zero(); n], zero())
    }

    pub fn dim_x(&self) -> usize {
        self.x_coef.len()
    }

    pub fn dim_y(&self) -> usize {
        self.y_coef.len()
    }

    pub fn rhs(&self, x: &[Rational]) -> Rational {
        dot(&self.x_coef, x) + &self.constant
    }

    pub fn rhs_int(&self, x: &[i64]) -> Rational {
        crate::rat::dot_int(&self.x_coef, x) + &self.constant
    }

    /// Left-hand side; an empty `y` is read as zero.
    pub fn lhs(&self, w: &Rational, y: &[Rational]) -> Rational {
        let mut v = &self.w_coef * w;
        if !y.is_empty() {
            v += dot(&self.y_coef, y);
        }
        v
    }

    /// `rhs - lhs`: positive exactly when the point violates the inequality.
    pub fn violation(&self, w: &Rational, y: &[Rational], x: &[Rational]) -> Rational {
        self.rhs(x) - self.lhs(w, y)
    }

    /// Homogeneous coefficient vector `(w, y, -x)` and right-hand side, i.e.
    /// `a . (w, y, x) >= b`.
    pub fn as_row(&self) -> (Vec<Rational>, Rational) {
        let mut a = Vec::with_capacity(1 + self.y_coef.len() + self.x_coef.len());
        a.push(self.w_coef.clone());
        a.extend(self.y_coef.iter().cloned());
        a.extend(self.x_coef.iter().map(|c| -c));
        (a, self.constant.clone())
    }

    /// Integer coefficients with unit content, obtained by positive scaling.
    /// Two inequalities describe the same halfspace iff their canonical
    /// forms coincide.
    pub fn canonicalize(&self) -> Result<LinearInequality, Error> {
        let all_zero = self.w_coef.is_zero()
            && self.y_coef.iter().all(Zero::is_zero)
            && self.x_coef.iter().all(Zero::is_zero);
        if all_zero {
            return Err(Error::ZeroInequality);
        }
        let vals = std::iter::once(&self.w_coef)
            .chain(&self.y_coef)
            .chain(&self.x_coef)
            .chain(std::iter::once(&self.constant));
        let l = Rational::from_integer(denominator_lcm(vals.clone()));
        let g = vals.fold(BigInt::zero(), |acc, v| acc.gcd(&(v * &l).to_integer()));
        let s = l / Rational::from_integer(g.abs());
        Ok(LinearInequality {
            w_coef: &self.w_coef * &s,
            y_coef: self.y_coef.iter().map(|v| v * &s).collect(),
            x_coef: self.x_coef.iter().map(|v| v * &s).collect(),
            constant: &self.constant * &s,
        })
    }

    /// Halfspace equality via canonical forms.
    pub fn same_halfspace(&self, other: &LinearInequality) -> bool {
        match (self.canonicalize(), other.canonicalize()) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

fn write_term(out: &mut String, coef: &Rational, var: &str) {
    if coef.is_zero() {
        return;
    }
    let neg = coef.is_negative();
    let mag = coef.abs();
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if !mag.is_one() {
        out.push_str(&fmt_compact(&mag));
        out.push(' ');
    }
    out.push_str(var);
}

impl fmt::Display for LinearInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut lhs = String::new();
        write_term(&mut lhs, &self.w_coef, "w");
        for (i, c) in self.y_coef.iter().enumerate() {
            write_term(&mut lhs, c, &format!("y{}", i + 1));
        }
        if lhs.is_empty() {
            lhs.push('0');
        }
        let mut rhs = String::new();
        if !self.constant.is_zero() {
            rhs.push_str(&fmt_compact(&self.constant));
        }
        for (i, c) in self.x_coef.iter().enumerate() {
            write_term(&mut rhs, c, &format!("x{}", i + 1));
        }
        if rhs.is_empty() {
            rhs.push('0');
        }
        write!(f, "{lhs} >= {rhs}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn unit_cubes() {
        let b = unit_hypercube(&[-1, 2]);
        assert_eq!(b, DiscreteBox::finite(&[-1, 2], &[0, 3]).unwrap());
        assert_eq!(unit_hypercube(&[5]).num_points().unwrap(), 2);
        assert_eq!(unit_hypercube(&[0, 0]).lattice().unwrap().count(), 4);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let b = DiscreteBox::cube(2, 0, 1).unwrap();
        let pts: Vec<_> = b.lattice().unwrap().collect();
        assert_eq!(pts, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let single = DiscreteBox::finite(&[2, 0], &[2, 0]).unwrap();
        assert_eq!(single.lattice().unwrap().collect::<Vec<_>>(), vec![vec![2, 0]]);
        let b = DiscreteBox::finite(&[0, 0], &[2, 1]).unwrap();
        assert_eq!(b.lattice().unwrap().count(), 6);
        for (k, p) in b.lattice().unwrap().enumerate() {
            assert_eq!(b.index_of(&p), Some(k));
        }
        assert!(matches!(DiscreteBox::unbounded(2).lattice(), Err(Error::UnboundedBox)));
    }

    #[test]
    fn inner_box_keeps_infinity() {
        let b = DiscreteBox::new(
            vec![Bound::Finite(0), Bound::NegInf],
            vec![Bound::PosInf, Bound::Finite(3)],
        )
        .unwrap();
        let inner = b.inner().unwrap();
        assert_eq!(inner.upper(), &[Bound::PosInf, Bound::Finite(2)]);
        assert!(DiscreteBox::finite(&[1], &[1]).unwrap().inner().is_none());
        assert!(DiscreteBox::finite(&[2], &[1]).is_err());
    }

    #[test]
    fn permutations() {
        let d = Permutation::from_one_based(&[1, 7, 6, 2, 9, 3, 8, 5, 4]).unwrap();
        assert_eq!(d.position(8), 4);
        assert_eq!(d.at(2), 5);
        assert_eq!(d.to_string(), "(1,7,6,2,9,3,8,5,4)");
        assert!(Permutation::from_one_based(&[1, 1]).is_err());
        assert_eq!(Permutation::all(3).len(), 6);
        let s = Permutation::sort_descending(&[rat(3, 10), rat(7, 10), rat(3, 10)]);
        assert_eq!(s.order(), &[1, 0, 2]);
    }

    #[test]
    fn canonical_forms() {
        let a = LinearInequality::epigraph(vec![rat(-3, 10), rat(-1, 2), zero()], rat(4, 5));
        let b = LinearInequality::epigraph(vec![int(-3), int(-5), zero()], int(8));
        let b = LinearInequality { w_coef: int(10), ..b };
        assert!(a.same_halfspace(&b));
        assert_eq!(a.canonicalize().unwrap(), a.canonicalize().unwrap().canonicalize().unwrap());
        let z = LinearInequality::new(zero(), vec![], vec![zero()], zero());
        assert!(matches!(z.canonicalize(), Err(Error::ZeroInequality)));
        // negative scaling is a different halfspace
        let neg = LinearInequality {
            w_coef: int(-1),
            y_coef: vec![],
            x_coef: a.x_coef.iter().map(|v| -v).collect(),
            constant: -a.constant.clone(),
        };
        assert!(!a.same_halfspace(&neg));
        assert_eq!(a.to_string(), "w >= 4/5 - 3/10 x1 - 1/2 x2");
    }
}
