//! The general integer mixing set `w + x_i >= q_i`, `w >= 0`.
//!
//! Its epigraph function is `F0(x) = max(0, max_i q_i - x_i)`. Every greedy
//! inequality of `F0` is one of finitely many mixing inequalities, and
//! [`build_k`] recovers which one from `(p, delta)` alone.
//!
//! Indices are in the caller's order throughout. The instance stores the
//! rank of each index in the descending order of `q` (ties by index), which
//! stands in for "smaller index" wherever the sorted normalization matters.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Signed};

use crate::fnzoo::{make_gen_int_mixing, FunctionOracle};
use crate::lattice::{LatticePoint, LinearInequality, Permutation};
use crate::rat::{zero, Rational};
use crate::sepi::build_sepi;
use crate::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct MixingInstance {
    q: Vec<Rational>,
    /// Indices in descending order of `q`, ties by ascending index.
    order: Vec<usize>,
    rank: Vec<usize>,
}

impl MixingInstance {
    /// Accepts any order of `q`; every entry must lie in `[0, 1)`.
    pub fn new(q: Vec<Rational>) -> Result<Self, Error> {
        if q.is_empty() {
            return Err(Error::InvalidInstance("q is empty".into()));
        }
        if let Some(i) = q.iter().position(|v| v.is_negative() || *v >= Rational::one()) {
            return Err(Error::InvalidInstance(format!("q{} = {} is outside [0, 1)", i + 1, q[i])));
        }
        let order = Permutation::sort_descending(&q).order().to_vec();
        let mut rank = vec![0; q.len()];
        for (k, &i) in order.iter().enumerate() {
            rank[i] = k;
        }
        Ok(Self { q, order, rank })
    }

    pub fn q(&self) -> &[Rational] {
        &self.q
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    /// Indices sorted by descending `q`.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn function(&self) -> FunctionOracle {
        make_gen_int_mixing(self.q.clone())
    }

    fn sigma(&self, k: &[usize]) -> Vec<usize> {
        let mut s = k.to_vec();
        s.sort_by_key(|&i| self.rank[i]);
        s.dedup();
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Form {
    /// `K` empty: `w >= 0`.
    Empty,
    A,
    B,
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::Empty => "empty",
            Form::A => "A",
            Form::B => "B",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingInequality {
    /// `K` in descending order of `q`.
    pub sigma: Vec<usize>,
    pub form: Form,
    pub inequality: LinearInequality,
}

impl MixingInequality {
    /// `K` in ascending index order.
    pub fn k(&self) -> Vec<usize> {
        let mut k = self.sigma.clone();
        k.sort_unstable();
        k
    }
}

/// Form A: `w >= sum_j (q_s(j) - q_s(j+1)) (1 - x_s(j))`, `q_s(|K|+1) = 0`;
/// form B subtracts `(1 - q_s(1)) x_s(|K|)`.
pub fn mixing_inequality(inst: &MixingInstance, k: &[usize], form: Form) -> Result<MixingInequality, Error> {
    let n = inst.dim();
    if let Some(&bad) = k.iter().find(|&&i| i >= n) {
        return Err(Error::DimensionMismatch(format!("index {} outside 1..{n}", bad + 1)));
    }
    let sigma = inst.sigma(k);
    let mut x = vec![zero(); n];
    let mut c = zero();
    if sigma.is_empty() {
        return Ok(MixingInequality { sigma, form: Form::Empty, inequality: LinearInequality::epigraph(x, c) });
    }
    let form = if form == Form::Empty { Form::A } else { form };
    for (j, &i) in sigma.iter().enumerate() {
        let next = sigma.get(j + 1).map_or(zero(), |&t| inst.q[t].clone());
        let gap = &inst.q[i] - next;
        c += &gap;
        x[i] -= gap;
    }
    if form == Form::B {
        let last = *sigma.last().expect("nonempty");
        x[last] -= Rational::one() - &inst.q[sigma[0]];
    }
    Ok(MixingInequality { sigma, form, inequality: LinearInequality::epigraph(x, c) })
}

/// `(p, delta)` whose greedy inequality is the mixing inequality of `K`:
/// `p = 0` (form A) or `-1` (form B) on `K`, `1` elsewhere, and `delta` the
/// descending order of `q`.
pub fn sepi_from_mixing(inst: &MixingInstance, k: &[usize], form: Form) -> Result<(LatticePoint, Permutation), Error> {
    if k.is_empty() || form == Form::Empty {
        return Err(Error::InvalidInstance("K must be nonempty with form A or B".into()));
    }
    let on = if form == Form::A { 0 } else { -1 };
    let mut p = vec![1; inst.dim()];
    for &i in k {
        if i >= inst.dim() {
            return Err(Error::DimensionMismatch(format!("index {} outside 1..{}", i + 1, inst.dim())));
        }
        p[i] = on;
    }
    Ok((p, Permutation::new(inst.order.clone())?))
}

/// Reads off `K` and the form from `(p, delta)`.
pub fn build_k(inst: &MixingInstance, p: &[i64], delta: &Permutation) -> Result<(Vec<usize>, Form), Error> {
    let n = inst.dim();
    if p.len() != n || delta.len() != n {
        return Err(Error::DimensionMismatch(format!("p and delta must have length {n}")));
    }
    let pmin = *p.iter().min().expect("nonempty");
    if pmin >= 1 {
        return Ok((Vec::new(), Form::Empty));
    }
    let pos = |i: usize| delta.position(i);
    let best = |cands: &mut dyn Iterator<Item = usize>| cands.min_by_key(|&i| inst.rank[i]);
    // maximizers at level pmin: each next one comes later in delta
    let level: Vec<usize> = (0..n).filter(|&i| p[i] == pmin).collect();
    let k1 = best(&mut level.iter().copied()).expect("pmin is attained");
    let mut k = vec![k1];
    let mut last = k1;
    while let Some(next) = best(&mut level.iter().copied().filter(|&i| pos(i) > pos(last))) {
        k.push(next);
        last = next;
    }
    if pmin == 0 {
        return Ok((sorted(k), Form::A));
    }
    // one level up: only entries after k_L in delta with larger q than k_1
    let up: Vec<usize> = (0..n).filter(|&i| p[i] == pmin + 1 && inst.rank[i] < inst.rank[k1]).collect();
    let mut after = pos(last);
    while let Some(next) = best(&mut up.iter().copied().filter(|&i| pos(i) > after)) {
        k.push(next);
        after = pos(next);
    }
    Ok((sorted(k), Form::B))
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

#[derive(Debug, Clone, PartialEq)]
pub struct Roundtrip {
    pub k: Vec<usize>,
    pub form: Form,
    pub sepi: LinearInequality,
    pub mixing: LinearInequality,
    pub equal: bool,
}

/// Compares the greedy inequality of `(p, delta)` with the mixing
/// inequality selected by [`build_k`].
pub fn mixing_from_sepi_roundtrip(inst: &MixingInstance, p: &[i64], delta: &Permutation) -> Result<Roundtrip, Error> {
    let sepi = build_sepi(&inst.function(), p, delta)?;
    let (k, form) = build_k(inst, p, delta)?;
    let mixing = mixing_inequality(inst, &k, form)?.inequality;
    let equal = sepi.canonicalize()? == mixing.canonicalize()?;
    Ok(Roundtrip { k, form, sepi, mixing, equal })
}

/// All mixing inequalities (every nonempty `K`, both forms) plus `w >= 0`,
/// canonically deduplicated. Exponential in `n`.
pub fn all_mixing_inequalities(inst: &MixingInstance) -> Result<Vec<LinearInequality>, Error> {
    let n = inst.dim();
    if n > 16 {
        return Err(Error::TooLarge(format!("2^{n} subsets")));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let zero_cut = mixing_inequality(inst, &[], Form::Empty)?.inequality;
    seen.insert(zero_cut.canonicalize()?);
    out.push(zero_cut);
    for mask in 1u32..(1 << n) {
        let k: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        for form in [Form::A, Form::B] {
            let m = mixing_inequality(inst, &k, form)?.inequality;
            if seen.insert(m.canonicalize()?) {
                out.push(m);
            }
        }
    }
    Ok(out)
}

/// Whether `x` (integral) and `w` satisfy the mixing set constraints.
pub fn in_mixing_set(inst: &MixingInstance, x: &[i64], w: &Rational) -> bool {
    !w.is_negative() && inst.q.iter().zip(x).all(|(q, &xi)| w + Rational::from_integer(xi.into()) >= *q)
}
