//! Dense exact simplex.
//!
//! Two-phase primal simplex on a rational tableau. Entering columns follow
//! Dantzig's rule until a run of degenerate pivots, then Bland's rule for the
//! rest of the phase, which rules out cycling. Every row carries an identity
//! column (slack or artificial), so the row duals can be read off the final
//! reduced-cost row.
//!
//! Free and bounded variables are mapped onto nonnegative columns by shifting,
//! reflecting or splitting. Finite upper bounds on doubly bounded variables
//! become extra rows that are hidden from the reported duals.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::lattice::LinearInequality;
use crate::rat::{dot, fmt_compact, zero, Rational};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coefs: Vec<Rational>,
    pub kind: RowKind,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub rows: Vec<Row>,
    /// `None` means unbounded in that direction.
    pub lower: Vec<Option<Rational>>,
    pub upper: Vec<Option<Rational>>,
}

impl LpProblem {
    /// New problem over nonnegative variables.
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        let n = objective.len();
        Self {
            sense,
            objective,
            rows: Vec::new(),
            lower: vec![Some(zero()); n],
            upper: vec![None; n],
        }
    }

    pub fn maximize(objective: Vec<Rational>) -> Self {
        Self::new(Sense::Maximize, objective)
    }

    pub fn minimize(objective: Vec<Rational>) -> Self {
        Self::new(Sense::Minimize, objective)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_row(&mut self, coefs: Vec<Rational>, kind: RowKind, rhs: Rational) -> &mut Self {
        self.rows.push(Row { coefs, kind, rhs });
        self
    }

    pub fn set_bounds(&mut self, j: usize, lo: Option<Rational>, hi: Option<Rational>) -> &mut Self {
        self.lower[j] = lo;
        self.upper[j] = hi;
        self
    }

    pub fn set_free(&mut self, j: usize) -> &mut Self {
        self.set_bounds(j, None, None)
    }

    fn validate(&self) -> Result<(), Error> {
        let n = self.num_vars();
        if n == 0 {
            return Err(Error::MalformedProblem("no variables".into()));
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::MalformedProblem("bound vectors have wrong length".into()));
        }
        for (i, r) in self.rows.iter().enumerate() {
            if r.coefs.len() != n {
                return Err(Error::MalformedProblem(format!(
                    "row {i} has {} coefficients, expected {n}",
                    r.coefs.len()
                )));
            }
        }
        for j in 0..n {
            if let (Some(l), Some(u)) = (&self.lower[j], &self.upper[j]) {
                if l > u {
                    return Err(Error::MalformedProblem(format!("variable {j} has empty range")));
                }
            }
        }
        Ok(())
    }

    /// Plain-text dump in an LP-like format, for cross-checking externally.
    ///
    /// ```text
    /// maximize: 3 x1 + x2
    /// r1: x1 + x2 <= 4
    /// bounds: 0 <= x1, -inf <= x2 <= inf
    /// ```
    pub fn to_lp_string(&self) -> String {
        let lin = |c: &[Rational]| {
            let mut s = String::new();
            for (j, v) in c.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                if !s.is_empty() {
                    s.push_str(if v.is_negative() { " - " } else { " + " });
                } else if v.is_negative() {
                    s.push('-');
                }
                let _ = write!(s, "{} x{}", fmt_compact(&v.abs()), j + 1);
            }
            if s.is_empty() {
                s.push('0');
            }
            s
        };
        let mut out = String::new();
        let sense = match self.sense {
            Sense::Maximize => "maximize",
            Sense::Minimize => "minimize",
        };
        let _ = writeln!(out, "{sense}: {}", lin(&self.objective));
        for (i, r) in self.rows.iter().enumerate() {
            let op = match r.kind {
                RowKind::Le => "<=",
                RowKind::Ge => ">=",
                RowKind::Eq => "=",
            };
            let _ = writeln!(out, "r{}: {} {op} {}", i + 1, lin(&r.coefs), fmt_compact(&r.rhs));
        }
        let bounds: Vec<String> = (0..self.num_vars())
            .map(|j| {
                let lo = self.lower[j].as_ref().map_or("-inf".into(), fmt_compact);
                let hi = self.upper[j].as_ref().map_or("inf".into(), fmt_compact);
                format!("{lo} <= x{} <= {hi}", j + 1)
            })
            .collect();
        let _ = writeln!(out, "bounds: {}", bounds.join(", "));
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal values (empty unless optimal).
    pub x: Vec<Rational>,
    /// Shadow prices of the rows: `d objective / d rhs_i` (empty unless optimal).
    pub duals: Vec<Rational>,
    pub objective: Rational,
    /// For infeasible problems: multipliers on the rows of the internal
    /// standard form restricted to the user rows (implicit bounds omitted).
    pub farkas: Option<Vec<Rational>>,
    pub pivots: usize,
}

impl LpSolution {
    fn without_point(status: LpStatus, pivots: usize) -> Self {
        Self { status, x: vec![], duals: vec![], objective: zero(), farkas: None, pivots }
    }

    /// Checks the optimality certificate exactly: primal feasibility, dual
    /// sign conditions, complementary slackness and objective agreement.
    pub fn verify(&self, p: &LpProblem) -> Result<(), String> {
        if self.status != LpStatus::Optimal {
            return Err("not optimal".into());
        }
        let n = p.num_vars();
        let max = p.sense == Sense::Maximize;
        for j in 0..n {
            if let Some(l) = &p.lower[j] {
                if self.x[j] < *l {
                    return Err(format!("x{} below its lower bound", j + 1));
                }
            }
            if let Some(u) = &p.upper[j] {
                if self.x[j] > *u {
                    return Err(format!("x{} above its upper bound", j + 1));
                }
            }
        }
        let mut reduced = p.objective.clone();
        for (i, r) in p.rows.iter().enumerate() {
            let ax = dot(&r.coefs, &self.x);
            let y = &self.duals[i];
            let ok = match r.kind {
                RowKind::Le => ax <= r.rhs,
                RowKind::Ge => ax >= r.rhs,
                RowKind::Eq => ax == r.rhs,
            };
            if !ok {
                return Err(format!("row {} violated", i + 1));
            }
            let sign_ok = match (r.kind, max) {
                (RowKind::Eq, _) => true,
                (RowKind::Le, true) | (RowKind::Ge, false) => !y.is_negative(),
                (RowKind::Ge, true) | (RowKind::Le, false) => !y.is_positive(),
            };
            if !sign_ok {
                return Err(format!("dual of row {} has the wrong sign", i + 1));
            }
            if !y.is_zero() && ax != r.rhs {
                return Err(format!("row {} slack but priced", i + 1));
            }
            for j in 0..n {
                reduced[j] -= y * &r.coefs[j];
            }
        }
        for (j, d) in reduced.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let at_lo = p.lower[j].as_ref() == Some(&self.x[j]);
            let at_hi = p.upper[j].as_ref() == Some(&self.x[j]);
            // moving x_j inward must not improve the objective
            let improving_up = if max { d.is_positive() } else { d.is_negative() };
            let ok = if improving_up { at_hi } else { at_lo };
            if !ok {
                return Err(format!("reduced cost of x{} not complementary", j + 1));
            }
        }
        if dot(&p.objective, &self.x) != self.objective {
            return Err("objective mismatch".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LpOptions {
    pub max_pivots: usize,
    /// Consecutive degenerate pivots tolerated before switching to Bland.
    pub degenerate_limit: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self { max_pivots: 500_000, degenerate_limit: 20 }
    }
}

pub fn solve(p: &LpProblem) -> Result<LpSolution, Error> {
    solve_with(p, LpOptions::default())
}

#[derive(Debug, Clone)]
enum VarMap {
    Shift { lo: Rational, col: usize },
    Reflect { hi: Rational, col: usize },
    Split { pos: usize, neg: usize },
}

struct Tableau {
    t: Vec<Vec<Rational>>,
    d: Vec<Rational>,
    basis: Vec<usize>,
    /// Rows removed as redundant after phase one.
    alive: Vec<bool>,
    ncols: usize,
    pivots: usize,
    opts: LpOptions,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.ncols
    }

    fn pivot(&mut self, r: usize, c: usize) -> Result<(), Error> {
        self.pivots += 1;
        if self.pivots > self.opts.max_pivots {
            return Err(Error::PivotBudget(self.opts.max_pivots));
        }
        let inv = Rational::one() / &self.t[r][c];
        let nz: Vec<usize> = (0..=self.ncols).filter(|&j| !self.t[r][j].is_zero()).collect();
        for &j in &nz {
            self.t[r][j] = &self.t[r][j] * &inv;
        }
        let prow: Vec<(usize, Rational)> = nz.iter().map(|&j| (j, self.t[r][j].clone())).collect();
        for i in 0..self.t.len() {
            if i == r || !self.alive[i] || self.t[i][c].is_zero() {
                continue;
            }
            let f = self.t[i][c].clone();
            let row = &mut self.t[i];
            for (j, v) in &prow {
                row[*j] -= &f * v;
            }
        }
        if !self.d[c].is_zero() {
            let f = self.d[c].clone();
            for (j, v) in &prow {
                self.d[*j] -= &f * v;
            }
        }
        self.basis[r] = c;
        Ok(())
    }

    fn set_costs(&mut self, cost: &[Rational]) {
        let rhs = self.rhs();
        let mut d: Vec<Rational> = cost.iter().map(|c| -c).collect();
        d.push(zero());
        for (i, &b) in self.basis.iter().enumerate() {
            if !self.alive[i] || cost[b].is_zero() {
                continue;
            }
            for j in 0..=rhs {
                if !self.t[i][j].is_zero() {
                    d[j] += &cost[b] * &self.t[i][j];
                }
            }
        }
        self.d = d;
    }

    /// Maximizes the current cost row over columns with `allowed[j]`.
    fn run(&mut self, allowed: &[bool]) -> Result<PhaseEnd, Error> {
        let rhs = self.rhs();
        let mut bland = false;
        let mut degenerate = 0usize;
        loop {
            let entering = if bland {
                (0..self.ncols).find(|&j| allowed[j] && self.d[j].is_negative())
            } else {
                let mut best: Option<usize> = None;
                for j in 0..self.ncols {
                    if allowed[j]
                        && self.d[j].is_negative()
                        && best.is_none_or(|b| self.d[j] < self.d[b])
                    {
                        best = Some(j);
                    }
                }
                best
            };
            let Some(c) = entering else { return Ok(PhaseEnd::Optimal) };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                if !self.alive[i] || !self.t[i][c].is_positive() {
                    continue;
                }
                let ratio = &self.t[i][rhs] / &self.t[i][c];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, ratio)) = leave else { return Ok(PhaseEnd::Unbounded) };
            if ratio.is_zero() {
                degenerate += 1;
                if degenerate > self.opts.degenerate_limit {
                    bland = true;
                }
            } else {
                degenerate = 0;
            }
            self.pivot(r, c)?;
        }
    }
}

pub fn solve_with(p: &LpProblem, opts: LpOptions) -> Result<LpSolution, Error> {
    p.validate()?;
    let n = p.num_vars();
    let max = p.sense == Sense::Maximize;

    // variable substitution
    let mut maps = Vec::with_capacity(n);
    let mut nstruct = 0usize;
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
    for j in 0..n {
        match (&p.lower[j], &p.upper[j]) {
            (Some(l), hi) => {
                maps.push(VarMap::Shift { lo: l.clone(), col: nstruct });
                if let Some(u) = hi {
                    bound_rows.push((nstruct, u - l));
                }
                nstruct += 1;
            }
            (None, Some(u)) => {
                maps.push(VarMap::Reflect { hi: u.clone(), col: nstruct });
                nstruct += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split { pos: nstruct, neg: nstruct + 1 });
                nstruct += 2;
            }
        }
    }

    // internal rows over structural columns
    let nuser = p.rows.len();
    let mut rows: Vec<(Vec<Rational>, RowKind, Rational)> = Vec::new();
    for r in &p.rows {
        let mut a = vec![zero(); nstruct];
        let mut b = r.rhs.clone();
        for (j, m) in maps.iter().enumerate() {
            let v = &r.coefs[j];
            if v.is_zero() {
                continue;
            }
            match m {
                VarMap::Shift { lo, col } => {
                    a[*col] += v;
                    b -= v * lo;
                }
                VarMap::Reflect { hi, col } => {
                    a[*col] -= v;
                    b -= v * hi;
                }
                VarMap::Split { pos, neg } => {
                    a[*pos] += v;
                    a[*neg] -= v;
                }
            }
        }
        rows.push((a, r.kind, b));
    }
    for (col, width) in &bound_rows {
        let mut a = vec![zero(); nstruct];
        a[*col] = Rational::one();
        rows.push((a, RowKind::Le, width.clone()));
    }
    let mut cost = vec![zero(); nstruct];
    let mut offset = zero();
    for (j, m) in maps.iter().enumerate() {
        let v = if max { p.objective[j].clone() } else { -p.objective[j].clone() };
        match m {
            VarMap::Shift { lo, col } => {
                cost[*col] += &v;
                offset += &v * lo;
            }
            VarMap::Reflect { hi, col } => {
                cost[*col] -= &v;
                offset += &v * hi;
            }
            VarMap::Split { pos, neg } => {
                cost[*pos] += &v;
                cost[*neg] -= &v;
            }
        }
    }

    // normalize to nonnegative rhs
    let m = rows.len();
    let mut flipped = vec![false; m];
    for (i, (a, k, b)) in rows.iter_mut().enumerate() {
        if b.is_negative() {
            flipped[i] = true;
            for v in a.iter_mut() {
                *v = -v.clone();
            }
            *b = -b.clone();
            *k = match *k {
                RowKind::Le => RowKind::Ge,
                RowKind::Ge => RowKind::Le,
                RowKind::Eq => RowKind::Eq,
            };
        }
    }

    // columns: structural | slacks | artificials
    let nslack = rows.iter().filter(|r| r.1 != RowKind::Eq).count();
    let nart = rows.iter().filter(|r| r.1 != RowKind::Le).count();
    let ncols = nstruct + nslack + nart;
    let mut t = vec![vec![zero(); ncols + 1]; m];
    let mut basis = vec![0usize; m];
    let mut id_col = vec![0usize; m];
    let mut is_art = vec![false; ncols];
    let (mut s, mut a) = (nstruct, nstruct + nslack);
    for (i, (coefs, kind, b)) in rows.iter().enumerate() {
        t[i][..nstruct].clone_from_slice(coefs);
        t[i][ncols] = b.clone();
        match kind {
            RowKind::Le => {
                t[i][s] = Rational::one();
                id_col[i] = s;
                s += 1;
            }
            RowKind::Ge => {
                t[i][s] = -Rational::one();
                s += 1;
                t[i][a] = Rational::one();
                is_art[a] = true;
                id_col[i] = a;
                a += 1;
            }
            RowKind::Eq => {
                t[i][a] = Rational::one();
                is_art[a] = true;
                id_col[i] = a;
                a += 1;
            }
        }
        basis[i] = id_col[i];
    }
    let mut tab =
        Tableau { t, d: vec![], basis, alive: vec![true; m], ncols, pivots: 0, opts };

    // phase one
    if nart > 0 {
        let c1: Vec<Rational> =
            (0..ncols).map(|j| if is_art[j] { -Rational::one() } else { zero() }).collect();
        tab.set_costs(&c1);
        let all = vec![true; ncols];
        tab.run(&all)?;
        if tab.d[ncols].is_negative() {
            let farkas: Vec<Rational> = (0..nuser)
                .map(|i| {
                    let y = &tab.d[id_col[i]] + &c1[id_col[i]];
                    if flipped[i] {
                        -y
                    } else {
                        y
                    }
                })
                .collect();
            let mut sol = LpSolution::without_point(LpStatus::Infeasible, tab.pivots);
            sol.farkas = Some(farkas);
            return Ok(sol);
        }
        // drive zero-level artificials out of the basis
        for i in 0..m {
            if !is_art[tab.basis[i]] {
                continue;
            }
            match (0..ncols).find(|&j| !is_art[j] && !tab.t[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j)?,
                None => tab.alive[i] = false,
            }
        }
    }

    // phase two
    let mut c2 = cost.clone();
    c2.resize(ncols, zero());
    tab.set_costs(&c2);
    let allowed: Vec<bool> = is_art.iter().map(|a| !a).collect();
    if let PhaseEnd::Unbounded = tab.run(&allowed)? {
        return Ok(LpSolution::without_point(LpStatus::Unbounded, tab.pivots));
    }

    let mut xs = vec![zero(); ncols];
    for i in 0..m {
        if tab.alive[i] {
            xs[tab.basis[i]] = tab.t[i][ncols].clone();
        }
    }
    let x: Vec<Rational> = maps
        .iter()
        .map(|mp| match mp {
            VarMap::Shift { lo, col } => lo + &xs[*col],
            VarMap::Reflect { hi, col } => hi - &xs[*col],
            VarMap::Split { pos, neg } => &xs[*pos] - &xs[*neg],
        })
        .collect();
    let duals: Vec<Rational> = (0..nuser)
        .map(|i| {
            if !tab.alive[i] {
                return zero();
            }
            let mut y = tab.d[id_col[i]].clone();
            if flipped[i] {
                y = -y;
            }
            if !max {
                y = -y;
            }
            y
        })
        .collect();
    let internal = &tab.d[ncols] + &offset;
    let objective = if max { internal } else { -internal };
    let sol = LpSolution {
        status: LpStatus::Optimal,
        x,
        duals,
        objective,
        farkas: None,
        pivots: tab.pivots,
    };
    debug_assert_eq!(dot(&p.objective, &sol.x), sol.objective);
    Ok(sol)
}

/// Outcome of minimizing over an intersection of halfspaces.
#[derive(Debug, Clone, PartialEq)]
pub enum HalfspaceMin {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

/// `min c.z` subject to `a_i . z >= b_i`, with `z` free.
///
/// Solved through its dual `max b.y, A^T y = c, y >= 0`, which has only
/// `dim z` rows; the primal point is the vector of shadow prices.
pub fn minimize_over_halfspaces(
    rows: &[(Vec<Rational>, Rational)],
    c: &[Rational],
) -> Result<HalfspaceMin, Error> {
    let d = c.len();
    if rows.is_empty() {
        return Ok(if c.iter().all(Zero::is_zero) {
            HalfspaceMin::Optimal { value: zero(), point: vec![zero(); d] }
        } else {
            HalfspaceMin::Unbounded
        });
    }
    let b: Vec<Rational> = rows.iter().map(|r| r.1.clone()).collect();
    let mut dual = LpProblem::maximize(b);
    for j in 0..d {
        let col: Vec<Rational> = rows.iter().map(|r| r.0[j].clone()).collect();
        dual.add_row(col, RowKind::Eq, c[j].clone());
    }
    let sol = solve(&dual)?;
    match sol.status {
        LpStatus::Optimal => {
            let point = sol.duals.clone();
            debug_assert!(rows.iter().all(|(a, bi)| dot(a, &point) >= *bi));
            debug_assert_eq!(dot(c, &point), sol.objective);
            Ok(HalfspaceMin::Optimal { value: sol.objective, point })
        }
        LpStatus::Unbounded => Ok(HalfspaceMin::Infeasible),
        LpStatus::Infeasible => {
            let mut primal = LpProblem::minimize(vec![zero(); d]);
            for j in 0..d {
                primal.set_free(j);
            }
            for (a, bi) in rows {
                primal.add_row(a.clone(), RowKind::Ge, bi.clone());
            }
            Ok(match solve(&primal)?.status {
                LpStatus::Optimal => HalfspaceMin::Unbounded,
                _ => HalfspaceMin::Infeasible,
            })
        }
    }
}

/// Optimum of `min c_w w + c_y.y + c_x.x` over a system of inequalities in
/// `(w, y, x)`; all inequalities must share the same `y` and `x` lengths.
#[derive(Debug, Clone, PartialEq)]
pub enum InequalityMin {
    Optimal { value: Rational, w: Rational, y: Vec<Rational>, x: Vec<Rational> },
    Infeasible,
    Unbounded,
}

pub fn minimize_over_inequalities(
    ineqs: &[LinearInequality],
    c_w: &Rational,
    c_y: &[Rational],
    c_x: &[Rational],
) -> Result<InequalityMin, Error> {
    let (m, n) = (c_y.len(), c_x.len());
    if let Some(bad) = ineqs.iter().find(|q| q.dim_x() != n || (q.dim_y() != m && q.dim_y() != 0)) {
        return Err(Error::DimensionMismatch(format!(
            "inequality over {} y / {} x variables, objective over {m} / {n}",
            bad.dim_y(),
            bad.dim_x()
        )));
    }
    let rows: Vec<(Vec<Rational>, Rational)> = ineqs
        .iter()
        .map(|q| {
            let mut a = Vec::with_capacity(1 + m + n);
            a.push(q.w_coef.clone());
            if q.dim_y() == 0 {
                a.extend(std::iter::repeat_n(zero(), m));
            } else {
                a.extend(q.y_coef.iter().cloned());
            }
            a.extend(q.x_coef.iter().map(|c| -c));
            (a, q.constant.clone())
        })
        .collect();
    let mut c = Vec::with_capacity(1 + m + n);
    c.push(c_w.clone());
    c.extend(c_y.iter().cloned());
    c.extend(c_x.iter().cloned());
    Ok(match minimize_over_halfspaces(&rows, &c)? {
        HalfspaceMin::Optimal { value, point } => InequalityMin::Optimal {
            value,
            w: point[0].clone(),
            y: point[1..1 + m].to_vec(),
            x: point[1 + m..].to_vec(),
        },
        HalfspaceMin::Infeasible => InequalityMin::Infeasible,
        HalfspaceMin::Unbounded => InequalityMin::Unbounded,
    })
}

/// Is `point` in `conv(generators) + cone(rays)`?
pub fn membership(
    point: &[Rational],
    generators: &[Vec<Rational>],
    rays: &[Vec<Rational>],
) -> Result<bool, Error> {
    let d = point.len();
    if generators.iter().chain(rays).any(|g| g.len() != d) {
        return Err(Error::MalformedProblem("generator dimension mismatch".into()));
    }
    if generators.is_empty() {
        return Ok(false);
    }
    let nv = generators.len() + rays.len();
    let mut lp = LpProblem::maximize(vec![zero(); nv]);
    for i in 0..d {
        let coefs: Vec<Rational> =
            generators.iter().chain(rays).map(|g| g[i].clone()).collect();
        lp.add_row(coefs, RowKind::Eq, point[i].clone());
    }
    let conv: Vec<Rational> = (0..nv)
        .map(|k| if k < generators.len() { Rational::one() } else { zero() })
        .collect();
    lp.add_row(conv, RowKind::Eq, Rational::one());
    Ok(solve(&lp)?.status == LpStatus::Optimal)
}
