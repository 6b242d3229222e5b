//! Command implementations. Each returns a [`Report`]; failures of a
//! checked property set [`Status::Fail`] instead of returning an error.

use lnat::checkers::{check as run_check, Property, Violation};
use lnat::fnzoo::FunctionOracle;
use lnat::jointepi::{joint_hull_membership, separate_joint, JointInstance, JointPoint, Target};
use lnat::lattice::Permutation;
use lnat::misepi::{
    assemble_misepi_hull, build_misepi, cycle_inequality, facet_certificate_misepi, minimize_h, misepi_from_cycle,
    separate_misepi_in_box, weights_from_matrix, CycleSpec, Family, MixedInstance, MixedObjective, WeightVector,
    MIXED_HULL_BUDGET,
};
use lnat::mixing::{build_k, mixing_from_sepi_roundtrip, MixingInstance};
use lnat::oracle::{joint_enumerated_membership, lattice_min, mixed_integer_min, separation_lp_optimum};
use lnat::rat::{rat, zero};
use lnat::sepi::{assemble_hull_lp, minimize_cutting_plane, separate_in_box, HULL_BUDGET};
use lnat::{DiscreteBox, LinearInequality, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{cycle_from_arcs, FnSpec, Instance, Model};
use crate::report::{set_text, Item, Report};
use crate::{CliError, CubeArgs, JointPointArgs, PropertyArg, WeightArgs};

pub struct Options {
    pub seed: u64,
    pub jobs: usize,
}

fn function(inst: &Instance) -> Result<&FunctionOracle, CliError> {
    match &inst.model {
        Model::Function(f) => Ok(f),
        _ => Err(CliError::Usage(format!("this command needs a single function, the file holds a {}", inst.model.kind()))),
    }
}

fn mixed(inst: &Instance) -> Result<&MixedInstance, CliError> {
    match &inst.model {
        Model::Mixed(m) => Ok(m),
        _ => Err(CliError::Usage(format!("this command needs a mixed instance, the file holds a {}", inst.model.kind()))),
    }
}

fn joint(inst: &Instance) -> Result<&JointInstance, CliError> {
    match &inst.model {
        Model::Joint(j) => Ok(j),
        _ => Err(CliError::Usage(format!("this command needs a joint instance, the file holds a {}", inst.model.kind()))),
    }
}

/// The box used for cubes: the workbox if given, else the instance box.
fn cube_box(inst: &Instance) -> DiscreteBox {
    inst.workbox.clone().unwrap_or_else(|| inst.bx.clone())
}

fn dims(what: &str, got: usize, n: usize) -> Result<(), CliError> {
    if got == n {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{what} has {got} entries, the instance has n = {n}")))
    }
}

fn perm(delta: &[usize]) -> Result<Permutation, CliError> {
    Permutation::from_one_based(delta).map_err(|e| CliError::Usage(format!("--delta: {e}")))
}

fn header(inst: &Instance, rep: &mut Report) {
    rep.add("instance", Item::Text(inst.model.kind()));
    rep.add("box", Item::Text(inst.bx.to_string()));
    if let Some(wb) = &inst.workbox {
        rep.add("workbox", Item::Text(wb.to_string()));
    }
}

pub fn fmt(text: &str, canon: &str, check: bool) -> Report {
    let rep = Report::new("fmt");
    if !check {
        return rep.headline(canon.trim_end_matches('\n'));
    }
    if text == canon {
        rep.headline("canonical")
    } else {
        let mut rep = rep.headline("not canonical");
        rep.fail();
        rep
    }
}

pub fn check(inst: &Instance, prop: PropertyArg) -> Result<Report, CliError> {
    let f = function(inst)?;
    let bx = inst.finite_box()?;
    let property = match prop {
        PropertyArg::Lnat => Property::MidpointConvex,
        PropertyArg::LatticeSubmodular => Property::LatticeSubmodular,
        PropertyArg::TranslationSubmodular => Property::TranslationSubmodular,
        PropertyArg::LConvex => Property::LConvex,
        PropertyArg::IntegrallyConvex => Property::IntegrallyConvex,
    };
    let f = f.restrict(&bx)?;
    let res = run_check(property, &f, &bx)?;
    let verdict = if res.passed { "PASS" } else { "FAIL" };
    let mut rep = Report::new("check").headline(format!("{verdict} {} on {bx}", property.name()));
    header(inst, &mut rep);
    rep.add("property", Item::Text(property.name().into()));
    rep.add("passed", Item::Bool(res.passed));
    if let Some(r) = &res.increment {
        rep.add("increment", Item::Rat(r.clone()));
    }
    if let Some(w) = &res.witness {
        let kind = match w.violation {
            Violation::Midpoint => "midpoint",
            Violation::Lattice => "lattice",
            Violation::Translation => "translation",
            Violation::Increment => "increment",
            Violation::ExtensionMidpoint => "extension-midpoint",
        };
        let mut g = vec![
            ("violation".to_string(), Item::Text(kind.into())),
            ("x".to_string(), Item::Ints(w.x.clone())),
            ("y".to_string(), Item::Ints(w.y.clone())),
        ];
        if let Some(a) = w.alpha {
            g.push(("alpha".into(), Item::Text(a.to_string())));
        }
        g.push(("lhs".into(), Item::Rat(w.lhs.clone())));
        g.push(("rhs".into(), Item::Rat(w.rhs.clone())));
        g.push(("confirmed".into(), Item::Bool(w.confirm(&f))));
        rep.add("witness", Item::Group(g));
        rep.fail();
    }
    Ok(rep)
}

fn cube_items(rep: &mut Report, p: &[i64], delta: &Permutation) {
    rep.add("p", Item::Ints(p.to_vec()));
    rep.add("delta", Item::Ints(delta.one_based().iter().map(|&d| d as i64).collect()));
}

pub fn sepi_separate(inst: &Instance, x: &[Rational], w: &Rational) -> Result<Report, CliError> {
    let f = function(inst)?;
    dims("x", x.len(), inst.dim())?;
    let cert = separate_in_box(f, &cube_box(inst), x, w)?;
    let verdict = if cert.is_violated() { "violated" } else { "not violated" };
    let mut rep = Report::new("sepi separate").headline(format!("{} ({verdict})", cert.inequality));
    header(inst, &mut rep);
    cube_items(&mut rep, &cert.p, &cert.delta);
    rep.add("lambda", Item::Rats(cert.lambda.clone()));
    rep.add("inequality", Item::Ineq(cert.inequality.clone()));
    rep.add("violation", Item::Rat(cert.violation.clone()));
    rep.add("violated", Item::Bool(cert.is_violated()));
    Ok(rep)
}

fn ineq_list(v: &[LinearInequality]) -> Item {
    Item::List(v.iter().cloned().map(Item::Ineq).collect())
}

pub fn sepi_hull(inst: &Instance) -> Result<Report, CliError> {
    let f = function(inst)?;
    let bx = inst.finite_box()?;
    let rows = assemble_hull_lp(f, &bx, HULL_BUDGET)?;
    let mut rep = Report::new("sepi hull").headline(format!("{} inequalities", rows.len()));
    header(inst, &mut rep);
    rep.add("count", Item::Count(rows.len() as u128));
    rep.add("inequalities", ineq_list(&rows));
    Ok(rep)
}

pub fn minimize(inst: &Instance, cw: &Rational, cx: &[Rational]) -> Result<Report, CliError> {
    let f = function(inst)?;
    dims("cx", cx.len(), inst.dim())?;
    let bx = inst.finite_box()?;
    let res = minimize_cutting_plane(f, &bx, cx, cw, &inst.extras)?;
    let mut rep = Report::new("minimize").headline(format!("optimum {}", lnat::fmt_compact(&res.optimum)));
    header(inst, &mut rep);
    rep.add("optimum", Item::Rat(res.optimum.clone()));
    rep.add("x", Item::Rats(res.x.clone()));
    rep.add("w", Item::Rat(res.w.clone()));
    rep.add("argmin", res.argmin.as_ref().map_or(Item::Text("none".into()), |a| Item::Ints(a.clone())));
    rep.add("rounds", Item::Count(res.rounds as u128));
    rep.add("cuts", Item::Count(res.cuts.len() as u128));
    Ok(rep)
}

fn mixing_instance(inst: &Instance) -> Result<MixingInstance, CliError> {
    match &inst.file.function {
        FnSpec::GenIntMixing { q } => Ok(MixingInstance::new(q.iter().map(|r| r.0.clone()).collect())?),
        _ => Err(CliError::Usage("mixing commands need a gen-int-mixing function".into())),
    }
}

pub fn mixing_buildk(inst: &Instance, cube: &CubeArgs) -> Result<Report, CliError> {
    let m = mixing_instance(inst)?;
    dims("p", cube.p.len(), m.dim())?;
    let d = perm(&cube.delta)?;
    let (k, form) = build_k(&m, &cube.p, &d)?;
    let rt = mixing_from_sepi_roundtrip(&m, &cube.p, &d)?;
    let mut rep = Report::new("mixing buildk").headline(format!("K={} form {form}", set_text(&k)));
    header(inst, &mut rep);
    rep.add("K", Item::Set(k));
    rep.add("form", Item::Text(form.to_string()));
    rep.add("sepi", Item::Ineq(rt.sepi));
    Ok(rep)
}

pub fn mixing_roundtrip(inst: &Instance, cube: &CubeArgs) -> Result<Report, CliError> {
    let m = mixing_instance(inst)?;
    dims("p", cube.p.len(), m.dim())?;
    let d = perm(&cube.delta)?;
    let rt = mixing_from_sepi_roundtrip(&m, &cube.p, &d)?;
    let verdict = if rt.equal { "equal" } else { "DIFFERENT" };
    let mut rep = Report::new("mixing roundtrip").headline(format!("K={} form {}: {verdict}", set_text(&rt.k), rt.form));
    header(inst, &mut rep);
    rep.add("K", Item::Set(rt.k.clone()));
    rep.add("form", Item::Text(rt.form.to_string()));
    rep.add("sepi", Item::Ineq(rt.sepi.clone()));
    rep.add("mixing", Item::Ineq(rt.mixing.clone()));
    rep.add("equal", Item::Bool(rt.equal));
    if !rt.equal {
        rep.fail();
    }
    Ok(rep)
}

fn joint_point(j: &JointInstance, a: &JointPointArgs) -> Result<JointPoint, CliError> {
    dims("w", a.w.len(), j.k())?;
    dims("x", a.x.len(), j.dim())?;
    match (&a.eta, j.is_linked()) {
        (Some(eta), true) => {
            dims("eta", eta.len(), j.k())?;
            Ok(JointPoint::linked(eta.clone(), a.w.clone(), a.x.clone()))
        }
        (None, false) => Ok(JointPoint::new(a.w.clone(), a.x.clone())),
        (None, true) => Err(CliError::Usage("linked instances need --eta".into())),
        (Some(_), false) => Err(CliError::Usage("--eta is only meaningful for linked instances".into())),
    }
}

pub fn joint_separate(inst: &Instance, a: &JointPointArgs) -> Result<Report, CliError> {
    let j = joint(inst)?;
    let pt = joint_point(j, a)?;
    let cuts = separate_joint(j, &pt)?;
    let mut rep = Report::new("joint separate").headline(format!("{} violated cuts", cuts.len()));
    header(inst, &mut rep);
    let items = cuts
        .iter()
        .map(|c| {
            let target = match c.target {
                Target::F(i) => format!("f{}", i + 1),
                Target::G(i) => format!("g{}", i + 1),
            };
            Item::Group(vec![
                ("target".into(), Item::Text(target)),
                ("p".into(), Item::Ints(c.certificate.p.clone())),
                ("delta".into(), Item::Ints(c.certificate.delta.one_based().iter().map(|&d| d as i64).collect())),
                ("inequality".into(), Item::Ineq(c.certificate.inequality.clone())),
                ("violation".into(), Item::Rat(c.certificate.violation.clone())),
            ])
        })
        .collect();
    rep.add("cuts", Item::List(items));
    Ok(rep)
}

pub fn joint_member(inst: &Instance, a: &JointPointArgs) -> Result<Report, CliError> {
    let j = joint(inst)?;
    let pt = joint_point(j, a)?;
    let bx = inst.finite_box()?;
    let member = joint_hull_membership(j, &pt, &bx)?;
    let enumerated = joint_enumerated_membership(j, &pt, &bx)?;
    let verdict = if member { "member" } else { "not a member" };
    let mut rep = Report::new("joint member").headline(verdict);
    header(inst, &mut rep);
    rep.add("member", Item::Bool(member));
    rep.add("enumerated", Item::Bool(enumerated));
    rep.add("agree", Item::Bool(member == enumerated));
    if member != enumerated {
        rep.fail();
    }
    Ok(rep)
}

fn misepi_items(rep: &mut Report, wt: &WeightVector, p: &[i64], d: &Permutation, ineq: &LinearInequality) {
    rep.add("u0", Item::Rat(wt.u0.clone()));
    rep.add("u", Item::Rats(wt.u.clone()));
    cube_items(rep, p, d);
    rep.add("inequality", Item::Ineq(ineq.clone()));
}

pub fn misepi_separate(inst: &Instance, w: &Rational, y: Option<&[Rational]>, x: &[Rational]) -> Result<Report, CliError> {
    let m = mixed(inst)?;
    let n = m.dim();
    dims("x", x.len(), n)?;
    let y = match y {
        Some(y) => {
            dims("y", y.len(), n)?;
            y.to_vec()
        }
        None => vec![zero(); n],
    };
    let cut = separate_misepi_in_box(m, &cube_box(inst), w, &y, x)?;
    let mut rep = Report::new("misepi separate");
    match cut {
        None => {
            rep = rep.headline("no violated inequality");
            header(inst, &mut rep);
            rep.add("violated", Item::Bool(false));
        }
        Some(c) => {
            rep = rep.headline(format!("{} (violated by {})", c.misepi.inequality, lnat::fmt_compact(&c.violation)));
            header(inst, &mut rep);
            rep.add("violated", Item::Bool(true));
            misepi_items(&mut rep, &c.misepi.weights, &c.misepi.p, &c.misepi.delta, &c.misepi.inequality);
            rep.add("lambda", Item::Rats(c.lambda.clone()));
            rep.add("violation", Item::Rat(c.violation.clone()));
        }
    }
    Ok(rep)
}

pub fn misepi_hull(inst: &Instance) -> Result<Report, CliError> {
    let m = mixed(inst)?;
    let bx = inst.finite_box()?;
    let rows = assemble_misepi_hull(m, &bx, MIXED_HULL_BUDGET)?;
    let mut rep = Report::new("misepi hull").headline(format!("{} inequalities", rows.len()));
    header(inst, &mut rep);
    rep.add("count", Item::Count(rows.len() as u128));
    rep.add("inequalities", ineq_list(&rows));
    Ok(rep)
}

fn weights(n: usize, a: &WeightArgs) -> Result<WeightVector, CliError> {
    let u = match (&a.u, &a.matrix) {
        (Some(u), None) => u.clone(),
        (None, Some(b)) => {
            let m = b.len();
            if m == 0 || m > n || b.iter().any(|r| r.len() != m) {
                return Err(CliError::Usage(format!("--matrix must be square of size at most {n}")));
            }
            let um = weights_from_matrix(b).ok_or_else(|| CliError::Usage("--matrix is singular".into()))?;
            let mut u = vec![zero(); n];
            u[..m].clone_from_slice(&um);
            u
        }
        _ => return Err(CliError::Usage("give exactly one of --u and --matrix".into())),
    };
    dims("u", u.len(), n)?;
    WeightVector::new(a.u0.clone(), u).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn misepi_facet(inst: &Instance, a: &WeightArgs, cube: &CubeArgs) -> Result<Report, CliError> {
    let m = mixed(inst)?;
    let n = m.dim();
    dims("p", cube.p.len(), n)?;
    let d = perm(&cube.delta)?;
    let wt = weights(n, a)?;
    let built = build_misepi(m, &wt, &cube.p, &d)?;
    let cert = facet_certificate_misepi(m, &wt, &cube.p, &d)?;
    let verdict = if cert.rank_check { "facet" } else { "NOT certified" };
    let mut rep = Report::new("misepi facet").headline(format!("{} ({verdict})", built.inequality));
    header(inst, &mut rep);
    misepi_items(&mut rep, &wt, &cube.p, &d, &built.inequality);
    rep.add("tight_points", Item::Count(cert.points.len() as u128));
    rep.add("all_tight", Item::Bool(cert.all_tight));
    rep.add("affine_rank", Item::Count(cert.rank as u128));
    rep.add("required_rank", Item::Count(cert.required_rank as u128));
    rep.add("facet", Item::Bool(cert.rank_check));
    if !cert.rank_check {
        rep.add("points", Item::List(cert.points.iter().cloned().map(Item::Rats).collect()));
        rep.fail();
    }
    Ok(rep)
}

pub fn misepi_cycle(inst: &Instance, arcs: Option<&[(usize, usize)]>) -> Result<Report, CliError> {
    let m = mixed(inst)?;
    let Family::Cmix { q } = m.family() else {
        return Err(CliError::Usage("cycle inequalities need a cmix instance".into()));
    };
    let cycles: Vec<(Vec<(usize, usize)>, CycleSpec)> = match arcs {
        Some(a) => vec![(a.to_vec(), cycle_from_arcs(q, a).map_err(|e| CliError::Usage(format!("--arcs: {e}")))?)],
        None if !inst.cycles.is_empty() => inst.file.cycles.iter().cloned().zip(inst.cycles.iter().cloned()).collect(),
        None => return Err(CliError::Usage("no cycles: pass --arcs or list them in the file".into())),
    };
    let mut rep = Report::new("misepi cycle");
    header(inst, &mut rep);
    let mut items = Vec::new();
    let mut all_equal = true;
    let mut first = None;
    for (arcs, c) in &cycles {
        let cyc = cycle_inequality(m, c)?;
        let (wt, p, d) = misepi_from_cycle(m, c)?;
        let built = build_misepi(m, &wt, &p, &d)?.inequality;
        let equal = built.same_halfspace(&cyc);
        all_equal &= equal;
        first.get_or_insert_with(|| built.clone());
        let arc_text: Vec<String> = arcs.iter().map(|(j, k)| format!("({j},{k})")).collect();
        items.push(Item::Group(vec![
            ("arcs".into(), Item::Text(arc_text.join(" "))),
            ("cycle".into(), Item::Ineq(cyc)),
            ("u0".into(), Item::Rat(wt.u0.clone())),
            ("u".into(), Item::Rats(wt.u.clone())),
            ("p".into(), Item::Ints(p)),
            ("delta".into(), Item::Ints(d.one_based().iter().map(|&v| v as i64).collect())),
            ("misepi".into(), Item::Ineq(built)),
            ("equal".into(), Item::Bool(equal)),
        ]));
    }
    if cycles.len() == 1 {
        rep = rep.headline(first.expect("one cycle").to_string());
    } else {
        rep = rep.headline(format!("{} cycles", cycles.len()));
    }
    rep.add("cycles", Item::List(items));
    if !all_equal {
        rep.fail();
    }
    Ok(rep)
}

pub fn misepi_minimize(inst: &Instance, cw: &Rational, cy: &[Rational], cx: &[Rational]) -> Result<Report, CliError> {
    let m = mixed(inst)?;
    let n = m.dim();
    dims("cy", cy.len(), n)?;
    dims("cx", cx.len(), n)?;
    let bx = inst.finite_box()?;
    let obj = MixedObjective { c_w: cw.clone(), c_y: cy.to_vec(), c_x: cx.to_vec() };
    let res = minimize_h(m, &bx, &obj, &inst.extras)?;
    let mut rep = Report::new("misepi minimize").headline(format!("optimum {}", lnat::fmt_compact(&res.optimum)));
    header(inst, &mut rep);
    rep.add("optimum", Item::Rat(res.optimum.clone()));
    rep.add("w", Item::Rat(res.w.clone()));
    rep.add("y", Item::Rats(res.y.clone()));
    rep.add("x", Item::Rats(res.x.clone()));
    rep.add("argmin", res.argmin.as_ref().map_or(Item::Text("none".into()), |a| Item::Ints(a.clone())));
    rep.add("rounds", Item::Count(res.rounds as u128));
    rep.add("cuts", Item::Count(res.cuts.len() as u128));
    Ok(rep)
}

/// A rational in `[lo, hi]` with denominator at most `den`.
fn rational_in(r: &mut impl Rng, lo: i64, hi: i64, den: i64) -> Rational {
    let d = r.random_range(1..=den);
    rat(r.random_range(lo * d..=hi * d), d)
}

fn random_point(r: &mut impl Rng, bx: &DiscreteBox) -> Result<Vec<Rational>, CliError> {
    let (lo, hi) = bx.finite_bounds()?;
    Ok(lo.iter().zip(&hi).map(|(&l, &u)| rational_in(r, l, u, 6)).collect())
}

/// One randomized comparison; `Err` holds the mismatch description.
type Trial = Result<Result<(), String>, CliError>;

fn trial(inst: &Instance, bx: &DiscreteBox, r: &mut ChaCha8Rng) -> Trial {
    match &inst.model {
        Model::Function(f) => {
            let x = random_point(r, bx)?;
            let w = rational_in(r, -5, 5, 4);
            let greedy = separate_in_box(f, bx, &x, &w)?.violation;
            let lp = separation_lp_optimum(f, &x, &w, bx)?;
            if greedy != lp {
                return Ok(Err(format!("separation at x = {}: greedy {greedy}, LP {lp}", fmt_vec(&x))));
            }
            let c_w = rational_in(r, 0, 2, 4) + rat(1, 4);
            let c_x: Vec<Rational> = (0..bx.dim()).map(|_| rational_in(r, -4, 4, 4)).collect();
            let cp = minimize_cutting_plane(f, bx, &c_x, &c_w, &[])?.optimum;
            let (brute, _) = lattice_min(f, &c_w, &c_x, bx)?;
            if cp != brute {
                return Ok(Err(format!("minimum for c_w = {c_w}, c_x = {}: cutting planes {cp}, enumeration {brute}", fmt_vec(&c_x))));
            }
            Ok(Ok(()))
        }
        Model::Mixed(m) => {
            let n = m.dim();
            let obj = loop {
                let obj = MixedObjective {
                    c_w: rational_in(r, 0, 2, 4) + rat(1, 4),
                    c_y: (0..n).map(|_| rational_in(r, 0, 3, 3)).collect(),
                    c_x: (0..n).map(|_| rational_in(r, -3, 3, 3)).collect(),
                };
                if obj.check(n).is_ok() {
                    break obj;
                }
            };
            let cp = minimize_h(m, bx, &obj, &[])?.optimum;
            let brute = mixed_integer_min(m, &obj, bx)?.value;
            if cp != brute {
                return Ok(Err(format!(
                    "minimum for c_w = {}, c_y = {}, c_x = {}: cutting planes {cp}, enumeration {brute}",
                    obj.c_w,
                    fmt_vec(&obj.c_y),
                    fmt_vec(&obj.c_x)
                )));
            }
            Ok(Ok(()))
        }
        Model::Joint(j) => {
            let x = random_point(r, bx)?;
            let round: Vec<i64> = x.iter().map(|v| v.round().to_integer().try_into().expect("small")).collect();
            let jitter = |r: &mut ChaCha8Rng, f: &FunctionOracle| f.eval(&round) + rational_in(r, -1, 1, 4);
            let w: Vec<Rational> = j.fs().iter().map(|f| jitter(r, f)).collect();
            let pt = match j.gs() {
                Some(gs) => JointPoint::linked(gs.iter().map(|g| jitter(r, g)).collect(), w, x),
                None => JointPoint::new(w, x),
            };
            let a = joint_hull_membership(j, &pt, bx)?;
            let b = joint_enumerated_membership(j, &pt, bx)?;
            if a != b {
                return Ok(Err(format!("membership of w = {}, x = {}: hulls {a}, enumeration {b}", fmt_vec(&pt.w), fmt_vec(&pt.x))));
            }
            Ok(Ok(()))
        }
    }
}

fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(lnat::fmt_compact).collect();
    format!("({})", parts.join(", "))
}

/// Trial `i` draws from its own ChaCha stream, so outcomes do not depend
/// on `--jobs`.
fn trial_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(i as u64);
    r
}

pub fn oracle_compare(inst: &Instance, trials: usize, opts: &Options) -> Result<Report, CliError> {
    let bx = inst.finite_box()?;
    if let Model::Mixed(m) = &inst.model {
        if !bx.is_subset_of(m.domain()) {
            return Err(CliError::validation("workbox", "outside the instance domain"));
        }
    }
    let jobs = opts.jobs.clamp(1, trials.max(1));
    let mut outcomes: Vec<Option<Trial>> = (0..trials).map(|_| None).collect();
    std::thread::scope(|s| {
        let size = trials.div_ceil(jobs).max(1);
        for (c, chunk) in outcomes.chunks_mut(size).enumerate() {
            let bx = &bx;
            s.spawn(move || {
                for (k, slot) in chunk.iter_mut().enumerate() {
                    let i = c * size + k;
                    *slot = Some(trial(inst, bx, &mut trial_rng(opts.seed, i)));
                }
            });
        }
    });
    let mut mismatches = Vec::new();
    for (i, o) in outcomes.into_iter().enumerate() {
        match o.expect("every trial ran") {
            Err(e) => return Err(e),
            Ok(Err(msg)) => mismatches.push(Item::Text(format!("trial {i}: {msg}"))),
            Ok(Ok(())) => {}
        }
    }
    let what = match &inst.model {
        Model::Function(_) => "separation and minimization",
        Model::Mixed(_) => "mixed-integer minimization",
        Model::Joint(_) => "joint hull membership",
    };
    let agreed = trials - mismatches.len();
    let mut rep = Report::new("oracle compare").headline(format!("{agreed}/{trials} trials agree ({what})"));
    header(inst, &mut rep);
    rep.add("seed", Item::Text(opts.seed.to_string()));
    rep.add("trials", Item::Count(trials as u128));
    rep.add("agreed", Item::Count(agreed as u128));
    if !mismatches.is_empty() {
        rep.add("mismatches", Item::List(mismatches));
        rep.fail();
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_streams_are_independent_of_jobs() {
        let a: Vec<i64> = (0..4).map(|i| trial_rng(7, i).random_range(0..1000)).collect();
        let b: Vec<i64> = (0..4).map(|i| trial_rng(7, i).random_range(0..1000)).collect();
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
    }
}
