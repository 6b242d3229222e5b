//! Instance files.
//!
//! An instance is a JSON document whose rationals are strings (`"3/10"`,
//! `"-2"`); floats are rejected. The canonical rendering written by
//! [`to_canonical`] uses `num/den` everywhere, two-space indentation and
//! inline arrays of scalars, so parsing and re-serializing a canonical file
//! reproduces it byte for byte.

use std::fmt;

use lnat::fnzoo::{
    add, dilate, make_bivariate_diff, make_gen_int_mixing, make_max_component, make_max_residual, make_nonconvex_demo,
    make_quadratic, max_affine_pair, scale, tabulated, FunctionOracle, UnivariateTable,
};
use lnat::jointepi::JointInstance;
use lnat::misepi::{CycleSpec, Family, MixedInstance};
use lnat::mixing::MixingInstance;
use lnat::{fmt_rational, parse_rational, Bound, DiscreteBox, LinearInequality, Rational};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::CliError;

pub const FORMAT_VERSION: u32 = 1;

/// An exact rational, serialized as a string.
#[derive(Debug, Clone, PartialEq)]
pub struct Rat(pub Rational);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string such as \"3/10\"")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Rat, E> {
                parse_rational(s).map(Rat).map_err(|_| E::custom(format!("invalid rational {s:?}")))
            }
        }
        d.deserialize_str(V)
    }
}

/// A coordinate bound: an integer, `"-inf"` or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSpec(pub Bound);

impl Serialize for BoundSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Bound::Finite(v) => s.serialize_i64(v),
            Bound::NegInf => s.serialize_str("-inf"),
            Bound::PosInf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for BoundSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = BoundSpec;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer, \"-inf\" or \"inf\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<BoundSpec, E> {
                Ok(BoundSpec(Bound::Finite(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<BoundSpec, E> {
                i64::try_from(v).map(|v| BoundSpec(Bound::Finite(v))).map_err(|_| E::custom("bound out of range"))
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<BoundSpec, E> {
                match s {
                    "-inf" => Ok(BoundSpec(Bound::NegInf)),
                    "inf" => Ok(BoundSpec(Bound::PosInf)),
                    _ => Err(E::custom(format!("invalid bound {s:?}"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    pub lower: Vec<BoundSpec>,
    pub upper: Vec<BoundSpec>,
}

impl BoxSpec {
    fn build(&self, field: &str) -> Result<DiscreteBox, CliError> {
        let lo = self.lower.iter().map(|b| b.0).collect();
        let hi = self.upper.iter().map(|b| b.0).collect();
        DiscreteBox::new(lo, hi).map_err(|e| CliError::validation(field, e))
    }
}

/// Function specifications, tagged by `"tag"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FnSpec {
    /// `max(0, max_i q_i - x_i)`; every `q_i` must lie in `[0, 1)`.
    GenIntMixing { q: Vec<Rat> },
    MaxResidual { q: Vec<Rat> },
    MaxComponent,
    /// `f(x_1 - x_2)` with `f(start + k) = values[k]`.
    BivariateDiff { start: i64, values: Vec<Rat> },
    Quadratic { q: Vec<Vec<Rat>>, b: Vec<Rat> },
    AffinePair { a: Vec<Rat>, a0: Rat, b: Vec<Rat>, b0: Rat },
    NonconvexDemo,
    /// Values over the box in lexicographic order.
    Tabulated { values: Vec<Rat> },
    Scaled { alpha: Rat, inner: Box<FnSpec> },
    /// `inner(a + beta x)`, with `inner` defined on `inner_box`.
    Dilated { a: Vec<i64>, beta: i64, inner_box: BoxSpec, inner: Box<FnSpec> },
    Sum { left: Box<FnSpec>, right: Box<FnSpec> },
    /// Continuous mixing: `h^i = q_i - x_i`.
    Cmix { q: Vec<Rat> },
    /// Binary multi-capacity mixing: `h^i = q_i - c_i x_i`.
    Mcmix { q: Vec<Rat>, c: Vec<Rat> },
    /// `max_i h^i(x) - y_i` with arbitrary components.
    Mixed { components: Vec<FnSpec> },
    /// Several functions on one box; `linked` adds the second family.
    Joint {
        functions: Vec<FnSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        linked: Option<Vec<FnSpec>>,
    },
}

/// `w w + y.y >= x.x + constant`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IneqSpec {
    pub w: Rat,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub y: Vec<Rat>,
    pub x: Vec<Rat>,
    pub constant: Rat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format: u32,
    pub function: FnSpec,
    #[serde(rename = "box")]
    pub bx: BoxSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workbox: Option<BoxSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extras: Vec<IneqSpec>,
    /// Arc lists, 1-based.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cycles: Vec<Vec<(usize, usize)>>,
}

/// What an instance file describes.
#[derive(Debug, Clone)]
pub enum Model {
    Function(FunctionOracle),
    Mixed(MixedInstance),
    Joint(JointInstance),
}

impl Model {
    pub fn kind(&self) -> String {
        match self {
            Model::Function(f) => format!("{:?} oracle", f.tag()),
            Model::Mixed(m) => match m.family() {
                Family::Cmix { .. } => "continuous mixing".into(),
                Family::Mcmix { .. } => "binary multi-capacity mixing".into(),
                Family::General => "mixed-integer max".into(),
            },
            Model::Joint(j) if j.is_linked() => format!("linked joint epigraph (k = {})", j.k()),
            Model::Joint(j) => format!("joint epigraph (k = {})", j.k()),
        }
    }
}

/// A validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub file: InstanceFile,
    pub model: Model,
    pub bx: DiscreteBox,
    pub workbox: Option<DiscreteBox>,
    pub extras: Vec<LinearInequality>,
    pub cycles: Vec<CycleSpec>,
}

impl Instance {
    pub fn dim(&self) -> usize {
        self.bx.dim()
    }

    /// The finite box used for enumeration: `workbox`, else `box`.
    pub fn finite_box(&self) -> Result<DiscreteBox, CliError> {
        let bx = self.workbox.clone().unwrap_or_else(|| self.bx.clone());
        if !bx.is_finite() {
            return Err(CliError::validation("workbox", "this command needs a finite workbox"));
        }
        Ok(bx)
    }
}

fn rats(v: &[Rat]) -> Vec<Rational> {
    v.iter().map(|r| r.0.clone()).collect()
}

fn build_fn(spec: &FnSpec, bx: &DiscreteBox, field: &str) -> Result<FunctionOracle, CliError> {
    let bad = |e: lnat::Error| CliError::validation(field, e);
    let on_box = |f: FunctionOracle| f.restrict(bx).map_err(bad);
    let len = |what: &str, got: usize| {
        if got == bx.dim() {
            Ok(())
        } else {
            Err(CliError::validation(&format!("{field}.{what}"), format!("length {got}, box has dimension {}", bx.dim())))
        }
    };
    match spec {
        FnSpec::GenIntMixing { q } => {
            len("q", q.len())?;
            MixingInstance::new(rats(q)).map_err(|e| CliError::validation(&format!("{field}.q"), e))?;
            on_box(make_gen_int_mixing(rats(q)))
        }
        FnSpec::MaxResidual { q } => {
            len("q", q.len())?;
            on_box(make_max_residual(rats(q)))
        }
        FnSpec::MaxComponent => on_box(make_max_component(bx.dim())),
        FnSpec::BivariateDiff { start, values } => {
            let table = UnivariateTable::new(*start, rats(values));
            make_bivariate_diff(table, bx.clone()).map_err(bad)
        }
        FnSpec::Quadratic { q, b } => {
            len("b", b.len())?;
            make_quadratic(q.iter().map(|r| rats(r)).collect(), rats(b), bx.clone()).map_err(bad)
        }
        FnSpec::AffinePair { a, a0, b, b0 } => {
            len("a", a.len())?;
            len("b", b.len())?;
            max_affine_pair(rats(a), a0.0.clone(), rats(b), b0.0.clone(), bx.clone()).map_err(bad)
        }
        FnSpec::NonconvexDemo => on_box(make_nonconvex_demo()),
        FnSpec::Tabulated { values } => {
            let count = bx.num_points().map_err(bad)?;
            if count != values.len() as u128 {
                return Err(CliError::validation(&format!("{field}.values"), format!("{} values for {count} box points", values.len())));
            }
            tabulated(bx.clone(), rats(values)).map_err(bad)
        }
        FnSpec::Scaled { alpha, inner } => {
            let g = build_fn(inner, bx, &format!("{field}.inner"))?;
            scale(alpha.0.clone(), &g).map_err(|e| CliError::validation(&format!("{field}.alpha"), e))
        }
        FnSpec::Dilated { a, beta, inner_box, inner } => {
            let ib = inner_box.build(&format!("{field}.inner_box"))?;
            let g = build_fn(inner, &ib, &format!("{field}.inner"))?;
            on_box(dilate(a.clone(), *beta, &g).map_err(bad)?)
        }
        FnSpec::Sum { left, right } => {
            let l = build_fn(left, bx, &format!("{field}.left"))?;
            let r = build_fn(right, bx, &format!("{field}.right"))?;
            add(&l, &r).map_err(bad)
        }
        FnSpec::Cmix { .. } | FnSpec::Mcmix { .. } | FnSpec::Mixed { .. } | FnSpec::Joint { .. } => {
            Err(CliError::validation(field, "expected a single function here"))
        }
    }
}

fn build_model(spec: &FnSpec, bx: &DiscreteBox) -> Result<Model, CliError> {
    let field = "function";
    match spec {
        FnSpec::Cmix { q } => {
            let m = MixedInstance::cmix(rats(q)).map_err(|e| CliError::validation("function.q", e))?;
            require_box(bx, m.domain(), q.len())?;
            Ok(Model::Mixed(m))
        }
        FnSpec::Mcmix { q, c } => {
            let m = MixedInstance::mcmix(rats(q), rats(c)).map_err(|e| CliError::validation("function.c", e))?;
            require_box(bx, m.domain(), q.len())?;
            Ok(Model::Mixed(m))
        }
        FnSpec::Mixed { components } => {
            let hs = components
                .iter()
                .enumerate()
                .map(|(i, s)| build_fn(s, bx, &format!("function.components[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            MixedInstance::general(hs).map(Model::Mixed).map_err(|e| CliError::validation("function.components", e))
        }
        FnSpec::Joint { functions, linked } => {
            let fs = functions
                .iter()
                .enumerate()
                .map(|(i, s)| build_fn(s, bx, &format!("function.functions[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let inst = match linked {
                None => JointInstance::new(fs),
                Some(gs) => {
                    let gs = gs
                        .iter()
                        .enumerate()
                        .map(|(i, s)| build_fn(s, bx, &format!("function.linked[{i}]")))
                        .collect::<Result<Vec<_>, _>>()?;
                    JointInstance::linked(fs, gs)
                }
            };
            inst.map(Model::Joint).map_err(|e| CliError::validation("function", e))
        }
        other => build_fn(other, bx, field).map(Model::Function),
    }
}

/// The mixing families carry their own domain; the file's box must lie in it.
fn require_box(bx: &DiscreteBox, domain: &DiscreteBox, n: usize) -> Result<(), CliError> {
    if bx.dim() != n {
        return Err(CliError::validation("box", format!("dimension {}, instance has n = {n}", bx.dim())));
    }
    if !bx.is_subset_of(domain) {
        return Err(CliError::validation("box", format!("{bx} is not inside the instance domain {domain}")));
    }
    Ok(())
}

fn build_extra(spec: &IneqSpec, n: usize, mixed: bool, field: &str) -> Result<LinearInequality, CliError> {
    if spec.x.len() != n {
        return Err(CliError::validation(&format!("{field}.x"), format!("length {}, expected {n}", spec.x.len())));
    }
    let y = match (spec.y.is_empty(), mixed) {
        (true, true) => vec![lnat::rat::zero(); n],
        (true, false) => Vec::new(),
        (false, true) if spec.y.len() == n => rats(&spec.y),
        (false, true) => {
            return Err(CliError::validation(&format!("{field}.y"), format!("length {}, expected {n}", spec.y.len())))
        }
        (false, false) => return Err(CliError::validation(&format!("{field}.y"), "only mixed instances have y")),
    };
    let ineq = LinearInequality::new(spec.w.0.clone(), y, rats(&spec.x), spec.constant.0.clone());
    if ineq.canonicalize().is_err() {
        return Err(CliError::validation(field, "all variable coefficients are zero"));
    }
    Ok(ineq)
}

/// Parses and validates an instance from text.
pub fn parse_instance(text: &str) -> Result<Instance, CliError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    validate(file)
}

pub fn validate(file: InstanceFile) -> Result<Instance, CliError> {
    if file.format != FORMAT_VERSION {
        return Err(CliError::validation("format", format!("unsupported version {}, expected {FORMAT_VERSION}", file.format)));
    }
    let bx = file.bx.build("box")?;
    let model = build_model(&file.function, &bx)?;
    let n = bx.dim();
    let workbox = match &file.workbox {
        None => None,
        Some(spec) => {
            let wb = spec.build("workbox")?;
            if !wb.is_finite() {
                return Err(CliError::validation("workbox", "must be finite"));
            }
            if !wb.is_subset_of(&bx) {
                return Err(CliError::validation("workbox", format!("{wb} is not inside the box {bx}")));
            }
            Some(wb)
        }
    };
    let mixed = matches!(model, Model::Mixed(_));
    let extras = file
        .extras
        .iter()
        .enumerate()
        .map(|(i, s)| build_extra(s, n, mixed, &format!("extras[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut cycles = Vec::new();
    if !file.cycles.is_empty() {
        let q = match &model {
            Model::Mixed(m) => match m.family() {
                Family::Cmix { q } => q.clone(),
                _ => return Err(CliError::validation("cycles", "cycles need a cmix instance")),
            },
            _ => return Err(CliError::validation("cycles", "cycles need a cmix instance")),
        };
        for (i, arcs) in file.cycles.iter().enumerate() {
            cycles.push(cycle_from_arcs(&q, arcs).map_err(|e| CliError::validation(&format!("cycles[{i}]"), e))?);
        }
    }
    Ok(Instance { file, model, bx, workbox, extras, cycles })
}

/// Builds a cycle from 1-based arcs.
pub fn cycle_from_arcs(q: &[Rational], arcs: &[(usize, usize)]) -> Result<CycleSpec, String> {
    let mut zero_based = Vec::with_capacity(arcs.len());
    for &(j, k) in arcs {
        if j == 0 || k == 0 {
            return Err(format!("arc ({j}, {k}): nodes are numbered from 1"));
        }
        zero_based.push((j - 1, k - 1));
    }
    CycleSpec::new(q, zero_based).map_err(|e| e.to_string())
}

/// Canonical text of an instance file, ending in a newline.
pub fn to_canonical(file: &InstanceFile) -> String {
    let value = serde_json::to_value(file).expect("instance files serialize");
    let mut out = String::new();
    write_value(&mut out, &value, 0);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, val)) in map.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, val, depth + 1);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(out, depth);
            out.push('}');
        }
        // scalars and arrays of arrays of scalars (matrices, arc lists) stay on one line
        Value::Array(items) if items.iter().all(|x| is_scalar(x) || matches!(x, Value::Array(a) if a.iter().all(is_scalar))) => {
            out.push_str(&v.to_string().replace(',', ", "));
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, val) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, val, depth + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(out, depth);
            out.push(']');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}
