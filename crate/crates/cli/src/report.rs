//! Structured command reports, rendered as text or JSON from one source.

use lnat::rat::{fmt_compact, fmt_decimal};
use lnat::{LinearInequality, Rational};
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone)]
pub enum Item {
    Text(String),
    Bool(bool),
    Count(u128),
    Rat(Rational),
    Rats(Vec<Rational>),
    Ints(Vec<i64>),
    /// Indices shown 1-based as `{3,4,6,9}`.
    Set(Vec<usize>),
    Ineq(LinearInequality),
    List(Vec<Item>),
    Group(Vec<(String, Item)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A checked property failed; the report carries the witness.
    Fail,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub headline: Option<String>,
    pub entries: Vec<(String, Item)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.into(), status: Status::Ok, headline: None, entries: Vec::new() }
    }

    pub fn headline(mut self, line: impl Into<String>) -> Self {
        self.headline = Some(line.into());
        self
    }

    pub fn add(&mut self, key: &str, item: Item) -> &mut Self {
        self.entries.push((key.into(), item));
        self
    }

    pub fn fail(&mut self) {
        self.status = Status::Fail;
    }
}

pub fn set_text(idx: &[usize]) -> String {
    let parts: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn list<T>(v: &[T], f: impl Fn(&T) -> String) -> String {
    let parts: Vec<String> = v.iter().map(f).collect();
    format!("({})", parts.join(", "))
}

/// Decimal approximation with trailing zeros dropped.
pub fn approx(r: &Rational) -> String {
    let s = fmt_decimal(r, 6);
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" { "0".into() } else { t.into() }
    } else {
        s
    }
}

/// The inequality with approximate coefficients; display only.
pub fn approx_ineq(q: &LinearInequality) -> String {
    fn term(out: &mut String, c: &Rational, var: &str) {
        if c.is_zero() {
            return;
        }
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = c.abs();
        if mag != Rational::from_integer(1.into()) {
            out.push_str(&approx(&mag));
            out.push(' ');
        }
        out.push_str(var);
    }
    let mut lhs = String::new();
    term(&mut lhs, &q.w_coef, "w");
    for (i, c) in q.y_coef.iter().enumerate() {
        term(&mut lhs, c, &format!("y{}", i + 1));
    }
    if lhs.is_empty() {
        lhs.push('0');
    }
    let mut rhs = String::new();
    if !q.constant.is_zero() {
        rhs.push_str(&approx(&q.constant));
    }
    for (i, c) in q.x_coef.iter().enumerate() {
        term(&mut rhs, c, &format!("x{}", i + 1));
    }
    if rhs.is_empty() {
        rhs.push('0');
    }
    format!("{lhs} >= {rhs}")
}

impl Item {
    fn inline(&self, decimal: bool) -> Option<String> {
        let r = |x: &Rational| {
            if decimal && !x.is_integer() { format!("{} (~{})", fmt_compact(x), approx(x)) } else { fmt_compact(x) }
        };
        Some(match self {
            Item::Text(s) => s.clone(),
            Item::Bool(b) => b.to_string(),
            Item::Count(c) => c.to_string(),
            Item::Rat(x) => r(x),
            Item::Rats(v) => {
                let exact = list(v, fmt_compact);
                if decimal && v.iter().any(|x| !x.is_integer()) { format!("{exact} ~ {}", list(v, approx)) } else { exact }
            }
            Item::Ints(v) => list(v, |x| x.to_string()),
            Item::Set(v) => set_text(v),
            Item::Ineq(q) => {
                if decimal { format!("{q}   [~ {}]", approx_ineq(q)) } else { q.to_string() }
            }
            Item::List(_) | Item::Group(_) => return None,
        })
    }

    fn write_text(&self, out: &mut String, key: Option<&str>, depth: usize, decimal: bool) {
        let pad = "  ".repeat(depth);
        let label = key.map(|k| format!("{k}:")).unwrap_or_else(|| "-".into());
        if let Some(s) = self.inline(decimal) {
            out.push_str(&format!("{pad}{label} {s}\n"));
            return;
        }
        match self {
            Item::List(items) => {
                if items.is_empty() {
                    out.push_str(&format!("{pad}{label} (none)\n"));
                    return;
                }
                out.push_str(&format!("{pad}{label}\n"));
                for it in items {
                    it.write_text(out, None, depth + 1, decimal);
                }
            }
            // a group inside a list starts on the bullet line
            Item::Group(fields) if key.is_none() && fields.first().is_some_and(|(_, it)| it.inline(decimal).is_some()) => {
                let (k, it) = &fields[0];
                out.push_str(&format!("{pad}- {k}: {}\n", it.inline(decimal).expect("inline")));
                for (k, it) in &fields[1..] {
                    it.write_text(out, Some(k), depth + 1, decimal);
                }
            }
            Item::Group(fields) => {
                out.push_str(&format!("{pad}{label}\n"));
                for (k, it) in fields {
                    it.write_text(out, Some(k), depth + 1, decimal);
                }
            }
            _ => unreachable!("scalars render inline"),
        }
    }

    fn to_json(&self, decimal: bool) -> Value {
        let r = |x: &Rational| {
            if decimal { json!({ "exact": fmt_compact(x), "decimal": approx(x) }) } else { Value::String(fmt_compact(x)) }
        };
        match self {
            Item::Text(s) => Value::String(s.clone()),
            Item::Bool(b) => Value::Bool(*b),
            Item::Count(c) => json!(c),
            Item::Rat(x) => r(x),
            Item::Rats(v) => Value::Array(v.iter().map(r).collect()),
            Item::Ints(v) => json!(v),
            Item::Set(v) => json!(v.iter().map(|i| i + 1).collect::<Vec<_>>()),
            Item::Ineq(q) => {
                let mut m = Map::new();
                m.insert("text".into(), Value::String(q.to_string()));
                if decimal {
                    m.insert("decimal".into(), Value::String(approx_ineq(q)));
                }
                m.insert("w".into(), Value::String(fmt_compact(&q.w_coef)));
                if !q.y_coef.is_empty() {
                    m.insert("y".into(), Value::Array(q.y_coef.iter().map(|c| Value::String(fmt_compact(c))).collect()));
                }
                m.insert("x".into(), Value::Array(q.x_coef.iter().map(|c| Value::String(fmt_compact(c))).collect()));
                m.insert("constant".into(), Value::String(fmt_compact(&q.constant)));
                Value::Object(m)
            }
            Item::List(items) => Value::Array(items.iter().map(|i| i.to_json(decimal)).collect()),
            Item::Group(fields) => {
                Value::Object(fields.iter().map(|(k, i)| (k.clone(), i.to_json(decimal))).collect())
            }
        }
    }
}

impl Report {
    pub fn to_text(&self, decimal: bool) -> String {
        let mut out = String::new();
        if let Some(h) = &self.headline {
            out.push_str(h);
            out.push('\n');
        }
        for (k, it) in &self.entries {
            it.write_text(&mut out, Some(k), 0, decimal);
        }
        if self.status == Status::Fail {
            out.push_str("status: FAIL\n");
        }
        out
    }

    pub fn to_json(&self, decimal: bool) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), Value::String(self.command.clone()));
        m.insert("status".into(), Value::String(if self.status == Status::Ok { "ok" } else { "fail" }.into()));
        if let Some(h) = &self.headline {
            m.insert("headline".into(), Value::String(h.clone()));
        }
        for (k, it) in &self.entries {
            m.insert(k.clone(), it.to_json(decimal));
        }
        Value::Object(m)
    }
}
