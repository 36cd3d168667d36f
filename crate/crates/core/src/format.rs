//! Line-oriented text formats.
//!
//! Instance:
//! ```text
//! smc 1
//! n 3
//! mode symmetric
//! class metric
//! groups 1
//! 0 1 2
//! 0 1 3/2
//! 1 0 1
//! 3/2 1 0
//! ```
//! `mode` is `symmetric` or `asymmetric`, `class` one of `metric`, `onetwo`,
//! `asymmetric`. Weights are integers or `p/q`; the diagonal is ignored.
//!
//! Solution: one cycle per line as vertex ids, with a trailing `pair` on a
//! 2-cycle that uses the duplicated edge of a size-2 group.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;
use core::str::FromStr;

use crate::cover::{Cycle, CycleCover};
use crate::error::{Error, Result};
use crate::instance::{Instance, RawInstance, Rational, WeightClass};

fn class_name(c: WeightClass) -> &'static str {
    match c {
        WeightClass::GeneralMetric => "metric",
        WeightClass::OneTwo => "onetwo",
        WeightClass::AsymmetricMetric => "asymmetric",
    }
}

pub fn write_raw_instance(raw: &RawInstance) -> String {
    let mut s = String::new();
    let mode = if raw.symmetric { "symmetric" } else { "asymmetric" };
    let _ = write!(s, "smc 1\nn {}\nmode {mode}\nclass {}\ngroups {}\n", raw.n, class_name(raw.class), raw.groups.len());
    for g in &raw.groups {
        s.push_str(&join(g.iter()));
        s.push('\n');
    }
    for row in raw.weights.chunks(raw.n.max(1)).take(raw.n) {
        s.push_str(&join(row.iter()));
        s.push('\n');
    }
    s
}

pub fn write_instance(inst: &Instance) -> String {
    write_raw_instance(&inst.to_raw())
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

struct Lines<'a> {
    it: core::iter::Enumerate<core::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, msg: msg.into() }
    }

    fn next(&mut self, what: &str) -> Result<&'a str> {
        match self.it.next() {
            Some((i, l)) => {
                self.line = i + 1;
                Ok(l.trim())
            }
            None => Err(Error::Parse { line: self.line + 1, msg: format!("missing {what}") }),
        }
    }

    fn keyed(&mut self, key: &str) -> Result<&'a str> {
        let l = self.next(key)?;
        match l.split_once(' ') {
            Some((k, v)) if k == key => Ok(v.trim()),
            _ => Err(self.err(format!("expected `{key} <value>`"))),
        }
    }

    fn numbers<T: FromStr>(&self, l: &str) -> Result<Vec<T>> {
        l.split_whitespace()
            .map(|t| t.parse::<T>().map_err(|_| self.err(format!("bad number `{t}`"))))
            .collect()
    }
}

/// Parses without validating weights or groups.
pub fn parse_raw_instance(text: &str) -> Result<RawInstance> {
    let mut lines = Lines { it: text.lines().enumerate(), line: 0 };
    if lines.next("header")? != "smc 1" {
        return Err(lines.err("expected header `smc 1`"));
    }
    let n: usize = lines.keyed("n")?.parse().map_err(|_| lines.err("bad vertex count"))?;
    let symmetric = match lines.keyed("mode")? {
        "symmetric" => true,
        "asymmetric" => false,
        m => return Err(lines.err(format!("unknown mode `{m}`"))),
    };
    let class = match lines.keyed("class")? {
        "metric" => WeightClass::GeneralMetric,
        "onetwo" => WeightClass::OneTwo,
        "asymmetric" => WeightClass::AsymmetricMetric,
        c => return Err(lines.err(format!("unknown class `{c}`"))),
    };
    let k: usize = lines.keyed("groups")?.parse().map_err(|_| lines.err("bad group count"))?;
    let mut groups = Vec::with_capacity(k);
    for _ in 0..k {
        let l = lines.next("group line")?;
        groups.push(lines.numbers::<usize>(l)?);
    }
    let mut weights = Vec::with_capacity(n * n);
    for _ in 0..n {
        let l = lines.next("weight row")?;
        let row = lines.numbers::<Rational>(l)?;
        if row.len() != n {
            return Err(lines.err(format!("expected {n} weights, found {}", row.len())));
        }
        weights.extend(row);
    }
    if let Some((i, l)) = lines.it.find(|(_, l)| !l.trim().is_empty()) {
        return Err(Error::Parse { line: i + 1, msg: format!("trailing content `{l}`") });
    }
    Ok(RawInstance { n, weights, symmetric, class, groups })
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    parse_raw_instance(text)?.validate()
}

pub fn write_cover(cover: &CycleCover) -> String {
    let mut s = String::new();
    for c in &cover.cycles {
        s.push_str(&join(c.vertices.iter()));
        if c.pair {
            s.push_str(" pair");
        }
        s.push('\n');
    }
    s
}

pub fn parse_cover(text: &str, directed: bool) -> Result<CycleCover> {
    let mut cycles = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.is_empty() {
            continue;
        }
        let (body, pair) = match l.strip_suffix("pair") {
            Some(b) => (b.trim_end(), true),
            None => (l, false),
        };
        let vertices = body
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad vertex `{t}`") }))
            .collect::<Result<Vec<_>>>()?;
        if pair && vertices.len() != 2 {
            return Err(Error::Parse { line: i + 1, msg: "`pair` on a cycle that is not of length 2".into() });
        }
        cycles.push(Cycle { vertices, pair });
    }
    Ok(CycleCover::new(cycles, directed))
}
