//! Bounded worst-case search over the free choices of the {1,2} pipeline:
//! which minimum 2-factor, which maximum matching of B, and (inside the
//! joins) the most expensive reconnection.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::{build_b, make_special, run_from, BipartiteB, OnetwoRun, TieBreak, Variant};
use crate::cover::{Cycle, CycleCover};
use crate::error::{Error, Result};
use crate::factor::{two_factor, TwoFactorRequest};
use crate::instance::{Instance, Rational};
use crate::matching::max_cardinality_matching;

pub const MAX_N: usize = 12;
const MAX_FACTORS: usize = 64;
const MAX_MATCHINGS: usize = 512;
const MAX_NODES: u64 = 2_000_000;

pub(crate) fn worst_run(inst: &Instance, variant: Variant) -> Result<OnetwoRun> {
    let n = inst.n();
    if n > MAX_N {
        return Err(Error::BudgetExceeded { solver: "adversarial tie-break", n, max: MAX_N });
    }
    let mut req = TwoFactorRequest::new(inst);
    if variant == Variant::Ratio76 {
        req = req.triangle_free();
    }
    let base = two_factor(&req)?;
    let target: Rational = base.cycles.iter().map(|c| c.cost(inst)).sum();
    let mut factors = vec![base.canonical()];
    let mut e = Enum {
        inst,
        req: &req,
        target,
        covered: vec![false; n],
        done: Vec::new(),
        path: Vec::new(),
        found: BTreeSet::new(),
        nodes: 0,
    };
    e.next_cycle(Rational::from_integer(0), 0);
    for cycles in e.found {
        let c = CycleCover::new(cycles, false);
        if c != factors[0] {
            factors.push(c);
        }
    }
    let mut worst: Option<OnetwoRun> = None;
    for cover in factors {
        let f = make_special(inst, cover);
        let b = build_b(inst, &f);
        for m in max_matchings(&b) {
            let run = run_from(inst, variant, TieBreak::Adversarial, f.clone(), b.clone(), m);
            if worst.as_ref().is_none_or(|w| run.cost > w.cost) {
                worst = Some(run);
            }
        }
    }
    Ok(worst.expect("at least the base factor is searched"))
}

/// All maximum matchings of B as sorted (cycle, vertex) lists, capped.
pub fn max_matchings(b: &BipartiteB) -> Vec<Vec<(usize, usize)>> {
    let size = max_cardinality_matching(&b.graph).len();
    let mut nbrs = vec![Vec::new(); b.right.len()];
    for &(u, v, _) in &b.graph.edges {
        nbrs[v - b.n].push(u);
    }
    for l in &mut nbrs {
        l.sort_unstable();
    }
    let mut out = Vec::new();
    let mut used = vec![false; b.n];
    let mut cur = Vec::new();
    fn go(
        j: usize,
        size: usize,
        b: &BipartiteB,
        nbrs: &[Vec<usize>],
        used: &mut [bool],
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if out.len() >= MAX_MATCHINGS || cur.len() + (nbrs.len() - j) < size {
            return;
        }
        if j == nbrs.len() {
            out.push(cur.clone());
            return;
        }
        for &v in &nbrs[j] {
            if !used[v] {
                used[v] = true;
                cur.push((b.right[j], v));
                go(j + 1, size, b, nbrs, used, cur, out);
                cur.pop();
                used[v] = false;
            }
        }
        go(j + 1, size, b, nbrs, used, cur, out);
    }
    go(0, size, b, &nbrs, &mut used, &mut cur, &mut out);
    for m in &mut out {
        m.sort_unstable();
    }
    out
}

struct Enum<'a> {
    inst: &'a Instance,
    req: &'a TwoFactorRequest<'a>,
    target: Rational,
    covered: Vec<bool>,
    done: Vec<Vec<usize>>,
    path: Vec<usize>,
    found: BTreeSet<Vec<Cycle>>,
    nodes: u64,
}

impl Enum<'_> {
    fn stop(&mut self, cost: Rational, edges: usize) -> bool {
        self.nodes += 1;
        // every remaining edge weighs at least 1
        let rest = Rational::from_integer((self.inst.n() - edges) as i64);
        self.nodes > MAX_NODES || self.found.len() >= MAX_FACTORS || cost + rest > self.target
    }

    fn next_cycle(&mut self, cost: Rational, edges: usize) {
        if self.stop(cost, edges) {
            return;
        }
        let Some(start) = self.covered.iter().position(|&c| !c) else {
            let cover = CycleCover::new(self.done.iter().cloned().map(Cycle::new).collect(), false);
            self.found.insert(cover.canonical().cycles);
            return;
        };
        self.covered[start] = true;
        self.path.push(start);
        self.extend(cost, edges);
        self.path.pop();
        self.covered[start] = false;
    }

    fn extend(&mut self, cost: Rational, edges: usize) {
        if self.stop(cost, edges) {
            return;
        }
        let inst = self.inst;
        let start = self.path[0];
        let last = *self.path.last().unwrap();
        let len = self.path.len();
        let closable = match len {
            2 => self.req.allow_pair_2cycles && inst.is_pair(start, last),
            3 => !self.req.triangle_free && self.path[1] < last,
            l => l > 3 && self.path[1] < last,
        };
        if closable {
            let path = core::mem::take(&mut self.path);
            self.done.push(path);
            self.next_cycle(cost + inst.w(last, start), edges + 1);
            self.path = self.done.pop().unwrap();
        }
        for v in start + 1..inst.n() {
            if !self.covered[v] {
                self.covered[v] = true;
                self.path.push(v);
                self.extend(cost + inst.w(last, v), edges + 1);
                self.path.pop();
                self.covered[v] = false;
            }
        }
    }
}
