//! Exhaustive minimum 2-factor search.

use alloc::vec;
use alloc::vec::Vec;

use super::{NodeCounter, OracleBudget};
use crate::cover::{Cycle, CycleCover};
use crate::error::{Error, Result};
use crate::factor::TwoFactorRequest;
use crate::instance::{Instance, Rational};

/// Minimum (triangle-free) 2-factor by depth-first enumeration with cost
/// pruning. Undirected search builds each cycle from its smallest vertex and
/// fixes an orientation; directed search assigns successors.
pub fn brute_force_2factor(req: &TwoFactorRequest<'_>, budget: &OracleBudget) -> Result<(Rational, CycleCover)> {
    let inst = req.inst;
    let n = inst.n();
    let mut nodes = NodeCounter::new("brute_force_2factor", budget.max_nodes);
    if req.directed {
        OracleBudget::check("brute_force_2factor", n, budget.factor_directed)?;
        let mut s = Directed { inst, succ: vec![usize::MAX; n], used: vec![false; n], best: None };
        s.go(0, Rational::from_integer(0), &mut nodes)?;
        let (c, succ) = s.best.ok_or(Error::NoTwoFactor)?;
        let cycles = super::cycles_of(&succ).into_iter().map(Cycle::new).collect();
        return Ok((c, CycleCover::new(cycles, true)));
    }
    OracleBudget::check("brute_force_2factor", n, budget.factor_undirected)?;
    let mut s = Undirected {
        inst,
        triangle_free: req.triangle_free,
        allow_pairs: req.allow_pair_2cycles,
        covered: vec![false; n],
        done: Vec::new(),
        path: Vec::new(),
        best: None,
    };
    s.next_cycle(Rational::from_integer(0), &mut nodes)?;
    let (c, seqs) = s.best.ok_or(Error::NoTwoFactor)?;
    Ok((c, CycleCover::undirected(seqs)))
}

struct Directed<'a> {
    inst: &'a Instance,
    succ: Vec<usize>,
    used: Vec<bool>,
    best: Option<(Rational, Vec<usize>)>,
}

impl Directed<'_> {
    fn go(&mut self, v: usize, cost: Rational, nodes: &mut NodeCounter) -> Result<()> {
        nodes.tick()?;
        if self.best.as_ref().is_some_and(|(b, _)| cost >= *b) {
            return Ok(());
        }
        let n = self.inst.n();
        if v == n {
            self.best = Some((cost, self.succ.clone()));
            return Ok(());
        }
        for u in 0..n {
            if u != v && !self.used[u] {
                self.used[u] = true;
                self.succ[v] = u;
                self.go(v + 1, cost + self.inst.w(v, u), nodes)?;
                self.used[u] = false;
            }
        }
        Ok(())
    }
}

struct Undirected<'a> {
    inst: &'a Instance,
    triangle_free: bool,
    allow_pairs: bool,
    covered: Vec<bool>,
    done: Vec<Vec<usize>>,
    path: Vec<usize>,
    best: Option<(Rational, Vec<Vec<usize>>)>,
}

impl Undirected<'_> {
    fn pruned(&self, cost: Rational) -> bool {
        self.best.as_ref().is_some_and(|(b, _)| cost >= *b)
    }

    fn next_cycle(&mut self, cost: Rational, nodes: &mut NodeCounter) -> Result<()> {
        nodes.tick()?;
        if self.pruned(cost) {
            return Ok(());
        }
        let Some(start) = self.covered.iter().position(|&c| !c) else {
            self.best = Some((cost, self.done.clone()));
            return Ok(());
        };
        self.covered[start] = true;
        self.path.push(start);
        self.extend(cost, nodes)?;
        self.path.pop();
        self.covered[start] = false;
        Ok(())
    }

    fn extend(&mut self, cost: Rational, nodes: &mut NodeCounter) -> Result<()> {
        nodes.tick()?;
        if self.pruned(cost) {
            return Ok(());
        }
        let inst = self.inst;
        let start = self.path[0];
        let last = *self.path.last().unwrap();
        let len = self.path.len();
        let closable = match len {
            2 => self.allow_pairs && inst.is_pair(start, last),
            3 => !self.triangle_free && self.path[1] < last,
            l => l > 3 && self.path[1] < last,
        };
        if closable {
            let c = cost + inst.w(last, start);
            let path = core::mem::take(&mut self.path);
            self.done.push(path);
            self.next_cycle(c, nodes)?;
            self.path = self.done.pop().unwrap();
        }
        for v in start + 1..inst.n() {
            if !self.covered[v] {
                self.covered[v] = true;
                self.path.push(v);
                self.extend(cost + inst.w(last, v), nodes)?;
                self.path.pop();
                self.covered[v] = false;
            }
        }
        Ok(())
    }
}
