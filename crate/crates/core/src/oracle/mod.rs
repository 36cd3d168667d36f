//! Exact desk-scale solvers used as ground truth. Every solver refuses
//! inputs beyond its budget instead of returning an approximate answer.

mod factor;
mod network;
mod probe;

pub use factor::brute_force_2factor;
pub use network::{brute_force_snd, brute_force_steiner_forest};
pub(crate) use network::snd_feasible;
pub use probe::{matching_vs_opt_probe, probe_trial, ProbeReport, ProbeRow};

use alloc::vec;
use alloc::vec::Vec;

use crate::cover::{Cycle, CycleCover};
use crate::error::{Error, Result};
use crate::instance::{Instance, Rational};

/// Per-solver vertex limits plus a cap on search nodes for the
/// branch-and-bound solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub smc_symmetric: usize,
    pub smc_directed: usize,
    pub factor_undirected: usize,
    pub factor_directed: usize,
    pub snd: usize,
    pub steiner_forest: usize,
    pub max_nodes: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            smc_symmetric: 12,
            smc_directed: 8,
            factor_undirected: 9,
            factor_directed: 7,
            snd: 7,
            steiner_forest: 8,
            max_nodes: 200_000_000,
        }
    }
}

impl OracleBudget {
    /// Same vertex limit for every solver.
    pub fn with_max_n(n: usize) -> Self {
        OracleBudget {
            smc_symmetric: n,
            smc_directed: n,
            factor_undirected: n,
            factor_directed: n,
            snd: n,
            steiner_forest: n,
            ..Default::default()
        }
    }

    pub(crate) fn check(solver: &'static str, n: usize, max: usize) -> Result<()> {
        if n > max {
            Err(Error::BudgetExceeded { solver, n, max })
        } else {
            Ok(())
        }
    }
}

/// Counts search nodes against the budget.
pub(crate) struct NodeCounter {
    pub solver: &'static str,
    pub used: u64,
    pub max: u64,
}

impl NodeCounter {
    pub fn new(solver: &'static str, max: u64) -> Self {
        NodeCounter { solver, used: 0, max }
    }

    #[inline]
    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.max {
            return Err(Error::BudgetExceeded {
                solver: self.solver,
                n: self.used as usize,
                max: self.max as usize,
            });
        }
        Ok(())
    }
}

/// Vertex bitmask of each group.
pub(crate) fn group_masks(inst: &Instance) -> Vec<u32> {
    inst.groups().iter().map(|g| g.iter().fold(0u32, |m, &v| m | 1 << v)).collect()
}

/// Exact Steiner multicycle optimum: Held-Karp cycle costs for every vertex
/// subset, then a partition DP over sets of groups.
pub fn brute_force_smc(inst: &Instance, budget: &OracleBudget) -> Result<(Rational, CycleCover)> {
    let n = inst.n();
    let directed = !inst.is_symmetric();
    if directed {
        OracleBudget::check("brute_force_smc", n, budget.smc_directed)?;
    } else {
        OracleBudget::check("brute_force_smc", n, budget.smc_symmetric)?;
    }
    let cyc = HeldKarp::run(inst);
    let gm = group_masks(inst);
    let k = gm.len();
    let full = (1usize << k) - 1;
    let union = |s: usize| (0..k).filter(|&g| s >> g & 1 == 1).fold(0u32, |m, g| m | gm[g]);
    let mut best: Vec<Option<(Rational, usize)>> = vec![None; full + 1];
    best[0] = Some((Rational::from_integer(0), 0));
    for s in 1..=full {
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        // every subset of `s` that contains its lowest group
        let mut sub = rest;
        loop {
            let part = sub | low;
            if let (Some(c), Some((r, _))) = (cyc.cost[union(part) as usize], best[s ^ part]) {
                let total = c + r;
                if best[s].is_none_or(|(b, _)| total < b) {
                    best[s] = Some((total, part));
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    let (opt, _) = best[full].ok_or(Error::Internal("no cycle cover found".into()))?;
    let mut cycles = Vec::new();
    let mut s = full;
    while s != 0 {
        let part = best[s].unwrap().1;
        cycles.push(Cycle::new(cyc.tour(union(part))));
        s ^= part;
    }
    Ok((opt, CycleCover::new(cycles, directed)))
}

/// Minimum Hamiltonian cycle cost of every vertex subset (of size ≥ 2),
/// rooted at the subset's smallest vertex.
struct HeldKarp {
    n: usize,
    dp: Vec<Option<Rational>>,
    parent: Vec<u8>,
    cost: Vec<Option<Rational>>,
    last: Vec<u8>,
}

impl HeldKarp {
    fn run(inst: &Instance) -> Self {
        let n = inst.n();
        let size = 1usize << n;
        let mut dp: Vec<Option<Rational>> = vec![None; size * n];
        let mut parent = vec![u8::MAX; size * n];
        for s in 0..n {
            dp[(1 << s) * n + s] = Some(Rational::from_integer(0));
        }
        for mask in 1..size {
            let start = mask.trailing_zeros() as usize;
            for last in start..n {
                let Some(d) = dp[mask * n + last] else { continue };
                for j in start + 1..n {
                    if mask >> j & 1 == 1 {
                        continue;
                    }
                    let nm = mask | 1 << j;
                    let c = d + inst.w(last, j);
                    let slot = &mut dp[nm * n + j];
                    if slot.is_none_or(|x| c < x) {
                        *slot = Some(c);
                        parent[nm * n + j] = last as u8;
                    }
                }
            }
        }
        let mut cost = vec![None; size];
        let mut lastv = vec![u8::MAX; size];
        for mask in 1..size {
            if mask.count_ones() < 2 {
                continue;
            }
            let start = mask.trailing_zeros() as usize;
            for last in start + 1..n {
                if let Some(d) = dp[mask * n + last] {
                    let c = d + inst.w(last, start);
                    if cost[mask].is_none_or(|x: Rational| c < x) {
                        cost[mask] = Some(c);
                        lastv[mask] = last as u8;
                    }
                }
            }
        }
        HeldKarp { n, dp, parent, cost, last: lastv }
    }

    fn tour(&self, mask: u32) -> Vec<usize> {
        let mut mask = mask as usize;
        let mut v = self.last[mask] as usize;
        let mut rev = Vec::new();
        while mask.count_ones() > 1 {
            rev.push(v);
            let p = self.parent[mask * self.n + v] as usize;
            debug_assert!(self.dp[mask * self.n + v].is_some());
            mask ^= 1 << v;
            v = p;
        }
        rev.push(v);
        rev.reverse();
        rev
    }
}

/// Second, independent SMC oracle: enumerates every successor function
/// without fixed points and keeps the cheapest feasible one. Limited to
/// n ≤ 8.
pub fn enumerate_smc(inst: &Instance) -> Result<(Rational, CycleCover)> {
    let n = inst.n();
    OracleBudget::check("enumerate_smc", n, 8)?;
    let directed = !inst.is_symmetric();
    let mut succ = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut best: Option<(Rational, Vec<usize>)> = None;
    fn go(
        v: usize,
        inst: &Instance,
        directed: bool,
        succ: &mut Vec<usize>,
        used: &mut Vec<bool>,
        best: &mut Option<(Rational, Vec<usize>)>,
    ) {
        let n = inst.n();
        if v == n {
            let cycles = cycles_of(succ);
            let mut cyc_of = vec![0; n];
            for (i, c) in cycles.iter().enumerate() {
                if !directed && c.len() == 2 && !inst.is_pair(c[0], c[1]) {
                    return;
                }
                for &x in c {
                    cyc_of[x] = i;
                }
            }
            if inst.groups().iter().any(|g| g.iter().any(|&x| cyc_of[x] != cyc_of[g[0]])) {
                return;
            }
            let cost: Rational = (0..n).map(|x| inst.w(x, succ[x])).sum();
            if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                *best = Some((cost, succ.clone()));
            }
            return;
        }
        for u in 0..n {
            if u != v && !used[u] {
                used[u] = true;
                succ[v] = u;
                go(v + 1, inst, directed, succ, used, best);
                used[u] = false;
            }
        }
    }
    go(0, inst, directed, &mut succ, &mut used, &mut best);
    let (cost, succ) = best.ok_or(Error::Internal("no feasible cover".into()))?;
    let cycles = cycles_of(&succ).into_iter().map(Cycle::new).collect();
    Ok((cost, CycleCover::new(cycles, directed)))
}

pub(crate) fn cycles_of(succ: &[usize]) -> Vec<Vec<usize>> {
    let n = succ.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut c = Vec::new();
        let mut v = s;
        while !seen[v] {
            seen[v] = true;
            c.push(v);
            v = succ[v];
        }
        out.push(c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{cover_cost, validate_solution};
    use crate::instance::{RawInstance, WeightClass};
    use alloc::vec;

    fn r(x: i64) -> Rational {
        Rational::from_integer(x)
    }

    #[test]
    fn pair_instance() {
        let inst = RawInstance::from_int_matrix(
            &[vec![0, 3], vec![3, 0]],
            true,
            WeightClass::GeneralMetric,
            vec![vec![0, 1]],
        )
        .validate()
        .unwrap();
        let (c, cover) = brute_force_smc(&inst, &OracleBudget::default()).unwrap();
        assert_eq!(c, r(6));
        assert!(validate_solution(&inst, &cover).feasible());
        assert_eq!(enumerate_smc(&inst).unwrap().0, r(6));
    }

    #[test]
    fn budget_is_a_hard_error() {
        let n = 13;
        let m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i != j)).collect()).collect();
        let inst = RawInstance::from_int_matrix(&m, true, WeightClass::OneTwo, vec![(0..n).collect()])
            .validate()
            .unwrap();
        assert!(matches!(
            brute_force_smc(&inst, &OracleBudget::default()),
            Err(Error::BudgetExceeded { n: 13, max: 12, .. })
        ));
    }

    #[test]
    fn returned_cover_has_reported_cost() {
        let m = vec![
            vec![0, 1, 2, 2, 2, 1],
            vec![1, 0, 1, 2, 2, 2],
            vec![2, 1, 0, 2, 1, 2],
            vec![2, 2, 2, 0, 1, 1],
            vec![2, 2, 1, 1, 0, 2],
            vec![1, 2, 2, 1, 2, 0],
        ];
        let inst = RawInstance::from_int_matrix(&m, true, WeightClass::OneTwo, vec![vec![0, 3], vec![1, 2, 4, 5]])
            .validate()
            .unwrap();
        let (c, cover) = brute_force_smc(&inst, &OracleBudget::default()).unwrap();
        assert!(validate_solution(&inst, &cover).feasible());
        assert_eq!(cover_cost(&inst, &cover).unwrap(), c);
        assert_eq!(enumerate_smc(&inst).unwrap().0, c);
    }
}
