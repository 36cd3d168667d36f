//! Triangle-free 2-factors for {1,2} weights.
//!
//! Two routes. The exact subset DP solves the problem directly at desk scale.
//! The adapter follows the 2-matching reduction: a maximum triangle-free
//! simple 2-matching of H (the weight-1 edges) uses n − p edges when it
//! consists of cycles and p paths; chaining the paths into one cycle with p
//! weight-2 edges gives weight n + p, and any triangle-free 2-factor F
//! restricted to H is such a 2-matching, so p ≤ e₂(F). The 0/1 weights of
//! the max form are the 1/2 weights here: maximizing 1-edges used is
//! minimizing cost. When the chained cycle is too short to be legal it is
//! merged into another cycle by the cheapest single edge exchange.

use alloc::vec;
use alloc::vec::Vec;

use super::TwoFactorRequest;
use crate::cover::{Cycle, CycleCover};
use crate::error::{Error, Result};
use crate::instance::{Instance, Rational};

/// Edge set of maximum degree two. A size-2 cycle appears as a doubled edge.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SimpleTwoMatching {
    pub edges: Vec<(usize, usize)>,
    pub triangle_free: bool,
}

impl SimpleTwoMatching {
    /// Components as (cycles, paths); paths include isolated vertices.
    /// Both lists are ordered by smallest vertex.
    pub fn components(&self, n: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; n];
        let (mut cycles, mut paths) = (Vec::new(), Vec::new());
        // paths first from their endpoints, then what remains is cycles
        for s in 0..n {
            if seen[s] || adj[s].len() == 2 {
                continue;
            }
            let mut seq = vec![s];
            seen[s] = true;
            let mut prev = usize::MAX;
            let mut cur = s;
            while let Some(&nx) = adj[cur].iter().find(|&&x| x != prev && !seen[x]) {
                seen[nx] = true;
                seq.push(nx);
                prev = cur;
                cur = nx;
            }
            paths.push(seq);
        }
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut seq = vec![s];
            let mut prev = s;
            let mut cur = *adj[s].iter().min().unwrap();
            while !seen[cur] {
                seen[cur] = true;
                seq.push(cur);
                let nx = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
                prev = cur;
                cur = nx;
            }
            cycles.push(seq);
        }
        paths.sort_by_key(|p| *p.iter().min().unwrap());
        (cycles, paths)
    }
}

/// Source of maximum triangle-free simple 2-matchings. `h` is an adjacency
/// matrix; `doubled[u][v]` allows the 2-cycle on edge uv.
pub trait TwoMatchingSolver {
    fn max_triangle_free(&self, h: &[Vec<bool>], doubled: &[Vec<bool>]) -> Result<SimpleTwoMatching>;
}

/// Exponential but exact: bitmask DP choosing a partition of the vertices
/// into Hamiltonian cycles (length ≥ 4, or a doubled pair) and Hamiltonian
/// paths of H, minimizing the number of paths.
#[derive(Debug, Clone, Copy)]
pub struct ExactTwoMatching {
    pub max_n: usize,
}

impl Default for ExactTwoMatching {
    fn default() -> Self {
        ExactTwoMatching { max_n: 12 }
    }
}

impl TwoMatchingSolver for ExactTwoMatching {
    fn max_triangle_free(&self, h: &[Vec<bool>], doubled: &[Vec<bool>]) -> Result<SimpleTwoMatching> {
        let n = h.len();
        if n > self.max_n {
            return Err(Error::BudgetExceeded { solver: "triangle-free 2-matching", n, max: self.max_n });
        }
        let size = 1usize << n;
        let adj: Vec<u32> = (0..n).map(|u| (0..n).filter(|&v| h[u][v]).fold(0, |m, v| m | 1 << v)).collect();
        // ends[mask]: vertices where some Hamiltonian path of H[mask] ends
        let mut ends = vec![0u32; size];
        // rooted[mask]: same, for paths that start at the lowest vertex
        let mut rooted = vec![0u32; size];
        for v in 0..n {
            ends[1 << v] = 1 << v;
            rooted[1 << v] = 1 << v;
        }
        for mask in 1..size {
            let low = mask.trailing_zeros();
            for v in 0..n {
                if mask >> v & 1 == 0 || mask == 1 << v {
                    continue;
                }
                let rest = mask ^ 1 << v;
                if ends[rest] & adj[v] != 0 {
                    ends[mask] |= 1 << v;
                }
                if v as u32 != low && rooted[rest] & adj[v] != 0 {
                    rooted[mask] |= 1 << v;
                }
            }
        }
        let is_cycle = |mask: usize| -> bool {
            let k = mask.count_ones();
            let low = mask.trailing_zeros() as usize;
            if k == 2 {
                let other = (mask ^ 1 << low).trailing_zeros() as usize;
                return doubled[low][other];
            }
            k >= 4 && rooted[mask] & adj[low] != 0
        };
        // best[mask] = (paths, chosen part)
        let mut best: Vec<(u32, usize)> = vec![(u32::MAX, 0); size];
        best[0] = (0, 0);
        for mask in 1..size {
            let low = mask & mask.wrapping_neg();
            let rest = mask ^ low;
            let mut sub = rest;
            loop {
                let part = sub | low;
                let cost = if is_cycle(part) {
                    Some(0)
                } else if ends[part] != 0 {
                    Some(1)
                } else {
                    None
                };
                if let (Some(c), (b, _)) = (cost, best[mask ^ part]) {
                    if b != u32::MAX && b + c < best[mask].0 {
                        best[mask] = (b + c, part);
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
        let mut edges = Vec::new();
        let mut mask = size - 1;
        while mask != 0 {
            let part = best[mask].1;
            if is_cycle(part) {
                let low = part.trailing_zeros() as usize;
                if part.count_ones() == 2 {
                    let other = (part ^ 1 << low).trailing_zeros() as usize;
                    edges.push((low, other));
                    edges.push((low, other));
                } else {
                    let end = (rooted[part] & adj[low]).trailing_zeros() as usize;
                    let seq = unwind(&rooted, &adj, part, end);
                    push_cycle(&mut edges, &seq);
                }
            } else {
                let end = ends[part].trailing_zeros() as usize;
                let seq = unwind(&ends, &adj, part, end);
                for w in seq.windows(2) {
                    edges.push((w[0].min(w[1]), w[0].max(w[1])));
                }
            }
            mask ^= part;
        }
        edges.sort_unstable();
        Ok(SimpleTwoMatching { edges, triangle_free: true })
    }
}

/// Rebuilds a Hamiltonian path of `mask` ending at `end` from an end-set table.
fn unwind(table: &[u32], adj: &[u32], mut mask: usize, mut end: usize) -> Vec<usize> {
    let mut rev = vec![end];
    while mask.count_ones() > 1 {
        let rest = mask ^ 1 << end;
        let prev = (table[rest] & adj[end]).trailing_zeros() as usize;
        rev.push(prev);
        mask = rest;
        end = prev;
    }
    rev.reverse();
    rev
}

fn push_cycle(edges: &mut Vec<(usize, usize)>, seq: &[usize]) {
    for i in 0..seq.len() {
        let (a, b) = (seq[i], seq[(i + 1) % seq.len()]);
        edges.push((a.min(b), a.max(b)));
    }
}

fn check_request(req: &TwoFactorRequest<'_>) -> Result<()> {
    if req.directed || req.inst.class() != crate::instance::WeightClass::OneTwo {
        return Err(Error::Precondition("triangle-free 2-factors need an undirected {1,2} instance".into()));
    }
    Ok(())
}

/// The adapter with the default exact 2-matching subroutine.
pub fn triangle_free_from_simple_2matching(req: &TwoFactorRequest<'_>) -> Result<CycleCover> {
    triangle_free_with(req, &ExactTwoMatching::default())
}

/// The adapter with a caller-supplied 2-matching subroutine.
pub fn triangle_free_with(req: &TwoFactorRequest<'_>, solver: &dyn TwoMatchingSolver) -> Result<CycleCover> {
    check_request(req)?;
    let inst = req.inst;
    let n = inst.n();
    let one = Rational::from_integer(1);
    let h: Vec<Vec<bool>> = (0..n).map(|u| (0..n).map(|v| u != v && inst.w(u, v) == one).collect()).collect();
    let doubled: Vec<Vec<bool>> = (0..n)
        .map(|u| (0..n).map(|v| h[u][v] && req.allow_pair_2cycles && inst.is_pair(u, v)).collect())
        .collect();
    let sm = solver.max_triangle_free(&h, &doubled)?;
    let (mut cycles, paths) = sm.components(n);
    if paths.is_empty() {
        return Ok(CycleCover::new(cycles.into_iter().map(Cycle::new).collect(), false));
    }
    let joined: Vec<usize> = paths.concat();
    if legal_cycle(inst, req, &joined) {
        cycles.push(joined);
    } else {
        let (idx, merged) = best_exchange(inst, req, &joined, &cycles).ok_or(Error::NoTwoFactor)?;
        cycles[idx] = merged;
    }
    cycles.sort_by_key(|c| *c.iter().min().unwrap());
    Ok(CycleCover::new(cycles.into_iter().map(Cycle::new).collect(), false))
}

fn legal_cycle(inst: &Instance, req: &TwoFactorRequest<'_>, c: &[usize]) -> bool {
    match c.len() {
        0 | 1 | 3 => false,
        2 => req.allow_pair_2cycles && inst.is_pair(c[0], c[1]),
        _ => true,
    }
}

fn path_cost(inst: &Instance, p: &[usize]) -> Rational {
    p.windows(2).map(|w| inst.w(w[0], w[1])).sum()
}

/// Opening `c` at its edge (c[i], c[i+1]) gives the path c[i+1] … c[i].
fn opened(c: &[usize], i: usize) -> Vec<usize> {
    let k = c.len();
    (1..=k).map(|t| c[(i + t) % k]).collect()
}

/// Cheapest legal merge of the short cycle `z` with one other cycle: drop an
/// edge from each and reconnect the two paths.
fn best_exchange(
    inst: &Instance,
    req: &TwoFactorRequest<'_>,
    z: &[usize],
    cycles: &[Vec<usize>],
) -> Option<(usize, Vec<usize>)> {
    let mut best: Option<(Rational, usize, Vec<usize>)> = None;
    let old_z = if z.len() > 1 { path_cost(inst, z) + inst.w(*z.last().unwrap(), z[0]) } else { Rational::from_integer(0) };
    for (ci, c) in cycles.iter().enumerate() {
        let old_c = if c.len() > 1 { path_cost(inst, c) + inst.w(*c.last().unwrap(), c[0]) } else { Rational::from_integer(0) };
        for i in 0..z.len() {
            let zp = opened(z, i);
            for j in 0..c.len() {
                let cp = opened(c, j);
                for rev in [false, true] {
                    let mut seq = zp.clone();
                    if rev {
                        seq.extend(cp.iter().rev());
                    } else {
                        seq.extend(cp.iter());
                    }
                    if !legal_cycle(inst, req, &seq) {
                        continue;
                    }
                    let cost = path_cost(inst, &seq) + inst.w(*seq.last().unwrap(), seq[0]) - old_z - old_c;
                    if best.as_ref().is_none_or(|(b, _, _)| cost < *b) {
                        best = Some((cost, ci, seq));
                    }
                }
            }
        }
    }
    best.map(|(_, i, s)| (i, s))
}

/// Exact minimum-weight triangle-free 2-factor: Held-Karp cycle costs on
/// every subset of size ≥ 4 (plus legal pair 2-cycles), then a partition DP.
/// Limited to n ≤ 16.
pub fn min_weight_triangle_free_2factor(req: &TwoFactorRequest<'_>) -> Result<CycleCover> {
    check_request(req)?;
    let inst = req.inst;
    let n = inst.n();
    if n > 16 {
        return Err(Error::BudgetExceeded { solver: "min_weight_triangle_free_2factor", n, max: 16 });
    }
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
                if mask >> j & 1 == 0 {
                    let nm = mask | 1 << j;
                    let c = d + inst.w(last, j);
                    if dp[nm * n + j].is_none_or(|x| c < x) {
                        dp[nm * n + j] = Some(c);
                        parent[nm * n + j] = last as u8;
                    }
                }
            }
        }
    }
    let cycle_cost = |mask: usize| -> Option<(Rational, usize)> {
        let k = mask.count_ones();
        let start = mask.trailing_zeros() as usize;
        if k == 2 {
            let other = (mask ^ 1 << start).trailing_zeros() as usize;
            return (req.allow_pair_2cycles && inst.is_pair(start, other))
                .then(|| (inst.w(start, other) * Rational::from_integer(2), other));
        }
        if k < 4 {
            return None;
        }
        let mut best: Option<(Rational, usize)> = None;
        for last in start + 1..n {
            if let Some(d) = dp[mask * n + last] {
                let c = d + inst.w(last, start);
                if best.as_ref().is_none_or(|(b, _)| c < *b) {
                    best = Some((c, last));
                }
            }
        }
        best
    };
    let cyc: Vec<Option<(Rational, usize)>> = (0..size).map(cycle_cost).collect();
    let mut best: Vec<Option<(Rational, usize)>> = vec![None; size];
    best[0] = Some((Rational::from_integer(0), 0));
    for mask in 1..size {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut sub = rest;
        loop {
            let part = sub | low;
            if let (Some((c, _)), Some((b, _))) = (cyc[part], best[mask ^ part]) {
                if best[mask].is_none_or(|(x, _)| c + b < x) {
                    best[mask] = Some((c + b, part));
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    if best[size - 1].is_none() {
        return Err(Error::NoTwoFactor);
    }
    let mut cycles = Vec::new();
    let mut mask = size - 1;
    while mask != 0 {
        let part = best[mask].unwrap().1;
        let (_, mut v) = cyc[part].unwrap();
        let mut m = part;
        let mut rev = Vec::new();
        if part.count_ones() == 2 {
            rev = vec![v, part.trailing_zeros() as usize];
        } else {
            while m.count_ones() > 1 {
                rev.push(v);
                let p = parent[m * n + v] as usize;
                m ^= 1 << v;
                v = p;
            }
            rev.push(v);
        }
        rev.reverse();
        cycles.push(Cycle::new(rev));
        mask ^= part;
    }
    cycles.sort_by_key(|c| c.min_vertex());
    Ok(CycleCover::new(cycles, false))
}
