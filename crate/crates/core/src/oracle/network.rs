//! Exact survivable-network-design and Steiner-forest optima.

use alloc::vec;
use alloc::vec::Vec;

use super::{brute_force_smc, group_masks, NodeCounter, OracleBudget};
use crate::graph::{mst_edges, mst_weight, EdgeSubgraph};
use crate::instance::{Instance, Rational};
use crate::error::Result;

/// Every terminal group lies inside one 2-edge-connected component.
pub(crate) fn snd_feasible(inst: &Instance, g: &EdgeSubgraph) -> bool {
    let mut pruned = g.clone();
    for (u, v) in g.bridges() {
        pruned.remove(u, v);
    }
    let comp = pruned.components();
    inst.groups().iter().all(|t| t.iter().all(|&v| comp[v] == comp[t[0]]))
}

/// Exact SND optimum for requirement 2 inside every group. Each edge is used
/// at most once, except the edge of a size-2 group which may be doubled.
/// Branch and bound over edges in ascending weight order, seeded with the
/// multicycle optimum as an incumbent.
pub fn brute_force_snd(inst: &Instance, budget: &OracleBudget) -> Result<(Rational, EdgeSubgraph)> {
    let n = inst.n();
    OracleBudget::check("brute_force_snd", n, budget.snd)?;
    let (smc, cover) = brute_force_smc(inst, budget)?;
    let mut incumbent = EdgeSubgraph::new(n);
    for c in &cover.cycles {
        for (u, v) in c.edges() {
            incumbent.add(u, v);
        }
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
            if inst.is_pair(u, v) {
                edges.push((u, v));
            }
        }
    }
    edges.sort_by_key(|&(u, v)| (inst.w(u, v), u, v));
    let mut rem = vec![0usize; n];
    for &(u, v) in &edges {
        rem[u] += 1;
        rem[v] += 1;
    }
    let mut s = Search {
        inst,
        edges,
        deg: vec![0; n],
        rem,
        cur: EdgeSubgraph::new(n),
        best: (smc, incumbent),
        nodes: NodeCounter::new("brute_force_snd", budget.max_nodes),
    };
    s.go(0, Rational::from_integer(0))?;
    Ok(s.best)
}

struct Search<'a> {
    inst: &'a Instance,
    edges: Vec<(usize, usize)>,
    deg: Vec<usize>,
    rem: Vec<usize>,
    cur: EdgeSubgraph,
    best: (Rational, EdgeSubgraph),
    nodes: NodeCounter,
}

impl Search<'_> {
    fn go(&mut self, i: usize, cost: Rational) -> Result<()> {
        self.nodes.tick()?;
        if cost >= self.best.0 {
            return Ok(());
        }
        let mut deficit = 0;
        for v in 0..self.deg.len() {
            let need = 2usize.saturating_sub(self.deg[v]);
            if need > self.rem[v] {
                return Ok(());
            }
            deficit += need;
        }
        if i == self.edges.len() || deficit == 0 {
            if snd_feasible(self.inst, &self.cur) {
                self.best = (cost, self.cur.clone());
                return Ok(());
            }
            if i == self.edges.len() {
                return Ok(());
            }
        }
        let (u, v) = self.edges[i];
        let w = self.inst.w(u, v);
        // the remaining edges all weigh at least w
        let bound = cost + w * Rational::from_integer(deficit.div_ceil(2) as i64);
        if deficit > 0 && bound >= self.best.0 {
            return Ok(());
        }
        self.rem[u] -= 1;
        self.rem[v] -= 1;
        self.deg[u] += 1;
        self.deg[v] += 1;
        self.cur.add(u, v);
        self.go(i + 1, cost + w)?;
        self.cur.remove(u, v);
        self.deg[u] -= 1;
        self.deg[v] -= 1;
        self.go(i + 1, cost)?;
        self.rem[u] += 1;
        self.rem[v] += 1;
        Ok(())
    }
}

/// Exact Steiner forest: every vertex is a terminal, so each tree spans a
/// union of whole groups and costs that union's minimum spanning tree.
pub fn brute_force_steiner_forest(inst: &Instance, budget: &OracleBudget) -> Result<(Rational, EdgeSubgraph)> {
    let n = inst.n();
    OracleBudget::check("brute_force_steiner_forest", n, budget.steiner_forest)?;
    let gm = group_masks(inst);
    let k = gm.len();
    let full = (1usize << k) - 1;
    let verts = |s: usize| -> Vec<usize> {
        let m = (0..k).filter(|&g| s >> g & 1 == 1).fold(0u32, |m, g| m | gm[g]);
        (0..n).filter(|&v| m >> v & 1 == 1).collect()
    };
    let mst: Vec<Rational> = (0..=full).map(|s| mst_weight(inst, &verts(s))).collect();
    let mut best: Vec<(Rational, usize)> = vec![(Rational::from_integer(0), 0); full + 1];
    for s in 1..=full {
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let mut sub = rest;
        let mut cur: Option<(Rational, usize)> = None;
        loop {
            let part = sub | low;
            let total = mst[part] + best[s ^ part].0;
            if cur.is_none_or(|(b, _)| total < b) {
                cur = Some((total, part));
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        best[s] = cur.unwrap();
    }
    let mut forest = EdgeSubgraph::new(n);
    let mut s = full;
    while s != 0 {
        let part = best[s].1;
        for (u, v) in mst_edges(inst, &verts(part)) {
            forest.add(u, v);
        }
        s ^= part;
    }
    Ok((best[full].0, forest))
}
