//! Small graph containers: simple weighted graphs for the matching
//! subroutines and edge multisets for network-design solutions.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::instance::{Instance, Rational};

/// Simple undirected weighted graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, Rational)>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        WeightedGraph { n, edges: Vec::new() }
    }

    pub fn with_edges(n: usize, edges: Vec<(usize, usize, Rational)>) -> Self {
        WeightedGraph { n, edges }
    }

    /// Unit-weight graph from an edge list.
    pub fn unweighted(n: usize, edges: &[(usize, usize)]) -> Self {
        WeightedGraph {
            n,
            edges: edges.iter().map(|&(u, v)| (u, v, Rational::from_integer(1))).collect(),
        }
    }

    /// Complete graph on `vertices` (re-indexed 0..k) with instance weights.
    pub fn complete_on(inst: &Instance, vertices: &[usize]) -> Self {
        let k = vertices.len();
        let mut edges = Vec::with_capacity(k * k / 2);
        for i in 0..k {
            for j in i + 1..k {
                edges.push((i, j, inst.w(vertices[i], vertices[j])));
            }
        }
        WeightedGraph { n: k, edges }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: Rational) {
        self.edges.push((u, v, w));
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v, _) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }
}

/// Ordered key of an undirected edge.
#[inline]
pub fn ekey(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Undirected edge multiset over instance vertices. Multiplicities are
/// bounded by two (the duplicated pair edge, or a doubled edge).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeSubgraph {
    pub n: usize,
    mult: BTreeMap<(usize, usize), usize>,
}

impl EdgeSubgraph {
    pub fn new(n: usize) -> Self {
        EdgeSubgraph { n, mult: BTreeMap::new() }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = EdgeSubgraph::new(n);
        for &(u, v) in edges {
            g.add(u, v);
        }
        g
    }

    pub fn add(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        *self.mult.entry(ekey(u, v)).or_insert(0) += 1;
    }

    pub fn remove(&mut self, u: usize, v: usize) -> bool {
        let k = ekey(u, v);
        match self.mult.get_mut(&k) {
            Some(m) if *m > 1 => {
                *m -= 1;
                true
            }
            Some(_) => {
                self.mult.remove(&k);
                true
            }
            None => false,
        }
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.mult.get(&ekey(u, v)).copied().unwrap_or(0)
    }

    /// Distinct edges with their multiplicity, in key order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.mult.iter().map(|(&k, &m)| (k, m))
    }

    /// All edge copies, each repeated by multiplicity.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (&(u, v), &m) in &self.mult {
            for _ in 0..m {
                out.push((u, v));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.mult.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.is_empty()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for (&(u, v), &m) in &self.mult {
            d[u] += m;
            d[v] += m;
        }
        d
    }

    pub fn weight(&self, inst: &Instance) -> Rational {
        let mut total = Rational::zero();
        for (&(u, v), &m) in &self.mult {
            total += inst.w(u, v) * Rational::from_integer(m as i64);
        }
        total
    }

    /// Multiset union.
    pub fn union(&self, other: &EdgeSubgraph) -> EdgeSubgraph {
        let mut out = self.clone();
        for (&(u, v), &m) in &other.mult {
            for _ in 0..m {
                out.add(u, v);
            }
        }
        out
    }

    /// Connected component label per vertex (isolated vertices get their own).
    pub fn components(&self) -> Vec<usize> {
        let mut dsu = Dsu::new(self.n);
        for &(u, v) in self.mult.keys() {
            dsu.union(u, v);
        }
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut out = vec![0; self.n];
        for v in 0..self.n {
            let r = dsu.find(v);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            out[v] = label[r];
        }
        out
    }

    /// Adjacency with one entry per distinct edge: (neighbor, multiplicity).
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (&(u, v), &m) in &self.mult {
            adj[u].push((v, m));
            adj[v].push((u, m));
        }
        adj
    }

    /// Bridges: edges of multiplicity one lying on no cycle.
    pub fn bridges(&self) -> Vec<(usize, usize)> {
        let adj = self.adjacency();
        let n = self.n;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut timer = 0;
        let mut out = Vec::new();
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            // (vertex, parent, next adjacency index)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(&mut (v, parent, ref mut i)) = stack.last_mut() {
                if *i < adj[v].len() {
                    let (u, _) = adj[v][*i];
                    *i += 1;
                    if u == parent {
                        continue;
                    }
                    if disc[u] == usize::MAX {
                        disc[u] = timer;
                        low[u] = timer;
                        timer += 1;
                        stack.push((u, v, 0));
                    } else {
                        low[v] = low[v].min(disc[u]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[v]);
                        if low[v] > disc[p] && self.multiplicity(p, v) == 1 {
                            out.push(ekey(p, v));
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Eulerian circuit of the component containing `start`, following the
    /// lowest-numbered unused edge at every step. Requires even degrees.
    pub fn euler_circuit(&self, start: usize) -> Vec<usize> {
        let mut remaining = self.mult.clone();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for &(u, v) in self.mult.keys() {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let mut ptr = vec![0usize; self.n];
        let mut stack = vec![start];
        let mut circuit = Vec::new();
        while let Some(&v) = stack.last() {
            let mut moved = false;
            while ptr[v] < adj[v].len() {
                let u = adj[v][ptr[v]];
                let k = ekey(u, v);
                match remaining.get_mut(&k) {
                    Some(m) if *m > 0 => {
                        *m -= 1;
                        stack.push(u);
                        moved = true;
                        break;
                    }
                    _ => ptr[v] += 1,
                }
            }
            if !moved {
                circuit.push(v);
                stack.pop();
            }
        }
        circuit.reverse();
        circuit
    }
}

/// Disjoint-set union with path halving.
#[derive(Debug, Clone)]
pub struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Minimum spanning tree weight of the complete graph on `vertices`.
pub fn mst_weight(inst: &Instance, vertices: &[usize]) -> Rational {
    mst_edges(inst, vertices).iter().map(|&(u, v)| inst.w(u, v)).sum()
}

/// Prim's algorithm on the complete graph induced by `vertices`.
pub fn mst_edges(inst: &Instance, vertices: &[usize]) -> Vec<(usize, usize)> {
    let k = vertices.len();
    if k < 2 {
        return Vec::new();
    }
    let mut in_tree = vec![false; k];
    let mut best: Vec<Option<(Rational, usize)>> = vec![None; k];
    in_tree[0] = true;
    for j in 1..k {
        best[j] = Some((inst.w(vertices[0], vertices[j]), 0));
    }
    let mut out = Vec::with_capacity(k - 1);
    for _ in 1..k {
        let mut pick = usize::MAX;
        for j in 0..k {
            if in_tree[j] {
                continue;
            }
            if pick == usize::MAX || best[j].unwrap().0 < best[pick].unwrap().0 {
                pick = j;
            }
        }
        let (_, from) = best[pick].unwrap();
        in_tree[pick] = true;
        out.push(ekey(vertices[from], vertices[pick]));
        for j in 0..k {
            if !in_tree[j] {
                let w = inst.w(vertices[pick], vertices[j]);
                if w < best[j].unwrap().0 {
                    best[j] = Some((w, pick));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bridge_between_triangles() {
        let g = EdgeSubgraph::from_edges(
            6,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)],
        );
        assert_eq!(g.bridges(), vec![(2, 3)]);
    }

    #[test]
    fn doubled_edge_is_not_a_bridge() {
        let g = EdgeSubgraph::from_edges(2, &[(0, 1), (0, 1)]);
        assert!(g.bridges().is_empty());
        let path = EdgeSubgraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(path.bridges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn euler_circuit_uses_every_edge() {
        let g = EdgeSubgraph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        let c = g.euler_circuit(0);
        assert_eq!(c.len(), 7);
        assert_eq!(c.first(), c.last());
    }
}
