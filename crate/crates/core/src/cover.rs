//! Solutions: sets of vertex-disjoint cycles, their feasibility and cost.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::instance::{Instance, Rational};

/// One cycle as a vertex sequence. The closing edge from the last vertex back
/// to the first is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    pub vertices: Vec<usize>,
    /// Set on an undirected length-2 cycle realized by the duplicated pair
    /// edge of a size-2 group.
    pub pair: bool,
}

impl Cycle {
    pub fn new(vertices: Vec<usize>) -> Self {
        let pair = vertices.len() == 2;
        Cycle { vertices, pair }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Consecutive (tail, head) pairs including the closing one.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.vertices.len();
        (0..k).map(move |i| (self.vertices[i], self.vertices[(i + 1) % k]))
    }

    pub fn cost(&self, inst: &Instance) -> Rational {
        if self.vertices.len() < 2 {
            return Rational::zero();
        }
        self.edges().map(|(u, v)| inst.w(u, v)).sum()
    }

    pub fn min_vertex(&self) -> usize {
        self.vertices.iter().copied().min().unwrap_or(usize::MAX)
    }

    /// Rotation starting at the smallest vertex; for undirected cycles the
    /// direction with the smaller second vertex is chosen as well.
    pub fn canonical(&self, directed: bool) -> Cycle {
        let k = self.vertices.len();
        if k == 0 {
            return self.clone();
        }
        let start = (0..k).min_by_key(|&i| self.vertices[i]).unwrap();
        let fwd: Vec<usize> = (0..k).map(|i| self.vertices[(start + i) % k]).collect();
        if directed || k < 3 {
            return Cycle { vertices: fwd, pair: self.pair };
        }
        let mut bwd = Vec::with_capacity(k);
        bwd.push(fwd[0]);
        bwd.extend(fwd[1..].iter().rev());
        let vertices = if bwd[1] < fwd[1] { bwd } else { fwd };
        Cycle { vertices, pair: self.pair }
    }
}

/// A set of vertex-disjoint cycles; the solution form of every algorithm.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CycleCover {
    pub cycles: Vec<Cycle>,
    pub directed: bool,
}

impl CycleCover {
    pub fn new(cycles: Vec<Cycle>, directed: bool) -> Self {
        CycleCover { cycles, directed }
    }

    pub fn undirected(seqs: Vec<Vec<usize>>) -> Self {
        CycleCover { cycles: seqs.into_iter().map(Cycle::new).collect(), directed: false }
    }

    pub fn directed(seqs: Vec<Vec<usize>>) -> Self {
        CycleCover { cycles: seqs.into_iter().map(Cycle::new).collect(), directed: true }
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Sorted cycles in canonical rotation; handy for comparisons.
    pub fn canonical(&self) -> CycleCover {
        let mut cycles: Vec<Cycle> = self.cycles.iter().map(|c| c.canonical(self.directed)).collect();
        cycles.sort();
        CycleCover { cycles, directed: self.directed }
    }

    /// `cycle_of[v]` for every covered vertex, `usize::MAX` otherwise.
    pub fn cycle_index(&self, n: usize) -> Vec<usize> {
        let mut idx = vec![usize::MAX; n];
        for (i, c) in self.cycles.iter().enumerate() {
            for &v in &c.vertices {
                if v < n {
                    idx[v] = i;
                }
            }
        }
        idx
    }

    /// Number of edges of weight two, the e₂ count of {1,2} instances.
    pub fn two_edge_count(&self, inst: &Instance) -> usize {
        self.cycles
            .iter()
            .filter(|c| c.len() >= 2)
            .flat_map(|c| c.edges())
            .filter(|&(u, v)| inst.is_two_edge(u, v))
            .count()
    }

    /// Number of cycles that split some terminal group.
    pub fn eta(&self, inst: &Instance) -> usize {
        eta(self, inst.groups(), inst.n())
    }
}

/// Number of cycles that do not respect the partition `groups`.
pub fn eta(cover: &CycleCover, groups: &[Vec<usize>], n: usize) -> usize {
    let idx = cover.cycle_index(n);
    let mut bad = vec![false; cover.cycles.len()];
    for g in groups {
        let first = idx[g[0]];
        if g.iter().any(|&v| idx[v] != first) {
            for &v in g {
                if idx[v] != usize::MAX {
                    bad[idx[v]] = true;
                }
            }
        }
    }
    bad.into_iter().filter(|&b| b).count()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    VertexOutOfRange(usize),
    /// Vertex visited twice, in the same or in different cycles.
    Overlap(usize),
    NotSpanned(usize),
    /// A terminal group spread over more than one cycle.
    SplitGroup(usize),
    /// Undirected 2-cycle not on a size-2 group, or missing its pair flag.
    IllegalTwoCycle(usize),
    /// A cycle with fewer than two vertices.
    Degenerate(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Spanning, disjointness, group and 2-cycle checks; never fails, the report
/// lists every problem found.
pub fn validate_solution(inst: &Instance, cover: &CycleCover) -> FeasibilityReport {
    let n = inst.n();
    let mut violations = Vec::new();
    let mut seen = vec![usize::MAX; n];
    for (ci, c) in cover.cycles.iter().enumerate() {
        if c.len() < 2 {
            violations.push(Violation::Degenerate(ci));
        }
        if c.len() == 2 && !cover.directed {
            let (u, v) = (c.vertices[0], c.vertices[1]);
            if !c.pair || u >= n || v >= n || !inst.is_pair(u, v) {
                violations.push(Violation::IllegalTwoCycle(ci));
            }
        }
        for &v in &c.vertices {
            if v >= n {
                violations.push(Violation::VertexOutOfRange(v));
                continue;
            }
            if seen[v] != usize::MAX {
                violations.push(Violation::Overlap(v));
            }
            seen[v] = ci;
        }
    }
    for (v, &s) in seen.iter().enumerate() {
        if s == usize::MAX {
            violations.push(Violation::NotSpanned(v));
        }
    }
    for (g, members) in inst.groups().iter().enumerate() {
        let first = seen[members[0]];
        if members.iter().any(|&v| seen[v] != first) {
            violations.push(Violation::SplitGroup(g));
        }
    }
    FeasibilityReport { violations }
}

/// Checks that `cover` is a 2-factor of the instance graph (spanning,
/// disjoint, legal 2-cycles) without the group condition.
pub fn is_two_factor(inst: &Instance, cover: &CycleCover) -> bool {
    validate_solution(inst, cover)
        .violations
        .iter()
        .all(|v| matches!(v, Violation::SplitGroup(_)))
}

/// Sum of cycle costs. A duplicated-pair 2-cycle costs twice its edge.
pub fn cover_cost(inst: &Instance, cover: &CycleCover) -> Result<Rational> {
    let report = validate_solution(inst, cover);
    if let Some(v) = report
        .violations
        .iter()
        .find(|v| !matches!(v, Violation::SplitGroup(_)))
    {
        return Err(Error::InvalidCover(format!("{v:?}")));
    }
    Ok(raw_cost(inst, cover))
}

/// Cost without any validation.
pub fn raw_cost(inst: &Instance, cover: &CycleCover) -> Rational {
    cover.cycles.iter().map(|c| c.cost(inst)).sum()
}
