//! O(log n) approximation for asymmetric metric instances: starting from a
//! minimum directed 2-factor, repeatedly pick representatives of the cycles
//! that split a group, add a minimum directed 2-factor on them and shortcut
//! the union back to a 2-factor. Every round removes at least a quarter of
//! the splitting cycles and costs at most the optimum.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cover::{eta, validate_solution, Cycle, CycleCover};
use crate::error::{Error, Result};
use crate::factor::directed_2factor_on;
use crate::graph::{Dsu, WeightedGraph};
use crate::instance::{Instance, Rational, WeightClass};
use crate::matching::minimal_edge_cover;

/// Arc multiset on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerianDigraph {
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
}

impl EulerianDigraph {
    pub fn union_of(n: usize, covers: &[&CycleCover]) -> Self {
        let arcs = covers.iter().flat_map(|c| c.cycles.iter().flat_map(|cy| cy.edges())).collect();
        EulerianDigraph { n, arcs }
    }

    pub fn weight(&self, inst: &Instance) -> Rational {
        self.arcs.iter().map(|&(u, v)| inst.w(u, v)).sum()
    }

    fn degrees(&self) -> (Vec<usize>, Vec<usize>) {
        let (mut out, mut inn) = (vec![0; self.n], vec![0; self.n]);
        for &(u, v) in &self.arcs {
            out[u] += 1;
            inn[v] += 1;
        }
        (out, inn)
    }

    /// Weak components ignoring `skip`; returns (component id per vertex,
    /// count). Ids are the smallest vertex of the component.
    fn components(&self, skip: Option<usize>) -> (Vec<usize>, usize) {
        let mut dsu = Dsu::new(self.n);
        for &(u, v) in &self.arcs {
            if Some(u) != skip && Some(v) != skip {
                dsu.union(u, v);
            }
        }
        let mut id = vec![usize::MAX; self.n];
        let mut count = 0;
        for v in 0..self.n {
            if Some(v) == skip {
                continue;
            }
            let r = dsu.find(v);
            if id[r] == usize::MAX {
                id[r] = v;
                count += 1;
            }
            id[v] = id[r];
        }
        (id, count)
    }

    /// First vertex breaking the strongly Eulerian conditions: equal in- and
    /// out-degree k(v) ≥ 1, and D − v has exactly k(v) − 1 more components.
    pub fn strongly_eulerian_violation(&self) -> Option<usize> {
        let (out, inn) = self.degrees();
        let (_, whole) = self.components(None);
        (0..self.n).find(|&v| {
            if out[v] != inn[v] || out[v] == 0 {
                return true;
            }
            let (_, without) = self.components(Some(v));
            without != whole + out[v] - 1
        })
    }

    pub fn is_strongly_eulerian(&self) -> bool {
        self.strongly_eulerian_violation().is_none()
    }
}

/// Splices at the smallest vertex with k(v) > 1, joining an in-arc from one
/// component of D − v with an out-arc into another (lexicographically
/// smallest pair), until every vertex has k(v) = 1.
pub fn directed_shortcut(d: &EulerianDigraph) -> Result<CycleCover> {
    if let Some(v) = d.strongly_eulerian_violation() {
        return Err(Error::NotEulerian(v));
    }
    let mut d = d.clone();
    loop {
        let (out, _) = d.degrees();
        let Some(v) = (0..d.n).find(|&v| out[v] > 1) else { break };
        let (comp, _) = d.components(Some(v));
        let ins: BTreeSet<(usize, usize)> =
            d.arcs.iter().filter(|&&(a, b)| b == v && a != v).map(|&(a, _)| (comp[a], a)).collect();
        let outs: BTreeSet<(usize, usize)> =
            d.arcs.iter().filter(|&&(a, b)| a == v && b != v).map(|&(_, b)| (comp[b], b)).collect();
        let pick = ins
            .iter()
            .flat_map(|&(c1, u1)| outs.iter().filter(move |&&(c2, _)| c2 != c1).map(move |&(c2, w2)| ((c1, c2), u1, w2)))
            .min();
        let Some((_, u1, w2)) = pick else { return Err(Error::NotEulerian(v)) };
        let i = d.arcs.iter().position(|&a| a == (u1, v)).unwrap();
        d.arcs.swap_remove(i);
        let j = d.arcs.iter().position(|&a| a == (v, w2)).unwrap();
        d.arcs.swap_remove(j);
        d.arcs.push((u1, w2));
    }
    Ok(cover_from_successors(&d))
}

fn cover_from_successors(d: &EulerianDigraph) -> CycleCover {
    let mut succ = vec![usize::MAX; d.n];
    for &(u, v) in &d.arcs {
        succ[u] = v;
    }
    CycleCover::new(crate::oracle::cycles_of(&succ).into_iter().map(Cycle::new).collect(), true)
}

/// One Euler circuit per weak component, from its smallest vertex, keeping
/// first visits. Needs only equal in- and out-degrees.
pub fn eulerian_shortcut(d: &EulerianDigraph) -> Result<CycleCover> {
    let (out, inn) = d.degrees();
    if let Some(v) = (0..d.n).find(|&v| out[v] != inn[v] || out[v] == 0) {
        return Err(Error::NotEulerian(v));
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); d.n];
    let mut sorted = d.arcs.clone();
    sorted.sort_unstable();
    for &(u, v) in sorted.iter().rev() {
        adj[u].push(v);
    }
    let (comp, _) = d.components(None);
    let mut cycles = Vec::new();
    let mut seen = vec![false; d.n];
    for s in 0..d.n {
        if comp[s] != s {
            continue;
        }
        // Hierholzer
        let mut stack = vec![s];
        let mut circuit = Vec::new();
        while let Some(&x) = stack.last() {
            match adj[x].pop() {
                Some(y) => stack.push(y),
                None => circuit.push(stack.pop().unwrap()),
            }
        }
        circuit.reverse();
        let mut cyc = Vec::new();
        for v in circuit {
            if !seen[v] {
                seen[v] = true;
                cyc.push(v);
            }
        }
        cycles.push(Cycle::new(cyc));
    }
    Ok(CycleCover::new(cycles, true))
}

/// Why a representative pair was chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentativePair {
    /// Indices into the cover.
    pub cycles: (usize, usize),
    pub group: usize,
    pub vertices: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentativeSet {
    /// Sorted, distinct.
    pub vertices: Vec<usize>,
    pub pairs: Vec<RepresentativePair>,
}

impl RepresentativeSet {
    /// Cycles of `cover` holding exactly one representative.
    pub fn lonely(&self, cover: &CycleCover, n: usize) -> usize {
        let idx = cover.cycle_index(n);
        let mut count = vec![0usize; cover.len()];
        for &r in &self.vertices {
            count[idx[r]] += 1;
        }
        count.iter().filter(|&&c| c == 1).count()
    }
}

/// Minimal edge cover of the graph on splitting cycles, adjacent when a
/// group meets both; each cover edge contributes the smallest vertex of the
/// smallest shared group on either side.
pub fn representatives(inst: &Instance, cover: &CycleCover) -> Result<RepresentativeSet> {
    let n = inst.n();
    let idx = cover.cycle_index(n);
    let touches: Vec<BTreeSet<usize>> = inst.groups().iter().map(|g| g.iter().map(|&v| idx[v]).collect()).collect();
    let split: Vec<usize> = (0..cover.len())
        .filter(|&c| touches.iter().any(|t| t.len() > 1 && t.contains(&c)))
        .collect();
    if split.is_empty() {
        return Err(Error::Precondition("every cycle already respects the groups".into()));
    }
    let node = |c: usize| split.iter().position(|&x| x == c).unwrap();
    let mut g = WeightedGraph::new(split.len());
    let mut shared = BTreeSet::new();
    for t in &touches {
        for &a in t {
            for &b in t {
                if a < b {
                    shared.insert((a, b));
                }
            }
        }
    }
    for &(a, b) in &shared {
        g.add_edge(node(a), node(b), Rational::from_integer(1));
    }
    let ec = minimal_edge_cover(&g)?;
    let mut pairs = Vec::new();
    let mut verts = BTreeSet::new();
    for &(x, y) in &ec.edges {
        let (a, b) = (split[x], split[y]);
        let group = (0..touches.len()).find(|&t| touches[t].contains(&a) && touches[t].contains(&b)).unwrap();
        let pick = |c: usize| *inst.groups()[group].iter().filter(|&&v| idx[v] == c).min().unwrap();
        let (ra, rb) = (pick(a), pick(b));
        verts.insert(ra);
        verts.insert(rb);
        pairs.push(RepresentativePair { cycles: (a, b), group, vertices: (ra, rb) });
    }
    Ok(RepresentativeSet { vertices: verts.into_iter().collect(), pairs })
}

/// Properties (i)–(iii) by direct scan.
pub fn check_representatives(inst: &Instance, cover: &CycleCover, r: &RepresentativeSet) -> core::result::Result<(), String> {
    let n = inst.n();
    let idx = cover.cycle_index(n);
    let e = eta(cover, inst.groups(), n);
    let in_r: BTreeSet<usize> = r.vertices.iter().copied().collect();
    for (c, cyc) in cover.cycles.iter().enumerate() {
        let splits = inst.groups().iter().any(|g| g.iter().any(|&v| idx[v] == c) && g.iter().any(|&v| idx[v] != c));
        if splits && !cyc.vertices.iter().any(|v| in_r.contains(v)) {
            return Err(format!("splitting cycle {c} has no representative"));
        }
    }
    for (t, g) in inst.groups().iter().enumerate() {
        if g.iter().filter(|v| in_r.contains(v)).count() == 1 {
            return Err(format!("group {t} has exactly one representative"));
        }
    }
    if 2 * r.lonely(cover, n) < e {
        return Err(format!("{} lonely cycles for eta = {e}", r.lonely(cover, n)));
    }
    Ok(())
}

/// Smallest k with (4/3)^k ≥ n.
pub fn log43_ceil(n: usize) -> usize {
    let (mut p4, mut p3, mut k) = (1u128, 1u128, 0);
    while p4 < n as u128 * p3 {
        p4 *= 4;
        p3 *= 3;
        k += 1;
    }
    k
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymIteration {
    pub eta_before: usize,
    pub reps: RepresentativeSet,
    pub inner: CycleCover,
    pub inner_weight: Rational,
    pub union: EulerianDigraph,
    /// Whether the union met the strongly Eulerian conditions; if not, it
    /// was shortcut along Euler circuits instead of by splicing.
    pub strongly_eulerian: bool,
    pub eta_after: usize,
    pub cover_after: CycleCover,
    pub weight_after: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymRun {
    pub initial: CycleCover,
    pub initial_weight: Rational,
    pub rounds: Vec<AsymIteration>,
    pub cover: CycleCover,
    pub cost: Rational,
}

impl AsymRun {
    /// Minimum 2-factor computations: the initial one plus one per round.
    pub fn iterations(&self) -> usize {
        1 + self.rounds.len()
    }

    /// Largest single 2-factor weight; each is at most the optimum.
    pub fn max_factor_weight(&self) -> Rational {
        self.rounds.iter().map(|r| r.inner_weight).fold(self.initial_weight, |a, b| a.max(b))
    }
}

pub fn approx_asymmetric(inst: &Instance) -> Result<CycleCover> {
    Ok(approx_asymmetric_run(inst)?.cover)
}

pub fn approx_asymmetric_run(inst: &Instance) -> Result<AsymRun> {
    if inst.class() != WeightClass::AsymmetricMetric {
        return Err(Error::Precondition("the directed algorithm needs an asymmetric metric instance".into()));
    }
    let n = inst.n();
    let all: Vec<usize> = (0..n).collect();
    let initial = directed_2factor_on(inst, &all)?;
    let initial_weight = initial.cycles.iter().map(|c| c.cost(inst)).sum();
    let mut cover = initial.clone();
    let mut weight = initial_weight;
    let mut rounds = Vec::new();
    let bound = log43_ceil(n) + 1;
    loop {
        let eta_before = eta(&cover, inst.groups(), n);
        if eta_before == 0 {
            break;
        }
        let reps = representatives(inst, &cover)?;
        check_representatives(inst, &cover, &reps).map_err(Error::Internal)?;
        let inner = directed_2factor_on(inst, &reps.vertices)?;
        let inner_weight: Rational = inner.cycles.iter().map(|c| c.cost(inst)).sum();
        let union = EulerianDigraph::union_of(n, &[&cover, &inner]);
        let strongly_eulerian = union.is_strongly_eulerian();
        let next = if strongly_eulerian { directed_shortcut(&union)? } else { eulerian_shortcut(&union)? };
        let (before, _) = union.components(None);
        let after = next.cycle_index(n);
        if (0..n).any(|v| (0..n).any(|u| (before[u] == before[v]) != (after[u] == after[v]))) {
            return Err(Error::Internal("shortcut changed the component structure".into()));
        }
        let weight_after: Rational = next.cycles.iter().map(|c| c.cost(inst)).sum();
        if weight_after > weight + inner_weight {
            return Err(Error::Internal("shortcut increased the weight".into()));
        }
        let eta_after = eta(&next, inst.groups(), n);
        if 4 * eta_after > 3 * eta_before {
            return Err(Error::Internal(format!("eta went from {eta_before} to {eta_after}")));
        }
        rounds.push(AsymIteration {
            eta_before,
            reps,
            inner,
            inner_weight,
            union,
            strongly_eulerian,
            eta_after,
            cover_after: next.clone(),
            weight_after,
        });
        if 1 + rounds.len() > bound {
            return Err(Error::Internal(format!("more than {bound} iterations")));
        }
        cover = next;
        weight = weight_after;
    }
    let report = validate_solution(inst, &cover);
    if !report.feasible() {
        return Err(Error::Internal(format!("infeasible output: {:?}", report.violations)));
    }
    Ok(AsymRun { initial, initial_weight, rounds, cover, cost: weight })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate_random, GeneratorKind};
    use crate::instance::RawInstance;
    use crate::oracle::{brute_force_smc, OracleBudget};

    fn asym(m: &[Vec<i64>], groups: Vec<Vec<usize>>) -> Instance {
        RawInstance::from_int_matrix(m, false, WeightClass::AsymmetricMetric, groups).validate().unwrap()
    }

    #[test]
    fn log_bound() {
        assert_eq!(log43_ceil(1), 0);
        assert_eq!(log43_ceil(2), 3);
        assert_eq!(log43_ceil(8), 8);
    }

    #[test]
    fn pair_is_two_cycle() {
        let inst = asym(&[vec![0, 3], vec![5, 0]], vec![vec![0, 1]]);
        let run = approx_asymmetric_run(&inst).unwrap();
        assert_eq!(run.cost, Rational::from_integer(8));
        assert_eq!(run.iterations(), 1);
    }

    #[test]
    fn two_triangles_sharing_a_vertex() {
        let d = EulerianDigraph { n: 5, arcs: vec![(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)] };
        assert!(d.is_strongly_eulerian());
        let c = directed_shortcut(&d).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.cycles[0].len(), 5);
        let e = eulerian_shortcut(&d).unwrap();
        assert_eq!(e.len(), 1);
    }

    #[test]
    fn non_cut_vertex_is_not_strongly_eulerian() {
        // a 4-cycle plus the chord pair 0→2→0: vertex 0 has k = 2 but
        // removing it leaves one component
        let d = EulerianDigraph { n: 4, arcs: vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (2, 0)] };
        assert!(!d.is_strongly_eulerian());
        assert!(matches!(directed_shortcut(&d), Err(Error::NotEulerian(_))));
        let c = eulerian_shortcut(&d).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.cycles[0].len(), 4);
    }

    #[test]
    fn doubled_two_cycle_union_is_shortcut_along_euler_circuits() {
        let inst = generate_random(GeneratorKind::Asymmetric, 6, 2, 4).unwrap();
        let run = approx_asymmetric_run(&inst).unwrap();
        let round = &run.rounds[0];
        assert_eq!(round.reps.vertices, vec![0, 2, 3, 5]);
        assert!(round.inner.canonical().cycles.iter().any(|c| c.vertices == vec![0, 2]));
        assert!(!round.strongly_eulerian);
        assert!(4 * round.eta_after <= 3 * round.eta_before);
        let (opt, _) = brute_force_smc(&inst, &OracleBudget::default()).unwrap();
        assert!(run.cost <= opt * Rational::from_integer(run.iterations() as i64));
    }

    #[test]
    fn representatives_for_one_split_group() {
        let inst = asym(
            &[vec![0, 1, 9, 9], vec![1, 0, 9, 9], vec![9, 9, 0, 1], vec![9, 9, 1, 0]],
            vec![vec![0, 2], vec![1, 3]],
        );
        let cover = CycleCover::directed(vec![vec![0, 1], vec![2, 3]]);
        let r = representatives(&inst, &cover).unwrap();
        check_representatives(&inst, &cover, &r).unwrap();
        assert_eq!(r.vertices, vec![0, 2]);
        assert_eq!(r.lonely(&cover, 4), 2);
    }

    #[test]
    fn within_iteration_bound_of_opt() {
        let budget = OracleBudget::default();
        for seed in 0..80u64 {
            let n = 3 + (seed % 6) as usize;
            let inst = generate_random(GeneratorKind::Asymmetric, n, 2, seed).unwrap();
            let run = approx_asymmetric_run(&inst).unwrap();
            let (opt, _) = brute_force_smc(&inst, &budget).unwrap();
            assert!(run.max_factor_weight() <= opt, "seed {seed}");
            assert!(run.cost <= opt * Rational::from_integer(run.iterations() as i64), "seed {seed}");
        }
    }

    #[test]
    fn symmetric_input_as_directed() {
        let budget = OracleBudget::default();
        for seed in 0..20u64 {
            let inst = generate_random(GeneratorKind::Euclidean, 7, 2, seed).unwrap();
            let run = approx_asymmetric_run(&inst.as_asymmetric()).unwrap();
            let (opt, _) = brute_force_smc(&inst, &budget).unwrap();
            assert!(run.cost >= opt);
        }
    }
}
