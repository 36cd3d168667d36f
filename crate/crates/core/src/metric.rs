//! Metric pipeline: 2-approximate SND subgraph G′, bridge pruning, minimum
//! T-join on the odd vertices of G′, then an Euler tour of G′ + J per
//! component shortcut to a cycle.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::cover::{Cycle, CycleCover};
use crate::error::{Error, Result};
use crate::graph::{ekey, EdgeSubgraph, WeightedGraph};
use crate::instance::{Instance, Rational, WeightClass};
use crate::matching::min_weight_perfect_matching;
use crate::snd::{build_requirements, jain_round_traced, prune_bridges, SndRun};

/// How the odd vertices of G′ are paired up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum JoinMode {
    /// Minimum T-join inside G′.
    #[default]
    TJoin,
    /// Minimum perfect matching on T in the complete graph.
    Matching,
}

/// Every stage of one metric run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricRun {
    pub snd: SndRun,
    pub g_prime: EdgeSubgraph,
    pub odd: Vec<usize>,
    /// J in T-join mode, the matching M otherwise.
    pub join: EdgeSubgraph,
    pub h: EdgeSubgraph,
    pub cover: CycleCover,
    pub cost: Rational,
    pub w_g_prime: Rational,
    pub w_join: Rational,
    /// Minimum perfect matching on T in the complete graph.
    pub w_matching: Rational,
}

impl MetricRun {
    /// w(J) ≤ ½ w(G′).
    pub fn half_bound_holds(&self) -> bool {
        self.w_join * Rational::from_integer(2) <= self.w_g_prime
    }
}

pub fn odd_degree_set(g: &EdgeSubgraph) -> Vec<usize> {
    g.degrees().iter().enumerate().filter(|(_, &d)| d % 2 == 1).map(|(v, _)| v).collect()
}

/// Minimum-weight T-join of `g`: shortest paths inside `g` between the
/// vertices of T, a minimum perfect matching on those distances, and the
/// symmetric difference of the matched paths.
pub fn min_t_join(inst: &Instance, g: &EdgeSubgraph, t: &[usize]) -> Result<EdgeSubgraph> {
    let n = inst.n();
    let comp = g.components();
    let mut count = vec![0usize; n];
    for &v in t {
        count[comp[v]] += 1;
    }
    if count.iter().any(|c| c % 2 == 1) {
        return Err(Error::TJoinInfeasible);
    }
    if t.is_empty() {
        return Ok(EdgeSubgraph::new(n));
    }
    // Floyd-Warshall inside g, next-hop table for path recovery
    let mut dist: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; n];
    let mut next = vec![vec![usize::MAX; n]; n];
    for v in 0..n {
        dist[v][v] = Some(Rational::from_integer(0));
        next[v][v] = v;
    }
    for ((u, v), _) in g.iter() {
        dist[u][v] = Some(inst.w(u, v));
        dist[v][u] = Some(inst.w(u, v));
        next[u][v] = v;
        next[v][u] = u;
    }
    for k in 0..n {
        for i in 0..n {
            let Some(dik) = dist[i][k] else { continue };
            for j in 0..n {
                let Some(dkj) = dist[k][j] else { continue };
                if dist[i][j].is_none_or(|d| dik + dkj < d) {
                    dist[i][j] = Some(dik + dkj);
                    next[i][j] = next[i][k];
                }
            }
        }
    }
    let mut mg = WeightedGraph::new(t.len());
    for a in 0..t.len() {
        for b in a + 1..t.len() {
            if let Some(d) = dist[t[a]][t[b]] {
                mg.add_edge(a, b, d);
            }
        }
    }
    let m = min_weight_perfect_matching(&mg).map_err(|_| Error::TJoinInfeasible)?;
    let mut odd: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &(a, b) in &m.edges {
        let (mut x, y) = (t[a], t[b]);
        while x != y {
            let z = next[x][y];
            let e = ekey(x, z);
            if !odd.remove(&e) {
                odd.insert(e);
            }
            x = z;
        }
    }
    let edges: Vec<(usize, usize)> = odd.into_iter().collect();
    let j = EdgeSubgraph::from_edges(n, &edges);
    let mut want = vec![false; n];
    for &v in t {
        want[v] = true;
    }
    if let Some(v) = (0..n).find(|&v| (j.degrees()[v] % 2 == 1) != want[v]) {
        return Err(Error::Internal(format!("T-join parity wrong at vertex {v}")));
    }
    Ok(j)
}

/// Euler tour of each component of H = g + j, keeping first visits.
pub fn double_and_shortcut(g: &EdgeSubgraph, j: &EdgeSubgraph, inst: &Instance) -> Result<CycleCover> {
    shortcut_eulerian(inst, &g.union(j))
}

pub(crate) fn shortcut_eulerian(inst: &Instance, h: &EdgeSubgraph) -> Result<CycleCover> {
    let n = inst.n();
    let deg = h.degrees();
    if let Some(v) = (0..n).find(|&v| deg[v] % 2 == 1) {
        return Err(Error::NotEulerian(v));
    }
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        if deg[s] == 0 {
            return Err(Error::Internal(format!("vertex {s} is isolated in the Eulerian graph")));
        }
        let mut seq = Vec::new();
        for v in h.euler_circuit(s) {
            if !seen[v] {
                seen[v] = true;
                seq.push(v);
            }
        }
        if seq.len() == 2 && !inst.is_pair(seq[0], seq[1]) {
            return Err(Error::Internal(format!("two-vertex component {seq:?} is not a pair group")));
        }
        cycles.push(Cycle::new(seq));
    }
    Ok(CycleCover::new(cycles, false))
}

fn check_metric(inst: &Instance) -> Result<()> {
    if !inst.is_symmetric() || inst.class() == WeightClass::AsymmetricMetric {
        return Err(Error::Precondition("metric pipeline needs a symmetric instance".into()));
    }
    Ok(())
}

pub fn approx_metric(inst: &Instance) -> Result<CycleCover> {
    Ok(approx_metric_run(inst, JoinMode::TJoin, false)?.cover)
}

pub fn approx_metric_run(inst: &Instance, mode: JoinMode, trace_lp: bool) -> Result<MetricRun> {
    check_metric(inst)?;
    let req = build_requirements(inst);
    let snd = jain_round_traced(inst, &req, trace_lp)?;
    let g_prime = prune_bridges(&snd.graph, &req);
    let odd = odd_degree_set(&g_prime);
    let matching = complete_matching(inst, &odd)?;
    let join = match mode {
        JoinMode::TJoin => min_t_join(inst, &g_prime, &odd)?,
        JoinMode::Matching => matching.clone(),
    };
    let h = g_prime.union(&join);
    let cover = shortcut_eulerian(inst, &h)?;
    let cost = crate::cover::cover_cost(inst, &cover)?;
    Ok(MetricRun {
        w_g_prime: g_prime.weight(inst),
        w_join: join.weight(inst),
        w_matching: matching.weight(inst),
        snd,
        g_prime,
        odd,
        join,
        h,
        cover,
        cost,
    })
}

/// Minimum perfect matching on `t` in the complete graph.
fn complete_matching(inst: &Instance, t: &[usize]) -> Result<EdgeSubgraph> {
    let mut mg = WeightedGraph::new(t.len());
    for a in 0..t.len() {
        for b in a + 1..t.len() {
            mg.add_edge(a, b, inst.w(t[a], t[b]));
        }
    }
    let m = min_weight_perfect_matching(&mg)?;
    let edges: Vec<(usize, usize)> = m.edges.iter().map(|&(a, b)| ekey(t[a], t[b])).collect();
    Ok(EdgeSubgraph::from_edges(inst.n(), &edges))
}

/// Baseline without a T-join: double the pruned SND subgraph and shortcut.
pub fn prior_sf4(inst: &Instance) -> Result<CycleCover> {
    check_metric(inst)?;
    let req = build_requirements(inst);
    let g = prune_bridges(&jain_round_traced(inst, &req, false)?.graph, &req);
    shortcut_eulerian(inst, &g.union(&g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::validate_solution;
    use crate::generate::{generate_random, GeneratorKind};
    use crate::instance::RawInstance;
    use crate::oracle::{brute_force_smc, OracleBudget};

    fn r(x: i64) -> Rational {
        Rational::from_integer(x)
    }

    fn unit_c4() -> Instance {
        let m = vec![vec![0, 1, 2, 1], vec![1, 0, 1, 2], vec![2, 1, 0, 1], vec![1, 2, 1, 0]];
        RawInstance::from_int_matrix(&m, true, WeightClass::GeneralMetric, vec![vec![0, 1, 2, 3]]).validate().unwrap()
    }

    fn c4() -> EdgeSubgraph {
        EdgeSubgraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)])
    }

    #[test]
    fn odd_sets() {
        assert!(odd_degree_set(&c4()).is_empty());
        assert_eq!(odd_degree_set(&EdgeSubgraph::from_edges(4, &[(0, 1), (1, 2)])), vec![0, 2]);
    }

    #[test]
    fn t_joins_on_four_cycle() {
        let inst = unit_c4();
        assert!(min_t_join(&inst, &c4(), &[]).unwrap().is_empty());
        let j = min_t_join(&inst, &c4(), &[0, 1]).unwrap();
        assert_eq!(j.edge_list(), vec![(0, 1)]);
        let j = min_t_join(&inst, &c4(), &[0, 2]).unwrap();
        assert_eq!(j.weight(&inst), r(2));
        assert_eq!(min_t_join(&inst, &EdgeSubgraph::from_edges(4, &[(0, 1)]), &[0, 2]), Err(Error::TJoinInfeasible));
    }

    #[test]
    fn pair_instance() {
        let inst =
            RawInstance::from_int_matrix(&[vec![0, 3], vec![3, 0]], true, WeightClass::GeneralMetric, vec![vec![0, 1]])
                .validate()
                .unwrap();
        let run = approx_metric_run(&inst, JoinMode::TJoin, false).unwrap();
        assert_eq!(run.cost, r(6));
        assert!(run.cover.cycles[0].pair);
        let g = EdgeSubgraph::from_edges(2, &[(0, 1), (0, 1)]);
        let c = double_and_shortcut(&g, &EdgeSubgraph::new(2), &inst).unwrap();
        assert_eq!(c.cycles, vec![Cycle::new(vec![0, 1])]);
    }

    #[test]
    fn triangle_plus_doubled_edge() {
        let m = vec![vec![0, 2, 2, 3], vec![2, 0, 2, 1], vec![2, 2, 0, 3], vec![3, 1, 3, 0]];
        let inst = RawInstance::from_int_matrix(&m, true, WeightClass::GeneralMetric, vec![vec![0, 1, 2, 3]]).validate().unwrap();
        let g = EdgeSubgraph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (1, 3), (1, 3)]);
        let c = double_and_shortcut(&g, &EdgeSubgraph::new(4), &inst).unwrap();
        assert!(validate_solution(&inst, &c).feasible());
        assert!(crate::cover::raw_cost(&inst, &c) <= g.weight(&inst));
        assert_eq!(double_and_shortcut(&EdgeSubgraph::from_edges(4, &[(0, 1)]), &EdgeSubgraph::new(4), &inst), Err(Error::NotEulerian(0)));
    }

    #[test]
    fn random_runs_within_three() {
        for seed in 0..60 {
            let inst = generate_random(GeneratorKind::Euclidean, 8, 2, seed).unwrap();
            let run = approx_metric_run(&inst, JoinMode::TJoin, false).unwrap();
            assert!(validate_solution(&inst, &run.cover).feasible());
            assert!(run.g_prime.bridges().is_empty());
            assert!(run.half_bound_holds());
            assert!(run.w_matching <= run.w_join);
            assert!(run.cost <= run.w_g_prime + run.w_join);
            let (opt, _) = brute_force_smc(&inst, &OracleBudget::default()).unwrap();
            assert!(run.cost <= opt * r(3));
            let m = approx_metric_run(&inst, JoinMode::Matching, false).unwrap();
            assert!(validate_solution(&inst, &m.cover).feasible());
            let p = prior_sf4(&inst).unwrap();
            assert!(validate_solution(&inst, &p).feasible());
        }
    }
}
