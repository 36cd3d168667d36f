//! Primal-dual 2-approximate Steiner forest on the complete metric graph,
//! where every vertex is a terminal of its group.
//!
//! All components that split a group grow their duals at unit rate; the
//! first edge to become tight joins two components. A final reverse-delete
//! pass drops every edge the groups do not need.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Dsu, EdgeSubgraph};
use crate::instance::{Instance, Rational};

pub fn steiner_forest_2approx(inst: &Instance) -> EdgeSubgraph {
    let n = inst.n();
    let zero = Rational::from_integer(0);
    let mut dsu = Dsu::new(n);
    // dual load on each vertex: total dual of the sets containing it
    let mut load = vec![zero; n];
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    loop {
        let active: Vec<bool> = {
            let mut act = vec![false; n];
            for g in inst.groups() {
                let r = dsu.find(g[0]);
                if g.iter().any(|&v| dsu.find(v) != r) {
                    for &v in g {
                        let rv = dsu.find(v);
                        act[rv] = true;
                    }
                }
            }
            (0..n).map(|v| act[dsu.find(v)]).collect()
        };
        if !active.iter().any(|&a| a) {
            break;
        }
        let mut best: Option<(Rational, usize, usize)> = None;
        for u in 0..n {
            for v in u + 1..n {
                if dsu.find(u) == dsu.find(v) {
                    continue;
                }
                let rate = i64::from(active[u]) + i64::from(active[v]);
                if rate == 0 {
                    continue;
                }
                let eps = (inst.w(u, v) - load[u] - load[v]) / Rational::from_integer(rate);
                if best.is_none_or(|(b, _, _)| eps < b) {
                    best = Some((eps, u, v));
                }
            }
        }
        let (eps, u, v) = best.expect("an active component always has a crossing edge");
        for x in 0..n {
            if active[x] {
                load[x] += eps;
            }
        }
        dsu.union(u, v);
        chosen.push((u, v));
    }
    let mut keep = chosen.clone();
    for &e in chosen.iter().rev() {
        let trial: Vec<(usize, usize)> = keep.iter().copied().filter(|&f| f != e).collect();
        if connects_groups(inst, &trial) {
            keep = trial;
        }
    }
    EdgeSubgraph::from_edges(n, &keep)
}

fn connects_groups(inst: &Instance, edges: &[(usize, usize)]) -> bool {
    let mut dsu = Dsu::new(inst.n());
    for &(u, v) in edges {
        dsu.union(u, v);
    }
    inst.groups().iter().all(|g| g.iter().all(|&v| dsu.find(v) == dsu.find(g[0])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate_random, GeneratorKind};
    use crate::oracle::{brute_force_steiner_forest, OracleBudget};

    #[test]
    fn pair_is_single_edge() {
        let inst = crate::instance::RawInstance::from_int_matrix(
            &[vec![0, 4], vec![4, 0]],
            true,
            crate::instance::WeightClass::GeneralMetric,
            vec![vec![0, 1]],
        )
        .validate()
        .unwrap();
        let f = steiner_forest_2approx(&inst);
        assert_eq!(f.edge_list(), vec![(0, 1)]);
    }

    #[test]
    fn within_twice_optimum() {
        for seed in 0..100 {
            let inst = generate_random(GeneratorKind::Euclidean, 8, 2, seed).unwrap();
            let f = steiner_forest_2approx(&inst);
            assert!(connects_groups(&inst, &f.edge_list()));
            assert!(f.bridges().len() == f.edge_count(), "forest has a cycle");
            let (opt, _) = brute_force_steiner_forest(&inst, &OracleBudget::default()).unwrap();
            assert!(f.weight(&inst) <= opt * Rational::from_integer(2));
            assert!(f.weight(&inst) >= opt);
        }
    }
}
