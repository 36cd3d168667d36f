//! Random search for metric instances on which a minimum perfect matching
//! on the odd vertices of a Steiner forest costs more than the multicycle
//! optimum.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{brute_force_smc, brute_force_steiner_forest, OracleBudget};
use crate::error::Result;
use crate::forest::steiner_forest_2approx;
use crate::generate::{generate_random, GeneratorKind};
use crate::graph::{EdgeSubgraph, WeightedGraph};
use crate::instance::{Instance, Rational};
use crate::matching::min_weight_perfect_matching;
use crate::metric::{approx_metric_run, odd_degree_set, JoinMode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeRow {
    pub seed: u64,
    pub n: usize,
    pub group_sizes: Vec<usize>,
    pub opt_smc: Rational,
    /// Matching on the odd vertices of an optimal Steiner forest.
    pub w_m1: Rational,
    /// Matching on the odd vertices of the 2-approximate forest.
    pub w_m2: Rational,
    /// Metric pipeline values: matching on T, T-join, half of G′.
    pub w_m: Rational,
    pub w_j: Rational,
    pub half_w_g: Rational,
}

impl ProbeRow {
    pub fn ratio_m1(&self) -> Rational {
        self.w_m1 / self.opt_smc
    }

    pub fn ratio_m2(&self) -> Rational {
        self.w_m2 / self.opt_smc
    }

    /// Either matching exceeds the multicycle optimum.
    pub fn is_counterexample(&self) -> bool {
        self.w_m1 > self.opt_smc || self.w_m2 > self.opt_smc
    }

    /// w(M) ≤ w(J) ≤ ½ w(G′).
    pub fn chain_holds(&self) -> bool {
        self.w_m <= self.w_j && self.w_j <= self.half_w_g
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProbeReport {
    pub rows: Vec<ProbeRow>,
}

impl ProbeReport {
    pub fn counterexamples(&self) -> Vec<&ProbeRow> {
        self.rows.iter().filter(|r| r.is_counterexample()).collect()
    }

    pub fn max_ratio_m2(&self) -> Option<Rational> {
        self.rows.iter().map(ProbeRow::ratio_m2).max()
    }
}

/// Runs `trials` Euclidean instances with 4 ≤ n ≤ 8 (capped by the budget).
/// Trial i uses a seed derived from `seed` and i only, so trials are
/// independent of each other.
pub fn matching_vs_opt_probe(seed: u64, trials: usize, budget: &OracleBudget) -> Result<ProbeReport> {
    let max_n = budget.steiner_forest.min(budget.smc_symmetric).min(8);
    let mut rows = Vec::with_capacity(trials);
    for i in 0..trials {
        rows.push(probe_trial(seed, i as u64, max_n, budget)?);
    }
    Ok(ProbeReport { rows })
}

/// One probe trial; exposed so callers can run trials in parallel.
pub fn probe_trial(seed: u64, trial: u64, max_n: usize, budget: &OracleBudget) -> Result<ProbeRow> {
    let s = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(trial);
    let mut rng = ChaCha8Rng::seed_from_u64(s);
    let n = rng.gen_range(4..=max_n.max(4));
    let inst = generate_random(GeneratorKind::Euclidean, n, 2, s)?;
    let (opt_smc, _) = brute_force_smc(&inst, budget)?;
    let (_, sf) = brute_force_steiner_forest(&inst, budget)?;
    let gw = steiner_forest_2approx(&inst);
    let run = approx_metric_run(&inst, JoinMode::TJoin, false)?;
    Ok(ProbeRow {
        seed: s,
        n,
        group_sizes: inst.groups().iter().map(Vec::len).collect(),
        opt_smc,
        w_m1: odd_matching(&inst, &sf)?,
        w_m2: odd_matching(&inst, &gw)?,
        w_m: run.w_matching,
        w_j: run.w_join,
        half_w_g: run.w_g_prime / Rational::from_integer(2),
    })
}

fn odd_matching(inst: &Instance, forest: &EdgeSubgraph) -> Result<Rational> {
    let t = odd_degree_set(forest);
    let mut g = WeightedGraph::new(t.len());
    for a in 0..t.len() {
        for b in a + 1..t.len() {
            g.add_edge(a, b, inst.w(t[a], t[b]));
        }
    }
    Ok(min_weight_perfect_matching(&g)?.weight(&g))
}
