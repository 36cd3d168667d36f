//! Minimum-weight 2-factors: undirected (degree gadget + perfect matching),
//! directed (assignment without fixed points) and triangle-free ({1,2}
//! weights only, exact subset DP or the 2-matching adapter).

mod triangle_free;
mod undirected;

pub use triangle_free::{
    min_weight_triangle_free_2factor, triangle_free_from_simple_2matching, triangle_free_with, ExactTwoMatching,
    SimpleTwoMatching, TwoMatchingSolver,
};
pub use undirected::min_weight_2factor;

use alloc::vec::Vec;

use crate::cover::{Cycle, CycleCover};
use crate::error::{Error, Result};
use crate::instance::{Instance, Rational, WeightClass};
use crate::matching::min_cost_assignment;

/// What kind of 2-factor to compute on `inst`.
#[derive(Debug, Clone, Copy)]
pub struct TwoFactorRequest<'a> {
    pub inst: &'a Instance,
    pub directed: bool,
    pub triangle_free: bool,
    /// Length-2 cycles on the duplicated edge of a size-2 group.
    pub allow_pair_2cycles: bool,
}

impl<'a> TwoFactorRequest<'a> {
    /// Plain minimum 2-factor; direction follows the instance, pair
    /// 2-cycles allowed whenever size-2 groups exist.
    pub fn new(inst: &'a Instance) -> Self {
        TwoFactorRequest {
            inst,
            directed: !inst.is_symmetric(),
            triangle_free: false,
            allow_pair_2cycles: inst.has_pair_groups(),
        }
    }

    pub fn triangle_free(mut self) -> Self {
        self.triangle_free = true;
        self
    }

    pub fn without_pairs(mut self) -> Self {
        self.allow_pair_2cycles = false;
        self
    }

    pub fn check(&self) -> Result<()> {
        if self.triangle_free && (self.directed || self.inst.class() != WeightClass::OneTwo) {
            return Err(Error::Precondition("triangle-free 2-factors need an undirected {1,2} instance".into()));
        }
        if self.inst.n() < 2 {
            return Err(Error::NoTwoFactor);
        }
        Ok(())
    }
}

/// Minimum directed 2-factor: an assignment from out-copies to in-copies
/// with self-arcs forbidden. Directed 2-cycles are allowed.
pub fn min_weight_directed_2factor(req: &TwoFactorRequest<'_>) -> Result<CycleCover> {
    let inst = req.inst;
    directed_2factor_on(inst, &(0..inst.n()).collect::<Vec<_>>())
}

/// Minimum directed 2-factor of the sub-digraph induced by `vertices`.
pub fn directed_2factor_on(inst: &Instance, vertices: &[usize]) -> Result<CycleCover> {
    let k = vertices.len();
    if k < 2 {
        return Err(Error::NoTwoFactor);
    }
    let costs: Vec<Vec<Option<Rational>>> = vertices
        .iter()
        .map(|&u| vertices.iter().map(|&v| (u != v).then(|| inst.w(u, v))).collect())
        .collect();
    let succ = min_cost_assignment(&costs).map_err(|_| Error::NoTwoFactor)?;
    let cycles = crate::oracle::cycles_of(&succ)
        .into_iter()
        .map(|c| Cycle::new(c.into_iter().map(|i| vertices[i]).collect()))
        .collect();
    Ok(CycleCover::new(cycles, true))
}

/// Dispatch on the request flags.
pub fn two_factor(req: &TwoFactorRequest<'_>) -> Result<CycleCover> {
    req.check()?;
    if req.directed {
        min_weight_directed_2factor(req)
    } else if req.triangle_free {
        triangle_free_from_simple_2matching(req)
    } else {
        min_weight_2factor(req)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{raw_cost, validate_solution};
    use crate::instance::RawInstance;
    use crate::oracle::{brute_force_2factor, OracleBudget};
    use alloc::vec;
    use proptest::prelude::*;

    fn r(x: i64) -> Rational {
        Rational::from_integer(x)
    }

    fn asym(m: &[Vec<i64>]) -> Instance {
        let n = m.len();
        RawInstance::from_int_matrix(m, false, WeightClass::AsymmetricMetric, vec![(0..n).collect()])
            .validate()
            .unwrap()
    }

    #[test]
    fn directed_two_vertices() {
        let inst = asym(&[vec![0, 3], vec![5, 0]]);
        let c = min_weight_directed_2factor(&TwoFactorRequest::new(&inst)).unwrap();
        assert_eq!(raw_cost(&inst, &c), r(8));
    }

    #[test]
    fn directed_three_vertices_is_a_triangle() {
        let inst = asym(&[vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]]);
        let c = min_weight_directed_2factor(&TwoFactorRequest::new(&inst)).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(raw_cost(&inst, &c), r(3));
    }

    /// Shortest-path closure of random arc weights.
    fn closure(ws: &[i64], n: usize) -> Vec<Vec<i64>> {
        let mut d: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 0 } else { ws[i * n + j] }).collect()).collect();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
                }
            }
        }
        d
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn directed_matches_derangements(ws in proptest::collection::vec(1i64..20, 49)) {
            let inst = asym(&closure(&ws, 7));
            let req = TwoFactorRequest::new(&inst);
            let c = min_weight_directed_2factor(&req).unwrap();
            prop_assert!(validate_solution(&inst, &c).violations.iter().all(|v| matches!(v, crate::cover::Violation::SplitGroup(_))));
            let (want, _) = brute_force_2factor(&req, &OracleBudget::default()).unwrap();
            prop_assert_eq!(raw_cost(&inst, &c), want);
        }
    }
}
