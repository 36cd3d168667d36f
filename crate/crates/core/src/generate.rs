//! Seeded instance generators.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Roots;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{Instance, RawInstance, WeightClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    /// Distinct integer points in a 100×100 square, distances rounded up.
    Euclidean,
    /// Each edge independently weight 1 or 2 with equal odds.
    OneTwo,
    /// Arc weights uniform in 1..=100, then closed under shortest paths.
    Asymmetric,
}

const SIDE: i64 = 100;

/// Builds an instance whose groups have the given sizes; vertices are
/// assigned to groups by a seeded shuffle.
pub fn generate_instance(kind: GeneratorKind, n: usize, group_sizes: &[usize], seed: u64) -> Result<Instance> {
    if n < 2 {
        return Err(Error::Precondition(format!("need n >= 2, got {n}")));
    }
    if group_sizes.iter().sum::<usize>() != n || group_sizes.iter().any(|&s| s < 2) {
        return Err(Error::Precondition(format!("group sizes {group_sizes:?} do not split {n} into parts >= 2")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut groups = Vec::new();
    let mut at = 0;
    for &s in group_sizes {
        groups.push(perm[at..at + s].to_vec());
        at += s;
    }
    let (matrix, symmetric, class) = match kind {
        GeneratorKind::Euclidean => (euclidean(n, &mut rng), true, WeightClass::GeneralMetric),
        GeneratorKind::OneTwo => (one_two(n, &mut rng), true, WeightClass::OneTwo),
        GeneratorKind::Asymmetric => (asymmetric(n, &mut rng), false, WeightClass::AsymmetricMetric),
    };
    RawInstance::from_int_matrix(&matrix, symmetric, class, groups).validate()
}

/// Random sizes, each at least `min_part`, summing to `n`.
pub fn random_group_sizes(n: usize, min_part: usize, rng: &mut impl Rng) -> Vec<usize> {
    let min_part = min_part.max(2);
    let k = rng.gen_range(1..=(n / min_part).max(1));
    let mut sizes = vec![min_part; k];
    for _ in 0..n - k * min_part {
        let i = rng.gen_range(0..k);
        sizes[i] += 1;
    }
    sizes
}

/// Generator with group sizes drawn from the same seed.
pub fn generate_random(kind: GeneratorKind, n: usize, min_part: usize, seed: u64) -> Result<Instance> {
    if n < min_part.max(2) {
        return Err(Error::Precondition(format!("n = {n} cannot hold a group of {min_part}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f_6e0c);
    let sizes = random_group_sizes(n, min_part, &mut rng);
    generate_instance(kind, n, &sizes, seed)
}

fn ceil_sqrt(x: i64) -> i64 {
    let s = x.sqrt();
    if s * s < x {
        s + 1
    } else {
        s
    }
}

fn euclidean(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let mut pts: Vec<(i64, i64)> = Vec::with_capacity(n);
    while pts.len() < n {
        let p = (rng.gen_range(0..=SIDE), rng.gen_range(0..=SIDE));
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    // ceilings of a metric are again a metric
    (0..n)
        .map(|u| {
            (0..n)
                .map(|v| {
                    let (dx, dy) = (pts[u].0 - pts[v].0, pts[u].1 - pts[v].1);
                    ceil_sqrt(dx * dx + dy * dy)
                })
                .collect()
        })
        .collect()
}

fn one_two(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0; n]; n];
    for u in 0..n {
        for v in u + 1..n {
            let w = if rng.gen_bool(0.5) { 1 } else { 2 };
            m[u][v] = w;
            m[v][u] = w;
        }
    }
    m
}

fn asymmetric(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n).map(|u| (0..n).map(|v| if u == v { 0 } else { rng.gen_range(1..=SIDE) }).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if m[i][k] + m[k][j] < m[i][j] {
                    m[i][j] = m[i][k] + m[k][j];
                }
            }
        }
    }
    m
}
