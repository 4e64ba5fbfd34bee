//! Independent reference computations and fixture generators shared by the
//! integration tests. Nothing here calls the library's risk or AUC code.

#![allow(dead_code)]

use oodlab::domain::{FiniteDomain, IdJoint, OodMarginal};
use oodlab::hypothesis::HypothesisSpace;
use oodlab::loss::LossTable;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `Σ_{x,y} I(x,y) l(h(x), y)` straight from the table.
pub fn oracle_risk_in(h: &[u8], d: &FiniteDomain, loss: &LossTable) -> f64 {
    let mut total = 0.0;
    for x in 0..d.n_points() {
        for y in 1..=d.k() {
            let p = d.id_part().mass(x, y);
            if p > 0.0 {
                total += p * loss.values()[h[x] as usize - 1][y - 1];
            }
        }
    }
    total
}

/// `Σ_x O(x) l(h(x), K+1)`.
pub fn oracle_risk_out(h: &[u8], d: &FiniteDomain, loss: &LossTable) -> f64 {
    let k = d.k();
    (0..d.n_points())
        .map(|x| d.ood_part().mass(x) * loss.values()[h[x] as usize - 1][k])
        .sum()
}

pub fn oracle_alpha_risk(h: &[u8], d: &FiniteDomain, loss: &LossTable, alpha: f64) -> f64 {
    (1.0 - alpha) * oracle_risk_in(h, d, loss) + alpha * oracle_risk_out(h, d, loss)
}

pub fn oracle_inf<F: Fn(&[u8]) -> f64>(space: &HypothesisSpace, f: F) -> f64 {
    space.iter().map(f).fold(f64::INFINITY, f64::min)
}

/// Pairwise AUC with a one-half tie term.
pub fn oracle_auc(scores: &[f64], id: &[f64], ood: &[f64]) -> f64 {
    let mut total = 0.0;
    for (i, &p) in id.iter().enumerate() {
        for (j, &q) in ood.iter().enumerate() {
            let w = if scores[i] > scores[j] {
                1.0
            } else if scores[i] == scores[j] {
                0.5
            } else {
                0.0
            };
            total += p * q * w;
        }
    }
    total
}

/// Random probability vector of length `n` from integer weights in
/// `0..=max_weight`, with at least one positive entry among `allowed`.
pub fn random_masses(rng: &mut ChaCha8Rng, n: usize, allowed: &[usize], max_weight: u32) -> Vec<f64> {
    let mut w = vec![0u32; n];
    for &x in allowed {
        w[x] = rng.gen_range(0..=max_weight);
    }
    if w.iter().all(|&v| v == 0) {
        w[allowed[rng.gen_range(0..allowed.len())]] = 1;
    }
    let total: u32 = w.iter().sum();
    w.iter().map(|&v| v as f64 / total as f64).collect()
}

/// Random domain over `n` points with dyadic-friendly masses.
pub fn random_domain(rng: &mut ChaCha8Rng, n: usize, k: usize) -> FiniteDomain {
    let all: Vec<usize> = (0..n).collect();
    let id_weights: Vec<u32> = (0..n * k).map(|_| rng.gen_range(0..=3)).collect();
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    let total: u32 = id_weights.iter().sum::<u32>().max(1);
    for x in 0..n {
        for y in 1..=k {
            let w = id_weights[x * k + y - 1];
            if w > 0 {
                entries.push((x, y, w as f64 / total as f64));
            }
        }
    }
    if entries.is_empty() {
        entries.push((rng.gen_range(0..n), rng.gen_range(1..=k), 1.0));
    }
    let ood = random_masses(rng, n, &all, 3);
    let pi = [0.25, 0.5, 0.75][rng.gen_range(0..3)];
    FiniteDomain::new(
        IdJoint::new(n, k, &entries).unwrap(),
        OodMarginal::new(ood).unwrap(),
        pi,
    )
    .unwrap()
}

/// Random subset (1..=cap members) of all labellings of `n` points with labels `1..=K+1`.
pub fn random_space(rng: &mut ChaCha8Rng, n: usize, k: usize, cap: usize) -> HypothesisSpace {
    let size = rng.gen_range(1..=cap);
    let members: Vec<Vec<u8>> = (0..size)
        .map(|_| (0..n).map(|_| rng.gen_range(1..=(k + 1) as u8)).collect())
        .collect();
    HypothesisSpace::from_members(n, k, members).unwrap()
}
