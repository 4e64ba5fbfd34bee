//! AUC with the half-tie term, exact suprema over finite ranking spaces, and
//! the Bayes-optimal ranker.

use serde::{Deserialize, Serialize};

use crate::domain::{FiniteDomain, PROB_TOL};
use crate::error::{LabError, Result};

/// Real-valued scores over every point of `X`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankingFunction {
    scores: Vec<f64>,
}

impl RankingFunction {
    pub fn new(scores: Vec<f64>) -> Result<Self> {
        if scores.is_empty() {
            return Err(LabError::Empty("ranking function"));
        }
        if let Some(bad) = scores.iter().find(|s| !s.is_finite()) {
            return Err(LabError::Evaluation(format!("non-finite score {bad}")));
        }
        Ok(Self { scores })
    }

    pub fn constant(n_points: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n_points])
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn score(&self, point: usize) -> f64 {
        self.scores[point]
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Whether every point receives the same score.
    pub fn is_constant(&self) -> bool {
        self.scores.iter().all(|s| *s == self.scores[0])
    }

    pub fn negated(&self) -> Self {
        Self {
            scores: self.scores.iter().map(|s| -s).collect(),
        }
    }
}

/// AUC of `scores` between an ID marginal and an OOD marginal, summed in a fixed order.
pub fn auc_parts(scores: &[f64], id_marginal: &[f64], ood: &[f64]) -> f64 {
    let mut total = 0.0;
    for (x, &pi) in id_marginal.iter().enumerate() {
        if pi == 0.0 {
            continue;
        }
        for (xp, &po) in ood.iter().enumerate() {
            if po == 0.0 {
                continue;
            }
            let (a, b) = (scores[x], scores[xp]);
            if a > b {
                total += pi * po;
            } else if a == b {
                total += 0.5 * pi * po;
            }
        }
    }
    total
}

fn check_len(r: &RankingFunction, domain: &FiniteDomain) -> Result<()> {
    if r.len() != domain.n_points() {
        return Err(LabError::Evaluation(format!(
            "ranker defined on {} points, domain has {}",
            r.len(),
            domain.n_points()
        )));
    }
    Ok(())
}

/// `AUC(r; D)`; independent of the domain's OOD prior.
pub fn auc(r: &RankingFunction, domain: &FiniteDomain) -> Result<f64> {
    check_len(r, domain)?;
    Ok(auc_parts(r.scores(), &domain.id_part().marginal(), domain.ood_part().masses()))
}

/// Exact maximum over a finite ranking space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Argmax {
    pub value: f64,
    pub argmax: Vec<usize>,
    pub representative: usize,
}

/// Supremum of the AUC over explicit marginals.
pub fn sup_auc_parts(space: &[RankingFunction], id_marginal: &[f64], ood: &[f64]) -> Result<Argmax> {
    if space.is_empty() {
        return Err(LabError::Empty("ranking space"));
    }
    if let Some(r) = space.iter().find(|r| r.len() != id_marginal.len()) {
        return Err(LabError::Evaluation(format!(
            "ranker defined on {} points, domain has {}",
            r.len(),
            id_marginal.len()
        )));
    }
    let values: Vec<f64> = space.iter().map(|r| auc_parts(r.scores(), id_marginal, ood)).collect();
    let value = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let argmax: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v >= value - PROB_TOL)
        .map(|(i, _)| i)
        .collect();
    Ok(Argmax {
        value,
        representative: argmax[0],
        argmax,
    })
}

pub fn sup_auc(space: &[RankingFunction], domain: &FiniteDomain) -> Result<Argmax> {
    sup_auc_parts(space, &domain.id_part().marginal(), domain.ood_part().masses())
}

/// Closed-form supremum over all rankers: half the double sum of
/// `max(I(x) O(x'), I(x') O(x))` over pairs of points.
pub fn bayes_sup_auc_parts(id_marginal: &[f64], ood: &[f64]) -> f64 {
    let n = id_marginal.len();
    let mut total = 0.0;
    for x in 0..n {
        for xp in 0..n {
            total += (id_marginal[x] * ood[xp]).max(id_marginal[xp] * ood[x]);
        }
    }
    0.5 * total
}

pub fn bayes_sup_auc(domain: &FiniteDomain) -> f64 {
    bayes_sup_auc_parts(&domain.id_part().marginal(), domain.ood_part().masses())
}

fn sigmoid(t: f64) -> f64 {
    1.0 / (1.0 + (-t).exp())
}

/// `sigmoid(g_I / g_O)` where both densities are positive; 1 where only the ID
/// density is positive and 0 where the ID density vanishes.
///
/// The sigmoid saturates to 1.0 for ratios above roughly 36, which can create
/// spurious ties between strongly ID-dominated points.
pub fn bayes_ranker_parts(id_marginal: &[f64], ood: &[f64]) -> Result<RankingFunction> {
    RankingFunction::new(
        id_marginal
            .iter()
            .zip(ood)
            .map(|(&gi, &go)| {
                if gi == 0.0 {
                    0.0
                } else if go == 0.0 {
                    1.0
                } else {
                    sigmoid(gi / go)
                }
            })
            .collect(),
    )
}

pub fn bayes_ranker(domain: &FiniteDomain) -> Result<RankingFunction> {
    bayes_ranker_parts(&domain.id_part().marginal(), domain.ood_part().masses())
}

/// Whether `r1` and `r2` order every `(ID, OOD)` pair with positive mass the same way.
pub fn auc_equivalent(r1: &RankingFunction, r2: &RankingFunction, domain: &FiniteDomain) -> Result<bool> {
    check_len(r1, domain)?;
    check_len(r2, domain)?;
    let id = domain.id_part().marginal();
    let ood = domain.ood_part().masses();
    for (x, &pi) in id.iter().enumerate() {
        for (xp, &po) in ood.iter().enumerate() {
            if pi * po > 0.0 {
                let a = r1.score(x).partial_cmp(&r1.score(xp));
                let b = r2.score(x).partial_cmp(&r2.score(xp));
                if a != b {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Every weak ordering of `n` points, as integer-level rankers.
///
/// The count is the ordered Bell (Fubini) number of `n`; capped at `n <= 8`.
pub fn all_order_types(n: usize) -> Result<Vec<RankingFunction>> {
    if n == 0 {
        return Err(LabError::Empty("point set"));
    }
    if n > 8 {
        return Err(LabError::SizeCap {
            requested: n as u128,
            cap: 8,
        });
    }
    let mut out = Vec::new();
    let mut levels = vec![0usize; n];
    let mut counts = vec![0usize; n];
    // Levels are assigned point by point; a weak order is a surjection onto
    // 0..m, so branches leaving more gaps than remaining points are pruned.
    fn rec(i: usize, levels: &mut Vec<usize>, counts: &mut Vec<usize>, out: &mut Vec<RankingFunction>) {
        let n = levels.len();
        let top = counts.iter().rposition(|&c| c > 0).map_or(0, |t| t + 1);
        let gaps = counts[..top].iter().filter(|&&c| c == 0).count();
        if gaps > n - i {
            return;
        }
        if i == n {
            out.push(RankingFunction {
                scores: levels.iter().map(|&l| l as f64).collect(),
            });
            return;
        }
        for l in 0..n {
            levels[i] = l;
            counts[l] += 1;
            rec(i + 1, levels, counts, out);
            counts[l] -= 1;
        }
    }
    rec(0, &mut levels, &mut counts, &mut out);
    Ok(out)
}

/// Affine rankers `x -> s * x + c` in one dimension on collinear points,
/// materialized up to AUC equivalence: increasing, decreasing and constant.
pub fn linear_rankers_1d(coords: &[f64]) -> Result<Vec<RankingFunction>> {
    let up = RankingFunction::new(coords.to_vec())?;
    let down = up.negated();
    let flat = RankingFunction::constant(coords.len(), 0.0)?;
    Ok(vec![up, down, flat])
}
