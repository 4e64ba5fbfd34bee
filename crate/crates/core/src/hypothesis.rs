//! Materialized hypothesis and ranking spaces, the φ-projection, the
//! reject-composition of an ID classifier with a binary detector, and
//! brute-force VC and Natarajan dimensions.

use std::collections::{BTreeSet, HashSet};
use std::ops::Deref;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::auc::RankingFunction;
use crate::domain::{FeatureSpace, MAX_CLASSES};
use crate::error::{LabError, Result};
use crate::loss::ENUMERATION_CAP;

/// Largest `|X|` accepted by [`vc_dimension`].
pub const VC_MAX_POINTS: usize = 24;
/// Largest `|X|` accepted by [`natarajan_dimension`].
pub const NATARAJAN_MAX_POINTS: usize = 16;

/// A total labelling `X -> {1, ..., K+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hypothesis {
    labels: Vec<u8>,
}

impl Hypothesis {
    pub fn new(labels: Vec<u8>, k: usize) -> Result<Self> {
        check_labels(&labels, k)?;
        Ok(Self { labels })
    }

    pub fn constant(n_points: usize, label: u8) -> Self {
        Self {
            labels: vec![label; n_points],
        }
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn into_labels(self) -> Vec<u8> {
        self.labels
    }
}

impl Deref for Hypothesis {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.labels
    }
}

fn check_labels(labels: &[u8], k: usize) -> Result<()> {
    if labels.is_empty() {
        return Err(LabError::Empty("hypothesis"));
    }
    if let Some(bad) = labels.iter().find(|&&l| l == 0 || l as usize > k + 1) {
        return Err(LabError::LabelRange(format!("label {bad} not in 1..={}", k + 1)));
    }
    Ok(())
}

/// `φ`: ID labels to 1, the reject label `K+1` to 2.
pub fn phi(labels: &[u8], k: usize) -> Vec<u8> {
    labels.iter().map(|&l| if (l as usize) <= k { 1 } else { 2 }).collect()
}

/// Where a space came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Explicit,
    Exhaustive,
    FcnnInduced,
    ScoreInduced,
    Composed,
}

/// A finite, duplicate-free, non-empty set of hypotheses over a shared `X` and `K`.
///
/// Members are stored flat (stride `|X|`) so exhaustive spaces near the
/// enumeration cap stay compact.
#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisSpace {
    n_points: usize,
    k: usize,
    data: Vec<u8>,
    provenance: Provenance,
}

impl HypothesisSpace {
    /// Builds an explicit space; duplicates are dropped keeping first occurrences.
    pub fn from_members(n_points: usize, k: usize, members: Vec<Vec<u8>>) -> Result<Self> {
        if k == 0 || k > MAX_CLASSES {
            return Err(LabError::DomainParameter(format!("class count {k} out of range")));
        }
        if members.is_empty() {
            return Err(LabError::Empty("hypothesis space"));
        }
        if members.len() > ENUMERATION_CAP {
            return Err(LabError::SizeCap {
                requested: members.len() as u128,
                cap: ENUMERATION_CAP as u128,
            });
        }
        let mut seen = HashSet::new();
        let mut data = Vec::with_capacity(members.len() * n_points);
        for m in members {
            if m.len() != n_points {
                return Err(LabError::Shape(format!("member over {} points, expected {n_points}", m.len())));
            }
            check_labels(&m, k)?;
            if !seen.contains(&m) {
                data.extend_from_slice(&m);
                seen.insert(m);
            }
        }
        Ok(Self {
            n_points,
            k,
            data,
            provenance: Provenance::Explicit,
        })
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_binary(&self) -> bool {
        self.k == 1
    }

    pub fn member(&self, index: usize) -> &[u8] {
        &self.data[index * self.n_points..(index + 1) * self.n_points]
    }

    pub fn hypothesis(&self, index: usize) -> Hypothesis {
        Hypothesis {
            labels: self.member(index).to_vec(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.data.chunks(self.n_points)
    }

    pub fn position(&self, labels: &[u8]) -> Option<usize> {
        self.iter().position(|m| m == labels)
    }

    pub fn contains(&self, labels: &[u8]) -> bool {
        self.position(labels).is_some()
    }

    pub fn members(&self) -> Vec<Vec<u8>> {
        self.iter().map(<[u8]>::to_vec).collect()
    }

    /// Largest number of ID-labelled points over members.
    pub fn max_id_count(&self) -> usize {
        self.iter()
            .map(|m| m.iter().filter(|&&l| (l as usize) <= self.k).count())
            .max()
            .unwrap_or(0)
    }
}

/// `φ∘H`, deduplicated, as a binary space.
pub fn phi_project(space: &HypothesisSpace) -> HypothesisSpace {
    let members = space.iter().map(|m| phi(m, space.k)).collect();
    HypothesisSpace::from_members(space.n_points, 1, members)
        .expect("projection of a valid space is valid")
        .with_provenance(space.provenance)
}

/// All `h` with `h(x) = h_in(x)` where `h_b(x) = 1` and `h(x) = K+1` otherwise.
pub fn bullet_compose(h_in_space: &HypothesisSpace, h_b_space: &HypothesisSpace) -> Result<HypothesisSpace> {
    if h_in_space.n_points != h_b_space.n_points {
        return Err(LabError::Shape("component spaces over different point sets".into()));
    }
    if !h_b_space.is_binary() {
        return Err(LabError::LabelRange("detector space must be binary".into()));
    }
    let k = h_in_space.k;
    if h_in_space.iter().any(|m| m.iter().any(|&l| l as usize > k)) {
        return Err(LabError::LabelRange(format!("ID classifier space must use labels 1..={k}")));
    }
    let requested = h_in_space.len() as u128 * h_b_space.len() as u128;
    if requested > ENUMERATION_CAP as u128 {
        return Err(LabError::SizeCap {
            requested,
            cap: ENUMERATION_CAP as u128,
        });
    }
    let mut members = Vec::with_capacity(requested as usize);
    for h_in in h_in_space.iter() {
        for h_b in h_b_space.iter() {
            members.push(compose_one(h_in, h_b, k));
        }
    }
    Ok(HypothesisSpace::from_members(h_in_space.n_points, k, members)?.with_provenance(Provenance::Composed))
}

pub(crate) fn compose_one(h_in: &[u8], h_b: &[u8], k: usize) -> Vec<u8> {
    h_in.iter()
        .zip(h_b)
        .map(|(&a, &b)| if b == 1 { a } else { (k + 1) as u8 })
        .collect()
}

/// Every labelling of `n_points` points with labels `1..=K+1`, in lexicographic order.
pub fn exhaustive_labelings(n_points: usize, k: usize) -> Result<HypothesisSpace> {
    if k == 0 || k > MAX_CLASSES {
        return Err(LabError::DomainParameter(format!("class count {k} out of range")));
    }
    let base = (k + 1) as u128;
    let count = (0..n_points).try_fold(1u128, |acc, _| acc.checked_mul(base).filter(|c| *c <= ENUMERATION_CAP as u128));
    let count = match count {
        Some(c) => c as usize,
        None => {
            return Err(LabError::SizeCap {
                requested: base.checked_pow(n_points as u32).unwrap_or(u128::MAX),
                cap: ENUMERATION_CAP as u128,
            })
        }
    };
    if n_points == 0 {
        return Err(LabError::Empty("point set"));
    }
    let mut data = vec![0u8; count * n_points];
    for (i, row) in data.chunks_mut(n_points).enumerate() {
        let mut rest = i;
        for slot in row.iter_mut().rev() {
            *slot = (rest % (k + 1)) as u8 + 1;
            rest /= k + 1;
        }
    }
    Ok(HypothesisSpace {
        n_points,
        k,
        data,
        provenance: Provenance::Exhaustive,
    })
}

/// `H_all` over a feature space.
pub fn exhaustive_space(x: &FeatureSpace, k: usize) -> Result<HypothesisSpace> {
    exhaustive_labelings(x.len(), k)
}

/// Binary thresholds `x -> 1 if x >= x_t else 2` on `n` collinear points, one per point.
pub fn threshold_space(n_points: usize) -> Result<HypothesisSpace> {
    let members = (0..n_points)
        .map(|t| (0..n_points).map(|x| if x >= t { 1 } else { 2 }).collect())
        .collect();
    HypothesisSpace::from_members(n_points, 1, members)
}

/// Distinct restrictions of the space's members to `points`.
pub fn patterns_on(space: &HypothesisSpace, points: &[usize]) -> BTreeSet<Vec<u8>> {
    space.iter().map(|m| points.iter().map(|&x| m[x]).collect()).collect()
}

fn subsets_of_size(n: usize, m: usize) -> Vec<u32> {
    (0u32..(1u32 << n)).filter(|s| s.count_ones() as usize == m).collect()
}

fn bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// Largest `m` such that some `m`-subset of `X` is shattered.
pub fn vc_dimension(space: &HypothesisSpace) -> Result<usize> {
    if !space.is_binary() {
        return Err(LabError::LabelRange("VC dimension needs a binary space".into()));
    }
    let n = space.n_points;
    if n > VC_MAX_POINTS {
        return Err(LabError::SizeCap {
            requested: n as u128,
            cap: VC_MAX_POINTS as u128,
        });
    }
    let ones: Vec<u32> = space
        .iter()
        .map(|m| m.iter().enumerate().fold(0u32, |acc, (x, &l)| if l == 1 { acc | 1 << x } else { acc }))
        .collect();
    let mut dim = 0;
    for m in 1..=n {
        if (space.len() as u128) < 1u128 << m {
            break;
        }
        let shattered = subsets_of_size(n, m).into_par_iter().any(|s| {
            let mut seen: Vec<u32> = ones.iter().map(|o| o & s).collect();
            seen.sort_unstable();
            seen.dedup();
            seen.len() == 1 << m
        });
        if !shattered {
            break;
        }
        dim = m;
    }
    Ok(dim)
}

/// Largest `m` such that some `m`-subset is Natarajan-shattered: two
/// everywhere-different witness labellings `f0, f1` with every mixture realized.
pub fn natarajan_dimension(space: &HypothesisSpace) -> Result<usize> {
    let n = space.n_points;
    if n > NATARAJAN_MAX_POINTS {
        return Err(LabError::SizeCap {
            requested: n as u128,
            cap: NATARAJAN_MAX_POINTS as u128,
        });
    }
    let mut dim = 0;
    for m in 1..=n {
        if (space.len() as u128) < 1u128 << m {
            break;
        }
        let shattered = subsets_of_size(n, m)
            .into_par_iter()
            .any(|s| natarajan_shattered(space, &bits(s)));
        if !shattered {
            break;
        }
        dim = m;
    }
    Ok(dim)
}

fn natarajan_shattered(space: &HypothesisSpace, points: &[usize]) -> bool {
    let patterns: Vec<Vec<u8>> = patterns_on(space, points).into_iter().collect();
    let m = points.len();
    if patterns.len() < 1 << m {
        return false;
    }
    let lookup: HashSet<&[u8]> = patterns.iter().map(Vec::as_slice).collect();
    let mut mix = vec![0u8; m];
    for f0 in &patterns {
        for f1 in &patterns {
            if f0.iter().zip(f1).any(|(a, b)| a == b) {
                continue;
            }
            let all = (0u32..(1 << m)).all(|t| {
                for (i, slot) in mix.iter_mut().enumerate() {
                    *slot = if t & (1 << i) != 0 { f0[i] } else { f1[i] };
                }
                lookup.contains(mix.as_slice())
            });
            if all {
                return true;
            }
        }
    }
    false
}

/// `sum_{i=0}^{v} C(m+1, i)`.
pub fn sauer_bound(v: usize, m: usize) -> u128 {
    let top = m as u128 + 1;
    let mut total = 0u128;
    let mut binom = 1u128;
    for i in 0..=(v as u128).min(top) {
        if i > 0 {
            binom = binom * (top - i + 1) / i;
        }
        total += binom;
    }
    total
}

/// For every point some member rejects it (assigns `K+1`).
pub fn check_separate_assumption(space: &HypothesisSpace) -> bool {
    let reject = (space.k + 1) as u8;
    (0..space.n_points).all(|x| space.iter().any(|m| m[x] == reject))
}

/// For every point some ranker scores it strictly below all other points.
pub fn check_separate_ranking(space: &[RankingFunction]) -> bool {
    let Some(first) = space.first() else {
        return false;
    };
    let n = first.len();
    (0..n).all(|x| {
        space
            .iter()
            .any(|r| (0..n).all(|xp| xp == x || r.score(x) < r.score(xp)))
    })
}

/// Every value of `pool` is realized by a constant member of `space`.
pub fn check_constant_closure(space: &[RankingFunction], pool: &[f64]) -> bool {
    let constants = constant_values(space);
    pool.iter().all(|c| constants.iter().any(|v| v == c))
}

/// Values of the constant members, in member order.
pub fn constant_values(space: &[RankingFunction]) -> Vec<f64> {
    space.iter().filter(|r| r.is_constant()).map(|r| r.score(0)).collect()
}
