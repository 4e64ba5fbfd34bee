//! Constructive learners: the nearest-neighbour threshold rule, ERM over a
//! finite space, the detector/classifier composition, the two constrained
//! rules, and MMD-based dispatch between per-class learners.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::auc::RankingFunction;
use crate::domain::{FeatureSpace, FiniteDomain, PROB_TOL};
use crate::error::{LabError, Result};
use crate::hypothesis::{Hypothesis, HypothesisSpace};
use crate::loss::{Argmin, LossTable};

/// Labelled ID samples as `(point index, label in 1..=K)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingSet {
    samples: Vec<(usize, usize)>,
    k: usize,
}

impl TrainingSet {
    pub fn new(samples: Vec<(usize, usize)>, k: usize) -> Result<Self> {
        if let Some(&(x, y)) = samples.iter().find(|(_, y)| *y == 0 || *y > k) {
            return Err(LabError::LabelRange(format!("sample ({x}, {y}) outside 1..={k}")));
        }
        Ok(Self { samples, k })
    }

    /// `n` i.i.d. draws from the ID joint of `domain`.
    pub fn sample(domain: &FiniteDomain, n: usize, seed: u64) -> Result<Self> {
        Self::new(domain.sample_id(n, seed)?, domain.k())
    }

    pub fn samples(&self) -> &[(usize, usize)] {
        &self.samples
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    fn check_points(&self, n_points: usize) -> Result<()> {
        match self.samples.iter().find(|(x, _)| *x >= n_points) {
            Some((x, _)) => Err(LabError::Shape(format!("sample point {x} outside X of size {n_points}"))),
            None => Ok(()),
        }
    }
}

/// A map from training sets to hypotheses.
pub trait Learner: Sync {
    fn learn(&self, s: &TrainingSet) -> Result<Hypothesis>;
}

impl<F> Learner for F
where
    F: Fn(&TrainingSet) -> Result<Hypothesis> + Sync,
{
    fn learn(&self, s: &TrainingSet) -> Result<Hypothesis> {
        self(s)
    }
}

/// Label 1 on points closer than `d0 / 2` to some training point, 2 elsewhere.
pub fn nn_threshold_learner(s: &TrainingSet, x: &FeatureSpace) -> Result<Hypothesis> {
    if s.is_empty() {
        return Err(LabError::Empty("training set"));
    }
    s.check_points(x.len())?;
    let radius = 0.5 * x.min_distance();
    let labels = (0..x.len())
        .map(|p| {
            let near = s.samples().iter().any(|&(q, _)| x.distance(p, q) < radius);
            if near {
                1
            } else {
                2
            }
        })
        .collect();
    Hypothesis::new(labels, 1)
}

/// `2√d n^{-1/(d+1)} + √d / (2^d e n^{1/(d+1)})`.
pub fn nn_rate_bound(d: usize, n: usize) -> f64 {
    let df = d as f64;
    let root = (n as f64).powf(1.0 / (df + 1.0));
    2.0 * df.sqrt() / root + df.sqrt() / (2f64.powi(d as i32) * std::f64::consts::E * root)
}

/// Mean loss of `h` on the training samples.
pub fn empirical_risk(h: &[u8], s: &TrainingSet, loss: &LossTable) -> f64 {
    if s.is_empty() {
        return 0.0;
    }
    let total: f64 = s.samples().iter().map(|&(x, y)| loss.loss(h[x] as usize, y)).sum();
    total / s.len() as f64
}

fn check_space(s: &TrainingSet, space: &HypothesisSpace, loss: &LossTable) -> Result<()> {
    if space.is_empty() {
        return Err(LabError::Empty("hypothesis space"));
    }
    if loss.k() != space.k() || s.k() != space.k() {
        return Err(LabError::Shape(format!(
            "label ranges disagree: sample K = {}, space K = {}, loss K = {}",
            s.k(),
            space.k(),
            loss.k()
        )));
    }
    s.check_points(space.n_points())
}

/// Empirical ID risk minimizer; ties go to the lowest member index.
pub fn erm_id(s: &TrainingSet, space: &HypothesisSpace, loss: &LossTable) -> Result<Hypothesis> {
    check_space(s, space, loss)?;
    let values: Vec<f64> = space.iter().map(|h| empirical_risk(h, s, loss)).collect();
    Ok(space.hypothesis(Argmin::from_values(&values)?.representative))
}

/// ERM over a fixed space as a [`Learner`].
pub struct ErmLearner<'a> {
    pub space: &'a HypothesisSpace,
    pub loss: &'a LossTable,
}

impl Learner for ErmLearner<'_> {
    fn learn(&self, s: &TrainingSet) -> Result<Hypothesis> {
        erm_id(s, self.space, self.loss)
    }
}

/// The nearest-neighbour threshold rule as a [`Learner`].
pub struct NnThresholdLearner<'a> {
    pub x: &'a FeatureSpace,
}

impl Learner for NnThresholdLearner<'_> {
    fn learn(&self, s: &TrainingSet) -> Result<Hypothesis> {
        nn_threshold_learner(s, self.x)
    }
}

/// `K + 1` where the binary learner (fed the φ-projected sample) outputs 2,
/// the ID learner's label elsewhere.
pub fn composite_learner(s: &TrainingSet, a_in: &dyn Learner, a_b: &dyn Learner) -> Result<Hypothesis> {
    let projected = TrainingSet::new(s.samples().iter().map(|&(x, _)| (x, 1)).collect(), 1)?;
    let h_in = a_in.learn(s)?;
    let h_b = a_b.learn(&projected)?;
    if h_in.len() != h_b.len() {
        return Err(LabError::Shape(format!(
            "learners disagree on |X|: {} versus {}",
            h_in.len(),
            h_b.len()
        )));
    }
    let reject = (s.k() + 1) as u8;
    let labels = h_in
        .iter()
        .zip(h_b.iter())
        .map(|(&a, &b)| if b == 2 { reject } else { a })
        .collect();
    Hypothesis::new(labels, s.k())
}

/// Smallest cost of confusing ID with OOD in either direction: the
/// off-diagonal entry of the binary loss seen by the detector.
pub fn projected_confusion_cost(loss: &LossTable) -> f64 {
    let k = loss.k();
    let id_to_ood = (1..=k).map(|y| loss.loss(k + 1, y)).fold(f64::INFINITY, f64::min);
    let ood_to_id = (1..=k).map(|y| loss.loss(y, k + 1)).fold(f64::INFINITY, f64::min);
    id_to_ood.min(ood_to_id)
}

/// `max l / min{l(1, 2), l(2, 1)}` with the denominator read on the binary
/// projection (see [`projected_confusion_cost`]).
pub fn composite_constant(loss: &LossTable) -> f64 {
    let max = loss.values().iter().flatten().copied().fold(0.0, f64::max);
    max / projected_confusion_cost(loss)
}

/// ID risk of the detector `h_b` on the binary projection: ID mass it
/// rejects, weighted by [`projected_confusion_cost`].
pub fn phi_in_risk(h_b: &[u8], domain: &FiniteDomain, loss: &LossTable) -> f64 {
    let cost = projected_confusion_cost(loss);
    domain
        .id_part()
        .marginal()
        .iter()
        .zip(h_b)
        .filter(|(_, &l)| l == 2)
        .map(|(p, _)| p * cost)
        .sum()
}

/// Among members with zero empirical ID risk, minimizes the mean cost of not
/// rejecting the auxiliary points; ties go to the lowest index.
pub fn constrained_reject_learner(
    s: &TrainingSet,
    aux: &[usize],
    space: &HypothesisSpace,
    loss: &LossTable,
) -> Result<Hypothesis> {
    check_space(s, space, loss)?;
    if let Some(x) = aux.iter().find(|&&x| x >= space.n_points()) {
        return Err(LabError::Shape(format!("aux point {x} outside X")));
    }
    let reject = space.k() + 1;
    let mut best: Option<(f64, usize)> = None;
    for (i, h) in space.iter().enumerate() {
        if empirical_risk(h, s, loss) != 0.0 {
            continue;
        }
        let objective = if aux.is_empty() {
            0.0
        } else {
            aux.iter().map(|&x| loss.loss(h[x] as usize, reject)).sum::<f64>() / aux.len() as f64
        };
        if best.is_none_or(|(b, _)| objective < b - PROB_TOL) {
            best = Some((objective, i));
        }
    }
    best.map(|(_, i)| space.hypothesis(i)).ok_or_else(|| {
        LabError::Realizability("no member has zero empirical ID risk on the training sample".into())
    })
}

/// Candidate thresholds of a ranker: midpoints between consecutive distinct
/// scores. A constant ranker yields none.
pub fn midpoint_thresholds(r: &RankingFunction) -> Vec<f64> {
    let mut s = r.scores().to_vec();
    s.sort_by(f64::total_cmp);
    s.dedup();
    s.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}

/// `(ranker index, τ)` pairs from [`midpoint_thresholds`], in ranker order.
pub fn threshold_pairs(rankers: &[RankingFunction]) -> Vec<(usize, f64)> {
    rankers
        .iter()
        .enumerate()
        .flat_map(|(i, r)| midpoint_thresholds(r).into_iter().map(move |t| (i, t)))
        .collect()
}

/// A ranker with its rejection threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdedRanker {
    pub ranker_index: usize,
    pub ranker: RankingFunction,
    pub tau: f64,
    /// Auxiliary points at or below τ.
    pub rejected_aux: usize,
}

/// Among pairs putting no training point at or below τ, maximizes the number
/// of auxiliary points at or below τ; ties go to the earliest pair.
pub fn constrained_auc_learner(
    s: &TrainingSet,
    aux: &[usize],
    rankers: &[RankingFunction],
    pairs: &[(usize, f64)],
) -> Result<ThresholdedRanker> {
    let mut best: Option<(usize, usize)> = None;
    for (j, &(i, tau)) in pairs.iter().enumerate() {
        let r = rankers
            .get(i)
            .ok_or_else(|| LabError::Shape(format!("pair refers to ranker {i} of {}", rankers.len())))?;
        s.check_points(r.len())?;
        if s.samples().iter().any(|&(x, _)| r.score(x) <= tau) {
            continue;
        }
        let count = aux.iter().filter(|&&x| x < r.len() && r.score(x) <= tau).count();
        if best.is_none_or(|(c, _)| count > c) {
            best = Some((count, j));
        }
    }
    let (count, j) = best.ok_or_else(|| LabError::Infeasible("no (ranker, τ) pair keeps every training point above τ".into()))?;
    let (i, tau) = pairs[j];
    Ok(ThresholdedRanker {
        ranker_index: i,
        ranker: rankers[i].clone(),
        tau,
        rejected_aux: count,
    })
}

/// Squared distance between embedded `(x, y)` pairs: coordinates followed by
/// a one-hot label, so differing labels add 2.
fn embedded_sq(x: &FeatureSpace, a: (usize, usize), b: (usize, usize)) -> f64 {
    let d = x.distance(a.0, b.0);
    d * d + if a.1 == b.1 { 0.0 } else { 2.0 }
}

fn empirical(sample: &[(usize, usize)]) -> BTreeMap<(usize, usize), f64> {
    let mut m = BTreeMap::new();
    let w = 1.0 / sample.len() as f64;
    for &a in sample {
        *m.entry(a).or_insert(0.0) += w;
    }
    m
}

/// Biased (V-statistic) squared MMD with a Gaussian kernel of the given
/// bandwidth between two empirical distributions over `(point, label)`.
pub fn mmd_squared(a: &[(usize, usize)], b: &[(usize, usize)], x: &FeatureSpace, bandwidth: f64) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(LabError::Empty("MMD sample"));
    }
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(LabError::DomainParameter(format!("bandwidth {bandwidth} must be positive")));
    }
    if let Some(p) = a.iter().chain(b).map(|s| s.0).find(|&p| p >= x.len()) {
        return Err(LabError::Shape(format!("sample point {p} outside X")));
    }
    let (pa, pb) = (empirical(a), empirical(b));
    let mut diff = pa.clone();
    for (atom, w) in &pb {
        *diff.entry(*atom).or_insert(0.0) -= w;
    }
    let atoms: Vec<((usize, usize), f64)> = diff.into_iter().filter(|(_, w)| *w != 0.0).collect();
    let denom = 2.0 * bandwidth * bandwidth;
    let mut total = 0.0;
    for &(u, wu) in &atoms {
        for &(v, wv) in &atoms {
            total += wu * wv * (-embedded_sq(x, u, v) / denom).exp();
        }
    }
    Ok(total.max(0.0))
}

pub fn mmd(a: &[(usize, usize)], b: &[(usize, usize)], x: &FeatureSpace, bandwidth: f64) -> Result<f64> {
    mmd_squared(a, b, x, bandwidth).map(f64::sqrt)
}

/// Median pairwise embedded distance over the pooled samples (1 when the
/// median is zero).
pub fn median_bandwidth(samples: &[&[(usize, usize)]], x: &FeatureSpace) -> f64 {
    let pooled: Vec<(usize, usize)> = samples.iter().flat_map(|s| s.iter().copied()).collect();
    let mut d: Vec<f64> = Vec::new();
    for i in 0..pooled.len() {
        for j in i + 1..pooled.len() {
            d.push(embedded_sq(x, pooled[i], pooled[j]).sqrt());
        }
    }
    if d.is_empty() {
        return 1.0;
    }
    d.sort_by(f64::total_cmp);
    let m = d.len();
    let med = if m % 2 == 1 { d[m / 2] } else { 0.5 * (d[m / 2 - 1] + d[m / 2]) };
    if med > 0.0 {
        med
    } else {
        1.0
    }
}

/// Output of a learner, with free-form diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnerOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<Vec<u8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ranker: Option<ThresholdedRanker>,
    pub diagnostics: Diagnostics,
}

/// Dispatch diagnostics; the other learners leave these empty.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical_risk: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub mmd: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chosen_class: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<f64>,
    /// Smallest MMD between two reference samples.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_estimate: Option<f64>,
    /// `√(2 / n_min)`, the scale of the MMD estimation error.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise: Option<f64>,
    /// Set when the separation estimate is under ten times the noise.
    #[serde(default)]
    pub weak_separation: bool,
}

/// One ID class: its stored reference sample and the learner trained for it.
pub struct Reference<'a> {
    pub sample: TrainingSet,
    pub learner: &'a dyn Learner,
}

/// Runs the learner whose reference sample is MMD-closest to `s`; ties go to
/// the lowest class index. `bandwidth = None` uses [`median_bandwidth`] over
/// the training sample and all references.
pub fn mmd_dispatch_learner(
    s: &TrainingSet,
    references: &[Reference<'_>],
    x: &FeatureSpace,
    bandwidth: Option<f64>,
) -> Result<LearnerOutput> {
    if references.is_empty() {
        return Err(LabError::Empty("reference list"));
    }
    let sigma = match bandwidth {
        Some(b) => b,
        None => {
            let mut all: Vec<&[(usize, usize)]> = vec![s.samples()];
            all.extend(references.iter().map(|r| r.sample.samples()));
            median_bandwidth(&all, x)
        }
    };
    let distances = references
        .iter()
        .map(|r| mmd(s.samples(), r.sample.samples(), x, sigma))
        .collect::<Result<Vec<_>>>()?;
    let chosen = Argmin::from_values(&distances)?.representative;
    let mut c = f64::INFINITY;
    for i in 0..references.len() {
        for j in i + 1..references.len() {
            c = c.min(mmd(references[i].sample.samples(), references[j].sample.samples(), x, sigma)?);
        }
    }
    let n_min = references.iter().map(|r| r.sample.len()).chain([s.len()]).min().unwrap_or(1).max(1);
    let noise = (2.0 / n_min as f64).sqrt();
    let h = references[chosen].learner.learn(s)?;
    Ok(LearnerOutput {
        hypothesis: Some(h.into_labels()),
        ranker: None,
        diagnostics: Diagnostics {
            mmd: distances,
            chosen_class: Some(chosen),
            bandwidth: Some(sigma),
            c_estimate: c.is_finite().then_some(c),
            noise: Some(noise),
            weak_separation: c.is_finite() && c < 10.0 * noise,
            ..Diagnostics::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{IdJoint, OodMarginal};
    use crate::hypothesis::exhaustive_labelings;
    use crate::loss::{risk_in, risk_out};

    fn line(n: usize) -> FeatureSpace {
        FeatureSpace::line(n).unwrap()
    }

    #[test]
    fn nn_rule_examples() {
        let s = TrainingSet::new(vec![(0, 1)], 1).unwrap();
        assert_eq!(nn_threshold_learner(&s, &line(3)).unwrap().labels(), &[1, 2, 2]);
        assert!(matches!(
            nn_threshold_learner(&TrainingSet::new(vec![], 1).unwrap(), &line(3)),
            Err(LabError::Empty(_))
        ));
    }

    #[test]
    fn rate_bound_value() {
        let expected = 0.5 + 1.0 / (8.0 * std::f64::consts::E);
        assert!((nn_rate_bound(1, 16) - expected).abs() < 1e-15);
        assert!((1..10_000).all(|n| nn_rate_bound(2, n + 1) < nn_rate_bound(2, n)));
    }

    #[test]
    fn erm_majority_constant() {
        let loss = LossTable::zero_one(2);
        let consts = HypothesisSpace::from_members(3, 2, vec![vec![1; 3], vec![2; 3]]).unwrap();
        let s = TrainingSet::new(vec![(0, 2), (1, 2), (2, 1)], 2).unwrap();
        assert_eq!(erm_id(&s, &consts, &loss).unwrap().labels(), &[2, 2, 2]);
        let single = HypothesisSpace::from_members(3, 2, vec![vec![3; 3]]).unwrap();
        assert_eq!(erm_id(&s, &single, &loss).unwrap().labels(), &[3, 3, 3]);
    }

    #[test]
    fn composite_extremes() {
        let loss = LossTable::zero_one(1);
        let space = exhaustive_labelings(3, 1).unwrap();
        let s = TrainingSet::new(vec![(1, 1)], 1).unwrap();
        let erm = ErmLearner { space: &space, loss: &loss };
        let accept = |_: &TrainingSet| Ok(Hypothesis::constant(3, 1));
        let reject = |_: &TrainingSet| Ok(Hypothesis::constant(3, 2));
        assert_eq!(composite_learner(&s, &erm, &accept).unwrap(), erm.learn(&s).unwrap());
        assert_eq!(composite_learner(&s, &erm, &reject).unwrap().labels(), &[2, 2, 2]);
        assert_eq!(composite_constant(&loss), 1.0);
    }

    #[test]
    fn constrained_reject_examples() {
        let loss = LossTable::zero_one(1);
        let space = exhaustive_labelings(4, 1).unwrap();
        let s = TrainingSet::new(vec![(0, 1)], 1).unwrap();
        let h = constrained_reject_learner(&s, &[0, 2, 3], &space, &loss).unwrap();
        assert_eq!(h.labels(), &[1, 1, 2, 2]);
        let h = constrained_reject_learner(&s, &[], &space, &loss).unwrap();
        assert_eq!(h.labels(), &[1, 1, 1, 1]);
        let h = constrained_reject_learner(&s, &[0, 1, 2, 3], &space, &loss).unwrap();
        assert_eq!(h.labels(), &[1, 2, 2, 2]);
        let none = HypothesisSpace::from_members(4, 1, vec![vec![2; 4]]).unwrap();
        assert!(matches!(
            constrained_reject_learner(&s, &[], &none, &loss),
            Err(LabError::Realizability(_))
        ));
    }

    #[test]
    fn constrained_auc_examples() {
        let rankers: Vec<RankingFunction> = (0..3)
            .map(|t| RankingFunction::new((0..3).map(|x| if x == t { 1.0 } else { 0.0 }).collect()).unwrap())
            .collect();
        let pairs = threshold_pairs(&rankers);
        let s = TrainingSet::new(vec![(0, 1)], 1).unwrap();
        let out = constrained_auc_learner(&s, &[0, 1, 2], &rankers, &pairs).unwrap();
        assert_eq!(out.ranker_index, 0);
        assert_eq!(out.rejected_aux, 2);
        let out = constrained_auc_learner(&s, &[0], &rankers, &pairs).unwrap();
        assert_eq!((out.ranker_index, out.rejected_aux), (0, 0));
        let consts = vec![RankingFunction::constant(3, 0.3).unwrap()];
        assert!(matches!(
            constrained_auc_learner(&s, &[1], &consts, &threshold_pairs(&consts)),
            Err(LabError::Infeasible(_))
        ));
    }

    #[test]
    fn mmd_closed_forms() {
        let x = FeatureSpace::new(vec![vec![0.0], vec![1.5], vec![100.0], vec![101.0]]).unwrap();
        let a = [(0, 1)];
        let b = [(1, 1)];
        assert_eq!(mmd(&a, &a, &x, 0.7).unwrap(), 0.0);
        let sigma = 0.7;
        let expected = 2.0 * (1.0 - (-(1.5f64 * 1.5) / (2.0 * sigma * sigma)).exp());
        assert!((mmd_squared(&a, &b, &x, sigma).unwrap() - expected).abs() < 1e-12);
        let far = mmd_squared(&[(0, 1), (1, 1)], &[(2, 1), (3, 1)], &x, 0.1).unwrap();
        assert!((far - (2.0 - 2.0 * 0.5)).abs() < 1e-12 || far > 0.99);
        assert!(mmd(&a, &b, &x, 0.0).is_err());
    }

    #[test]
    fn dispatch_exact_on_reference() {
        let x = line(4);
        let ones = |_: &TrainingSet| Ok(Hypothesis::constant(4, 1));
        let twos = |_: &TrainingSet| Ok(Hypothesis::constant(4, 2));
        let refs = vec![
            Reference {
                sample: TrainingSet::new(vec![(0, 1), (1, 1)], 1).unwrap(),
                learner: &ones,
            },
            Reference {
                sample: TrainingSet::new(vec![(2, 1), (3, 1)], 1).unwrap(),
                learner: &twos,
            },
        ];
        let s = refs[1].sample.clone();
        let out = mmd_dispatch_learner(&s, &refs, &x, None).unwrap();
        assert_eq!(out.diagnostics.chosen_class, Some(1));
        assert_eq!(out.diagnostics.mmd[1], 0.0);
        assert_eq!(out.hypothesis.unwrap(), vec![2; 4]);
    }

    #[test]
    fn nn_rule_never_accepts_ood_on_separate_domain() {
        let x = line(4);
        let d = FiniteDomain::new(
            IdJoint::uniform(4, 1, &[(0, 1), (1, 1)]).unwrap(),
            OodMarginal::uniform(4, &[2, 3]).unwrap(),
            0.5,
        )
        .unwrap();
        let loss = LossTable::zero_one(1);
        for seed in 0..20 {
            let s = TrainingSet::sample(&d, 3, seed).unwrap();
            let h = nn_threshold_learner(&s, &x).unwrap();
            assert_eq!(risk_out(&h, &d, &loss).unwrap(), 0.0);
            assert!(risk_in(&h, &d, &loss).unwrap() <= 0.5);
        }
    }
}
